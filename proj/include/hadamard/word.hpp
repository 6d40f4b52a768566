#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hadamard {

/// A freely reduced word in the free group of the given rank.
///
/// Letters are signed generator indices: `i` in 1..rank is the i-th
/// generator, `-i` its inverse. The empty word is the identity. Every
/// constructor reduces, so two words denote the same free-group element iff
/// they compare equal.
class Word {
 public:
  Word() = default;
  explicit Word(int rank);

  static Word from_letters(int rank, std::span<const int> letters);
  static Word generator(int rank, int index);

  int rank() const { return rank_; }
  std::size_t length() const { return letters_.size(); }
  bool is_identity() const { return letters_.empty(); }
  std::span<const int> letters() const { return letters_; }

  Word inverse() const;
  Word power(long exponent) const;

  /// Sub-word of the reduced form, `[pos, pos + count)`.
  Word slice(std::size_t pos, std::size_t count) const;

  friend Word operator*(const Word& a, const Word& b);
  friend bool operator==(const Word& a, const Word& b) = default;

  /// Shortlex order: length first, then lexicographic with a < A < b < B < ...
  friend std::strong_ordering operator<=>(const Word& a, const Word& b);

 private:
  int rank_ = 0;
  std::vector<int> letters_;
};

Word multiply(const Word& a, const Word& b);
std::size_t word_length(const Word& g);

/// Position of a letter in the shortlex letter order (0 .. 2*rank-1).
int letter_order(int letter);
int letter_from_order(int order);

/// Generator names. Generator i (1-based) prints as `names()[i-1]`, its
/// inverse as the uppercase form.
class Alphabet {
 public:
  Alphabet() = default;
  explicit Alphabet(std::string names);

  /// "abc..." for the given rank.
  static Alphabet standard(int rank);

  /// Rank-`rank` alphabet whose names are the distinct letters used in
  /// `words` (sorted), padded with the first unused letters from 'a'.
  static Alphabet infer(int rank, std::span<const std::string> words);

  int rank() const { return static_cast<int>(names_.size()); }
  const std::string& names() const { return names_; }

  Word parse(std::string_view text) const;
  std::string format(const Word& w) const;

  friend bool operator==(const Alphabet&, const Alphabet&) = default;

 private:
  std::string names_;
};

/// Shortlex enumeration of the reduced words of one length. Depth-first
/// odometer, O(length) memory. With `first_letter != 0` only words that
/// start with that letter are produced (partition for parallel scans).
class SphereEnumerator {
 public:
  SphereEnumerator(int rank, int length, int first_letter = 0);

  /// Writes the next word into `out`; false once exhausted.
  bool next(Word& out);

 private:
  bool advance_from(std::size_t pos);
  bool fill_from(std::size_t pos);

  int rank_;
  int length_;
  int first_letter_;
  bool started_ = false;
  bool done_ = false;
  std::vector<int> orders_;
};

/// Every reduced word of length <= radius exactly once, in shortlex order.
class BallEnumerator {
 public:
  BallEnumerator(int rank, int radius);

  std::optional<Word> next();

 private:
  int rank_;
  int radius_;
  int current_length_ = 0;
  SphereEnumerator sphere_;
};

/// 1 + sum_{k=1..radius} 2n(2n-1)^(k-1).
std::uint64_t ball_size(int rank, int radius);
std::uint64_t sphere_size(int rank, int length);

}  // namespace hadamard
