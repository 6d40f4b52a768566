#include "hadamard/word.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>

#include "hadamard/errors.hpp"

namespace hadamard {

namespace {

void check_letter(int rank, int letter) {
  if (letter == 0 || std::abs(letter) > rank) {
    throw AlphabetMismatch("letter " + std::to_string(letter) +
                           " outside alphabet of rank " +
                           std::to_string(rank));
  }
}

bool cancels(int a, int b) { return a == -b; }

}  // namespace

Word::Word(int rank) : rank_(rank) {
  if (rank < 0) throw DomainError("negative alphabet rank");
}

Word Word::from_letters(int rank, std::span<const int> letters) {
  Word w(rank);
  w.letters_.reserve(letters.size());
  for (int l : letters) {
    check_letter(rank, l);
    if (!w.letters_.empty() && cancels(w.letters_.back(), l)) {
      w.letters_.pop_back();
    } else {
      w.letters_.push_back(l);
    }
  }
  return w;
}

Word Word::generator(int rank, int index) {
  const int l = index;
  return from_letters(rank, std::span<const int>(&l, 1));
}

Word Word::inverse() const {
  Word w(rank_);
  w.letters_.resize(letters_.size());
  std::transform(letters_.rbegin(), letters_.rend(), w.letters_.begin(),
                 [](int l) { return -l; });
  return w;
}

Word Word::power(long exponent) const {
  Word base = exponent < 0 ? inverse() : *this;
  Word result(rank_);
  for (long k = 0; k < std::labs(exponent); ++k) result = result * base;
  return result;
}

Word Word::slice(std::size_t pos, std::size_t count) const {
  Word w(rank_);
  if (pos > letters_.size()) throw DomainError("slice outside word");
  count = std::min(count, letters_.size() - pos);
  w.letters_.assign(letters_.begin() + static_cast<long>(pos),
                    letters_.begin() + static_cast<long>(pos + count));
  return w;
}

Word operator*(const Word& a, const Word& b) {
  if (a.rank_ != b.rank_) {
    throw AlphabetMismatch("multiplying words over alphabets of rank " +
                           std::to_string(a.rank_) + " and " +
                           std::to_string(b.rank_));
  }
  std::size_t cancel = 0;
  const std::size_t na = a.letters_.size();
  const std::size_t nb = b.letters_.size();
  while (cancel < na && cancel < nb &&
         cancels(a.letters_[na - 1 - cancel], b.letters_[cancel])) {
    ++cancel;
  }
  Word w(a.rank_);
  w.letters_.reserve(na + nb - 2 * cancel);
  w.letters_.insert(w.letters_.end(), a.letters_.begin(),
                    a.letters_.end() - static_cast<long>(cancel));
  w.letters_.insert(w.letters_.end(),
                    b.letters_.begin() + static_cast<long>(cancel),
                    b.letters_.end());
  return w;
}

std::strong_ordering operator<=>(const Word& a, const Word& b) {
  if (auto c = a.letters_.size() <=> b.letters_.size(); c != 0) return c;
  for (std::size_t i = 0; i < a.letters_.size(); ++i) {
    const int oa = letter_order(a.letters_[i]);
    const int ob = letter_order(b.letters_[i]);
    if (oa != ob) return oa <=> ob;
  }
  return a.rank_ <=> b.rank_;
}

Word multiply(const Word& a, const Word& b) { return a * b; }

std::size_t word_length(const Word& g) { return g.length(); }

int letter_order(int letter) {
  return letter > 0 ? 2 * (letter - 1) : 2 * (-letter - 1) + 1;
}

int letter_from_order(int order) {
  return order % 2 == 0 ? order / 2 + 1 : -(order / 2 + 1);
}

// ---------------------------------------------------------------------------

Alphabet::Alphabet(std::string names) : names_(std::move(names)) {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    const char c = names_[i];
    if (c < 'a' || c > 'z') {
      throw ParseError(std::string("generator name '") + c +
                       "' is not a lowercase letter");
    }
    if (names_.find(c) != i) {
      throw ParseError(std::string("generator name '") + c + "' repeated");
    }
  }
}

Alphabet Alphabet::standard(int rank) {
  if (rank < 0 || rank > 26) throw DomainError("alphabet rank must be 0..26");
  std::string names;
  for (int i = 0; i < rank; ++i) names.push_back(static_cast<char>('a' + i));
  return Alphabet(std::move(names));
}

Alphabet Alphabet::infer(int rank, std::span<const std::string> words) {
  if (rank < 0 || rank > 26) throw DomainError("alphabet rank must be 0..26");
  std::string used;
  for (const auto& w : words) {
    for (char c : w) {
      if (!std::isalpha(static_cast<unsigned char>(c))) continue;
      const char lower =
          static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      if (used.find(lower) == std::string::npos) used.push_back(lower);
    }
  }
  if (static_cast<int>(used.size()) > rank) {
    throw AlphabetMismatch("words use " + std::to_string(used.size()) +
                           " distinct generators but rank is " +
                           std::to_string(rank));
  }
  for (char c = 'a'; static_cast<int>(used.size()) < rank; ++c) {
    if (used.find(c) == std::string::npos) used.push_back(c);
  }
  std::sort(used.begin(), used.end());
  return Alphabet(std::move(used));
}

Word Alphabet::parse(std::string_view text) const {
  // "e" and "1" denote the identity unless 'e' is a generator name.
  if (text == "1" || (text == "e" && names_.find('e') == std::string::npos)) {
    return Word(rank());
  }
  std::vector<int> letters;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    const bool upper = std::isupper(static_cast<unsigned char>(c));
    const char lower =
        static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    const auto pos = names_.find(lower);
    if (!std::isalpha(static_cast<unsigned char>(c)) ||
        pos == std::string::npos) {
      throw AlphabetMismatch(std::string("letter '") + c +
                             "' not in alphabet \"" + names_ + "\"");
    }
    const int index = static_cast<int>(pos) + 1;
    letters.push_back(upper ? -index : index);
  }
  return Word::from_letters(rank(), letters);
}

std::string Alphabet::format(const Word& w) const {
  if (w.rank() != rank()) {
    throw AlphabetMismatch("word rank " + std::to_string(w.rank()) +
                           " does not match alphabet \"" + names_ + "\"");
  }
  std::string out;
  out.reserve(w.length());
  for (int l : w.letters()) {
    const char c = names_[static_cast<std::size_t>(std::abs(l) - 1)];
    out.push_back(l > 0 ? c
                        : static_cast<char>(
                              std::toupper(static_cast<unsigned char>(c))));
  }
  return out;
}

// ---------------------------------------------------------------------------

SphereEnumerator::SphereEnumerator(int rank, int length, int first_letter)
    : rank_(rank), length_(length), first_letter_(first_letter) {
  if (rank < 0 || length < 0) throw DomainError("negative rank or length");
  if (first_letter != 0) check_letter(rank, first_letter);
}

bool SphereEnumerator::fill_from(std::size_t pos) {
  for (std::size_t i = pos; i < orders_.size(); ++i) {
    int o = 0;
    if (i > 0) {
      while (cancels(letter_from_order(o), letter_from_order(orders_[i - 1])))
        ++o;
    }
    if (o >= 2 * rank_) return false;
    orders_[i] = o;
  }
  return true;
}

bool SphereEnumerator::advance_from(std::size_t pos) {
  for (std::size_t i = pos + 1; i-- > 0;) {
    if (i == 0 && first_letter_ != 0) return false;
    for (int o = orders_[i] + 1; o < 2 * rank_; ++o) {
      if (i > 0 &&
          cancels(letter_from_order(o), letter_from_order(orders_[i - 1]))) {
        continue;
      }
      orders_[i] = o;
      return fill_from(i + 1);
    }
  }
  return false;
}

bool SphereEnumerator::next(Word& out) {
  if (done_) return false;
  if (!started_) {
    started_ = true;
    if (length_ == 0) {
      done_ = true;
      if (first_letter_ != 0) return false;
      out = Word(rank_);
      return true;
    }
    if (rank_ == 0) {
      done_ = true;
      return false;
    }
    orders_.assign(static_cast<std::size_t>(length_), 0);
    if (first_letter_ != 0) orders_[0] = letter_order(first_letter_);
    if (!fill_from(first_letter_ != 0 ? 1 : 0)) {
      done_ = true;
      return false;
    }
  } else if (length_ == 0 || !advance_from(orders_.size() - 1)) {
    done_ = true;
    return false;
  }
  std::vector<int> letters(orders_.size());
  std::transform(orders_.begin(), orders_.end(), letters.begin(),
                 letter_from_order);
  out = Word::from_letters(rank_, letters);
  return true;
}

BallEnumerator::BallEnumerator(int rank, int radius)
    : rank_(rank), radius_(radius), sphere_(rank, 0) {
  if (radius < 0) throw DomainError("negative radius");
}

std::optional<Word> BallEnumerator::next() {
  Word w;
  while (current_length_ <= radius_) {
    if (sphere_.next(w)) return w;
    ++current_length_;
    if (current_length_ > radius_) break;
    sphere_ = SphereEnumerator(rank_, current_length_);
  }
  return std::nullopt;
}

std::uint64_t sphere_size(int rank, int length) {
  if (length == 0) return 1;
  if (rank == 0) return 0;
  std::uint64_t n = 2 * static_cast<std::uint64_t>(rank);
  for (int k = 1; k < length; ++k) n *= 2 * static_cast<std::uint64_t>(rank) - 1;
  return n;
}

std::uint64_t ball_size(int rank, int radius) {
  std::uint64_t total = 0;
  for (int k = 0; k <= radius; ++k) total += sphere_size(rank, k);
  return total;
}

}  // namespace hadamard
