#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hadamard/representation.hpp"
#include "hadamard/word.hpp"

namespace hadamard {

/// How equality of group elements is decided during verification.
enum class WordProblem {
  /// Free reduction in the free group on the alphabet.
  Free,
  /// Equality of rho-images in PSL(2, R): exact on integer matrices, else
  /// within 1e-9 relative to the largest entry.
  Matrix,
};

enum class RadiusPolicy { Incremental, Bound };

const char* radius_policy_name(RadiusPolicy p);
RadiusPolicy parse_radius_policy(const std::string& name);

struct SearchConfig {
  RadiusPolicy policy = RadiusPolicy::Incremental;
  std::optional<double> cstar;
  std::optional<double> c;
  int max_radius = 10;
  /// Largest number of words a search may plan to enumerate.
  std::uint64_t budget = 20'000'000;
  int threads = 1;

  void validate() const;
};

struct ConjugacyInstance {
  Alphabet alphabet;
  std::vector<Word> a;
  std::vector<Word> b;
  std::optional<Representation> rho;
  WordProblem word_problem = WordProblem::Free;
  SearchConfig search{};

  /// Throws InvalidStructure for empty or unequal lists (or a Matrix word
  /// problem without a matrix representation) and AlphabetMismatch for words
  /// or a representation of another rank.
  void validate() const;

  /// Sum of |a_i| + |b_i|.
  std::uint64_t word_sum() const;
};

enum class Verdict { Conjugate, NotConjugateUpTo, NotConjugate };

const char* verdict_name(Verdict v);

struct TranscriptEntry {
  /// Reduced g^-1 a_i g.
  Word conjugate;
  Word expected;
  bool equal;
};

struct Verification {
  bool ok = false;
  std::vector<TranscriptEntry> transcript;
};

struct ConjugacyCertificate {
  Verdict verdict = Verdict::NotConjugateUpTo;
  std::optional<Word> g;
  /// Radius of the ball fully searched (0 for the oracle).
  int radius = 0;
  /// Reason for a NotConjugate verdict.
  std::string proof;
  std::vector<TranscriptEntry> transcript;
  std::uint64_t enumerated = 0;
  double seconds = 0.0;
};

Verification verify(const Word& g, const ConjugacyInstance& inst);

/// Under Bound, ceil(cstar * word_sum + c) clamped to [0, max_radius]. Under
/// Incremental, the radius after `previous` in the schedule 1, 2, 4, ...
/// capped at max_radius (pass -1 for the first).
int search_radius(const ConjugacyInstance& inst, int previous = -1);

/// Shortlex search of the ball; the first verifying g is the shortlex-least
/// conjugator within the searched radius. Free instances that fail the search
/// are handed to the exact oracle, which may upgrade the verdict to
/// NotConjugate. Throws BudgetExceeded before a round whose ball would
/// exceed the budget.
ConjugacyCertificate solve(const ConjugacyInstance& inst);

/// Exact decision in the free group by cyclic reduction and rotation
/// matching. Throws CapabilityError for a Matrix word problem.
ConjugacyCertificate free_group_oracle(const ConjugacyInstance& inst);

/// Pieces of the free-group oracle, exposed for testing.
struct CyclicReduction {
  Word conjugator;  // w with word = w * core * w^-1
  Word core;        // cyclically reduced
};
CyclicReduction cyclic_reduction(const Word& w);

/// Shortest r with w = r^k for some k >= 1. Identity maps to identity.
Word primitive_root(const Word& w);

/// Some g with g^-1 a g = b, or empty when a and b are not conjugate.
std::optional<Word> single_conjugator(const Word& a, const Word& b);

struct OracleSetup {
  /// Index of the first nontrivial a_k.
  std::size_t k;
  Word g0;
  /// Primitive root of b_k; every solution of g^-1 a_k g = b_k is g0 z^m.
  Word z;
  long m_max;
};

/// Empty when some a_k is not conjugate to b_k or every a_i is trivial.
std::optional<OracleSetup> oracle_setup(const ConjugacyInstance& inst);

struct OrbitBoundReport {
  double orbit_sum = 0.0;
  std::uint64_t word_sum = 0;
  /// d_y(g, e) / orbit_sum, when g is given and orbit_sum > 0.
  std::optional<double> ratio;
};

/// Requires inst.rho. Orbit distances are measured at y.
OrbitBoundReport orbit_bound_report(const ConjugacyInstance& inst, const Point& y,
                                    const std::optional<Word>& g = {});

}  // namespace hadamard
