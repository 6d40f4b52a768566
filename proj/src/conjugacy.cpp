#include "hadamard/conjugacy.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <climits>
#include <cmath>
#include <limits>
#include <thread>

#include "hadamard/errors.hpp"

namespace hadamard {

const char* radius_policy_name(RadiusPolicy p) {
  return p == RadiusPolicy::Incremental ? "incremental" : "bound";
}

RadiusPolicy parse_radius_policy(const std::string& name) {
  if (name == "incremental") return RadiusPolicy::Incremental;
  if (name == "bound") return RadiusPolicy::Bound;
  throw ConfigError("unknown radius policy \"" + name + "\"");
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Conjugate:
      return "Conjugate";
    case Verdict::NotConjugateUpTo:
      return "NotConjugateUpTo";
    case Verdict::NotConjugate:
      return "NotConjugate";
  }
  return "?";
}

void SearchConfig::validate() const {
  if (max_radius < 0) throw ConfigError("max_radius must be >= 0");
  if (threads < 1) throw ConfigError("threads must be >= 1");
  if (budget < 1) throw ConfigError("budget must be >= 1");
  if (cstar && !(std::isfinite(*cstar) && *cstar >= 0.0)) {
    throw ConfigError("cstar must be finite and >= 0");
  }
  if (c && !std::isfinite(*c)) throw ConfigError("c must be finite");
}

void ConjugacyInstance::validate() const {
  if (a.empty()) throw InvalidStructure("conjugacy lists must be non-empty");
  if (a.size() != b.size()) {
    throw InvalidStructure("lists A and B have different lengths");
  }
  for (const auto* list : {&a, &b}) {
    for (const Word& w : *list) {
      if (w.rank() != alphabet.rank()) {
        throw AlphabetMismatch("word rank does not match the alphabet");
      }
    }
  }
  if (rho && rho->rank() != alphabet.rank()) {
    throw AlphabetMismatch("representation rank does not match the alphabet");
  }
  if (word_problem == WordProblem::Matrix &&
      (!rho || rho->kind() != RepresentationKind::MatrixOnH2)) {
    throw InvalidStructure("the matrix word problem needs a matrix representation");
  }
  search.validate();
}

std::uint64_t ConjugacyInstance::word_sum() const {
  std::uint64_t s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i].length() + b[i].length();
  return s;
}

namespace {

using IntMat = std::array<std::int64_t, 4>;

std::optional<IntMat> multiply_exact(const IntMat& x, const IntMat& y) {
  IntMat out{};
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      std::int64_t p = 0, q = 0, s = 0;
      if (__builtin_mul_overflow(x[2 * r], y[c], &p) ||
          __builtin_mul_overflow(x[2 * r + 1], y[2 + c], &q) ||
          __builtin_add_overflow(p, q, &s)) {
        return std::nullopt;
      }
      out[static_cast<std::size_t>(2 * r + c)] = s;
    }
  }
  return out;
}

IntMat inverse_exact(const IntMat& x) { return {x[3], -x[1], -x[2], x[0]}; }

bool equal_mod_sign(const IntMat& x, const IntMat& y) {
  return x == y || x == IntMat{-y[0], -y[1], -y[2], -y[3]};
}

bool close_mod_sign(const MatrixIsometry& x, const MatrixIsometry& y) {
  double scale = 1.0, plus = 0.0, minus = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    scale = std::max({scale, std::abs(x.m[i]), std::abs(y.m[i])});
    plus = std::max(plus, std::abs(x.m[i] - y.m[i]));
    minus = std::max(minus, std::abs(x.m[i] + y.m[i]));
  }
  return std::min(plus, minus) <= 1e-9 * scale;
}

// Decides g^-1 a_i g = b_i with the instance's word problem. Read-only after
// construction, so one instance is shared by all search threads.
class Verifier {
 public:
  explicit Verifier(const ConjugacyInstance& inst) : inst_(inst) {
    if (inst.word_problem != WordProblem::Matrix) return;
    for (const auto& g : inst.rho->generators()) {
      gens_.push_back(std::get<MatrixIsometry>(g));
      gens_inv_.push_back(inverse(gens_.back()));
    }
    integral_ = inst.rho->integral();
    if (integral_) {
      for (const auto& g : gens_) {
        int_gens_.push_back({std::llround(g.m[0]), std::llround(g.m[1]),
                             std::llround(g.m[2]), std::llround(g.m[3])});
        int_gens_inv_.push_back(inverse_exact(int_gens_.back()));
      }
    }
    for (std::size_t i = 0; i < inst.a.size(); ++i) {
      a_.push_back(evaluate(inst.a[i]));
      b_.push_back(evaluate(inst.b[i]));
      if (integral_) {
        a_int_.push_back(evaluate_exact(inst.a[i]));
        b_int_.push_back(evaluate_exact(inst.b[i]));
      }
    }
  }

  bool check(const Word& g) const {
    if (inst_.word_problem == WordProblem::Free) {
      for (std::size_t i = 0; i < inst_.a.size(); ++i) {
        if (!(g.inverse() * inst_.a[i] * g == inst_.b[i])) return false;
      }
      return true;
    }
    for (std::size_t i = 0; i < inst_.a.size(); ++i) {
      if (!matrix_equal(g, i)) return false;
    }
    return true;
  }

  Verification transcript(const Word& g) const {
    Verification v{true, {}};
    for (std::size_t i = 0; i < inst_.a.size(); ++i) {
      const Word conj = g.inverse() * inst_.a[i] * g;
      bool eq = conj == inst_.b[i];
      if (!eq && inst_.word_problem == WordProblem::Matrix) eq = matrix_equal(g, i);
      v.transcript.push_back({conj, inst_.b[i], eq});
      v.ok = v.ok && eq;
    }
    return v;
  }

 private:
  MatrixIsometry evaluate(const Word& w) const {
    MatrixIsometry m;
    for (int l : w.letters()) {
      const auto idx = static_cast<std::size_t>(std::abs(l) - 1);
      m = m * (l > 0 ? gens_[idx] : gens_inv_[idx]);
    }
    return m;
  }

  std::optional<IntMat> evaluate_exact(const Word& w) const {
    std::optional<IntMat> m = IntMat{1, 0, 0, 1};
    for (int l : w.letters()) {
      const auto idx = static_cast<std::size_t>(std::abs(l) - 1);
      m = multiply_exact(*m, l > 0 ? int_gens_[idx] : int_gens_inv_[idx]);
      if (!m) return std::nullopt;
    }
    return m;
  }

  bool matrix_equal(const Word& g, std::size_t i) const {
    if (integral_ && a_int_[i] && b_int_[i]) {
      if (const auto mg = evaluate_exact(g)) {
        const auto left = multiply_exact(inverse_exact(*mg), *a_int_[i]);
        const auto conj = left ? multiply_exact(*left, *mg) : std::nullopt;
        if (conj) return equal_mod_sign(*conj, *b_int_[i]);
      }
    }
    const MatrixIsometry mg = evaluate(g);
    return close_mod_sign(inverse(mg) * a_[i] * mg, b_[i]);
  }

  const ConjugacyInstance& inst_;
  bool integral_ = false;
  std::vector<MatrixIsometry> gens_, gens_inv_, a_, b_;
  std::vector<IntMat> int_gens_, int_gens_inv_;
  std::vector<std::optional<IntMat>> a_int_, b_int_;
};

struct PartitionResult {
  std::optional<Word> found;
  std::uint64_t count = 0;  // words examined, including the verifier
};

// Scans the sphere of the given length split by first letter. Returns the
// shortlex-least verifier and the number of words that precede or equal it in
// shortlex order, which does not depend on the thread count.
std::pair<std::optional<Word>, std::uint64_t> scan_sphere(const Verifier& verifier, int rank,
                                                          int length, int threads) {
  if (length == 0) {
    const Word e(rank);
    return {verifier.check(e) ? std::optional<Word>(e) : std::nullopt, 1};
  }
  const int parts = 2 * rank;
  std::vector<PartitionResult> results(static_cast<std::size_t>(parts));
  std::atomic<int> best{INT_MAX};
  auto run = [&](int worker) {
    for (int p = worker; p < parts; p += threads) {
      if (best.load() < p) return;
      SphereEnumerator sphere(rank, length, letter_from_order(p));
      auto& r = results[static_cast<std::size_t>(p)];
      Word w;
      while (sphere.next(w)) {
        ++r.count;
        if (verifier.check(w)) {
          r.found = w;
          int cur = best.load();
          while (p < cur && !best.compare_exchange_weak(cur, p)) {
          }
          break;
        }
        if ((r.count & 1023) == 0 && best.load() < p) return;
      }
    }
  };
  const int workers = std::min(threads, parts);
  if (workers <= 1) {
    run(0);
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < workers; ++t) pool.emplace_back([&run, t] { run(t); });
  }
  std::uint64_t count = 0;
  for (const auto& r : results) {
    count += r.count;
    if (r.found) return {r.found, count};
  }
  return {std::nullopt, count};
}

}  // namespace

Verification verify(const Word& g, const ConjugacyInstance& inst) {
  inst.validate();
  if (g.rank() != inst.alphabet.rank()) {
    throw AlphabetMismatch("conjugator rank does not match the alphabet");
  }
  return Verifier(inst).transcript(g);
}

int search_radius(const ConjugacyInstance& inst, int previous) {
  const SearchConfig& cfg = inst.search;
  if (cfg.policy == RadiusPolicy::Incremental) {
    if (previous < 0) return std::min(1, cfg.max_radius);
    return std::min(std::max(1, 2 * previous), cfg.max_radius);
  }
  if (!cfg.cstar || !cfg.c) {
    throw ConfigError("policy bound needs both cstar and c");
  }
  const double r = std::ceil(*cfg.cstar * static_cast<double>(inst.word_sum()) + *cfg.c);
  if (r <= 0.0) return 0;
  return r >= cfg.max_radius ? cfg.max_radius : static_cast<int>(r);
}

ConjugacyCertificate solve(const ConjugacyInstance& inst) {
  inst.validate();
  const auto start = std::chrono::steady_clock::now();
  const Verifier verifier(inst);
  const int rank = inst.alphabet.rank();
  ConjugacyCertificate cert;
  int done = -1;
  std::uint64_t enumerated = 0;
  std::optional<Word> found;
  for (int radius = search_radius(inst, -1);; radius = search_radius(inst, radius)) {
    if (ball_size(rank, radius) > inst.search.budget) {
      throw BudgetExceeded("ball of radius " + std::to_string(radius) + " exceeds the budget of " +
                               std::to_string(inst.search.budget) + " words",
                           done, enumerated);
    }
    for (int len = done + 1; len <= radius && !found; ++len) {
      auto [g, count] = scan_sphere(verifier, rank, len, inst.search.threads);
      enumerated += count;
      found = std::move(g);
    }
    done = radius;
    if (found || inst.search.policy == RadiusPolicy::Bound || radius >= inst.search.max_radius) {
      break;
    }
  }
  cert.enumerated = enumerated;
  if (found) {
    cert.verdict = Verdict::Conjugate;
    cert.g = found;
    cert.radius = static_cast<int>(found->length());
    cert.transcript = verifier.transcript(*found).transcript;
  } else {
    cert.verdict = Verdict::NotConjugateUpTo;
    cert.radius = done;
    if (inst.word_problem == WordProblem::Free) {
      const auto exact = free_group_oracle(inst);
      if (exact.verdict == Verdict::NotConjugate) {
        cert.verdict = Verdict::NotConjugate;
        cert.proof = exact.proof;
      }
    }
  }
  cert.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return cert;
}

CyclicReduction cyclic_reduction(const Word& w) {
  const auto l = w.letters();
  std::size_t i = 0;
  while (2 * i + 1 < l.size() && l[i] == -l[l.size() - 1 - i]) ++i;
  return {w.slice(0, i), w.slice(i, l.size() - 2 * i)};
}

Word primitive_root(const Word& w) {
  const CyclicReduction cr = cyclic_reduction(w);
  const auto l = cr.core.letters();
  const std::size_t n = l.size();
  for (std::size_t d = 1; d < n; ++d) {
    if (n % d != 0) continue;
    bool periodic = true;
    for (std::size_t i = d; i < n && periodic; ++i) periodic = l[i] == l[i - d];
    if (periodic) return cr.conjugator * cr.core.slice(0, d) * cr.conjugator.inverse();
  }
  return w;
}

std::optional<Word> single_conjugator(const Word& a, const Word& b) {
  if (a.rank() != b.rank()) throw AlphabetMismatch("words of different rank");
  const CyclicReduction ca = cyclic_reduction(a);
  const CyclicReduction cb = cyclic_reduction(b);
  const std::size_t n = ca.core.length();
  if (n != cb.core.length()) return std::nullopt;
  // core_b = p^-1 core_a p with p the length-k prefix of core_a; then
  // g = u p v^-1 where a = u core_a u^-1 and b = v core_b v^-1.
  const auto la = ca.core.letters();
  const auto lb = cb.core.letters();
  for (std::size_t k = 0; k < std::max<std::size_t>(n, 1); ++k) {
    bool match = true;
    for (std::size_t i = 0; i < n && match; ++i) match = lb[i] == la[(i + k) % n];
    if (match) return ca.conjugator * ca.core.slice(0, k) * cb.conjugator.inverse();
  }
  return std::nullopt;
}

std::optional<OracleSetup> oracle_setup(const ConjugacyInstance& inst) {
  std::size_t k = 0;
  while (k < inst.a.size() && inst.a[k].is_identity()) ++k;
  if (k == inst.a.size()) return std::nullopt;
  const auto g0 = single_conjugator(inst.a[k], inst.b[k]);
  if (!g0) return std::nullopt;
  const Word z = primitive_root(inst.b[k]);
  // z = w r w^-1 with r cyclically reduced, so conjugation by z^m grows words
  // by about 2|m||r| once |m| passes the cancellation allowance.
  const CyclicReduction cz = cyclic_reduction(z);
  std::size_t worst = 0;
  for (std::size_t i = 0; i < inst.a.size(); ++i) {
    const Word c = g0->inverse() * inst.a[i] * *g0;
    worst = std::max(worst, c.length() + inst.b[i].length());
  }
  const double r = static_cast<double>(cz.core.length());
  const double raw = static_cast<double>(worst + 4 * cz.conjugator.length()) / (2.0 * r);
  return OracleSetup{k, *g0, z, static_cast<long>(std::ceil(raw)) + 2};
}

ConjugacyCertificate free_group_oracle(const ConjugacyInstance& inst) {
  inst.validate();
  if (inst.word_problem != WordProblem::Free) {
    throw CapabilityError("the exact oracle only decides free-group instances");
  }
  const auto start = std::chrono::steady_clock::now();
  ConjugacyCertificate cert;
  cert.verdict = Verdict::NotConjugate;
  auto finish = [&]() {
    cert.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return cert;
  };
  for (std::size_t i = 0; i < inst.a.size(); ++i) {
    if (inst.a[i].is_identity() != inst.b[i].is_identity()) {
      cert.proof = "identity-mismatch at index " + std::to_string(i);
      return finish();
    }
  }
  const Verifier verifier(inst);
  const auto setup = oracle_setup(inst);
  if (!setup) {
    if (std::all_of(inst.a.begin(), inst.a.end(), [](const Word& w) { return w.is_identity(); })) {
      const Word e(inst.alphabet.rank());
      cert.verdict = Verdict::Conjugate;
      cert.g = e;
      cert.enumerated = 1;
      cert.transcript = verifier.transcript(e).transcript;
      return finish();
    }
    std::size_t k = 0;
    while (inst.a[k].is_identity()) ++k;
    cert.proof = "cyclic-words-differ at index " + std::to_string(k);
    return finish();
  }
  for (long step = 0; step <= 2 * setup->m_max; ++step) {
    const long m = step % 2 == 0 ? -(step / 2) : (step + 1) / 2;
    const Word g = setup->g0 * setup->z.power(m);
    ++cert.enumerated;
    if (verifier.check(g)) {
      cert.verdict = Verdict::Conjugate;
      cert.g = g;
      cert.transcript = verifier.transcript(g).transcript;
      return finish();
    }
  }
  cert.proof = "centralizer-exhausted at index " + std::to_string(setup->k);
  return finish();
}

OrbitBoundReport orbit_bound_report(const ConjugacyInstance& inst, const Point& y,
                                    const std::optional<Word>& g) {
  inst.validate();
  if (!inst.rho) throw InvalidStructure("orbit_bound_report needs a representation");
  const Representation& rho = *inst.rho;
  rho.target().check(y);
  const Word e(rho.rank());
  OrbitBoundReport rep;
  rep.word_sum = inst.word_sum();
  for (std::size_t i = 0; i < inst.a.size(); ++i) {
    rep.orbit_sum += orbit_distance(rho, y, inst.a[i], e) + orbit_distance(rho, y, inst.b[i], e);
  }
  if (g && rep.orbit_sum > 0.0) rep.ratio = orbit_distance(rho, y, *g, e) / rep.orbit_sum;
  return rep;
}

}  // namespace hadamard
