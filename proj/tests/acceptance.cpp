// Acceptance gate: one PASS/FAIL line per criterion, non-zero exit on failure.

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "brute_force.hpp"
#include "fixtures.hpp"
#include "hadamard/conjugacy.hpp"
#include "hadamard/equivariant.hpp"
#include "hadamard/harmonic.hpp"
#include "hadamard/seed.hpp"

using namespace hadamard;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

struct NamedSpace {
  std::string name;
  Space space;
};

std::vector<NamedSpace> comparison_spaces() {
  return {{"euclidean-2", Space::euclidean(2)},
          {"euclidean-5", Space::euclidean(5)},
          {"hyperbolic", Space::hyperbolic_plane()},
          {"tree-20", fixtures::random_tree_20()},
          {"spider-12", fixtures::spider()}};
}

const MatrixIsometry kAxis{{std::numbers::e, 0.0, 0.0, 1.0 / std::numbers::e}};

Point off_axis(double t, double along = 0.0) {
  return HyperbolicPoint{{std::cosh(t) * std::cosh(along), std::cosh(t) * std::sinh(along),
                          std::sinh(t)}};
}

// Runs body(i) for i in [0, n) on `threads` workers with strided indices.
void parallel_for(int n, int threads, const std::function<void(int)>& body) {
  std::vector<std::jthread> pool;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      for (int i = t; i < n; i += threads) body(i);
    });
  }
}

int hardware_threads() { return std::max(1u, std::min(8u, std::thread::hardware_concurrency())); }

Outcome criterion_1() {
  const auto t0 = Clock::now();
  Outcome out;
  std::ostringstream d;
  for (const auto& [name, space] : comparison_spaces()) {
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const PointSampler sampler;
    double lo = INFINITY, hi = -INFINITY;
    for (int i = 0; i < 10000; ++i) {
      const Point p = sampler(space, rng), q = sampler(space, rng), r = sampler(space, rng);
      const double defect = triangle_defect(space, p, q, r, unit(rng));
      lo = std::min(lo, defect);
      hi = std::max(hi, defect);
    }
    bool ok = lo >= -kDefectTolerance;
    if (space.kind() == ModelKind::Euclidean) ok = ok && hi <= kDefectTolerance;
    out.pass = out.pass && ok;
    d << name << " min " << fmt(lo) << (ok ? "" : " FAILED") << "; ";
  }
  const double secs = seconds_since(t0);
  out.pass = out.pass && secs < 10.0;
  d << fmt(secs) << " s";
  out.detail = d.str();
  return out;
}

Outcome criterion_2() {
  const auto t0 = Clock::now();
  Outcome out;
  std::ostringstream d;
  for (const auto& [name, space] : comparison_spaces()) {
    std::mt19937_64 rng(202);
    const PointSampler sampler;
    double quad = INFINITY, conv = INFINITY;
    for (int i = 0; i < 10000; ++i) {
      const Point p = sampler(space, rng), q = sampler(space, rng), r = sampler(space, rng),
                  s = sampler(space, rng);
      for (int a = 0; a <= 4; ++a) {
        const double t = a / 4.0;
        conv = std::min(conv, distance_convexity_defect(space, p, q, r, s, t));
        for (int b = 0; b <= 4; ++b) {
          quad = std::min(quad, quadrilateral_defect(space, p, q, r, s, t, b / 4.0));
        }
      }
    }
    const bool ok = quad >= -kDefectTolerance && conv >= -kDefectTolerance;
    out.pass = out.pass && ok;
    d << name << " quad " << fmt(quad) << " conv " << fmt(conv) << (ok ? "" : " FAILED") << "; ";
  }
  const double secs = seconds_since(t0);
  out.pass = out.pass && secs < 60.0;
  d << fmt(secs) << " s";
  out.detail = d.str();
  return out;
}

Outcome criterion_3() {
  Outcome out;
  std::ostringstream d;
  std::vector<double> grid;
  for (int i = 0; i <= 10; ++i) grid.push_back(i / 10.0);
  const PointSampler sampler;
  for (const auto& rho : fixtures::sample_reps()) {
    std::mt19937_64 rng(303);
    long failures = 0;
    for (int i = 0; i < 1000; ++i) {
      auto sample = [&] {
        return EquivariantMap(fixtures::theta_graph(), rho,
                              {sampler(rho.target(), rng), sampler(rho.target(), rng)});
      };
      const EquivariantMap u = sample();
      const EquivariantMap v = sample();
      for (const auto& row : convexity_report(GeodesicHomotopy(u, v), grid)) {
        if (!row.length_ok || !row.energy_ok) ++failures;
      }
    }
    out.pass = out.pass && failures == 0;
    d << representation_kind_name(rho.kind()) << " " << failures << " failures; ";
  }
  out.detail = d.str();
  return out;
}

// Checks the per-result identities; returns a description of the first
// violation or an empty string.
std::string harmonic_identities(const HarmonicResult& r, std::uint64_t seed) {
  const auto lengths = edge_lengths(r.map);
  const auto energies = edge_energies(r.map);
  for (std::size_t e = 0; e < lengths.size(); ++e) {
    const double len = r.map.graph().edges()[e].length;
    const double l2 = lengths[e] * lengths[e];
    if (std::abs(l2 - energies[e] * len) > 1e-12 * std::max(l2, 1e-300)) return "L^2 != E len";
  }
  for (std::size_t i = 1; i < r.energy_trace.size(); ++i) {
    if (r.energy_trace[i] > r.energy_trace[i - 1]) return "energy trace increased";
  }
  const double probe = stationarity_probe(r.map, seed, 16, 1e-6);
  if (probe > 1e-10) return "stationarity probe improved F by " + fmt(probe);
  return {};
}

Outcome criterion_4() {
  Outcome out;
  std::vector<Representation> reps = fixtures::sample_reps();
  reps.push_back(Representation::matrices({kAxis}));
  const PointSampler sampler{1.0, 2.0, 2};
  int checked = 0;
  for (const auto& rho : reps) {
    std::mt19937_64 rng(404);
    for (int i = 0; i < 10; ++i) {
      const EquivariantMap u0 =
          rho.rank() == 2 ? EquivariantMap(fixtures::theta_graph(), rho,
                                           {sampler(rho.target(), rng), sampler(rho.target(), rng)})
                          : build_bouquet_map(rho, sampler(rho.target(), rng));
      const HarmonicResult r = relax(u0);
      const std::string bad = r.converged ? harmonic_identities(r, derive_seed(404, checked))
                                          : std::string("did not converge");
      ++checked;
      if (!bad.empty()) {
        out.pass = false;
        out.detail += std::string(representation_kind_name(rho.kind())) + ": " + bad + "; ";
      }
    }
  }
  out.detail += std::to_string(checked) + " relax results checked";
  return out;
}

Outcome criterion_5() {
  Outcome out;
  const auto rho = Representation::matrices({kAxis});
  std::mt19937_64 rng(505);
  const PointSampler sampler{1.0, 3.0, 2};
  const HarmonicResult r1 = relax(build_bouquet_map(rho, sampler(rho.target(), rng)));
  const HarmonicResult r2 = relax(build_bouquet_map(rho, sampler(rho.target(), rng)));
  std::vector<double> grid;
  for (int i = 0; i <= 10; ++i) grid.push_back(i / 10.0);
  const auto rep = verify_harmonic_homotopy(r1, r2, grid);
  double dev = 0.0;
  for (const auto& row : rep.rows) dev = std::max(dev, std::abs(row.energy - 4.0));
  const double gap = dist(rho.target(), r1.map.images()[0], r2.map.images()[0]);
  out.pass = r1.converged && r2.converged && std::abs(r1.E_star - 4.0) <= 1e-6 &&
             std::abs(r2.E_star - 4.0) <= 1e-6 && dev <= 1e-6 && gap > 1e-3;
  out.detail = "E1 " + fmt(r1.E_star) + ", E2 " + fmt(r2.E_star) + ", max |E(H_s) - 4| " +
               fmt(dev) + ", distance between minimisers " + fmt(gap);
  return out;
}

Outcome criterion_6() {
  Outcome out;
  std::ostringstream d;
  const std::vector<std::pair<std::string, Representation>> targets{
      {"cayley2", Representation::free_on_cayley_tree(2)},
      {"modular", Representation::matrices({MatrixIsometry{{2.0, 1.0, 1.0, 1.0}},
                                            MatrixIsometry{{1.0, 1.0, 1.0, 2.0}}})}};
  for (const auto& [name, rho] : targets) {
    WidthEstimateConfig cfg;
    cfg.seed = 0xCA70;
    cfg.trials = 1000;
    const auto a = estimate_width_constant(rho, cfg);
    const auto b = estimate_width_constant(rho, cfg);
    cfg.threads = hardware_threads();
    const auto c = estimate_width_constant(rho, cfg);
    bool finite = true;
    for (const auto& s : a.samples) finite = finite && std::isfinite(s.ratio);
    const bool same = a.c_hat == b.c_hat && a.c_hat == c.c_hat;
    out.pass = out.pass && finite && same && a.samples.size() == 1000;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", a.c_hat);
    d << name << " C_hat " << buf << (finite ? "" : " non-finite ratio")
      << (same ? "" : " not reproducible") << "; ";
  }
  out.detail = d.str() + "seed 0xCA70, 1000 trials";
  return out;
}

Outcome criterion_7() {
  Outcome out;
  const auto rho = Representation::matrices({kAxis});
  std::ostringstream d;
  double lo = INFINITY, hi = 0.0;
  for (int i = 1; i <= 20; ++i) {
    const double t = 0.05 * i;
    const EquivariantMap u = build_bouquet_map(rho, off_axis(t, 0.3));
    const HarmonicResult r = relax(u);
    const MainLemmaRatio m = main_lemma_ratio(u, r);
    const bool ok = m.ratio && std::isfinite(*m.ratio) && *m.ratio > 0.0;
    out.pass = out.pass && ok;
    if (ok) {
      lo = std::min(lo, *m.ratio);
      hi = std::max(hi, *m.ratio);
    }
    d << "t=" << fmt(t) << ":" << (m.ratio ? fmt(*m.ratio) : "none") << " ";
  }
  out.pass = out.pass && std::isfinite(hi) && std::isfinite(lo);
  out.detail = "ratio range [" + fmt(lo) + ", " + fmt(hi) + "]; " + d.str();
  return out;
}

struct ConjugacyTally {
  std::atomic<long> instances{0};
  std::atomic<long> mismatches{0};
  std::atomic<long> unverified{0};
  std::atomic<long> window{0};
};

void check_instance(const ConjugacyInstance& inst, bool scan, ConjugacyTally& tally) {
  ++tally.instances;
  const auto cert = solve(inst);
  const auto oracle = free_group_oracle(inst);
  if (cert.verdict != oracle.verdict) ++tally.mismatches;
  for (const auto* c : {&cert, &oracle}) {
    if (c->verdict == Verdict::Conjugate && !verify(*c->g, inst).ok) ++tally.unverified;
  }
  if (scan && !brute::window_discrepancy(inst, 6).empty()) ++tally.window;
}

Outcome criterion_8() {
  const auto t0 = Clock::now();
  const Alphabet xy("xy");
  std::vector<Word> short_words, conjugators;
  {
    BallEnumerator ball(2, 3);
    while (auto w = ball.next()) short_words.push_back(*w);
    BallEnumerator g(2, 2);
    while (auto w = g.next()) conjugators.push_back(*w);
  }
  auto make = [&](std::vector<Word> a, const Word& g) {
    ConjugacyInstance inst;
    inst.alphabet = xy;
    for (const auto& w : a) inst.b.push_back(g.inverse() * w * g);
    inst.a = std::move(a);
    return inst;
  };
  ConjugacyTally tally;
  const int nw = static_cast<int>(short_words.size());
  const int threads = hardware_threads();

  // Exhaustive family, N = 1 and N = 2, all conjugators of length <= 2.
  parallel_for(nw, threads, [&](int i) {
    for (const auto& g : conjugators) {
      check_instance(make({short_words[static_cast<std::size_t>(i)]}, g), true, tally);
      for (int j = 0; j < nw; ++j) {
        check_instance(make({short_words[static_cast<std::size_t>(i)],
                             short_words[static_cast<std::size_t>(j)]}, g),
                       true, tally);
      }
    }
  });
  // Every pair (a, b) with |a|, |b| <= 3, conjugate or not.
  parallel_for(nw, threads, [&](int i) {
    for (int j = 0; j < nw; ++j) {
      ConjugacyInstance inst;
      inst.alphabet = xy;
      inst.a = {short_words[static_cast<std::size_t>(i)]};
      inst.b = {short_words[static_cast<std::size_t>(j)]};
      check_instance(inst, true, tally);
    }
  });
  const long exhaustive = tally.instances.load();
  // Seeded random instances.
  parallel_for(1000, threads, [&](int i) {
    std::mt19937_64 rng(derive_seed(808, static_cast<std::uint64_t>(i)));
    std::uniform_int_distribution<int> n(1, 3);
    const Word g = fixtures::random_word(rng, 2, 5);
    std::vector<Word> a;
    for (int k = n(rng); k > 0; --k) a.push_back(fixtures::random_word(rng, 2, 6));
    check_instance(make(a, g), false, tally);
  });
  const double secs = seconds_since(t0);
  Outcome out;
  out.pass = tally.mismatches == 0 && tally.unverified == 0 && tally.window == 0 && secs < 300.0;
  out.detail = std::to_string(exhaustive) + " exhaustive + 1000 random instances; verdict mismatches " +
               std::to_string(tally.mismatches.load()) + ", unverified certificates " +
               std::to_string(tally.unverified.load()) + ", m_max discrepancies " +
               std::to_string(tally.window.load()) + "; " + fmt(secs) + " s";
  return out;
}

Outcome criterion_9() {
  const auto rho = Representation::free_on_cayley_tree(2);
  const Point root = CayleyPoint{Word(2), 0, 0.0};
  BallEnumerator ball(2, 6);
  long checked = 0, bad = 0;
  while (auto g = ball.next()) {
    ++checked;
    if (orbit_distance(rho, root, *g, Word(2)) != static_cast<double>(word_length(*g))) ++bad;
  }
  return {bad == 0, std::to_string(checked) + " words, " + std::to_string(bad) + " mismatches"};
}

std::string capture(const std::string& cmd, int& status) {
  std::string out;
  FILE* pipe = popen((cmd + " 2>/dev/null").c_str(), "r");
  if (!pipe) {
    status = -1;
    return out;
  }
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  status = pclose(pipe);
  return out;
}

Outcome criterion_10() {
  const std::string cli = HADAMARD_CLI_PATH;
  const std::string data = HADAMARD_DATA_DIR;
  const std::vector<std::string> commands{
      "check-cat0 --model hyperbolic --trials 300",
      "check-cat0 --model tree --trials 300",
      "width --preset modular",
      "width --u " + data + "/theta_u.json --v " + data + "/theta_v.json --format csv",
      "convexity --preset cayley2",
      "harmonic --map " + data + "/theta_u.json",
      "estimate-cstar --preset modular --trials 100 --threads 3",
      "conjugacy solve --alphabet 2 --a xy,yX --b yx,Xy",
      "conjugacy solve --a x --b y --max-radius 6 --format human",
      "conjugacy oracle --a xyxY --b yxYx --format csv",
      "orbit-report --instances 10",
  };
  Outcome out;
  int identical = 0;
  for (const auto& c : commands) {
    int s1 = 0, s2 = 0;
    const std::string full = cli + " --seed 12345 " + c;
    const std::string a = capture(full, s1);
    const std::string b = capture(full, s2);
    if (a == b && s1 == s2 && !a.empty()) {
      ++identical;
    } else {
      out.pass = false;
      out.detail += "differs: " + c + "; ";
    }
  }
  out.detail += std::to_string(identical) + "/" + std::to_string(commands.size()) +
                " subcommand runs byte-identical";
  return out;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"CAT(0) triangle comparison", criterion_1},
      {"Reshetnyak quadrilateral and distance convexity", criterion_2},
      {"convexity of length and energy along homotopies", criterion_3},
      {"harmonic identities on relax results", criterion_4},
      {"energy constant along homotopy of axis minimisers", criterion_5},
      {"width constant estimates", criterion_6},
      {"main lemma ratio on the axis family", criterion_7},
      {"conjugacy solver against the exact oracle", criterion_8},
      {"orbit distance equals word length on the Cayley tree", criterion_9},
      {"CLI determinism", criterion_10},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = Clock::now();
    const Outcome o = criteria[i].second();
    std::cout << (o.pass ? "PASS" : "FAIL") << " " << (i + 1) << " " << criteria[i].first << ": "
              << o.detail << " [" << fmt(seconds_since(t0)) << " s]" << std::endl;
    if (!o.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
