#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "fixtures.hpp"
#include "hadamard/errors.hpp"
#include "hadamard/harmonic.hpp"

using namespace hadamard;
using fixtures::euclid;

namespace {

const MatrixIsometry kAxis{{std::numbers::e, 0.0, 0.0, 1.0 / std::numbers::e}};

Representation axis_rep() { return Representation::matrices({kAxis}); }

// Point at signed distance t from the axis x2 = 0, above its origin.
Point off_axis(double t, double along = 0.0) {
  return HyperbolicPoint{{std::cosh(t) * std::cosh(along), std::cosh(t) * std::sinh(along),
                          std::sinh(t)}};
}

EquivariantMap random_theta_map(const Representation& rho, std::mt19937_64& rng) {
  const PointSampler sampler{1.0, 2.0, 2};
  return EquivariantMap(fixtures::theta_graph(), rho,
                        {sampler(rho.target(), rng), sampler(rho.target(), rng)});
}

void check_harmonic_identities(const HarmonicResult& r, std::uint64_t probe_seed) {
  const auto lengths = edge_lengths(r.map);
  const auto energies = edge_energies(r.map);
  for (std::size_t e = 0; e < lengths.size(); ++e) {
    const double len = r.map.graph().edges()[e].length;
    CHECK(std::abs(lengths[e] * lengths[e] - energies[e] * len) <=
          1e-12 * std::max(1e-300, lengths[e] * lengths[e]));
  }
  for (std::size_t i = 1; i < r.energy_trace.size(); ++i) {
    CHECK(r.energy_trace[i] <= r.energy_trace[i - 1]);
  }
  CHECK(stationarity_probe(r.map, probe_seed) <= 1e-10);
  CHECK(r.L_star * r.L_star <= r.E_star * r.map.graph().total_length() * (1 + 1e-12));
}

}  // namespace

TEST_CASE("relax with trivial rho collapses to a point") {
  const auto id2 = Representation::matrices({MatrixIsometry{}, MatrixIsometry{}});
  Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(2, 2);
  const Representation flat(RepresentationKind::EuclideanAffine, Space::euclidean(2),
                            Alphabet::standard(2),
                            {EuclideanIsometry{eye, Eigen::Vector2d::Zero()},
                             EuclideanIsometry{eye, Eigen::Vector2d::Zero()}});
  for (const auto& rho : {id2, flat}) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 5; ++trial) {
      const auto r = relax(random_theta_map(rho, rng));
      CHECK(r.converged);
      CHECK(r.E_star < 1e-18);
    }
  }
}

TEST_CASE("relax finds the axis of a hyperbolic generator") {
  const auto rho = axis_rep();
  for (double t : {0.3, 1.0, 2.5}) {
    const auto r = relax(build_bouquet_map(rho, off_axis(t, 0.4)));
    CHECK(r.converged);
    CHECK(std::abs(r.E_star - 4.0) < 1e-6);
    CHECK(std::abs(std::get<HyperbolicPoint>(r.map.images()[0]).x[2]) < 1e-6);
    check_harmonic_identities(r, 7);
  }
}

TEST_CASE("relax on the Cayley tree of Z leaves unit energy") {
  const auto rho = Representation::free_on_cayley_tree(1);
  const Alphabet a = Alphabet::standard(1);
  const auto r = relax(build_bouquet_map(rho, CayleyPoint{a.parse("aa"), 0, 0.0}));
  CHECK(r.converged);
  CHECK(r.E_star == doctest::Approx(1.0));
  CHECK(r.energy_trace.front() == 1.0);
}

TEST_CASE("relax identities on every model") {
  for (const auto& rho : fixtures::sample_reps()) {
    const std::string kind = representation_kind_name(rho.kind());
    CAPTURE(kind);
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 4; ++trial) {
      const auto u0 = random_theta_map(rho, rng);
      const auto r = relax(u0);
      CHECK(r.converged);
      CHECK(r.E_star <= energy(u0));
      check_harmonic_identities(r, 100 + static_cast<std::uint64_t>(trial));
    }
  }
}

TEST_CASE("independent relaxations agree on the energy minimum") {
  for (const auto& rho : fixtures::sample_reps()) {
    const std::string kind = representation_kind_name(rho.kind());
    CAPTURE(kind);
    std::mt19937_64 a(1), b(2);
    const auto r1 = relax(random_theta_map(rho, a));
    const auto r2 = relax(random_theta_map(rho, b));
    CHECK(std::abs(r1.E_star - r2.E_star) <= 1e-6);
  }
}

TEST_CASE("relax reports non-convergence and validates its config") {
  const auto rho = fixtures::sample_matrix_rep();
  std::mt19937_64 rng(9);
  const auto u0 = random_theta_map(rho, rng);
  RelaxationConfig cfg;
  cfg.max_iterations = 1;
  const auto r = relax(u0, cfg);
  CHECK(!r.converged);
  CHECK(r.iterations == 1);
  CHECK(r.energy_trace.size() == 2);
  cfg.max_iterations = 0;
  CHECK_THROWS_AS(relax(u0, cfg), ConfigError);
  cfg = {};
  cfg.displacement_tolerance = 0.0;
  CHECK_THROWS_AS(relax(u0, cfg), ConfigError);
}

TEST_CASE("verify_harmonic_homotopy") {
  std::vector<double> grid;
  for (int i = 0; i <= 10; ++i) grid.push_back(i / 10.0);

  const auto rho = axis_rep();
  const auto r1 = relax(build_bouquet_map(rho, off_axis(0.7, -1.0)));
  const auto r2 = relax(build_bouquet_map(rho, off_axis(-1.2, 2.0)));
  REQUIRE(r1.converged);
  REQUIRE(r2.converged);
  CHECK(dist(rho.target(), r1.map.images()[0], r2.map.images()[0]) > 1.0);
  const auto report = verify_harmonic_homotopy(r1, r2, grid);
  CHECK(report.holds);
  for (const auto& row : report.rows) CHECK(std::abs(row.energy - 4.0) <= 1e-6);

  const auto same = verify_harmonic_homotopy(r1, r1, grid);
  for (const auto& row : same.rows) CHECK(row.energy == same.rows[0].energy);

  const auto id = Representation::matrices({MatrixIsometry{}});
  const auto c1 = relax(build_bouquet_map(id, off_axis(1.0)));
  const auto c2 = relax(build_bouquet_map(id, off_axis(-2.0)));
  for (const auto& row : verify_harmonic_homotopy(c1, c2, grid).rows) CHECK(row.energy == 0.0);

  RelaxationConfig short_run;
  short_run.max_iterations = 1;
  const auto partial = relax(build_bouquet_map(fixtures::sample_matrix_rep(), off_axis(1.0)), short_run);
  CHECK_THROWS_AS(verify_harmonic_homotopy(partial, partial, grid), PreconditionError);
  CHECK_THROWS_AS(verify_harmonic_homotopy(r1, c1, grid), InvalidStructure);
}

TEST_CASE("main_lemma_ratio") {
  const auto rho = axis_rep();
  const auto r = relax(build_bouquet_map(rho, off_axis(0.5)));
  CHECK(!main_lemma_ratio(r.map, r).ratio.has_value());

  const auto id = Representation::matrices({MatrixIsometry{}});
  const auto c = relax(build_bouquet_map(id, off_axis(1.0)));
  CHECK(!main_lemma_ratio(c.map, c).ratio.has_value());

  // Off-axis basepoint at distance t: the nearest minimiser is its foot on the
  // axis, and cosh L = cosh(2) cosh^2 t - sinh^2 t.
  for (double t : {0.1, 1.0}) {
    const auto u = build_bouquet_map(rho, off_axis(t, 0.3));
    const auto m = main_lemma_ratio(u, r);
    REQUIRE(m.ratio.has_value());
    const double l = std::acosh(std::cosh(2.0) * std::cosh(t) * std::cosh(t) -
                                std::sinh(t) * std::sinh(t));
    CHECK(std::abs(m.d_inf - t) < 1e-6);
    CHECK(std::abs(m.length_excess - (l - 2.0)) < 1e-9);
    CHECK(std::isfinite(*m.ratio));
    CHECK(*m.ratio > 0.0);
  }
}

TEST_CASE("fixed ideal point precondition") {
  CHECK_THROWS_AS(require_no_fixed_ideal_point(axis_rep()), PreconditionError);
  CHECK_THROWS_AS(require_no_fixed_ideal_point(Representation::matrices({MatrixIsometry{}})),
                  PreconditionError);
  CHECK_THROWS_AS(require_no_fixed_ideal_point(Representation::free_on_cayley_tree(1)),
                  PreconditionError);
  const Representation shift(RepresentationKind::EuclideanAffine, Space::euclidean(2),
                             Alphabet::standard(1),
                             {EuclideanIsometry{Eigen::MatrixXd::Identity(2, 2), Eigen::Vector2d(1, 0)}});
  CHECK_THROWS_AS(require_no_fixed_ideal_point(shift), PreconditionError);
  // Two hyperbolic matrices sharing the repelling endpoint (1, 0).
  const auto shared = Representation::matrices(
      {kAxis, MatrixIsometry{{2.0, 1.0, 0.0, 0.5}}});
  CHECK_THROWS_AS(require_no_fixed_ideal_point(shared), PreconditionError);

  CHECK_NOTHROW(require_no_fixed_ideal_point(fixtures::sample_matrix_rep()));
  CHECK_NOTHROW(require_no_fixed_ideal_point(Representation::free_on_cayley_tree(2)));
  CHECK_NOTHROW(require_no_fixed_ideal_point(fixtures::sample_tree_rep()));
  const double c = std::cos(0.5), s = std::sin(0.5);
  Eigen::MatrixXd rot(2, 2);
  rot << c, -s, s, c;
  const Representation turn(RepresentationKind::EuclideanAffine, Space::euclidean(2),
                            Alphabet::standard(1), {EuclideanIsometry{rot, Eigen::Vector2d(1, 0)}});
  CHECK_NOTHROW(require_no_fixed_ideal_point(turn));
}

TEST_CASE("estimate_width_constant") {
  const auto rho = fixtures::sample_matrix_rep();
  const auto u = build_bouquet_map(rho, off_axis(0.2));
  CHECK(width_ratio(u, u) == 0.0);

  WidthEstimateConfig cfg;
  cfg.seed = 1234;
  cfg.trials = 200;
  for (const auto& target : {rho, Representation::free_on_cayley_tree(2)}) {
    const auto a = estimate_width_constant(target, cfg);
    auto threaded = cfg;
    threaded.threads = 4;
    const auto b = estimate_width_constant(target, threaded);
    CHECK(a.c_hat == b.c_hat);
    REQUIRE(a.samples.size() == 200);
    double max_ratio = 0.0;
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
      const auto& s = a.samples[i];
      CHECK(std::isfinite(s.ratio));
      CHECK(s.ratio == b.samples[i].ratio);
      CHECK(s.width_inf <= s.length_u + s.length_v + 1e-9);
      max_ratio = std::max(max_ratio, s.ratio);
    }
    CHECK(a.c_hat == max_ratio);
    CHECK(a.c_hat > 0.0);
  }
  CHECK_THROWS_AS(estimate_width_constant(axis_rep(), cfg), PreconditionError);
  cfg.trials = 0;
  CHECK_THROWS_AS(estimate_width_constant(rho, cfg), ConfigError);
}
