#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "hadamard/equivariant.hpp"

namespace hadamard {

struct RelaxationConfig {
  int max_iterations = 10000;
  double displacement_tolerance = 1e-10;
  double inner_tolerance = 1e-12;

  /// Throws ConfigError unless tolerances are positive and max_iterations >= 1.
  void validate() const;
};

struct HarmonicResult {
  EquivariantMap map;
  double E_star = 0.0;
  double L_star = 0.0;
  int iterations = 0;
  bool converged = false;
  /// Energy before the first sweep, then after each sweep.
  std::vector<double> energy_trace;
  RelaxationConfig config;
};

/// Cyclic coordinate descent on F = sum over edges of d^2 / len: each vertex
/// image moves to the minimiser of its local convex objective, and a move is
/// kept only when it lowers that objective. Stops once a sweep moves no vertex
/// by more than `displacement_tolerance`.
HarmonicResult relax(const EquivariantMap& u0, const RelaxationConfig& cfg = {});

/// Largest decrease of the energy obtained by moving one vertex image a
/// distance `step` in one of `directions` directions (tree germs first, then
/// seeded random ones). Near zero at a minimiser.
double stationarity_probe(const EquivariantMap& u, std::uint64_t seed, int directions = 16,
                          double step = 1e-6);

struct HomotopyEnergyRow {
  double s;
  double energy;
};

struct HomotopyEnergyReport {
  std::vector<HomotopyEnergyRow> rows;
  double E_star = 0.0;
  double tolerance = 0.0;
  double max_deviation = 0.0;
  bool holds = false;
};

/// Energy along the geodesic homotopy between two minimisers, compared with
/// E_star of the first within max(1e-6, 10 * displacement_tolerance * E_star).
HomotopyEnergyReport verify_harmonic_homotopy(const HarmonicResult& r1,
                                              const HarmonicResult& r2,
                                              const std::vector<double>& s_grid);

struct MainLemmaRatio {
  /// d_inf / (L(u) - L_star); empty when the length excess is <= 1e-12.
  std::optional<double> ratio;
  double d_inf = 0.0;
  double length_excess = 0.0;
  /// Whether relaxing from u (to find a nearby minimiser) converged.
  bool refined_converged = false;
};

/// Compares u with the minimiser reached by relaxing from u itself, so that
/// the reference is close to u even when minimisers are not unique.
MainLemmaRatio main_lemma_ratio(const EquivariantMap& u, const HarmonicResult& r);

/// Throws PreconditionError when the image of rho is trivial or fixes a point
/// of the ideal boundary (per-model test).
void require_no_fixed_ideal_point(const Representation& rho);

/// W_inf / (L(u) + L(v)); 0 when both numerator and denominator vanish.
double width_ratio(const EquivariantMap& u, const EquivariantMap& v);

struct WidthEstimateConfig {
  std::uint64_t seed = 0;
  int trials = 1000;
  PointSampler sampler{};
  int threads = 1;
};

struct WidthSample {
  int trial;
  std::uint64_t seed;
  double length_u;
  double length_v;
  double width_inf;
  double ratio;
};

struct WidthEstimate {
  double c_hat = 0.0;
  std::vector<WidthSample> samples;
};

/// Samples pairs of bouquet maps at random basepoints and returns the largest
/// W_inf / (L(u) + L(v)). Trial i uses derive_seed(seed, i), so the result is
/// independent of the thread count.
WidthEstimate estimate_width_constant(const Representation& rho,
                                      const WidthEstimateConfig& cfg);

}  // namespace hadamard
