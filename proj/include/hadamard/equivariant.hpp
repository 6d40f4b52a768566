#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "hadamard/isometry.hpp"
#include "hadamard/representation.hpp"
#include "hadamard/space.hpp"
#include "hadamard/word.hpp"

namespace hadamard {

/// Directed edge of a fundamental graph. The label is the group element that
/// carries the lift of `target` adjacent to this edge; spanning-tree edges
/// carry the identity.
struct GraphEdge {
  int source = 0;
  int target = 0;
  double length = 1.0;
  Word label;

  friend bool operator==(const GraphEdge&, const GraphEdge&) = default;
};

/// Finite connected graph without terminal vertices, edges labelled by words
/// of a fixed rank.
class FundamentalGraph {
 public:
  FundamentalGraph(std::vector<std::string> vertex_names, std::vector<GraphEdge> edges,
                   int rank);

  /// One vertex with `rank` unit loops labelled by the generators.
  static FundamentalGraph bouquet(int rank);

  int vertex_count() const { return static_cast<int>(names_.size()); }
  int rank() const { return rank_; }
  const std::vector<std::string>& vertex_names() const { return names_; }
  const std::vector<GraphEdge>& edges() const { return edges_; }
  double total_length() const;

  friend bool operator==(const FundamentalGraph&, const FundamentalGraph&) = default;

 private:
  std::vector<std::string> names_;
  std::vector<GraphEdge> edges_;
  int rank_;
};

/// Piecewise-geodesic rho-equivariant map determined by its vertex images.
/// Edge e runs at constant speed from images[source] to
/// rho(label) . images[target].
class EquivariantMap {
 public:
  EquivariantMap(FundamentalGraph graph, Representation rho, std::vector<Point> images);

  const FundamentalGraph& graph() const { return context_->graph; }
  const Representation& rho() const { return context_->rho; }
  const Space& space() const { return context_->rho.target(); }
  const std::vector<Point>& images() const { return images_; }

  /// rho(label) of edge e.
  const Isometry& edge_action(int e) const;
  const Isometry& edge_action_inverse(int e) const;

  Point near_endpoint(int e) const;
  Point far_endpoint(int e) const;
  /// Image of the point at arclength x in [0, length] along edge e.
  Point at(int e, double x) const;

  /// Same graph and representation, new vertex images.
  EquivariantMap with_images(std::vector<Point> images) const;

  /// Same graph and representation (cheap when the context is shared).
  bool compatible(const EquivariantMap& other) const;

 private:
  struct Context {
    FundamentalGraph graph;
    Representation rho;
    std::vector<Isometry> actions;
    std::vector<Isometry> inverse_actions;
  };
  EquivariantMap(std::shared_ptr<const Context> context, std::vector<Point> images);

  std::shared_ptr<const Context> context_;
  std::vector<Point> images_;
};

EquivariantMap build_bouquet_map(const Representation& rho, const Point& y);

/// Geodesic length of each edge image.
std::vector<double> edge_lengths(const EquivariantMap& u);
/// d^2 / len for each edge.
std::vector<double> edge_energies(const EquivariantMap& u);
double length(const EquivariantMap& u);
double energy(const EquivariantMap& u);

struct DensitySample {
  double t;
  double value;
};

/// Half the two-sided difference quotient
/// (d(c(t), c(t+eps)) + d(c(t), c(t-eps))) / (2 eps)
/// at t = a + eps, a + eps + eps/4, ... up to b - eps. On a constant-speed
/// curve this equals the speed.
std::vector<DensitySample> approx_length_density(
    const Space& space, const std::function<Point(double)>& curve, double a, double b,
    double eps);

/// H(s, x) is the fraction-s point from u(x) to v(x).
class GeodesicHomotopy {
 public:
  GeodesicHomotopy(EquivariantMap u, EquivariantMap v);

  const EquivariantMap& u() const { return u_; }
  const EquivariantMap& v() const { return v_; }

  /// H_s, a map of the same kind with interpolated vertex images.
  EquivariantMap at(double s) const;
  Point point(double s, int edge, double x) const;
  /// Track length d(u(x), v(x)) at arclength x along edge e.
  double track_length(int edge, double x) const;

 private:
  EquivariantMap u_;
  EquivariantMap v_;
};

/// Max of track lengths over the fundamental domain. Track length is convex
/// along each edge, so vertex and far-endpoint pairs suffice.
double homotopy_width_inf(const GeodesicHomotopy& h);

/// Max of track lengths over `samples` equally spaced points on every edge.
double sampled_width_inf(const GeodesicHomotopy& h, int samples);

struct Width2 {
  double value = 0.0;
  /// Certified bracket for the exact W2 from the convexity of track lengths.
  double lower = 0.0;
  double upper = 0.0;
  /// max(value - lower, upper - value).
  double error_bound = 0.0;
};

/// (sum over edges of the integral of d^2(u(x), v(x)))^(1/2), by composite
/// Simpson with `samples_per_edge` subintervals (even, >= 2).
Width2 homotopy_width_2(const GeodesicHomotopy& h, int samples_per_edge = 64);

struct ConvexityRow {
  double s;
  double length;
  double energy;
  bool length_ok;
  bool energy_ok;
};

/// L and E of H_s over the grid, each checked against the chord between the
/// endpoint values within 1e-9.
std::vector<ConvexityRow> convexity_report(const GeodesicHomotopy& h,
                                           const std::vector<double>& s_grid);

}  // namespace hadamard
