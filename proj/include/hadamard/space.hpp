#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "hadamard/word.hpp"

namespace hadamard {

/// Global tolerance used when asserting comparison inequalities.
inline constexpr double kDefectTolerance = 1e-9;

// --- points ----------------------------------------------------------------

struct EuclideanPoint {
  Eigen::VectorXd x;
  friend bool operator==(const EuclideanPoint& a, const EuclideanPoint& b) {
    return a.x.size() == b.x.size() && a.x == b.x;
  }
};

/// Point on the upper sheet x0^2 - x1^2 - x2^2 = 1, x0 > 0.
struct HyperbolicPoint {
  std::array<double, 3> x{1.0, 0.0, 0.0};
  friend bool operator==(const HyperbolicPoint&, const HyperbolicPoint&) =
      default;
};

/// Point of a finite metric tree: either a vertex (edge == -1) or an interior
/// point of an edge at `offset` from the edge's `a` endpoint.
struct TreePoint {
  int vertex = -1;
  int edge = -1;
  double offset = 0.0;
  friend bool operator==(const TreePoint&, const TreePoint&) = default;
};

/// Point of the Cayley tree of a free group with unit edges. A vertex when
/// `letter == 0`; otherwise the interior point at `offset` in (0,1) along the
/// edge from `base` to `base * letter`, where |base * letter| = |base| + 1.
struct CayleyPoint {
  Word base;
  int letter = 0;
  double offset = 0.0;
  friend bool operator==(const CayleyPoint&, const CayleyPoint&) = default;
};

using Point = std::variant<EuclideanPoint, HyperbolicPoint, TreePoint,
                           CayleyPoint>;

/// Re-projects onto the hyperboloid by recomputing x0 from (x1, x2).
HyperbolicPoint normalized(const HyperbolicPoint& p);
HyperbolicPoint hyperbolic_from_polar(double radius, double angle);

// --- spaces ----------------------------------------------------------------

struct TreeEdge {
  int a = 0;
  int b = 0;
  double length = 1.0;
};

/// Finite simplicial metric tree. Connected, acyclic, positive edge lengths
/// (checked at construction).
class MetricTree {
 public:
  MetricTree(std::vector<std::string> vertex_names, std::vector<TreeEdge> edges);

  int vertex_count() const { return static_cast<int>(names_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const std::vector<TreeEdge>& edges() const { return edges_; }
  const TreeEdge& edge(int e) const;
  const std::vector<std::string>& vertex_names() const { return names_; }
  int vertex_index(const std::string& name) const;

  /// Edge id joining adjacent vertices u and v, or -1.
  int edge_between(int u, int v) const;
  const std::vector<std::pair<int, int>>& neighbours(int v) const {
    return adjacency_[static_cast<std::size_t>(v)];
  }

  double vertex_distance(int u, int v) const;
  /// Vertex sequence of the unique path from u to v (inclusive).
  std::vector<int> vertex_path(int u, int v) const;

  friend bool operator==(const MetricTree& a, const MetricTree& b);

 private:
  std::vector<std::string> names_;
  std::vector<TreeEdge> edges_;
  std::vector<std::vector<std::pair<int, int>>> adjacency_;  // (nbr, edge)
  std::vector<int> parent_;
  std::vector<int> depth_;
  std::vector<double> root_distance_;
};

enum class ModelKind { Euclidean, Hyperbolic, Tree, Cayley };

const char* model_name(ModelKind kind);

/// A CAT(0) model space. Immutable; cheap to copy (trees are shared).
class Space {
 public:
  static Space euclidean(int dim);
  static Space hyperbolic_plane();
  static Space metric_tree(MetricTree tree);
  static Space cayley_tree(int rank);

  ModelKind kind() const { return kind_; }
  int dimension() const { return dim_; }  // Euclidean dimension / Cayley rank
  const MetricTree& tree() const;

  /// Throws ModelMismatch / InvalidPoint if `p` does not belong here.
  void check(const Point& p) const;
  bool contains(const Point& p) const;

  friend bool operator==(const Space& a, const Space& b);

 private:
  Space(ModelKind kind, int dim, std::shared_ptr<const MetricTree> tree)
      : kind_(kind), dim_(dim), tree_(std::move(tree)) {}

  ModelKind kind_;
  int dim_;
  std::shared_ptr<const MetricTree> tree_;
};

// --- operations ------------------------------------------------------------

double dist(const Space& space, const Point& p, const Point& q);

/// Point at fraction t of the way from p to q along the unique geodesic.
Point geodesic_point(const Space& space, const Point& p, const Point& q,
                     double t);

/// Break points of the geodesic from p to q: p, the tree vertices it passes
/// through, q. For Euclidean and hyperbolic spaces just {p, q}. Consecutive
/// entries of a tree path lie on a common edge.
std::vector<Point> geodesic_waypoints(const Space& space, const Point& p,
                                      const Point& q);

/// For tree models, one point per direction leaving p: the adjacent vertices,
/// or the two ends of the edge containing p. Empty for smooth models.
std::vector<Point> local_directions(const Space& space, const Point& p);

/// RHS - LHS of the CAT(0) triangle comparison for Q_lambda on [Q, R].
double triangle_defect(const Space& space, const Point& p, const Point& q,
                       const Point& r, double lambda);

/// RHS - LHS of Reshetnyak's quadrilateral inequality for P_t on [P, S] and
/// Q_t on [Q, R].
double quadrilateral_defect(const Space& space, const Point& p, const Point& q,
                            const Point& r, const Point& s, double t,
                            double alpha);

/// (1-t) d(P,Q) + t d(R,S) - d(P_t, Q_t); non-negative in CAT(0).
double distance_convexity_defect(const Space& space, const Point& p,
                                 const Point& q, const Point& r,
                                 const Point& s, double t);

struct Projection {
  Point point;
  double t = 0.0;
};

/// Nearest-point projection of y onto the segment [a, b].
Projection project_to_segment(const Space& space, const Point& a,
                              const Point& b, const Point& y);

// --- hyperboloid tangent calculus (used by the harmonic relaxation) --------

using Tangent3 = std::array<double, 3>;

/// Tangent vector at p pointing to q with Minkowski norm d(p, q).
Tangent3 hyperbolic_log(const HyperbolicPoint& p, const HyperbolicPoint& q);
HyperbolicPoint hyperbolic_exp(const HyperbolicPoint& p, const Tangent3& v);
double minkowski_dot(const Tangent3& a, const Tangent3& b);

// --- random points ---------------------------------------------------------

/// Seeded, model-specific sampler: Euclidean Gaussian; hyperbolic uniform
/// direction with Exp(1) radius capped at 10; finite tree uniform edge then
/// uniform offset; Cayley tree uniform vertex of length <= cayley_radius, then
/// a uniform incident edge and offset.
struct PointSampler {
  double euclidean_scale = 1.0;
  double hyperbolic_radius_cap = 10.0;
  int cayley_radius = 3;

  Point operator()(const Space& space, std::mt19937_64& rng) const;
};

/// Golden-section minimiser of a unimodal function on [lo, hi].
double golden_section_minimize(const auto& f, double lo, double hi,
                               double tolerance) {
  constexpr double kInvPhi = 0.6180339887498949;
  double a = lo;
  double b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > tolerance) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

struct Minimum1d {
  double t;
  double value;
};

/// Minimiser of a convex function on [lo, hi]: golden section, then the
/// endpoints, then one Newton step from central differences (golden section
/// alone stalls near sqrt(eps) on smooth minima). Each stage is kept only if
/// it does not increase f.
Minimum1d minimize_convex(const auto& f, double lo, double hi, double tolerance) {
  Minimum1d best{golden_section_minimize(f, lo, hi, tolerance), 0.0};
  best.value = f(best.t);
  for (double end : {lo, hi}) {
    const double v = f(end);
    if (v <= best.value) best = {end, v};
  }
  const double h = 1e-5 * (hi - lo);
  if (best.t - h > lo && best.t + h < hi) {
    const double fm = f(best.t - h);
    const double fp = f(best.t + h);
    const double curvature = fp - 2.0 * best.value + fm;
    if (curvature > 0.0) {
      double t = best.t - 0.5 * h * (fp - fm) / curvature;
      t = t < lo ? lo : (t > hi ? hi : t);
      const double v = f(t);
      if (v <= best.value) best = {t, v};
    }
  }
  return best;
}

}  // namespace hadamard
