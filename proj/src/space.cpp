#include "hadamard/space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <queue>

#include "hadamard/errors.hpp"

namespace hadamard {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double minkowski(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  return a[0] * b[0] - a[1] * b[1] - a[2] * b[2];
}

void check_fraction(double t, const char* what) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw DomainError(std::string(what) + " = " + std::to_string(t) +
                      " outside [0, 1]");
  }
}

// d(p, q) on the hyperboloid. acosh loses half the digits near 1, so short
// distances go through 2 asinh(|p - q|_M / 2) instead.
double hyperbolic_distance(const HyperbolicPoint& p, const HyperbolicPoint& q) {
  const double pairing = minkowski(p.x, q.x);
  if (pairing > 2.0) return std::acosh(pairing);
  const double d0 = p.x[0] - q.x[0];
  const double d1 = p.x[1] - q.x[1];
  const double d2 = p.x[2] - q.x[2];
  const double chord2 = std::max(0.0, d1 * d1 + d2 * d2 - d0 * d0);
  return 2.0 * std::asinh(0.5 * std::sqrt(chord2));
}

// sinh(x) / sinh(d) for 0 <= x <= d, without overflow for large d.
double sinh_ratio(double x, double d) {
  if (d < 20.0) return std::sinh(x) / std::sinh(d);
  return (std::exp(x - d) - std::exp(-x - d)) / -std::expm1(-2.0 * d);
}

HyperbolicPoint hyperbolic_interpolate(const HyperbolicPoint& p,
                                       const HyperbolicPoint& q, double t) {
  const double d = hyperbolic_distance(p, q);
  if (d == 0.0) return p;
  const double a = sinh_ratio((1.0 - t) * d, d);
  const double b = sinh_ratio(t * d, d);
  HyperbolicPoint r;
  for (int i = 0; i < 3; ++i) r.x[i] = a * p.x[i] + b * q.x[i];
  return normalized(r);
}

// --- shared tree geometry ---------------------------------------------------
//
// Both tree models expose the same small vocabulary; TreeGeometry builds
// distance, waypoints and interpolation on top of it.

struct FiniteTreeModel {
  const MetricTree& tree;

  using PointT = TreePoint;
  using Vertex = int;
  using EdgeKey = int;

  bool is_vertex(const TreePoint& p) const { return p.edge < 0; }
  int vertex_of(const TreePoint& p) const { return p.vertex; }
  TreePoint vertex_point(int v) const { return TreePoint{v, -1, 0.0}; }

  std::vector<std::pair<int, double>> ends(const TreePoint& p) const {
    if (is_vertex(p)) return {{p.vertex, 0.0}};
    const auto& e = tree.edge(p.edge);
    return {{e.a, p.offset}, {e.b, e.length - p.offset}};
  }

  double vertex_distance(int u, int v) const { return tree.vertex_distance(u, v); }
  std::vector<int> vertex_path(int u, int v) const { return tree.vertex_path(u, v); }

  bool on_closed_edge(int e, const TreePoint& p) const {
    if (!is_vertex(p)) return p.edge == e;
    const auto& edge = tree.edge(e);
    return p.vertex == edge.a || p.vertex == edge.b;
  }

  std::optional<int> common_edge(const TreePoint& p, const TreePoint& q) const {
    if (!is_vertex(p)) {
      if (on_closed_edge(p.edge, q)) return p.edge;
      return std::nullopt;
    }
    if (!is_vertex(q)) {
      if (on_closed_edge(q.edge, p)) return q.edge;
      return std::nullopt;
    }
    const int e = tree.edge_between(p.vertex, q.vertex);
    if (e < 0) return std::nullopt;
    return e;
  }

  double position(int e, const TreePoint& p) const {
    if (!is_vertex(p)) return p.offset;
    const auto& edge = tree.edge(e);
    return p.vertex == edge.a ? 0.0 : edge.length;
  }

  TreePoint make(int e, double pos) const {
    const auto& edge = tree.edge(e);
    if (pos <= 0.0) return vertex_point(edge.a);
    if (pos >= edge.length) return vertex_point(edge.b);
    return TreePoint{-1, e, pos};
  }
};

struct CayleyModel {
  int rank;

  using PointT = CayleyPoint;
  using Vertex = Word;
  // (lower vertex, letter) with |lower * letter| = |lower| + 1.
  using EdgeKey = std::pair<Word, int>;

  bool is_vertex(const CayleyPoint& p) const { return p.letter == 0; }
  Word vertex_of(const CayleyPoint& p) const { return p.base; }
  CayleyPoint vertex_point(const Word& v) const { return CayleyPoint{v, 0, 0.0}; }

  Word top(const CayleyPoint& p) const {
    return p.base * Word::generator(rank, p.letter);
  }

  std::vector<std::pair<Word, double>> ends(const CayleyPoint& p) const {
    if (is_vertex(p)) return {{p.base, 0.0}};
    return {{p.base, p.offset}, {top(p), 1.0 - p.offset}};
  }

  double vertex_distance(const Word& u, const Word& v) const {
    return static_cast<double>((u.inverse() * v).length());
  }

  std::vector<Word> vertex_path(const Word& u, const Word& v) const {
    const Word c = u.inverse() * v;
    std::vector<Word> path{u};
    Word cur = u;
    for (int l : c.letters()) {
      cur = cur * Word::generator(rank, l);
      path.push_back(cur);
    }
    return path;
  }

  // Edge joining adjacent vertices u and v.
  std::optional<EdgeKey> edge_of(const Word& u, const Word& v) const {
    const Word c = u.inverse() * v;
    if (c.length() != 1) return std::nullopt;
    if (v.length() == u.length() + 1) return EdgeKey{u, c.letters()[0]};
    return EdgeKey{v, -c.letters()[0]};
  }

  bool on_closed_edge(const EdgeKey& e, const CayleyPoint& p) const {
    if (!is_vertex(p)) return p.base == e.first && p.letter == e.second;
    return p.base == e.first ||
           p.base == e.first * Word::generator(rank, e.second);
  }

  std::optional<EdgeKey> common_edge(const CayleyPoint& p,
                                     const CayleyPoint& q) const {
    if (!is_vertex(p)) {
      EdgeKey e{p.base, p.letter};
      if (on_closed_edge(e, q)) return e;
      return std::nullopt;
    }
    if (!is_vertex(q)) {
      EdgeKey e{q.base, q.letter};
      if (on_closed_edge(e, p)) return e;
      return std::nullopt;
    }
    return edge_of(p.base, q.base);
  }

  double position(const EdgeKey& e, const CayleyPoint& p) const {
    if (!is_vertex(p)) return p.offset;
    return p.base == e.first ? 0.0 : 1.0;
  }

  CayleyPoint make(const EdgeKey& e, double pos) const {
    if (pos <= 0.0) return vertex_point(e.first);
    if (pos >= 1.0) return vertex_point(e.first * Word::generator(rank, e.second));
    return CayleyPoint{e.first, e.second, pos};
  }
};

template <typename Model>
struct TreeGeometry {
  const Model& model;
  using P = typename Model::PointT;

  double distance(const P& p, const P& q) const {
    if (auto e = model.common_edge(p, q)) {
      return std::abs(model.position(*e, p) - model.position(*e, q));
    }
    double best = kInf;
    for (const auto& [x, dx] : model.ends(p)) {
      for (const auto& [y, dy] : model.ends(q)) {
        best = std::min(best, (dx + dy) + model.vertex_distance(x, y));
      }
    }
    return best;
  }

  std::vector<P> waypoints(const P& p, const P& q) const {
    if (model.common_edge(p, q)) return {p, q};
    double best = kInf;
    typename Model::Vertex bx{};
    typename Model::Vertex by{};
    for (const auto& [x, dx] : model.ends(p)) {
      for (const auto& [y, dy] : model.ends(q)) {
        const double total = (dx + dy) + model.vertex_distance(x, y);
        if (total < best) {
          best = total;
          bx = x;
          by = y;
        }
      }
    }
    std::vector<P> out{p};
    for (const auto& v : model.vertex_path(bx, by)) {
      P vp = model.vertex_point(v);
      if (!(vp == out.back())) out.push_back(std::move(vp));
    }
    if (!(q == out.back())) out.push_back(q);
    return out;
  }

  P interpolate(const P& p, const P& q, double t) const {
    const auto path = waypoints(p, q);
    std::vector<double> lengths;
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
      lengths.push_back(distance(path[i], path[i + 1]));
      total += lengths.back();
    }
    if (total == 0.0) return p;
    const double target = t * total;
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
      const bool last = i + 2 == path.size();
      if (target <= acc + lengths[i] || last) {
        const auto e = *model.common_edge(path[i], path[i + 1]);
        const double f =
            lengths[i] > 0.0 ? std::clamp((target - acc) / lengths[i], 0.0, 1.0)
                             : 0.0;
        const double a = model.position(e, path[i]);
        const double b = model.position(e, path[i + 1]);
        return model.make(e, a + f * (b - a));
      }
      acc += lengths[i];
    }
    return q;
  }
};

template <typename T>
const T& as(const Point& p, const char* model) {
  if (const auto* v = std::get_if<T>(&p)) return *v;
  throw ModelMismatch(std::string("point is not a ") + model + " point");
}

}  // namespace

// --- points -------------------------------------------------------------------

HyperbolicPoint normalized(const HyperbolicPoint& p) {
  HyperbolicPoint q = p;
  q.x[0] = std::sqrt(1.0 + q.x[1] * q.x[1] + q.x[2] * q.x[2]);
  return q;
}

HyperbolicPoint hyperbolic_from_polar(double radius, double angle) {
  const double s = std::sinh(radius);
  return normalized(HyperbolicPoint{{std::cosh(radius), s * std::cos(angle),
                                     s * std::sin(angle)}});
}

// --- MetricTree -----------------------------------------------------------------

MetricTree::MetricTree(std::vector<std::string> vertex_names,
                       std::vector<TreeEdge> edges)
    : names_(std::move(vertex_names)), edges_(std::move(edges)) {
  const auto n = names_.size();
  if (n == 0) throw InvalidStructure("metric tree needs at least one vertex");
  for (std::size_t i = 0; i < n; ++i) {
    if (std::find(names_.begin(), names_.begin() + static_cast<long>(i),
                  names_[i]) != names_.begin() + static_cast<long>(i)) {
      throw InvalidStructure("duplicate tree vertex '" + names_[i] + "'");
    }
  }
  if (edges_.size() != n - 1) {
    throw InvalidStructure("a tree on " + std::to_string(n) +
                           " vertices has " + std::to_string(n - 1) +
                           " edges, got " + std::to_string(edges_.size()));
  }
  adjacency_.assign(n, {});
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const auto& edge = edges_[e];
    if (edge.a < 0 || edge.b < 0 || static_cast<std::size_t>(edge.a) >= n ||
        static_cast<std::size_t>(edge.b) >= n || edge.a == edge.b) {
      throw InvalidStructure("tree edge " + std::to_string(e) +
                             " has invalid endpoints");
    }
    if (!(edge.length > 0.0) || !std::isfinite(edge.length)) {
      throw InvalidStructure("tree edge " + std::to_string(e) +
                             " must have positive finite length");
    }
    adjacency_[static_cast<std::size_t>(edge.a)].emplace_back(edge.b,
                                                              static_cast<int>(e));
    adjacency_[static_cast<std::size_t>(edge.b)].emplace_back(edge.a,
                                                              static_cast<int>(e));
  }
  parent_.assign(n, -2);
  depth_.assign(n, 0);
  root_distance_.assign(n, 0.0);
  parent_[0] = -1;
  std::queue<int> queue;
  queue.push(0);
  std::size_t seen = 1;
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop();
    for (const auto& [w, e] : adjacency_[static_cast<std::size_t>(v)]) {
      if (parent_[static_cast<std::size_t>(w)] != -2) continue;
      parent_[static_cast<std::size_t>(w)] = v;
      depth_[static_cast<std::size_t>(w)] = depth_[static_cast<std::size_t>(v)] + 1;
      root_distance_[static_cast<std::size_t>(w)] =
          root_distance_[static_cast<std::size_t>(v)] +
          edges_[static_cast<std::size_t>(e)].length;
      ++seen;
      queue.push(w);
    }
  }
  // n - 1 edges and connected implies acyclic.
  if (seen != n) throw InvalidStructure("metric tree is not connected");
}

const TreeEdge& MetricTree::edge(int e) const {
  if (e < 0 || e >= edge_count()) {
    throw InvalidPoint("unknown tree edge " + std::to_string(e));
  }
  return edges_[static_cast<std::size_t>(e)];
}

int MetricTree::vertex_index(const std::string& name) const {
  const auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) throw InvalidPoint("unknown tree vertex '" + name + "'");
  return static_cast<int>(it - names_.begin());
}

int MetricTree::edge_between(int u, int v) const {
  for (const auto& [w, e] : adjacency_[static_cast<std::size_t>(u)]) {
    if (w == v) return e;
  }
  return -1;
}

std::vector<int> MetricTree::vertex_path(int u, int v) const {
  std::vector<int> up;
  std::vector<int> down;
  while (u != v) {
    if (depth_[static_cast<std::size_t>(u)] >= depth_[static_cast<std::size_t>(v)]) {
      up.push_back(u);
      u = parent_[static_cast<std::size_t>(u)];
    } else {
      down.push_back(v);
      v = parent_[static_cast<std::size_t>(v)];
    }
  }
  up.push_back(u);
  up.insert(up.end(), down.rbegin(), down.rend());
  return up;
}

double MetricTree::vertex_distance(int u, int v) const {
  const auto path = vertex_path(u, v);
  double lca_distance = kInf;
  for (int w : path) {
    lca_distance = std::min(lca_distance, root_distance_[static_cast<std::size_t>(w)]);
  }
  return root_distance_[static_cast<std::size_t>(u)] +
         root_distance_[static_cast<std::size_t>(v)] - 2.0 * lca_distance;
}

bool operator==(const MetricTree& a, const MetricTree& b) {
  if (a.names_ != b.names_ || a.edges_.size() != b.edges_.size()) return false;
  for (std::size_t i = 0; i < a.edges_.size(); ++i) {
    const auto& x = a.edges_[i];
    const auto& y = b.edges_[i];
    if (x.a != y.a || x.b != y.b || x.length != y.length) return false;
  }
  return true;
}

// --- Space ------------------------------------------------------------------------

const char* model_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::Euclidean: return "euclidean";
    case ModelKind::Hyperbolic: return "hyperbolic";
    case ModelKind::Tree: return "tree";
    case ModelKind::Cayley: return "cayley";
  }
  return "unknown";
}

Space Space::euclidean(int dim) {
  if (dim < 1) throw DomainError("Euclidean dimension must be >= 1");
  return Space(ModelKind::Euclidean, dim, nullptr);
}

Space Space::hyperbolic_plane() { return Space(ModelKind::Hyperbolic, 2, nullptr); }

Space Space::metric_tree(MetricTree tree) {
  return Space(ModelKind::Tree, 1,
               std::make_shared<const MetricTree>(std::move(tree)));
}

Space Space::cayley_tree(int rank) {
  if (rank < 1) throw DomainError("Cayley tree rank must be >= 1");
  return Space(ModelKind::Cayley, rank, nullptr);
}

const MetricTree& Space::tree() const {
  if (!tree_) throw ModelMismatch("space is not a finite metric tree");
  return *tree_;
}

void Space::check(const Point& p) const {
  switch (kind_) {
    case ModelKind::Euclidean: {
      const auto& e = as<EuclideanPoint>(p, "euclidean");
      if (e.x.size() != dim_) {
        throw ModelMismatch("point of dimension " + std::to_string(e.x.size()) +
                            " in Euclidean space of dimension " +
                            std::to_string(dim_));
      }
      if (!e.x.allFinite()) throw InvalidPoint("non-finite Euclidean coordinate");
      return;
    }
    case ModelKind::Hyperbolic: {
      const auto& h = as<HyperbolicPoint>(p, "hyperbolic");
      const double scale = std::max(1.0, h.x[0] * h.x[0]);
      if (!std::isfinite(h.x[0]) || !std::isfinite(h.x[1]) ||
          !std::isfinite(h.x[2]) || h.x[0] <= 0.0 ||
          std::abs(minkowski(h.x, h.x) - 1.0) > 1e-9 * scale) {
        throw InvalidPoint("point is not on the upper hyperboloid sheet");
      }
      return;
    }
    case ModelKind::Tree: {
      const auto& t = as<TreePoint>(p, "tree");
      if (t.edge < 0) {
        if (t.vertex < 0 || t.vertex >= tree_->vertex_count()) {
          throw InvalidPoint("unknown tree vertex " + std::to_string(t.vertex));
        }
        return;
      }
      const auto& e = tree_->edge(t.edge);
      if (t.vertex != -1 || !(t.offset > 0.0 && t.offset < e.length)) {
        throw InvalidPoint("tree edge offset must lie strictly inside the edge");
      }
      return;
    }
    case ModelKind::Cayley: {
      const auto& c = as<CayleyPoint>(p, "cayley");
      if (c.base.rank() != dim_) {
        throw ModelMismatch("Cayley point over rank " +
                            std::to_string(c.base.rank()) + ", tree has rank " +
                            std::to_string(dim_));
      }
      if (c.letter == 0) return;
      if (std::abs(c.letter) > dim_ ||
          (c.base * Word::generator(dim_, c.letter)).length() !=
              c.base.length() + 1 ||
          !(c.offset > 0.0 && c.offset < 1.0)) {
        throw InvalidPoint("Cayley edge point is not in canonical form");
      }
      return;
    }
  }
}

bool Space::contains(const Point& p) const {
  try {
    check(p);
    return true;
  } catch (const Error&) {
    return false;
  }
}

bool operator==(const Space& a, const Space& b) {
  if (a.kind_ != b.kind_ || a.dim_ != b.dim_) return false;
  if (a.kind_ != ModelKind::Tree) return true;
  return a.tree_ == b.tree_ || *a.tree_ == *b.tree_;
}

// --- operations ---------------------------------------------------------------

double dist(const Space& space, const Point& p, const Point& q) {
  space.check(p);
  space.check(q);
  switch (space.kind()) {
    case ModelKind::Euclidean:
      return (std::get<EuclideanPoint>(p).x - std::get<EuclideanPoint>(q).x).norm();
    case ModelKind::Hyperbolic:
      return hyperbolic_distance(std::get<HyperbolicPoint>(p),
                                 std::get<HyperbolicPoint>(q));
    case ModelKind::Tree: {
      FiniteTreeModel model{space.tree()};
      return TreeGeometry<FiniteTreeModel>{model}.distance(std::get<TreePoint>(p),
                                                           std::get<TreePoint>(q));
    }
    case ModelKind::Cayley: {
      CayleyModel model{space.dimension()};
      return TreeGeometry<CayleyModel>{model}.distance(std::get<CayleyPoint>(p),
                                                       std::get<CayleyPoint>(q));
    }
  }
  return 0.0;
}

Point geodesic_point(const Space& space, const Point& p, const Point& q,
                     double t) {
  check_fraction(t, "geodesic parameter");
  space.check(p);
  space.check(q);
  if (t == 0.0) return p;
  if (t == 1.0) return q;
  switch (space.kind()) {
    case ModelKind::Euclidean: {
      const auto& a = std::get<EuclideanPoint>(p).x;
      const auto& b = std::get<EuclideanPoint>(q).x;
      return EuclideanPoint{a + t * (b - a)};
    }
    case ModelKind::Hyperbolic:
      return hyperbolic_interpolate(std::get<HyperbolicPoint>(p),
                                    std::get<HyperbolicPoint>(q), t);
    case ModelKind::Tree: {
      FiniteTreeModel model{space.tree()};
      return TreeGeometry<FiniteTreeModel>{model}.interpolate(
          std::get<TreePoint>(p), std::get<TreePoint>(q), t);
    }
    case ModelKind::Cayley: {
      CayleyModel model{space.dimension()};
      return TreeGeometry<CayleyModel>{model}.interpolate(
          std::get<CayleyPoint>(p), std::get<CayleyPoint>(q), t);
    }
  }
  return p;
}

std::vector<Point> geodesic_waypoints(const Space& space, const Point& p,
                                      const Point& q) {
  space.check(p);
  space.check(q);
  std::vector<Point> out;
  switch (space.kind()) {
    case ModelKind::Euclidean:
    case ModelKind::Hyperbolic:
      return {p, q};
    case ModelKind::Tree: {
      FiniteTreeModel model{space.tree()};
      for (auto& w : TreeGeometry<FiniteTreeModel>{model}.waypoints(
               std::get<TreePoint>(p), std::get<TreePoint>(q))) {
        out.emplace_back(std::move(w));
      }
      return out;
    }
    case ModelKind::Cayley: {
      CayleyModel model{space.dimension()};
      for (auto& w : TreeGeometry<CayleyModel>{model}.waypoints(
               std::get<CayleyPoint>(p), std::get<CayleyPoint>(q))) {
        out.emplace_back(std::move(w));
      }
      return out;
    }
  }
  return out;
}

double triangle_defect(const Space& space, const Point& p, const Point& q,
                       const Point& r, double lambda) {
  check_fraction(lambda, "lambda");
  const double pq = dist(space, p, q);
  const double pr = dist(space, p, r);
  const double qr = dist(space, q, r);
  const double pql = dist(space, p, geodesic_point(space, q, r, lambda));
  return (1.0 - lambda) * pq * pq + lambda * pr * pr -
         lambda * (1.0 - lambda) * qr * qr - pql * pql;
}

double quadrilateral_defect(const Space& space, const Point& p, const Point& q,
                            const Point& r, const Point& s, double t,
                            double alpha) {
  check_fraction(t, "t");
  check_fraction(alpha, "alpha");
  const double pq = dist(space, p, q);
  const double rs = dist(space, r, s);
  const double ps = dist(space, p, s);
  const double qr = dist(space, q, r);
  const double pt_qt = dist(space, geodesic_point(space, p, s, t),
                            geodesic_point(space, q, r, t));
  const double bracket = alpha * (ps - qr) * (ps - qr) +
                         (1.0 - alpha) * (rs - pq) * (rs - pq);
  return (1.0 - t) * pq * pq + t * rs * rs - t * (1.0 - t) * bracket -
         pt_qt * pt_qt;
}

double distance_convexity_defect(const Space& space, const Point& p,
                                 const Point& q, const Point& r,
                                 const Point& s, double t) {
  check_fraction(t, "t");
  return (1.0 - t) * dist(space, p, q) + t * dist(space, r, s) -
         dist(space, geodesic_point(space, p, s, t),
              geodesic_point(space, q, r, t));
}

std::vector<Point> local_directions(const Space& space, const Point& p) {
  space.check(p);
  std::vector<Point> out;
  if (space.kind() == ModelKind::Tree) {
    const auto& t = std::get<TreePoint>(p);
    if (t.edge < 0) {
      for (const auto& [w, e] : space.tree().neighbours(t.vertex)) out.push_back(TreePoint{w, -1, 0.0});
    } else {
      const auto& e = space.tree().edge(t.edge);
      out.push_back(TreePoint{e.a, -1, 0.0});
      out.push_back(TreePoint{e.b, -1, 0.0});
    }
  } else if (space.kind() == ModelKind::Cayley) {
    const auto& c = std::get<CayleyPoint>(p);
    const int rank = space.dimension();
    if (c.letter == 0) {
      for (int l = 1; l <= rank; ++l) {
        for (int sign : {1, -1}) {
          out.push_back(CayleyPoint{c.base * Word::generator(rank, sign * l), 0, 0.0});
        }
      }
    } else {
      out.push_back(CayleyPoint{c.base, 0, 0.0});
      out.push_back(CayleyPoint{c.base * Word::generator(rank, c.letter), 0, 0.0});
    }
  }
  return out;
}

Projection project_to_segment(const Space& space, const Point& a,
                              const Point& b, const Point& y) {
  auto objective = [&](double s) {
    const double d = dist(space, y, geodesic_point(space, a, b, s));
    return d * d;
  };
  const double t = minimize_convex(objective, 0.0, 1.0, 1e-10).t;
  return {geodesic_point(space, a, b, t), t};
}

// --- hyperboloid tangent calculus ------------------------------------------------

double minkowski_dot(const Tangent3& a, const Tangent3& b) { return minkowski(a, b); }

Tangent3 hyperbolic_log(const HyperbolicPoint& p, const HyperbolicPoint& q) {
  const double d = hyperbolic_distance(p, q);
  if (d == 0.0) return {0.0, 0.0, 0.0};
  const double d0 = q.x[0] - p.x[0];
  const double d1 = q.x[1] - p.x[1];
  const double d2 = q.x[2] - p.x[2];
  // <p, q> - 1, computed without cancellation.
  const double excess = 0.5 * (d1 * d1 + d2 * d2 - d0 * d0);
  Tangent3 u{d0 - excess * p.x[0], d1 - excess * p.x[1], d2 - excess * p.x[2]};
  const double norm = std::sqrt(std::max(0.0, -minkowski(u, u)));
  if (norm == 0.0) return {0.0, 0.0, 0.0};
  const double scale = d / norm;
  return {u[0] * scale, u[1] * scale, u[2] * scale};
}

HyperbolicPoint hyperbolic_exp(const HyperbolicPoint& p, const Tangent3& v) {
  const double n = std::sqrt(std::max(0.0, -minkowski(v, v)));
  HyperbolicPoint r;
  if (n < 1e-300) return p;
  const double c = std::cosh(n);
  const double s = std::sinh(n) / n;
  for (int i = 0; i < 3; ++i) r.x[i] = c * p.x[i] + s * v[i];
  return normalized(r);
}

// --- sampling -------------------------------------------------------------------

Point PointSampler::operator()(const Space& space, std::mt19937_64& rng) const {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  switch (space.kind()) {
    case ModelKind::Euclidean: {
      std::normal_distribution<double> normal(0.0, euclidean_scale);
      Eigen::VectorXd x(space.dimension());
      for (int i = 0; i < space.dimension(); ++i) x[i] = normal(rng);
      return EuclideanPoint{x};
    }
    case ModelKind::Hyperbolic: {
      std::exponential_distribution<double> radial(1.0);
      const double angle = 2.0 * std::numbers::pi * unit(rng);
      const double radius = std::min(radial(rng), hyperbolic_radius_cap);
      return hyperbolic_from_polar(radius, angle);
    }
    case ModelKind::Tree: {
      const auto& tree = space.tree();
      if (tree.edge_count() == 0) return TreePoint{0, -1, 0.0};
      std::uniform_int_distribution<int> pick(0, tree.edge_count() - 1);
      const int e = pick(rng);
      FiniteTreeModel model{tree};
      return model.make(e, unit(rng) * tree.edge(e).length);
    }
    case ModelKind::Cayley: {
      const int rank = space.dimension();
      std::uniform_int_distribution<int> length_dist(0, cayley_radius);
      std::uniform_int_distribution<int> letter_dist(0, 2 * rank - 1);
      const int length = length_dist(rng);
      std::vector<int> letters;
      while (static_cast<int>(letters.size()) < length) {
        const int l = letter_from_order(letter_dist(rng));
        if (!letters.empty() && letters.back() == -l) continue;
        letters.push_back(l);
      }
      const Word vertex = Word::from_letters(rank, letters);
      const int l = letter_from_order(letter_dist(rng));
      const Word other = vertex * Word::generator(rank, l);
      CayleyModel model{rank};
      const auto key = *model.edge_of(vertex, other);
      const double pos = unit(rng);
      return model.make(key, key.first == vertex ? pos : 1.0 - pos);
    }
  }
  return space.kind() == ModelKind::Hyperbolic ? Point{HyperbolicPoint{}}
                                               : Point{};
}

}  // namespace hadamard
