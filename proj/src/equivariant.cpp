#include "hadamard/equivariant.hpp"

#include <algorithm>
#include <array>
#include <cassert>
#include <cmath>
#include <set>

#include "hadamard/errors.hpp"

namespace hadamard {

namespace {

// Integral over [p, q] of g^2 for g linear with g(p) = A, g(q) = B.
double integral_of_square(double p, double q, double a, double b) {
  return (q - p) * (a * a + a * b + b * b) / 3.0;
}

// Line through (x0, y0) and (x1, y1), evaluated at x.
double line(double x0, double y0, double x1, double y1, double x) {
  return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
}

// Lower bound for the integral of f^2 over [lo, hi] given the convex f lies
// above the listed lines (each a pair of points) and above 0.
double convex_lower_integral(double lo, double hi,
                             const std::vector<std::array<double, 4>>& lines) {
  auto g = [&](double x) {
    double best = 0.0;
    for (const auto& l : lines) best = std::max(best, line(l[0], l[1], l[2], l[3], x));
    return best;
  };
  std::vector<double> cuts{lo, hi};
  auto slope = [](const std::array<double, 4>& l) { return (l[3] - l[1]) / (l[2] - l[0]); };
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const double si = slope(lines[i]);
    const double ci = lines[i][1] - si * lines[i][0];
    if (si != 0.0) cuts.push_back(-ci / si);
    for (std::size_t j = i + 1; j < lines.size(); ++j) {
      const double sj = slope(lines[j]);
      const double cj = lines[j][1] - sj * lines[j][0];
      if (si != sj) cuts.push_back((cj - ci) / (si - sj));
    }
  }
  std::erase_if(cuts, [&](double x) { return !(x >= lo && x <= hi); });
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    total += integral_of_square(cuts[k], cuts[k + 1], g(cuts[k]), g(cuts[k + 1]));
  }
  return total;
}

void require_grid_value(double s) {
  if (!(s >= 0.0 && s <= 1.0)) {
    throw DomainError("homotopy parameter " + std::to_string(s) + " outside [0, 1]");
  }
}

}  // namespace

FundamentalGraph::FundamentalGraph(std::vector<std::string> vertex_names,
                                   std::vector<GraphEdge> edges, int rank)
    : names_(std::move(vertex_names)), edges_(std::move(edges)), rank_(rank) {
  const int n = vertex_count();
  if (n == 0) throw InvalidStructure("fundamental graph has no vertices");
  if (edges_.empty()) throw InvalidStructure("fundamental graph has no edges");
  if (std::set<std::string>(names_.begin(), names_.end()).size() != names_.size()) {
    throw InvalidStructure("duplicate vertex name in fundamental graph");
  }
  std::vector<int> degree(static_cast<std::size_t>(n), 0);
  std::vector<int> parent(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) parent[static_cast<std::size_t>(v)] = v;
  auto find = [&](int v) {
    while (parent[static_cast<std::size_t>(v)] != v) v = parent[static_cast<std::size_t>(v)];
    return v;
  };
  for (const auto& e : edges_) {
    if (e.source < 0 || e.source >= n || e.target < 0 || e.target >= n) {
      throw InvalidStructure("edge endpoint out of range");
    }
    if (!(e.length > 0.0) || !std::isfinite(e.length)) {
      throw InvalidStructure("edge length must be positive and finite");
    }
    if (e.label.rank() != rank_) {
      throw AlphabetMismatch("edge label of rank " + std::to_string(e.label.rank()) +
                             " in a graph of rank " + std::to_string(rank_));
    }
    ++degree[static_cast<std::size_t>(e.source)];
    ++degree[static_cast<std::size_t>(e.target)];
    parent[static_cast<std::size_t>(find(e.source))] = find(e.target);
  }
  for (int v = 0; v < n; ++v) {
    if (find(v) != find(0)) throw InvalidStructure("fundamental graph is not connected");
    if (degree[static_cast<std::size_t>(v)] < 2) {
      throw InvalidStructure("vertex '" + names_[static_cast<std::size_t>(v)] +
                             "' is terminal");
    }
  }
}

FundamentalGraph FundamentalGraph::bouquet(int rank) {
  std::vector<GraphEdge> edges;
  for (int i = 1; i <= rank; ++i) edges.push_back({0, 0, 1.0, Word::generator(rank, i)});
  return FundamentalGraph({"o"}, std::move(edges), rank);
}

double FundamentalGraph::total_length() const {
  double total = 0.0;
  for (const auto& e : edges_) total += e.length;
  return total;
}

EquivariantMap::EquivariantMap(FundamentalGraph graph, Representation rho,
                               std::vector<Point> images) {
  if (graph.rank() != rho.rank()) {
    throw AlphabetMismatch("graph labels have rank " + std::to_string(graph.rank()) +
                           " but the representation has rank " + std::to_string(rho.rank()));
  }
  if (static_cast<int>(images.size()) != graph.vertex_count()) {
    throw InvalidStructure("expected " + std::to_string(graph.vertex_count()) +
                           " vertex images, got " + std::to_string(images.size()));
  }
  for (const auto& p : images) rho.target().check(p);
  auto context = std::make_shared<Context>(Context{std::move(graph), std::move(rho), {}, {}});
  for (const auto& e : context->graph.edges()) {
    context->actions.push_back(context->rho.evaluate(e.label));
    context->inverse_actions.push_back(context->rho.evaluate(e.label.inverse()));
  }
  context_ = std::move(context);
  images_ = std::move(images);
}

EquivariantMap::EquivariantMap(std::shared_ptr<const Context> context,
                               std::vector<Point> images)
    : context_(std::move(context)), images_(std::move(images)) {}

const Isometry& EquivariantMap::edge_action(int e) const {
  return context_->actions.at(static_cast<std::size_t>(e));
}

const Isometry& EquivariantMap::edge_action_inverse(int e) const {
  return context_->inverse_actions.at(static_cast<std::size_t>(e));
}

Point EquivariantMap::near_endpoint(int e) const {
  return images_[static_cast<std::size_t>(graph().edges().at(static_cast<std::size_t>(e)).source)];
}

Point EquivariantMap::far_endpoint(int e) const {
  const auto& edge = graph().edges().at(static_cast<std::size_t>(e));
  return apply(space(), edge_action(e), images_[static_cast<std::size_t>(edge.target)]);
}

Point EquivariantMap::at(int e, double x) const {
  const double len = graph().edges().at(static_cast<std::size_t>(e)).length;
  if (!(x >= 0.0 && x <= len)) {
    throw DomainError("arclength " + std::to_string(x) + " outside edge of length " +
                      std::to_string(len));
  }
  return geodesic_point(space(), near_endpoint(e), far_endpoint(e), x / len);
}

EquivariantMap EquivariantMap::with_images(std::vector<Point> images) const {
  if (images.size() != images_.size()) {
    throw InvalidStructure("vertex image count changed");
  }
  for (const auto& p : images) space().check(p);
  return EquivariantMap(context_, std::move(images));
}

bool EquivariantMap::compatible(const EquivariantMap& other) const {
  return context_ == other.context_ ||
         (graph() == other.graph() && rho() == other.rho());
}

EquivariantMap build_bouquet_map(const Representation& rho, const Point& y) {
  if (rho.rank() < 1) throw InvalidStructure("bouquet needs at least one generator");
  return EquivariantMap(FundamentalGraph::bouquet(rho.rank()), rho, {y});
}

std::vector<double> edge_lengths(const EquivariantMap& u) {
  std::vector<double> out;
  for (int e = 0; e < static_cast<int>(u.graph().edges().size()); ++e) {
    out.push_back(dist(u.space(), u.near_endpoint(e), u.far_endpoint(e)));
  }
  return out;
}

std::vector<double> edge_energies(const EquivariantMap& u) {
  auto out = edge_lengths(u);
  for (std::size_t e = 0; e < out.size(); ++e) {
    out[e] = out[e] * out[e] / u.graph().edges()[e].length;
  }
  return out;
}

double length(const EquivariantMap& u) {
  double total = 0.0;
  for (double d : edge_lengths(u)) total += d;
  return total;
}

double energy(const EquivariantMap& u) {
  double total = 0.0;
  for (double e : edge_energies(u)) total += e;
  return total;
}

std::vector<DensitySample> approx_length_density(
    const Space& space, const std::function<Point(double)>& curve, double a, double b,
    double eps) {
  if (!(b > a)) throw DomainError("empty parameter interval");
  if (!(eps > 0.0)) throw DomainError("eps must be positive");
  if (eps > 0.5 * (b - a)) {
    throw DomainError("eps exceeds half the parameter interval");
  }
  const double step = eps / 4.0;
  const auto count = static_cast<long>(std::floor((b - a - 2.0 * eps) / step + 1e-9));
  std::vector<DensitySample> out;
  for (long k = 0; k <= count; ++k) {
    const double t = a + eps + static_cast<double>(k) * step;
    const Point c = curve(t);
    const double sum = dist(space, c, curve(t + eps)) + dist(space, c, curve(t - eps));
    out.push_back({t, sum / (2.0 * eps)});
  }
  return out;
}

GeodesicHomotopy::GeodesicHomotopy(EquivariantMap u, EquivariantMap v)
    : u_(std::move(u)), v_(std::move(v)) {
  if (!u_.compatible(v_)) {
    throw InvalidStructure("homotopy endpoints differ in graph or representation");
  }
}

EquivariantMap GeodesicHomotopy::at(double s) const {
  require_grid_value(s);
  std::vector<Point> images;
  for (std::size_t i = 0; i < u_.images().size(); ++i) {
    images.push_back(geodesic_point(u_.space(), u_.images()[i], v_.images()[i], s));
  }
  return u_.with_images(std::move(images));
}

Point GeodesicHomotopy::point(double s, int edge, double x) const {
  return geodesic_point(u_.space(), u_.at(edge, x), v_.at(edge, x), s);
}

double GeodesicHomotopy::track_length(int edge, double x) const {
  return dist(u_.space(), u_.at(edge, x), v_.at(edge, x));
}

double homotopy_width_inf(const GeodesicHomotopy& h) {
  const auto& u = h.u();
  const auto& v = h.v();
  double best = 0.0;
  for (std::size_t i = 0; i < u.images().size(); ++i) {
    best = std::max(best, dist(u.space(), u.images()[i], v.images()[i]));
  }
  for (int e = 0; e < static_cast<int>(u.graph().edges().size()); ++e) {
    best = std::max(best, dist(u.space(), u.far_endpoint(e), v.far_endpoint(e)));
  }
#ifndef NDEBUG
  assert(sampled_width_inf(h, 64) <= best + 1e-9 * std::max(1.0, best));
#endif
  return best;
}

double sampled_width_inf(const GeodesicHomotopy& h, int samples) {
  if (samples < 2) throw DomainError("need at least two samples per edge");
  double best = 0.0;
  const auto& edges = h.u().graph().edges();
  for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
    const double len = edges[static_cast<std::size_t>(e)].length;
    for (int k = 0; k < samples; ++k) {
      const double x = len * k / (samples - 1);
      best = std::max(best, h.track_length(e, x));
    }
  }
  return best;
}

Width2 homotopy_width_2(const GeodesicHomotopy& h, int samples_per_edge) {
  const int k = samples_per_edge;
  if (k < 2 || k % 2 != 0) {
    throw DomainError("Simpson needs an even number of subintervals >= 2, got " +
                      std::to_string(k));
  }
  double simpson = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  const auto& edges = h.u().graph().edges();
  std::vector<double> f(static_cast<std::size_t>(k) + 1);
  for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
    const double len = edges[static_cast<std::size_t>(e)].length;
    const double step = len / k;
    auto x = [&](int j) { return j == k ? len : step * j; };
    for (int j = 0; j <= k; ++j) f[static_cast<std::size_t>(j)] = h.track_length(e, x(j));
    auto fj = [&](int j) { return f[static_cast<std::size_t>(j)]; };

    double s = fj(0) * fj(0) + fj(k) * fj(k);
    for (int j = 1; j < k; ++j) s += (j % 2 == 1 ? 4.0 : 2.0) * fj(j) * fj(j);
    simpson += s * step / 3.0;

    // Convexity: f lies below each chord and above the extensions of the
    // neighbouring chords.
    for (int j = 0; j < k; ++j) {
      upper += integral_of_square(x(j), x(j + 1), fj(j), fj(j + 1));
      std::vector<std::array<double, 4>> lines;
      if (j >= 1) lines.push_back({x(j - 1), fj(j - 1), x(j), fj(j)});
      if (j + 2 <= k) lines.push_back({x(j + 1), fj(j + 1), x(j + 2), fj(j + 2)});
      lower += convex_lower_integral(x(j), x(j + 1), lines);
    }
  }
  Width2 out;
  out.value = std::sqrt(simpson);
  out.lower = std::sqrt(std::min(lower, simpson));
  out.upper = std::sqrt(std::max(upper, simpson));
  out.error_bound = std::max(out.value - out.lower, out.upper - out.value);
  return out;
}

std::vector<ConvexityRow> convexity_report(const GeodesicHomotopy& h,
                                           const std::vector<double>& s_grid) {
  for (double s : s_grid) require_grid_value(s);
  const double lu = length(h.u()), lv = length(h.v());
  const double eu = std::sqrt(energy(h.u())), ev = std::sqrt(energy(h.v()));
  std::vector<ConvexityRow> rows;
  for (double s : s_grid) {
    const EquivariantMap hs = h.at(s);
    const double l = length(hs);
    const double e = energy(hs);
    rows.push_back({s, l, e, l <= (1.0 - s) * lu + s * lv + 1e-9,
                    std::sqrt(e) <= (1.0 - s) * eu + s * ev + 1e-9});
  }
  return rows;
}

}  // namespace hadamard
