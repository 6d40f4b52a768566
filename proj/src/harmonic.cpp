#include "hadamard/harmonic.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <thread>

#include "hadamard/errors.hpp"
#include "hadamard/seed.hpp"

namespace hadamard {

namespace {

// Terms of F that involve one vertex image y: w d^2(y, a) for edges to other
// vertices (a is the neighbour image moved into y's frame), and
// w d^2(y, g y) for loops.
struct LocalObjective {
  struct Anchor {
    Point point;
    double weight;
  };
  struct Loop {
    Isometry g;
    Isometry g_inv;
    double weight;
  };

  const Space& space;
  std::vector<Anchor> anchors;
  std::vector<Loop> loops;

  double operator()(const Point& y) const {
    double total = 0.0;
    for (const auto& a : anchors) {
      const double d = dist(space, y, a.point);
      total += a.weight * d * d;
    }
    for (const auto& l : loops) {
      const double d = dist(space, y, apply(space, l.g, y));
      total += l.weight * d * d;
    }
    return total;
  }
};

LocalObjective local_objective(const EquivariantMap& u, const std::vector<Point>& images,
                               int v) {
  LocalObjective obj{u.space(), {}, {}};
  const auto& edges = u.graph().edges();
  for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
    const auto& edge = edges[static_cast<std::size_t>(e)];
    const double w = 1.0 / edge.length;
    if (edge.source == v && edge.target == v) {
      obj.loops.push_back({u.edge_action(e), u.edge_action_inverse(e), w});
    } else if (edge.source == v) {
      obj.anchors.push_back(
          {apply(u.space(), u.edge_action(e), images[static_cast<std::size_t>(edge.target)]), w});
    } else if (edge.target == v) {
      obj.anchors.push_back(
          {apply(u.space(), u.edge_action_inverse(e), images[static_cast<std::size_t>(edge.source)]),
           w});
    }
  }
  return obj;
}

// The local objective is a convex quadratic; take the minimum-norm step to
// one of its minimisers.
Point minimize_euclidean(const LocalObjective& obj, const Point& start) {
  const Eigen::VectorXd y = std::get<EuclideanPoint>(start).x;
  const auto n = y.size();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd r = Eigen::VectorXd::Zero(n);
  for (const auto& a : obj.anchors) {
    m.diagonal().array() += a.weight;
    r += a.weight * std::get<EuclideanPoint>(a.point).x;
  }
  for (const auto& l : obj.loops) {
    const auto& g = std::get<EuclideanIsometry>(l.g);
    const Eigen::MatrixXd b = Eigen::MatrixXd::Identity(n, n) - g.linear;
    m += l.weight * b.transpose() * b;
    r += l.weight * b.transpose() * g.translation;
  }
  const Eigen::VectorXd step = m.completeOrthogonalDecomposition().solve(r - m * y);
  return EuclideanPoint{y + step};
}

Tangent3 scaled(const Tangent3& v, double s) { return {v[0] * s, v[1] * s, v[2] * s}; }

Tangent3 hyperbolic_gradient(const LocalObjective& obj, const HyperbolicPoint& y) {
  Tangent3 g{0.0, 0.0, 0.0};
  auto add = [&](const Tangent3& v, double w) {
    for (int i = 0; i < 3; ++i) g[static_cast<std::size_t>(i)] -= 2.0 * w * v[static_cast<std::size_t>(i)];
  };
  for (const auto& a : obj.anchors) {
    add(hyperbolic_log(y, std::get<HyperbolicPoint>(a.point)), a.weight);
  }
  for (const auto& l : obj.loops) {
    const auto& gm = std::get<MatrixIsometry>(l.g);
    const auto& gi = std::get<MatrixIsometry>(l.g_inv);
    add(hyperbolic_log(y, std::get<HyperbolicPoint>(apply(obj.space, gm, y))), l.weight);
    add(hyperbolic_log(y, std::get<HyperbolicPoint>(apply(obj.space, gi, y))), l.weight);
  }
  return g;
}

// Riemannian gradient descent with Armijo backtracking.
Point minimize_hyperbolic(const LocalObjective& obj, const Point& start, double tolerance) {
  double weights = 0.0;
  for (const auto& a : obj.anchors) weights += a.weight;
  for (const auto& l : obj.loops) weights += 2.0 * l.weight;
  if (weights == 0.0) return start;
  const double initial_step = 1.0 / (2.0 * weights);

  auto y = std::get<HyperbolicPoint>(start);
  double f = obj(y);
  for (int it = 0; it < 1000; ++it) {
    const Tangent3 grad = hyperbolic_gradient(obj, y);
    const double norm2 = std::max(0.0, -minkowski_dot(grad, grad));
    const double norm = std::sqrt(norm2);
    if (norm == 0.0) break;
    double step = initial_step;
    bool moved = false;
    while (step * norm >= tolerance) {
      const HyperbolicPoint next = hyperbolic_exp(y, scaled(grad, -step));
      const double fn = obj(next);
      if (fn <= f - 1e-4 * step * norm2) {
        y = next;
        f = fn;
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved || step * norm < tolerance) break;
  }
  return y;
}

// The objective is convex on the tree; search each edge piece of the hull
// spanned by `start`, the anchors and the loop translates of `start`.
Point minimize_tree(const LocalObjective& obj, const Point& start, double tolerance) {
  Point y = start;
  double f = obj(y);
  for (int round = 0; round < 100; ++round) {
    std::vector<Point> targets;
    for (const auto& a : obj.anchors) targets.push_back(a.point);
    for (const auto& l : obj.loops) {
      targets.push_back(apply(obj.space, l.g, y));
      targets.push_back(apply(obj.space, l.g_inv, y));
    }
    Point best = y;
    double best_f = f;
    for (const auto& target : targets) {
      const auto path = geodesic_waypoints(obj.space, y, target);
      for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        const auto& p = path[i];
        const auto& q = path[i + 1];
        const auto m = minimize_convex(
            [&](double t) { return obj(geodesic_point(obj.space, p, q, t)); }, 0.0, 1.0,
            tolerance);
        if (m.value < best_f) {
          best_f = m.value;
          best = geodesic_point(obj.space, p, q, m.t);
        }
      }
    }
    const double moved = dist(obj.space, y, best);
    y = best;
    f = best_f;
    if (moved < tolerance) break;
  }
  return y;
}

Point minimize_local(const LocalObjective& obj, const Point& start, double tolerance) {
  switch (obj.space.kind()) {
    case ModelKind::Euclidean: return minimize_euclidean(obj, start);
    case ModelKind::Hyperbolic: return minimize_hyperbolic(obj, start, tolerance);
    case ModelKind::Tree:
    case ModelKind::Cayley: return minimize_tree(obj, start, tolerance);
  }
  throw CapabilityError("relaxation is not available for this space");
}

Point random_direction_target(const Space& space, const Point& y, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  if (space.kind() == ModelKind::Euclidean) {
    const auto& x = std::get<EuclideanPoint>(y).x;
    Eigen::VectorXd v(x.size());
    for (auto& c : v) c = normal(rng);
    return EuclideanPoint{x + v.normalized()};
  }
  if (space.kind() == ModelKind::Hyperbolic) {
    const auto& p = std::get<HyperbolicPoint>(y);
    Tangent3 w{normal(rng), normal(rng), normal(rng)};
    const double along = minkowski_dot(w, p.x);
    for (int i = 0; i < 3; ++i) w[static_cast<std::size_t>(i)] -= along * p.x[static_cast<std::size_t>(i)];
    const double n = std::sqrt(std::max(0.0, -minkowski_dot(w, w)));
    return hyperbolic_exp(p, scaled(w, 1.0 / n));
  }
  return PointSampler{}(space, rng);
}

}  // namespace

void RelaxationConfig::validate() const {
  if (max_iterations < 1) throw ConfigError("max_iterations must be at least 1");
  if (!(displacement_tolerance > 0.0)) throw ConfigError("displacement_tolerance must be positive");
  if (!(inner_tolerance > 0.0)) throw ConfigError("inner_tolerance must be positive");
}

HarmonicResult relax(const EquivariantMap& u0, const RelaxationConfig& cfg) {
  cfg.validate();
  std::vector<Point> images = u0.images();
  double current = energy(u0);
  HarmonicResult result{u0, 0.0, 0.0, 0, false, {current}, cfg};
  for (int sweep = 1; sweep <= cfg.max_iterations; ++sweep) {
    double max_move = 0.0;
    for (int v = 0; v < u0.graph().vertex_count(); ++v) {
      const auto obj = local_objective(u0, images, v);
      const Point old = images[static_cast<std::size_t>(v)];
      const Point next = minimize_local(obj, old, cfg.inner_tolerance);
      if (!(obj(next) < obj(old))) continue;
      // The local and global sums round differently; the global one decides,
      // so the recorded trace is monotone.
      images[static_cast<std::size_t>(v)] = next;
      const double candidate = energy(u0.with_images(images));
      if (candidate < current) {
        current = candidate;
        max_move = std::max(max_move, dist(u0.space(), old, next));
      } else {
        images[static_cast<std::size_t>(v)] = old;
      }
    }
    result.iterations = sweep;
    result.energy_trace.push_back(current);
    if (max_move < cfg.displacement_tolerance) {
      result.converged = true;
      break;
    }
  }
  result.map = u0.with_images(std::move(images));
  result.E_star = energy(result.map);
  result.L_star = length(result.map);
  return result;
}

double stationarity_probe(const EquivariantMap& u, std::uint64_t seed, int directions,
                          double step) {
  std::mt19937_64 rng(seed);
  const double base = energy(u);
  double worst = 0.0;
  for (std::size_t v = 0; v < u.images().size(); ++v) {
    const Point& y = u.images()[v];
    auto targets = local_directions(u.space(), y);
    if (static_cast<int>(targets.size()) > directions) targets.resize(static_cast<std::size_t>(directions));
    while (static_cast<int>(targets.size()) < directions) {
      targets.push_back(random_direction_target(u.space(), y, rng));
    }
    for (const auto& target : targets) {
      const double d = dist(u.space(), y, target);
      if (d == 0.0) continue;
      auto images = u.images();
      images[v] = geodesic_point(u.space(), y, target, std::min(1.0, step / d));
      worst = std::max(worst, base - energy(u.with_images(std::move(images))));
    }
  }
  return worst;
}

HomotopyEnergyReport verify_harmonic_homotopy(const HarmonicResult& r1,
                                              const HarmonicResult& r2,
                                              const std::vector<double>& s_grid) {
  if (!r1.converged || !r2.converged) {
    throw PreconditionError("both relaxation results must have converged");
  }
  const GeodesicHomotopy h(r1.map, r2.map);
  HomotopyEnergyReport report;
  report.E_star = r1.E_star;
  report.tolerance = std::max(1e-6, 10.0 * r1.config.displacement_tolerance * r1.E_star);
  for (double s : s_grid) {
    const double e = energy(h.at(s));
    report.rows.push_back({s, e});
    report.max_deviation = std::max(report.max_deviation, std::abs(e - r1.E_star));
  }
  report.holds = report.max_deviation <= report.tolerance;
  return report;
}

MainLemmaRatio main_lemma_ratio(const EquivariantMap& u, const HarmonicResult& r) {
  if (!u.compatible(r.map)) {
    throw InvalidStructure("map and harmonic result differ in graph or representation");
  }
  if (!r.converged) throw PreconditionError("harmonic result has not converged");
  const HarmonicResult nearby = relax(u, r.config);
  MainLemmaRatio out;
  out.refined_converged = nearby.converged;
  out.d_inf = homotopy_width_inf(GeodesicHomotopy(u, nearby.map));
  out.length_excess = length(u) - r.L_star;
  if (out.length_excess > 1e-12) out.ratio = out.d_inf / out.length_excess;
  return out;
}

void require_no_fixed_ideal_point(const Representation& rho) {
  const Space& space = rho.target();
  bool trivial = true;
  for (const auto& g : rho.generators()) {
    if (space.kind() == ModelKind::Hyperbolic) {
      trivial = trivial && projectively_equal(std::get<MatrixIsometry>(g), MatrixIsometry{});
    } else if (space.kind() == ModelKind::Euclidean) {
      const auto& e = std::get<EuclideanIsometry>(g);
      trivial = trivial && e.linear.isIdentity(1e-12) && e.translation.isZero(1e-12);
    } else if (space.kind() == ModelKind::Tree) {
      const auto& t = std::get<TreeAutomorphism>(g);
      for (std::size_t v = 0; v < t.image.size(); ++v) trivial = trivial && t.image[v] == static_cast<int>(v);
    } else {
      trivial = trivial && std::get<CayleyTranslation>(g).by.is_identity();
    }
  }
  if (trivial) throw PreconditionError("the representation has trivial image");

  switch (space.kind()) {
    case ModelKind::Euclidean: {
      // x -> Ax + b fixes the ideal point in direction v iff Av = v.
      const int n = space.dimension();
      Eigen::MatrixXd stacked(n * rho.rank(), n);
      for (int i = 0; i < rho.rank(); ++i) {
        const auto& e = std::get<EuclideanIsometry>(rho.generators()[static_cast<std::size_t>(i)]);
        stacked.block(i * n, 0, n, n) = e.linear - Eigen::MatrixXd::Identity(n, n);
      }
      const Eigen::JacobiSVD<Eigen::MatrixXd> svd(stacked);
      if (svd.singularValues().minCoeff() < 1e-9) {
        throw PreconditionError(
            "the linear parts share a fixed direction, so the image fixes a point at infinity");
      }
      return;
    }
    case ModelKind::Hyperbolic: {
      std::vector<std::array<Eigen::Vector2d, 2>> axes;
      BallEnumerator ball(rho.rank(), 2);
      while (auto w = ball.next()) {
        const auto m = std::get<MatrixIsometry>(rho.evaluate(*w));
        if (std::abs(m.trace()) > 2.0 + 1e-9) axes.push_back(hyperbolic_endpoints(m));
      }
      auto same_line = [](const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
        return std::abs(a[0] * b[1] - a[1] * b[0]) < 1e-9;
      };
      for (std::size_t i = 0; i < axes.size(); ++i) {
        for (std::size_t j = i + 1; j < axes.size(); ++j) {
          bool disjoint = true;
          for (const auto& p : axes[i]) {
            for (const auto& q : axes[j]) disjoint = disjoint && !same_line(p, q);
          }
          if (disjoint) return;
        }
      }
      throw PreconditionError(
          "no two hyperbolic elements of word length <= 2 have disjoint axis endpoints");
    }
    case ModelKind::Tree:
      return;  // a finite tree has no ideal boundary
    case ModelKind::Cayley:
      if (rho.rank() < 2) {
        throw PreconditionError("a single generator fixes both ends of its axis");
      }
      return;
  }
}

double width_ratio(const EquivariantMap& u, const EquivariantMap& v) {
  const double w = homotopy_width_inf(GeodesicHomotopy(u, v));
  const double l = length(u) + length(v);
  if (l == 0.0) return w == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return w / l;
}

WidthEstimate estimate_width_constant(const Representation& rho,
                                      const WidthEstimateConfig& cfg) {
  if (cfg.trials < 1) throw ConfigError("trials must be at least 1");
  if (cfg.threads < 1) throw ConfigError("threads must be at least 1");
  require_no_fixed_ideal_point(rho);
  std::mt19937_64 base_rng(cfg.seed);
  const EquivariantMap base = build_bouquet_map(rho, cfg.sampler(rho.target(), base_rng));

  WidthEstimate out;
  out.samples.resize(static_cast<std::size_t>(cfg.trials));
  auto run = [&](int first, int stride) {
    for (int i = first; i < cfg.trials; i += stride) {
      const std::uint64_t seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(i));
      std::mt19937_64 rng(seed);
      const EquivariantMap u = base.with_images({cfg.sampler(rho.target(), rng)});
      const EquivariantMap v = base.with_images({cfg.sampler(rho.target(), rng)});
      const double lu = length(u), lv = length(v);
      out.samples[static_cast<std::size_t>(i)] = {
          i, seed, lu, lv, homotopy_width_inf(GeodesicHomotopy(u, v)), width_ratio(u, v)};
    }
  };
  const int workers = std::min(cfg.threads, cfg.trials);
  if (workers == 1) {
    run(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < workers; ++t) pool.emplace_back(run, t, workers);
  }
  for (const auto& s : out.samples) out.c_hat = std::max(out.c_hat, s.ratio);
  return out;
}

}  // namespace hadamard
