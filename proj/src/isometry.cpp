#include "hadamard/isometry.hpp"

#include <algorithm>
#include <cmath>

#include "hadamard/errors.hpp"

namespace hadamard {

namespace {

template <typename T>
const T& isometry_as(const Isometry& g, const char* what) {
  if (const auto* v = std::get_if<T>(&g)) return *v;
  throw ModelMismatch(std::string("isometry is not a ") + what);
}

void check_kind(const Space& space, const Isometry& g) {
  const bool ok =
      (space.kind() == ModelKind::Euclidean &&
       std::holds_alternative<EuclideanIsometry>(g)) ||
      (space.kind() == ModelKind::Hyperbolic &&
       std::holds_alternative<MatrixIsometry>(g)) ||
      (space.kind() == ModelKind::Tree &&
       std::holds_alternative<TreeAutomorphism>(g)) ||
      (space.kind() == ModelKind::Cayley &&
       std::holds_alternative<CayleyTranslation>(g));
  if (!ok) {
    throw ModelMismatch(std::string("isometry does not act on a ") +
                        model_name(space.kind()) + " space");
  }
}

HyperbolicPoint act(const MatrixIsometry& g, const HyperbolicPoint& p) {
  if (g.m == MatrixIsometry{}.m) return p;
  const double a = g.m[0], b = g.m[1], c = g.m[2], d = g.m[3];
  const double xp = p.x[0] + p.x[1];
  const double xq = p.x[0] - p.x[1];
  const double xr = p.x[2];
  const double y00 = a * a * xp + 2.0 * a * b * xr + b * b * xq;
  const double y11 = c * c * xp + 2.0 * c * d * xr + d * d * xq;
  const double y01 = a * c * xp + (a * d + b * c) * xr + b * d * xq;
  return normalized(HyperbolicPoint{{0.5 * (y00 + y11), 0.5 * (y00 - y11), y01}});
}

TreePoint act(const MetricTree& tree, const TreeAutomorphism& g,
              const TreePoint& p) {
  if (p.edge < 0) return TreePoint{g.image[static_cast<std::size_t>(p.vertex)], -1, 0.0};
  const auto& e = tree.edge(p.edge);
  const int a = g.image[static_cast<std::size_t>(e.a)];
  const int b = g.image[static_cast<std::size_t>(e.b)];
  const int image_edge = tree.edge_between(a, b);
  const auto& f = tree.edge(image_edge);
  return TreePoint{-1, image_edge, f.a == a ? p.offset : f.length - p.offset};
}

CayleyPoint act(int rank, const CayleyTranslation& g, const CayleyPoint& p) {
  const Word lower = g.by * p.base;
  if (p.letter == 0) return CayleyPoint{lower, 0, 0.0};
  const Word upper = lower * Word::generator(rank, p.letter);
  if (upper.length() == lower.length() + 1) {
    return CayleyPoint{lower, p.letter, p.offset};
  }
  return CayleyPoint{upper, -p.letter, 1.0 - p.offset};
}

}  // namespace

MatrixIsometry operator*(const MatrixIsometry& x, const MatrixIsometry& y) {
  return MatrixIsometry{{x.m[0] * y.m[0] + x.m[1] * y.m[2],
                         x.m[0] * y.m[1] + x.m[1] * y.m[3],
                         x.m[2] * y.m[0] + x.m[3] * y.m[2],
                         x.m[2] * y.m[1] + x.m[3] * y.m[3]}};
}

MatrixIsometry inverse(const MatrixIsometry& g) {
  const double det = g.det();
  return MatrixIsometry{{g.m[3] / det, -g.m[1] / det, -g.m[2] / det, g.m[0] / det}};
}

Isometry identity_isometry(const Space& space) {
  switch (space.kind()) {
    case ModelKind::Euclidean: {
      const int n = space.dimension();
      return EuclideanIsometry{Eigen::MatrixXd::Identity(n, n),
                               Eigen::VectorXd::Zero(n)};
    }
    case ModelKind::Hyperbolic:
      return MatrixIsometry{};
    case ModelKind::Tree: {
      TreeAutomorphism id;
      id.image.resize(static_cast<std::size_t>(space.tree().vertex_count()));
      for (std::size_t v = 0; v < id.image.size(); ++v) id.image[v] = static_cast<int>(v);
      return id;
    }
    case ModelKind::Cayley:
      return CayleyTranslation{Word(space.dimension())};
  }
  return MatrixIsometry{};
}

Isometry compose(const Space& space, const Isometry& outer,
                 const Isometry& inner) {
  check_kind(space, outer);
  check_kind(space, inner);
  switch (space.kind()) {
    case ModelKind::Euclidean: {
      const auto& o = std::get<EuclideanIsometry>(outer);
      const auto& i = std::get<EuclideanIsometry>(inner);
      return EuclideanIsometry{o.linear * i.linear,
                               o.linear * i.translation + o.translation};
    }
    case ModelKind::Hyperbolic:
      return std::get<MatrixIsometry>(outer) * std::get<MatrixIsometry>(inner);
    case ModelKind::Tree: {
      const auto& o = std::get<TreeAutomorphism>(outer);
      const auto& i = std::get<TreeAutomorphism>(inner);
      TreeAutomorphism out;
      out.image.resize(i.image.size());
      for (std::size_t v = 0; v < i.image.size(); ++v) {
        out.image[v] = o.image[static_cast<std::size_t>(i.image[v])];
      }
      return out;
    }
    case ModelKind::Cayley:
      return CayleyTranslation{std::get<CayleyTranslation>(outer).by *
                               std::get<CayleyTranslation>(inner).by};
  }
  return outer;
}

Isometry inverse(const Space& space, const Isometry& g) {
  check_kind(space, g);
  switch (space.kind()) {
    case ModelKind::Euclidean: {
      const auto& e = std::get<EuclideanIsometry>(g);
      const Eigen::MatrixXd lt = e.linear.transpose();
      return EuclideanIsometry{lt, -(lt * e.translation)};
    }
    case ModelKind::Hyperbolic:
      return inverse(std::get<MatrixIsometry>(g));
    case ModelKind::Tree: {
      const auto& t = std::get<TreeAutomorphism>(g);
      TreeAutomorphism out;
      out.image.resize(t.image.size());
      for (std::size_t v = 0; v < t.image.size(); ++v) {
        out.image[static_cast<std::size_t>(t.image[v])] = static_cast<int>(v);
      }
      return out;
    }
    case ModelKind::Cayley:
      return CayleyTranslation{std::get<CayleyTranslation>(g).by.inverse()};
  }
  return g;
}

Point apply(const Space& space, const Isometry& g, const Point& p) {
  check_kind(space, g);
  space.check(p);
  switch (space.kind()) {
    case ModelKind::Euclidean: {
      const auto& e = std::get<EuclideanIsometry>(g);
      return EuclideanPoint{e.linear * std::get<EuclideanPoint>(p).x + e.translation};
    }
    case ModelKind::Hyperbolic:
      return act(std::get<MatrixIsometry>(g), std::get<HyperbolicPoint>(p));
    case ModelKind::Tree:
      return act(space.tree(), std::get<TreeAutomorphism>(g), std::get<TreePoint>(p));
    case ModelKind::Cayley:
      return act(space.dimension(), std::get<CayleyTranslation>(g),
                 std::get<CayleyPoint>(p));
  }
  return p;
}

void validate_isometry(const Space& space, const Isometry& g) {
  try {
    check_kind(space, g);
  } catch (const ModelMismatch& e) {
    throw InvalidStructure(e.what());
  }
  switch (space.kind()) {
    case ModelKind::Euclidean: {
      const auto& e = std::get<EuclideanIsometry>(g);
      const int n = space.dimension();
      if (e.linear.rows() != n || e.linear.cols() != n || e.translation.size() != n) {
        throw InvalidStructure("Euclidean isometry has wrong dimensions");
      }
      const Eigen::MatrixXd gram = e.linear.transpose() * e.linear;
      if ((gram - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() > 1e-9) {
        throw InvalidStructure("Euclidean linear part is not orthogonal");
      }
      return;
    }
    case ModelKind::Hyperbolic: {
      const auto& m = std::get<MatrixIsometry>(g);
      for (double x : m.m) {
        if (!std::isfinite(x)) throw InvalidStructure("non-finite matrix entry");
      }
      if (std::abs(m.det() - 1.0) > 1e-9) {
        throw InvalidStructure("matrix determinant is not 1");
      }
      return;
    }
    case ModelKind::Tree: {
      const auto& tree = space.tree();
      const auto& t = std::get<TreeAutomorphism>(g);
      if (static_cast<int>(t.image.size()) != tree.vertex_count()) {
        throw InvalidStructure("tree automorphism has wrong vertex count");
      }
      std::vector<bool> hit(t.image.size(), false);
      for (int v : t.image) {
        if (v < 0 || v >= tree.vertex_count() || hit[static_cast<std::size_t>(v)]) {
          throw InvalidStructure("tree automorphism is not a permutation");
        }
        hit[static_cast<std::size_t>(v)] = true;
      }
      for (const auto& e : tree.edges()) {
        const int f = tree.edge_between(t.image[static_cast<std::size_t>(e.a)],
                                        t.image[static_cast<std::size_t>(e.b)]);
        if (f < 0 || tree.edge(f).length != e.length) {
          throw InvalidStructure("vertex permutation does not preserve edges");
        }
      }
      return;
    }
    case ModelKind::Cayley:
      if (std::get<CayleyTranslation>(g).by.rank() != space.dimension()) {
        throw InvalidStructure("translation word over the wrong rank");
      }
      return;
  }
}

bool projectively_equal(const MatrixIsometry& a, const MatrixIsometry& b,
                        double tolerance) {
  double same = 0.0;
  double flipped = 0.0;
  for (int i = 0; i < 4; ++i) {
    same = std::max(same, std::abs(a.m[i] - b.m[i]));
    flipped = std::max(flipped, std::abs(a.m[i] + b.m[i]));
  }
  return std::min(same, flipped) <= tolerance;
}

std::array<Eigen::Vector2d, 2> hyperbolic_endpoints(const MatrixIsometry& g) {
  const double tr = g.trace();
  const double disc = tr * tr - 4.0 * g.det();
  if (!(disc > 0.0)) throw DomainError("matrix is not hyperbolic");
  const double root = std::sqrt(disc);
  std::array<Eigen::Vector2d, 2> out;
  const double lambdas[2] = {0.5 * (tr + root), 0.5 * (tr - root)};
  for (int k = 0; k < 2; ++k) {
    const double lambda = lambdas[k];
    Eigen::Vector2d v(g.m[1], lambda - g.m[0]);
    const Eigen::Vector2d w(lambda - g.m[3], g.m[2]);
    if (w.norm() > v.norm()) v = w;
    v.normalize();
    if (v[0] < 0.0 || (v[0] == 0.0 && v[1] < 0.0)) v = -v;
    out[static_cast<std::size_t>(k)] = v;
  }
  return out;
}

double translation_length(const MatrixIsometry& g) {
  const double half = 0.5 * std::abs(g.trace());
  return half <= 1.0 ? 0.0 : 2.0 * std::acosh(half);
}

}  // namespace hadamard
