#pragma once

#include <Eigen/Dense>

#include <array>
#include <variant>
#include <vector>

#include "hadamard/space.hpp"
#include "hadamard/word.hpp"

namespace hadamard {

/// x -> linear * x + translation, linear orthogonal.
struct EuclideanIsometry {
  Eigen::MatrixXd linear;
  Eigen::VectorXd translation;
};

/// Element of SL(2, R) acting on the hyperboloid through X -> g X g^T, where
/// X = [[x0 + x1, x2], [x2, x0 - x1]].
struct MatrixIsometry {
  std::array<double, 4> m{1.0, 0.0, 0.0, 1.0};  // row-major a b c d

  double trace() const { return m[0] + m[3]; }
  double det() const { return m[0] * m[3] - m[1] * m[2]; }
};

/// Simplicial automorphism of a finite metric tree, as a vertex permutation.
struct TreeAutomorphism {
  std::vector<int> image;
};

/// Left translation of the Cayley tree by a free-group element.
struct CayleyTranslation {
  Word by;
};

using Isometry = std::variant<EuclideanIsometry, MatrixIsometry,
                              TreeAutomorphism, CayleyTranslation>;

Isometry identity_isometry(const Space& space);

/// `outer` after `inner`.
Isometry compose(const Space& space, const Isometry& outer,
                 const Isometry& inner);
Isometry inverse(const Space& space, const Isometry& g);

Point apply(const Space& space, const Isometry& g, const Point& p);

/// Throws InvalidStructure when `g` is not an isometry of `space`
/// (wrong type, non-orthogonal, det != 1, not a tree automorphism).
void validate_isometry(const Space& space, const Isometry& g);

/// Matrix entries equal up to sign (the +-I quotient), within `tolerance`
/// on the max-abs entry difference.
bool projectively_equal(const MatrixIsometry& a, const MatrixIsometry& b,
                        double tolerance = 1e-9);

MatrixIsometry operator*(const MatrixIsometry& a, const MatrixIsometry& b);
MatrixIsometry inverse(const MatrixIsometry& g);

/// Boundary fixed points of a hyperbolic matrix (|trace| > 2), as unit
/// eigenvectors in R^2 (lines through the origin).
std::array<Eigen::Vector2d, 2> hyperbolic_endpoints(const MatrixIsometry& g);

/// Translation length 2 arccosh(|trace| / 2) for |trace| >= 2, else 0.
double translation_length(const MatrixIsometry& g);

}  // namespace hadamard
