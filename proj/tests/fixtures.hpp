#pragma once

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "hadamard/equivariant.hpp"
#include "hadamard/representation.hpp"
#include "hadamard/space.hpp"

namespace fixtures {

using namespace hadamard;

inline std::vector<std::string> names(int n) {
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) out.push_back("v" + std::to_string(i));
  return out;
}

// Centre 0 with three unit legs to leaves 1, 2, 3.
inline Space tripod(double leg = 1.0) {
  return Space::metric_tree(MetricTree(
      names(4), {{0, 1, leg}, {0, 2, leg}, {0, 3, leg}}));
}

// Path 0 - 1 - 2 with lengths 2 and 3.
inline Space path_2_3() {
  return Space::metric_tree(MetricTree(names(3), {{0, 1, 2.0}, {1, 2, 3.0}}));
}

// 20 edges, irregular lengths, random attachment (fixed seed).
inline Space random_tree_20() {
  std::mt19937_64 rng(2024);
  std::vector<TreeEdge> edges;
  for (int v = 1; v <= 20; ++v) {
    std::uniform_int_distribution<int> parent(0, v - 1);
    std::uniform_real_distribution<double> len(0.25, 2.5);
    edges.push_back({parent(rng), v, len(rng)});
  }
  return Space::metric_tree(MetricTree(names(21), std::move(edges)));
}

// Spider: centre with 6 legs of two edges each (lengths 1 and 0.5); has a
// rich automorphism group (leg permutations).
inline Space spider() {
  std::vector<TreeEdge> edges;
  for (int leg = 0; leg < 6; ++leg) {
    const int mid = 1 + 2 * leg;
    edges.push_back({0, mid, 1.0});
    edges.push_back({mid, mid + 1, 0.5});
  }
  return Space::metric_tree(MetricTree(names(13), std::move(edges)));
}

// Leg permutation of the spider as a vertex permutation.
inline std::vector<int> spider_permutation(const std::vector<int>& legs) {
  std::vector<int> image(13);
  image[0] = 0;
  for (int leg = 0; leg < 6; ++leg) {
    image[static_cast<std::size_t>(1 + 2 * leg)] = 1 + 2 * legs[static_cast<std::size_t>(leg)];
    image[static_cast<std::size_t>(2 + 2 * leg)] = 2 + 2 * legs[static_cast<std::size_t>(leg)];
  }
  return image;
}

inline Point euclid(std::initializer_list<double> xs) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return EuclideanPoint{v};
}

inline Point vertex(int v) { return TreePoint{v, -1, 0.0}; }

// Two hyperbolic generators with transverse axes.
inline Representation sample_matrix_rep() {
  return Representation::matrices({MatrixIsometry{{2.0, 1.0, 1.0, 1.0}},
                                   MatrixIsometry{{1.0, 1.0, 1.0, 2.0}}});
}

inline Representation sample_affine_rep() {
  const double c = std::cos(0.7), s = std::sin(0.7);
  Eigen::MatrixXd rot(2, 2);
  rot << c, -s, s, c;
  Eigen::MatrixXd flip(2, 2);
  flip << 1, 0, 0, -1;
  return Representation(RepresentationKind::EuclideanAffine, Space::euclidean(2),
                        Alphabet::standard(2),
                        {EuclideanIsometry{rot, Eigen::Vector2d(1.0, -2.0)},
                         EuclideanIsometry{flip, Eigen::Vector2d(0.5, 0.0)}});
}

inline Representation sample_tree_rep() {
  return Representation(RepresentationKind::TreeAutomorphisms, fixtures::spider(),
                        Alphabet::standard(2),
                        {TreeAutomorphism{fixtures::spider_permutation({1, 2, 3, 4, 5, 0})},
                         TreeAutomorphism{fixtures::spider_permutation({1, 0, 2, 3, 4, 5})}});
}

inline std::vector<Representation> sample_reps() {
  return {sample_matrix_rep(), sample_affine_rep(), sample_tree_rep(),
          Representation::free_on_cayley_tree(2)};
}

inline Word random_word(std::mt19937_64& rng, int rank, int max_len) {
  std::uniform_int_distribution<int> len(0, max_len);
  std::uniform_int_distribution<int> gen(1, rank);
  std::bernoulli_distribution sign(0.5);
  std::vector<int> letters;
  const int n = len(rng);
  for (int i = 0; i < n; ++i) letters.push_back(sign(rng) ? gen(rng) : -gen(rng));
  return Word::from_letters(rank, letters);
}

// Two vertices joined by three edges: a spanning edge and one per generator.
inline FundamentalGraph theta_graph() {
  return FundamentalGraph({"A", "B"},
                          {{0, 1, 1.0, Word(2)},
                           {0, 1, 0.7, Word::generator(2, 1)},
                           {0, 1, 1.3, Word::generator(2, 2)}},
                          2);
}

}  // namespace fixtures
