#pragma once

#include <memory>
#include <string>
#include <vector>

#include "hadamard/isometry.hpp"
#include "hadamard/space.hpp"
#include "hadamard/word.hpp"

namespace hadamard {

enum class RepresentationKind {
  FreeOnCayleyTree,
  MatrixOnH2,
  TreeAutomorphisms,
  EuclideanAffine,
};

const char* representation_kind_name(RepresentationKind kind);
RepresentationKind parse_representation_kind(const std::string& name);

/// A homomorphism from the free group on `alphabet` into the isometry group
/// of `target`, given by the images of the generators.
///
/// Construction checks that every generator preserves distance on 10^3
/// seeded sample pairs within 1e-9.
class Representation {
 public:
  Representation(RepresentationKind kind, Space target, Alphabet alphabet,
                 std::vector<Isometry> generators);

  /// Left translation action of F_rank on its Cayley tree with unit edges.
  static Representation free_on_cayley_tree(int rank);
  static Representation matrices(std::vector<MatrixIsometry> generators,
                                 Alphabet alphabet = {});

  RepresentationKind kind() const { return kind_; }
  const Space& target() const { return target_; }
  const Alphabet& alphabet() const { return alphabet_; }
  int rank() const { return alphabet_.rank(); }
  const std::vector<Isometry>& generators() const { return generators_; }

  /// rho(g) for a word over this representation's alphabet.
  Isometry evaluate(const Word& g) const;

  /// True when every generator matrix has integer entries.
  bool integral() const;

  friend bool operator==(const Representation& a, const Representation& b);

 private:
  RepresentationKind kind_;
  Space target_;
  Alphabet alphabet_;
  std::vector<Isometry> generators_;
  std::vector<Isometry> inverses_;
};

Isometry evaluate(const Representation& rho, const Word& g);

/// d(g.y, h.y).
double orbit_distance(const Representation& rho, const Point& y, const Word& g,
                      const Word& h);

}  // namespace hadamard
