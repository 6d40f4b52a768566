#include "hadamard/representation.hpp"

#include <cmath>
#include <random>

#include "hadamard/errors.hpp"

namespace hadamard {

namespace {

constexpr std::uint64_t kIsometryCheckSeed = 0x15e7'0b1f'c4ecULL;
constexpr int kIsometryCheckSamples = 1000;

bool same_isometry(const Isometry& a, const Isometry& b) {
  if (a.index() != b.index()) return false;
  if (const auto* x = std::get_if<EuclideanIsometry>(&a)) {
    const auto& y = std::get<EuclideanIsometry>(b);
    return x->linear == y.linear && x->translation == y.translation;
  }
  if (const auto* x = std::get_if<MatrixIsometry>(&a)) {
    return x->m == std::get<MatrixIsometry>(b).m;
  }
  if (const auto* x = std::get_if<TreeAutomorphism>(&a)) {
    return x->image == std::get<TreeAutomorphism>(b).image;
  }
  return std::get<CayleyTranslation>(a).by == std::get<CayleyTranslation>(b).by;
}

ModelKind expected_model(RepresentationKind kind) {
  switch (kind) {
    case RepresentationKind::FreeOnCayleyTree: return ModelKind::Cayley;
    case RepresentationKind::MatrixOnH2: return ModelKind::Hyperbolic;
    case RepresentationKind::TreeAutomorphisms: return ModelKind::Tree;
    case RepresentationKind::EuclideanAffine: return ModelKind::Euclidean;
  }
  return ModelKind::Euclidean;
}

}  // namespace

const char* representation_kind_name(RepresentationKind kind) {
  switch (kind) {
    case RepresentationKind::FreeOnCayleyTree: return "free-on-cayley-tree";
    case RepresentationKind::MatrixOnH2: return "matrix-on-H2";
    case RepresentationKind::TreeAutomorphisms: return "tree-automorphisms";
    case RepresentationKind::EuclideanAffine: return "euclidean-affine";
  }
  return "unknown";
}

RepresentationKind parse_representation_kind(const std::string& name) {
  for (auto kind : {RepresentationKind::FreeOnCayleyTree, RepresentationKind::MatrixOnH2,
                    RepresentationKind::TreeAutomorphisms,
                    RepresentationKind::EuclideanAffine}) {
    if (name == representation_kind_name(kind)) return kind;
  }
  throw ParseError("unknown representation kind '" + name + "'");
}

Representation::Representation(RepresentationKind kind, Space target,
                               Alphabet alphabet, std::vector<Isometry> generators)
    : kind_(kind),
      target_(std::move(target)),
      alphabet_(std::move(alphabet)),
      generators_(std::move(generators)) {
  if (target_.kind() != expected_model(kind_)) {
    throw InvalidStructure(std::string(representation_kind_name(kind_)) +
                           " representation needs a " +
                           model_name(expected_model(kind_)) + " target");
  }
  if (static_cast<int>(generators_.size()) != alphabet_.rank()) {
    throw InvalidStructure("representation has " +
                           std::to_string(generators_.size()) +
                           " generators for an alphabet of rank " +
                           std::to_string(alphabet_.rank()));
  }
  if (kind_ == RepresentationKind::FreeOnCayleyTree) {
    if (target_.dimension() != alphabet_.rank()) {
      throw InvalidStructure("Cayley tree rank differs from the alphabet rank");
    }
    for (int i = 0; i < alphabet_.rank(); ++i) {
      const auto* t = std::get_if<CayleyTranslation>(&generators_[static_cast<std::size_t>(i)]);
      if (t == nullptr || !(t->by == Word::generator(alphabet_.rank(), i + 1))) {
        throw InvalidStructure("free-on-cayley-tree generators must translate by "
                               "the corresponding letters");
      }
    }
  }
  for (const auto& g : generators_) validate_isometry(target_, g);

  std::mt19937_64 rng(kIsometryCheckSeed);
  const PointSampler sampler;
  for (std::size_t i = 0; i < generators_.size(); ++i) {
    const auto& g = generators_[i];
    for (int k = 0; k < kIsometryCheckSamples; ++k) {
      const Point p = sampler(target_, rng);
      const Point q = sampler(target_, rng);
      const double before = dist(target_, p, q);
      const double after = dist(target_, apply(target_, g, p), apply(target_, g, q));
      if (std::abs(after - before) > 1e-9 * std::max(1.0, before)) {
        throw InvalidStructure("generator " + std::to_string(i + 1) +
                               " does not preserve distances");
      }
    }
    inverses_.push_back(inverse(target_, g));
  }
}

Representation Representation::free_on_cayley_tree(int rank) {
  std::vector<Isometry> gens;
  for (int i = 1; i <= rank; ++i) gens.emplace_back(CayleyTranslation{Word::generator(rank, i)});
  return Representation(RepresentationKind::FreeOnCayleyTree, Space::cayley_tree(rank),
                        Alphabet::standard(rank), std::move(gens));
}

Representation Representation::matrices(std::vector<MatrixIsometry> generators,
                                        Alphabet alphabet) {
  if (alphabet.rank() == 0) alphabet = Alphabet::standard(static_cast<int>(generators.size()));
  std::vector<Isometry> gens(generators.begin(), generators.end());
  return Representation(RepresentationKind::MatrixOnH2, Space::hyperbolic_plane(),
                        std::move(alphabet), std::move(gens));
}

Isometry Representation::evaluate(const Word& g) const {
  if (g.rank() != rank()) {
    throw AlphabetMismatch("word of rank " + std::to_string(g.rank()) +
                           " evaluated in a representation of rank " +
                           std::to_string(rank()));
  }
  if (kind_ == RepresentationKind::FreeOnCayleyTree) return CayleyTranslation{g};
  Isometry result = identity_isometry(target_);
  for (int l : g.letters()) {
    const auto idx = static_cast<std::size_t>(std::abs(l) - 1);
    result = compose(target_, result, l > 0 ? generators_[idx] : inverses_[idx]);
  }
  return result;
}

bool Representation::integral() const {
  if (kind_ != RepresentationKind::MatrixOnH2) return false;
  for (const auto& g : generators_) {
    for (double x : std::get<MatrixIsometry>(g).m) {
      if (x != std::round(x)) return false;
    }
  }
  return true;
}

bool operator==(const Representation& a, const Representation& b) {
  if (a.kind_ != b.kind_ || !(a.target_ == b.target_) || !(a.alphabet_ == b.alphabet_) ||
      a.generators_.size() != b.generators_.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.generators_.size(); ++i) {
    if (!same_isometry(a.generators_[i], b.generators_[i])) return false;
  }
  return true;
}

Isometry evaluate(const Representation& rho, const Word& g) { return rho.evaluate(g); }

double orbit_distance(const Representation& rho, const Point& y, const Word& g,
                      const Word& h) {
  const auto& space = rho.target();
  return dist(space, apply(space, rho.evaluate(g), y), apply(space, rho.evaluate(h), y));
}

}  // namespace hadamard
