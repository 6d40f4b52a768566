#include "hadamard/io.hpp"

#include <algorithm>
#include <fstream>

#include "hadamard/errors.hpp"

namespace hadamard::io {

namespace {

std::string id_string(const json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  throw ParseError("vertex ids must be strings or integers");
}

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw ParseError(std::string("missing field \"") + key + "\"");
  }
  return j.at(key);
}

double number(const json& j, const char* what) {
  if (!j.is_number()) throw ParseError(std::string(what) + " must be a number");
  return j.get<double>();
}

int integer(const json& j, const char* what) {
  if (!j.is_number_integer()) throw ParseError(std::string(what) + " must be an integer");
  return j.get<int>();
}

std::string text(const json& j, const char* what) {
  if (!j.is_string()) throw ParseError(std::string(what) + " must be a string");
  return j.get<std::string>();
}

// Converts nlohmann's type errors into ParseError.
template <class F>
auto guarded(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw ParseError(e.what());
  }
}

MatrixIsometry matrix_from_json(const json& j) {
  MatrixIsometry m;
  if (j.is_array() && j.size() == 2 && j[0].is_array()) {
    for (std::size_t r = 0; r < 2; ++r) {
      if (j[r].size() != 2) throw ParseError("matrix rows must have two entries");
      for (std::size_t c = 0; c < 2; ++c) m.m[2 * r + c] = number(j[r][c], "matrix entry");
    }
  } else if (j.is_array() && j.size() == 4) {
    for (std::size_t i = 0; i < 4; ++i) m.m[i] = number(j[i], "matrix entry");
  } else {
    throw ParseError("a matrix is [[a, b], [c, d]] or [a, b, c, d]");
  }
  return m;
}

EuclideanIsometry euclidean_from_json(const json& j, int dim) {
  const json& rows = field(j, "linear");
  const json& t = field(j, "translation");
  if (!rows.is_array() || static_cast<int>(rows.size()) != dim || !t.is_array() ||
      static_cast<int>(t.size()) != dim) {
    throw ParseError("euclidean isometry needs a " + std::to_string(dim) + "x" +
                     std::to_string(dim) + " linear part and a translation");
  }
  EuclideanIsometry g{Eigen::MatrixXd(dim, dim), Eigen::VectorXd(dim)};
  for (int r = 0; r < dim; ++r) {
    const json& row = rows[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<int>(row.size()) != dim) {
      throw ParseError("linear part has a row of the wrong size");
    }
    for (int c = 0; c < dim; ++c) g.linear(r, c) = number(row[static_cast<std::size_t>(c)], "entry");
    g.translation(r) = number(t[static_cast<std::size_t>(r)], "translation entry");
  }
  return g;
}

}  // namespace

MetricTree tree_from_json(const json& j) {
  return guarded([&] {
    std::vector<std::string> names;
    for (const auto& v : field(j, "vertices")) names.push_back(id_string(v));
    auto index = [&](const json& id) {
      const std::string s = id_string(id);
      const auto it = std::find(names.begin(), names.end(), s);
      if (it == names.end()) throw ParseError("edge names unknown vertex \"" + s + "\"");
      return static_cast<int>(it - names.begin());
    };
    std::vector<TreeEdge> edges;
    for (const auto& e : field(j, "edges")) {
      edges.push_back({index(field(e, "a")), index(field(e, "b")), number(field(e, "len"), "len")});
    }
    return MetricTree(std::move(names), std::move(edges));
  });
}

json to_json(const MetricTree& tree) {
  json edges = json::array();
  for (const auto& e : tree.edges()) {
    edges.push_back({{"a", tree.vertex_names()[static_cast<std::size_t>(e.a)]},
                     {"b", tree.vertex_names()[static_cast<std::size_t>(e.b)]},
                     {"len", e.length}});
  }
  return {{"vertices", tree.vertex_names()}, {"edges", edges}};
}

Space space_from_json(const json& j) {
  return guarded([&] {
    const std::string model = text(field(j, "model"), "model");
    if (model == "euclidean") return Space::euclidean(integer(field(j, "dim"), "dim"));
    if (model == "hyperbolic") return Space::hyperbolic_plane();
    if (model == "tree") return Space::metric_tree(tree_from_json(field(j, "tree")));
    if (model == "cayley") return Space::cayley_tree(integer(field(j, "rank"), "rank"));
    throw ParseError("unknown model \"" + model + "\"");
  });
}

json to_json(const Space& space) {
  json j{{"model", model_name(space.kind())}};
  switch (space.kind()) {
    case ModelKind::Euclidean:
      j["dim"] = space.dimension();
      break;
    case ModelKind::Hyperbolic:
      break;
    case ModelKind::Tree:
      j["tree"] = to_json(space.tree());
      break;
    case ModelKind::Cayley:
      j["rank"] = space.dimension();
      break;
  }
  return j;
}

Point point_from_json(const Space& space, const json& j) {
  return guarded([&]() -> Point {
    Point p;
    switch (space.kind()) {
      case ModelKind::Euclidean: {
        const json& x = field(j, "euclidean");
        EuclideanPoint e{Eigen::VectorXd(static_cast<Eigen::Index>(x.size()))};
        for (std::size_t i = 0; i < x.size(); ++i) {
          e.x(static_cast<Eigen::Index>(i)) = number(x[i], "coordinate");
        }
        p = e;
        break;
      }
      case ModelKind::Hyperbolic: {
        const json& x = field(j, "hyperbolic");
        if (!x.is_array() || x.size() != 3) throw ParseError("hyperbolic points have 3 coordinates");
        p = HyperbolicPoint{{number(x[0], "x0"), number(x[1], "x1"), number(x[2], "x2")}};
        break;
      }
      case ModelKind::Tree: {
        TreePoint t;
        if (j.contains("vertex")) {
          t.vertex = space.tree().vertex_index(id_string(j.at("vertex")));
        } else {
          t.edge = integer(field(j, "edge"), "edge");
          t.offset = number(field(j, "offset"), "offset");
        }
        p = t;
        break;
      }
      case ModelKind::Cayley: {
        const Alphabet names = Alphabet::standard(space.dimension());
        CayleyPoint c{names.parse(text(field(j, "base"), "base")), 0, 0.0};
        if (j.contains("letter")) {
          const Word l = names.parse(text(j.at("letter"), "letter"));
          if (l.length() != 1) throw ParseError("letter must be a single generator");
          c.letter = l.letters()[0];
          c.offset = number(field(j, "offset"), "offset");
        }
        p = c;
        break;
      }
    }
    space.check(p);
    return p;
  });
}

json to_json(const Space& space, const Point& p) {
  space.check(p);
  if (const auto* e = std::get_if<EuclideanPoint>(&p)) {
    return {{"euclidean", std::vector<double>(e->x.data(), e->x.data() + e->x.size())}};
  }
  if (const auto* h = std::get_if<HyperbolicPoint>(&p)) return {{"hyperbolic", h->x}};
  if (const auto* t = std::get_if<TreePoint>(&p)) {
    if (t->edge < 0) {
      return {{"vertex", space.tree().vertex_names()[static_cast<std::size_t>(t->vertex)]}};
    }
    return {{"edge", t->edge}, {"offset", t->offset}};
  }
  const auto& c = std::get<CayleyPoint>(p);
  const Alphabet names = Alphabet::standard(space.dimension());
  json j{{"base", names.format(c.base)}};
  if (c.letter != 0) {
    const int letter[] = {c.letter};
    j["letter"] = names.format(Word::from_letters(space.dimension(), letter));
    j["offset"] = c.offset;
  }
  return j;
}

Representation representation_from_json(const json& j) {
  return guarded([&] {
    const RepresentationKind kind = parse_representation_kind(text(field(j, "kind"), "kind"));
    if (kind == RepresentationKind::FreeOnCayleyTree) {
      if (j.contains("rank")) return Representation::free_on_cayley_tree(integer(j.at("rank"), "rank"));
      const Alphabet alphabet(text(field(j, "alphabet"), "alphabet"));
      std::vector<Isometry> gens;
      for (int i = 1; i <= alphabet.rank(); ++i) {
        gens.emplace_back(CayleyTranslation{Word::generator(alphabet.rank(), i)});
      }
      return Representation(kind, Space::cayley_tree(alphabet.rank()), alphabet, std::move(gens));
    }
    const json& generators = field(j, "generators");
    if (!generators.is_object()) throw ParseError("generators must map names to isometries");
    std::string names;
    if (j.contains("alphabet")) {
      names = text(j.at("alphabet"), "alphabet");
    } else {
      for (const auto& [name, _] : generators.items()) names += name;
    }
    const Alphabet alphabet(names);
    const Space target = kind == RepresentationKind::MatrixOnH2 ? Space::hyperbolic_plane()
                                                                : space_from_json(field(j, "target"));
    std::vector<Isometry> gens;
    for (char c : alphabet.names()) {
      const json& g = field(generators, std::string(1, c).c_str());
      switch (kind) {
        case RepresentationKind::MatrixOnH2:
          gens.emplace_back(matrix_from_json(g));
          break;
        case RepresentationKind::TreeAutomorphisms: {
          TreeAutomorphism a;
          for (const auto& v : g) a.image.push_back(target.tree().vertex_index(id_string(v)));
          gens.emplace_back(std::move(a));
          break;
        }
        case RepresentationKind::EuclideanAffine:
          gens.emplace_back(euclidean_from_json(g, target.dimension()));
          break;
        case RepresentationKind::FreeOnCayleyTree:
          break;
      }
    }
    return Representation(kind, target, alphabet, std::move(gens));
  });
}

json to_json(const Representation& rho) {
  json j{{"kind", representation_kind_name(rho.kind())}, {"alphabet", rho.alphabet().names()}};
  if (rho.kind() == RepresentationKind::FreeOnCayleyTree) return j;
  j["target"] = to_json(rho.target());
  json gens = json::object();
  for (std::size_t i = 0; i < rho.generators().size(); ++i) {
    const std::string name(1, rho.alphabet().names()[i]);
    const Isometry& g = rho.generators()[i];
    if (const auto* m = std::get_if<MatrixIsometry>(&g)) {
      gens[name] = {{m->m[0], m->m[1]}, {m->m[2], m->m[3]}};
    } else if (const auto* t = std::get_if<TreeAutomorphism>(&g)) {
      json image = json::array();
      for (int v : t->image) image.push_back(rho.target().tree().vertex_names()[static_cast<std::size_t>(v)]);
      gens[name] = image;
    } else {
      const auto& e = std::get<EuclideanIsometry>(g);
      json rows = json::array();
      for (Eigen::Index r = 0; r < e.linear.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < e.linear.cols(); ++c) row.push_back(e.linear(r, c));
        rows.push_back(row);
      }
      gens[name] = {{"linear", rows},
                    {"translation", std::vector<double>(e.translation.data(),
                                                        e.translation.data() + e.translation.size())}};
    }
  }
  j["generators"] = gens;
  return j;
}

EquivariantMap map_from_json(const json& j, const std::filesystem::path& base_dir) {
  return guarded([&] {
    const json& rep = field(j, "representation");
    const Representation rho = rep.is_string()
                                   ? representation_from_json(read_file(base_dir / rep.get<std::string>()))
                                   : representation_from_json(rep);
    const json& g = field(j, "graph");
    std::vector<std::string> names;
    for (const auto& v : field(g, "vertices")) names.push_back(id_string(v));
    auto index = [&](const json& id) {
      const std::string s = id_string(id);
      const auto it = std::find(names.begin(), names.end(), s);
      if (it == names.end()) throw ParseError("unknown graph vertex \"" + s + "\"");
      return static_cast<int>(it - names.begin());
    };
    std::vector<GraphEdge> edges;
    for (const auto& e : field(g, "edges")) {
      const std::string label = e.contains("label") ? text(e.at("label"), "label") : "";
      edges.push_back({index(field(e, "source")), index(field(e, "target")),
                       number(field(e, "len"), "len"), rho.alphabet().parse(label)});
    }
    const json& im = field(j, "images");
    std::vector<Point> images;
    for (const auto& name : names) {
      images.push_back(point_from_json(rho.target(), field(im, name.c_str())));
    }
    FundamentalGraph graph(names, std::move(edges), rho.rank());
    return EquivariantMap(std::move(graph), rho, std::move(images));
  });
}

json to_json(const EquivariantMap& u) {
  const auto& graph = u.graph();
  const Alphabet& alphabet = u.rho().alphabet();
  json edges = json::array();
  for (const auto& e : graph.edges()) {
    edges.push_back({{"source", graph.vertex_names()[static_cast<std::size_t>(e.source)]},
                     {"target", graph.vertex_names()[static_cast<std::size_t>(e.target)]},
                     {"len", e.length},
                     {"label", alphabet.format(e.label)}});
  }
  json images = json::object();
  for (std::size_t i = 0; i < u.images().size(); ++i) {
    images[graph.vertex_names()[i]] = to_json(u.space(), u.images()[i]);
  }
  return {{"graph", {{"vertices", graph.vertex_names()}, {"edges", edges}}},
          {"representation", to_json(u.rho())},
          {"images", images}};
}

json read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

}  // namespace hadamard::io
