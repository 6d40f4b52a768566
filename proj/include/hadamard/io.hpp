#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "hadamard/equivariant.hpp"
#include "hadamard/representation.hpp"
#include "hadamard/space.hpp"

// JSON readers and writers for the file formats used by the CLI. Readers
// throw ParseError on malformed input and let the constructors' own
// validation errors through.
namespace hadamard::io {

using nlohmann::json;

/// {"vertices": [ids], "edges": [{"a": id, "b": id, "len": float}]}. Ids may
/// be strings or integers.
MetricTree tree_from_json(const json& j);
json to_json(const MetricTree& tree);

/// {"model": "euclidean", "dim": n} | {"model": "hyperbolic"} |
/// {"model": "tree", "tree": {...}} | {"model": "cayley", "rank": n}.
Space space_from_json(const json& j);
json to_json(const Space& space);

/// Tagged objects: {"euclidean": [..]}, {"hyperbolic": [x0, x1, x2]},
/// {"vertex": id} or {"edge": i, "offset": t} on a tree, and
/// {"base": word, "letter": word, "offset": t} on a Cayley tree (letter
/// omitted at vertices).
Point point_from_json(const Space& space, const json& j);
json to_json(const Space& space, const Point& p);

/// {"kind": ..., "alphabet": "xy", "target": space, "generators": {name: g}}
/// where g is [[a, b], [c, d]] for matrices, a vertex-image list for tree
/// automorphisms, and {"linear": rows, "translation": v} for Euclidean
/// isometries. free-on-cayley-tree needs only "rank" (or "alphabet").
Representation representation_from_json(const json& j);
json to_json(const Representation& rho);

/// {"graph": {"vertices": [..], "edges": [{"source", "target", "len",
/// "label"}]}, "representation": object or path, "images": {vertex: point}}.
/// A representation path is resolved against `base_dir`.
EquivariantMap map_from_json(const json& j, const std::filesystem::path& base_dir = {});
json to_json(const EquivariantMap& u);

/// Reads and parses a JSON file.
json read_file(const std::filesystem::path& path);

}  // namespace hadamard::io
