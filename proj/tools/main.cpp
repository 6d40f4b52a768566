#include <CLI11.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "hadamard/conjugacy.hpp"
#include "hadamard/equivariant.hpp"
#include "hadamard/errors.hpp"
#include "hadamard/harmonic.hpp"
#include "hadamard/io.hpp"
#include "hadamard/seed.hpp"
#include "report.hpp"

using namespace hadamard;
using cli::json;
using cli::Report;

namespace {

constexpr std::uint64_t kDefaultSeed = 0xCA70;

enum Exit : int {
  kOk = 0,
  kCheckFailed = 1,
  kNotConjugate = 3,
  kNotConjugateUpTo = 4,
  kUsage = 64,
  kParse = 65,
  kInternal = 70,
  kModelMismatch = 80,
  kInvalidPoint = 81,
  kDomain = 82,
  kAlphabet = 83,
  kInvalidStructure = 84,
  kCapability = 85,
  kPrecondition = 86,
  kBudget = 87,
  kConfig = 88,
};

const char* kExitHelp = R"(Exit codes:
  0   success (conjugacy: Conjugate)
  1   a property check found a violation
  3   conjugacy: NotConjugate
  4   conjugacy: NotConjugateUpTo the searched radius
  64  usage error (including missing input files)
  65  malformed input file or JSON argument
  70  internal error
  80  model mismatch          81  invalid point
  82  domain error            83  alphabet mismatch
  84  invalid structure       85  unsupported capability
  86  precondition failed     87  search budget exceeded
  88  invalid configuration

Representation presets (--preset):
  cayleyN   free group of rank N on its Cayley tree (e.g. cayley2)
  sanov     matrices [[1,2],[0,1]] and [[1,0],[2,1]] on the hyperbolic plane
  modular   matrices [[2,1],[1,1]] and [[1,1],[1,2]] on the hyperbolic plane
  axis      the single matrix diag(e, 1/e) on the hyperbolic plane

Words: lowercase letters are generators, uppercase their inverses; "1" or an
empty entry is the identity. Lists are comma separated.)";

int exit_code(const std::exception& e) {
  if (dynamic_cast<const BudgetExceeded*>(&e)) return kBudget;
  if (dynamic_cast<const ConfigError*>(&e)) return kConfig;
  if (dynamic_cast<const ParseError*>(&e)) return kParse;
  if (dynamic_cast<const ModelMismatch*>(&e)) return kModelMismatch;
  if (dynamic_cast<const InvalidPoint*>(&e)) return kInvalidPoint;
  if (dynamic_cast<const DomainError*>(&e)) return kDomain;
  if (dynamic_cast<const AlphabetMismatch*>(&e)) return kAlphabet;
  if (dynamic_cast<const InvalidStructure*>(&e)) return kInvalidStructure;
  if (dynamic_cast<const CapabilityError*>(&e)) return kCapability;
  if (dynamic_cast<const PreconditionError*>(&e)) return kPrecondition;
  return kInternal;
}

struct Global {
  std::uint64_t seed = kDefaultSeed;
  std::string format = "json";
  int threads = 1;
};

struct RepSource {
  std::string file;
  std::string preset;
};

void add_rep_options(CLI::App* app, RepSource& src, const std::string& default_preset) {
  app->add_option("--rep", src.file, "Representation JSON file")->check(CLI::ExistingFile);
  app->add_option("--preset", src.preset, "Representation preset (see --help)")
      ->default_val(default_preset);
}

Representation load_rep(const RepSource& src) {
  if (!src.file.empty()) return io::representation_from_json(io::read_file(src.file));
  const std::string& p = src.preset;
  if (p.rfind("cayley", 0) == 0 && p.size() > 6 &&
      std::all_of(p.begin() + 6, p.end(), [](unsigned char c) { return std::isdigit(c); })) {
    return Representation::free_on_cayley_tree(std::stoi(p.substr(6)));
  }
  if (p == "sanov") {
    return Representation::matrices(
        {MatrixIsometry{{1.0, 2.0, 0.0, 1.0}}, MatrixIsometry{{1.0, 0.0, 2.0, 1.0}}});
  }
  if (p == "modular") {
    return Representation::matrices(
        {MatrixIsometry{{2.0, 1.0, 1.0, 1.0}}, MatrixIsometry{{1.0, 1.0, 1.0, 2.0}}});
  }
  if (p == "axis") {
    return Representation::matrices(
        {MatrixIsometry{{std::numbers::e, 0.0, 0.0, 1.0 / std::numbers::e}}});
  }
  throw ConfigError("unknown preset \"" + p + "\"");
}

json rep_echo(const RepSource& src) {
  return src.file.empty() ? json{{"preset", src.preset}} : json{{"rep", src.file}};
}

Point default_basepoint(const Space& space) {
  switch (space.kind()) {
    case ModelKind::Euclidean:
      return EuclideanPoint{Eigen::VectorXd::Zero(space.dimension())};
    case ModelKind::Hyperbolic:
      return HyperbolicPoint{};
    case ModelKind::Tree:
      return TreePoint{0, -1, 0.0};
    case ModelKind::Cayley:
      return CayleyPoint{Word(space.dimension()), 0, 0.0};
  }
  return HyperbolicPoint{};
}

Point parse_basepoint(const Space& space, const std::string& text) {
  if (text.empty()) return default_basepoint(space);
  try {
    return io::point_from_json(space, nlohmann::json::parse(text));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("--basepoint: ") + e.what());
  }
}

// Map given by a file, or a bouquet map with a seeded random basepoint.
EquivariantMap load_or_sample_map(const std::string& file, const RepSource& src,
                                  std::uint64_t seed) {
  if (!file.empty()) {
    const std::filesystem::path path(file);
    return io::map_from_json(io::read_file(path), path.parent_path());
  }
  const Representation rho = load_rep(src);
  std::mt19937_64 rng(seed);
  return build_bouquet_map(rho, PointSampler{}(rho.target(), rng));
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

// Words as printed in reports; the identity prints as "1".
std::string word_text(const Alphabet& alphabet, const Word& w) {
  return w.is_identity() ? "1" : alphabet.format(w);
}

json words_json(const Alphabet& alphabet, const std::vector<Word>& words) {
  json out = json::array();
  for (const auto& w : words) out.push_back(word_text(alphabet, w));
  return out;
}

json optional_number(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }

// --- check-cat0 -------------------------------------------------------------

struct Cat0Options {
  std::string model = "euclidean";
  int dim = 2;
  int rank = 2;
  std::string tree;
  int trials = 1000;
};

Space cat0_space(const Cat0Options& o, std::uint64_t seed) {
  if (o.model == "euclidean") return Space::euclidean(o.dim);
  if (o.model == "hyperbolic") return Space::hyperbolic_plane();
  if (o.model == "cayley") return Space::cayley_tree(o.rank);
  if (o.model == "tree") {
    if (!o.tree.empty()) return Space::metric_tree(io::tree_from_json(io::read_file(o.tree)));
    // Seeded random tree with 20 edges.
    std::mt19937_64 rng(derive_seed(seed, 0x7EE));
    std::vector<std::string> names{"v0"};
    std::vector<TreeEdge> edges;
    for (int v = 1; v <= 20; ++v) {
      names.push_back("v" + std::to_string(v));
      edges.push_back({std::uniform_int_distribution<int>(0, v - 1)(rng), v,
                       std::uniform_real_distribution<double>(0.25, 2.5)(rng)});
    }
    return Space::metric_tree(MetricTree(names, edges));
  }
  throw ConfigError("unknown model \"" + o.model + "\"");
}

int run_check_cat0(const Global& g, const Cat0Options& o, Report& r) {
  if (o.trials < 1) throw ConfigError("--trials must be >= 1");
  const Space space = cat0_space(o, g.seed);
  r.config = {{"model", o.model}, {"trials", o.trials}};
  if (o.model == "euclidean") r.config["dim"] = o.dim;
  if (o.model == "cayley") r.config["rank"] = o.rank;
  if (o.model == "tree") r.config["tree"] = o.tree.empty() ? json("seeded-20-edge") : json(o.tree);
  std::cerr << "check-cat0: " << o.trials << " trials on " << model_name(space.kind()) << "\n";

  struct Stat {
    const char* name;
    double min = INFINITY;
    double max = -INFINITY;
    long violations = 0;
    void add(double d) {
      min = std::min(min, d);
      max = std::max(max, d);
      if (d < -kDefectTolerance) ++violations;
    }
  };
  Stat tri{"triangle"}, quad{"quadrilateral"}, conv{"distance_convexity"};
  std::mt19937_64 rng(g.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const PointSampler sampler;
  for (int i = 0; i < o.trials; ++i) {
    const Point p = sampler(space, rng), q = sampler(space, rng), s1 = sampler(space, rng),
                s2 = sampler(space, rng);
    const double lambda = unit(rng), t = unit(rng), alpha = unit(rng);
    tri.add(triangle_defect(space, p, q, s1, lambda));
    quad.add(quadrilateral_defect(space, p, q, s1, s2, t, alpha));
    conv.add(distance_convexity_defect(space, p, q, s1, s2, t));
  }
  bool holds = true;
  r.columns = {"check", "min_defect", "max_defect", "violations"};
  for (const Stat* s : {&tri, &quad, &conv}) {
    r.result[s->name] = {{"min", s->min}, {"max", s->max}, {"violations", s->violations}};
    r.rows.push_back({s->name, s->min, s->max, s->violations});
    holds = holds && s->violations == 0;
  }
  if (space.kind() == ModelKind::Euclidean) {
    const double flat = std::max(std::abs(tri.min), std::abs(tri.max));
    r.result["euclidean_max_abs_triangle_defect"] = flat;
    holds = holds && flat <= kDefectTolerance;
  }
  r.result["tolerance"] = kDefectTolerance;
  r.result["holds"] = holds;
  return holds ? kOk : kCheckFailed;
}

// --- width / convexity ------------------------------------------------------

struct PairOptions {
  std::string u;
  std::string v;
  RepSource rep;
  int k = 64;
  int samples = 257;
  int grid = 11;
};

void add_pair_options(CLI::App* app, PairOptions& o) {
  app->add_option("--u", o.u, "Map file for u (default: seeded bouquet map)")->check(CLI::ExistingFile);
  app->add_option("--v", o.v, "Map file for v (default: seeded bouquet map)")->check(CLI::ExistingFile);
  add_rep_options(app, o.rep, "cayley2");
}

json pair_echo(const PairOptions& o) {
  json c = json::object();
  if (o.u.empty() || o.v.empty()) c["source"] = rep_echo(o.rep);
  c["u"] = o.u.empty() ? json("seeded") : json(o.u);
  c["v"] = o.v.empty() ? json("seeded") : json(o.v);
  return c;
}

GeodesicHomotopy load_pair(const Global& g, const PairOptions& o) {
  const EquivariantMap u = load_or_sample_map(o.u, o.rep, derive_seed(g.seed, 0));
  const EquivariantMap v = load_or_sample_map(o.v, o.rep, derive_seed(g.seed, 1));
  return GeodesicHomotopy(u, v);
}

int run_width(const Global& g, const PairOptions& o, Report& r) {
  r.config = pair_echo(o);
  r.config["K"] = o.k;
  r.config["samples"] = o.samples;
  const GeodesicHomotopy h = load_pair(g, o);
  const double lu = length(h.u()), lv = length(h.v());
  const double w_inf = homotopy_width_inf(h);
  const Width2 w2 = homotopy_width_2(h, o.k);
  r.result = {{"length_u", lu},
              {"length_v", lv},
              {"energy_u", energy(h.u())},
              {"energy_v", energy(h.v())},
              {"width_inf", w_inf},
              {"width_inf_sampled", sampled_width_inf(h, o.samples)},
              {"width_2", {{"value", w2.value}, {"lower", w2.lower}, {"upper", w2.upper},
                           {"error_bound", w2.error_bound}}},
              {"ratio", lu + lv > 0.0 ? json(w_inf / (lu + lv)) : json(nullptr)}};
  r.columns = {"edge", "track_start", "track_end"};
  for (std::size_t e = 0; e < h.u().graph().edges().size(); ++e) {
    const int ei = static_cast<int>(e);
    r.rows.push_back({ei, h.track_length(ei, 0.0),
                      h.track_length(ei, h.u().graph().edges()[e].length)});
  }
  return kOk;
}

int run_convexity(const Global& g, const PairOptions& o, Report& r) {
  if (o.grid < 2) throw ConfigError("--grid must be >= 2");
  r.config = pair_echo(o);
  r.config["grid"] = o.grid;
  const GeodesicHomotopy h = load_pair(g, o);
  std::vector<double> grid;
  for (int i = 0; i < o.grid; ++i) grid.push_back(static_cast<double>(i) / (o.grid - 1));
  bool holds = true;
  r.columns = {"s", "length", "energy", "length_ok", "energy_ok"};
  for (const auto& row : convexity_report(h, grid)) {
    r.rows.push_back({row.s, row.length, row.energy, row.length_ok, row.energy_ok});
    holds = holds && row.length_ok && row.energy_ok;
  }
  r.table_name = "grid";
  r.result = {{"holds", holds}};
  return holds ? kOk : kCheckFailed;
}

// --- harmonic ---------------------------------------------------------------

struct HarmonicOptions {
  std::string map;
  RepSource rep;
  int max_iterations = 10000;
  double tolerance = 1e-10;
  double inner_tolerance = 1e-12;
};

int run_harmonic(const Global& g, const HarmonicOptions& o, Report& r) {
  r.config = {{"map", o.map.empty() ? json("seeded") : json(o.map)},
              {"max_iterations", o.max_iterations},
              {"displacement_tolerance", o.tolerance},
              {"inner_tolerance", o.inner_tolerance}};
  if (o.map.empty()) r.config["source"] = rep_echo(o.rep);
  RelaxationConfig cfg;
  cfg.max_iterations = o.max_iterations;
  cfg.displacement_tolerance = o.tolerance;
  cfg.inner_tolerance = o.inner_tolerance;
  const EquivariantMap u0 = load_or_sample_map(o.map, o.rep, derive_seed(g.seed, 0));
  std::cerr << "harmonic: relaxing " << u0.images().size() << " vertex images\n";
  const HarmonicResult res = relax(u0, cfg);
  r.result = {{"E_star", res.E_star},
              {"L_star", res.L_star},
              {"iterations", res.iterations},
              {"converged", res.converged},
              {"stationarity", stationarity_probe(res.map, derive_seed(g.seed, 1))},
              {"energy_trace", res.energy_trace},
              {"map", json(io::to_json(res.map))}};
  r.table_name = "trace";
  r.columns = {"sweep", "energy"};
  for (std::size_t i = 0; i < res.energy_trace.size(); ++i) {
    r.rows.push_back({static_cast<long>(i), res.energy_trace[i]});
  }
  return kOk;
}

// --- estimate-cstar ---------------------------------------------------------

struct EstimateOptions {
  RepSource rep;
  int trials = 1000;
};

int run_estimate(const Global& g, const EstimateOptions& o, Report& r) {
  r.config = rep_echo(o.rep);
  r.config["trials"] = o.trials;
  r.config["threads"] = g.threads;
  WidthEstimateConfig cfg;
  cfg.seed = g.seed;
  cfg.trials = o.trials;
  cfg.threads = g.threads;
  std::cerr << "estimate-cstar: " << o.trials << " trials\n";
  const WidthEstimate est = estimate_width_constant(load_rep(o.rep), cfg);
  int arg = 0;
  r.table_name = "samples";
  r.columns = {"trial", "seed", "length_u", "length_v", "width_inf", "ratio"};
  for (const auto& s : est.samples) {
    if (s.ratio == est.c_hat && arg == 0) arg = s.trial;
    r.rows.push_back({s.trial, s.seed, s.length_u, s.length_v, s.width_inf, s.ratio});
  }
  r.result = {{"c_hat", est.c_hat}, {"argmax_trial", arg}, {"trials", o.trials}};
  return kOk;
}

// --- conjugacy --------------------------------------------------------------

struct ConjugacyOptions {
  std::string alphabet;
  std::string a;
  std::string b;
  std::string policy = "incremental";
  std::optional<double> cstar;
  std::optional<double> c;
  int max_radius = 10;
  std::uint64_t budget = 20'000'000;
  std::string rep;
  std::string group = "free";
  std::string basepoint;
  bool timing = false;
};

void add_conjugacy_options(CLI::App* app, ConjugacyOptions& o, bool search) {
  app->add_option("--alphabet", o.alphabet,
                  "Generator names (\"xy\") or a rank, with names inferred from the words");
  app->add_option("--a", o.a, "List A, comma separated")->required();
  app->add_option("--b", o.b, "List B, comma separated")->required();
  app->add_option("--rep", o.rep, "Representation JSON file")->check(CLI::ExistingFile);
  app->add_option("--group", o.group, "Word problem: free or matrix (needs --rep)")
      ->capture_default_str()
      ->check(CLI::IsMember({"free", "matrix"}));
  if (!search) return;
  app->add_option("--policy", o.policy, "Radius policy: incremental or bound")
      ->capture_default_str()
      ->check(CLI::IsMember({"incremental", "bound"}));
  app->add_option("--cstar", o.cstar, "Slope of the linear radius bound");
  app->add_option("--c", o.c, "Constant of the linear radius bound");
  app->add_option("--max-radius", o.max_radius, "Largest radius searched")->capture_default_str();
  app->add_option("--budget", o.budget, "Largest number of words enumerated")->capture_default_str();
  app->add_option("--basepoint", o.basepoint, "Point JSON for the orbit bound (needs --rep)");
  app->add_flag("--timing", o.timing, "Report wall-clock seconds (breaks byte-identical output)");
}

ConjugacyInstance build_instance(const Global& g, const ConjugacyOptions& o) {
  ConjugacyInstance inst;
  const auto a = split_list(o.a);
  const auto b = split_list(o.b);
  if (!o.rep.empty()) inst.rho = io::representation_from_json(io::read_file(o.rep));
  if (!o.alphabet.empty() &&
      std::all_of(o.alphabet.begin(), o.alphabet.end(), [](unsigned char c) { return std::isdigit(c); })) {
    std::vector<std::string> all(a);
    all.insert(all.end(), b.begin(), b.end());
    inst.alphabet = Alphabet::infer(std::stoi(o.alphabet), all);
  } else if (!o.alphabet.empty()) {
    inst.alphabet = Alphabet(o.alphabet);
  } else if (inst.rho) {
    inst.alphabet = inst.rho->alphabet();
  } else {
    std::vector<std::string> all(a);
    all.insert(all.end(), b.begin(), b.end());
    std::string used;
    for (const auto& w : all) {
      for (char c : w) {
        const char l = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        if (std::isalpha(static_cast<unsigned char>(c)) && used.find(l) == std::string::npos) used += l;
      }
    }
    inst.alphabet = Alphabet::infer(std::max<int>(1, static_cast<int>(used.size())), all);
  }
  for (const auto& w : a) inst.a.push_back(inst.alphabet.parse(w));
  for (const auto& w : b) inst.b.push_back(inst.alphabet.parse(w));
  inst.word_problem = o.group == "matrix" ? WordProblem::Matrix : WordProblem::Free;
  inst.search.policy = parse_radius_policy(o.policy);
  inst.search.cstar = o.cstar;
  inst.search.c = o.c;
  inst.search.max_radius = o.max_radius;
  inst.search.budget = o.budget;
  inst.search.threads = g.threads;
  inst.validate();
  return inst;
}

json conjugacy_echo(const ConjugacyInstance& inst, const ConjugacyOptions& o, bool search) {
  json c{{"alphabet", inst.alphabet.names()},
         {"a", words_json(inst.alphabet, inst.a)},
         {"b", words_json(inst.alphabet, inst.b)},
         {"group", o.group}};
  if (!o.rep.empty()) c["rep"] = o.rep;
  if (search) {
    c["policy"] = o.policy;
    c["cstar"] = optional_number(o.cstar);
    c["c"] = optional_number(o.c);
    c["max_radius"] = o.max_radius;
    c["budget"] = o.budget;
  }
  return c;
}

int certificate_report(const ConjugacyInstance& inst, const ConjugacyCertificate& cert,
                       bool timing, Report& r) {
  json transcript = json::array();
  r.table_name = "transcript";
  r.columns = {"index", "conjugate", "expected", "equal"};
  for (std::size_t i = 0; i < cert.transcript.size(); ++i) {
    const auto& t = cert.transcript[i];
    const std::string conj = word_text(inst.alphabet, t.conjugate);
    const std::string exp = word_text(inst.alphabet, t.expected);
    r.rows.push_back({static_cast<long>(i), conj, exp, t.equal});
  }
  r.result = {{"verdict", verdict_name(cert.verdict)},
              {"g", cert.g ? json(word_text(inst.alphabet, *cert.g)) : json(nullptr)},
              {"radius_searched", cert.radius},
              {"proof", cert.proof.empty() ? json(nullptr) : json(cert.proof)},
              {"stats", {{"enumerated", cert.enumerated},
                         {"seconds", timing ? json(cert.seconds) : json(nullptr)}}}};
  switch (cert.verdict) {
    case Verdict::Conjugate:
      return kOk;
    case Verdict::NotConjugate:
      return kNotConjugate;
    case Verdict::NotConjugateUpTo:
      return kNotConjugateUpTo;
  }
  return kInternal;
}

int run_conjugacy(const Global& g, const ConjugacyOptions& o, bool search, Report& r) {
  const ConjugacyInstance inst = build_instance(g, o);
  r.config = conjugacy_echo(inst, o, search);
  std::cerr << "conjugacy: " << inst.a.size() << " pair(s), word sum " << inst.word_sum() << "\n";
  const ConjugacyCertificate cert = search ? solve(inst) : free_group_oracle(inst);
  const int code = certificate_report(inst, cert, search && o.timing, r);
  if (search && inst.rho) {
    const Point y = parse_basepoint(inst.rho->target(), o.basepoint);
    const OrbitBoundReport ob = orbit_bound_report(inst, y, cert.g);
    r.result["orbit_bound"] = {{"orbit_sum", ob.orbit_sum},
                               {"word_sum", ob.word_sum},
                               {"ratio", optional_number(ob.ratio)}};
  }
  return code;
}

// --- orbit-report -----------------------------------------------------------

struct OrbitOptions {
  RepSource rep;
  std::string basepoint;
  int instances = 20;
  int lists = 2;
  int word_length = 4;
  int conjugator_length = 3;
  int max_radius = 8;
};

Word random_word(std::mt19937_64& rng, int rank, int max_len) {
  std::uniform_int_distribution<int> len(0, max_len);
  std::uniform_int_distribution<int> gen(1, rank);
  std::bernoulli_distribution sign(0.5);
  std::vector<int> letters;
  for (int i = len(rng); i > 0; --i) letters.push_back(sign(rng) ? gen(rng) : -gen(rng));
  return Word::from_letters(rank, letters);
}

int run_orbit_report(const Global& g, const OrbitOptions& o, Report& r) {
  if (o.instances < 1 || o.lists < 1 || o.word_length < 0 || o.conjugator_length < 0) {
    throw ConfigError("orbit-report sizes must be positive");
  }
  const Representation rho = load_rep(o.rep);
  const Point y = parse_basepoint(rho.target(), o.basepoint);
  r.config = rep_echo(o.rep);
  r.config["basepoint"] = json(io::to_json(rho.target(), y));
  r.config["instances"] = o.instances;
  r.config["lists"] = o.lists;
  r.config["word_length"] = o.word_length;
  r.config["conjugator_length"] = o.conjugator_length;
  r.config["max_radius"] = o.max_radius;
  const Alphabet& alphabet = rho.alphabet();
  r.table_name = "instances";
  r.columns = {"instance", "a", "b", "g", "word_sum", "orbit_sum", "ratio"};
  std::optional<double> lo, hi;
  for (int i = 0; i < o.instances; ++i) {
    std::mt19937_64 rng(derive_seed(g.seed, static_cast<std::uint64_t>(i)));
    ConjugacyInstance inst;
    inst.alphabet = alphabet;
    inst.rho = rho;
    inst.search.max_radius = o.max_radius;
    inst.search.threads = g.threads;
    const Word h = random_word(rng, rho.rank(), o.conjugator_length);
    for (int k = 0; k < o.lists; ++k) {
      inst.a.push_back(random_word(rng, rho.rank(), o.word_length));
      inst.b.push_back(h.inverse() * inst.a.back() * h);
    }
    const ConjugacyCertificate cert = solve(inst);
    const OrbitBoundReport ob = orbit_bound_report(inst, y, cert.g);
    if (ob.ratio) {
      lo = std::min(lo.value_or(*ob.ratio), *ob.ratio);
      hi = std::max(hi.value_or(*ob.ratio), *ob.ratio);
    }
    std::string as, bs;
    for (std::size_t k = 0; k < inst.a.size(); ++k) {
      as += (k ? " " : "") + word_text(alphabet, inst.a[k]);
      bs += (k ? " " : "") + word_text(alphabet, inst.b[k]);
    }
    r.rows.push_back({i, as, bs, cert.g ? json(word_text(alphabet, *cert.g)) : json(nullptr),
                      ob.word_sum, ob.orbit_sum, optional_number(ob.ratio)});
  }
  r.result = {{"instances", o.instances}, {"min_ratio", optional_number(lo)},
              {"max_ratio", optional_number(hi)}};
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Experiments on Hadamard spaces: CAT(0) checks, widths of homotopies, "
               "harmonic maps and list conjugacy."};
  app.footer(kExitHelp);
  app.require_subcommand(1);
  Global g;
  app.add_option("--seed", g.seed, "Random seed (decimal or 0x hex)")->default_str("0xCA70");
  app.add_option("--format", g.format, "Output format")
      ->capture_default_str()
      ->check(CLI::IsMember({"json", "csv", "human"}));
  app.add_option("--threads", g.threads, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);

  Cat0Options cat0;
  auto* c0 = app.add_subcommand("check-cat0", "Seeded CAT(0) comparison checks in one model");
  c0->add_option("--model", cat0.model, "euclidean, hyperbolic, tree or cayley")
      ->capture_default_str()
      ->check(CLI::IsMember({"euclidean", "hyperbolic", "tree", "cayley"}));
  c0->add_option("--dim", cat0.dim, "Euclidean dimension")->capture_default_str();
  c0->add_option("--rank", cat0.rank, "Cayley tree rank")->capture_default_str();
  c0->add_option("--tree", cat0.tree, "Tree JSON file (default: seeded 20-edge tree)")
      ->check(CLI::ExistingFile);
  c0->add_option("--trials", cat0.trials, "Number of random samples")->capture_default_str();

  PairOptions width;
  auto* w = app.add_subcommand("width", "Widths of the geodesic homotopy between two maps");
  add_pair_options(w, width);
  w->add_option("--K", width.k, "Simpson subintervals per edge (even)")->capture_default_str();
  w->add_option("--samples", width.samples, "Samples per edge for the sampled W_inf")
      ->capture_default_str();

  PairOptions conv;
  auto* cv = app.add_subcommand("convexity", "Length and energy along the geodesic homotopy");
  add_pair_options(cv, conv);
  cv->add_option("--grid", conv.grid, "Number of s values in [0, 1]")->capture_default_str();

  HarmonicOptions harm;
  auto* hm = app.add_subcommand("harmonic", "Relax a map to an energy minimiser");
  hm->add_option("--map", harm.map, "Map file (default: seeded bouquet map)")->check(CLI::ExistingFile);
  add_rep_options(hm, harm.rep, "sanov");
  hm->add_option("--max-iterations", harm.max_iterations)->capture_default_str();
  hm->add_option("--tolerance", harm.tolerance, "Displacement tolerance")->capture_default_str();
  hm->add_option("--inner-tolerance", harm.inner_tolerance)->capture_default_str();

  EstimateOptions est;
  auto* es = app.add_subcommand("estimate-cstar", "Estimate the width constant from seeded trials");
  add_rep_options(es, est.rep, "cayley2");
  es->add_option("--trials", est.trials)->capture_default_str();

  ConjugacyOptions solve_opts, oracle_opts;
  auto* cj = app.add_subcommand("conjugacy", "Simultaneous conjugacy of finite lists");
  cj->require_subcommand(1);
  auto* cj_solve = cj->add_subcommand("solve", "Shortlex search with certificate");
  add_conjugacy_options(cj_solve, solve_opts, true);
  auto* cj_oracle = cj->add_subcommand("oracle", "Exact free-group decision");
  add_conjugacy_options(cj_oracle, oracle_opts, false);

  OrbitOptions orbit;
  auto* ob = app.add_subcommand("orbit-report", "Orbit and word sums on seeded conjugate lists");
  add_rep_options(ob, orbit.rep, "sanov");
  ob->add_option("--basepoint", orbit.basepoint, "Point JSON (default: model origin)");
  ob->add_option("--instances", orbit.instances)->capture_default_str();
  ob->add_option("--lists", orbit.lists, "List length N")->capture_default_str();
  ob->add_option("--word-length", orbit.word_length, "Maximal |a_i|")->capture_default_str();
  ob->add_option("--conjugator-length", orbit.conjugator_length, "Maximal |g|")->capture_default_str();
  ob->add_option("--max-radius", orbit.max_radius)->capture_default_str();

  for (auto* sub : {c0, w, cv, hm, es, cj, cj_solve, cj_oracle, ob}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    if (code == 0) return kOk;
    std::cerr << "\n" << app.help();
    return kUsage;
  }

  Report report;
  int code = kOk;
  try {
    report.seed = g.seed;
    const auto format = cli::parse_format(g.format);
    if (c0->parsed()) {
      report.command = "check-cat0";
      code = run_check_cat0(g, cat0, report);
    } else if (w->parsed()) {
      report.command = "width";
      code = run_width(g, width, report);
    } else if (cv->parsed()) {
      report.command = "convexity";
      code = run_convexity(g, conv, report);
    } else if (hm->parsed()) {
      report.command = "harmonic";
      code = run_harmonic(g, harm, report);
    } else if (es->parsed()) {
      report.command = "estimate-cstar";
      code = run_estimate(g, est, report);
    } else if (cj_solve->parsed()) {
      report.command = "conjugacy solve";
      code = run_conjugacy(g, solve_opts, true, report);
    } else if (cj_oracle->parsed()) {
      report.command = "conjugacy oracle";
      code = run_conjugacy(g, oracle_opts, false, report);
    } else if (ob->parsed()) {
      report.command = "orbit-report";
      code = run_orbit_report(g, orbit, report);
    }
    cli::write(std::cout, report, format);
  } catch (const BudgetExceeded& e) {
    std::cerr << "error: " << e.what() << " (completed radius " << e.radius_completed << ", "
              << e.enumerated << " words enumerated)\n";
    return kBudget;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e);
  }
  return code;
}
