// mlstream: command line front end over the library.
//
// Exit codes: 0 success, 2 closure violations found by `validate`, 1 any
// other error. Time flags are in seconds and converted to ticks with the
// graph's resolution; --t0 / --t-max / --window-origin are absolute.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "mlstream/centrality.hpp"
#include "mlstream/csv.hpp"
#include "mlstream/error.hpp"
#include "mlstream/ingestion.hpp"
#include "mlstream/interchange.hpp"
#include "mlstream/measures.hpp"
#include "mlstream/pipelines.hpp"
#include "mlstream/projections.hpp"
#include "mlstream/walks.hpp"

namespace fs = std::filesystem;
using namespace mls;

namespace {

enum class Level { Quiet, Error, Warn, Info, Debug };

Level log_level() {
  const char* env = std::getenv("MLS_LOG");
  const std::string v = env ? env : "warn";
  if (v == "quiet" || v == "0") return Level::Quiet;
  if (v == "error") return Level::Error;
  if (v == "info") return Level::Info;
  if (v == "debug") return Level::Debug;
  return Level::Warn;
}

void log(Level level, const std::string& message) {
  static const Level threshold = log_level();
  if (level > threshold) return;
  static const char* tags[] = {"", "error", "warn", "info", "debug"};
  std::cerr << "mlstream: " << tags[static_cast<int>(level)] << ": " << message << '\n';
}

struct Config {
  std::string manifest;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::int64_t gamma = 0;
  std::size_t walks = 1000;
  std::size_t repeats = 1;
  std::optional<std::int64_t> t_max;
  std::optional<std::int64_t> t0;
  std::int64_t window = 86400;
  std::optional<std::int64_t> window_origin;
  double tol = 1e-10;
  std::string denominator_mode = "all-pairs";
  std::string interaction = "face2face";
  std::string aspect;
  std::string kind;
  std::string matrix_file;
  std::string alpha;
  std::string beta;
  std::string weighting = "linear";
  std::string mobility = "node-layer";
  std::string out;
  bool direct = false;
};

class Failure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------- helpers

Ingested load(const Config& c, bool check_closure = true) {
  if (c.manifest.empty()) throw Failure("--manifest is required");
  auto in = ingest_path(c.manifest, check_closure);
  for (const auto& r : in.reports) {
    std::ostringstream os;
    os << r.file << ": " << r.total << " rows, " << r.accepted << " kept";
    for (const auto& [reason, n] : r.dropped) os << ", " << n << ' ' << reason;
    log(Level::Info, os.str());
    for (const auto& m : r.messages) log(Level::Debug, m);
  }
  log(Level::Info, std::to_string(in.graph.node_count()) + " nodes, " + std::to_string(in.graph.layer_count()) +
                       " layers, " + std::to_string(in.graph.links().size()) + " link records");
  return in;
}

fs::path output(const Config& c, const std::string& name) {
  fs::create_directories(c.out_dir);
  return fs::path(c.out_dir) / name;
}

void emit(const Config& c, const std::string& name, const std::function<void(std::ostream&)>& writer) {
  const auto path = output(c, name);
  write_file_atomically(path, writer);
  log(Level::Info, "wrote " + path.string());
}

Tick ticks(const MultilayerStreamGraph& g, std::int64_t seconds) { return seconds * g.resolution().ticks_per_second; }

std::uint64_t require_seed(const Config& c) {
  if (!c.seed) throw Failure("--seed is required for stochastic commands");
  return *c.seed;
}

std::string pick_aspect(const MultilayerStreamGraph& g, const Config& c) {
  if (!c.aspect.empty()) return c.aspect;
  const auto& aspects = g.layers().aspects();
  if (aspects.size() == 1) return aspects[0].name;
  throw Failure("graph has several aspects, choose one with --aspect");
}

std::vector<LayerId> interaction_layers(const MultilayerStreamGraph& g, const Config& c) {
  if (c.interaction == "all") return {};
  return layers_where(g, "interaction_type", c.interaction);
}

LayerGrouping grouping(const MultilayerStreamGraph& g, const Config& c) {
  auto cols = LayerGrouping::by_aspect(g, pick_aspect(g, c));
  const auto keep = interaction_layers(g, c);
  if (!keep.empty()) {
    for (LayerId l = 0; l < g.layer_count(); ++l) {
      if (std::find(keep.begin(), keep.end(), l) == keep.end()) cols.column_of_layer[l] = -1;
    }
  }
  return cols;
}

WalkPolicy policy(const MultilayerStreamGraph& g, const Config& c) {
  WalkPolicy p;
  p.seed = require_seed(c);
  p.gamma = ticks(g, c.gamma);
  p.num_walks = c.walks;
  p.t_max = c.t_max ? ticks(g, *c.t_max) : g.study_interval().end;
  if (c.weighting == "linear") {
    p.weighting = ExposureWeighting::LinearHorizon;
  } else if (c.weighting == "indicator") {
    p.weighting = ExposureWeighting::Indicator;
  } else {
    throw Failure("--weighting must be linear or indicator");
  }
  if (c.mobility == "node") {
    p.mobility = Mobility::Node;
  } else if (c.mobility != "node-layer") {
    throw Failure("--mobility must be node-layer or node");
  }
  return p;
}

StartSampling starts(const MultilayerStreamGraph& g, const Config& c) {
  return c.t0 ? StartSampling::fixed(ticks(g, *c.t0)) : StartSampling::uniform();
}

std::vector<LayerId> parse_layers(const MultilayerStreamGraph& g, const std::string& list) {
  std::vector<LayerId> out;
  for (const auto& item : split_csv_line(list)) {
    const auto name = trim(item);
    bool found = false;
    for (LayerId l = 0; l < g.layer_count() && !found; ++l) {
      if (g.layers().name(l) == name) {
        out.push_back(l);
        found = true;
      }
    }
    if (!found) throw Error(Errc::UnknownLayer, std::string(name));
  }
  if (out.empty()) throw Failure("empty layer list");
  return out;
}

// --------------------------------------------------------------- commands

int cmd_validate(const Config& c) {
  const auto in = load(c, false);
  const auto violations = validate(in.graph);
  for (const auto& v : violations) std::cout << v.message << '\n';
  if (!violations.empty()) {
    std::cout << violations.size() << " violation(s)\n";
    return 2;
  }
  std::cout << "ok: " << in.graph.node_count() << " nodes, " << in.graph.links().size() << " link records\n";
  return 0;
}

int cmd_stats(const Config& c) {
  const auto g = load(c).graph;
  const auto mode = parse_denominator_mode(c.denominator_mode);
  const auto mls_density = density_mls(g, mode);
  const auto agg = density_stream(aggregated_stream(g));
  emit(c, "stats.csv", [&](std::ostream& os) {
    os << "metric,value\n";
    os << "nodes," << g.node_count() << '\n';
    os << "layers," << g.layer_count() << '\n';
    os << "node_layers," << g.node_layer_presence().size() << '\n';
    os << "link_records," << g.links().size() << '\n';
    os << "study_start," << g.study_interval().start << '\n';
    os << "study_end," << g.study_interval().end << '\n';
    os << "number_of_links," << format_number(number_of_links(g.links(), g.study_interval())) << '\n';
    os << "density_mls," << format_number(mls_density.value) << '\n';
    os << "density_mls_numerator," << mls_density.numerator << '\n';
    os << "density_mls_denominator," << mls_density.denominator << '\n';
    os << "density_aggregated," << format_number(agg.value) << '\n';
    os << "denominator_mode," << to_string(mode) << '\n';
  });
  emit(c, "degrees.csv", [&](std::ostream& os) {
    os << "node,count_degree,duration_degree\n";
    for (NodeId u = 0; u < g.node_count(); ++u) {
      const auto d = degree(g, u);
      os << g.node_name(u) << ',' << d.count_degree << ',' << format_number(d.duration_degree) << '\n';
    }
  });
  return 0;
}

int cmd_project(const Config& c) {
  const auto g = load(c).graph;
  if (c.kind == "snapshot") {
    if (!c.t0) throw Failure("snapshot needs --t0");
    const auto m = snapshot(g, ticks(g, *c.t0));
    emit(c, c.out.empty() ? "snapshot.csv" : c.out, [&](std::ostream& os) {
      os << "node_a,layer_a,node_b,layer_b\n";
      for (const auto& [a, b] : m.edges) {
        os << g.node_name(a.node) << ',' << g.layers().name(a.layer) << ',' << g.node_name(b.node) << ','
           << g.layers().name(b.layer) << '\n';
      }
    });
    return 0;
  }
  MultilayerStreamGraph result;
  if (c.kind == "aggregated") {
    result = as_multilayer(aggregated_stream(g), g.resolution());
  } else if (c.kind == "intralayer" || c.kind == "interlayer") {
    const auto alpha = parse_layers(g, c.alpha);
    const auto beta = c.kind == "intralayer" ? alpha : parse_layers(g, c.beta);
    result = as_multilayer(interlayer_stream(g, alpha, beta).stream, g.resolution());
  } else if (c.kind == "window") {
    const Tick s = c.t0 ? ticks(g, *c.t0) : g.study_interval().start;
    const Tick e = c.t_max ? ticks(g, *c.t_max) : g.study_interval().end;
    result = restrict_to_window(g, {s, e});
  } else {
    throw Failure("--kind must be aggregated, intralayer, interlayer, window or snapshot");
  }
  write_interchange(output(c, c.out.empty() ? "projection.json" : c.out), result);
  return 0;
}

int cmd_density_dynamics(const Config& c) {
  const auto g = load(c).graph;
  std::optional<Tick> origin;
  if (c.window_origin) origin = ticks(g, *c.window_origin);
  const auto rows = gender_density_by_window(g, ticks(g, c.window), origin, interaction_layers(g, c));
  emit(c, "density_dynamics.csv", [&](std::ostream& os) { write_csv(os, rows); });
  return 0;
}

int cmd_class_matrix(const Config& c) {
  const auto g = load(c).graph;
  const auto m = aspect_density_matrix(g, c.aspect.empty() ? "class" : c.aspect, interaction_layers(g, c));
  emit(c, "class_matrix.csv", [&](std::ostream& os) { write_csv(os, m); });
  emit(c, "class_matrix_log.csv", [&](std::ostream& os) { write_log_csv(os, m); });
  return 0;
}

CentralityReport trivial_report(const std::string& layer) {
  CentralityReport r;
  r.kind = CentralityKind::Superimposed;
  r.layers = {layer};
  r.scores = Eigen::VectorXd::Ones(1);
  r.ranking = {0};
  return r;
}

int cmd_centrality(const Config& c) {
  SolverOptions solver;
  solver.tol = c.tol;
  CentralityReport r;
  if (c.kind == "juxtaposed") {
    DensityMatrix delta;
    if (!c.matrix_file.empty()) {
      std::ifstream is(c.matrix_file);
      if (!is) throw Error(Errc::Io, "cannot open " + c.matrix_file);
      delta = read_density_csv(is);
    } else {
      const auto g = load(c).graph;
      delta = aspect_density_matrix(g, pick_aspect(g, c), interaction_layers(g, c));
    }
    r = juxtaposed_centrality(delta, solver);
  } else if (c.kind == "superimposed") {
    const auto g = load(c).graph;
    const auto cols = grouping(g, c);
    if (cols.size() == 1) {
      r = trivial_report(cols.names[0]);
    } else {
      const auto x = averaged_exposure(g, cols, starts(g, c), policy(g, c), c.repeats);
      r = superimposed_centrality(x, solver);
    }
  } else {
    throw Failure("--kind must be superimposed or juxtaposed");
  }
  emit(c, "centrality.csv", [&](std::ostream& os) { write_csv(os, r); });
  emit(c, "centrality.json", [&](std::ostream& os) { write_json(os, r); });
  for (auto i : r.ranking) std::cout << r.layers[i] << ' ' << format_number(r.scores(static_cast<Eigen::Index>(i))) << '\n';
  return 0;
}

int cmd_exposure(const Config& c) {
  const auto g = load(c).graph;
  const auto cols = grouping(g, c);
  ExposureMatrix x;
  if (c.direct) {
    const Tick t0 = c.t0 ? ticks(g, *c.t0) : g.study_interval().start;
    const Tick t_max = c.t_max ? ticks(g, *c.t_max) : g.study_interval().end;
    x = direct_exposure(g, cols, t0, t_max);
  } else {
    x = averaged_exposure(g, cols, starts(g, c), policy(g, c), c.repeats);
  }
  emit(c, "exposure.csv", [&](std::ostream& os) { write_csv(os, x); });
  return 0;
}

int cmd_rank_compare(const Config& c) {
  const auto g = load(c).graph;
  SolverOptions solver;
  solver.tol = c.tol;
  const auto p = policy(g, c);
  const auto r = compare_coverage_and_centrality(g, grouping(g, c), starts(g, c), p, c.repeats, solver);
  emit(c, "rank_compare.csv", [&](std::ostream& os) { write_csv(os, r); });
  emit(c, "rank_compare.json", [&](std::ostream& os) {
    nlohmann::ordered_json j;
    j["spearman_rho"] = format_number(r.rho);
    j["layers"] = r.layers.size();
    j["seed"] = p.seed;
    j["walks"] = p.num_walks;
    j["repeats"] = c.repeats;
    j["gamma"] = p.gamma;
    j["t_max"] = p.t_max;
    j["weighting"] = to_string(p.weighting);
    j["mobility"] = to_string(p.mobility);
    os << j.dump(2) << '\n';
  });
  std::cout << "spearman_rho " << format_number(r.rho) << '\n';
  return 0;
}

int cmd_convert(const Config& c) {
  const auto g = load(c).graph;
  write_interchange(output(c, c.out.empty() ? "graph.json" : c.out), g);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multilayer stream graph analysis"};
  app.require_subcommand(1);
  Config c;

  const auto common = [&](CLI::App* sub) {
    sub->add_option("--manifest", c.manifest, "Dataset manifest or interchange file");
    sub->add_option("--out-dir", c.out_dir, "Directory for output files");
    return sub;
  };
  const auto walking = [&](CLI::App* sub) {
    sub->add_option("--seed", c.seed, "Random seed (required)");
    sub->add_option("--gamma", c.gamma, "Traversal delay, seconds")->check(CLI::NonNegativeNumber);
    sub->add_option("--walks", c.walks, "Walks per start node")->check(CLI::PositiveNumber);
    sub->add_option("--repeats", c.repeats, "Average over this many seeds: seed, seed+1, ...")
        ->check(CLI::PositiveNumber);
    sub->add_option("--t-max", c.t_max, "Walk horizon, absolute seconds");
    sub->add_option("--t0", c.t0, "Fixed start instant, absolute seconds (default: uniform over presence)");
    sub->add_option("--weighting", c.weighting, "linear or indicator");
    sub->add_option("--mobility", c.mobility, "node-layer or node");
    return sub;
  };
  const auto filtering = [&](CLI::App* sub) {
    sub->add_option("--interaction", c.interaction,
                    "Keep layers with this interaction_type, or \"all\" (ignored when the aspect is absent)");
    return sub;
  };

  auto* validate_cmd = common(app.add_subcommand("validate", "Check the closure constraints"));
  auto* stats_cmd = common(app.add_subcommand("stats", "Global measures and per-node degrees"));
  stats_cmd->add_option("--denominator-mode", c.denominator_mode, "all-pairs, intralayer-pairs or linked-layer-pairs");

  auto* project_cmd = common(app.add_subcommand("project", "Write a projection"));
  project_cmd->add_option("--kind", c.kind, "aggregated, intralayer, interlayer, window or snapshot")->required();
  project_cmd->add_option("--alpha", c.alpha, "Comma separated layer names, e.g. face2face|M|MP");
  project_cmd->add_option("--beta", c.beta, "Second layer group for interlayer");
  project_cmd->add_option("--t0", c.t0, "Window start or snapshot instant, seconds");
  project_cmd->add_option("--t-max", c.t_max, "Window end, seconds");
  project_cmd->add_option("--out", c.out, "Output file name");

  auto* dyn_cmd = filtering(common(app.add_subcommand("density-dynamics", "Gender densities per window")));
  dyn_cmd->add_option("--window", c.window, "Window length, seconds")->check(CLI::PositiveNumber);
  dyn_cmd->add_option("--window-origin", c.window_origin, "Start of the first window, absolute seconds");

  auto* class_cmd = filtering(common(app.add_subcommand("class-matrix", "Density matrix between classes")));
  class_cmd->add_option("--aspect", c.aspect, "Aspect whose values are the rows (default class)");

  auto* cent_cmd = filtering(walking(common(app.add_subcommand("centrality", "Layer centrality"))));
  cent_cmd->add_option("--kind", c.kind, "superimposed or juxtaposed")->required();
  cent_cmd->add_option("--aspect", c.aspect, "Aspect defining the layers to rank");
  cent_cmd->add_option("--matrix-file", c.matrix_file, "Juxtaposed: read the density matrix from CSV");
  cent_cmd->add_option("--tol", c.tol, "Solver tolerance")->check(CLI::PositiveNumber);

  auto* expo_cmd = filtering(walking(common(app.add_subcommand("exposure", "Per-node layer exposure"))));
  expo_cmd->add_option("--aspect", c.aspect, "Aspect defining the columns");
  expo_cmd->add_flag("--direct", c.direct, "Sum incident links instead of walking");

  auto* rank_cmd =
      filtering(walking(common(app.add_subcommand("rank-compare", "Coverage rank against centrality rank"))));
  rank_cmd->add_option("--aspect", c.aspect, "Aspect defining the layers");
  rank_cmd->add_option("--tol", c.tol, "Solver tolerance")->check(CLI::PositiveNumber);

  auto* convert_cmd = common(app.add_subcommand("convert", "Write the ingested graph as an interchange file"));
  convert_cmd->add_option("--out", c.out, "Output file name (default graph.json)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*validate_cmd) return cmd_validate(c);
    if (*stats_cmd) return cmd_stats(c);
    if (*project_cmd) return cmd_project(c);
    if (*dyn_cmd) return cmd_density_dynamics(c);
    if (*class_cmd) return cmd_class_matrix(c);
    if (*cent_cmd) return cmd_centrality(c);
    if (*expo_cmd) return cmd_exposure(c);
    if (*rank_cmd) return cmd_rank_compare(c);
    if (*convert_cmd) return cmd_convert(c);
  } catch (const Error& e) {
    log(Level::Error, e.what());
    return 1;
  } catch (const Failure& e) {
    log(Level::Error, e.what());
    return 1;
  } catch (const std::exception& e) {
    log(Level::Error, e.what());
    return 1;
  }
  return 1;
}
