#pragma once

// Test fixtures and brute-force oracles. The oracles work on the raw
// generated data with a doubled tick grid: for integer endpoints, a closed
// interval set is determined by membership of the integers (instants) and
// the half-integers (unit cells), and its measure is the number of covered
// cells.

#include <cstdint>
#include <filesystem>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "mlstream/model.hpp"
#include "mlstream/time_set.hpp"

namespace fixtures {

using mls::Tick;

struct Span {
  Tick s;
  Tick e;
};

struct RawLink {
  Span t;
  int u, a;  // node, layer
  int v, b;
};

struct RawGraph {
  Span study;
  int nodes = 0;
  int layers = 0;
  std::vector<std::vector<Span>> layer_presence;
  std::map<std::pair<int, int>, std::vector<Span>> presence;
  std::vector<RawLink> links;
};

struct Limits {
  int max_nodes = 5;
  int max_layers = 3;
  Tick max_span = 200;
  int max_links = 10;
};

RawGraph random_raw_graph(std::mt19937_64& rng, const Limits& limits = {});
/// Single aspect "layer" with elementary layers L0, L1, ...; nodes n0, n1, ...
mls::MultilayerStreamGraph to_graph(const RawGraph& raw);

bool covers_cell(const std::vector<Span>& ivs, Tick k);
bool covers_point(const std::vector<Span>& ivs, Tick p);
/// Membership on the doubled grid: even = instant p/2, odd = cell.
bool covers_half(const std::vector<Span>& ivs, Tick h);
/// Same check on a library TimeSet, computed from its intervals.
bool covers_half(const mls::TimeSet& ts, Tick h);

/// Exact rational p/q; q == 0 means an empty denominator.
struct Ratio {
  std::int64_t num = 0;
  std::int64_t den = 0;
};

Ratio oracle_number_of_links(const RawGraph& g);
/// Count degree and summed link cells of a node (layer < 0) or node-layer.
std::pair<std::size_t, std::int64_t> oracle_degree(const RawGraph& g, int node, int layer = -1);
/// Layer-blind stream density.
Ratio oracle_aggregated_density(const RawGraph& g);
/// mode: 0 all node-layer pairs, 1 same-layer pairs, 2 pairs on linked layer pairs.
Ratio oracle_mls_density(const RawGraph& g, int mode);
Ratio oracle_interlayer_density(const RawGraph& g, int alpha, int beta);
/// Aggregated link membership for a node pair on the doubled grid.
bool oracle_aggregated_link(const RawGraph& g, int u, int v, Tick h);

// -------------------------------------------------------- path fixtures

/// Plain path check straight from the definition: every hop is inside some
/// record of its pair, hops chain, times grow by at least gamma.
struct RawHop {
  Tick t;
  int from_node, from_layer, to_node, to_layer;
};
bool oracle_path_valid(const RawGraph& g, const std::vector<RawHop>& hops, Tick gamma);

/// Reachability by a fixed point on the integer time grid.
bool oracle_reachable(const RawGraph& g, int from_node, int from_layer, Tick t_from, int to_node, int to_layer,
                      Tick t_to, Tick gamma);

// ------------------------------------------------------ flight networks

struct FlightNetwork {
  mls::MultilayerStreamGraph graph;
  /// Carrier names, most important first.
  std::vector<std::string> planted_order;
};

/// `carriers` carriers over `airports` airports and `days` days. Carrier i
/// serves a nested set of airports and flies a number of legs both
/// proportional to (carriers - i).
FlightNetwork synthetic_flights(std::uint64_t seed, int carriers = 5, int airports = 30, int days = 3);

// --------------------------------------------------- contact data files

/// Writes a small contacts / metadata / friendship / facebook set spanning
/// `days` days into `dir`. Returns the number of contact lines written.
struct ContactFixture {
  std::filesystem::path contacts, metadata, friendship, facebook;
  std::size_t contact_lines = 0;
  std::int64_t first_time = 0;
};
ContactFixture write_contact_fixture(const std::filesystem::path& dir, std::uint64_t seed, int days = 2);

/// Fresh empty directory under the system temp dir.
std::filesystem::path scratch_dir(const std::string& name);

}  // namespace fixtures
