#include <cmath>
#include <functional>
#include <set>

#include "corpus.hpp"
#include "doctest.h"
#include "fixtures.hpp"
#include "mlstream/error.hpp"
#include "mlstream/paths.hpp"
#include "mlstream/walks.hpp"

using namespace mls;

namespace {

// u -x- v over [0,4], v -x- w over [6,8], w -y- u over [1,2]
MultilayerStreamGraph chain() {
  GraphBuilder b({0, 10}, {{"t", {"x", "y"}}});
  b.add_link({0, 4}, "u", 0, "v", 0);
  b.add_link({6, 8}, "v", 0, "w", 0);
  b.add_link({1, 2}, "w", 1, "u", 1);
  return std::move(b).finish();
}

// Exact walk distribution by enumerating every branch of the walk tree on
// the raw fixture. Columns are layers.
struct TreeOracle {
  const fixtures::RawGraph& g;
  Tick gamma;
  Tick t_max;
  std::size_t max_hops;

  std::vector<double> touch;     // P(column touched)
  std::vector<double> coverage;  // E[distinct nodes touched through column]

  void run(int start, Tick t0) {
    touch.assign(static_cast<std::size_t>(g.layers), 0.0);
    coverage.assign(static_cast<std::size_t>(g.layers), 0.0);
    std::vector<std::set<int>> nodes(static_cast<std::size_t>(g.layers));
    explore(true, start, 0, t0, 0, 1.0, nodes);
  }

  void explore(bool at_node, int node, int layer, Tick ready, std::size_t hops, double p,
               std::vector<std::set<int>>& nodes) {
    std::vector<const fixtures::RawLink*> feasible;
    for (const auto& l : g.links) {
      const bool incident = at_node ? (l.u == node || l.v == node)
                                    : ((l.u == node && l.a == layer) || (l.v == node && l.b == layer));
      if (incident && l.t.e >= ready && l.t.s <= t_max) feasible.push_back(&l);
    }
    if (hops == max_hops || ready > t_max || feasible.empty()) {
      for (std::size_t c = 0; c < nodes.size(); ++c) {
        if (!nodes[c].empty()) touch[c] += p;
        coverage[c] += p * static_cast<double>(nodes[c].size());
      }
      return;
    }
    const double q = p / static_cast<double>(feasible.size());
    for (const auto* l : feasible) {
      std::pair<int, int> x{l->u, l->a}, y{l->v, l->b};
      if (y < x) std::swap(x, y);
      std::pair<int, int> from = x, to = y;
      if (at_node ? x.first != node : x != std::pair{node, layer}) std::swap(from, to);
      const Tick hop = std::max(l->t.s, ready);
      auto saved = nodes;
      for (int c : {l->a, l->b}) {
        nodes[static_cast<std::size_t>(c)].insert(from.first);
        nodes[static_cast<std::size_t>(c)].insert(to.first);
      }
      explore(false, to.first, to.second, hop + gamma, hops + 1, q, nodes);
      nodes = std::move(saved);
    }
  }
};

}  // namespace

TEST_CASE("path validity on a hand fixture") {
  const auto g = chain();
  const NodeLayer u{0, 0}, v{1, 0}, w{2, 0};
  CHECK(is_valid_path(g, {{{2, u, v}, {6, v, w}}}, 0));
  CHECK(is_valid_path(g, {{{2, u, v}, {6, v, w}}}, 4));
  CHECK_FALSE(is_valid_path(g, {{{2, u, v}, {6, v, w}}}, 5));
  CHECK_FALSE(is_valid_path(g, {{{5, u, v}}}, 0));
  CHECK(is_valid_path(g, {{{4, u, v}}}, 0));  // closed endpoint
  CHECK_FALSE(is_valid_path(g, {{{2, u, v}, {6, w, v}}}, 0));
  CHECK_THROWS_AS(is_valid_path(g, {}, 0), Error);
}

TEST_CASE("reachability on a hand fixture") {
  const auto g = chain();
  const NodeLayer u{0, 0}, w{2, 0}, uy{0, 1}, wy{2, 1};
  CHECK(reachable(g, {0, u}, {6, w}, 0));
  CHECK_FALSE(reachable(g, {0, u}, {5, w}, 0));
  CHECK_FALSE(reachable(g, {5, u}, {10, w}, 0));
  CHECK(reachable(g, {0, u}, {8, w}, 4));
  CHECK(reachable(g, {4, u}, {10, w}, 3));  // hop at 4, ready at 7, v-w still open
  CHECK_FALSE(reachable(g, {4, u}, {10, w}, 5));
  CHECK(reachable(g, {0, wy}, {2, uy}, 0));
  CHECK_FALSE(reachable(g, {0, u}, {10, wy}, 0));  // layers do not mix without interlayer links
  CHECK(reachable(g, {3, u}, {3, u}, 0));
  CHECK_THROWS_AS(reachable(g, {3, u}, {2, w}, 0), Error);
  CHECK_THROWS_AS(reachable(g, {0, u}, {2, w}, -1), Error);
}

TEST_CASE("paths and reachability agree with exhaustive enumeration") {
  const auto r = fixtures::sweep_paths(314, 25);
  for (const auto& f : r.failures) MESSAGE(f);
  CHECK(r.ok());
}

TEST_CASE("first hop is uniform over feasible links") {
  GraphBuilder b({0, 10}, {{"t", {"x"}}});
  for (const char* leaf : {"a", "b", "c", "d"}) b.add_link({0, 10}, "hub", 0, leaf, 0);
  b.add_link({0, 1}, "hub", 0, "e", 0);  // ends before the walk starts
  const auto g = std::move(b).finish();
  WalkPolicy policy;
  policy.seed = 9;
  policy.t_max = 10;
  policy.max_hops = 1;
  const int n = 20000;
  std::map<NodeId, int> counts;
  for (int w = 0; w < n; ++w) {
    const auto path = sample_walk(g, 2, g.node("hub"), policy, static_cast<std::uint64_t>(w));
    REQUIRE(path.hops.size() == 1);
    ++counts[path.hops[0].to.node];
  }
  CHECK(counts.size() == 4);
  CHECK_FALSE(counts.contains(g.node("e")));
  const double sigma = std::sqrt(n * 0.25 * 0.75);
  for (const auto& [node, c] : counts) CHECK(std::abs(c - n / 4.0) < 3 * sigma);
}

TEST_CASE("walks wait for links, respect gamma and stop at t_max") {
  const auto g = chain();
  WalkPolicy policy;
  policy.t_max = 10;
  policy.gamma = 1;
  for (std::uint64_t w = 0; w < 200; ++w) {
    const auto path = sample_walk(g, 0, g.node("u"), policy, w);
    REQUIRE_FALSE(path.empty());
    CHECK(is_valid_path(g, path, policy.gamma));
    for (const auto& h : path.hops) CHECK(h.time <= policy.t_max);
  }
  policy.t_max = 5;
  for (std::uint64_t w = 0; w < 50; ++w) {
    for (const auto& h : sample_walk(g, 0, g.node("u"), policy, w).hops) CHECK(h.time <= 5);
  }
  CHECK(sample_walk(g, 9, g.node("u"), policy, 0).empty());
}

TEST_CASE("walks are reproducible from seed and walk index") {
  const auto g = chain();
  WalkPolicy policy;
  policy.t_max = 10;
  policy.seed = 3;
  for (std::uint64_t w = 0; w < 20; ++w) {
    const auto a = sample_walk(g, 0, 0, policy, w);
    const auto b = sample_walk(g, 0, 0, policy, w);
    CHECK(a.hops == b.hops);
  }
}

TEST_CASE("exposure matches the exact walk tree") {
  std::mt19937_64 rng(21);
  const fixtures::Limits small{4, 3, 20, 6};
  int compared = 0;
  for (int i = 0; i < 40; ++i) {
    const auto raw = fixtures::random_raw_graph(rng, small);
    const auto g = fixtures::to_graph(raw);
    WalkPolicy policy;
    policy.seed = static_cast<std::uint64_t>(i);
    policy.t_max = raw.study.e;
    policy.gamma = i % 3;
    policy.max_hops = 4;
    policy.num_walks = 4000;
    const auto x = layer_exposure(g, LayerGrouping::per_layer(g), StartSampling::fixed(raw.study.s), policy);
    for (int u = 0; u < raw.nodes; ++u) {
      TreeOracle oracle{raw, policy.gamma, policy.t_max, policy.max_hops, {}, {}};
      oracle.run(u, raw.study.s);
      for (int c = 0; c < raw.layers; ++c) {
        const double p = oracle.touch[static_cast<std::size_t>(c)];
        const double est = x.values(u, c);
        const double sigma = std::sqrt(p * (1 - p) / static_cast<double>(policy.num_walks));
        ++compared;
        if (p == 0.0) {
          CHECK(est == 0.0);
        } else {
          CHECK(std::abs(est - p) <= 5 * sigma + 1e-12);
        }
      }
    }
    // batch estimates average back to the overall estimate
    Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(x.values.rows(), x.values.cols());
    for (const auto& b : x.batch_values) mean += b;
    mean /= static_cast<double>(x.batch_values.size());
    CHECK((mean - x.values).cwiseAbs().maxCoeff() < 1e-12);
  }
  CHECK(compared > 100);
}

TEST_CASE("coverage matches the exact walk tree") {
  std::mt19937_64 rng(8);
  const fixtures::Limits small{4, 2, 20, 6};
  for (int i = 0; i < 20; ++i) {
    const auto raw = fixtures::random_raw_graph(rng, small);
    const auto g = fixtures::to_graph(raw);
    WalkPolicy policy;
    policy.seed = 100 + static_cast<std::uint64_t>(i);
    policy.t_max = raw.study.e;
    policy.max_hops = 4;
    policy.num_walks = 20000;
    const auto r = layer_coverage(g, LayerGrouping::per_layer(g), StartSampling::fixed(raw.study.s), policy);
    std::vector<double> expected(static_cast<std::size_t>(raw.layers), 0.0);
    for (int u = 0; u < raw.nodes; ++u) {
      TreeOracle oracle{raw, policy.gamma, policy.t_max, policy.max_hops, {}, {}};
      oracle.run(u, raw.study.s);
      for (int c = 0; c < raw.layers; ++c) {
        expected[static_cast<std::size_t>(c)] +=
            oracle.coverage[static_cast<std::size_t>(c)] / raw.nodes / raw.nodes;
      }
    }
    for (int c = 0; c < raw.layers; ++c) {
      const double e = expected[static_cast<std::size_t>(c)];
      if (e == 0.0) {
        CHECK(r.raw(c) == 0.0);
      } else {
        CHECK(std::abs(r.raw(c) - e) <= 5 * r.std_error(c) + 1e-3);
      }
    }
  }
}

TEST_CASE("linear horizon exposure on a deterministic chain") {
  // One link per step, so every walk is the same.
  GraphBuilder b({0, 10}, {{"t", {"x", "y"}}});
  b.add_link({2, 2}, "a", 0, "b", 0);
  b.add_link({6, 6}, "b", 0, "c", 1);
  const auto g = std::move(b).finish();
  WalkPolicy policy;
  policy.t_max = 10;
  policy.gamma = 1;  // no stepping back over the instantaneous a-b link
  policy.num_walks = 10;
  policy.weighting = ExposureWeighting::LinearHorizon;
  const auto x = layer_exposure(g, LayerGrouping::per_layer(g), StartSampling::fixed(0), policy);
  // From a: x weighs 8 (hop at 2) + 4 (hop at 6), y weighs 4.
  CHECK(x.values(0, 0) == doctest::Approx(12.0 / 16.0));
  CHECK(x.values(0, 1) == doctest::Approx(4.0 / 16.0));
  // c only has the interlayer link, which counts for both columns
  CHECK(x.values(2, 0) == doctest::Approx(0.5));
  CHECK(x.values(2, 1) == doctest::Approx(0.5));

  const auto d = direct_exposure(g, LayerGrouping::per_layer(g), 0, 10);
  CHECK(d.values(1, 0) == doctest::Approx(12.0 / 16.0));
  CHECK(d.values(2, 1) == doctest::Approx(0.5));
}

TEST_CASE("exposure is deterministic under a fixed seed") {
  const auto flights = fixtures::synthetic_flights(4, 3, 10, 1);
  WalkPolicy policy;
  policy.seed = 17;
  policy.num_walks = 50;
  policy.t_max = flights.graph.study_interval().end;
  policy.weighting = ExposureWeighting::LinearHorizon;
  const auto cols = LayerGrouping::per_layer(flights.graph);
  const auto a = layer_exposure(flights.graph, cols, StartSampling::uniform(), policy);
  const auto b = layer_exposure(flights.graph, cols, StartSampling::uniform(), policy);
  CHECK(a.values == b.values);
  policy.seed = 18;
  const auto c = layer_exposure(flights.graph, cols, StartSampling::uniform(), policy);
  CHECK(a.values != c.values);
}

TEST_CASE("grouping and policy errors") {
  const auto g = chain();
  CHECK_THROWS_AS(LayerGrouping::by_aspect(g, "nope"), Error);
  const auto by = LayerGrouping::by_aspect(g, "t");
  CHECK(by.names == std::vector<std::string>{"x", "y"});
  WalkPolicy bad;
  bad.t_max = 11;
  CHECK_THROWS_AS(check_policy(g, bad), Error);
  bad.t_max = 10;
  bad.gamma = -1;
  CHECK_THROWS_AS(check_policy(g, bad), Error);
}
