#include <sstream>

#include "corpus.hpp"
#include "doctest.h"
#include "fixtures.hpp"
#include "mlstream/error.hpp"
#include "mlstream/measures.hpp"
#include "mlstream/projections.hpp"

using namespace mls;

namespace {

// Two nodes on one layer, present over [0,10], linked over [0,5].
MultilayerStreamGraph pair_fixture() {
  GraphBuilder b({0, 10}, {{"t", {"x"}}});
  const auto u = b.add_node("u");
  const auto v = b.add_node("v");
  b.add_presence({u, 0}, {0, 10});
  b.add_presence({v, 0}, {0, 10});
  b.add_link({0, 5}, {u, 0}, {v, 0});
  return std::move(b).finish();
}

}  // namespace

TEST_CASE("number of links") {
  const std::vector<TemporalLink> one{make_link({2, 7}, {0, 0}, {1, 0})};
  CHECK(number_of_links(one, {0, 10}) == 0.5);
  CHECK(number_of_links({}, {0, 10}) == 0.0);
  const std::vector<TemporalLink> instant{make_link({3, 3}, {0, 0}, {1, 0})};
  CHECK(number_of_links(instant, {0, 10}) == 0.0);
  CHECK_THROWS_AS(number_of_links(one, {4, 4}), Error);
}

TEST_CASE("static graph density") {
  const auto d = density_graph(4, 4);
  CHECK(d.numerator * 3 == d.denominator * 2);
  CHECK(d.value == 2.0 / 3.0);
  CHECK(density_graph(5, 10).value == 1.0);
  CHECK(density_graph(5, 0).value == 0.0);
  CHECK(density_graph(1, 0).flagged);
}

TEST_CASE("stream density of two co-present nodes") {
  const auto g = pair_fixture();
  CHECK(density_stream(aggregated_stream(g)).value == 0.5);
  CHECK(density_mls(g).value == 0.5);
  CHECK(interlayer_density(g, 0, 0).value == 0.5);
}

TEST_CASE("no co-presence gives a flagged zero") {
  StreamGraph s;
  s.study = TimeSet({{0, 10}});
  s.presence = {TimeSet({{0, 3}}), TimeSet({{5, 9}})};
  s.labels = {"a", "b"};
  const auto d = density_stream(s);
  CHECK(d.flagged);
  CHECK(d.value == 0.0);
}

TEST_CASE("fully linked 2x2 node-layer fixture has density one") {
  GraphBuilder b({0, 4}, {{"t", {"x", "y"}}});
  for (const char* n : {"u", "v"}) b.add_node(n);
  const NodeLayer xs[] = {{0, 0}, {0, 1}, {1, 0}, {1, 1}};
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) b.add_link({0, 4}, xs[i], xs[j]);
  }
  const auto g = std::move(b).finish();
  CHECK(density_mls(g).value == 1.0);
}

TEST_CASE("seven incident link records give count degree seven") {
  GraphBuilder b({0, 100}, {{"t", {"x", "y"}}});
  for (int i = 0; i < 7; ++i) {
    b.add_link({10 * i, 10 * i + 4}, "hub", static_cast<LayerId>(i % 2), "n" + std::to_string(i % 3), 0);
  }
  b.add_node("alone");
  const auto g = std::move(b).finish();
  const auto d = degree(g, g.node("hub"));
  CHECK(d.count_degree == 7);
  CHECK(d.duration_degree == doctest::Approx(0.28));
  const auto none = degree(g, g.node("alone"));
  CHECK(none.count_degree == 0);
  CHECK(none.duration_degree == 0.0);
  CHECK(degree_node_layer(g, {g.node("hub"), 1}).count_degree == 3);
  CHECK_THROWS_AS(degree(g, 99), Error);
}

TEST_CASE("denominator modes") {
  CHECK(parse_denominator_mode("intralayer-pairs") == DenominatorMode::IntralayerPairs);
  CHECK(to_string(DenominatorMode::LinkedLayerPairs) == "linked-layer-pairs");
  CHECK_THROWS_AS(parse_denominator_mode("some"), Error);

  // u and v on layer x over [0,10], w on layer y over [0,10]; one x link.
  GraphBuilder b({0, 10}, {{"t", {"x", "y"}}});
  for (const char* n : {"u", "v", "w"}) b.add_node(n);
  b.add_presence({0, 0}, {0, 10}).add_presence({1, 0}, {0, 10}).add_presence({2, 1}, {0, 10});
  b.add_link({0, 10}, {0, 0}, {1, 0});
  const auto g = std::move(b).finish();
  CHECK(density_mls(g, DenominatorMode::AllPairs).value == doctest::Approx(1.0 / 3.0));
  CHECK(density_mls(g, DenominatorMode::IntralayerPairs).value == 1.0);
  CHECK(density_mls(g, DenominatorMode::LinkedLayerPairs).value == 1.0);
}

TEST_CASE("pairwise co-presence sweep") {
  const std::vector<TimeSet> p{TimeSet({{0, 10}}), TimeSet({{5, 15}}), TimeSet({{0, 2}, {8, 20}})};
  // pairs: (0,1)=5, (0,2)=2+2=4, (1,2)=7
  CHECK(pairwise_copresence(p) == 16);
  const std::vector<std::uint8_t> side{0, 1, 1};
  CHECK(pairwise_copresence(p, side) == 9);
}

TEST_CASE("group densities require equal or disjoint groups") {
  GraphBuilder b({0, 10}, {{"t", {"x", "y", "z"}}});
  b.add_link({0, 4}, "u", 0, "v", 1);
  const auto g = std::move(b).finish();
  CHECK_THROWS_AS(group_density(g, {0, 1}, {1, 2}), Error);
  CHECK(group_density(g, {0}, {1}).value == 1.0);
}

TEST_CASE("density matrix csv round trip and log variant") {
  DensityMatrix m;
  m.labels = {"a", "b"};
  m.values.resize(2, 2);
  m.values << 0.2, 0.0, 0.0, 0.01;
  std::ostringstream raw;
  write_csv(raw, m);
  CHECK(raw.str() == "layer,a,b\na,0.2,0\nb,0,0.01\n");
  std::istringstream in(raw.str());
  const auto back = read_density_csv(in);
  CHECK(back.labels == m.labels);
  CHECK(back.values == m.values);

  std::ostringstream lg;
  write_log_csv(lg, m);
  CHECK(lg.str() == "layer,a,b\na,0.698970004336,inf\nb,inf,2\n");

  std::istringstream fractions("layer,M,F\nM,1/5,1/7\nF,1/7,1/6\n");
  const auto f = read_density_csv(fractions);
  CHECK(f.values(0, 1) == 1.0 / 7.0);
  std::istringstream bad("layer,M\nM,x\n");
  CHECK_THROWS_AS(read_density_csv(bad), Error);
}

TEST_CASE("scale invariance of densities") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 100; ++i) {
    const auto raw = fixtures::random_raw_graph(rng);
    auto scaled = raw;
    const mls::Tick f = 7;
    const auto scale = [f](fixtures::Span& s) { s = {s.s * f, s.e * f}; };
    scale(scaled.study);
    for (auto& lp : scaled.layer_presence)
      for (auto& s : lp) scale(s);
    for (auto& [x, p] : scaled.presence)
      for (auto& s : p) scale(s);
    for (auto& l : scaled.links) scale(l.t);
    const auto g = fixtures::to_graph(raw);
    const auto h = fixtures::to_graph(scaled);
    CHECK(density_mls(g).value == density_mls(h).value);
    CHECK(density_stream(aggregated_stream(g)).value == density_stream(aggregated_stream(h)).value);
  }
}

TEST_CASE("measures agree with the tick oracles on generated graphs") {
  const auto r = fixtures::sweep_measures(2024, 300);
  for (const auto& f : r.failures) MESSAGE(f);
  CHECK(r.ok());
}
