#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "mlstream/error.hpp"
#include "mlstream/model.hpp"

using namespace mls;

namespace {

std::vector<Aspect> place_and_type() {
  return {{"place", {"mountain", "river"}}, {"type", {"play", "groom", "fight"}}};
}

template <typename F>
Errc code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return Errc::Io;
}

}  // namespace

TEST_CASE("layer space ids are mixed radix, first aspect most significant") {
  LayerSpace s(place_and_type());
  CHECK(s.layer_count() == 6);
  CHECK(s.id({"mountain", "play"}) == 0);
  CHECK(s.id({"mountain", "fight"}) == 2);
  CHECK(s.id({"river", "play"}) == 3);
  CHECK(s.name(5) == "river|fight");
  for (LayerId a = 0; a < 6; ++a) CHECK(s.id(s.layer(a)) == a);
  CHECK(s.coordinate(4, 1) == 1);
  CHECK(s.aspect_index("type") == 1);
  CHECK_FALSE(s.aspect_index("colour").has_value());
  CHECK(code_of([&] { (void)s.id({"sea", "play"}); }) == Errc::UnknownAspectCoordinate);
}

TEST_CASE("links are stored canonically and self-links are rejected") {
  const auto l = make_link({0, 3}, {2, 1}, {1, 0});
  CHECK(l.a == NodeLayer{1, 0});
  CHECK(l.b == NodeLayer{2, 1});
  CHECK(code_of([] { (void)make_link({0, 1}, {1, 1}, {1, 1}); }) == Errc::InvalidArgument);
  CHECK(code_of([] { (void)make_link({3, 1}, {1, 1}, {2, 1}); }) == Errc::InvalidInterval);
}

TEST_CASE("auto-materialize builder grows presence to cover links") {
  GraphBuilder b({0, 20}, place_and_type());
  const auto m_play = b.layer({"mountain", "play"});
  const auto r_play = b.layer({"river", "play"});
  b.add_link({2, 5}, "a", m_play, "b", m_play);
  b.add_link({4, 9}, "a", m_play, "b", r_play);
  auto g = std::move(b).finish();

  CHECK(validate(g).empty());
  CHECK(g.node_count() == 2);
  CHECK(g.presence({0, m_play}) == TimeSet({{2, 9}}));
  CHECK(g.presence({1, r_play}) == TimeSet({{4, 9}}));
  CHECK(g.node_presence(1) == TimeSet({{2, 9}}));
  CHECK(g.links().size() == 2);
  CHECK(g.incident_links(NodeId{0}).size() == 2);
  CHECK(g.incident_links(NodeLayer{1, r_play}).size() == 1);
}

TEST_CASE("abutting link records merge in link presence") {
  GraphBuilder b({0, 100}, {{"t", {"x"}}});
  const auto x = b.layer({"x"});
  b.add_link({0, 20}, "u", x, "v", x);
  b.add_link({20, 40}, "v", x, "u", x);
  b.add_link({60, 60}, "u", x, "v", x);
  auto g = std::move(b).finish();
  CHECK(g.links().size() == 3);
  CHECK(g.link_presence({0, x}, {1, x}) == TimeSet({{0, 40}, {60, 60}}));
  CHECK(g.link_presence({1, x}, {0, x}) == TimeSet({{0, 40}, {60, 60}}));
}

TEST_CASE("strict builder refuses links outside declared presence") {
  GraphBuilder b({0, 10}, {{"t", {"x"}}}, {BuildMode::Strict});
  const auto u = b.add_node("u");
  const auto v = b.add_node("v");
  b.add_presence({u, 0}, {0, 5});
  b.add_presence({v, 0}, {0, 10});
  b.add_link({1, 4}, {u, 0}, {v, 0});
  CHECK(code_of([&] { b.add_link({4, 8}, {u, 0}, {v, 0}); }) == Errc::ClosureViolation);
  CHECK(code_of([&] { b.add_presence({u, 0}, {8, 12}); }) == Errc::OutOfStudyInterval);
}

TEST_CASE("intralayer-only builder rejects interlayer links") {
  GraphBuilder b({0, 10}, {{"t", {"x", "y"}}}, {BuildMode::AutoMaterialize, true});
  CHECK(code_of([&] { b.add_link({1, 2}, "u", 0, "v", 1); }) == Errc::InterlayerLinkRejected);
}

TEST_CASE("validate reports each closure violation") {
  GraphParts p;
  p.study = {0, 10};
  p.nodes = {"u", "v"};
  p.aspects = {{"t", {"x", "y"}}};
  p.layer_presence = {TimeSet({{0, 10}}), TimeSet({{0, 4}})};
  p.node_layer_presence[{0, 0}] = TimeSet({{0, 5}});
  p.node_layer_presence[{1, 1}] = TimeSet({{0, 6}});
  p.links = {make_link({3, 7}, {0, 0}, {1, 1}), make_link({1, 2}, {0, 0}, {1, 0})};
  MultilayerStreamGraph g(p);
  const auto v = validate(g);

  int outside_node_layer = 0, outside_layer = 0, unknown = 0;
  for (const auto& x : v) {
    if (x.kind == ViolationKind::LinkOutsideNodeLayer) {
      ++outside_node_layer;
      REQUIRE(x.link.has_value());
    }
    if (x.kind == ViolationKind::NodeLayerOutsideLayer) {
      ++outside_layer;
      CHECK(x.uncovered == TimeSet({{4, 6}}));
    }
    if (x.kind == ViolationKind::UnknownNodeLayer) ++unknown;
  }
  CHECK(outside_node_layer == 2);  // both endpoints of the [3,7] link
  CHECK(outside_layer == 1);
  CHECK(unknown == 1);
}

TEST_CASE("finish throws ClosureViolation for an invalid graph") {
  GraphBuilder b({0, 10}, {{"t", {"x"}}}, {BuildMode::Strict});
  const auto u = b.add_node("u");
  b.add_presence({u, 0}, {0, 10});
  b.set_layer_presence(0, TimeSet({{0, 5}}));
  CHECK(code_of([&] { (void)std::move(b).finish(); }) == Errc::ClosureViolation);
}

TEST_CASE("lookups raise the documented errors") {
  GraphBuilder b({0, 10}, {{"t", {"x", "y"}}});
  b.add_link({1, 2}, "u", 0, "v", 0);
  auto g = std::move(b).finish();
  CHECK(g.node("v") == 1);
  CHECK(code_of([&] { (void)g.node("w"); }) == Errc::UnknownNode);
  CHECK(code_of([&] { (void)g.presence({0, 1}); }) == Errc::UnknownNodeLayer);
  CHECK(code_of([&] { (void)g.layer_presence(7); }) == Errc::UnknownLayer);
}

TEST_CASE("generated graphs satisfy closure and keep every link") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 300; ++i) {
    const auto raw = fixtures::random_raw_graph(rng);
    const auto g = fixtures::to_graph(raw);
    CHECK(validate(g).empty());
    CHECK(g.links().size() == raw.links.size());
    for (const auto& l : g.links()) CHECK(l.a < l.b);
  }
}
