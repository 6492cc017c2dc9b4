#include "fixtures.hpp"

#include <algorithm>
#include <fstream>
#include <set>

namespace fixtures {

namespace {

Tick uniform(std::mt19937_64& rng, Tick lo, Tick hi) { return std::uniform_int_distribution<Tick>(lo, hi)(rng); }

Span sub_span(std::mt19937_64& rng, Span within) {
  const Tick s = uniform(rng, within.s, within.e);
  return {s, uniform(rng, s, within.e)};
}

bool same_pair(const RawLink& l, int u, int a, int v, int b) {
  return (l.u == u && l.a == a && l.v == v && l.b == b) || (l.u == v && l.a == b && l.v == u && l.b == a);
}

std::vector<Span> link_spans(const RawGraph& g, int u, int a, int v, int b) {
  std::vector<Span> out;
  for (const auto& l : g.links) {
    if (same_pair(l, u, a, v, b)) out.push_back(l.t);
  }
  return out;
}

bool layer_linked(const RawGraph& g, int a, int b) {
  for (const auto& l : g.links) {
    if ((l.a == a && l.b == b) || (l.a == b && l.b == a)) return true;
  }
  return false;
}

}  // namespace

RawGraph random_raw_graph(std::mt19937_64& rng, const Limits& limits) {
  RawGraph g;
  const Tick start = uniform(rng, -50, 50);
  g.study = {start, start + uniform(rng, 1, limits.max_span)};
  g.nodes = static_cast<int>(uniform(rng, 1, limits.max_nodes));
  g.layers = static_cast<int>(uniform(rng, 1, limits.max_layers));

  for (int a = 0; a < g.layers; ++a) {
    std::vector<Span> lp;
    if (uniform(rng, 0, 1) == 0) {
      lp.push_back(g.study);
    } else {
      for (Tick k = uniform(rng, 1, 2); k > 0; --k) lp.push_back(sub_span(rng, g.study));
    }
    g.layer_presence.push_back(lp);
  }

  for (int u = 0; u < g.nodes; ++u) {
    for (int a = 0; a < g.layers; ++a) {
      if (uniform(rng, 0, 9) < 3) continue;
      std::vector<Span> p;
      for (Tick k = uniform(rng, 1, 3); k > 0; --k) {
        const auto& lp = g.layer_presence[static_cast<std::size_t>(a)];
        p.push_back(sub_span(rng, lp[static_cast<std::size_t>(uniform(rng, 0, static_cast<Tick>(lp.size()) - 1))]));
      }
      g.presence[{u, a}] = p;
    }
  }

  std::vector<std::pair<int, int>> xs;
  for (const auto& [x, p] : g.presence) xs.push_back(x);
  if (xs.size() >= 2) {
    for (Tick n = uniform(rng, 0, limits.max_links); n > 0; --n) {
      const auto i = static_cast<std::size_t>(uniform(rng, 0, static_cast<Tick>(xs.size()) - 1));
      auto j = static_cast<std::size_t>(uniform(rng, 0, static_cast<Tick>(xs.size()) - 2));
      if (j >= i) ++j;
      const auto& pi = g.presence[xs[i]];
      const auto& pj = g.presence[xs[j]];
      const Span si = pi[static_cast<std::size_t>(uniform(rng, 0, static_cast<Tick>(pi.size()) - 1))];
      const Span sj = pj[static_cast<std::size_t>(uniform(rng, 0, static_cast<Tick>(pj.size()) - 1))];
      const Span both{std::max(si.s, sj.s), std::min(si.e, sj.e)};
      if (both.s > both.e) continue;
      g.links.push_back({sub_span(rng, both), xs[i].first, xs[i].second, xs[j].first, xs[j].second});
    }
  }
  return g;
}

mls::MultilayerStreamGraph to_graph(const RawGraph& raw) {
  mls::GraphParts parts;
  parts.study = {raw.study.s, raw.study.e};
  mls::Aspect aspect{"layer", {}};
  for (int a = 0; a < raw.layers; ++a) aspect.elementary_layers.push_back("L" + std::to_string(a));
  parts.aspects = {aspect};
  for (int u = 0; u < raw.nodes; ++u) parts.nodes.push_back("n" + std::to_string(u));
  const auto to_set = [](const std::vector<Span>& ivs) {
    std::vector<mls::TimeInterval> out;
    for (const auto& s : ivs) out.push_back({s.s, s.e});
    return mls::TimeSet::normalize(out);
  };
  for (const auto& lp : raw.layer_presence) parts.layer_presence.push_back(to_set(lp));
  for (const auto& [x, p] : raw.presence) {
    parts.node_layer_presence[{static_cast<mls::NodeId>(x.first), static_cast<mls::LayerId>(x.second)}] = to_set(p);
  }
  for (const auto& l : raw.links) {
    parts.links.push_back(mls::make_link({l.t.s, l.t.e},
                                         {static_cast<mls::NodeId>(l.u), static_cast<mls::LayerId>(l.a)},
                                         {static_cast<mls::NodeId>(l.v), static_cast<mls::LayerId>(l.b)}));
  }
  return mls::MultilayerStreamGraph(std::move(parts));
}

bool covers_cell(const std::vector<Span>& ivs, Tick k) {
  return std::any_of(ivs.begin(), ivs.end(), [k](const Span& s) { return s.s <= k && k + 1 <= s.e; });
}

bool covers_point(const std::vector<Span>& ivs, Tick p) {
  return std::any_of(ivs.begin(), ivs.end(), [p](const Span& s) { return s.s <= p && p <= s.e; });
}

bool covers_half(const std::vector<Span>& ivs, Tick h) {
  // floor division for negative h
  const Tick k = h >= 0 ? h / 2 : -((-h + 1) / 2);
  return (h - 2 * k) == 0 ? covers_point(ivs, k) : covers_cell(ivs, k);
}

bool covers_half(const mls::TimeSet& ts, Tick h) {
  std::vector<Span> ivs;
  for (const auto& iv : ts.intervals()) ivs.push_back({iv.start, iv.end});
  return covers_half(ivs, h);
}

Ratio oracle_number_of_links(const RawGraph& g) {
  Ratio r{0, g.study.e - g.study.s};
  for (const auto& l : g.links) {
    for (Tick k = g.study.s; k < g.study.e; ++k) r.num += covers_cell({l.t}, k) ? 1 : 0;
  }
  return r;
}

std::pair<std::size_t, std::int64_t> oracle_degree(const RawGraph& g, int node, int layer) {
  std::size_t count = 0;
  std::int64_t cells = 0;
  for (const auto& l : g.links) {
    const bool touches = layer < 0 ? (l.u == node || l.v == node)
                                   : ((l.u == node && l.a == layer) || (l.v == node && l.b == layer));
    if (!touches) continue;
    ++count;
    for (Tick k = g.study.s; k < g.study.e; ++k) cells += covers_cell({l.t}, k) ? 1 : 0;
  }
  return {count, cells};
}

Ratio oracle_aggregated_density(const RawGraph& g) {
  std::vector<std::vector<Span>> node_presence(static_cast<std::size_t>(g.nodes));
  for (const auto& [x, p] : g.presence) {
    auto& np = node_presence[static_cast<std::size_t>(x.first)];
    np.insert(np.end(), p.begin(), p.end());
  }
  Ratio r;
  for (int u = 0; u < g.nodes; ++u) {
    for (int v = u + 1; v < g.nodes; ++v) {
      std::vector<Span> pair_links;
      for (const auto& l : g.links) {
        if ((l.u == u && l.v == v) || (l.u == v && l.v == u)) pair_links.push_back(l.t);
      }
      for (Tick k = g.study.s; k < g.study.e; ++k) {
        if (covers_cell(node_presence[static_cast<std::size_t>(u)], k) &&
            covers_cell(node_presence[static_cast<std::size_t>(v)], k)) {
          ++r.den;
        }
        if (covers_cell(pair_links, k)) ++r.num;
      }
    }
  }
  return r;
}

Ratio oracle_mls_density(const RawGraph& g, int mode) {
  std::vector<std::pair<std::pair<int, int>, const std::vector<Span>*>> xs;
  for (const auto& [x, p] : g.presence) xs.emplace_back(x, &p);
  Ratio r;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t j = i + 1; j < xs.size(); ++j) {
      const auto [u, a] = xs[i].first;
      const auto [v, b] = xs[j].first;
      if (mode == 1 && a != b) continue;
      if (mode == 2 && !layer_linked(g, a, b)) continue;
      const auto links = link_spans(g, u, a, v, b);
      for (Tick k = g.study.s; k < g.study.e; ++k) {
        if (covers_cell(*xs[i].second, k) && covers_cell(*xs[j].second, k)) ++r.den;
        if (covers_cell(links, k)) ++r.num;
      }
    }
  }
  return r;
}

Ratio oracle_interlayer_density(const RawGraph& g, int alpha, int beta) {
  const auto& la = g.layer_presence[static_cast<std::size_t>(alpha)];
  const auto& lb = g.layer_presence[static_cast<std::size_t>(beta)];
  Ratio r;
  for (const auto& [x, px] : g.presence) {
    for (const auto& [y, py] : g.presence) {
      // unordered pairs within one layer, ordered (alpha side, beta side) across two
      if (alpha == beta ? !(x < y && x.second == alpha && y.second == alpha)
                        : !(x.second == alpha && y.second == beta)) {
        continue;
      }
      const auto links = link_spans(g, x.first, x.second, y.first, y.second);
      for (Tick k = g.study.s; k < g.study.e; ++k) {
        if (!covers_cell(la, k) || !covers_cell(lb, k)) continue;
        if (covers_cell(px, k) && covers_cell(py, k)) ++r.den;
        if (covers_cell(links, k)) ++r.num;
      }
    }
  }
  return r;
}

bool oracle_aggregated_link(const RawGraph& g, int u, int v, Tick h) {
  std::vector<Span> spans;
  for (const auto& l : g.links) {
    if ((l.u == u && l.v == v) || (l.u == v && l.v == u)) spans.push_back(l.t);
  }
  return covers_half(spans, h);
}

bool oracle_path_valid(const RawGraph& g, const std::vector<RawHop>& hops, Tick gamma) {
  if (hops.empty()) return false;
  for (std::size_t i = 0; i < hops.size(); ++i) {
    const auto& h = hops[i];
    if (!covers_point(link_spans(g, h.from_node, h.from_layer, h.to_node, h.to_layer), h.t)) return false;
    if (i > 0) {
      const auto& p = hops[i - 1];
      if (p.to_node != h.from_node || p.to_layer != h.from_layer) return false;
      if (h.t < p.t + gamma) return false;
    }
  }
  return true;
}

bool oracle_reachable(const RawGraph& g, int from_node, int from_layer, Tick t_from, int to_node, int to_layer,
                      Tick t_to, Tick gamma) {
  if (from_node == to_node && from_layer == to_layer) return t_from <= t_to;
  // ready[x] = earliest integer instant a hop may leave x; grows monotonically
  // through a fixed point over the instants of the study interval.
  std::map<std::pair<int, int>, Tick> ready;
  ready[{from_node, from_layer}] = t_from;
  bool changed = true;
  while (changed) {
    changed = false;
    for (Tick t = g.study.s; t <= std::min(g.study.e, t_to); ++t) {
      for (const auto& l : g.links) {
        if (!covers_point({l.t}, t)) continue;
        for (int dir = 0; dir < 2; ++dir) {
          const std::pair<int, int> x = dir == 0 ? std::pair{l.u, l.a} : std::pair{l.v, l.b};
          const std::pair<int, int> y = dir == 0 ? std::pair{l.v, l.b} : std::pair{l.u, l.a};
          auto it = ready.find(x);
          if (it == ready.end() || it->second > t) continue;
          if (y == std::pair{to_node, to_layer}) return true;
          auto [jt, inserted] = ready.try_emplace(y, t + gamma);
          if (!inserted && jt->second > t + gamma) {
            jt->second = t + gamma;
            inserted = true;
          }
          changed = changed || inserted;
        }
      }
    }
  }
  return false;
}

// ------------------------------------------------------ flight networks

FlightNetwork synthetic_flights(std::uint64_t seed, int carriers, int airports, int days) {
  std::mt19937_64 rng(seed);
  FlightNetwork out;
  std::vector<std::string> names;
  for (int c = 0; c < carriers; ++c) names.push_back(std::string("C") + static_cast<char>('A' + c));
  out.planted_order = names;

  std::vector<std::string> airport_names;
  for (int a = 0; a < airports; ++a) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "A%02d", a);
    airport_names.push_back(buf);
  }
  // Visiting the airports in a shuffled order gives each carrier a
  // different nested service area.
  std::vector<int> order(static_cast<std::size_t>(airports));
  for (int a = 0; a < airports; ++a) order[static_cast<std::size_t>(a)] = a;
  std::shuffle(order.begin(), order.end(), rng);

  const Tick day = 86400;
  mls::GraphBuilder builder({0, days * day + day}, {{"carrier", names}});
  for (const auto& a : airport_names) builder.add_node(a);
  for (int c = 0; c < carriers; ++c) {
    const int weight = carriers - c;
    const int served = std::max(3, airports * weight / carriers);
    const int legs_per_day = 12 * weight * weight;
    const mls::LayerId layer = builder.layer({names[static_cast<std::size_t>(c)]});
    std::uniform_int_distribution<int> pick(0, served - 1);
    std::uniform_int_distribution<Tick> depart(6 * 3600, 22 * 3600);
    std::uniform_int_distribution<Tick> duration(3600, 5 * 3600);
    for (int d = 0; d < days; ++d) {
      for (int leg = 0; leg < legs_per_day; ++leg) {
        const int o = order[static_cast<std::size_t>(pick(rng))];
        int t = order[static_cast<std::size_t>(pick(rng))];
        if (t == o) continue;
        const Tick dep = d * day + depart(rng);
        builder.add_link({dep, dep + duration(rng)}, airport_names[static_cast<std::size_t>(o)], layer,
                         airport_names[static_cast<std::size_t>(t)], layer);
      }
    }
  }
  out.graph = std::move(builder).finish();
  return out;
}

// --------------------------------------------------- contact data files

ContactFixture write_contact_fixture(const std::filesystem::path& dir, std::uint64_t seed, int days) {
  std::mt19937_64 rng(seed);
  ContactFixture f;
  f.contacts = dir / "contacts.dat";
  f.metadata = dir / "metadata.txt";
  f.friendship = dir / "friendship.csv";
  f.facebook = dir / "facebook.csv";

  struct S {
    int id;
    std::string klass;
    char gender;
  };
  const std::vector<std::string> classes{"MP", "MP*1", "PC", "2BIO1"};
  std::vector<S> students;
  int id = 100;
  for (const auto& c : classes) {
    for (int i = 0; i < 4; ++i) students.push_back({id++, c, i % 2 == 0 ? 'M' : 'F'});
  }
  students.push_back({id++, "PC", 'U'});
  {
    std::ofstream os(f.metadata);
    for (const auto& s : students) os << s.id << '\t' << s.klass << '\t' << s.gender << '\n';
  }

  // 2012-12-03 08:00:00 UTC
  f.first_time = 1354521600;
  std::ofstream os(f.contacts);
  std::uniform_int_distribution<std::size_t> who(0, students.size() - 1);
  std::bernoulli_distribution same_gender(0.8);
  for (int d = 0; d < days; ++d) {
    const std::int64_t base = f.first_time + d * 86400;
    for (std::int64_t t = base; t < base + 4 * 3600; t += 20) {
      if (std::uniform_int_distribution<int>(0, 9)(rng) != 0) continue;
      const auto& a = students[who(rng)];
      const S* b = &students[who(rng)];
      for (int tries = 0; tries < 20 && (b->id == a.id || (same_gender(rng) && b->gender != a.gender)); ++tries) {
        b = &students[who(rng)];
      }
      if (b->id == a.id) continue;
      os << t << ' ' << a.id << ' ' << b->id << ' ' << a.klass << ' ' << b->klass << '\n';
      ++f.contact_lines;
    }
  }
  {
    std::ofstream fr(f.friendship);
    fr << "100 101\n101 100\n102 104\n103 107\n";
    std::ofstream fb(f.facebook);
    fb << "100 102 1\n101 105 0\n104 108 1\n";
  }
  return f;
}

std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("mlstream_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace fixtures
