#include "mlstream/interchange.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "mlstream/csv.hpp"
#include "mlstream/error.hpp"

namespace mls {

using nlohmann::json;

namespace {

using LinkRow = std::array<std::int64_t, 6>;

json intervals_json(const TimeSet& ts) {
  json out = json::array();
  for (const auto& iv : ts.intervals()) out.push_back({iv.start, iv.end});
  return out;
}

std::vector<LinkRow> link_rows(const MultilayerStreamGraph& g) {
  std::vector<LinkRow> rows;
  rows.reserve(g.links().size());
  for (const auto& l : g.links()) {
    rows.push_back({l.time.start, l.time.end, l.a.node, l.a.layer, l.b.node, l.b.layer});
  }
  std::sort(rows.begin(), rows.end());
  return rows;
}

struct Sections {
  json header;
  json nodes;
  json aspects;
  json layer_presence;
  json node_layer_presence;
  json links;
};

Sections sections_of(const MultilayerStreamGraph& g) {
  Sections s;
  s.header = json::object();
  s.header["format_version"] = kInterchangeVersion;
  s.header["tick_resolution"] = g.resolution().ticks_per_second;
  s.header["study_interval"] = {g.study_interval().start, g.study_interval().end};

  s.nodes = g.node_names();
  s.aspects = json::array();
  for (const auto& a : g.layers().aspects()) {
    json entry = json::object();
    entry["elementary_layers"] = a.elementary_layers;
    entry["name"] = a.name;
    s.aspects.push_back(std::move(entry));
  }
  s.layer_presence = json::array();
  for (LayerId a = 0; a < g.layer_count(); ++a) {
    s.layer_presence.push_back({a, intervals_json(g.layer_presence(a))});
  }
  s.node_layer_presence = json::array();
  for (const auto& [x, ts] : g.node_layer_presence()) {
    s.node_layer_presence.push_back({{x.node, x.layer}, intervals_json(ts)});
  }
  s.links = json::array();
  for (const auto& r : link_rows(g)) s.links.push_back(r);
  return s;
}

std::string canonical_body(const Sections& s) {
  // Keys of json objects are sorted, so dump() is canonical.
  json body = {{"header", s.header},
               {"nodes", s.nodes},
               {"aspects", s.aspects},
               {"layer_presence", s.layer_presence},
               {"node_layer_presence", s.node_layer_presence},
               {"links", s.links}};
  return body.dump();
}

std::string fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void write_array(std::ostream& os, const char* key, const json& arr, bool last) {
  os << "  \"" << key << "\": [";
  if (arr.empty()) {
    os << "]";
  } else {
    os << "\n";
    for (std::size_t i = 0; i < arr.size(); ++i) {
      os << "    " << arr[i].dump() << (i + 1 < arr.size() ? ",\n" : "\n");
    }
    os << "  ]";
  }
  os << (last ? "\n" : ",\n");
}

// ------------------------------------------------------------------ reading

[[noreturn]] void schema_error(const std::string& where, const std::string& what) {
  throw Error(Errc::SchemaError, (where.empty() ? std::string("/") : where) + ": " + what);
}

const json& member(const json& obj, const std::string& where, const char* key) {
  if (!obj.is_object()) schema_error(where, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) schema_error(where, std::string("missing \"") + key + "\"");
  return *it;
}

const json& array_at(const json& v, const std::string& where, std::size_t size = 0) {
  if (!v.is_array()) schema_error(where, "expected an array");
  if (size != 0 && v.size() != size) schema_error(where, "expected " + std::to_string(size) + " elements");
  return v;
}

std::int64_t integer(const json& v, const std::string& where) {
  if (!v.is_number_integer()) schema_error(where, "expected an integer");
  return v.get<std::int64_t>();
}

std::uint32_t index(const json& v, const std::string& where, std::size_t bound, const char* what) {
  const auto i = integer(v, where);
  if (i < 0 || static_cast<std::uint64_t>(i) >= bound) schema_error(where, std::string(what) + " index out of range");
  return static_cast<std::uint32_t>(i);
}

std::string text(const json& v, const std::string& where) {
  if (!v.is_string()) schema_error(where, "expected a string");
  return v.get<std::string>();
}

TimeInterval interval(const json& v, const std::string& where) {
  array_at(v, where, 2);
  const auto s = integer(v[0], where + "/0");
  const auto e = integer(v[1], where + "/1");
  if (s > e) schema_error(where, "interval start after end");
  return {s, e};
}

TimeSet interval_list(const json& v, const std::string& where, Resolution res, TimeInterval study) {
  array_at(v, where);
  std::vector<TimeInterval> ivs;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto p = where + "/" + std::to_string(i);
    const auto iv = interval(v[i], p);
    if (!study.contains(iv)) schema_error(p, "interval outside the study interval");
    ivs.push_back(iv);
  }
  return TimeSet::normalize(std::move(ivs), res);
}

}  // namespace

std::string interchange_checksum(const MultilayerStreamGraph& g) { return fnv1a64(canonical_body(sections_of(g))); }

void write_interchange(std::ostream& os, const MultilayerStreamGraph& g) {
  const auto s = sections_of(g);
  json header = s.header;
  header["checksum"] = fnv1a64(canonical_body(s));
  os << "{\n  \"header\": " << header.dump() << ",\n";
  write_array(os, "nodes", s.nodes, false);
  write_array(os, "aspects", s.aspects, false);
  write_array(os, "layer_presence", s.layer_presence, false);
  write_array(os, "node_layer_presence", s.node_layer_presence, false);
  write_array(os, "links", s.links, true);
  os << "}\n";
}

void write_interchange(const std::filesystem::path& path, const MultilayerStreamGraph& g) {
  write_file_atomically(path, [&](std::ostream& os) { write_interchange(os, g); });
}

MultilayerStreamGraph read_interchange_string(const std::string& input, bool check_closure) {
  json doc;
  try {
    doc = json::parse(input);
  } catch (const json::parse_error& e) {
    schema_error("", std::string("not JSON: ") + e.what());
  }
  if (!doc.is_object()) schema_error("", "expected an object");

  const auto& header = member(doc, "", "header");
  const auto version = integer(member(header, "/header", "format_version"), "/header/format_version");
  if (version != kInterchangeVersion) {
    throw Error(Errc::FormatVersionMismatch,
                "file has version " + std::to_string(version) + ", reader expects " + std::to_string(kInterchangeVersion));
  }

  GraphParts parts;
  const auto tps = integer(member(header, "/header", "tick_resolution"), "/header/tick_resolution");
  if (tps <= 0) schema_error("/header/tick_resolution", "must be positive");
  parts.resolution = Resolution{tps};
  parts.study = interval(member(header, "/header", "study_interval"), "/header/study_interval");

  const auto& nodes = array_at(member(doc, "", "nodes"), "/nodes");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    parts.nodes.push_back(text(nodes[i], "/nodes/" + std::to_string(i)));
  }
  {
    auto sorted = parts.nodes;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) schema_error("/nodes", "duplicate node name");
  }

  const auto& aspects = array_at(member(doc, "", "aspects"), "/aspects");
  for (std::size_t i = 0; i < aspects.size(); ++i) {
    const auto p = "/aspects/" + std::to_string(i);
    Aspect a;
    a.name = text(member(aspects[i], p, "name"), p + "/name");
    const auto& els = array_at(member(aspects[i], p, "elementary_layers"), p + "/elementary_layers");
    if (els.empty()) schema_error(p + "/elementary_layers", "empty aspect");
    for (std::size_t k = 0; k < els.size(); ++k) {
      a.elementary_layers.push_back(text(els[k], p + "/elementary_layers/" + std::to_string(k)));
    }
    parts.aspects.push_back(std::move(a));
  }
  const LayerSpace space(parts.aspects);
  const std::size_t n_layers = space.layer_count();

  parts.layer_presence.assign(n_layers, TimeSet::single(parts.study, parts.resolution));
  const auto& lp = array_at(member(doc, "", "layer_presence"), "/layer_presence");
  for (std::size_t i = 0; i < lp.size(); ++i) {
    const auto p = "/layer_presence/" + std::to_string(i);
    array_at(lp[i], p, 2);
    const auto layer = index(lp[i][0], p + "/0", n_layers, "layer");
    parts.layer_presence[layer] = interval_list(lp[i][1], p + "/1", parts.resolution, parts.study);
  }

  const auto& nlp = array_at(member(doc, "", "node_layer_presence"), "/node_layer_presence");
  for (std::size_t i = 0; i < nlp.size(); ++i) {
    const auto p = "/node_layer_presence/" + std::to_string(i);
    array_at(nlp[i], p, 2);
    array_at(nlp[i][0], p + "/0", 2);
    const NodeLayer x{index(nlp[i][0][0], p + "/0/0", parts.nodes.size(), "node"),
                      index(nlp[i][0][1], p + "/0/1", n_layers, "layer")};
    if (parts.node_layer_presence.contains(x)) schema_error(p, "duplicate node-layer");
    parts.node_layer_presence.emplace(x, interval_list(nlp[i][1], p + "/1", parts.resolution, parts.study));
  }

  const auto& links = array_at(member(doc, "", "links"), "/links");
  for (std::size_t i = 0; i < links.size(); ++i) {
    const auto p = "/links/" + std::to_string(i);
    array_at(links[i], p, 6);
    const TimeInterval t{integer(links[i][0], p + "/0"), integer(links[i][1], p + "/1")};
    if (t.start > t.end) schema_error(p, "link interval start after end");
    const NodeLayer a{index(links[i][2], p + "/2", parts.nodes.size(), "node"),
                      index(links[i][3], p + "/3", n_layers, "layer")};
    const NodeLayer b{index(links[i][4], p + "/4", parts.nodes.size(), "node"),
                      index(links[i][5], p + "/5", n_layers, "layer")};
    if (a == b) schema_error(p, "self-link");
    if (!parts.study.contains(t)) {
      schema_error(p, "link " + links[i].dump() + " lies outside the study interval [" +
                          std::to_string(parts.study.start) + ", " + std::to_string(parts.study.end) + "]");
    }
    parts.links.push_back(make_link(t, a, b));
  }

  MultilayerStreamGraph g(std::move(parts));
  const auto violations = check_closure ? validate(g) : std::vector<Violation>{};
  if (!violations.empty()) {
    schema_error("", "closure violated: " + violations.front().message +
                         (violations.size() > 1 ? " (and " + std::to_string(violations.size() - 1) + " more)" : ""));
  }

  if (auto it = header.find("checksum"); it != header.end()) {
    const auto stored = text(*it, "/header/checksum");
    const auto actual = interchange_checksum(g);
    if (stored != actual) throw Error(Errc::ChecksumMismatch, "header says " + stored + ", content hashes to " + actual);
  }
  return g;
}

MultilayerStreamGraph read_interchange(const std::filesystem::path& path, bool check_closure) {
  return read_interchange_string(read_file(path), check_closure);
}

bool structurally_equal(const MultilayerStreamGraph& a, const MultilayerStreamGraph& b) {
  const auto pa = a.parts();
  const auto pb = b.parts();
  return pa.study == pb.study && pa.resolution == pb.resolution && pa.nodes == pb.nodes && pa.aspects == pb.aspects &&
         pa.layer_presence == pb.layer_presence && pa.node_layer_presence == pb.node_layer_presence &&
         pa.links == pb.links;
}

}  // namespace mls
