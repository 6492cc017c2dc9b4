#include "mlstream/ingestion.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <chrono>
#include <fstream>
#include <limits>
#include <set>
#include <unordered_map>

#include "json.hpp"
#include "mlstream/csv.hpp"
#include "mlstream/detail/parallel.hpp"
#include "mlstream/error.hpp"
#include "mlstream/interchange.hpp"

namespace mls {

namespace {

constexpr std::size_t kMaxMessages = 20;

template <typename Int>
std::optional<Int> parse_int(std::string_view s) {
  Int v{};
  const auto* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc{} || p != end) return std::nullopt;
  return v;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(Errc::Io, "cannot open " + path.string());
  return is;
}

std::string where(const std::filesystem::path& file, std::size_t line) {
  return file.filename().string() + ":" + std::to_string(line);
}

/// Throws or records, depending on the error mode.
void reject(ParseReport& report, OnError mode, Errc code, const std::string& reason, const std::string& message) {
  if (mode == OnError::Throw) throw Error(code, message);
  report.drop(reason, message);
}

}  // namespace

std::size_t ParseReport::dropped_total() const {
  std::size_t n = 0;
  for (const auto& [reason, count] : dropped) n += count;
  return n;
}

void ParseReport::drop(const std::string& reason, std::string message) {
  ++dropped[reason];
  if (!message.empty() && messages.size() < kMaxMessages) messages.push_back(std::move(message));
}

// ------------------------------------------------------------- contacts

const std::vector<std::string>& high_school_classes() {
  static const std::vector<std::string> classes{"MP", "MP*1", "MP*2", "PSI*", "PC", "PC*", "2BIO1", "2BIO2", "2BIO3"};
  return classes;
}

namespace {

struct Student {
  NodeId node;
  char gender;  // 'M', 'F' or 'U'
  std::string klass;
};

using Roster = std::unordered_map<std::string, Student>;

struct EdgeRow {
  std::int64_t t;
  NodeId a;
  NodeId b;
};

struct ParsedEdges {
  ParseReport report;
  std::vector<EdgeRow> rows;
};

/// Checks both ids; false when the row was dropped.
bool resolve_pair(const Roster& roster, const std::string& i, const std::string& j, const std::string& at,
                  OnError mode, ParseReport& report, EdgeRow& row) {
  const auto a = roster.find(i);
  const auto b = roster.find(j);
  if (a == roster.end() || b == roster.end()) {
    reject(report, mode, Errc::UnknownStudentId, "unknown_student",
           at + ": unknown student id " + (a == roster.end() ? i : j));
    return false;
  }
  if (a->second.node == b->second.node) {
    reject(report, mode, Errc::MalformedLine, "malformed", at + ": student paired with itself");
    return false;
  }
  if (a->second.gender == 'U' || b->second.gender == 'U') {
    report.drop("gender_unknown");
    return false;
  }
  row.a = a->second.node;
  row.b = b->second.node;
  return true;
}

ParsedEdges parse_contact_lines(const std::filesystem::path& path, const Roster& roster, OnError mode) {
  ParsedEdges out;
  out.report.file = path.string();
  auto is = open_input(path);
  std::string line;
  for (std::size_t no = 1; std::getline(is, line); ++no) {
    const auto fields = split_whitespace(line);
    if (fields.empty()) continue;
    ++out.report.total;
    const auto at = where(path, no);
    const auto t = fields.size() >= 3 ? parse_int<std::int64_t>(fields[0]) : std::nullopt;
    if (!t) {
      reject(out.report, mode, Errc::MalformedLine, "malformed", at + ": expected 't i j Ci Cj'");
      continue;
    }
    EdgeRow row{*t, 0, 0};
    if (!resolve_pair(roster, fields[1], fields[2], at, mode, out.report, row)) continue;
    out.rows.push_back(row);
    ++out.report.accepted;
  }
  return out;
}

/// "i j" or "i j flag"; a zero flag marks a listed non-edge.
ParsedEdges parse_edge_list(const std::filesystem::path& path, const Roster& roster, OnError mode) {
  ParsedEdges out;
  out.report.file = path.string();
  auto is = open_input(path);
  std::string line;
  for (std::size_t no = 1; std::getline(is, line); ++no) {
    const auto fields = split_whitespace(line);
    if (fields.empty()) continue;
    ++out.report.total;
    const auto at = where(path, no);
    if (fields.size() != 2 && fields.size() != 3) {
      reject(out.report, mode, Errc::MalformedLine, "malformed", at + ": expected 'i j' or 'i j flag'");
      continue;
    }
    if (fields.size() == 3) {
      const auto flag = parse_int<int>(fields[2]);
      if (!flag) {
        reject(out.report, mode, Errc::MalformedLine, "malformed", at + ": flag is not an integer");
        continue;
      }
      if (*flag == 0) {
        out.report.drop("not_linked");
        continue;
      }
    }
    EdgeRow row{0, 0, 0};
    if (!resolve_pair(roster, fields[0], fields[1], at, mode, out.report, row)) continue;
    out.rows.push_back(row);
    ++out.report.accepted;
  }
  return out;
}

}  // namespace

Ingested parse_contacts(const ContactFiles& files, const ContactOptions& options) {
  if (options.contact_duration < 0) throw Error(Errc::InvalidArgument, "negative contact duration");
  const auto& classes = high_school_classes();
  const std::int64_t tps = options.resolution.ticks_per_second;

  Ingested result;
  Roster roster;
  std::vector<std::string> names;
  {
    ParseReport report;
    report.file = files.metadata.string();
    auto is = open_input(files.metadata);
    std::string line;
    for (std::size_t no = 1; std::getline(is, line); ++no) {
      const auto fields = split_csv_line(line, '\t');
      if (fields.size() == 1 && trim(fields[0]).empty()) continue;
      ++report.total;
      const auto at = where(files.metadata, no);
      std::vector<std::string> f;
      for (const auto& x : fields) f.emplace_back(trim(x));
      if (f.size() != 3 || (f[2] != "M" && f[2] != "F" && f[2] != "U") ||
          std::find(classes.begin(), classes.end(), f[1]) == classes.end()) {
        reject(report, options.on_error, Errc::MalformedLine, "malformed",
               at + ": expected 'id<TAB>class<TAB>gender' with a known class and gender M, F or U");
        continue;
      }
      if (roster.contains(f[0])) {
        reject(report, options.on_error, Errc::MalformedLine, "duplicate", at + ": student " + f[0] + " listed twice");
        continue;
      }
      roster.emplace(f[0], Student{static_cast<NodeId>(names.size()), f[2][0], f[1]});
      names.push_back(f[0]);
      ++report.accepted;
    }
    result.reports.push_back(std::move(report));
  }

  // The edge files only read the roster, so they parse concurrently.
  std::vector<std::pair<std::filesystem::path, bool>> inputs{{files.contacts, true}};
  if (files.friendship) inputs.emplace_back(*files.friendship, false);
  if (files.facebook) inputs.emplace_back(*files.facebook, false);
  std::vector<ParsedEdges> parsed(inputs.size());
  detail::parallel_for(inputs.size(), [&](std::size_t i) {
    parsed[i] = inputs[i].second ? parse_contact_lines(inputs[i].first, roster, options.on_error)
                                 : parse_edge_list(inputs[i].first, roster, options.on_error);
  });

  const auto& contacts = parsed[0].rows;
  if (contacts.empty()) throw Error(Errc::InvalidArgument, files.contacts.string() + " holds no usable contact");
  std::int64_t first = std::numeric_limits<std::int64_t>::max();
  std::int64_t last = std::numeric_limits<std::int64_t>::min();
  for (const auto& r : contacts) {
    first = std::min(first, r.t);
    last = std::max(last, r.t);
  }
  const TimeInterval study{(first - options.contact_duration) * tps, last * tps};

  std::vector<Aspect> aspects{{"interaction_type", {"face2face", "friendship", "facebook"}},
                              {"gender", {"M", "F"}},
                              {"class", classes}};
  GraphBuilder builder(study, aspects, {BuildMode::AutoMaterialize, false, options.resolution});
  for (const auto& n : names) builder.add_node(n);
  std::vector<const Student*> by_node(names.size());
  for (const auto& [id, s] : roster) by_node[s.node] = &s;

  const auto node_layer = [&](NodeId u, const char* kind) {
    const Student& s = *by_node[u];
    return NodeLayer{u, builder.layer({kind, std::string_view(&s.gender, 1), s.klass})};
  };

  if (options.present_throughout) {
    for (const auto& [id, st] : roster) {
      if (st.gender != 'U') builder.add_presence(node_layer(st.node, "face2face"), study);
    }
  }
  for (const auto& r : contacts) {
    builder.add_link({(r.t - options.contact_duration) * tps, r.t * tps}, node_layer(r.a, "face2face"),
                     node_layer(r.b, "face2face"));
  }

  for (std::size_t i = 1; i < inputs.size(); ++i) {
    const bool is_friendship = files.friendship && i == 1;
    const char* kind = is_friendship ? "friendship" : "facebook";
    std::map<std::pair<NodeId, NodeId>, int> directions;
    for (const auto& r : parsed[i].rows) {
      const auto key = std::minmax(r.a, r.b);
      directions[key] |= r.a < r.b ? 1 : 2;
    }
    for (const auto& [pair, mask] : directions) {
      if (is_friendship && !options.symmetrize_friendship && mask != 3) continue;
      builder.add_link(study, node_layer(pair.first, kind), node_layer(pair.second, kind));
    }
  }

  for (auto& p : parsed) result.reports.push_back(std::move(p.report));
  result.graph = std::move(builder).finish();
  return result;
}

// -------------------------------------------------------------- flights

std::int64_t epoch_seconds(int year, unsigned month, unsigned day) {
  using namespace std::chrono;
  const sys_days d{std::chrono::year{year} / std::chrono::month{month} / std::chrono::day{day}};
  return static_cast<std::int64_t>(d.time_since_epoch().count()) * 86400;
}

std::optional<std::int64_t> parse_flight_date(std::string_view text) {
  text = trim(text);
  if (auto space = text.find(' '); space != std::string_view::npos) text = text.substr(0, space);
  int y = 0;
  unsigned m = 0;
  unsigned d = 0;
  const auto parts = [&](char sep) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (true) {
      const auto next = text.find(sep, pos);
      out.push_back(text.substr(pos, next - pos));
      if (next == std::string_view::npos) break;
      pos = next + 1;
    }
    return out;
  };
  if (text.find('-') != std::string_view::npos) {
    const auto p = parts('-');
    if (p.size() != 3) return std::nullopt;
    auto yy = parse_int<int>(p[0]);
    auto mm = parse_int<unsigned>(p[1]);
    auto dd = parse_int<unsigned>(p[2]);
    if (!yy || !mm || !dd) return std::nullopt;
    y = *yy, m = *mm, d = *dd;
  } else if (text.find('/') != std::string_view::npos) {
    const auto p = parts('/');
    if (p.size() != 3) return std::nullopt;
    auto mm = parse_int<unsigned>(p[0]);
    auto dd = parse_int<unsigned>(p[1]);
    auto yy = parse_int<int>(p[2]);
    if (!yy || !mm || !dd) return std::nullopt;
    y = *yy, m = *mm, d = *dd;
  } else {
    return std::nullopt;
  }
  const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
  if (!ymd.ok()) return std::nullopt;
  return epoch_seconds(y, m, d);
}

std::optional<std::int64_t> parse_hhmm(std::string_view text) {
  text = trim(text);
  // Some extracts write clock times as reals ("830.00").
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    const auto frac = text.substr(dot + 1);
    if (!std::all_of(frac.begin(), frac.end(), [](char c) { return c == '0'; })) return std::nullopt;
    text = text.substr(0, dot);
  }
  if (text.empty() || text.size() > 4) return std::nullopt;
  const auto v = parse_int<int>(text);
  if (!v || *v < 0) return std::nullopt;
  const int hours = *v / 100;
  const int minutes = *v % 100;
  if (minutes >= 60 || hours > 24 || (hours == 24 && minutes != 0)) return std::nullopt;
  return static_cast<std::int64_t>(hours) * 3600 + minutes * 60;
}

namespace {

struct FlightRow {
  std::int64_t departure;
  std::int64_t arrival;
  std::string carrier;
  std::string origin;
  std::string destination;
};

struct ParsedFlights {
  ParseReport report;
  std::vector<FlightRow> rows;
};

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::size_t find_column(const std::vector<std::string>& header, const std::string& configured,
                        std::initializer_list<const char*> aliases, const char* role, const std::string& file) {
  std::vector<std::string> wanted;
  if (!configured.empty()) {
    wanted.push_back(lower(configured));
  } else {
    for (const char* a : aliases) wanted.push_back(lower(a));
  }
  for (const auto& w : wanted) {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (lower(trim(header[i])) == w) return i;
    }
  }
  std::string tried;
  for (const auto& w : wanted) tried += (tried.empty() ? "" : ", ") + w;
  throw Error(Errc::MissingColumn, file + ": no " + role + " column (tried " + tried + ")");
}

bool is_cancelled(std::string_view v) {
  v = trim(v);
  if (v.empty()) return false;
  const auto l = lower(v);
  if (l == "true" || l == "t" || l == "yes") return true;
  if (l == "false" || l == "f" || l == "no") return false;
  try {
    return std::stod(l) != 0.0;
  } catch (...) {
    return false;
  }
}

ParsedFlights parse_flight_file(const std::filesystem::path& path, const FlightOptions& options) {
  ParsedFlights out;
  out.report.file = path.string();
  auto is = open_input(path);
  std::string line;
  if (!std::getline(is, line)) throw Error(Errc::MissingColumn, path.string() + ": empty file, no header");
  const auto header = split_csv_line(line);
  const auto& c = options.columns;
  const auto file = path.filename().string();
  const std::size_t col_date = find_column(header, c.date, {"FlightDate", "FL_DATE"}, "flight date", file);
  const std::size_t col_carrier =
      find_column(header, c.carrier,
                  {"Reporting_Airline", "UniqueCarrier", "OP_UNIQUE_CARRIER", "OP_CARRIER", "Carrier",
                   "IATA_CODE_Reporting_Airline"},
                  "carrier", file);
  const std::size_t col_origin = find_column(header, c.origin, {"Origin"}, "origin", file);
  const std::size_t col_dest = find_column(header, c.destination, {"Dest", "Destination"}, "destination", file);
  const std::size_t col_dep = find_column(header, c.departure, {"DepTime", "DEP_TIME"}, "departure time", file);
  const std::size_t col_arr = find_column(header, c.arrival, {"ArrTime", "ARR_TIME"}, "arrival time", file);
  const std::size_t col_cancel = find_column(header, c.cancelled, {"Cancelled"}, "cancelled", file);
  const std::size_t needed = std::max({col_date, col_carrier, col_origin, col_dest, col_dep, col_arr, col_cancel}) + 1;
  const auto mode = options.on_error;

  for (std::size_t no = 2; std::getline(is, line); ++no) {
    if (trim(line).empty()) continue;
    ++out.report.total;
    const auto at = where(path, no);
    const auto f = split_csv_line(line);
    if (f.size() < needed) {
      reject(out.report, mode, Errc::MalformedLine, "malformed",
             at + ": " + std::to_string(f.size()) + " fields, need " + std::to_string(needed));
      continue;
    }
    const auto day = parse_flight_date(f[col_date]);
    if (!day) {
      reject(out.report, mode, Errc::MalformedTime, "malformed_time", at + ": bad date '" + f[col_date] + "'");
      continue;
    }
    if (options.month || options.year) {
      const std::chrono::year_month_day ymd{std::chrono::sys_days{std::chrono::days{*day / 86400}}};
      if ((options.month && static_cast<unsigned>(ymd.month()) != static_cast<unsigned>(*options.month)) ||
          (options.year && static_cast<int>(ymd.year()) != *options.year)) {
        out.report.drop("other_month");
        continue;
      }
    }
    if (is_cancelled(f[col_cancel])) {
      out.report.drop("cancelled");
      continue;
    }
    const auto dep_text = trim(f[col_dep]);
    const auto arr_text = trim(f[col_arr]);
    if (dep_text.empty() || arr_text.empty()) {
      out.report.drop("missing_time");
      continue;
    }
    const auto dep = parse_hhmm(dep_text);
    const auto arr = parse_hhmm(arr_text);
    if (!dep || !arr) {
      reject(out.report, mode, Errc::MalformedTime, "malformed_time",
             at + ": bad clock time '" + std::string(dep ? arr_text : dep_text) + "'");
      continue;
    }
    FlightRow row{*day + *dep, *day + *arr, std::string(trim(f[col_carrier])), std::string(trim(f[col_origin])),
                  std::string(trim(f[col_dest]))};
    if (row.arrival < row.departure) row.arrival += 86400;
    if (row.carrier.empty() || row.origin.empty() || row.destination.empty()) {
      reject(out.report, mode, Errc::MalformedLine, "malformed", at + ": empty carrier or airport");
      continue;
    }
    if (row.origin == row.destination) {
      out.report.drop("same_airport");
      continue;
    }
    out.rows.push_back(std::move(row));
    ++out.report.accepted;
  }
  return out;
}

}  // namespace

Ingested parse_flights(const std::vector<std::filesystem::path>& csv_files, const FlightOptions& options) {
  if (csv_files.empty()) throw Error(Errc::InvalidArgument, "no flight file given");
  std::vector<ParsedFlights> parsed(csv_files.size());
  detail::parallel_for(csv_files.size(), [&](std::size_t i) { parsed[i] = parse_flight_file(csv_files[i], options); });

  std::set<std::string> carriers;
  std::set<std::string> airports;
  std::int64_t first = std::numeric_limits<std::int64_t>::max();
  std::int64_t last = std::numeric_limits<std::int64_t>::min();
  for (const auto& p : parsed) {
    for (const auto& r : p.rows) {
      carriers.insert(r.carrier);
      airports.insert(r.origin);
      airports.insert(r.destination);
      first = std::min(first, r.departure);
      last = std::max(last, r.arrival);
    }
  }
  if (carriers.empty()) throw Error(Errc::InvalidArgument, "no usable flight in the input");

  const std::int64_t tps = options.resolution.ticks_per_second;
  GraphBuilder builder({first * tps, last * tps}, {{"carrier", {carriers.begin(), carriers.end()}}},
                       {BuildMode::AutoMaterialize, false, options.resolution});
  for (const auto& a : airports) builder.add_node(a);
  Ingested result;
  for (auto& p : parsed) {
    for (const auto& r : p.rows) {
      const LayerId layer = builder.layer({r.carrier});
      builder.add_link({r.departure * tps, r.arrival * tps}, r.origin, layer, r.destination, layer);
    }
    result.reports.push_back(std::move(p.report));
  }
  result.graph = std::move(builder).finish();
  return result;
}

// ------------------------------------------------------------- manifest

namespace {

OnError parse_on_error(const std::string& s) {
  if (s == "throw") return OnError::Throw;
  if (s == "skip") return OnError::Skip;
  throw Error(Errc::SchemaError, "manifest: on_error must be \"throw\" or \"skip\"");
}

}  // namespace

DatasetManifest load_manifest(const std::filesystem::path& path) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw Error(Errc::SchemaError, path.string() + ": not JSON: " + e.what());
  }
  const auto base = path.parent_path();
  const auto file = [&](const json& v, const char* key) {
    if (!v.is_string()) throw Error(Errc::SchemaError, std::string("manifest: \"") + key + "\" must be a path string");
    std::filesystem::path p = v.get<std::string>();
    return p.is_absolute() ? p : base / p;
  };
  const auto require = [&](const char* key) -> const json& {
    auto it = doc.find(key);
    if (it == doc.end()) throw Error(Errc::SchemaError, std::string("manifest: missing \"") + key + "\"");
    return *it;
  };

  DatasetManifest m;
  const std::string format = doc.value("format", std::string("interchange"));
  Resolution res{doc.value("tick_resolution", std::int64_t{1})};
  if (res.ticks_per_second <= 0) throw Error(Errc::SchemaError, "manifest: tick_resolution must be positive");

  if (format == "contacts") {
    m.format = DatasetManifest::Format::Contacts;
    m.contact_files.contacts = file(require("contacts"), "contacts");
    m.contact_files.metadata = file(require("metadata"), "metadata");
    if (doc.contains("friendship")) m.contact_files.friendship = file(doc["friendship"], "friendship");
    if (doc.contains("facebook")) m.contact_files.facebook = file(doc["facebook"], "facebook");
    m.contact_options.contact_duration = doc.value("contact_duration", std::int64_t{20});
    const std::string mode = doc.value("friendship_mode", std::string("symmetrize"));
    if (mode != "symmetrize" && mode != "mutual") {
      throw Error(Errc::SchemaError, "manifest: friendship_mode must be \"symmetrize\" or \"mutual\"");
    }
    m.contact_options.symmetrize_friendship = mode == "symmetrize";
    const std::string presence = doc.value("presence", std::string("study"));
    if (presence != "study" && presence != "contacts") {
      throw Error(Errc::SchemaError, "manifest: presence must be \"study\" or \"contacts\"");
    }
    m.contact_options.present_throughout = presence == "study";
    m.contact_options.on_error = parse_on_error(doc.value("on_error", std::string("throw")));
    m.contact_options.resolution = res;
  } else if (format == "flights") {
    m.format = DatasetManifest::Format::Flights;
    const auto& list = require("flights");
    if (list.is_string()) {
      m.flight_files.push_back(file(list, "flights"));
    } else if (list.is_array()) {
      for (const auto& v : list) m.flight_files.push_back(file(v, "flights"));
    } else {
      throw Error(Errc::SchemaError, "manifest: \"flights\" must be a path or a list of paths");
    }
    if (doc.contains("month")) m.flight_options.month = doc["month"].get<int>();
    if (doc.contains("year")) m.flight_options.year = doc["year"].get<int>();
    if (doc.contains("columns")) {
      const auto& c = doc["columns"];
      auto& cols = m.flight_options.columns;
      cols.date = c.value("date", "");
      cols.carrier = c.value("carrier", "");
      cols.origin = c.value("origin", "");
      cols.destination = c.value("destination", "");
      cols.departure = c.value("departure", "");
      cols.arrival = c.value("arrival", "");
      cols.cancelled = c.value("cancelled", "");
    }
    m.flight_options.on_error = parse_on_error(doc.value("on_error", std::string("skip")));
    m.flight_options.resolution = res;
  } else if (format == "interchange") {
    m.format = DatasetManifest::Format::Interchange;
    m.graph = file(require("graph"), "graph");
  } else {
    throw Error(Errc::SchemaError, "manifest: unknown format \"" + format + "\"");
  }
  return m;
}

Ingested ingest(const DatasetManifest& m, bool check_closure) {
  switch (m.format) {
    case DatasetManifest::Format::Contacts:
      return parse_contacts(m.contact_files, m.contact_options);
    case DatasetManifest::Format::Flights:
      return parse_flights(m.flight_files, m.flight_options);
    case DatasetManifest::Format::Interchange:
      break;
  }
  return {read_interchange(m.graph, check_closure), {}};
}

Ingested ingest_path(const std::filesystem::path& path, bool check_closure) {
  const auto text = read_file(path);
  const auto doc = nlohmann::json::parse(text, nullptr, false);
  if (doc.is_object() && doc.contains("header")) return {read_interchange_string(text, check_closure), {}};
  return ingest(load_manifest(path), check_closure);
}

}  // namespace mls
