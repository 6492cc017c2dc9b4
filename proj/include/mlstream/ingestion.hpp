#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mlstream/model.hpp"

namespace mls {

enum class OnError {
  Throw,
  /// Bad rows are dropped and counted in the report.
  Skip,
};

/// Row accounting for one input file: accepted + sum(dropped) == total.
struct ParseReport {
  std::string file;
  std::size_t total = 0;
  std::size_t accepted = 0;
  /// Reason -> count, e.g. "gender_unknown", "cancelled", "malformed".
  std::map<std::string, std::size_t> dropped;
  /// First few skipped-row messages, for the log.
  std::vector<std::string> messages;

  std::size_t dropped_total() const;
  void drop(const std::string& reason, std::string message = {});
};

struct Ingested {
  MultilayerStreamGraph graph;
  std::vector<ParseReport> reports;
};

// ------------------------------------------------------------- contacts

/// The nine classes in display order.
const std::vector<std::string>& high_school_classes();

struct ContactFiles {
  std::filesystem::path contacts;
  std::filesystem::path metadata;
  std::optional<std::filesystem::path> friendship;
  std::optional<std::filesystem::path> facebook;
};

struct ContactOptions {
  /// A contact stamped t covers [t - duration, t], in seconds.
  std::int64_t contact_duration = 20;
  /// Directed friendship declarations: true keeps either direction, false
  /// only mutual pairs.
  bool symmetrize_friendship = true;
  /// true: every student of known gender is present on its face-to-face
  /// layer over the whole study interval. false: only during its contacts.
  bool present_throughout = true;
  OnError on_error = OnError::Throw;
  Resolution resolution{};
};

/// Face-to-face contacts, student metadata and optional timeless
/// friendship / facebook edge lists.
///
/// Aspects: interaction_type {face2face, friendship, facebook}, gender {M, F}
/// and class. Every metadata student is a node; students of unknown gender
/// keep a node but no node-layer, and rows touching them are dropped.
/// T runs from the first contact's start to the last contact.
/// Timeless edges span the whole study interval.
Ingested parse_contacts(const ContactFiles& files, const ContactOptions& options = {});

// -------------------------------------------------------------- flights

/// Header names; empty means "try the usual names".
struct FlightColumns {
  std::string date;
  std::string carrier;
  std::string origin;
  std::string destination;
  std::string departure;
  std::string arrival;
  std::string cancelled;
};

struct FlightOptions {
  FlightColumns columns;
  /// Keep only rows of this month (1-12) / year.
  std::optional<int> month;
  std::optional<int> year;
  OnError on_error = OnError::Skip;
  Resolution resolution{};
};

/// One aspect "carrier"; nodes are airports. Each flight links
/// (origin, carrier) to (destination, carrier) over [departure, arrival],
/// local times read as UTC. An arrival clock time before the departure
/// means the next day.
Ingested parse_flights(const std::vector<std::filesystem::path>& csv_files, const FlightOptions& options = {});

/// Seconds since the epoch of a civil date.
std::int64_t epoch_seconds(int year, unsigned month, unsigned day);

/// "YYYY-MM-DD" or "M/D/YYYY" (an optional trailing time is ignored).
std::optional<std::int64_t> parse_flight_date(std::string_view text);
/// "HHMM" clock time, 1 to 4 digits, "2400" allowed. Seconds after midnight.
std::optional<std::int64_t> parse_hhmm(std::string_view text);

// ------------------------------------------------------------- manifest

/// JSON file describing what to ingest. Paths are relative to the manifest.
///
///   {"format": "contacts", "contacts": ..., "metadata": ..., "friendship": ...,
///    "facebook": ..., "contact_duration": 20, "friendship_mode": "symmetrize"|"mutual",
///    "presence": "study"|"contacts"}
///   {"format": "flights", "flights": [...], "month": 1, "year": 1988,
///    "columns": {"date": "FL_DATE", ...}}
///   {"format": "interchange", "graph": ...}
/// Common keys: "tick_resolution", "on_error": "throw"|"skip".
struct DatasetManifest {
  enum class Format { Contacts, Flights, Interchange };
  Format format = Format::Interchange;
  ContactFiles contact_files;
  ContactOptions contact_options;
  std::vector<std::filesystem::path> flight_files;
  FlightOptions flight_options;
  std::filesystem::path graph;
};

DatasetManifest load_manifest(const std::filesystem::path& path);
/// check_closure is passed on to read_interchange; parsers always build
/// closed graphs.
Ingested ingest(const DatasetManifest& manifest, bool check_closure = true);

/// A file holding an interchange document is read directly; anything else
/// goes through load_manifest.
Ingested ingest_path(const std::filesystem::path& path, bool check_closure = true);

}  // namespace mls
