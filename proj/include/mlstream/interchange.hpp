#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

#include "mlstream/model.hpp"

namespace mls {

inline constexpr int kInterchangeVersion = 1;

/// Versioned JSON document holding a whole graph. Integers throughout,
/// arrays sorted, so equal graphs serialize to identical bytes.
///
///   header: {format_version, tick_resolution, study_interval: [s, e], checksum}
///   nodes:  [name, ...]
///   aspects: [{name, elementary_layers: [...]}, ...]
///   layer_presence: [[layer, [[s, e], ...]], ...]
///   node_layer_presence: [[[node, layer], [[s, e], ...]], ...]
///   links: [[s, e, node_a, layer_a, node_b, layer_b], ...]
void write_interchange(std::ostream& os, const MultilayerStreamGraph& g);
void write_interchange(const std::filesystem::path& path, const MultilayerStreamGraph& g);

/// Throws FormatVersionMismatch, SchemaError (message starts with a JSON
/// pointer into the document) or ChecksumMismatch. The checksum field is
/// optional; when present it is checked after the schema.
///
/// With check_closure = false a graph breaking the closure constraints is
/// returned as is, for validate() to report.
MultilayerStreamGraph read_interchange_string(const std::string& text, bool check_closure = true);
MultilayerStreamGraph read_interchange(const std::filesystem::path& path, bool check_closure = true);

/// FNV-1a 64 over the canonical body, as "fnv1a64:<16 hex digits>".
std::string interchange_checksum(const MultilayerStreamGraph& g);

/// Same T, resolution, nodes, aspects, presences and link multiset.
bool structurally_equal(const MultilayerStreamGraph& a, const MultilayerStreamGraph& b);

}  // namespace mls
