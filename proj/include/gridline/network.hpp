#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gridline {

/// Money is expressed in millions of USD throughout the library.
using Money = double;

/// Per-asset threat model. Fractions are stored in [0,1], never as percentages.
struct ThreatProfile {
  double threat = 0.0;
  double vulnerability = 0.0;
  Money consequence = 0.0;
  Money prevention_cost = 0.0;
  Money response_cost = 0.0;

  friend bool operator==(const ThreatProfile&, const ThreatProfile&) = default;
};

enum class Placement { underground, surface, on_road, elevated };

std::string_view to_string(Placement placement);
std::optional<Placement> placement_from_string(std::string_view text);

struct StationNode {
  std::string id;
  std::string name;
  Placement placement = Placement::surface;
  ThreatProfile profile;

  friend bool operator==(const StationNode&, const StationNode&) = default;
};

/// Undirected link; endpoint order is preserved as given but carries no meaning.
struct RailLink {
  std::string a;
  std::string b;
  ThreatProfile profile;

  bool joins(std::string_view x, std::string_view y) const {
    return (a == x && b == y) || (a == y && b == x);
  }

  friend bool operator==(const RailLink&, const RailLink&) = default;
};

/// Key used for links in reports: endpoints in lexical order joined by U+2014 (em dash).
std::string link_key(std::string_view a, std::string_view b);

struct TransitNetwork {
  std::vector<StationNode> nodes;
  std::vector<RailLink> links;

  std::size_t node_count() const { return nodes.size(); }
  std::size_t link_count() const { return links.size(); }

  std::optional<std::size_t> index_of(std::string_view id) const;
  const StationNode& node(std::string_view id) const;

  friend bool operator==(const TransitNetwork&, const TransitNetwork&) = default;
};

/// Neighbor lists indexed by node position. Links with unknown endpoints are skipped.
std::vector<std::vector<std::size_t>> adjacency_lists(const TransitNetwork& network);

/// Sizes of connected components, in order of first node index.
std::vector<std::size_t> component_sizes(const TransitNetwork& network);

bool is_connected(const TransitNetwork& network);

struct Violation {
  std::string entity;  // "node <id>" or "link " + link_key(a, b)
  std::string rule;    // e.g. "vulnerability out of range"

  std::string message() const { return entity + ": " + rule; }
};

/// Empty result iff every type invariant of the network holds.
std::vector<Violation> validate(const TransitNetwork& network);

/// Violations for a single profile; callers attach the entity.
std::vector<std::string> profile_violations(const ThreatProfile& profile);

/// Parses the JSON network document. Throws ParseError on malformed input,
/// unknown or missing fields, wrong types, and duplicate node ids. Range
/// checks are left to validate().
TransitNetwork parse_network(std::string_view text);

/// JSON document with a stable field order; parse_network(serialize_network(n)) == n.
std::string serialize_network(const TransitNetwork& network);

/// Known names: "greenline17".
TransitNetwork load_bundled(std::string_view name);

/// Resolves "bundled:<name>" or reads a file path.
TransitNetwork load_network(std::string_view reference);

/// Reads a whole file or throws DomainError.
std::string read_text_file(const std::string& path);

}  // namespace gridline
