#include "gridline/network.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <queue>
#include <set>
#include <sstream>
#include <utility>

#include "gridline/errors.hpp"
#include "json_fields.hpp"

namespace gridline {

namespace detail {
extern const std::string_view kGreenline17Json;
}

namespace {

using detail::FieldReader;
using detail::Json;
using detail::OrderedJson;

bool in_unit_interval(double x) { return x >= 0.0 && x <= 1.0; }
bool non_negative(double x) { return x >= 0.0 && std::isfinite(x); }

ThreatProfile read_profile(const FieldReader& reader) {
  ThreatProfile profile;
  profile.threat = reader.number("threat");
  profile.vulnerability = reader.number("vulnerability");
  profile.consequence = reader.number("consequence");
  profile.prevention_cost = reader.number("prevention_cost");
  profile.response_cost = reader.number("response_cost");
  return profile;
}

void write_profile(OrderedJson& out, const ThreatProfile& profile) {
  out["threat"] = profile.threat;
  out["vulnerability"] = profile.vulnerability;
  out["consequence"] = profile.consequence;
  out["prevention_cost"] = profile.prevention_cost;
  out["response_cost"] = profile.response_cost;
}

}  // namespace

std::string_view to_string(Placement placement) {
  switch (placement) {
    case Placement::underground: return "underground";
    case Placement::surface: return "surface";
    case Placement::on_road: return "on-road";
    case Placement::elevated: return "elevated";
  }
  return "surface";
}

std::optional<Placement> placement_from_string(std::string_view text) {
  for (auto p : {Placement::underground, Placement::surface, Placement::on_road,
                 Placement::elevated}) {
    if (to_string(p) == text) return p;
  }
  return std::nullopt;
}

std::string link_key(std::string_view a, std::string_view b) {
  if (b < a) std::swap(a, b);
  std::string key(a);
  key += "\u2014";
  key += b;
  return key;
}

std::optional<std::size_t> TransitNetwork::index_of(std::string_view id) const {
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].id == id) return i;
  }
  return std::nullopt;
}

const StationNode& TransitNetwork::node(std::string_view id) const {
  auto index = index_of(id);
  if (!index) throw DomainError("unknown node id " + std::string(id));
  return nodes[*index];
}

std::vector<std::vector<std::size_t>> adjacency_lists(const TransitNetwork& network) {
  std::vector<std::vector<std::size_t>> adjacency(network.node_count());
  for (const auto& link : network.links) {
    auto a = network.index_of(link.a);
    auto b = network.index_of(link.b);
    if (!a || !b || *a == *b) continue;
    adjacency[*a].push_back(*b);
    adjacency[*b].push_back(*a);
  }
  for (auto& neighbors : adjacency) {
    std::sort(neighbors.begin(), neighbors.end());
    neighbors.erase(std::unique(neighbors.begin(), neighbors.end()), neighbors.end());
  }
  return adjacency;
}

std::vector<std::size_t> component_sizes(const TransitNetwork& network) {
  const auto adjacency = adjacency_lists(network);
  std::vector<bool> seen(adjacency.size(), false);
  std::vector<std::size_t> sizes;
  for (std::size_t start = 0; start < adjacency.size(); ++start) {
    if (seen[start]) continue;
    std::size_t size = 0;
    std::queue<std::size_t> frontier;
    frontier.push(start);
    seen[start] = true;
    while (!frontier.empty()) {
      auto u = frontier.front();
      frontier.pop();
      ++size;
      for (auto v : adjacency[u]) {
        if (!seen[v]) {
          seen[v] = true;
          frontier.push(v);
        }
      }
    }
    sizes.push_back(size);
  }
  return sizes;
}

bool is_connected(const TransitNetwork& network) {
  return component_sizes(network).size() <= 1;
}

std::vector<std::string> profile_violations(const ThreatProfile& profile) {
  std::vector<std::string> out;
  if (!in_unit_interval(profile.threat)) out.emplace_back("threat out of range");
  if (!in_unit_interval(profile.vulnerability)) out.emplace_back("vulnerability out of range");
  if (!non_negative(profile.consequence)) out.emplace_back("consequence negative");
  if (!non_negative(profile.prevention_cost)) out.emplace_back("prevention_cost negative");
  if (!non_negative(profile.response_cost)) out.emplace_back("response_cost negative");
  return out;
}

std::vector<Violation> validate(const TransitNetwork& network) {
  std::vector<Violation> out;
  std::set<std::string_view> ids;
  for (const auto& node : network.nodes) {
    const std::string entity = "node " + node.id;
    if (node.id.empty()) out.push_back({entity, "empty id"});
    if (!ids.insert(node.id).second) out.push_back({entity, "duplicate id"});
    for (auto& rule : profile_violations(node.profile)) out.push_back({entity, std::move(rule)});
  }

  std::set<std::pair<std::string_view, std::string_view>> pairs;
  for (const auto& link : network.links) {
    const std::string entity = "link " + link_key(link.a, link.b);
    if (link.a == link.b) out.push_back({entity, "self-loop"});
    for (const auto* end : {&link.a, &link.b}) {
      if (!ids.count(*end)) out.push_back({entity, "dangling endpoint " + *end});
    }
    auto key = std::minmax<std::string_view>(link.a, link.b);
    if (!pairs.insert(key).second) out.push_back({entity, "duplicate link"});
    for (auto& rule : profile_violations(link.profile)) out.push_back({entity, std::move(rule)});
  }
  return out;
}

TransitNetwork parse_network(std::string_view text) {
  const Json doc = detail::parse_json_text(text, "network");
  FieldReader root(doc, "network");
  root.allow_only({"nodes", "links"});

  TransitNetwork network;
  std::set<std::string> ids;
  const Json& nodes = root.array("nodes");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    FieldReader reader(nodes[i], root.child("nodes", i));
    reader.allow_only({"id", "name", "placement", "threat", "vulnerability", "consequence",
                       "prevention_cost", "response_cost"});
    StationNode node;
    node.id = reader.string("id");
    node.name = reader.string("name");
    const auto placement_text = reader.string("placement");
    auto placement = placement_from_string(placement_text);
    if (!placement) reader.fail_field("placement", "unknown placement \"" + placement_text + "\"");
    node.placement = *placement;
    node.profile = read_profile(reader);
    if (!ids.insert(node.id).second) reader.fail("duplicate node id \"" + node.id + "\"");
    network.nodes.push_back(std::move(node));
  }

  const Json& links = root.array("links");
  for (std::size_t i = 0; i < links.size(); ++i) {
    FieldReader reader(links[i], root.child("links", i));
    reader.allow_only({"a", "b", "threat", "vulnerability", "consequence", "prevention_cost",
                       "response_cost"});
    RailLink link;
    link.a = reader.string("a");
    link.b = reader.string("b");
    link.profile = read_profile(reader);
    network.links.push_back(std::move(link));
  }
  return network;
}

std::string serialize_network(const TransitNetwork& network) {
  OrderedJson doc;
  doc["nodes"] = OrderedJson::array();
  for (const auto& node : network.nodes) {
    OrderedJson item;
    item["id"] = node.id;
    item["name"] = node.name;
    item["placement"] = std::string(to_string(node.placement));
    write_profile(item, node.profile);
    doc["nodes"].push_back(std::move(item));
  }
  doc["links"] = OrderedJson::array();
  for (const auto& link : network.links) {
    OrderedJson item;
    item["a"] = link.a;
    item["b"] = link.b;
    write_profile(item, link.profile);
    doc["links"].push_back(std::move(item));
  }
  return doc.dump(2) + "\n";
}

TransitNetwork load_bundled(std::string_view name) {
  if (name == "greenline17") return parse_network(detail::kGreenline17Json);
  throw DomainError("unknown dataset \"" + std::string(name) + "\"");
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot open file " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

TransitNetwork load_network(std::string_view reference) {
  constexpr std::string_view prefix = "bundled:";
  if (reference.substr(0, prefix.size()) == prefix) {
    return load_bundled(reference.substr(prefix.size()));
  }
  return parse_network(read_text_file(std::string(reference)));
}

}  // namespace gridline
