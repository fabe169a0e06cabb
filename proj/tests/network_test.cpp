#include <gtest/gtest.h>

#include <random>

#include "gridline/errors.hpp"
#include "gridline/network.hpp"
#include "gridline/metrics.hpp"
#include "oracles.hpp"

namespace gridline {
namespace {

const char* kTwoNodeDocument = R"({
  "nodes": [
    {"id": "A", "name": "Alpha", "placement": "surface", "threat": 1.0, "vulnerability": 0.5,
     "consequence": 2, "prevention_cost": 0.1, "response_cost": 0.2},
    {"id": "B", "name": "Beta", "placement": "elevated", "threat": 0.5, "vulnerability": 0.25,
     "consequence": 4, "prevention_cost": 0.1, "response_cost": 0.2}
  ],
  "links": [
    {"a": "A", "b": "B", "threat": 1.0, "vulnerability": 0.8, "consequence": 8,
     "prevention_cost": 0.71, "response_cost": 1.02}
  ]
})";

TEST(NetworkTest, BundledGreenLineIsValid) {
  const auto network = load_bundled("greenline17");
  EXPECT_EQ(network.node_count(), 17u);
  EXPECT_EQ(network.link_count(), 16u);
  EXPECT_TRUE(validate(network).empty());
}

TEST(NetworkTest, BundledGreenLineEdgeSet) {
  const auto network = load_bundled("greenline17");
  const std::vector<std::pair<std::string, std::string>> expected = {
      {"Kenmore", "BostonCollege"},        {"Kenmore", "ClevelandCircle"},
      {"Kenmore", "BrooklineVillage"},     {"BrooklineVillage", "Riverside"},
      {"Kenmore", "Hynes"},                {"Hynes", "Copley"},
      {"Copley", "HeathStreet"},           {"Copley", "Arlington"},
      {"Arlington", "Boylston"},           {"Boylston", "ParkStreet"},
      {"ParkStreet", "GovernmentCenter"},  {"GovernmentCenter", "Haymarket"},
      {"Haymarket", "NorthStation"},       {"NorthStation", "Lechmere"},
      {"Lechmere", "UnionSquare"},         {"Lechmere", "MedfordTufts"}};
  for (const auto& [a, b] : expected) {
    const bool found = std::any_of(network.links.begin(), network.links.end(),
                                   [&](const RailLink& l) { return l.joins(a, b); });
    EXPECT_TRUE(found) << a << "-" << b;
  }
}

TEST(NetworkTest, BundledVulnerabilitiesAndConsequences) {
  const auto network = load_bundled("greenline17");
  const std::map<std::string, std::pair<double, double>> expected = {
      {"Riverside", {0.5, 4}},          {"Kenmore", {0.6, 10}},        {"Hynes", {0.6, 10}},
      {"Copley", {0.6, 15}},            {"Arlington", {0.6, 12}},      {"Boylston", {0.6, 13}},
      {"UnionSquare", {0.6, 4}},        {"MedfordTufts", {0.6, 4}},    {"Lechmere", {0.7, 9}},
      {"ClevelandCircle", {0.8, 4}},    {"BostonCollege", {0.8, 4}},   {"ParkStreet", {0.8, 15}},
      {"GovernmentCenter", {0.9, 17}},  {"Haymarket", {0.9, 16}},      {"NorthStation", {0.9, 20}},
      {"HeathStreet", {0.9, 4}},        {"BrooklineVillage", {0.9, 10}}};
  ASSERT_EQ(expected.size(), network.node_count());
  for (const auto& [id, values] : expected) {
    const auto& node = network.node(id);
    EXPECT_DOUBLE_EQ(node.profile.threat, 1.0) << id;
    EXPECT_DOUBLE_EQ(node.profile.vulnerability, values.first) << id;
    EXPECT_DOUBLE_EQ(node.profile.consequence, values.second) << id;
  }
  EXPECT_EQ(network.node("MedfordTufts").name, "Medford/Tufts");
  EXPECT_EQ(network.node("Lechmere").placement, Placement::elevated);
  for (const auto& link : network.links) {
    EXPECT_EQ(link.profile, (ThreatProfile{1.0, 0.8, 8.0, 0.71, 1.02}));
  }
}

TEST(NetworkTest, KenmoreHasDegreeFourAndDegreesSumToThirtyTwo) {
  const auto network = load_bundled("greenline17");
  const auto adjacency = adjacency_lists(network);
  EXPECT_EQ(adjacency[*network.index_of("Kenmore")].size(), 4u);
  std::size_t total = 0;
  for (const auto& n : adjacency) total += n.size();
  EXPECT_EQ(total, 2 * network.link_count());
  EXPECT_EQ(total, 32u);
}

TEST(NetworkTest, UnknownDatasetIsRejected) {
  EXPECT_THROW(load_bundled("redline"), DomainError);
}

TEST(NetworkTest, DanglingEndpointIsOneViolation) {
  auto network = oracle::path_network(2);
  network.links.push_back({"n0", "X", {1.0, 0.5, 1.0, 0.0, 0.0}});
  const auto violations = validate(network);
  ASSERT_EQ(violations.size(), 1u);
  EXPECT_EQ(violations[0].rule, "dangling endpoint X");
}

TEST(NetworkTest, VulnerabilityOutOfRangeIsOneViolation) {
  auto network = oracle::path_network(3);
  network.nodes[1].profile.vulnerability = 1.3;
  const auto violations = validate(network);
  ASSERT_EQ(violations.size(), 1u);
  EXPECT_EQ(violations[0].rule, "vulnerability out of range");
  EXPECT_EQ(violations[0].entity, "node n1");
}

TEST(NetworkTest, SelfLoopsDuplicatesAndNegativeMoneyAreViolations) {
  auto network = oracle::path_network(3);
  network.links.push_back({"n1", "n0", {1.0, 0.5, 1.0, 0.0, 0.0}});
  network.links.push_back({"n2", "n2", {1.0, 0.5, 1.0, 0.0, 0.0}});
  network.nodes[0].profile.consequence = -1.0;
  network.nodes.push_back(network.nodes[2]);
  std::vector<std::string> rules;
  for (const auto& v : validate(network)) rules.push_back(v.rule);
  EXPECT_NE(std::find(rules.begin(), rules.end(), "duplicate link"), rules.end());
  EXPECT_NE(std::find(rules.begin(), rules.end(), "self-loop"), rules.end());
  EXPECT_NE(std::find(rules.begin(), rules.end(), "consequence negative"), rules.end());
  EXPECT_NE(std::find(rules.begin(), rules.end(), "duplicate id"), rules.end());
}

TEST(NetworkTest, EmptyNetworkHasNoViolations) { EXPECT_TRUE(validate(TransitNetwork{}).empty()); }

TEST(NetworkTest, ParsesMinimalDocument) {
  const auto network = parse_network(kTwoNodeDocument);
  ASSERT_EQ(network.node_count(), 2u);
  ASSERT_EQ(network.link_count(), 1u);
  EXPECT_EQ(network.node("B").placement, Placement::elevated);
  EXPECT_DOUBLE_EQ(network.node("B").profile.threat, 0.5);
  EXPECT_TRUE(validate(network).empty());
}

TEST(NetworkTest, DuplicateNodeIdIsParseErrorNamingTheId) {
  std::string doc = kTwoNodeDocument;
  doc.replace(doc.find("\"id\": \"B\""), 9, "\"id\": \"A\"");
  try {
    parse_network(doc);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("\"A\""), std::string::npos) << e.what();
  }
}

TEST(NetworkTest, SchemaErrorsReportLocation) {
  std::string unknown = kTwoNodeDocument;
  unknown.replace(unknown.find("\"name\": \"Beta\""), 14, "\"nom\": \"Beta\", \"name\": \"Beta\"");
  try {
    parse_network(unknown);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("network.nodes[1]"), std::string::npos) << e.what();
    EXPECT_NE(std::string(e.what()).find("nom"), std::string::npos) << e.what();
  }
  EXPECT_THROW(parse_network("{\"nodes\": []"), ParseError);
  EXPECT_THROW(parse_network(R"({"nodes": [], "links": [], "extra": 1})"), ParseError);
  EXPECT_THROW(parse_network(R"({"nodes": [{"id": "A"}], "links": []})"), ParseError);
  std::string bad_placement = kTwoNodeDocument;
  bad_placement.replace(bad_placement.find("elevated"), 8, "orbital");
  EXPECT_THROW(parse_network(bad_placement), ParseError);
  std::string string_number = kTwoNodeDocument;
  string_number.replace(string_number.find("\"consequence\": 8"), 16, "\"consequence\": \"8\"");
  EXPECT_THROW(parse_network(string_number), ParseError);
}

TEST(NetworkTest, SerializeThenParseIsIdentityOnGreenLine) {
  const auto network = load_bundled("greenline17");
  EXPECT_EQ(parse_network(serialize_network(network)), network);
}

TEST(NetworkTest, SerializeThenParseIsIdentityOnRandomNetworks) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const auto network = oracle::random_connected_network(rng, 2 + trial % 15, 0.2);
    ASSERT_EQ(parse_network(serialize_network(network)), network) << "trial " << trial;
  }
}

TEST(NetworkTest, LinkKeyIsLexicallyOrdered) {
  EXPECT_EQ(link_key("Kenmore", "Hynes"), "Hynes\u2014Kenmore");
  EXPECT_EQ(link_key("Hynes", "Kenmore"), "Hynes\u2014Kenmore");
}

TEST(NetworkTest, LoadNetworkReadsFilesAndBundles) {
  EXPECT_EQ(load_network("bundled:greenline17"), load_bundled("greenline17"));
  EXPECT_EQ(load_network(std::string(GRIDLINE_DATA_DIR) + "/greenline17.json"), load_bundled("greenline17"));
  EXPECT_THROW(load_network("/no/such/file.json"), DomainError);
}

}  // namespace
}  // namespace gridline
