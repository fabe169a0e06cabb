#include <gtest/gtest.h>

#include <atomic>
#include <thread>

#include "gridline/report.hpp"
#include "gridline/service.hpp"
#include "httplib.h"

namespace gridline {
namespace {

class ServiceTest : public ::testing::Test {
 protected:
  Service service{load_bundled("greenline17"), load_bundled_fault_tree("greenline-hubs")};

  ApiResponse get(const std::string& path, std::map<std::string, std::string> query = {}) {
    return service.handle(ApiRequest{"GET", path, std::move(query), "", std::nullopt});
  }
  ApiResponse post(const std::string& path, const std::string& body,
                   std::optional<std::string> version = std::nullopt) {
    return service.handle(ApiRequest{"POST", path, {}, body, std::move(version)});
  }
};

TEST_F(ServiceTest, MetricsAndRisk) {
  const auto metrics = get("/metrics");
  ASSERT_EQ(metrics.status, 200);
  EXPECT_EQ(metrics.snapshot_version, 1u);
  EXPECT_NEAR(Json::parse(metrics.body)["spectral_radius"].get<double>(), 2.22, 0.01);
  const auto risk = Json::parse(get("/risk").body);
  EXPECT_NEAR(risk["total_risk"].get<double>(), 230.20, 0.01);
}

TEST_F(ServiceTest, GetNetworkRoundTrips) {
  const auto response = get("/network");
  ASSERT_EQ(response.status, 200);
  EXPECT_EQ(parse_network(response.body), load_bundled("greenline17"));
}

TEST_F(ServiceTest, PureGetsAreRepeatable) {
  for (const char* path : {"/network", "/metrics", "/risk", "/resilience"}) {
    EXPECT_EQ(get(path).body, get(path).body) << path;
  }
  EXPECT_EQ(get("/roi-curve", {{"budgets", "1,5,10"}}).body, get("/roi-curve", {{"budgets", "1,5,10"}}).body);
}

TEST_F(ServiceTest, AllocateFullBudget) {
  const auto response = post("/faulttree/allocate", R"({"budget": 10})");
  ASSERT_EQ(response.status, 200) << response.body;
  const auto payload = Json::parse(response.body);
  EXPECT_NEAR(payload["vulnerability"].get<double>(), 0.1855, 0.005);
  EXPECT_NEAR(payload["risk"].get<double>(), 1.53, 0.05);
  EXPECT_EQ(post("/faulttree/allocate", R"({"budget": 10, "allocator": "lottery"})").status, 400);
  EXPECT_EQ(post("/faulttree/allocate", R"({"budgett": 10})").status, 400);
  EXPECT_EQ(post("/faulttree/allocate", "").status, 400);
  EXPECT_EQ(post("/faulttree/allocate", "{").status, 400);
}

TEST_F(ServiceTest, AttackEndpoints) {
  const auto targeted = post("/attack", R"({"preset": "kenmore-targeted"})");
  ASSERT_EQ(targeted.status, 200) << targeted.body;
  EXPECT_EQ(Json::parse(targeted.body)["impact"]["components_after"], 4);
  EXPECT_EQ(post("/attack", R"({"preset": "kenmore-flood"})").status, 404);
  EXPECT_EQ(post("/attack", R"({"preset": "kenmore-random"})").status, 400);
  EXPECT_EQ(post("/attack", R"({"preset": "kenmore-random", "seed": 4})").status, 200);
  EXPECT_EQ(post("/attack", R"({"preset": "kenmore-random", "seed": -4})").status, 400);
  EXPECT_EQ(post("/attack", R"({})").status, 400);
  const auto inline_scenario = post(
      "/attack",
      R"({"scenario": {"name": "cut", "kind": "targeted", "steps": [{"op": "remove_node", "id": "Copley"}]}})");
  ASSERT_EQ(inline_scenario.status, 200) << inline_scenario.body;
  EXPECT_EQ(Json::parse(inline_scenario.body)["impact"]["components_after"], 3);
}

TEST_F(ServiceTest, ResilienceAndRoiCurve) {
  const auto fit = Json::parse(get("/resilience", {{"rho", "2.22"}}).body);
  EXPECT_NEAR(fit["b"].get<double>(), 0.318, 0.002);
  EXPECT_EQ(get("/resilience", {{"estimate", "0.5"}}).status, 400);
  EXPECT_EQ(get("/resilience", {{"rho", "abc"}}).status, 400);
  const auto curve = Json::parse(get("/roi-curve", {{"budgets", "10"}}).body);
  EXPECT_NEAR(curve[0]["roi"].get<double>(), 0.337, 0.01);
  EXPECT_EQ(get("/roi-curve").status, 400);
  EXPECT_EQ(get("/roi-curve", {{"budgets", "3,2"}}).status, 400);
}

TEST_F(ServiceTest, UnknownRoutesAre404AndOptionsAre204) {
  EXPECT_EQ(get("/nothing").status, 404);
  EXPECT_EQ(post("/metrics", "{}").status, 404);
  EXPECT_EQ(service.handle(ApiRequest{"OPTIONS", "/metrics", {}, "", std::nullopt}).status, 204);
}

TEST_F(ServiceTest, ReplaceNetworkBumpsVersion) {
  auto network = load_bundled("greenline17");
  network.nodes[0].profile.consequence = 40.0;
  const auto response = post("/network", serialize_network(network), "1");
  ASSERT_EQ(response.status, 200) << response.body;
  EXPECT_EQ(response.snapshot_version, 2u);
  EXPECT_EQ(Json::parse(response.body)["version"], 2);
  EXPECT_EQ(service.version(), 2u);
  EXPECT_EQ(get("/risk").snapshot_version, 2u);
  EXPECT_NEAR(Json::parse(get("/risk").body)["total_risk"].get<double>(), 230.20 + 0.8 * 36.0, 1e-9);
}

TEST_F(ServiceTest, StaleVersionIsConflict) {
  const auto body = serialize_network(load_bundled("greenline17"));
  ASSERT_EQ(post("/network", body, "1").status, 200);
  const auto stale = post("/network", body, "1");
  EXPECT_EQ(stale.status, 409);
  EXPECT_EQ(stale.snapshot_version, 2u);
  EXPECT_EQ(post("/faulttree/allocate", R"({"budget": 1})", "1").status, 409);
  EXPECT_EQ(post("/faulttree/allocate", R"({"budget": 1})", "2").status, 200);
  EXPECT_EQ(service.version(), 2u);
}

TEST_F(ServiceTest, InvalidReplacementIsRejectedWithViolations) {
  auto network = load_bundled("greenline17");
  network.nodes[2].profile.vulnerability = 1.3;
  const auto response = post("/network", serialize_network(network));
  EXPECT_EQ(response.status, 400);
  const auto payload = Json::parse(response.body);
  ASSERT_EQ(payload["violations"].size(), 1u);
  EXPECT_NE(payload["violations"][0].get<std::string>().find("vulnerability out of range"), std::string::npos);
  EXPECT_EQ(service.version(), 1u);
}

TEST_F(ServiceTest, EmptyNetworkSnapshotGives400) {
  ASSERT_EQ(post("/network", R"({"nodes": [], "links": []})").status, 200);
  for (const char* path : {"/metrics", "/risk"}) {
    const auto response = get(path);
    EXPECT_EQ(response.status, 400) << path;
    const auto violations = Json::parse(response.body)["violations"];
    ASSERT_FALSE(violations.empty());
    EXPECT_EQ(violations[0], "network has no nodes");
  }
}

TEST_F(ServiceTest, ConcurrentReadersSeeConsistentSnapshots) {
  const auto original = get("/risk").body;
  auto changed = load_bundled("greenline17");
  changed.nodes[5].profile.consequence = 99.0;
  std::atomic<bool> done{false};
  std::atomic<int> bad{0};
  std::vector<std::thread> readers;
  std::string replaced;
  {
    Service probe{changed, load_bundled_fault_tree("greenline-hubs")};
    replaced = probe.handle(ApiRequest{"GET", "/risk", {}, "", std::nullopt}).body;
  }
  for (int i = 0; i < 4; ++i) {
    readers.emplace_back([&] {
      while (!done) {
        const auto body = get("/risk").body;
        if (body != original && body != replaced) ++bad;
      }
    });
  }
  for (int i = 0; i < 20; ++i) {
    post("/network", serialize_network(i % 2 == 0 ? changed : load_bundled("greenline17")));
  }
  done = true;
  for (auto& t : readers) t.join();
  EXPECT_EQ(bad, 0);
  EXPECT_EQ(service.version(), 21u);
}

TEST(ServiceHttpTest, RealRoundTrip) {
  Service service(load_bundled("greenline17"), load_bundled_fault_tree("greenline-hubs"));
  const int port = service.bind_any_port("127.0.0.1");
  ASSERT_GT(port, 0);
  std::thread server([&] { service.listen_after_bind(); });
  service.wait_until_ready();

  httplib::Client client("127.0.0.1", port);
  auto metrics = client.Get("/metrics");
  ASSERT_TRUE(metrics);
  EXPECT_EQ(metrics->status, 200);
  EXPECT_EQ(metrics->get_header_value(kSnapshotHeader), "1");
  EXPECT_EQ(metrics->get_header_value("Access-Control-Allow-Origin"), "*");
  EXPECT_EQ(metrics->body, service.handle(ApiRequest{"GET", "/metrics", {}, "", std::nullopt}).body);

  auto allocate = client.Post("/faulttree/allocate", R"({"budget": 0})", "application/json");
  ASSERT_TRUE(allocate);
  EXPECT_NEAR(Json::parse(allocate->body)["risk"].get<double>(), 4.9, 1e-9);

  auto curve = client.Get("/roi-curve?budgets=1,2,3");
  ASSERT_TRUE(curve);
  EXPECT_EQ(curve->status, 200);
  EXPECT_EQ(Json::parse(curve->body).size(), 3u);

  httplib::Headers stale = {{kSnapshotHeader, "7"}};
  auto conflict = client.Post("/network", stale, serialize_network(load_bundled("greenline17")), "application/json");
  ASSERT_TRUE(conflict);
  EXPECT_EQ(conflict->status, 409);

  auto missing = client.Post("/attack", R"({"preset": "nope"})", "application/json");
  ASSERT_TRUE(missing);
  EXPECT_EQ(missing->status, 404);

  auto preflight = client.Options("/network");
  ASSERT_TRUE(preflight);
  EXPECT_EQ(preflight->status, 204);
  EXPECT_NE(preflight->get_header_value("Access-Control-Allow-Headers").find(kSnapshotHeader), std::string::npos);

  service.stop();
  server.join();
}

TEST(ResolvePortTest, EnvironmentOverrides) {
  unsetenv("GRIDLINE_PORT");
  EXPECT_EQ(resolve_port(8080), 8080);
  setenv("GRIDLINE_PORT", "9123", 1);
  EXPECT_EQ(resolve_port(8080), 9123);
  setenv("GRIDLINE_PORT", "junk", 1);
  EXPECT_EQ(resolve_port(8080), 8080);
  unsetenv("GRIDLINE_PORT");
}

}  // namespace
}  // namespace gridline
