#include "gridline/service.hpp"

#include <cstdlib>

#include "gridline/attack.hpp"
#include "gridline/errors.hpp"
#include "gridline/report.hpp"
#include "httplib.h"
#include "json_fields.hpp"

namespace gridline {

namespace {

using detail::FieldReader;

struct HttpError {
  int status;
  std::string message;
  std::vector<std::string> violations;
};

ApiResponse json_response(int status, const Json& payload, std::uint64_t version) {
  return ApiResponse{status, render(payload), version};
}

std::optional<std::string> query_value(const ApiRequest& request, const std::string& key) {
  auto it = request.query.find(key);
  if (it == request.query.end()) return std::nullopt;
  return it->second;
}

std::uint64_t parse_seed(const std::string& text) {
  std::size_t used = 0;
  std::uint64_t value = 0;
  try {
    value = std::stoull(text, &used, 10);
  } catch (const std::exception&) {
    used = 0;
  }
  if (text.empty() || used != text.size() || text.front() == '-') {
    throw DomainError("seed must be an unsigned 64-bit integer");
  }
  return value;
}

AllocatorChoice allocator_choice(const std::optional<std::string>& name, std::optional<double> step) {
  AllocatorChoice choice;
  if (name) {
    auto kind = allocator_from_string(*name);
    if (!kind) throw DomainError("unknown allocator \"" + *name + "\"");
    choice.kind = *kind;
  }
  if (step) choice.greedy_step = *step;
  return choice;
}

detail::Json parse_body(const ApiRequest& request) {
  if (request.body.empty()) throw DomainError("request body must be a JSON object");
  return detail::parse_json_text(request.body, "request body");
}

}  // namespace

Service::Service(TransitNetwork network, FaultTree tree)
    : snapshot_(std::make_shared<const Snapshot>(Snapshot{1, std::move(network), std::move(tree)})) {}

Service::~Service() { stop(); }

std::shared_ptr<const Service::Snapshot> Service::current() const {
  std::lock_guard lock(mutex_);
  return snapshot_;
}

std::uint64_t Service::version() const { return current()->version; }

ApiResponse Service::handle(const ApiRequest& request) {
  const auto snapshot = current();
  try {
    if (request.method == "OPTIONS") return ApiResponse{204, "", snapshot->version};
    if (request.method == "POST" && request.snapshot_version &&
        *request.snapshot_version != std::to_string(snapshot->version)) {
      throw HttpError{409, "stale snapshot version " + *request.snapshot_version + "; current is " +
                               std::to_string(snapshot->version), {}};
    }
    if (request.method == "POST" && request.path == "/network") return replace_network(request);
    return dispatch(request, *snapshot);
  } catch (const HttpError& err) {
    return json_response(err.status, error_payload(err.message, err.violations), snapshot->version);
  } catch (const ValidationError& err) {
    return json_response(400, error_payload("validation failed", err.violations()), snapshot->version);
  } catch (const ParseError& err) {
    return json_response(400, error_payload(err.what(), {err.what()}), snapshot->version);
  } catch (const DomainError& err) {
    return json_response(400, error_payload(err.what(), {err.what()}), snapshot->version);
  } catch (const std::exception& err) {
    return json_response(500, error_payload(err.what()), snapshot->version);
  }
}

ApiResponse Service::replace_network(const ApiRequest& request) {
  TransitNetwork network = parse_network(request.body);
  std::vector<std::string> problems;
  for (const auto& violation : validate(network)) problems.push_back(violation.message());
  if (!problems.empty()) throw ValidationError(std::move(problems));

  std::lock_guard lock(mutex_);
  // Re-check under the lock so two racing replacements cannot both succeed.
  if (request.snapshot_version && *request.snapshot_version != std::to_string(snapshot_->version)) {
    throw HttpError{409, "stale snapshot version " + *request.snapshot_version, {}};
  }
  auto next = std::make_shared<const Snapshot>(
      Snapshot{snapshot_->version + 1, std::move(network), snapshot_->tree});
  snapshot_ = next;
  Json payload;
  payload["version"] = next->version;
  payload["nodes"] = next->network.node_count();
  payload["links"] = next->network.link_count();
  return json_response(200, payload, next->version);
}

ApiResponse Service::dispatch(const ApiRequest& request, const Snapshot& snapshot) const {
  const auto version = snapshot.version;
  const auto& path = request.path;
  const bool get = request.method == "GET";
  const bool post = request.method == "POST";

  if (get && path == "/network") {
    return ApiResponse{200, serialize_network(snapshot.network), version};
  }
  if (get && path == "/metrics") return json_response(200, metrics_payload(snapshot.network), version);
  if (get && path == "/risk") return json_response(200, risk_payload(snapshot.network), version);
  if (get && path == "/resilience") {
    ResilienceRequest params;
    if (auto points = query_value(request, "points")) params.points = parse_calibration_points(*points);
    if (auto rho = query_value(request, "rho")) params.rho = parse_number_list(*rho).at(0);
    if (auto gammas = query_value(request, "estimate")) params.estimate_gammas = parse_number_list(*gammas);
    if (auto trials = query_value(request, "trials")) {
      params.trials = static_cast<int>(parse_number_list(*trials).at(0));
    }
    if (auto seed = query_value(request, "seed")) params.seed = parse_seed(*seed);
    return json_response(200, resilience_payload(snapshot.network, params), version);
  }
  if (get && path == "/roi-curve") {
    auto budgets = query_value(request, "budgets");
    if (!budgets) throw DomainError("missing query parameter \"budgets\"");
    std::optional<double> step;
    if (auto s = query_value(request, "step")) step = parse_number_list(*s).at(0);
    const auto allocator = allocator_choice(query_value(request, "allocator"), step);
    return json_response(200, roi_curve_payload(snapshot.tree, parse_number_list(*budgets), allocator),
                         version);
  }
  if (post && path == "/faulttree/allocate") {
    const auto body = parse_body(request);
    FieldReader reader(body, "request");
    reader.allow_only({"budget", "allocator", "step"});
    std::optional<std::string> name;
    std::optional<double> step;
    if (reader.has("allocator")) name = reader.string("allocator");
    if (reader.has("step")) step = reader.number("step");
    return json_response(
        200, allocation_payload(snapshot.tree, reader.number("budget"), allocator_choice(name, step)),
        version);
  }
  if (post && path == "/attack") {
    const auto body = parse_body(request);
    FieldReader reader(body, "request");
    reader.allow_only({"preset", "scenario", "seed"});
    AttackScenario scenario;
    if (reader.has("preset") == reader.has("scenario")) {
      throw DomainError("give exactly one of \"preset\" or \"scenario\"");
    }
    if (reader.has("preset")) {
      const auto name = reader.string("preset");
      try {
        scenario = preset(name);
      } catch (const DomainError& err) {
        throw HttpError{404, err.what(), {}};
      }
    } else {
      scenario = parse_scenario(reader.at("scenario").dump());
    }
    std::optional<std::uint64_t> seed;
    if (reader.has("seed")) {
      const auto& value = reader.at("seed");
      if (!value.is_number_unsigned()) reader.fail_field("seed", "expected an unsigned integer");
      seed = value.get<std::uint64_t>();
    }
    return json_response(200, attack_payload(snapshot.network, scenario, seed), version);
  }
  throw HttpError{404, "no route for " + request.method + " " + path, {}};
}

httplib::Server& Service::server() {
  if (server_) return *server_;
  server_ = std::make_unique<httplib::Server>();
  auto bridge = [this](const httplib::Request& req, httplib::Response& res) {
    ApiRequest request;
    request.method = req.method;
    request.path = req.path;
    for (const auto& [key, value] : req.params) request.query.emplace(key, value);
    request.body = req.body;
    if (req.has_header(kSnapshotHeader)) request.snapshot_version = req.get_header_value(kSnapshotHeader);
    const ApiResponse response = handle(request);
    res.status = response.status;
    res.set_header(kSnapshotHeader, std::to_string(response.snapshot_version));
    res.set_header("Access-Control-Allow-Origin", "*");
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", std::string("Content-Type, ") + kSnapshotHeader);
    res.set_header("Access-Control-Expose-Headers", kSnapshotHeader);
    if (!response.body.empty()) res.set_content(response.body, "application/json");
  };
  server_->Get(R"(/.*)", bridge);
  server_->Post(R"(/.*)", bridge);
  server_->Options(R"(/.*)", bridge);
  return *server_;
}

bool Service::listen(const std::string& host, int port, const std::optional<std::string>& ui_dir) {
  auto& svr = server();
  if (ui_dir && !svr.set_mount_point("/ui", *ui_dir)) {
    throw DomainError("UI directory not found: " + *ui_dir);
  }
  return svr.listen(host, port);
}

int Service::bind_any_port(const std::string& host) { return server().bind_to_any_port(host); }

bool Service::listen_after_bind() { return server().listen_after_bind(); }

void Service::wait_until_ready() const {
  if (server_) server_->wait_until_ready();
}

void Service::stop() {
  if (server_) server_->stop();
}

int resolve_port(int requested) {
  if (const char* env = std::getenv("GRIDLINE_PORT")) {
    try {
      std::size_t used = 0;
      const int port = std::stoi(env, &used);
      if (used == std::string(env).size() && port > 0 && port < 65536) return port;
    } catch (const std::exception&) {
    }
  }
  return requested;
}

}  // namespace gridline
