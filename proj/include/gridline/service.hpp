#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "gridline/fault_tree.hpp"
#include "gridline/network.hpp"

namespace httplib {
class Server;
}

namespace gridline {

/// Transport-independent request, as the HTTP layer hands it over.
struct ApiRequest {
  std::string method;  // "GET", "POST", "OPTIONS"
  std::string path;
  std::map<std::string, std::string> query;
  std::string body;
  /// Value of the X-Snapshot-Version request header, if sent.
  std::optional<std::string> snapshot_version;
};

struct ApiResponse {
  int status = 200;
  std::string body;
  std::uint64_t snapshot_version = 0;
};

inline constexpr const char* kSnapshotHeader = "X-Snapshot-Version";

/// Stateless JSON analyses over an immutable, versioned snapshot. Handlers may
/// run concurrently; POST /network swaps in a new snapshot atomically.
class Service {
 public:
  Service(TransitNetwork network, FaultTree tree);
  ~Service();

  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  ApiResponse handle(const ApiRequest& request);

  std::uint64_t version() const;

  /// Blocks serving HTTP until stop() is called. Static files under ui_dir,
  /// when given, are mounted at /ui.
  bool listen(const std::string& host, int port, const std::optional<std::string>& ui_dir = {});
  /// Binds to any free port and returns it; serve with listen_after_bind().
  int bind_any_port(const std::string& host);
  bool listen_after_bind();
  void wait_until_ready() const;
  void stop();

 private:
  struct Snapshot {
    std::uint64_t version;
    TransitNetwork network;
    FaultTree tree;
  };

  std::shared_ptr<const Snapshot> current() const;
  ApiResponse dispatch(const ApiRequest& request, const Snapshot& snapshot) const;
  ApiResponse replace_network(const ApiRequest& request);
  httplib::Server& server();

  mutable std::mutex mutex_;
  std::shared_ptr<const Snapshot> snapshot_;
  std::unique_ptr<httplib::Server> server_;
};

/// GRIDLINE_PORT overrides the requested port when set to a valid number.
int resolve_port(int requested);

}  // namespace gridline
