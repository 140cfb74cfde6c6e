#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include "rankcount/annotate.hpp"

namespace httplib {
class Server;
}

namespace rankcount::tools {

struct ServiceConfig {
  // Image files served under /images/{id}; also the default session pool.
  std::optional<std::filesystem::path> manifest;
  // Static files mounted at / when set.
  std::optional<std::filesystem::path> static_dir;
  int default_cap = kDefaultQueryCap;
};

/// The annotation HTTP API bound to one session store.
///
///   POST /sessions                 {pool?, cap?, seed?} -> 201 {session_id}
///   GET  /sessions/{id}/next       -> {i, j} | {done: true}
///   POST /sessions/{id}/judgments  {i, j, verdict} -> {status, stats} | 409 {witness, stats}
///   GET  /sessions/{id}/stats      -> {manual, implied, total, remaining, zeta_mean}
///   GET  /sessions/{id}/export     -> text/csv pair file
///   GET  /images/{id}              -> image bytes
///
/// Unknown sessions and images answer 404, malformed bodies and invalid
/// judgments 400. Every error body is {"error": message}.
class AnnotationService {
 public:
  /// Throws IoError when the manifest cannot be read.
  explicit AnnotationService(ServiceConfig config);
  ~AnnotationService();

  AnnotationService(const AnnotationService&) = delete;
  AnnotationService& operator=(const AnnotationService&) = delete;

  httplib::Server& server() { return *server_; }

  /// Binds host:port (port 0 picks a free one) and returns the bound port,
  /// or -1 on failure.
  int bind(const std::string& host, int port);
  /// Serves until stop() is called. Requires a successful bind().
  bool listen();
  void stop();

 private:
  void install_routes();

  ServiceConfig config_;
  std::map<std::string, std::filesystem::path> images_;
  std::vector<std::string> default_pool_;
  SessionStore store_;
  std::unique_ptr<httplib::Server> server_;
};

/// Content type for an image path, by extension.
std::string content_type_for(const std::filesystem::path& path);

}  // namespace rankcount::tools
