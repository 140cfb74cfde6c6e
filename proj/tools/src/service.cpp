#include "service.hpp"

#include <algorithm>
#include <cctype>

#include <httplib.h>
#include <json.hpp>

#include "rankcount/csv.hpp"
#include "rankcount/error.hpp"
#include "rankcount/synthdata.hpp"

namespace rankcount::tools {

namespace {

using nlohmann::json;

class BadRequest : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& message) {
  send_json(res, status, json{{"error", message}});
}

json stats_json(const SessionStats& s) {
  json out{{"manual", s.manual}, {"implied", s.implied}, {"total", s.total}, {"remaining", s.remaining}};
  out["zeta_mean"] = s.zeta_mean ? json(*s.zeta_mean) : json(nullptr);
  return out;
}

json parse_body(const httplib::Request& req) {
  auto body = json::parse(req.body, nullptr, false);
  if (body.is_discarded()) throw BadRequest("body is not valid JSON");
  if (!body.is_object()) throw BadRequest("body must be a JSON object");
  return body;
}

std::string string_field(const json& body, const char* key) {
  auto it = body.find(key);
  if (it == body.end() || !it->is_string()) throw BadRequest(std::string("field '") + key + "' must be a string");
  return it->get<std::string>();
}

template <typename T>
T integer_field(const json& body, const char* key, T fallback) {
  auto it = body.find(key);
  if (it == body.end()) return fallback;
  if (!it->is_number_integer()) throw BadRequest(std::string("field '") + key + "' must be an integer");
  if constexpr (std::is_unsigned_v<T>) {
    if (it->is_number_unsigned()) return it->get<T>();
    if (it->get<std::int64_t>() < 0) throw BadRequest(std::string("field '") + key + "' must be >= 0");
  }
  return it->get<T>();
}

// Runs a handler body and maps exceptions to status codes.
template <typename Fn>
void guarded(httplib::Response& res, Fn&& fn) {
  try {
    fn();
  } catch (const BadRequest& e) {
    send_error(res, 400, e.what());
  } catch (const DomainError& e) {
    send_error(res, 400, e.what());
  } catch (const json::exception& e) {
    send_error(res, 400, e.what());
  } catch (const std::exception& e) {
    send_error(res, 500, e.what());
  }
}

}  // namespace

std::string content_type_for(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  if (ext == ".pgm") return "image/x-portable-graymap";
  if (ext == ".png") return "image/png";
  if (ext == ".jpg" || ext == ".jpeg") return "image/jpeg";
  if (ext == ".gif") return "image/gif";
  if (ext == ".bmp") return "image/bmp";
  if (ext == ".webp") return "image/webp";
  if (ext == ".svg") return "image/svg+xml";
  return "application/octet-stream";
}

AnnotationService::AnnotationService(ServiceConfig config)
    : config_(std::move(config)), server_(std::make_unique<httplib::Server>()) {
  if (config_.default_cap < 1) throw DomainError("query cap must be >= 1");
  if (config_.manifest) {
    for (const auto& entry : read_manifest(*config_.manifest)) {
      images_[entry.id] = entry.path;
      default_pool_.push_back(entry.id);
    }
  }
  if (config_.static_dir && !server_->set_mount_point("/", config_.static_dir->string())) {
    throw IoError("cannot mount static directory: " + config_.static_dir->string());
  }
  install_routes();
}

AnnotationService::~AnnotationService() { stop(); }

int AnnotationService::bind(const std::string& host, int port) {
  if (port == 0) return server_->bind_to_any_port(host);
  return server_->bind_to_port(host, port) ? port : -1;
}

bool AnnotationService::listen() { return server_->listen_after_bind(); }

void AnnotationService::stop() {
  if (server_) server_->stop();
}

void AnnotationService::install_routes() {
  auto& srv = *server_;

  srv.Post("/sessions", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const json body = req.body.empty() ? json::object() : parse_body(req);
      std::vector<std::string> pool;
      if (auto it = body.find("pool"); it != body.end()) {
        if (!it->is_array()) throw BadRequest("field 'pool' must be an array of ids");
        for (const auto& id : *it) {
          if (!id.is_string()) throw BadRequest("field 'pool' must be an array of ids");
          pool.push_back(id.get<std::string>());
        }
      } else {
        pool = default_pool_;
      }
      if (!images_.empty()) {
        for (const auto& id : pool)
          if (!images_.count(id)) throw BadRequest("pool id '" + id + "' is not in the manifest");
      }
      const int cap = integer_field<int>(body, "cap", config_.default_cap);
      const auto seed = integer_field<std::uint64_t>(body, "seed", 0);
      const std::string id = store_.create(std::move(pool), cap, seed);
      send_json(res, 201, json{{"session_id", id}});
    });
  });

  srv.Get(R"(/sessions/([^/]+)/next)", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      json body;
      const bool found = store_.with_session(req.matches[1], [&](AnnotationSession& s) {
        if (auto pair = s.next_pair()) {
          body = json{{"i", pair->i}, {"j", pair->j}};
        } else {
          body = json{{"done", true}};
        }
      });
      if (!found) return send_error(res, 404, "unknown session");
      send_json(res, 200, body);
    });
  });

  srv.Post(R"(/sessions/([^/]+)/judgments)", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      if (!store_.contains(req.matches[1])) return send_error(res, 404, "unknown session");
      const json body = parse_body(req);
      const std::string i = string_field(body, "i");
      const std::string j = string_field(body, "j");
      auto it = body.find("verdict");
      if (it == body.end() || !it->is_number_integer()) throw BadRequest("field 'verdict' must be -1, 0 or 1");
      const auto verdict = it->get<std::int64_t>();
      if (verdict < -1 || verdict > 1) throw BadRequest("field 'verdict' must be -1, 0 or 1");

      JudgmentOutcome outcome;
      store_.with_session(req.matches[1], [&](AnnotationSession& s) {
        outcome = s.submit(i, j, static_cast<int>(verdict));
      });
      if (outcome.status == JudgmentStatus::conflict) {
        return send_json(res, 409, json{{"witness", outcome.witness}, {"stats", stats_json(outcome.stats)}});
      }
      const char* status = outcome.status == JudgmentStatus::accepted ? "accepted" : "skipped";
      send_json(res, 200, json{{"status", status}, {"stats", stats_json(outcome.stats)}});
    });
  });

  srv.Get(R"(/sessions/([^/]+)/stats)", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      SessionStats stats;
      if (!store_.with_session(req.matches[1], [&](AnnotationSession& s) { stats = s.stats(); })) {
        return send_error(res, 404, "unknown session");
      }
      send_json(res, 200, stats_json(stats));
    });
  });

  srv.Get(R"(/sessions/([^/]+)/export)", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      std::string text;
      if (!store_.with_session(req.matches[1], [&](AnnotationSession& s) { text = s.export_csv(); })) {
        return send_error(res, 404, "unknown session");
      }
      res.status = 200;
      res.set_content(text, "text/csv");
    });
  });

  srv.Get(R"(/images/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      auto it = images_.find(req.matches[1]);
      if (it == images_.end()) return send_error(res, 404, "unknown image");
      std::string bytes;
      try {
        bytes = csv::read_text(it->second);
      } catch (const IoError&) {
        return send_error(res, 404, "image file missing");
      }
      res.status = 200;
      res.set_content(bytes, content_type_for(it->second));
    });
  });
}

}  // namespace rankcount::tools
