// Copyright 2026 The uqnet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "uqnet/service/http.hpp"

#include <atomic>
#include <condition_variable>
#include <future>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include "httplib.h"

namespace uqnet::service {

using nlohmann::json;

namespace {

std::string random_hex(std::size_t bytes) {
  thread_local std::mt19937_64 rng{std::random_device{}()};
  std::ostringstream out;
  out << std::hex << std::setfill('0');
  for (std::size_t i = 0; i < bytes; i += 8) out << std::setw(16) << rng();
  return out.str().substr(0, 2 * bytes);
}

std::string request_id(const httplib::Request& req) {
  const std::string given = req.get_header_value("X-Request-Id");
  if (!given.empty() && given.size() <= 128) return given;
  return random_hex(8);
}

void send(httplib::Response& res, int status, json body, const std::string& rid) {
  body["request_id"] = rid;
  res.status = status;
  res.set_header("X-Request-Id", rid);
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const json& error, const std::string& rid) {
  send(res, status, error, rid);
}

void send_internal(httplib::Response& res, const std::string& what, const std::string& rid) {
  const std::string error_id = random_hex(8);
  std::cerr << "uqnet: internal error " << error_id << " (request " << rid << "): " << what << std::endl;
  send_error(res, 500,
             {{"code", "internal_error"}, {"message", "internal error"}, {"context", {{"error_id", error_id}}}}, rid);
}

json parse_body(const httplib::Request& req) {
  const std::string type = req.get_header_value("Content-Type");
  if (type.rfind("application/json", 0) != 0) {
    throw Error(ErrorKind::kInvalidArgument, "unsupported_media_type", "request body must be application/json",
                {{"content_type", type}});
  }
  try {
    return json::parse(req.body);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::kParse, "invalid_json", std::string("request body is not valid JSON: ") + e.what(),
                {{"byte", std::to_string(e.byte)}});
  }
}

template <typename Fn>
httplib::Server::Handler guarded(Fn fn, int success = 200) {
  return [fn, success](const httplib::Request& req, httplib::Response& res) {
    const std::string rid = request_id(req);
    try {
      send(res, success, fn(req), rid);
    } catch (const Error& e) {
      if (e.code() == "fit_timeout") {
        send_error(res, 504, error_body(e), rid);
      } else if (e.code() == "unsupported_media_type") {
        send_error(res, 415, error_body(e), rid);
      } else if (http_status(e) == 500) {
        send_internal(res, e.what(), rid);
      } else {
        send_error(res, http_status(e), error_body(e), rid);
      }
    } catch (const std::exception& e) {
      send_internal(res, e.what(), rid);
    }
  };
}

}  // namespace

struct HttpService::Inflight {
  std::mutex mutex;
  std::condition_variable done;
  int running = 0;

  void wait() {
    std::unique_lock lock(mutex);
    done.wait(lock, [this] { return running == 0; });
  }
};

namespace {

// Runs `fit` on its own thread so health checks and other requests keep
// being served; gives up waiting after `timeout`. The fit itself runs to
// completion and is counted in `inflight` until it does.
template <typename Inflight>
json run_with_timeout(std::function<json()> fit, std::chrono::seconds timeout, const std::string& id,
                      const std::shared_ptr<Inflight>& inflight) {
  auto task = std::make_shared<std::packaged_task<json()>>(std::move(fit));
  std::future<json> result = task->get_future();
  {
    std::lock_guard lock(inflight->mutex);
    ++inflight->running;
  }
  std::thread([task, inflight] {
    (*task)();
    std::lock_guard lock(inflight->mutex);
    --inflight->running;
    inflight->done.notify_all();
  }).detach();
  if (result.wait_for(timeout) != std::future_status::ready) {
    throw Error(ErrorKind::kNumerical, "fit_timeout",
                "fit did not finish within " + std::to_string(timeout.count()) + " s",
                {{"id", id}, {"timeout_seconds", std::to_string(timeout.count())}});
  }
  return result.get();
}

std::string body_id(const json& body) {
  return body.is_object() && body.contains("id") && body["id"].is_string() ? body["id"].get<std::string>() : "";
}

}  // namespace

BindAddress BindAddress::parse(const std::string& text) {
  BindAddress out;
  if (text.empty()) return out;
  const auto colon = text.rfind(':');
  if (colon == std::string::npos) {
    out.host = text;
    return out;
  }
  out.host = text.substr(0, colon);
  try {
    std::size_t used = 0;
    out.port = std::stoi(text.substr(colon + 1), &used);
    if (used != text.size() - colon - 1 || out.port < 0 || out.port > 65535) throw std::out_of_range("port");
  } catch (const std::exception&) {
    throw invalid_argument("invalid_bind_address", "bind address must be host:port", {{"value", text}});
  }
  if (out.host.empty()) out.host = "0.0.0.0";
  return out;
}

HttpService::HttpService(Core& core, HttpOptions options)
    : core_(core), options_(options), server_(std::make_unique<httplib::Server>()),
      inflight_(std::make_shared<Inflight>()) {
  const std::size_t threads = std::max<std::size_t>(options_.threads, 8);
  server_->new_task_queue = [threads] { return new httplib::ThreadPool(threads); };
  install_routes();
}

HttpService::~HttpService() {
  stop();
  inflight_->wait();
}

void HttpService::install_routes() {
  auto& s = *server_;
  const auto timeout = options_.fit_timeout;

  s.Get("/healthz", guarded([this](const httplib::Request&) { return core_.health(); }));

  s.Post("/models/gp", guarded(
                           [this, timeout](const httplib::Request& req) {
                             const json body = parse_body(req);
                             return run_with_timeout([this, body] { return core_.fit_gp(body); }, timeout,
                                                     body_id(body), inflight_);
                           },
                           201));

  s.Post("/models/dlm", guarded(
                            [this, timeout](const httplib::Request& req) {
                              const json body = parse_body(req);
                              return run_with_timeout([this, body] { return core_.fit_dlm(body); }, timeout,
                                                      body_id(body), inflight_);
                            },
                            201));

  s.Get(R"(/models/([^/]+)/diagnostics)",
        guarded([this](const httplib::Request& req) { return core_.diagnostics(req.matches[1].str()); }));

  s.Get(R"(/models/([^/]+))", guarded([this](const httplib::Request& req) {
          const std::string id = req.matches[1].str();
          return json{{"id", id}, {"model", core_.get_model(id)}};
        }));

  s.Post("/graphs", guarded(
                        [this](const httplib::Request& req) {
                          const json def = core_.create_graph(parse_body(req));
                          return json{{"id", def.at("id")}, {"graph", def}};
                        },
                        201));

  s.Post(R"(/graphs/([^/]+)/forecast)", guarded([this](const httplib::Request& req) {
           return core_.forecast(req.matches[1].str(), parse_body(req));
         }));

  s.Post(R"(/graphs/([^/]+)/scenario)", guarded([this](const httplib::Request& req) {
           return core_.scenario(req.matches[1].str(), parse_body(req));
         }));

  s.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
    if (!res.body.empty()) return;
    const std::string rid = request_id(req);
    if (res.status == 404) {
      send_error(res, 404, {{"code", "route_not_found"}, {"message", "no such endpoint"}, {"context", {{"path", req.path}}}},
                 rid);
    } else if (res.status == 405) {
      send_error(res, 405, {{"code", "method_not_allowed"}, {"message", "method not allowed"}, {"context", {{"path", req.path}}}},
                 rid);
    }
  });
}

int HttpService::bind(const BindAddress& address) {
  if (address.port == 0) {
    const int port = server_->bind_to_any_port(address.host);
    if (port < 0) throw Error(ErrorKind::kInternal, "bind_failed", "could not bind " + address.host);
    return port;
  }
  if (!server_->bind_to_port(address.host, address.port)) {
    throw Error(ErrorKind::kInternal, "bind_failed",
                "could not bind " + address.host + ":" + std::to_string(address.port),
                {{"host", address.host}, {"port", std::to_string(address.port)}});
  }
  return address.port;
}

bool HttpService::serve() { return server_->listen_after_bind(); }

void HttpService::stop() {
  if (server_ && server_->is_running()) server_->stop();
}

}  // namespace uqnet::service
