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

#pragma once

#include <chrono>
#include <memory>
#include <string>

#include "uqnet/service/core.hpp"

namespace httplib {
class Server;
}

namespace uqnet::service {

struct HttpOptions {
  std::chrono::seconds fit_timeout{300};
  std::size_t threads = 16;
};

// "host:port"; the port defaults to 8080.
struct BindAddress {
  std::string host = "127.0.0.1";
  int port = 8080;
  static BindAddress parse(const std::string& text);
};

class HttpService {
 public:
  HttpService(Core& core, HttpOptions options = {});
  ~HttpService();
  HttpService(const HttpService&) = delete;
  HttpService& operator=(const HttpService&) = delete;

  // Port 0 binds an ephemeral port. Returns the bound port.
  int bind(const BindAddress& address);
  // Blocks until stop().
  bool serve();
  // Stops accepting requests. Fits that outlived their timeout keep running;
  // the destructor waits for them.
  void stop();

 private:
  struct Inflight;

  void install_routes();

  Core& core_;
  HttpOptions options_;
  std::unique_ptr<httplib::Server> server_;
  std::shared_ptr<Inflight> inflight_;
};

}  // namespace uqnet::service
