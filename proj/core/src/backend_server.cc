// Copyright 2026 The nlgal Authors.
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

#include "nlgal/backend_server.h"

#include <httplib.h>

#include "nlgal/error.h"
#include "nlgal/protocol.h"

namespace nlgal {

struct BackendServer::Impl {
  explicit Impl(Backend& b) : backend(b) {}
  Backend& backend;
  std::mutex mu;  // backends are not required to be reentrant
  httplib::Server server;
};

BackendServer::BackendServer(Backend& backend) : impl_(std::make_unique<Impl>(backend)) {
  for (const char* endpoint : {"/capabilities", "/finetune", "/generate", "/embed", "/score"}) {
    const std::string path = endpoint;
    impl_->server.Post(path, [this, path](const httplib::Request& req, httplib::Response& res) {
      protocol::Reply reply;
      {
        std::lock_guard lock(impl_->mu);
        reply = protocol::dispatch(impl_->backend, path, req.body);
      }
      res.status = reply.status;
      res.set_content(reply.body.dump(), "application/json");
    });
  }
}

BackendServer::~BackendServer() { stop(); }

int BackendServer::bind(const std::string& host, int port) {
  if (port == 0) {
    const int bound = impl_->server.bind_to_any_port(host);
    if (bound < 0) throw Error("cannot bind backend server on " + host);
    return bound;
  }
  if (!impl_->server.bind_to_port(host, port)) {
    throw Error("cannot bind backend server on " + host + ":" + std::to_string(port));
  }
  return port;
}

void BackendServer::serve() { impl_->server.listen_after_bind(); }

void BackendServer::stop() {
  if (impl_->server.is_running()) impl_->server.stop();
}

void BackendServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace nlgal
