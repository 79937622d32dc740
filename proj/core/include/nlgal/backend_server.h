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

#ifndef NLGAL_BACKEND_SERVER_H_
#define NLGAL_BACKEND_SERVER_H_

#include <memory>
#include <string>

#include "nlgal/backend.h"

namespace nlgal {

// Exposes any Backend over the HTTP wire protocol.
class BackendServer {
 public:
  explicit BackendServer(Backend& backend);
  ~BackendServer();
  BackendServer(const BackendServer&) = delete;
  BackendServer& operator=(const BackendServer&) = delete;

  // Binds to `port` (0 picks a free port) and returns the bound port.
  int bind(const std::string& host, int port);
  // Blocks serving requests until stop() is called.
  void serve();
  void stop();
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace nlgal

#endif  // NLGAL_BACKEND_SERVER_H_
