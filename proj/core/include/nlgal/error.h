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

#ifndef NLGAL_ERROR_H_
#define NLGAL_ERROR_H_

#include <stdexcept>
#include <string>

namespace nlgal {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Input file or record could not be parsed.
class ParseError : public Error {
 public:
  using Error::Error;
};

// A model backend rejected a request or returned a malformed response.
class BackendError : public Error {
 public:
  using Error::Error;
};

// A remote backend could not be reached.
class ConnectionError : public BackendError {
 public:
  using BackendError::BackendError;
};

}  // namespace nlgal

#endif  // NLGAL_ERROR_H_
