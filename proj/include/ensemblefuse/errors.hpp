// Copyright 2026 The ensemblefuse Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ENSEMBLEFUSE_ERRORS_HPP_
#define ENSEMBLEFUSE_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace ensemblefuse {

// Raised for any malformed input: bad files, shape mismatches, out-of-range
// parameters. The CLI maps it to exit code 2.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// I/O failures and numerical breakdowns (e.g. NaN loss). Exit code 3.
class RuntimeError : public std::runtime_error {
 public:
  explicit RuntimeError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ensemblefuse

#endif  // ENSEMBLEFUSE_ERRORS_HPP_
