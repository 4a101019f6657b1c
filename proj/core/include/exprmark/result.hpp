// Copyright 2026 The exprmark Authors
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

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace exprmark {

/// Either a value or a non-empty list of itemized error messages.
template <class T>
class Result {
 public:
  Result(T value) : value_(std::move(value)) {}

  static Result failure(std::vector<std::string> errors) {
    if (errors.empty()) errors.emplace_back("unspecified error");
    Result r;
    r.errors_ = std::move(errors);
    return r;
  }
  static Result failure(std::string error) {
    return failure(std::vector<std::string>{std::move(error)});
  }

  bool ok() const { return value_.has_value(); }
  explicit operator bool() const { return ok(); }

  const T& value() const& {
    check();
    return *value_;
  }
  T& value() & {
    check();
    return *value_;
  }
  T&& value() && {
    check();
    return std::move(*value_);
  }
  const T* operator->() const { return &value(); }
  const T& operator*() const { return value(); }

  const std::vector<std::string>& errors() const { return errors_; }

  std::string error_text() const {
    std::string out;
    for (const auto& e : errors_) {
      if (!out.empty()) out += "; ";
      out += e;
    }
    return out;
  }

 private:
  Result() = default;
  void check() const {
    if (!value_) throw std::runtime_error(error_text());
  }

  std::optional<T> value_;
  std::vector<std::string> errors_;
};

}  // namespace exprmark
