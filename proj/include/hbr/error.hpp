/*
 * Copyright 2026 The hbr Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <stdexcept>
#include <string>

namespace hbr {

/// Base class for every error raised by the library.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A model or test parameter lies outside its admissible range.
class parameter_error : public error {
 public:
  using error::error;
};

/// 1/bump_width is not an integer, so the window grid does not exist.
class grid_error : public parameter_error {
 public:
  using parameter_error::parameter_error;
};

/// Fewer samples than windows, or data length inconsistent with the grid.
class size_error : public parameter_error {
 public:
  using parameter_error::parameter_error;
};

/// Argument outside the domain of a closed-form expression.
class domain_error : public parameter_error {
 public:
  using parameter_error::parameter_error;
};

/// A moment of the likelihood ratio does not exist.
class existence_error : public domain_error {
 public:
  using domain_error::domain_error;
};

/// A window holds too few points for the requested statistic.
class degenerate_window_error : public parameter_error {
 public:
  using parameter_error::parameter_error;
};

/// The query has no known answer (e.g. adaptive lower bounds outside DMR).
class unsupported_error : public error {
 public:
  using error::error;
};

/// Malformed input data.
class parse_error : public error {
 public:
  using error::error;
};

}  // namespace hbr
