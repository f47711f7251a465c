/*
 * Copyright (c) 2026, The dacluster Authors.
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
#include <string_view>

namespace dac {

enum class Errc {
  invalid_argument,
  dimension_mismatch,
  non_finite,
  io_error,
  bad_magic,
  bad_version,
  truncated_payload,
  shape_mismatch,
  empty_file,
  empty_line,
  label_out_of_range,
  too_few_classes,
  empty_class,
  no_labeled_samples,
  divergence,
  degenerate_result,
};

std::string_view errc_name(Errc code) noexcept;

// Every failure raised by the library carries one of the codes above so
// callers (and tests) can tell distinct failure modes apart.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message);

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] void fail(Errc code, const std::string& message);

}  // namespace dac
