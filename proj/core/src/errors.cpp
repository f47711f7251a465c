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

#include "dac/errors.hpp"

namespace dac {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_argument: return "invalid_argument";
    case Errc::dimension_mismatch: return "dimension_mismatch";
    case Errc::non_finite: return "non_finite";
    case Errc::io_error: return "io_error";
    case Errc::bad_magic: return "bad_magic";
    case Errc::bad_version: return "bad_version";
    case Errc::truncated_payload: return "truncated_payload";
    case Errc::shape_mismatch: return "shape_mismatch";
    case Errc::empty_file: return "empty_file";
    case Errc::empty_line: return "empty_line";
    case Errc::label_out_of_range: return "label_out_of_range";
    case Errc::too_few_classes: return "too_few_classes";
    case Errc::empty_class: return "empty_class";
    case Errc::no_labeled_samples: return "no_labeled_samples";
    case Errc::divergence: return "divergence";
    case Errc::degenerate_result: return "degenerate_result";
  }
  return "unknown";
}

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

void fail(Errc code, const std::string& message) { throw Error(code, message); }

}  // namespace dac
