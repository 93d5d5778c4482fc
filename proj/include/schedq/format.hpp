// Copyright 2026 The schedq Authors.
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

#ifndef SCHEDQ_FORMAT_HPP_
#define SCHEDQ_FORMAT_HPP_

#include <string>

namespace schedq {

// Shortest-general form with 17 significant digits, '.' decimal point, no
// locale: bit-stable across runs and platforms.
std::string format_double(double v);

// Shortest form that reads back to the same double; for cell labels.
std::string format_label(double v);

}  // namespace schedq

#endif  // SCHEDQ_FORMAT_HPP_
