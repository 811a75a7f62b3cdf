// Copyright 2026 The qmsroot Authors
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

#include <string_view>

namespace qmsroot {

/// Evaluates a real arithmetic expression in binary64. Grammar: numbers,
/// constants pi and e, + - * / ^ (right associative), parentheses and the
/// functions exp, log, sqrt. Throws Error(InvalidInput) with the offending
/// column on malformed input or a non-finite result.
double eval_expression(std::string_view text);

}  // namespace qmsroot
