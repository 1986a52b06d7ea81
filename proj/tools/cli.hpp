/*
 Copyright 2026 The ergodraw Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

// Command-line front end. run_cli() is the whole program minus process exit so
// it can be driven in-process.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ergodraw::cli {

enum ExitCode : int { ok = 0, failure = 1, invalid = 2, io_failure = 3, numerical_failure = 4 };

int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err);

/// Flat `key = value` lines, `#` starts a comment. Keys may carry a leading `--`.
std::vector<std::string> config_arguments(const std::string& text);

}  // namespace ergodraw::cli
