// Copyright 2026 The markovsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace markovsim::cli {

inline constexpr const char *kVersion = "0.1.0";

/// Runs one subcommand. `args` excludes the program name. Returns the exit
/// code: 0 success, 2 configuration error, 3 budget exceeded, 4 numerical failure.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

int main(int argc, char **argv);

/// Git-style blob hash: sha1("blob <size>\0" + content), lowercase hex.
std::string git_blob_sha1(const std::string &content);

}  // namespace markovsim::cli
