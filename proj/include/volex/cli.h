// Copyright 2026 The Volex Authors.
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

// `volex` command line: run, verify, env.

#ifndef VOLEX_CLI_H_
#define VOLEX_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace volex {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 1;
inline constexpr int kExitBudgetExhausted = 2;
inline constexpr int kExitVerifyFailed = 3;
inline constexpr int kExitUsage = 64;

// args[0] is the program name.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

}  // namespace volex

#endif  // VOLEX_CLI_H_
