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

// Seeded self-check suites over tiny random instances. Each suite compares
// the library against an exhaustive computation (brute-force optimum,
// enumeration over environments, explicit set-function differences) and
// reports the first counterexample.

#ifndef VOLEX_VERIFICATION_H_
#define VOLEX_VERIFICATION_H_

#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"

namespace volex {

struct VerifyOptions {
  int instances = 0;  // 0: the suite default
  std::uint64_t seed = 1;
};

struct SuiteResult {
  std::string name;
  int instances = 0;
  int passed = 0;
  // Smallest value / optimum observed (greedy-bound, certificate), or the
  // agreement rate (optimism); NaN when not applicable.
  double min_ratio = std::numeric_limits<double>::quiet_NaN();
  double max_error = 0.0;  // largest absolute deviation checked
  std::string counterexample;  // first failure, empty when all passed
  std::string notes;           // extra per-suite statistics
  double seconds = 0.0;

  bool ok() const { return instances > 0 && passed == instances; }
  std::string Summary() const;
};

// theorem1, monotonicity, ray-sum, greedy-bound, certificate, optimism,
// rsp-equalities.
const std::vector<std::string>& SuiteNames();

int DefaultInstances(std::string_view suite);

// kNotFound for an unknown suite name.
absl::StatusOr<SuiteResult> RunSuite(std::string_view suite,
                                     const VerifyOptions& options);

}  // namespace volex

#endif  // VOLEX_VERIFICATION_H_
