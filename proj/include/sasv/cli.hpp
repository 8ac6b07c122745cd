// Copyright 2026  The sasvkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef SASV_CLI_HPP_
#define SASV_CLI_HPP_

#include <iosfwd>
#include <string>
#include <vector>

namespace sasv::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitInternal = 1,
  kExitUsage = 2,      // bad flags, missing or unreadable files
  kExitData = 3,       // input violates a data contract
  kExitNumerical = 4,  // solver failure
};

/// Runs one command line. args[0] is the program name. Reports go to `out`
/// unless --out names a file; diagnostics go to `err`.
int Run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace sasv::cli

#endif  // SASV_CLI_HPP_
