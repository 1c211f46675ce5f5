/*
   Copyright 2026 The divop Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

/**
 * @file cli.hpp
 * @brief The divop command line: classify, scan, check, dualize, cohomology.
 *
 * Exit codes: 0 success, 1 verification failure, 2 usage or configuration
 * error. Every option can also be set through a DIVOP_* environment
 * variable (DIVOP_P, DIVOP_N, DIVOP_FORMAT, ...); flags win over the
 * environment.
 */

#ifndef DIVOP_CLI_HPP
#define DIVOP_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace divop {

inline constexpr int exit_ok = 0;
inline constexpr int exit_verification_failed = 1;
inline constexpr int exit_usage = 2;

/// Runs one command line (without the program name).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace divop

#endif  // DIVOP_CLI_HPP
