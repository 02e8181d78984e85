// SPDX-License-Identifier: Apache-2.0
//
// tworay-qmkp: worst-case two-ray link budgets and frequency assignment
// Copyright (C) 2026 The tworay-qmkp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef TWORAY_TOOLS_CLI_HPP
#define TWORAY_TOOLS_CLI_HPP

#include <ostream>
#include <span>
#include <string>

namespace tworay::cli {

/// Runs the command line `args` (without the program name). Data goes to
/// `out` unless --out names a file; diagnostics go to `err`. Returns the
/// process exit code: 0 on success, 1 on a failed computation or bad input
/// file, 2 on a usage error.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

} // namespace tworay::cli

#endif // TWORAY_TOOLS_CLI_HPP
