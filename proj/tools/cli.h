//
// Project smiself - Copyright 2026 The smiself Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef SMISELF_TOOLS_CLI_H_
#define SMISELF_TOOLS_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace smiself::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitSentinel = 1;
inline constexpr int kExitUsage = 2;

/// `args` excludes the program name. `in` and `out` stand in for standard
/// input and output when --input / --output are absent.
int run_cli(const std::vector<std::string> &args, std::istream &in,
            std::ostream &out, std::ostream &err);

}  // namespace smiself::cli

#endif  // SMISELF_TOOLS_CLI_H_
