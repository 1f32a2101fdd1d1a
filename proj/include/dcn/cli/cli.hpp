// Copyright 2026 The DCN Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>

namespace dcn::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitViolations = 1;
inline constexpr int kExitConfig = 2;

/// Entry point of the `dcn` tool. Returns the process exit code.
int dcn_main(int argc, const char* const* argv, std::ostream& out,
             std::ostream& err);

}  // namespace dcn::cli
