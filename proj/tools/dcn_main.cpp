// Copyright 2026 The DCN Authors
// SPDX-License-Identifier: Apache-2.0

#include <iostream>

#include "dcn/cli/cli.hpp"

int main(int argc, char** argv) {
  return dcn::cli::dcn_main(argc, argv, std::cout, std::cerr);
}
