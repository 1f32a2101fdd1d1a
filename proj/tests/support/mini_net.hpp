// Copyright 2026 The DCN Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "dcn/sim/random_net.hpp"

namespace dcn::testing {

using MiniNet = sim::RandomOrderNet;

}  // namespace dcn::testing
