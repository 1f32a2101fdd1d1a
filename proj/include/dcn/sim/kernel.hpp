// Copyright 2026 The DCN Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

#include "dcn/check/fairness.hpp"
#include "dcn/sim/config.hpp"
#include "dcn/sim/event_log.hpp"

namespace dcn::sim {

struct KernelLimits {
  // Hard cap on processed events; a run that hits it is reported stalled.
  std::uint64_t max_events = 50'000'000;
};

/// Runs one scenario to quiescence. Resolves presets first, so the
/// result is a function of the config alone.
EventLog simulate(const ScenarioConfig& config, KernelLimits limits = {});

struct RunResult {
  ScenarioConfig config;  // resolved
  EventLog log;
  check::FairnessReport report;
};

RunResult run_scenario(const ScenarioConfig& config, KernelLimits limits = {});

}  // namespace dcn::sim
