// Copyright 2026 The DCN Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dcn/check/fairness.hpp"
#include "dcn/sim/config.hpp"
#include "dcn/sim/event_log.hpp"

namespace dcn::suites {

struct LabeledScenario {
  std::string label;
  sim::ScenarioConfig config;
};

struct RunOutcome {
  std::string label;
  sim::ScenarioConfig config;  // resolved
  check::FairnessReport report;
  std::optional<sim::EventLog> log;  // kept only on request
  std::string error;                 // non-empty if the run threw
};

/// Suite names accepted by `run_suite`, in a fixed order.
const std::vector<std::string>& suite_names();
bool is_matrix_suite(std::string_view name);

/// Scenario list of a matrix suite (theorem1, median-validity-sync,
/// median-validity-async, async-lower-bound); `seeds` seeds per scenario.
std::vector<LabeledScenario> matrix_scenarios(std::string_view suite,
                                              std::size_t seeds);

/// Runs scenarios on `jobs` worker threads. Results come back in input
/// order; `on_done` is invoked from the calling thread in that order.
std::vector<RunOutcome> run_all(
    const std::vector<LabeledScenario>& scenarios, std::size_t jobs,
    const std::function<void(const RunOutcome&)>& on_done = {},
    bool keep_logs = false);

struct SuiteSummary {
  std::string suite;
  bool passed = true;
  std::size_t runs = 0;
  std::size_t violations = 0;
  std::map<std::string, double> metrics;
  std::vector<std::string> failures;  // first few, for diagnostics

  void fail(std::string why);
  std::string to_json() const;
};

/// Suite-specific verdict over finished matrix runs.
SuiteSummary summarize_matrix(std::string_view suite,
                              const std::vector<RunOutcome>& outcomes);

// ---- Stand-alone property suites -------------------------------------

struct AbaStats {
  std::size_t runs = 0;
  double mean_phases = 0;
  std::uint32_t max_phases = 0;
  std::size_t disagreements = 0;
  std::size_t undecided = 0;
  std::size_t validity_failures = 0;
};

/// Binary agreement with the ideal coin at (n, f) under random message
/// order. Even runs: all nodes honest with split inputs. Odd runs: f
/// equivocating byzantine nodes and split honest inputs.
AbaStats aba_expected_rounds(std::size_t runs, std::uint64_t seed,
                             std::size_t n = 4, std::size_t f = 1);

/// Extra rounds allowed on top of ceil(log2(max(1, spread) / eps)).
inline constexpr std::uint32_t kAaRoundSlack = 2;

struct AaStats {
  std::size_t runs = 0;
  std::size_t gap_failures = 0;
  std::size_t containment_failures = 0;
  std::size_t round_bound_failures = 0;
  std::size_t missing_outputs = 0;
  std::uint32_t max_excess = 0;  // max(rounds - ceil(log2(spread/eps)))
};

/// ceil(log2(max(1, spread) / (num/den))) computed exactly.
std::uint32_t aa_log_bound(std::int64_t spread, std::int64_t eps_num,
                           std::int64_t eps_den);

/// Approximate agreement on its own: honest inputs spanning each spread,
/// byzantine nodes silent, random in the honest range, or equivocating.
AaStats aa_contract(const std::vector<std::int64_t>& spreads,
                    std::size_t seeds_per_spread, std::uint64_t seed);

struct CryptoStats {
  std::size_t shamir_subsets = 0;
  std::size_t shamir_failures = 0;
  std::vector<double> chi_square_p;  // one per tested distribution
  double min_p = 1.0;
  std::size_t fuzz_operations = 0;
  std::size_t forgeries = 0;
};

CryptoStats crypto_properties(std::uint64_t seed, std::size_t trials = 10'000,
                              std::size_t fuzz_ops = 100'000);

struct ComplexityPoint {
  std::int64_t spread = 0;
  std::size_t runs = 0;
  double mean_rounds = 0;
  std::uint32_t max_rounds = 0;
  std::size_t delivered = 0;
  std::size_t violations = 0;
};

struct LinearFit {
  double slope = 0;
  double intercept = 0;
  double r2 = 0;
};

/// Sweeps receipt spreads. Synchronous mode sets delta_ext to the spread;
/// both modes use an equivocating adversary so honest inputs to
/// approximate agreement actually differ.
std::vector<ComplexityPoint> rounds_complexity(
    const std::vector<std::int64_t>& spreads, std::size_t seeds,
    std::size_t jobs, bool synchronous, std::size_t n = 4);

/// Least squares of mean rounds against log2(offset + spread).
LinearFit fit_log2(const std::vector<ComplexityPoint>& points, double offset);

std::vector<std::int64_t> default_spreads();

/// Runs any named suite end to end. `on_run` sees each matrix run.
SuiteSummary run_suite(std::string_view name, std::size_t seeds,
                       std::size_t jobs,
                       const std::function<void(const RunOutcome&)>& on_run = {});

}  // namespace dcn::suites
