// Copyright 2026 The DCN Authors
// SPDX-License-Identifier: Apache-2.0

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "dcn/check/fairness.hpp"
#include "dcn/core/rng.hpp"
#include "dcn/core/types.hpp"
#include "dcn/crypto/hash.hpp"
#include "dcn/crypto/shamir.hpp"
#include "dcn/protocol/pi_init.hpp"
#include "dcn/protocol/pi_ta.hpp"
#include "dcn/sim/config.hpp"
#include "dcn/sim/event_log.hpp"
#include "dcn/sim/kernel.hpp"
#include "dcn/suites/suites.hpp"

namespace py = pybind11;

namespace {

using dcn::Tick;

dcn::crypto::Bytes to_bytes(const py::bytes& b) {
  const std::string s = b;
  return {s.begin(), s.end()};
}

py::bytes from_bytes(const dcn::crypto::Bytes& b) {
  return py::bytes(reinterpret_cast<const char*>(b.data()), b.size());
}

dcn::sim::ScenarioConfig parse(const std::string& json_text,
                               std::optional<std::uint64_t> seed) {
  auto cfg = dcn::sim::parse_scenario(json_text);
  if (seed) cfg.seed = *seed;
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_dcn, m) {
  m.doc() = "Decentralized clock network simulator bindings";

  py::register_exception<dcn::ConfigError>(m, "ConfigError", PyExc_ValueError);

  m.def(
      "validate_scenario",
      [](const std::string& json_text) {
        return dcn::sim::to_json(dcn::sim::resolve(dcn::sim::parse_scenario(json_text)));
      },
      py::arg("json_text"), "Parses, validates and resolves a scenario; returns JSON.");

  m.def(
      "run_scenario",
      [](const std::string& json_text, std::optional<std::uint64_t> seed) {
        const auto cfg = parse(json_text, seed);
        py::gil_scoped_release release;
        return dcn::check::report_json(dcn::sim::run_scenario(cfg).report);
      },
      py::arg("json_text"), py::arg("seed") = py::none(),
      "Simulates one scenario and returns the fairness report as JSON.");

  m.def(
      "simulate",
      [](const std::string& json_text, std::optional<std::uint64_t> seed) {
        const auto cfg = dcn::sim::resolve(parse(json_text, seed));
        py::gil_scoped_release release;
        const auto log = dcn::sim::simulate(cfg);
        return std::make_pair(log.to_jsonl(), log.digest_hex());
      },
      py::arg("json_text"), py::arg("seed") = py::none(),
      "Simulates one scenario; returns (event log JSONL, log digest hex).");

  m.def(
      "analyze_log",
      [](const std::string& jsonl) {
        return dcn::check::report_json(
            dcn::check::analyze(dcn::sim::EventLog::from_jsonl(jsonl)));
      },
      py::arg("jsonl"), "Checks an event log and returns the report as JSON.");

  m.def("suite_names", &dcn::suites::suite_names);
  m.def(
      "run_suite",
      [](const std::string& name, std::size_t seeds, std::size_t jobs) {
        py::gil_scoped_release release;
        return dcn::suites::run_suite(name, seeds, jobs).to_json();
      },
      py::arg("name"), py::arg("seeds") = 10, py::arg("jobs") = 1,
      "Runs a built-in suite and returns its summary as JSON.");

  m.def(
      "shamir_split",
      [](const py::bytes& secret, std::size_t n, std::size_t k, std::uint64_t seed) {
        dcn::Rng rng(seed);
        std::vector<py::bytes> out;
        for (const auto& s : dcn::crypto::shamir_split(to_bytes(secret), n, k, rng)) {
          out.push_back(from_bytes(s));
        }
        return out;
      },
      py::arg("secret"), py::arg("n"), py::arg("k"), py::arg("seed") = 0,
      "Splits a secret into n shares; share i belongs to evaluation point i+1.");
  m.def(
      "shamir_reconstruct",
      [](const std::vector<std::pair<std::uint32_t, py::bytes>>& shares, std::size_t k) {
        std::vector<dcn::crypto::IndexedShare> in;
        for (const auto& [index, payload] : shares) in.push_back({index, to_bytes(payload)});
        return from_bytes(dcn::crypto::shamir_reconstruct(in, k));
      },
      py::arg("shares"), py::arg("k"), "Reconstructs from (index, payload) pairs.");

  m.def(
      "hash_instance",
      [](const py::bytes& tx, const py::bytes& nonce) {
        return dcn::crypto::hash_instance(to_bytes(tx), to_bytes(nonce)).hex();
      },
      py::arg("tx"), py::arg("nonce"));

  m.def(
      "init_select",
      [](std::vector<Tick> values, std::size_t n, std::size_t f) {
        return dcn::protocol::init_select(std::move(values), dcn::GroupParams{n, f});
      },
      py::arg("values"), py::arg("n"), py::arg("f"),
      "Initial value chosen from the first n - f timestamps.");

  m.def(
      "choose_rounding",
      [](std::int64_t num, std::int64_t den) {
        const auto r = dcn::protocol::ta_choose_rounding(num, den);
        return py::make_tuple(r.alpha, r.beta, r.beta_prime, r.b);
      },
      py::arg("num"), py::arg("den"), "Returns (alpha, beta, beta_prime, b).");

  m.def("median_index", &dcn::check::median_index, py::arg("n"), py::arg("f"));
  m.def("median_bounds", &dcn::check::median_bounds, py::arg("sorted_receipts"),
        py::arg("n"), py::arg("f"), py::arg("delta"));
  m.def("check_median_validity", &dcn::check::check_median_validity,
        py::arg("sorted_receipts"), py::arg("n"), py::arg("f"), py::arg("tau"),
        py::arg("delta"));
  m.def("achieved_delta", &dcn::check::achieved_delta, py::arg("sorted_receipts"),
        py::arg("n"), py::arg("f"), py::arg("tau"));
  m.def("sync_bounds", &dcn::check::sync_bounds, py::arg("sorted_receipts"), py::arg("n"),
        py::arg("f"));
}
