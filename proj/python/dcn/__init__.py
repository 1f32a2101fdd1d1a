# Copyright 2026 The DCN Authors
# SPDX-License-Identifier: Apache-2.0
"""Python interface to the decentralized clock network simulator.

The heavy lifting happens in the compiled ``_dcn`` extension; this module
converts its JSON results into plain dictionaries.
"""

import json

from . import _dcn
from ._dcn import (
    ConfigError,
    achieved_delta,
    check_median_validity,
    choose_rounding,
    hash_instance,
    init_select,
    median_bounds,
    median_index,
    shamir_reconstruct,
    shamir_split,
    suite_names,
    sync_bounds,
)

__all__ = [
    "ConfigError",
    "achieved_delta",
    "analyze_log",
    "check_median_validity",
    "choose_rounding",
    "hash_instance",
    "init_select",
    "median_bounds",
    "median_index",
    "run_scenario",
    "run_suite",
    "shamir_reconstruct",
    "shamir_split",
    "simulate",
    "suite_names",
    "sync_bounds",
    "validate_scenario",
]


def _text(scenario):
    return scenario if isinstance(scenario, str) else json.dumps(scenario)


def validate_scenario(scenario):
    """Returns the resolved scenario as a dict. Raises ConfigError."""
    return json.loads(_dcn.validate_scenario(_text(scenario)))


def run_scenario(scenario, seed=None):
    """Simulates one scenario (dict or JSON text) and returns its report."""
    return json.loads(_dcn.run_scenario(_text(scenario), seed))


def simulate(scenario, seed=None):
    """Returns (event log records, log digest hex) for one run."""
    jsonl, digest = _dcn.simulate(_text(scenario), seed)
    return [json.loads(line) for line in jsonl.splitlines() if line], digest


def analyze_log(records):
    """Checks an event log given as JSONL text or a list of record dicts."""
    if not isinstance(records, str):
        records = "".join(json.dumps(r) + "\n" for r in records)
    return json.loads(_dcn.analyze_log(records))


def run_suite(name, seeds=10, jobs=1):
    """Runs a built-in suite and returns its summary dict."""
    return json.loads(_dcn.run_suite(name, seeds, jobs))
