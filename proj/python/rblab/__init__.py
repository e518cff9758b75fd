# Copyright 2026 The rblab Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Randomized benchmarking simulator with gate-dependent noise and gauge analysis."""

from ._rblab import (
    DimensionError,
    FitError,
    FitResult,
    GateSet,
    RBConfig,
    RBEstimate,
    SpectralAssumptionError,
    agsi,
    brute_force_pm,
    counterexample,
    counterexample_gate_agi,
    delta_diamond,
    epsilon_min_search,
    estimate_r,
    exact_decay,
    fit_decay,
    gamma,
    l_map,
    predicted_decay,
    run_config,
    run_rb,
    validate_config,
    wallman_gauge,
)

__all__ = [
    "DimensionError",
    "FitError",
    "FitResult",
    "GateSet",
    "RBConfig",
    "RBEstimate",
    "SpectralAssumptionError",
    "agsi",
    "brute_force_pm",
    "counterexample",
    "counterexample_gate_agi",
    "delta_diamond",
    "epsilon_min_search",
    "estimate_r",
    "exact_decay",
    "fit_decay",
    "gamma",
    "l_map",
    "predicted_decay",
    "run_config",
    "run_rb",
    "validate_config",
    "wallman_gauge",
]
