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

import json

import numpy as np
import pytest

import rblab


def test_gateset_shapes_and_words():
    gs = rblab.GateSet.coherent_z(0.1)
    assert gs.size == 24
    assert gs.error_model == "coherent_z"
    ptm = gs.imperfect(3)
    assert ptm.shape == (4, 4)
    np.testing.assert_allclose(ptm[0], [1.0, 0.0, 0.0, 0.0], atol=1e-12)
    assert gs.word(0) == []
    with pytest.raises(IndexError):
        gs.imperfect(24)


def test_depolarizing_closed_forms():
    lam = 0.99
    gs = rblab.GateSet.depolarizing(lam)
    lengths = [1, 2, 10, 100]
    expected = [0.5 + 0.5 * lam ** (m + 1) for m in lengths]
    np.testing.assert_allclose(rblab.exact_decay(gs, lengths), expected, atol=1e-12)
    assert rblab.agsi(gs) == pytest.approx(0.005, abs=1e-12)
    _, r_gamma = rblab.gamma(gs)
    assert r_gamma == pytest.approx(0.005, abs=1e-12)


def test_brute_force_matches_exact_decay():
    gs = rblab.GateSet.general([0.001, 0.005, 0.1], [0.004, 0.003, 0.1], 0.99995)
    for m in (1, 2):
        assert rblab.brute_force_pm(gs, m) == pytest.approx(rblab.exact_decay(gs, [m])[0], abs=1e-12)


def test_fit_recovers_synthetic_first_order_decay():
    m = np.arange(1, 200, 5, dtype=float)
    values = 0.5 + (0.4 + 0.001 * m) * 0.95**m
    fit = rblab.fit_decay(m.tolist(), values.tolist(), "first")
    assert fit.c == pytest.approx(0.001, abs=1e-6)
    assert fit.p == pytest.approx(0.95, abs=1e-9)
    with pytest.raises(ValueError):
        rblab.fit_decay(m.tolist(), values.tolist(), "second")


def test_estimate_is_seeded_and_reproducible():
    gs = rblab.GateSet.coherent_z(0.1)
    cfg = rblab.RBConfig()
    cfg.lengths = [1, 101, 201, 301, 401]
    cfg.k_per_length = 20
    cfg.repeats = 3
    a = rblab.estimate_r(gs, cfg, "zeroth")
    b = rblab.estimate_r(gs, cfg, "zeroth")
    assert a.r_mean == b.r_mean
    assert len(a.fits) + a.failures == 3


def test_wallman_gauge_matches_r_gamma():
    gs = rblab.GateSet.coherent_z(0.1)
    w = rblab.wallman_gauge(gs)
    assert w["residual"] < 1e-8
    assert abs(w["epsilon_in_gauge"] - w["r_gamma"]) < 1e-8
    with pytest.raises(rblab.SpectralAssumptionError):
        rblab.wallman_gauge(rblab.GateSet.perfect())


def test_gauge_preserves_l_map_spectrum():
    gs = rblab.GateSet.general([0.001, 0.005, 0.1], [0.004, 0.003, 0.1], 0.99995)
    rng = np.random.default_rng(3)
    m = np.eye(4)
    m[1:, :] += 0.2 * rng.standard_normal((3, 4))
    before = np.sort_complex(np.linalg.eigvals(rblab.l_map(gs)))
    after = np.sort_complex(np.linalg.eigvals(rblab.l_map(gs.gauged(m))))
    np.testing.assert_allclose(after, before, atol=1e-9)
    bad = np.eye(4)
    bad[0, 1] = 0.5
    with pytest.raises(ValueError):
        gs.gauged(bad)


def test_counterexample_finds_cp_gauge_below_r():
    rows, successes = rblab.counterexample(0.99, np.linspace(0.99, 1.01, 21).tolist())
    assert successes
    for i in successes:
        assert rows[i]["all_cp"]
        assert rows[i]["epsilon"] < 0.005


def test_config_validation_and_run(tmp_path):
    assert rblab.validate_config(json.dumps({"command": "simulate", "bogus": 1}))
    text = json.dumps({"command": "counterexample", "seed": 3, "counterexample": {"points": 11}})
    assert rblab.validate_config(text) == []
    files = rblab.run_config(text, str(tmp_path))
    assert len(files) == 1
    lines = open(files[0]).read().splitlines()
    assert lines[0].startswith("# config: ")
    assert lines[1] == "# seed: 3"
    assert len(lines) == 3 + 11
