# Copyright 2026 The upcross Authors.
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

import math

import numpy as np
import pytest

import upcross


def test_exit_law():
    law = upcross.ExitTimeLaw()
    assert law.cdf(0.0) == 0.0
    assert abs(law.cdf_small_time(0.5) - law.cdf_large_time(0.5)) < 1e-10
    u = 0.3
    assert abs(law.cdf(law.quantile(u)) - u) < 1e-12
    t = law.sample(20000, seed=1)
    assert abs(t.mean() - 1.0) < 4 * math.sqrt(2 / 3) / math.sqrt(t.size)
    h = law.sample(5, seed=1, h=0.5)
    np.testing.assert_array_equal(h, 0.25 * t[:5])


def test_skeleton_and_field():
    s = upcross.generate_skeleton(6, horizon=0.5, seed=3)
    assert s.times[-1] >= 0.5
    assert set(np.unique(s.signs)) <= {-1, 1}
    c = s.coarsen(3)
    assert np.all(np.isin(c.times, s.times))
    assert c.coarsen(2) == s.coarsen(2)
    f = upcross.UpcrossingField(c)
    assert f.U(0.0, 0.1) == 0.0
    assert f.U(0.5, 0.1) >= 0.0


def test_sup_deviation():
    s = upcross.generate_skeleton(8, horizon=0.5, seed=4)
    d = upcross.sup_deviation(s, 4, 0.5)
    assert d.sup_deviation >= 0.0
    assert d.rate_statistic == pytest.approx(d.sup_deviation / upcross.normalizer(4))
    assert upcross.sup_deviation(s, 8, 0.5).sup_deviation == 0.0


def test_pvar():
    value, idx = upcross.pvar_sequence([0.0, 1.0, 2.0], 2.0)
    assert value == 4.0 and idx == [0, 2]
    with pytest.raises(ValueError):
        upcross.pvar_sequence([], 2.0)


def test_ks():
    assert upcross.ks_two_sample([1, 2, 3], [1, 2, 3]) == (0.0, 1.0)
    d, p = upcross.ks_two_sample([1, 2, 3], [7, 8, 9])
    assert d == 1.0 and p < 0.5


def test_experiment_and_reproducibility():
    cfg = upcross.ExperimentConfig()
    cfg.paths = 4
    cfg.levels = [2, 3]
    cfg.proxy_offset = 2
    cfg.horizons = [0.5]
    cfg.threads = 1
    a = upcross.run_sup_rate(cfg)
    cfg.threads = 2
    b = upcross.run_sup_rate(cfg)
    assert a.to_csv() == b.to_csv()
    assert a.rows[0]["n_paths"] == 4
    assert "seed = " in a.config_echo
    cfg.set("step-budget", "1")
    with pytest.raises(RuntimeError):
        upcross.run_sup_rate(cfg)
