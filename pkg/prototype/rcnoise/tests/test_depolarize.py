# Copyright 2021 The RCNoise Authors
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


import numpy as np
import pytest

from rcnoise.bloch import bloch_to_density
from rcnoise.dephasing import apply_dilation, dilation_build
from rcnoise.depolarize import analytic_nz, clifford_average, clifford_kraus, clifford_second_moment, clifford_table
from rcnoise.depolarize import depolarize_schedule, depolarize_sweep, depolarizing_kraus, find_nz_root
from rcnoise.depolarize import haar_isotropy_check, haar_mc_depolarize, haar_second_moment, haar_time_for
from rcnoise.depolarize import kraus_depolarize, proper_window, qubit_count
from rcnoise.errors import CapabilityError, ValidationError
from rcnoise.linalg import PAULIS, random_density_matrix

ZERO = np.diag([1.0, 0.0]).astype(complex)

def test_qubit_count():
    assert qubit_count(2) == 1 and qubit_count(8) == 3
    assert qubit_count(3) is None and qubit_count(1) is None

def test_kraus_depolarize():
    assert np.allclose(kraus_depolarize(ZERO, 0.0), ZERO)
    assert np.allclose(kraus_depolarize(ZERO, 1.0), np.eye(2) / 2)
    rho = np.diag([0.75, 0.25])
    assert np.allclose(kraus_depolarize(rho, 0.5), np.diag([0.625, 0.375]))
    with pytest.raises(ValidationError):
        kraus_depolarize(ZERO, 1.5)

def test_kraus_depolarize_non_qubit_dimension():
    rho = np.diag([1.0, 0.0, 0.0])
    assert np.allclose(kraus_depolarize(rho, 0.3), np.diag([0.8, 0.1, 0.1]))

def test_two_qubit_kraus_set():
    kraus = depolarizing_kraus(2, 0.3)
    assert len(kraus) == 16
    rho = random_density_matrix(np.random.default_rng(1), 4)
    assert np.allclose(kraus.apply(rho), 0.7 * rho + 0.3 * np.eye(4) / 4, atol=1e-12)

def test_depolarizing_dilation():
    kraus = depolarizing_kraus(1, 0.6)
    u = dilation_build(kraus)
    rho = bloch_to_density([1.0, 0.3, 0.4, -0.5])
    assert np.allclose(apply_dilation(u, rho, len(kraus)), kraus.apply(rho), atol=1e-10)

def test_schedule():
    times = np.linspace(0.0, 1.0, 5)
    states = depolarize_schedule(ZERO, lambda t: t, times)
    assert np.allclose(states[0], ZERO)
    assert np.allclose(states[-1], np.eye(2) / 2)
    with pytest.raises(ValidationError):
        depolarize_schedule(ZERO, lambda t: 1.0 - t, times)

def test_analytic_nz_limits():
    assert analytic_nz(0.0) == pytest.approx(1.0)
    assert analytic_nz(0.5) == pytest.approx(1.0 / 3.0)
    assert analytic_nz(1.0) == pytest.approx(0.0, abs=1e-12)
    assert analytic_nz(100.0) == pytest.approx(1.0 / 3.0, abs=1e-5)
    values = analytic_nz(np.array([0.0, 1e-9, 1.0 - 1e-9, 1.0]))
    assert np.all(np.isfinite(values))
    with pytest.raises(ValidationError):
        analytic_nz(-0.1)

def test_nz_root_and_window():
    root = find_nz_root()
    assert 0.76 < root < 0.78
    assert abs(analytic_nz(root)) < 1e-8
    grid = np.linspace(0.0, 1.5, 301)
    inside = proper_window(grid)
    assert np.all(np.diff(analytic_nz(grid[inside])) < 0)
    assert not inside[-1]

def test_haar_time_for():
    assert haar_time_for(0.0) == 0.0
    assert haar_time_for(1.0) == find_nz_root()
    t = haar_time_for(0.5)
    assert analytic_nz(t) == pytest.approx(0.5, abs=1e-8)

def test_sweep_starts_exactly():
    result = haar_mc_depolarize(ZERO, 0.0, 100, seed=1)
    assert np.array_equal(result.states[0], ZERO)
    assert result.nz_err[0] == 0.0

def test_sweep_matches_analytic():
    times = np.linspace(0.0, 1.5, 21)
    result = depolarize_sweep(ZERO, times, 100000, seed=2021)
    assert np.count_nonzero(result.agreement()) >= 20

def test_sweep_reference_times():
    result = depolarize_sweep(ZERO, [0.0, 0.5, 1.0], 50000, seed=12)
    half, err_re, _ = result.state_at(0.5)
    assert abs(2.0 * half[0, 0].real - 1.0 - 1.0 / 3.0) <= 5 * 2.0 * err_re[0, 0]
    one, err_re, err_im = result.state_at(1.0)
    assert np.all(np.abs(one.real - np.eye(2) / 2) <= 5 * err_re + 1e-12)
    assert np.all(np.abs(one.imag) <= 5 * err_im + 1e-12)

def test_sweep_is_seeded():
    times = [0.0, 0.3, 0.9]
    a = depolarize_sweep(ZERO, times, 2000, seed=5, chunk_size=500)
    b = depolarize_sweep(ZERO, times, 2000, seed=5, chunk_size=500)
    assert np.array_equal(a.states, b.states)

def test_sweep_tilted_state_shrinks():
    rho0 = bloch_to_density([1.0, 0.6, 0.0, 0.8])
    result = depolarize_sweep(rho0, [0.0, 0.5], 50000, seed=8)
    n, err = result.bloch()
    expected = np.array([0.6, 0.0, 0.8]) * analytic_nz(0.5)
    assert np.all(np.abs(n[1] - expected) <= 5 * err[1] + 1e-12)
    assert result.nz_analytic()[1] == pytest.approx(0.8 * analytic_nz(0.5))

def test_qutrit_sweep():
    rho0 = np.diag([1.0, 0.0, 0.0])
    result = depolarize_sweep(rho0, [0.0, 1.0], 20000, seed=3)
    assert np.allclose(np.trace(result.states[1]), 1.0)
    with pytest.raises(CapabilityError):
        result.nz
    with pytest.raises(ValidationError):
        result.state_at(0.5)

def test_result_csv(tmp_path):
    result = depolarize_sweep(ZERO, [0.0, 0.25, 0.5], 500, seed=4)
    path = str(tmp_path / 'nz.csv')
    result.to_csv(path)
    with open(path) as f:
        lines = f.read().splitlines()
    assert lines[0] == 't,nz_mc,nz_err,nz_analytic'
    assert len(lines) == 4
    assert lines[1].startswith('0,1,0,')

def test_isotropy():
    report = haar_isotropy_check(ZERO, 0.5, 20000, seed=6)
    assert report.max_offdiag_sigma < 5.0
    # eigh lists the |0> population last
    diagonal = report.to_dict()['diagonal']
    assert diagonal[1] > diagonal[0]

    tilted = bloch_to_density([1.0, 0.5, -0.5, 0.5])
    assert haar_isotropy_check(tilted, 0.5, 20000, seed=7).max_offdiag_sigma < 5.0

    mixed = haar_isotropy_check(np.eye(2) / 2, 0.5, 2000, seed=8)
    assert mixed.passed and mixed.max_offdiag_sigma < 1.0

def test_single_qubit_clifford_table():
    table = clifford_table(1)
    assert len(table) == 24
    assert table.contains(np.eye(2))
    assert table.contains(1j * PAULIS[1])
    assert table.is_closed()
    assert table.preserves_paulis()
    t_gate = np.diag([1.0, np.exp(0.25j * np.pi)])
    assert not table.contains(t_gate)

def test_clifford_table_limits():
    with pytest.raises(CapabilityError):
        clifford_table(3)

def test_two_qubit_clifford_table():
    table = clifford_table(2)
    assert len(table) == 11520
    rho = random_density_matrix(np.random.default_rng(2), 4)
    assert np.allclose(clifford_average(rho, table), np.eye(4) / 4, atol=1e-12)

def test_clifford_average_is_fully_mixed():
    table = clifford_table(1)
    rng = np.random.default_rng(0)
    for _ in range(100):
        rho = random_density_matrix(rng, 2)
        assert np.allclose(clifford_average(rho, table), np.eye(2) / 2, atol=1e-12)
    assert np.allclose(clifford_kraus(table).apply(ZERO), np.eye(2) / 2, atol=1e-12)
    with pytest.raises(ValidationError):
        clifford_average(np.eye(4) / 4, table)

def test_second_moment_matches_haar():
    table = clifford_table(1)
    swap = np.eye(4)[[0, 2, 1, 3]]
    # pure states are mapped onto the symmetric subspace
    expected = (np.eye(4) + swap) / 6.0
    assert np.allclose(clifford_second_moment(ZERO, table), expected, atol=1e-12)
    mean, err_re, err_im = haar_second_moment(ZERO, 20000, seed=9)
    assert np.all(np.abs(mean.real - expected) <= 5 * err_re + 1e-12)
    assert np.all(np.abs(mean.imag) <= 5 * err_im + 1e-12)

def test_second_moment_of_mixed_states():
    table = clifford_table(1)
    swap = np.eye(4)[[0, 2, 1, 3]]
    rng = np.random.default_rng(21)
    for k in range(3):
        rho = random_density_matrix(rng, 2)
        purity = np.trace(rho @ rho).real
        # a I + b SWAP with the trace and purity of rho (x) rho
        expected = (2.0 - purity) / 6.0 * np.eye(4) + (2.0 * purity - 1.0) / 6.0 * swap
        assert np.allclose(clifford_second_moment(rho, table), expected, atol=1e-12)
        mean, err_re, err_im = haar_second_moment(rho, 20000, seed=30 + k)
        assert np.all(np.abs(mean.real - expected) <= 5 * err_re + 1e-12)
        assert np.all(np.abs(mean.imag) <= 5 * err_im + 1e-12)
