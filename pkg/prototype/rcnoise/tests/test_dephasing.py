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

from rcnoise.bloch import bloch_to_density, dephasing_cs
from rcnoise.dephasing import DecoherenceTrace, FieldPair, KrausSet, apply_dilation, beta_of, branch_angles, classical_evolve
from rcnoise.dephasing import classical_transfer_matrix, dephase_state, dilation_build, phase_angles
from rcnoise.dephasing import synthesize_fields, verify_equivalence
from rcnoise.errors import GridRangeError, SingularityError, ValidationError
from rcnoise.linalg import random_density_matrix
from rcnoise.models.central_spin import CentralSpinParams, central_spin_fields

def central_spin_setup(points=2001, t_max=5.0, alpha=1.0, B=0.0):
    params = CentralSpinParams(alpha, B)
    grid = np.linspace(0.0, t_max, points)
    return params, grid, params.trace(grid)

def test_trace_validation():
    with pytest.raises(ValidationError):
        DecoherenceTrace([0.0, 1.0], [1.0, 1.2], [0.0, 0.0])
    with pytest.raises(ValidationError):
        DecoherenceTrace([0.1, 1.0], [1.0, 0.5], [0.0, 0.0])
    with pytest.raises(ValidationError):
        DecoherenceTrace([0.0, 0.0], [1.0, 0.5], [0.0, 0.0])

def test_beta_of():
    assert beta_of(1.0, 0.0) == 0.0
    assert beta_of(0.6, 0.0) == pytest.approx(np.sqrt(1 - 0.36) / 0.6)
    with pytest.raises(SingularityError):
        beta_of(1e-8, 0.0)

def test_phase_angles_start_at_zero():
    _, _, trace = central_spin_setup(201)
    phi1, phi2 = phase_angles(trace)
    assert phi1[0] == 0.0 and phi2[0] == 0.0

def test_branch_average_reproduces_trace():
    _, _, trace = central_spin_setup(501, B=0.8)
    phi1, phi2 = phase_angles(trace)
    avg = 0.5 * (np.exp(1j * phi1) + np.exp(1j * phi2))
    assert np.allclose(avg, trace.coherence_factor(), atol=1e-12)

def test_central_spin_synthesis_matches_closed_form():
    params, grid, trace = central_spin_setup()
    fields = synthesize_fields(trace, swap=CentralSpinParams.SWAP_BRANCHES)
    exact = central_spin_fields(params, grid)
    assert np.max(np.abs(fields.h1 - exact.h1)) < 1e-4
    assert np.max(np.abs(fields.h2)) < 1e-6
    assert np.allclose(fields.phi1, exact.phi1, atol=1e-10)

def test_central_spin_fields_relative_error():
    # the static field cancels out of h2
    params, grid, trace = central_spin_setup(points=2000, alpha=1.5, B=0.7)
    fields = synthesize_fields(trace, swap=CentralSpinParams.SWAP_BRANCHES)
    exact = central_spin_fields(params, grid)
    assert np.max(np.abs(fields.h1 / exact.h1 - 1.0)) < 1e-3
    assert np.max(np.abs(fields.h2)) < 1e-6

def test_swap_relabels_branches():
    _, _, trace = central_spin_setup(101)
    a = synthesize_fields(trace)
    b = synthesize_fields(trace, swap=True)
    assert np.array_equal(a.h1, b.h2) and np.array_equal(a.phi2, b.phi1)

def test_field_round_trip():
    params, grid, _ = central_spin_setup()
    exact = central_spin_fields(params, grid)
    rebuilt = FieldPair.from_fields(grid, exact.h1, exact.h2)
    assert np.max(np.abs(rebuilt.phi1 - exact.phi1)) < 1e-6
    assert exact.round_trip_error() < 1e-6

def test_fields_need_three_points():
    trace = DecoherenceTrace([0.0, 0.1], [1.0, 0.9], [0.0, 0.0])
    with pytest.raises(ValidationError):
        synthesize_fields(trace)

def test_singularity_reports_time():
    grid = np.linspace(0.0, 5.0, 501)
    trace = DecoherenceTrace.from_polar(grid, np.exp(-10.0 * grid), np.zeros_like(grid))
    with pytest.raises(SingularityError) as e:
        synthesize_fields(trace)
    # r = exp(-10 t) first drops below 1e-6 at t = 1.39
    assert e.value.time == pytest.approx(1.39)

def test_classical_evolve():
    _, grid, trace = central_spin_setup(401)
    fields = synthesize_fields(trace)
    rho0 = bloch_to_density([1.0, 1.0, 0.0, 0.0])
    assert np.allclose(classical_evolve(rho0, fields, 0.0), rho0)
    rho = classical_evolve(rho0, fields, grid[100])
    assert np.allclose(np.diag(rho), np.diag(rho0))
    with pytest.raises(GridRangeError):
        classical_evolve(rho0, fields, 6.0)

def test_classical_transfer_matrix_matches_trace():
    _, grid, trace = central_spin_setup(401, B=0.5)
    fields = synthesize_fields(trace)
    for k in (0, 50, 400):
        c, s = dephasing_cs(classical_transfer_matrix(fields, grid[k]))
        assert c == pytest.approx(trace.c[k], abs=1e-12)
        assert s == pytest.approx(trace.s[k], abs=1e-12)

def test_equivalence_report():
    _, grid, trace = central_spin_setup(401, B=0.3)
    fields = synthesize_fields(trace)
    rho0 = bloch_to_density([1.0, 0.6, 0.0, 0.8])
    report = verify_equivalence(dephase_state(rho0, trace), fields, 1e-9)
    assert report.passed
    d = report.to_dict()
    assert d['pass'] and len(d['per_time']) == len(grid)
    assert d['max_trace_distance'] < 1e-12
    assert report.angle_drift <= report.drift_bound

def test_equivalence_detects_mismatch():
    _, grid, trace = central_spin_setup(401)
    fields = synthesize_fields(trace)
    other = CentralSpinParams(2.0).trace(grid)
    rho0 = bloch_to_density([1.0, 1.0, 0.0, 0.0])
    assert not verify_equivalence(dephase_state(rho0, other), fields, 1e-6).passed

def test_kraus_set_completeness():
    with pytest.raises(ValidationError):
        KrausSet([np.eye(2), np.eye(2)])
    k = KrausSet.from_unitaries([0.5, 0.5], [np.eye(2), np.diag([1.0, -1.0])])
    assert len(k) == 2 and k.dim == 2

def test_dilation_reproduces_field_channel():
    _, grid, trace = central_spin_setup(401, B=0.2)
    fields = synthesize_fields(trace)
    kraus = KrausSet.from_fields(fields, grid[200])
    u = dilation_build(kraus)
    rho0 = bloch_to_density([1.0, 0.2, -0.5, 0.6])
    assert np.allclose(apply_dilation(u, rho0, len(kraus)), kraus.apply(rho0), atol=1e-10)
    assert np.allclose(kraus.apply(rho0), classical_evolve(rho0, fields, grid[200]), atol=1e-12)

def test_branch_convexity_identity():
    rng = np.random.default_rng(0)
    count = 1000000
    r = rng.uniform(1e-6, 1.0, count)
    theta = rng.uniform(-np.pi, np.pi, count)
    c, s = r * np.cos(theta), r * np.sin(theta)
    phi1, phi2 = branch_angles(c, s)
    assert np.max(np.abs(0.5 * (np.cos(phi1) + np.cos(phi2)) - c)) < 1e-12
    assert np.max(np.abs(0.5 * (np.sin(phi1) + np.sin(phi2)) - s)) < 1e-12

def test_phase_angles_are_unwrapped_branch_angles():
    _, _, trace = central_spin_setup(501, alpha=3.0, B=2.0)
    phi1, phi2 = phase_angles(trace)
    b1, b2 = branch_angles(trace.c, trace.s)
    assert np.max(np.abs(np.diff(phi1))) < np.pi and np.max(np.abs(np.diff(phi2))) < np.pi
    assert np.allclose(np.exp(1j * phi1), np.exp(1j * b1), atol=1e-12)
    assert np.allclose(np.exp(1j * phi2), np.exp(1j * b2), atol=1e-12)

def test_field_pair_angles_start_at_zero():
    grid = np.linspace(0.0, 1.0, 11)
    with pytest.raises(ValidationError):
        FieldPair(grid, np.ones_like(grid), np.zeros_like(grid), grid + 0.1, np.zeros_like(grid))

def test_equivalence_detects_scaled_field():
    params, grid, trace = central_spin_setup()
    exact = central_spin_fields(params, grid)
    assert np.all(exact.angle_drift() <= exact.drift_bound())
    # stored angles untouched, h1 off by 10%
    corrupted = FieldPair(grid, 1.1 * exact.h1, exact.h2, exact.phi1, exact.phi2, exact.B)
    rho0 = bloch_to_density([1.0, 1.0, 0.0, 0.0])
    report = verify_equivalence(dephase_state(rho0, trace), corrupted, 1e-6)
    assert not report.passed
    assert report.angle_drift > report.drift_bound
    n = len(grid)
    assert report.distances[-1] > report.distances[n // 2] > report.distances[n // 10] > 1e-6
    assert not report.to_dict()['pass']

def test_equivalence_checks_state_grid():
    _, grid, trace = central_spin_setup(401)
    fields = synthesize_fields(trace)
    states = dephase_state(bloch_to_density([1.0, 1.0, 0.0, 0.0]), trace)
    assert verify_equivalence(states, fields, 1e-9, times=grid).passed
    with pytest.raises(ValidationError):
        verify_equivalence(states, fields, 1e-9, times=grid + 0.01)
    with pytest.raises(ValidationError):
        verify_equivalence(states, fields, 1e-9, times=grid[:-1])

def random_kraus(rng, S, D):
    # columns of a random isometry C^S -> C^S (x) C^D, cut into D blocks
    g = rng.normal(size=(S * D, S)) + 1j * rng.normal(size=(S * D, S))
    q, _ = np.linalg.qr(g)
    q = q.reshape(S, D, S)
    return KrausSet([q[:, a, :] for a in range(D)])

def test_dilation_of_random_channels():
    rng = np.random.default_rng(17)
    for _ in range(30):
        S, D = rng.integers(1, 5), rng.integers(1, 9)
        kraus = random_kraus(rng, S, D)
        u = dilation_build(kraus)
        assert np.max(np.abs(u @ u.conj().T - np.eye(S * D))) < 1e-10
        for _ in range(20):
            rho = random_density_matrix(rng, S)
            assert np.max(np.abs(apply_dilation(u, rho, D) - kraus.apply(rho))) < 1e-10
