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


import os

import numpy as np
import pytest
from scipy.special import sici

from rcnoise.bloch import bloch_to_density
from rcnoise.dephasing import DecoherenceTrace, phase_angles, synthesize_fields, verify_equivalence
from rcnoise.errors import GridRangeError, ParseError, ValidationError
from rcnoise.models import model_from_spec, load_model_spec
from rcnoise.models.central_spin import CentralSpinParams
from rcnoise.models.finite_bath import FiniteBathModel, finite_bath_unitary
from rcnoise.models.spin_boson import OhmicCoupling, SpinBosonParams, TabulatedCoupling
from rcnoise.models.spin_boson import gamma_ohmic, gamma_ohmic_exact, gamma_quadrature
from rcnoise.models.tabulated import TabulatedDecoherence
from rcnoise.parsers.decoherence import load_decoherence_csv

EXAMPLE_CSV = os.path.join(os.path.dirname(__file__), os.pardir, 'data', 'example_impurity.csv')

def test_gamma_ohmic_zero_at_origin():
    assert gamma_ohmic(0.0, 20.0, 1.0) == 0.0
    assert gamma_ohmic_exact(0.0, 20.0, 1.0) == 0.0
    assert gamma_ohmic_exact(np.array([0.0, 0.5]), 20.0, 1.0)[0] == 0.0
    assert gamma_quadrature(0.0, OhmicCoupling().J, np.pi, 1000.0) == 0.0

def test_gamma_quadrature_matches_exact():
    c = OhmicCoupling(1.0, 20.0, 1.0)
    for t in (0.5, 1.0, 2.0):
        quad = gamma_quadrature(t, c.J, c.beta_th, c.omega_max(t))
        exact = gamma_ohmic_exact(t, c.cutoff, c.tau)
        assert abs(quad - exact) < 1e-6 * max(1.0, abs(exact))

def test_gamma_ohmic_large_cutoff_limit():
    # the closed form is the W tau -> infinity limit of the exact expression
    for t in (0.5, 1.0, 3.0):
        assert gamma_ohmic(t, 1e4, 1.0) == pytest.approx(gamma_ohmic_exact(t, 1e4, 1.0), abs=1e-3)

def test_gamma_ohmic_large_times():
    # no overflow in ln(sinh(x)/x)
    g = gamma_ohmic(np.array([100.0, 1000.0]), 20.0, 1.0)
    assert np.all(np.isfinite(g))

def test_spin_boson_trace():
    params = SpinBosonParams(B=1.5, coupling=OhmicCoupling(0.2, 20.0, 1.0))
    grid = np.linspace(0.0, 3.0, 31)
    trace = params.trace(grid)
    assert trace.c[0] == 1.0 and trace.s[0] == 0.0
    assert np.allclose(trace.r, np.exp(params.gamma(grid)))
    assert np.allclose(trace.phase, -1.5 * grid)

def test_spin_boson_decay_is_monotone():
    grid = np.linspace(0.0, 5.0, 501)
    for method in ('closed-form', 'exact'):
        trace = SpinBosonParams(B=0.7, coupling=OhmicCoupling(0.5, 20.0, 1.0), gamma=method).trace(grid)
        assert np.all(np.diff(trace.r) <= 1e-15)
        assert trace.r[-1] < trace.r[0] == 1.0

def test_gamma_quadrature_is_negative():
    c = OhmicCoupling(1.0, 20.0, 1.0)
    tab = TabulatedCoupling([0.0, 50.0], [0.0, 50.0], 2.0)
    for t in (0.01, 0.3, 1.0, 4.0):
        assert gamma_quadrature(t, c.J, c.beta_th, c.omega_max(t)) < 0.0
        assert gamma_quadrature(t, tab.J, tab.beta_th, tab.omega_max(t)) < 0.0

def test_gamma_early_times_quadratic():
    # 1 - cos wt ~ (wt)^2 / 2 for t << 1/W
    A, W, tau = 0.5, 20.0, 1.0
    curvature = -A * (0.5 * W ** 2 + 1.0 / (6.0 * tau ** 2))
    for t in (1e-4, 5e-4):
        assert gamma_ohmic(t, W, tau, A) / t ** 2 == pytest.approx(curvature, rel=1e-3)
        assert gamma_ohmic(2 * t, W, tau, A) / gamma_ohmic(t, W, tau, A) == pytest.approx(4.0, rel=1e-3)
        assert gamma_ohmic_exact(2 * t, W, tau, A) / gamma_ohmic_exact(t, W, tau, A) == pytest.approx(4.0, rel=1e-3)

def test_spin_boson_field_tail():
    # at B = 0 and late times |h| decays like exp(-t/tau)
    params = SpinBosonParams(coupling=OhmicCoupling(1.0, 20.0, 1.0))
    grid = np.linspace(0.0, 5.0, 5001)
    fields = synthesize_fields(params.trace(grid))
    late = (grid >= 3.0) & (grid <= 5.0)
    slope = np.polyfit(grid[late], np.log(np.abs(fields.h1[late])), 1)[0]
    assert slope == pytest.approx(-1.0, rel=0.05)
    assert np.allclose(fields.h1, -fields.h2, atol=1e-9)

def test_spin_boson_tabulated_coupling():
    # J = w up to a hard cutoff at zero temperature: Gamma(t) = -Cin(Wt)
    tab = TabulatedCoupling([0.0, 50.0], [0.0, 50.0], 1e6)
    assert tab.omega_max(1.0) == 50.0
    assert tab.J(60.0) == 0.0
    t = 1.0
    _, ci = sici(50.0 * t)
    cin = np.euler_gamma + np.log(50.0 * t) - ci
    assert gamma_quadrature(t, tab.J, tab.beta_th, tab.omega_max(t)) == pytest.approx(-cin, abs=1e-6)

def test_tabulated_coupling_validation():
    with pytest.raises(ValidationError):
        TabulatedCoupling([0.0, 1.0], [0.0, -1.0], 1.0)
    with pytest.raises(ValidationError):
        TabulatedCoupling([1.0, 0.5], [0.0, 1.0], 1.0)
    tab = TabulatedCoupling([1.0, 2.0], [1.0, 1.0], 1.0)
    assert tab.J(0.5) == pytest.approx(0.5)

def test_spin_boson_from_spec():
    model = model_from_spec({'type': 'spin-boson', 'B': 0.5, 'gamma': 'exact',
                             'coupling': {'kind': 'ohmic', 'amplitude': 0.5, 'cutoff': 10.0, 'tau': 2.0}})
    assert isinstance(model, SpinBosonParams)
    assert model.coupling.cutoff == 10.0 and model.gamma_method == 'exact'
    with pytest.raises(ValidationError):
        SpinBosonParams(gamma='simpson')

def test_central_spin_trace():
    params = CentralSpinParams(alpha=2.0, B=0.0)
    grid = np.linspace(0.0, 1.0, 11)
    trace = params.trace(grid)
    assert np.allclose(trace.r, 1.0 / np.sqrt(1.0 + 4.0 * grid ** 2))
    assert np.allclose(trace.phase, np.arctan(2.0 * grid))
    # alpha * t > 1 beyond t = 0.5
    assert trace.metadata['validity_exceeded'] == pytest.approx(grid[grid > 0.5].tolist())

def test_central_spin_analytic_fields():
    params = CentralSpinParams(alpha=1.0, B=0.0)
    grid = np.linspace(0.0, 5.0, 501)
    fields = params.analytic_fields(grid)
    assert np.max(np.abs(fields.h2)) < 1e-8
    assert fields.h1[0] == pytest.approx(2.0)
    rho0 = bloch_to_density([1.0, 1.0, 0.0, 0.0])
    assert verify_equivalence(params.quantum_states(rho0, grid), fields, 1e-6).passed

def test_central_spin_needs_positive_alpha():
    with pytest.raises(ValidationError):
        CentralSpinParams(alpha=0.0)

def test_tabulated_validation():
    with pytest.raises(ValidationError):
        TabulatedDecoherence([0.0, 1.0], [0.9, 0.8], [0.0, 0.0])
    with pytest.raises(ValidationError):
        TabulatedDecoherence([0.0, 1.0], [1.0, 1.2], [0.0, 0.0])

def test_tabulated_interpolation():
    model = TabulatedDecoherence([0.0, 1.0, 2.0], [1.0, 0.8, 0.6], [0.0, 0.1, 0.2])
    trace = model.trace([0.0, 0.5, 1.5])
    assert trace.r == pytest.approx([1.0, 0.9, 0.7])
    with pytest.raises(GridRangeError):
        model.trace([0.0, 2.5])

def test_tabulated_closed_form_matches_generic():
    model = load_decoherence_csv(EXAMPLE_CSV, B=0.7)
    generic = phase_angles(model.trace())
    closed = model.closed_form_angles()
    for g, c in zip(generic, closed):
        assert np.max(np.abs(g - c)) < 1e-9

def test_tabulated_equivalence():
    model = load_decoherence_csv(EXAMPLE_CSV)
    fields = model.analytic_fields(model.times)
    rho0 = bloch_to_density([1.0, 1.0, 0.0, 0.0])
    assert verify_equivalence(model.quantum_states(rho0, model.times), fields, 1e-9).passed
    assert model.analytic_fields(model.times[:10]) is None

def test_finite_bath_equivalence():
    model = FiniteBathModel.random(4, seed=42, coupling_scale=0.2)
    grid = np.linspace(0.0, 2.0, 201)
    trace = model.trace(grid)
    fields = synthesize_fields(trace)
    rho0 = bloch_to_density([1.0, 0.6, 0.0, 0.8])
    assert verify_equivalence(model.quantum_states(rho0, grid), fields, 1e-9).passed

def test_finite_bath_trace_from_transfer_matrices():
    model = FiniteBathModel.random(3, seed=5)
    grid = np.linspace(0.0, 1.0, 11)
    direct = model.trace(grid)
    via_T = DecoherenceTrace.from_transfer_matrices(grid, model.transfer_matrices(grid))
    assert np.allclose(direct.c, via_T.c, atol=1e-10)
    assert np.allclose(direct.s, via_T.s, atol=1e-10)

def test_finite_bath_time_dependent():
    h0 = FiniteBathModel.random(2, seed=3)
    model = FiniteBathModel(h0.h_bath, lambda t: np.cos(t) * h0.h_coupling, B=0.4, trotter_steps=512)
    assert model.time_dependent
    u = finite_bath_unitary(model, 1.0)
    assert np.allclose(u @ u.conj().T, np.eye(4), atol=1e-10)
    grid = np.linspace(0.0, 1.0, 9)
    trace = model.trace(grid)
    assert np.all(trace.r <= 1.0 + 1e-9)
    rho0 = bloch_to_density([1.0, 1.0, 0.0, 0.0])
    assert verify_equivalence(model.quantum_states(rho0, grid), synthesize_fields(trace), 1e-9).passed

def test_finite_bath_dimension_mismatch():
    with pytest.raises(ValidationError):
        FiniteBathModel(np.eye(2), np.eye(3))

def test_model_registry():
    model = model_from_spec({'type': 'central-spin', 'alpha': 2.0})
    assert isinstance(model, CentralSpinParams) and model.alpha == 2.0
    with pytest.raises(ValidationError):
        model_from_spec({'type': 'lindblad'})
    with pytest.raises(ValidationError):
        model_from_spec({'type': 'central-spin'})

def test_model_spec_file(tmp_path):
    good = tmp_path / 'model.json'
    good.write_text('{"type": "finite-bath", "bath_dim": 3, "seed": 4}')
    model = model_from_spec({'path': 'model.json'}, str(tmp_path))
    assert isinstance(model, FiniteBathModel) and model.bath_dim == 3
    assert model_from_spec({'path': str(good)}, '/elsewhere').bath_dim == 3

    bad = tmp_path / 'bad.json'
    bad.write_text('{"type": \n')
    with pytest.raises(ParseError):
        load_model_spec(str(bad))

def test_central_spin_coherence_identity():
    params = CentralSpinParams(alpha=1.5, B=0.9)
    grid = np.linspace(0.0, 4.0, 401)
    trace = params.trace(grid)
    # r = cos(arctan(alpha t))
    assert np.max(np.abs(trace.r - np.cos(trace.phase + params.B * grid))) < 1e-12

def coherent_grid(model, t_max=2.0, points=200, r_floor=1e-3):
    grid = np.linspace(0.0, t_max, points)
    trace = model.trace(grid)
    while np.min(trace.r) < r_floor:
        t_max *= 0.5
        grid = np.linspace(0.0, t_max, points)
        trace = model.trace(grid)
    return grid, trace

def test_random_finite_baths_are_classical():
    rng = np.random.default_rng(2021)
    for k in range(50):
        dim = (2, 4, 8)[k % 3]
        model = FiniteBathModel.random(dim, seed=int(rng.integers(1 << 31)))
        grid, trace = coherent_grid(model)
        rho0 = bloch_to_density([1.0, 0.6, 0.0, 0.8])
        report = verify_equivalence(model.quantum_states(rho0, grid), synthesize_fields(trace), 1e-6)
        assert report.passed, 'bath {} (dim {}): max trace distance {}'.format(k, dim, report.max_trace_distance)
