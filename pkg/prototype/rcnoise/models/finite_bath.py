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
import scipy.linalg

from .base import DephasingModel
from ..bloch import check_density, cs_from_uv, transfer_matrix_from_unitary, uv_decompose
from ..dephasing import DecoherenceTrace
from ..errors import ValidationError
from ..linalg import SIGMA_X, SIGMA_Y, SIGMA_Z, check_hermitian, dagger, expm_hermitian, kron
from ..linalg import partial_trace_bath, random_density_matrix, random_hermitian

from ..logconfig import LogConfig
logger = LogConfig.getLogger(__file__)

DEFAULT_TROTTER_STEPS = 1024
# halving-step disagreement above this is reported
TROTTER_WARN = 1e-6

class FiniteBathModel(DephasingModel):
    """Qubit dephased by a finite-dimensional bath.

    H = -B/2 sigma_z (x) I + I (x) h_bath + sigma_z (x) h_coupling

    h_bath and h_coupling are Hermitian matrices, or callables t -> matrix for
    a time-dependent model, which is evolved with midpoint Trotter products.
    """

    NAME = 'finite-bath'

    def __init__(self, h_bath, h_coupling, B=0.0, rho_b0=None, trotter_steps=DEFAULT_TROTTER_STEPS):
        super(FiniteBathModel, self).__init__()
        self.h_bath = h_bath
        self.h_coupling = h_coupling
        self.B = float(B)
        self.trotter_steps = int(trotter_steps)
        self.time_dependent = callable(h_bath) or callable(h_coupling)

        hb, hc = self._bath_terms(0.0)
        if hb.shape != hc.shape:
            raise ValidationError('h_bath and h_coupling dimensions differ ({} vs {})'.format(hb.shape, hc.shape))
        self.bath_dim = hb.shape[0]
        if rho_b0 is None:
            rho_b0 = np.eye(self.bath_dim) / self.bath_dim
        self.rho_b0 = check_density(rho_b0, self.bath_dim, 'rho_b0')

    def _bath_terms(self, t):
        hb = self.h_bath(t) if callable(self.h_bath) else self.h_bath
        hc = self.h_coupling(t) if callable(self.h_coupling) else self.h_coupling
        return check_hermitian(hb, 'h_bath'), check_hermitian(hc, 'h_coupling')

    def hamiltonian(self, t=0.0):
        hb, hc = self._bath_terms(t)
        ib = np.eye(self.bath_dim)
        return -0.5 * self.B * kron(SIGMA_Z, ib) + kron(np.eye(2), hb) + kron(SIGMA_Z, hc)

    def unitaries(self, grid):
        """U(t) for every t on the grid"""
        grid = np.asarray(grid, dtype=float)
        if not self.time_dependent:
            # one diagonalisation serves the whole grid
            w, v = scipy.linalg.eigh(self.hamiltonian())
            return [(v * np.exp(-1j * w * t)) @ dagger(v) for t in grid]

        steps = max(1, self.trotter_steps // max(1, len(grid) - 1))
        out = [_trotter_product(self, 0.0, grid[0], steps)]
        for t0, t1 in zip(grid[:-1], grid[1:]):
            out.append(_trotter_product(self, t0, t1, steps) @ out[-1])
        return out

    def trace(self, grid):
        """(c, s) from the u/v decomposition of the exact evolution"""
        grid = np.asarray(grid, dtype=float)
        cs = np.array([cs_from_uv(uv_decompose(u, t), self.rho_b0) for t, u in zip(grid, self.unitaries(grid))])
        return DecoherenceTrace(grid, cs[:, 0], cs[:, 1], self.B, {'model': FiniteBathModel.NAME, 'bath_dim': self.bath_dim})

    def transfer_matrices(self, grid):
        return [transfer_matrix_from_unitary(u, self.rho_b0) for u in self.unitaries(grid)]

    def quantum_states(self, rho_s0, grid):
        """Brute-force Tr_B[U (rho_s0 (x) rho_b0) U^dagger] on the grid"""
        rho_s0 = check_density(rho_s0, 2, 'rho_s0')
        rho = kron(rho_s0, self.rho_b0)
        return [partial_trace_bath(u @ rho @ dagger(u), 2, self.bath_dim) for u in self.unitaries(grid)]

    @staticmethod
    def random(bath_dim, seed, B=None, coupling_scale=1.0):
        """Random Hermitian h_bath/h_coupling and a random full-rank bath state"""
        if bath_dim < 1:
            raise ValidationError('Bath dimension must be >= 1 (got {})'.format(bath_dim))
        rng = np.random.default_rng(seed)
        h_bath = random_hermitian(rng, bath_dim)
        h_coupling = random_hermitian(rng, bath_dim, coupling_scale)
        rho_b0 = random_density_matrix(rng, bath_dim)
        if B is None:
            B = rng.uniform(0.0, 2.0)
        return FiniteBathModel(h_bath, h_coupling, B, rho_b0)

    @staticmethod
    def from_spec(spec, base_dir=None):
        if 'h_bath' not in spec:
            return FiniteBathModel.random(int(spec.get('bath_dim', 4)), spec.get('seed', 0), spec.get('B'),
                                          spec.get('coupling_scale', 1.0))
        return FiniteBathModel(_matrix_from_spec(spec['h_bath']), _matrix_from_spec(spec['h_coupling']), spec.get('B', 0.0),
                               _matrix_from_spec(spec['rho_b0']) if 'rho_b0' in spec else None)

    def __str__(self):
        return 'FiniteBathModel(bath_dim={}, B={}, time_dependent={})'.format(self.bath_dim, self.B, self.time_dependent)

def _matrix_from_spec(m):
    """Matrix from a JSON value: a nested list of reals, or {"re": ..., "im": ...}"""
    if isinstance(m, dict):
        re = np.asarray(m.get('re', 0.0), dtype=float)
        im = np.asarray(m.get('im', np.zeros_like(re)), dtype=float)
        return re + 1j * im
    return np.asarray(m, dtype=complex)

def _trotter_product(model, t0, t1, steps):
    dt = (t1 - t0) / steps
    u = np.eye(2 * model.bath_dim, dtype=complex)
    for k in range(steps):
        # later times act on the left
        u = expm_hermitian(model.hamiltonian(t0 + (k + 0.5) * dt), dt) @ u
    return u

def finite_bath_unitary(model, t, steps=None):
    """Evolution operator U(t) of a FiniteBathModel.

    For a time-independent model this is exp(-iHt) and <steps> is ignored.
    Time-dependent models use an ordered product of <steps> midpoint
    exponentials, compared against half as many steps.
    """
    if not model.time_dependent:
        return expm_hermitian(model.hamiltonian(), t)

    steps = model.trotter_steps if steps is None else int(steps)
    if steps < 1:
        raise ValidationError('Trotter step count must be >= 1 (got {})'.format(steps))
    u = _trotter_product(model, 0.0, t, steps)
    if steps >= 2:
        err = np.max(np.abs(u - _trotter_product(model, 0.0, t, steps // 2)))
        logger.debug('Trotter halving difference at t = {}: {:.3g}'.format(t, err))
        if err > TROTTER_WARN:
            logger.warning('Trotter product with {} steps differs from {} steps by {:.3g} at t = {}'.format(steps, steps // 2, err, t))
    return u

def cooling_model(g=1.0):
    """Qubit exchanging excitations with a bath spin prepared in its down state.

    H = g/2 (X (x) X + Y (x) Y) moves qubit population into the bath, so the
    transfer matrix has an affine part; no classical noise model exists.

    Returns:
        (h_total, rho_b0)
    """
    h = 0.5 * g * (kron(SIGMA_X, SIGMA_X) + kron(SIGMA_Y, SIGMA_Y))
    rho_b0 = np.diag([0.0, 1.0]).astype(complex)
    return h, rho_b0
