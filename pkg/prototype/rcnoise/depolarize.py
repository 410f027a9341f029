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

# Depolarization of an N-level system by classical unitary noise.
#
# A Haar-random U in SU(N) defines H_U = log(U) with eigenphases in (-pi, pi];
# averaging exp(-i H_U t) rho exp(i H_U t) over U shrinks rho towards I/N and
# reaches I/N exactly at t = 1. Averaging over the Clifford group instead of
# the Haar measure gives the same t = 1 state with a finite sum.

import itertools
from collections import deque
from functools import partial

import numpy as np
from scipy.optimize import bisect, brentq

from .bloch import check_density
from .dephasing import KrausSet
from .errors import ValidationError, CapabilityError
from .linalg import PAULIS, dagger, haar_unitaries, kron, kron_all, wrap_phases
from .montecarlo import run_chunked, DEFAULT_CHUNK_SIZE
from .output import write_csv

from .logconfig import LogConfig
logger = LogConfig.getLogger(__file__)

NZ_ROOT_BRACKET = (0.5, 0.95)
NZ_ROOT_XTOL = 1e-10

def qubit_count(dim):
    """n with dim = 2^n, or None when dim is not a power of two"""
    if dim >= 2 and dim & (dim - 1) == 0:
        return dim.bit_length() - 1
    return None

def _check_probability(p):
    if not 0.0 <= p <= 1.0:
        raise ValidationError('Depolarizing probability must lie in [0, 1] (got {})'.format(p))

def depolarizing_kraus(n, p):
    """Kraus operators of the n-qubit depolarizing channel.

    M_0 = sqrt(1 - (4^n - 1) p / 4^n) I and M_i = sqrt(p) / 2^n P_i for
    every non-identity Pauli string P_i.
    """
    _check_probability(p)
    if n < 1:
        raise ValidationError('Qubit count must be >= 1 (got {})'.format(n))
    dim, count = 2 ** n, 4 ** n
    ops = [np.sqrt(1.0 - (count - 1) * p / count) * np.eye(dim, dtype=complex)]
    for idx in itertools.product(range(4), repeat=n):
        if any(idx):
            ops.append(np.sqrt(p) / dim * kron_all(*[PAULIS[i] for i in idx]))
    return KrausSet(ops)

def kraus_depolarize(rho0, p):
    """(1 - p) rho0 + p I/N, through the Pauli Kraus sum when N = 2^n"""
    _check_probability(p)
    rho0 = check_density(rho0)
    dim = rho0.shape[0]
    n = qubit_count(dim)
    if n is None:
        return (1.0 - p) * rho0 + p * np.eye(dim) / dim
    return depolarizing_kraus(n, p).apply(rho0)

def depolarize_schedule(rho0, p_of_t, times):
    """States for a monotone depolarizing trajectory p(t) on a time grid"""
    times = np.asarray(times, dtype=float)
    ps = np.array([p_of_t(t) for t in times], dtype=float)
    if np.any(np.diff(ps) < 0):
        raise ValidationError('Depolarizing schedule p(t) must be non-decreasing')
    return [kraus_depolarize(rho0, p) for p in ps]

def analytic_nz(t):
    """n_z(t) = 1/3 + sin(2 pi t) / (3 pi (t - t^3)) for a qubit starting at |0>.

    Written with np.sinc around t = 0 and t = 1 so both removable
    singularities evaluate to their limits, n_z(0) = 1 and n_z(1) = 0.
    """
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValidationError('analytic_nz needs t >= 0')
    with np.errstate(divide='ignore', invalid='ignore'):
        near_zero = 1.0 / 3.0 + 2.0 * np.sinc(2.0 * t) / (3.0 * (1.0 - t * t))
        near_one = 1.0 / 3.0 - 2.0 * np.sinc(2.0 * (t - 1.0)) / (3.0 * t * (t + 1.0))
    out = np.where(t < 0.5, near_zero, near_one)
    return out if out.ndim > 0 else float(out)

def find_nz_root():
    """First zero of analytic_nz, where proper depolarization stops"""
    root = bisect(analytic_nz, NZ_ROOT_BRACKET[0], NZ_ROOT_BRACKET[1], xtol=NZ_ROOT_XTOL)
    logger.debug('n_z root at t = {:.12f}'.format(root))
    return root

def proper_window(times):
    """Mask of grid times inside [0, root] where n_z decreases monotonically"""
    return np.asarray(times, dtype=float) <= find_nz_root()

def haar_time_for(p):
    """Time t in [0, root] at which the qubit Haar model depolarizes by p.

    The Haar-averaged qubit state is (1 - p) rho0 + p I/2 with
    p = 1 - n_z(t), so any monotone p(t) in [0, 1] is reached by running the
    Haar model at time haar_time_for(p(t)).
    """
    _check_probability(p)
    root = find_nz_root()
    if p == 0.0:
        return 0.0
    if p == 1.0:
        return root
    return brentq(lambda t: analytic_nz(t) - (1.0 - p), 0.0, root, xtol=NZ_ROOT_XTOL)

def _haar_propagators(rng, dim, count, t):
    """exp(-i H_U t) for <count> Haar draws U, batched"""
    u = haar_unitaries(rng, dim, count)
    w, v = np.linalg.eig(u)
    d = wrap_phases(-np.angle(w))
    vinv = np.linalg.inv(v)
    return [(v * np.exp(-1j * d * tk)[:, np.newaxis, :]) @ vinv for tk in np.atleast_1d(t)]

def _haar_sweep_samples(rng, count, rho0, times):
    dim = rho0.shape[0]
    out = np.empty((count, len(times), 2, dim, dim))
    for k, w in enumerate(_haar_propagators(rng, dim, count, times)):
        if times[k] == 0.0:
            x = np.broadcast_to(rho0, (count, dim, dim))
        else:
            x = w @ rho0 @ dagger(w)
        out[:, k, 0] = x.real
        out[:, k, 1] = x.imag
    return out

class DepolarizeResult(object):
    """Monte Carlo states of the Haar depolarization model on a time grid

    Attributes:
        times: grid
        states: array (len(times), N, N) of averaged density matrices
        err_re, err_im: standard errors of the real and imaginary parts
        samples: number of Haar draws, shared by every grid time
    """

    def __init__(self, times, states, err_re, err_im, samples, rho0=None):
        self.times = np.asarray(times, dtype=float)
        self.states = np.asarray(states, dtype=complex)
        self.err_re = np.asarray(err_re, dtype=float)
        self.err_im = np.asarray(err_im, dtype=float)
        self.samples = samples
        self.rho0 = self.states[0] if rho0 is None else np.asarray(rho0, dtype=complex)
        self.dim = self.states.shape[-1]

    def _require_qubit(self):
        if self.dim != 2:
            raise CapabilityError('n_z is defined for a single qubit (got N = {})'.format(self.dim))

    @property
    def nz(self):
        self._require_qubit()
        return 2.0 * self.states[:, 0, 0].real - 1.0

    @property
    def nz_err(self):
        self._require_qubit()
        return 2.0 * self.err_re[:, 0, 0]

    def bloch(self):
        """(n_x, n_y, n_z) per time and their standard errors"""
        self._require_qubit()
        n = np.stack([2.0 * self.states[:, 0, 1].real, -2.0 * self.states[:, 0, 1].imag, self.nz], axis=1)
        err = np.stack([2.0 * self.err_re[:, 0, 1], 2.0 * self.err_im[:, 0, 1], self.nz_err], axis=1)
        return n, err

    def nz_analytic(self):
        """Closed-form n_z on the grid; the Bloch vector shrinks by analytic_nz(t)"""
        self._require_qubit()
        return analytic_nz(self.times) * (2.0 * self.rho0[0, 0].real - 1.0)

    def agreement(self, nsigma=3.0, floor=1e-12):
        """Mask of grid times where nz_mc is within nsigma errors of nz_analytic"""
        return np.abs(self.nz - self.nz_analytic()) <= nsigma * self.nz_err + floor

    def state_at(self, t):
        idx = np.flatnonzero(np.isclose(self.times, t, rtol=0.0, atol=1e-12))
        if len(idx) == 0:
            raise ValidationError('t = {} is not on the sweep grid'.format(t))
        k = idx[0]
        return self.states[k], self.err_re[k], self.err_im[k]

    def to_csv(self, path):
        write_csv(path, [('t', self.times), ('nz_mc', self.nz), ('nz_err', self.nz_err), ('nz_analytic', self.nz_analytic())])

    def __len__(self):
        return len(self.times)

    def __repr__(self):
        return str(self)

    def __str__(self):
        return 'DepolarizeResult(N={}, {} times, {} samples)'.format(self.dim, len(self.times), self.samples)

def depolarize_sweep(rho0, times, samples, seed, chunk_size=DEFAULT_CHUNK_SIZE, workers=1, show_progress=False):
    """Haar Monte Carlo of the depolarization model on a whole grid.

    The same Haar draws serve every grid time, so the curve is smooth in t
    and the result depends only on (seed, samples, chunk_size).
    """
    rho0 = check_density(rho0)
    times = np.asarray(times, dtype=float)
    if np.any(times < 0):
        raise ValidationError('Depolarization times must be >= 0')
    worker = partial(_haar_sweep_samples, rho0=rho0, times=times)
    est = run_chunked(worker, samples, seed, chunk_size, workers, show_progress)

    states = est.mean[:, 0] + 1j * est.mean[:, 1]
    states = 0.5 * (states + dagger(states))
    result = DepolarizeResult(times, states, est.stderr[:, 0], est.stderr[:, 1], samples, rho0)
    logger.info('Depolarization sweep: {}'.format(result))
    return result

def haar_mc_depolarize(rho0, t, samples, seed, chunk_size=DEFAULT_CHUNK_SIZE, workers=1):
    """Single-time Haar Monte Carlo average of exp(-i H_U t) rho0 exp(i H_U t)"""
    return depolarize_sweep(rho0, [t], samples, seed, chunk_size, workers)

def _isotropy_samples(rng, count, rho0, q, t):
    dim = rho0.shape[0]
    w = _haar_propagators(rng, dim, count, t)[0]
    x = dagger(q) @ (w @ rho0 @ dagger(w)) @ q
    return np.stack([x.real, x.imag], axis=1)

class IsotropyReport(object):
    """Haar-averaged state expressed in the eigenbasis of rho0"""

    def __init__(self, t, state, err_re, err_im, nsigma=3.0, floor=1e-12):
        self.t = float(t)
        self.state = state
        self.err_re = err_re
        self.err_im = err_im
        off = ~np.eye(state.shape[0], dtype=bool)
        z_re = np.abs(state.real[off]) / np.maximum(err_re[off], floor)
        z_im = np.abs(state.imag[off]) / np.maximum(err_im[off], floor)
        self.max_offdiag_sigma = float(max(np.max(z_re, initial=0.0), np.max(z_im, initial=0.0)))
        self.passed = bool(np.all(np.abs(state.real[off]) <= nsigma * err_re[off] + floor)
                           and np.all(np.abs(state.imag[off]) <= nsigma * err_im[off] + floor))

    def to_dict(self):
        return {'t': self.t, 'pass': self.passed, 'max_offdiag_sigma': self.max_offdiag_sigma,
                'diagonal': np.diag(self.state).real.tolist()}

    def __repr__(self):
        return str(self)

    def __str__(self):
        return 'IsotropyReport(t={}, pass={}, max_offdiag_sigma={:.3g})'.format(self.t, self.passed, self.max_offdiag_sigma)

def haar_isotropy_check(rho0, t, samples, seed, chunk_size=DEFAULT_CHUNK_SIZE, workers=1):
    """Check that the Haar average stays diagonal in the eigenbasis of rho0.

    For a qubit this says the polarization vector keeps the direction of
    rho0's; for larger N that the averaged state commutes with rho0.
    """
    rho0 = check_density(rho0)
    _, q = np.linalg.eigh(rho0)
    worker = partial(_isotropy_samples, rho0=rho0, q=q, t=t)
    est = run_chunked(worker, samples, seed, chunk_size, workers)
    report = IsotropyReport(t, est.mean[0] + 1j * est.mean[1], est.stderr[0], est.stderr[1])
    logger.info('Isotropy check: {}'.format(report))
    return report

_HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2.0)
_PHASE = np.diag([1.0, 1j])
_CNOT = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)

def _generators(n):
    if n == 1:
        return [_HADAMARD, _PHASE]
    if n == 2:
        eye = np.eye(2)
        return [kron(_HADAMARD, eye), kron(eye, _HADAMARD), kron(_PHASE, eye), kron(eye, _PHASE), _CNOT]
    raise CapabilityError('Clifford tables are generated for 1 or 2 qubits only (got {})'.format(n))

def _fix_phase(u):
    """u times the phase that makes its first non-negligible entry real positive"""
    flat = u.ravel()
    k = np.flatnonzero(np.abs(flat) > 1e-6)[0]
    return u * (np.conj(flat[k]) / np.abs(flat[k]))

def _phase_key(u):
    return (np.round(u, 8) + 0.0).tobytes()

class CliffordTable(object):
    """The n-qubit Clifford group modulo global phase, as explicit matrices"""

    def __init__(self, n, elements):
        self.n = n
        self.elements = np.asarray(elements, dtype=complex)
        self._keys = {_phase_key(u): i for i, u in enumerate(self.elements)}

    def index_of(self, u):
        """Position of u (up to global phase) in the table, or None"""
        return self._keys.get(_phase_key(_fix_phase(np.asarray(u, dtype=complex))))

    def contains(self, u):
        return self.index_of(u) is not None

    def is_closed(self):
        return all(self.contains(a @ b) for a in self.elements for b in self.elements)

    def preserves_paulis(self, tol=1e-9):
        """True if every element maps each Pauli string to a signed Pauli string"""
        paulis = [kron_all(*[PAULIS[i] for i in idx]) for idx in itertools.product(range(4), repeat=self.n)]
        stack = np.array(paulis)
        for u in self.elements:
            for p in paulis[1:]:
                c = u @ p @ dagger(u)
                if not any(np.max(np.abs(c - s * q)) < tol for q in stack for s in (1.0, -1.0)):
                    return False
        return True

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __repr__(self):
        return str(self)

    def __str__(self):
        return 'CliffordTable(n={}, {} elements)'.format(self.n, len(self))

def clifford_table(n=1):
    """Enumerate the Clifford group by closure of H, S (and CNOT for n = 2).

    Breadth-first multiplication by the generators until no element new up
    to global phase appears; 24 elements for n = 1, 11520 for n = 2.
    """
    gens = _generators(n)
    start = np.eye(2 ** n, dtype=complex)
    seen = {_phase_key(start)}
    elements = [start]
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for g in gens:
            v = _fix_phase(g @ u)
            key = _phase_key(v)
            if key not in seen:
                seen.add(key)
                elements.append(v)
                queue.append(v)
    table = CliffordTable(n, elements)
    logger.debug('Generated {}'.format(table))
    return table

def _check_table_dim(rho0, table):
    rho0 = check_density(rho0)
    if rho0.shape[0] != table.elements.shape[-1]:
        raise ValidationError('State dimension {} does not match the {}-qubit Clifford table'.format(rho0.shape[0], table.n))
    return rho0

def clifford_average(rho0, table):
    """(1/|C|) sum_C C rho0 C^dagger"""
    rho0 = _check_table_dim(rho0, table)
    c = table.elements
    return np.mean(c @ rho0 @ dagger(c), axis=0)

def clifford_kraus(table):
    """Equal-weight mixture of the Clifford unitaries as a KrausSet"""
    weight = 1.0 / len(table)
    return KrausSet.from_unitaries([weight] * len(table), list(table.elements))

def _double(u):
    """U (x) U for a batch of matrices"""
    count, dim = u.shape[0], u.shape[-1]
    return np.einsum('aij,akl->aikjl', u, u).reshape(count, dim * dim, dim * dim)

def clifford_second_moment(rho0, table):
    """(1/|C|) sum_C (C (x) C)(rho0 (x) rho0)(C (x) C)^dagger"""
    rho0 = _check_table_dim(rho0, table)
    cc = _double(table.elements)
    return np.mean(cc @ kron(rho0, rho0) @ dagger(cc), axis=0)

def _second_moment_samples(rng, count, rho2):
    dim = int(round(np.sqrt(rho2.shape[0])))
    uu = _double(haar_unitaries(rng, dim, count))
    x = uu @ rho2 @ dagger(uu)
    return np.stack([x.real, x.imag], axis=1)

def haar_second_moment(rho0, samples, seed, chunk_size=DEFAULT_CHUNK_SIZE, workers=1):
    """Monte Carlo estimate of E_U[(U (x) U)(rho0 (x) rho0)(U (x) U)^dagger].

    Returns:
        (mean, stderr_re, stderr_im)
    """
    rho0 = check_density(rho0)
    est = run_chunked(partial(_second_moment_samples, rho2=kron(rho0, rho0)), samples, seed, chunk_size, workers)
    return est.mean[0] + 1j * est.mean[1], est.stderr[0], est.stderr[1]
