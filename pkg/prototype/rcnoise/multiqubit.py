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

# Diagonal dephasing of n qubits. In the joint eigenbasis of a maximal set of
# commuting Pauli strings the noise is U_a(t) = diag(exp(-i a theta_j(t)))
# with a single random parameter a ~ p(a), so
#
#   rho_ij(t) = rho_ij(0) p~(theta_i(t) - theta_j(t)),  p~(x) = E[exp(-i a x)]

import itertools
import warnings
from functools import partial

import numpy as np
from scipy.integrate import quad, cumulative_trapezoid, trapezoid, IntegrationWarning

from .bloch import check_density
from .errors import ValidationError, GridRangeError, ModelValidityError, CapabilityError, QuadratureError
from .linalg import PAULIS, check_unitary, dagger, kron_all
from .montecarlo import run_chunked, DEFAULT_CHUNK_SIZE
from .tolerances import resolve

from .logconfig import LogConfig
logger = LogConfig.getLogger(__file__)

LETTERS = 'IXYZ'
# grid intervals per weighted quadrature panel of a density model
DENSITY_PANEL_SEGMENTS = 50

_ALIASES = {'0': 'I', 'i': 'I', 'x': 'X', 'y': 'Y', 'z': 'Z'}

class PauliString(object):
    """Tensor product of single-qubit Paulis, e.g. PauliString('XY')"""

    def __init__(self, letters):
        letters = [_ALIASES.get(l, l) for l in letters]
        if len(letters) == 0 or any(l not in LETTERS for l in letters):
            raise ValidationError('Invalid Pauli string {}'.format(letters))
        self.letters = ''.join(letters)
        self.n = len(self.letters)

    def symplectic(self):
        """(x, z) bit vectors: X = (1,0), Z = (0,1), Y = (1,1)"""
        x = np.array([l in 'XY' for l in self.letters], dtype=int)
        z = np.array([l in 'YZ' for l in self.letters], dtype=int)
        return x, z

    def code(self):
        """Integer with the x bits in the low n bits and the z bits above them"""
        x, z = self.symplectic()
        return int(sum(int(b) << k for k, b in enumerate(x)) + sum(int(b) << (self.n + k) for k, b in enumerate(z)))

    @staticmethod
    def from_code(code, n):
        letters = []
        for k in range(n):
            x, z = (code >> k) & 1, (code >> (n + k)) & 1
            letters.append(LETTERS[{(0, 0): 0, (1, 0): 1, (1, 1): 2, (0, 1): 3}[(x, z)]])
        return PauliString(letters)

    def matrix(self):
        return kron_all(*[PAULIS[LETTERS.index(l)] for l in self.letters])

    def is_identity(self):
        return set(self.letters) == {'I'}

    def __eq__(self, other):
        return isinstance(other, PauliString) and self.letters == other.letters

    def __hash__(self):
        return hash(self.letters)

    def __repr__(self):
        return 'PauliString({})'.format(self.letters)

    def __str__(self):
        return self.letters

def _as_pauli(p):
    return p if isinstance(p, PauliString) else PauliString(p)

def pauli_commutes(a, b):
    """True iff the strings anticommute at an even number of positions"""
    a, b = _as_pauli(a), _as_pauli(b)
    if a.n != b.n:
        raise ValidationError('Pauli strings have different sizes ({} vs {})'.format(a.n, b.n))
    xa, za = a.symplectic()
    xb, zb = b.symplectic()
    return int(xa @ zb + za @ xb) % 2 == 0

def _codes_commute(u, v, n):
    mask = (1 << n) - 1
    xu, zu = u & mask, u >> n
    xv, zv = v & mask, v >> n
    return bin((xu & zv) ^ (zu & xv)).count('1') % 2 == 0

class CommutingSet(object):
    """2^n - 1 pairwise commuting non-identity Pauli strings on n qubits"""

    def __init__(self, members):
        self.members = [_as_pauli(m) for m in members]
        if len(self.members) == 0:
            raise ValidationError('A commuting set needs members')
        self.n = self.members[0].n
        if any(m.n != self.n for m in self.members):
            raise ValidationError('Commuting set members have different sizes')
        if len(self.members) != 2 ** self.n - 1:
            raise ValidationError('A commuting set on {} qubits has {} members (got {})'.format(self.n, 2 ** self.n - 1, len(self.members)))
        if len(set(self.members)) != len(self.members):
            raise ValidationError('Commuting set has repeated members')
        if any(m.is_identity() for m in self.members):
            raise ValidationError('Commuting set must not contain the identity')
        for a, b in itertools.combinations(self.members, 2):
            if not pauli_commutes(a, b):
                raise ValidationError('{} and {} do not commute'.format(a, b))

    def is_closed(self):
        """True if the product of any two members is (up to phase) a member"""
        codes = {m.code() for m in self.members}
        return all((u ^ v) in codes for u, v in itertools.combinations(codes, 2))

    def matrices(self):
        return [m.matrix() for m in self.members]

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __repr__(self):
        return str(self)

    def __str__(self):
        return 'CommutingSet({{{}}})'.format(', '.join(str(m) for m in self.members))

def _maximal_subgroups(n):
    """All maximal commuting subgroups of the n-qubit Pauli group, as code sets without 0"""
    size = 2 ** n
    found = set()

    def extend(span, generators):
        if len(span) == size:
            found.add(frozenset(span - {0}))
            return
        # generators are taken in increasing order
        start = generators[-1] + 1 if generators else 1
        for v in range(start, 4 ** n):
            if v in span or not all(_codes_commute(v, g, n) for g in generators):
                continue
            extend(span | {v ^ s for s in span}, generators + [v])

    extend({0}, [])
    return sorted(found, key=lambda s: sorted(s))

def partition_commuting_sets(n, required=None):
    """Split the 4^n - 1 non-identity Pauli strings into 2^n + 1 commuting sets.

    Each set is a maximal commuting subgroup with the identity removed, found
    by exact-cover search, so only small n are supported.

    Args:
        n: number of qubits, 1 to 3
        required: optional list of strings that must form one of the sets

    Returns:
        list of CommutingSet
    """
    if n < 1 or n > 3:
        raise CapabilityError('Commuting-set partition is only searched for 1 <= n <= 3 (got {})'.format(n))

    groups = _maximal_subgroups(n)
    universe = set(range(1, 4 ** n))
    chosen = []
    if required is not None:
        req = frozenset(_as_pauli(p).code() for p in required)
        if req not in groups:
            raise ValidationError('Required set {} is not a maximal commuting set'.format([str(p) for p in required]))
        chosen.append(req)

    def search(covered):
        if covered == universe:
            return True
        target = min(universe - covered)
        for g in groups:
            if target in g and not (g & covered):
                chosen.append(g)
                if search(covered | g):
                    return True
                chosen.pop()
        return False

    if not search(set().union(*chosen) if chosen else set()):
        raise ValidationError('No commuting-set partition found for n = {}'.format(n))

    sets = [CommutingSet([PauliString.from_code(c, n) for c in sorted(g)]) for g in chosen]
    logger.debug('Partitioned {} Pauli strings into {} commuting sets'.format(4 ** n - 1, len(sets)))
    return sets

def simultaneous_eigenbasis(members, tol=None):
    """Unitary whose columns are joint eigenvectors of commuting Pauli strings.

    Starting from the whole space, each member splits every current block
    into its +1 and -1 eigenspaces.
    """
    matrices = [_as_pauli(m).matrix() for m in members]
    dim = matrices[0].shape[0]
    blocks = [np.eye(dim, dtype=complex)]
    for p in matrices:
        split = []
        for q in blocks:
            if q.shape[1] == 1:
                split.append(q)
                continue
            m = dagger(q) @ p @ q
            w, v = np.linalg.eigh(0.5 * (m + dagger(m)))
            for value in (1.0, -1.0):
                idx = np.abs(w - value) < 0.5
                if np.any(idx):
                    split.append(q @ v[:, idx])
        blocks = split
    return check_unitary(np.hstack(blocks), 'eigenbasis', tol)

class AlphaDistribution(object):
    """Distribution of the noise amplitude a, with characteristic function p~(x) = E[exp(-i a x)].

    Kinds: gaussian(sigma, mean), uniform(a, b), discrete(points, weights)
    and density (a tabulated pdf; p~ by quadrature, samples by inverse CDF).
    """

    KINDS = ['gaussian', 'uniform', 'discrete', 'density']

    def __init__(self, kind, **params):
        if kind not in AlphaDistribution.KINDS:
            raise ValidationError('Unknown distribution kind "{}" (expected one of {})'.format(kind, AlphaDistribution.KINDS))
        self.kind = kind
        self.params = params

        if kind == 'gaussian':
            if params.get('sigma', -1) < 0:
                raise ValidationError('Gaussian sigma must be >= 0')
        elif kind == 'uniform':
            if not params['b'] > params['a']:
                raise ValidationError('Uniform distribution needs b > a (got a = {}, b = {})'.format(params['a'], params['b']))
        elif kind == 'discrete':
            points = np.asarray(params['points'], dtype=float)
            weights = np.asarray(params['weights'], dtype=float)
            if points.shape != weights.shape or points.ndim != 1 or len(points) == 0:
                raise ValidationError('Discrete distribution needs matching points and weights')
            if np.any(weights < 0) or abs(np.sum(weights) - 1.0) > 1e-12:
                raise ValidationError('Discrete weights must be non-negative and sum to 1 (sum {})'.format(np.sum(weights)))
            self.params = {'points': points, 'weights': weights}
        elif kind == 'density':
            grid = np.asarray(params['grid'], dtype=float)
            pdf = np.asarray(params['pdf'], dtype=float)
            if grid.shape != pdf.shape or grid.ndim != 1 or len(grid) < 2 or np.any(np.diff(grid) <= 0):
                raise ValidationError('Density needs an increasing grid and one pdf value per grid point')
            norm = trapezoid(pdf, grid)
            if np.any(pdf < 0) or abs(norm - 1.0) > 1e-6:
                raise ValidationError('Density must be non-negative and integrate to 1 (integral {})'.format(norm))
            cdf = cumulative_trapezoid(pdf, grid, initial=0.0)
            self.params = {'grid': grid, 'pdf': pdf, 'cdf': cdf / cdf[-1]}

    @staticmethod
    def gaussian(sigma, mean=0.0):
        return AlphaDistribution('gaussian', sigma=float(sigma), mean=float(mean))

    @staticmethod
    def uniform(a, b):
        return AlphaDistribution('uniform', a=float(a), b=float(b))

    @staticmethod
    def discrete(points, weights):
        return AlphaDistribution('discrete', points=points, weights=weights)

    @staticmethod
    def density(grid, pdf):
        return AlphaDistribution('density', grid=grid, pdf=pdf)

    @staticmethod
    def from_spec(spec):
        spec = dict(spec)
        kind = spec.pop('kind', None)
        if kind is None:
            raise ValidationError('Distribution spec needs a "kind"')
        return AlphaDistribution(kind, **spec)

    def _density_characteristic(self, x):
        """Weighted QUADPACK over panels of the pdf grid, so each panel has few kinks"""
        if x == 0:
            return 1.0 + 0.0j
        grid, pdf = self.params['grid'], self.params['pdf']
        f = partial(np.interp, xp=grid, fp=pdf)
        edges = grid[::DENSITY_PANEL_SEGMENTS]
        if edges[-1] != grid[-1]:
            edges = np.append(edges, grid[-1])

        re, im, err, failures = 0.0, 0.0, 0.0, 0
        with warnings.catch_warnings():
            warnings.simplefilter('ignore', IntegrationWarning)
            for a, b in zip(edges[:-1], edges[1:]):
                for weight in ('cos', 'sin'):
                    res = quad(f, a, b, weight=weight, wvar=x, limit=200, full_output=1)
                    if weight == 'cos':
                        re += res[0]
                    else:
                        im += res[0]
                    err += res[1]
                    if len(res) > 3:
                        failures += 1

        if failures:
            diagnostics = {'x': float(x), 'panels': len(edges) - 1, 'abserr': err, 'failures': failures}
            if err > 1e-6:
                raise QuadratureError('Characteristic function quadrature did not converge at x = {} (error estimate {:.3g})'.format(
                                      x, err), diagnostics)
            logger.warning('Characteristic function at x = {}: {} panel(s) reported problems, error estimate {:.3g}'.format(
                           x, failures, err))
        return re - 1j * im

    def characteristic(self, x):
        """p~(x) = int p(a) exp(-i a x) da, elementwise over an array"""
        x = np.asarray(x, dtype=float)
        p = self.params
        if self.kind == 'gaussian':
            return np.exp(-1j * p.get('mean', 0.0) * x - 0.5 * (p['sigma'] * x) ** 2)
        if self.kind == 'uniform':
            mid, width = 0.5 * (p['a'] + p['b']), p['b'] - p['a']
            return np.exp(-1j * mid * x) * np.sinc(x * width / (2.0 * np.pi))
        if self.kind == 'discrete':
            return np.tensordot(np.exp(-1j * np.multiply.outer(x, p['points'])), p['weights'], axes=([-1], [0]))
        flat = np.array([self._density_characteristic(v) for v in x.ravel()])
        return flat.reshape(x.shape)

    def sample(self, rng, size):
        p = self.params
        if self.kind == 'gaussian':
            return rng.normal(p.get('mean', 0.0), p['sigma'], size)
        if self.kind == 'uniform':
            return rng.uniform(p['a'], p['b'], size)
        if self.kind == 'discrete':
            return rng.choice(p['points'], size=size, p=p['weights'])
        return np.interp(rng.uniform(0.0, 1.0, size), p['cdf'], p['grid'])

    def __repr__(self):
        return str(self)

    def __str__(self):
        shown = {k: v for k, v in self.params.items() if np.ndim(v) == 0}
        return 'AlphaDistribution({}, {})'.format(self.kind, shown)

def gamma_matrix(theta):
    """gamma_ij = theta_i - theta_j"""
    theta = np.asarray(theta, dtype=float)
    return theta[:, np.newaxis] - theta[np.newaxis, :]

def check_transitivity(gamma, tol=None):
    """Check gamma_ij = gamma_ik + gamma_kj for all triples.

    Returns:
        (ok, worst) where worst is the largest |gamma_ij - gamma_ik - gamma_kj|

    Raises:
        ValidationError: gamma is not square and antisymmetric
    """
    tol = resolve(tol)
    g = np.asarray(gamma, dtype=float)
    if g.ndim != 2 or g.shape[0] != g.shape[1]:
        raise ValidationError('gamma must be a square matrix (got shape {})'.format(g.shape))
    asym = np.max(np.abs(g + g.T))
    if asym > tol.antisymmetry:
        raise ValidationError('gamma is not antisymmetric (max |g + g^T| = {:.3g})'.format(asym))

    # v[i, k, j] = g_ij - g_ik - g_kj
    v = g[:, np.newaxis, :] - g[:, :, np.newaxis] - g[np.newaxis, :, :]
    worst = float(np.max(np.abs(v)))
    return worst <= tol.transitivity, worst

class BellBasisModel(object):
    """Diagonal multiqubit dephasing in the joint eigenbasis of a commuting set.

    Attributes:
        n: number of qubits
        basis: unitary whose columns are the eigenbasis
        times: grid on which theta is sampled
        theta: array (2^n, len(times)) of level phases theta_j(t)
        dist: AlphaDistribution of the noise amplitude
        gamma_rates: optional fixed matrix G replacing the phase differences
            by gamma(t) = G t; used to feed hand-made (possibly
            non-transitive) differences through the same pipeline
    """

    def __init__(self, n, basis, times, theta, dist, commuting_set=None, gamma_rates=None, tol=None):
        self.n = int(n)
        self.dim = 2 ** self.n
        self.basis = check_unitary(basis, 'basis', tol)
        self.times = np.asarray(times, dtype=float)
        self.theta = np.asarray(theta, dtype=float)
        self.dist = dist
        self.commuting_set = commuting_set
        self.gamma_rates = None if gamma_rates is None else np.asarray(gamma_rates, dtype=float)

        if self.basis.shape != (self.dim, self.dim):
            raise ValidationError('Basis must be {}x{} for {} qubits'.format(self.dim, self.dim, self.n))
        if self.theta.shape != (self.dim, len(self.times)):
            raise ValidationError('theta must have shape ({}, {}) (got {})'.format(self.dim, len(self.times), self.theta.shape))
        if self.gamma_rates is not None and self.gamma_rates.shape != (self.dim, self.dim):
            raise ValidationError('gamma rates must be {}x{}'.format(self.dim, self.dim))
        if np.any(np.diff(self.times) <= 0):
            raise ValidationError('theta grid must be strictly increasing')

        if commuting_set is not None:
            for p in commuting_set:
                d = dagger(self.basis) @ p.matrix() @ self.basis
                off = np.max(np.abs(d - np.diag(np.diag(d))))
                if off > 1e-9:
                    raise ValidationError('Basis does not diagonalize {} (off-diagonal {:.3g})'.format(p, off))

    def theta_at(self, t):
        if t < self.times[0] or t > self.times[-1]:
            raise GridRangeError('t = {} outside the theta grid [{}, {}]'.format(t, self.times[0], self.times[-1]))
        return np.array([np.interp(t, self.times, row) for row in self.theta])

    def gamma_at(self, t):
        if self.gamma_rates is not None:
            if t < self.times[0] or t > self.times[-1]:
                raise GridRangeError('t = {} outside the grid [{}, {}]'.format(t, self.times[0], self.times[-1]))
            return self.gamma_rates * t
        return gamma_matrix(self.theta_at(t))

    def to_model_basis(self, rho):
        return dagger(self.basis) @ rho @ self.basis

    @staticmethod
    def from_spec(spec, grid=None):
        """Build from `{n, commuting_set, theta: {grid, values | rates}, dist, gamma_rates?}`.

        theta.grid may be a list of times or {t_max, points}; when absent,
        <grid> is used. theta.rates gives theta_j(t) = rate_j t.
        """
        n = int(spec['n'])
        cset = None
        if 'commuting_set' in spec:
            cset = CommutingSet(spec['commuting_set'])
            basis = simultaneous_eigenbasis(cset.members)
        else:
            basis = np.eye(2 ** n, dtype=complex)

        tspec = spec.get('theta', {})
        times = tspec.get('grid', grid)
        if isinstance(times, dict):
            times = np.linspace(0.0, float(times['t_max']), int(times['points']))
        if times is None:
            raise ValidationError('No time grid given for the multiqubit model')
        times = np.asarray(times, dtype=float)

        if 'values' in tspec:
            theta = np.asarray(tspec['values'], dtype=float)
        elif 'rates' in tspec:
            theta = np.outer(np.asarray(tspec['rates'], dtype=float), times)
        elif 'gamma_rates' in spec:
            theta = np.zeros((2 ** n, len(times)))
        else:
            raise ValidationError('theta needs "values" or "rates"')

        return BellBasisModel(n, basis, times, theta, AlphaDistribution.from_spec(spec['dist']), cset, spec.get('gamma_rates'))

    def __repr__(self):
        return str(self)

    def __str__(self):
        return 'BellBasisModel(n={}, {} times, {})'.format(self.n, len(self.times), self.dist)

def r_matrix(model, t):
    """r_ij(t) = p~(gamma_ij(t)), with r_ii = 1 exactly"""
    r = np.asarray(model.dist.characteristic(model.gamma_at(t)), dtype=complex)
    np.fill_diagonal(r, 1.0)
    return r

def classical_multiqubit_evolve(rho0, model, t, tol=None):
    """rho_ij(t) = rho_ij(0) r_ij(t) in the model basis.

    Raises:
        ModelValidityError: the result has an eigenvalue below
            -multiqubit_positivity, i.e. this p~/gamma pair is not a channel
    """
    tol = resolve(tol)
    rho0 = check_density(rho0, model.dim, 'rho0', tol)
    rho = rho0 * r_matrix(model, t)
    np.fill_diagonal(rho, np.diag(rho0))
    wmin = float(np.min(np.linalg.eigvalsh(0.5 * (rho + dagger(rho)))))
    if wmin < -tol.multiqubit_positivity:
        raise ModelValidityError('Multiqubit state at t = {} is not positive (smallest eigenvalue {:.3g})'.format(t, wmin))
    return rho

def _alpha_phase_samples(rng, count, dist, gamma, rho0):
    alpha = dist.sample(rng, count)
    x = rho0[np.newaxis] * np.exp(-1j * alpha[:, np.newaxis, np.newaxis] * gamma[np.newaxis])
    return np.stack([x.real, x.imag], axis=1)

def mc_multiqubit_evolve(rho0, model, t, samples, seed, chunk_size=DEFAULT_CHUNK_SIZE, workers=1):
    """Monte Carlo average of U_a rho0 U_a^dagger over sampled a.

    Returns:
        (mean, stderr_re, stderr_im): mean state and standard errors of the
        real and imaginary parts of each entry
    """
    rho0 = check_density(rho0, model.dim, 'rho0')
    worker = partial(_alpha_phase_samples, dist=model.dist, gamma=model.gamma_at(t), rho0=rho0)
    est = run_chunked(worker, samples, seed, chunk_size, workers)
    mean = est.mean[0] + 1j * est.mean[1]
    return mean, est.stderr[0], est.stderr[1]
