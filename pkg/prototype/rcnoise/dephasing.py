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
from scipy.integrate import cumulative_trapezoid

from .bloch import check_density, dephasing_cs
from .errors import ValidationError, SingularityError, GridRangeError
from .linalg import as_square, dagger, kron, partial_trace_bath, trace_distance, check_unitary
from .output import write_csv, write_json
from .tolerances import resolve

from .logconfig import LogConfig
logger = LogConfig.getLogger(__file__)

def _check_grid(times, min_points=1):
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or len(times) < min_points:
        raise ValidationError('Time grid needs at least {} point(s) (got {})'.format(min_points, times.size))
    if not np.all(np.isfinite(times)):
        raise ValidationError('Time grid has non-finite entries')
    if np.any(np.diff(times) <= 0):
        raise ValidationError('Time grid must be strictly increasing')
    return times

class DecoherenceTrace(object):
    """Sampled off-diagonal evolution of a dephased qubit.

    The coherence evolves as rho_10(t) = (c(t) + i s(t)) rho_10(0), so c and
    s are the T_xx and T_yx entries of the transfer matrix.

    Attributes:
        times: strictly increasing grid starting at 0
        c, s: arrays on the grid
        B: static field of the model that produced the trace; it is added
            back to the angle derivatives when fields are synthesized
        metadata: free-form dict (validity flags, model name, ...)
    """

    def __init__(self, times, c, s, B=0.0, metadata=None, tol=None):
        tol = resolve(tol)
        self.times = _check_grid(times)
        self.c = np.asarray(c, dtype=float)
        self.s = np.asarray(s, dtype=float)
        self.B = float(B)
        self.metadata = {} if metadata is None else dict(metadata)

        if self.c.shape != self.times.shape or self.s.shape != self.times.shape:
            raise ValidationError('c and s must have one value per grid point')
        if self.times[0] != 0.0:
            raise ValidationError('Decoherence traces must start at t = 0 (got {})'.format(self.times[0]))
        if abs(self.c[0] - 1.0) > tol.round_trip or abs(self.s[0]) > tol.round_trip:
            raise ValidationError('Trace must start at (c, s) = (1, 0), got ({}, {})'.format(self.c[0], self.s[0]))
        # the start is pinned exactly so that branch angles start at 0
        self.c = self.c.copy()
        self.s = self.s.copy()
        self.c[0], self.s[0] = 1.0, 0.0

        r2 = self.c ** 2 + self.s ** 2
        bad = np.nonzero(r2 > 1.0 + tol.coherence)[0]
        if len(bad) > 0:
            raise ValidationError('c^2 + s^2 = {} > 1 at t = {}'.format(r2[bad[0]], self.times[bad[0]]))

    @staticmethod
    def from_polar(times, r, phi, B=0.0, metadata=None, tol=None):
        """Build from the decoherence function D(t) = r(t) exp(i phi(t)) = c + is"""
        r = np.asarray(r, dtype=float)
        phi = np.asarray(phi, dtype=float)
        return DecoherenceTrace(times, r * np.cos(phi), r * np.sin(phi), B, metadata, tol)

    @staticmethod
    def from_transfer_matrices(times, matrices, B=0.0, metadata=None, tol=None):
        """Build from quantum transfer matrices, rejecting anything not of dephasing form"""
        cs = np.array([dephasing_cs(T, tol) for T in matrices])
        return DecoherenceTrace(times, cs[:, 0], cs[:, 1], B, metadata, tol)

    @property
    def r(self):
        return np.sqrt(self.c ** 2 + self.s ** 2)

    @property
    def phase(self):
        """Unwrapped total phase atan2(s, c)"""
        return np.unwrap(np.arctan2(self.s, self.c))

    def coherence_factor(self):
        return self.c + 1j * self.s

    def __len__(self):
        return len(self.times)

    def __repr__(self):
        return str(self)

    def __str__(self):
        return 'DecoherenceTrace({} points, t_max={}, B={})'.format(len(self.times), self.times[-1], self.B)

def beta_of(c, s, tol=None):
    """beta = sqrt(1 - r^2)/r with r^2 = c^2 + s^2.

    r is clamped to 1 when it exceeds 1 by less than the coherence tolerance.

    Raises:
        ValidationError: r^2 > 1 beyond tolerance
        SingularityError: r < r_min
    """
    tol = resolve(tol)
    r2 = float(c) ** 2 + float(s) ** 2
    if r2 > 1.0 + tol.coherence:
        raise ValidationError('c^2 + s^2 = {} exceeds 1'.format(r2))
    r = min(np.sqrt(r2), 1.0)
    if r < tol.r_min:
        raise SingularityError('coherence too small to synthesize fields (r = {:.3g} < r_min = {:.3g})'.format(r, tol.r_min))
    return float(np.sqrt(1.0 - r * r) / r)

def _betas(times, c, s, tol):
    r = np.minimum(np.sqrt(c * c + s * s), 1.0)
    bad = np.nonzero(r < tol.r_min)[0]
    if len(bad) > 0:
        t_bad = float(times[bad[0]])
        raise SingularityError('coherence too small to synthesize fields at t = {} (r = {:.3g} < r_min = {:.3g})'.format(
                               t_bad, r[bad[0]], tol.r_min), time=t_bad)
    return np.sqrt(1.0 - r * r) / r

def branch_angles(c, s, times=None, tol=None):
    """Pointwise branch angles in (-pi, pi], before any unwrapping.

    (cos phi1, sin phi1) = (c + beta s, s - beta c) and
    (cos phi2, sin phi2) = (c - beta s, s + beta c).

    Raises:
        SingularityError: r < r_min at some point; <times> only labels it
    """
    tol = resolve(tol)
    c = np.asarray(c, dtype=float)
    s = np.asarray(s, dtype=float)
    if times is None:
        times = np.arange(c.size, dtype=float)
    beta = _betas(times, c, s, tol)
    return np.arctan2(s - beta * c, c + beta * s), np.arctan2(s + beta * c, c - beta * s)

def phase_angles(trace, tol=None):
    """The two branch angles whose rotations average to the trace.

    branch_angles at every grid point, each branch unwrapped along the grid.

    Returns:
        (phi1, phi2) arrays on trace.times
    """
    phi1, phi2 = branch_angles(trace.c, trace.s, trace.times, tol)
    return np.unwrap(phi1), np.unwrap(phi2)

class FieldPair(object):
    """Two-branch classical noise: field h1 or h2, each with probability 1/2.

    phi1/phi2 are the accumulated angles Phi_i(t) = int_0^t (-B + h_i) dt',
    which is what every evolution uses; h1/h2 are their derivatives.
    """

    P1 = 0.5
    P2 = 0.5

    def __init__(self, times, h1, h2, phi1, phi2, B=0.0, tol=None):
        self.times = _check_grid(times)
        self.h1 = np.asarray(h1, dtype=float)
        self.h2 = np.asarray(h2, dtype=float)
        self.phi1 = np.asarray(phi1, dtype=float)
        self.phi2 = np.asarray(phi2, dtype=float)
        self.B = float(B)
        for name in ('h1', 'h2', 'phi1', 'phi2'):
            if getattr(self, name).shape != self.times.shape:
                raise ValidationError('{} must have one value per grid point'.format(name))
        origin = max(abs(self.phi1[0]), abs(self.phi2[0]))
        if origin > resolve(tol).round_trip:
            raise ValidationError('Branch angles must start at 0 (got {}, {})'.format(self.phi1[0], self.phi2[0]))

    @staticmethod
    def from_fields(times, h1, h2, B=0.0):
        """Rebuild angles from fields by trapezoid integration of -B + h_i"""
        times = _check_grid(times, 2)
        h1 = np.asarray(h1, dtype=float)
        h2 = np.asarray(h2, dtype=float)
        phi1 = cumulative_trapezoid(h1 - B, times, initial=0.0)
        phi2 = cumulative_trapezoid(h2 - B, times, initial=0.0)
        return FieldPair(times, h1, h2, phi1, phi2, B)

    def integrated_angles(self):
        return (cumulative_trapezoid(self.h1 - self.B, self.times, initial=0.0),
                cumulative_trapezoid(self.h2 - self.B, self.times, initial=0.0))

    def round_trip_error(self):
        """Max relative error between integrated fields and stored angles"""
        errs = []
        for stored, integrated in zip((self.phi1, self.phi2), self.integrated_angles()):
            scale = max(np.max(np.abs(stored)), 1.0)
            errs.append(np.max(np.abs(integrated - stored)) / scale)
        return float(max(errs))

    def angle_drift(self):
        """Per time, the larger |integrated - stored| of the two branches"""
        return np.maximum(*[np.abs(integrated - stored) for stored, integrated
                            in zip((self.phi1, self.phi2), self.integrated_angles())])

    def drift_bound(self, tol=None):
        """Largest angle drift that trapezoid and finite-difference error explain.

        Integrating second-order differences of Phi with the trapezoid rule
        is off by at most half the largest second difference of Phi; twice
        that is allowed, plus the round-trip tolerance.
        """
        bound = 0.0
        if len(self.times) >= 3:
            bound = 2.0 * max(np.max(np.abs(np.diff(phi, 2))) for phi in (self.phi1, self.phi2))
        scale = max(np.max(np.abs(self.phi1)), np.max(np.abs(self.phi2)), 1.0)
        return float(bound + resolve(tol).round_trip * scale)

    def consistent(self, tol=None):
        """Copy whose angles are the integrated fields wherever the stored angles drift past drift_bound"""
        drifted = self.angle_drift() > self.drift_bound(tol)
        if not np.any(drifted):
            return self
        phi1, phi2 = self.integrated_angles()
        return FieldPair(self.times, self.h1, self.h2, np.where(drifted, phi1, self.phi1),
                         np.where(drifted, phi2, self.phi2), self.B, tol)

    def swapped(self):
        return FieldPair(self.times, self.h2, self.h1, self.phi2, self.phi1, self.B)

    def angles_at(self, t):
        """(phi1, phi2) at time t, linearly interpolated between grid points"""
        if t < self.times[0] or t > self.times[-1]:
            raise GridRangeError('t = {} outside the field grid [{}, {}]'.format(t, self.times[0], self.times[-1]))
        return float(np.interp(t, self.times, self.phi1)), float(np.interp(t, self.times, self.phi2))

    def to_csv(self, path):
        write_csv(path, [('t', self.times), ('h1', self.h1), ('h2', self.h2), ('phi1', self.phi1), ('phi2', self.phi2)])

    def __len__(self):
        return len(self.times)

    def __repr__(self):
        return str(self)

    def __str__(self):
        return 'FieldPair({} points, t_max={}, B={})'.format(len(self.times), self.times[-1], self.B)

def fields_from_angles(times, phi1, phi2, B=0.0):
    """h_i = dPhi_i/dt + B by second-order finite differences.

    Central differences inside the grid, second-order one-sided differences
    at the two ends.
    """
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or len(times) < 3:
        raise ValidationError('Field synthesis needs a grid of at least 3 points (got {})'.format(times.size))
    times = _check_grid(times, 3)
    phi1 = np.asarray(phi1, dtype=float)
    phi2 = np.asarray(phi2, dtype=float)
    h1 = np.gradient(phi1, times, edge_order=2) + B
    h2 = np.gradient(phi2, times, edge_order=2) + B
    return FieldPair(times, h1, h2, phi1, phi2, B)

def synthesize_fields(trace, swap=False, tol=None):
    """Classical field pair reproducing a decoherence trace.

    Both branches have probability 1/2, so <swap> only relabels them; models
    whose closed form lists the branches the other way round pass
    swap=True.
    """
    phi1, phi2 = phase_angles(trace, tol)
    if swap:
        phi1, phi2 = phi2, phi1
    fields = fields_from_angles(trace.times, phi1, phi2, trace.B)
    logger.debug('Synthesized {} (round-trip error {:.3g})'.format(fields, fields.round_trip_error()))
    return fields

def rotation_block(phi):
    """(x,y) block [[cos, -sin], [sin, cos]] of the Bloch rotation exp(-i sigma_z phi/2)"""
    c, s = np.cos(phi), np.sin(phi)
    return np.array([[c, -s], [s, c]])

def branch_unitary(phi):
    return np.diag([np.exp(-0.5j * phi), np.exp(0.5j * phi)])

def classical_evolve(rho0, fields, t, tol=None):
    """rho(t) = 1/2 sum_i R_i rho0 R_i^dagger with R_i = exp(-i sigma_z Phi_i(t)/2).

    Populations are copied so they are conserved exactly; only the
    coherences are multiplied by the branch average.
    """
    rho0 = check_density(rho0, 2, 'rho0', tol)
    phi1, phi2 = fields.angles_at(t)
    factor = FieldPair.P1 * np.exp(1j * phi1) + FieldPair.P2 * np.exp(1j * phi2)
    rho = rho0.copy()
    rho[1, 0] = factor * rho0[1, 0]
    rho[0, 1] = np.conj(factor) * rho0[0, 1]
    return rho

def classical_transfer_matrix(fields, t):
    """T^(Cl) with (x,y) block 1/2 R(phi1) + 1/2 R(phi2) and no affine part"""
    phi1, phi2 = fields.angles_at(t)
    T = np.eye(4)
    T[1:3, 1:3] = FieldPair.P1 * rotation_block(phi1) + FieldPair.P2 * rotation_block(phi2)
    return T

def dephase_state(rho0, trace, tol=None):
    """States rho(t) on trace.times obtained by applying the trace to rho0"""
    rho0 = check_density(rho0, 2, 'rho0', tol)
    states = []
    for d in trace.coherence_factor():
        rho = rho0.copy()
        rho[1, 0] = d * rho0[1, 0]
        rho[0, 1] = np.conj(d) * rho0[0, 1]
        states.append(rho)
    return states

class EquivalenceReport(object):

    def __init__(self, times, distances, tolerance, angle_drift=0.0, drift_bound=np.inf):
        self.times = np.asarray(times, dtype=float)
        self.distances = np.asarray(distances, dtype=float)
        self.tolerance = float(tolerance)
        self.angle_drift = float(angle_drift)
        self.drift_bound = float(drift_bound)

    @property
    def max_trace_distance(self):
        return float(np.max(self.distances))

    @property
    def passed(self):
        return self.max_trace_distance <= self.tolerance and self.angle_drift <= self.drift_bound

    def to_dict(self):
        return {
            'max_angle_drift': self.angle_drift,
            'max_trace_distance': self.max_trace_distance,
            'per_time': [{'t': float(t), 'trace_distance': float(d)} for t, d in zip(self.times, self.distances)],
            'pass': self.passed,
            'tolerance': self.tolerance,
        }

    def to_json(self, path):
        write_json(path, self.to_dict())

    def __repr__(self):
        return str(self)

    def __str__(self):
        return 'EquivalenceReport(max_trace_distance={:.3g}, tolerance={:.3g}, max_angle_drift={:.3g}, pass={})'.format(
               self.max_trace_distance, self.tolerance, self.angle_drift, self.passed)

def verify_equivalence(quantum_states, fields, tolerance=1e-6, rho0=None, tol=None, times=None):
    """Compare quantum reduced states with the classical model on the field grid.

    The classical side uses the stored angles of <fields> except at times
    where they no longer follow from integrating h1 and h2; there the
    integrated fields are evolved instead and the report fails.

    Args:
        quantum_states: one qubit density matrix per grid time of <fields>
        fields: the synthesized FieldPair
        tolerance: maximum trace distance for the report to pass
        rho0: initial state for the classical side; defaults to
            quantum_states[0]
        times: grid of <quantum_states>, checked against fields.times

    Returns:
        EquivalenceReport
    """
    if len(quantum_states) != len(fields.times):
        raise ValidationError('Got {} quantum states for a {}-point field grid'.format(len(quantum_states), len(fields.times)))
    if times is not None:
        times = np.asarray(times, dtype=float)
        scale = max(float(np.max(np.abs(fields.times))), 1.0)
        if times.shape != fields.times.shape or np.max(np.abs(times - fields.times)) > resolve(tol).round_trip * scale:
            raise ValidationError('Quantum state grid does not match the field grid')
    if rho0 is None:
        rho0 = quantum_states[0]

    drift = fields.angle_drift()
    bound = fields.drift_bound(tol)
    if np.any(drift > bound):
        t_bad = fields.times[np.argmax(drift > bound)]
        logger.warning('Fields do not integrate to the stored angles from t = {} (drift {:.3g} > {:.3g})'.format(
                       t_bad, np.max(drift), bound))
    evolved = fields.consistent(tol)

    distances = [trace_distance(np.asarray(q), classical_evolve(rho0, evolved, t, tol))
                 for q, t in zip(quantum_states, fields.times)]
    report = EquivalenceReport(fields.times, distances, tolerance, np.max(drift), bound)
    logger.info('Equivalence check: {}'.format(report))
    return report

class KrausSet(object):
    """Channel rho -> sum_a M_a rho M_a^dagger, complete to the kraus tolerance"""

    def __init__(self, operators, tol=None):
        tol = resolve(tol)
        if len(operators) == 0:
            raise ValidationError('A Kraus set needs at least one operator')
        self.operators = [as_square(m, 'Kraus operator') for m in operators]
        dim = self.operators[0].shape[0]
        if any(m.shape != (dim, dim) for m in self.operators):
            raise ValidationError('Kraus operators must all have the same shape')

        err = np.max(np.abs(sum(dagger(m) @ m for m in self.operators) - np.eye(dim)))
        if err > tol.kraus:
            raise ValidationError('Kraus set is not complete (max |sum M^dagger M - I| = {:.3g})'.format(err))

    @property
    def dim(self):
        return self.operators[0].shape[0]

    def __len__(self):
        return len(self.operators)

    def apply(self, rho):
        rho = np.asarray(rho, dtype=complex)
        return sum(m @ rho @ dagger(m) for m in self.operators)

    @staticmethod
    def from_unitaries(probabilities, unitaries, tol=None):
        """M_a = sqrt(p_a) U_a"""
        return KrausSet([np.sqrt(p) * check_unitary(u, tol=tol) for p, u in zip(probabilities, unitaries)], tol)

    @staticmethod
    def from_fields(fields, t, tol=None):
        phi1, phi2 = fields.angles_at(t)
        return KrausSet.from_unitaries([FieldPair.P1, FieldPair.P2], [branch_unitary(phi1), branch_unitary(phi2)], tol)

    def __repr__(self):
        return str(self)

    def __str__(self):
        return 'KrausSet({} operators, dim={})'.format(len(self), self.dim)

def _gram_schmidt_complete(columns, dim, tol):
    """Extend orthonormal columns to a basis of C^dim with standard basis candidates"""
    basis = [c for c in columns]
    for k in range(dim):
        if len(basis) == dim:
            break
        v = np.zeros(dim, dtype=complex)
        v[k] = 1.0
        # two passes keep the result orthogonal to working precision
        for _ in range(2):
            for b in basis:
                v = v - np.vdot(b, v) * b
        norm = np.linalg.norm(v)
        if norm > tol:
            basis.append(v / norm)
    return basis[len(columns):]

def dilation_build(kraus, tol=None):
    """System-bath unitary U_T reproducing a Kraus channel.

    Ordering is system (x) bath with D = len(kraus) bath levels. Columns for
    inputs |n>|0> are sum_a M_a|n> (x) |a>; the other S(D-1) columns are
    completed by Gram-Schmidt.

    Returns:
        unitary of size S*D, with Tr_B[U (rho (x) |0><0|) U^dagger] equal to
        kraus.apply(rho)
    """
    tol = resolve(tol)
    S, D = kraus.dim, len(kraus)
    size = S * D

    isometry = []
    for n in range(S):
        col = np.zeros(size, dtype=complex)
        for a, m in enumerate(kraus.operators):
            e_a = np.zeros(D)
            e_a[a] = 1.0
            col += np.kron(m[:, n], e_a)
        isometry.append(col)

    rest = iter(_gram_schmidt_complete(isometry, size, 1e-6))
    u = np.zeros((size, size), dtype=complex)
    for n in range(S):
        for a in range(D):
            u[:, n * D + a] = isometry[n] if a == 0 else next(rest)

    return check_unitary(u, 'dilation', tol)

def apply_dilation(u_total, rho, bath_dim):
    """Tr_B[U (rho (x) |0><0|) U^dagger]"""
    env = np.zeros((bath_dim, bath_dim), dtype=complex)
    env[0, 0] = 1.0
    full = u_total @ kron(rho, env) @ dagger(u_total)
    return partial_trace_bath(full, np.asarray(rho).shape[0], bath_dim)
