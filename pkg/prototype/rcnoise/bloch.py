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

# Conventions: rho = 1/2 (n0 I + nx X + ny Y + nz Z) with n_i = Tr(sigma_i rho),
# row/column order of transfer matrices is (0, x, y, z), and composite
# spaces are ordered qubit (x) bath.

import numpy as np

from .errors import ValidationError, StructuralError
from .linalg import PAULIS, SIGMA_Z, SIGMA_0
from .linalg import as_square, check_hermitian, check_unitary, dagger, expm_hermitian, kron, partial_trace_bath
from .tolerances import resolve

from .logconfig import LogConfig
logger = LogConfig.getLogger(__file__)

# initial conditions used to pin down the affine transfer map
BASIS_BLOCH_VECTORS = np.array([[1.0, 0.0, 0.0, 0.0],
                                [1.0, 1.0, 0.0, 0.0],
                                [1.0, 0.0, 1.0, 0.0],
                                [1.0, 0.0, 0.0, 1.0]])

def check_density(rho, dim=None, name='rho', tol=None):
    """Validate a density matrix: Hermitian, unit trace, positive semidefinite"""
    tol = resolve(tol)
    rho = check_hermitian(rho, name, tol)
    if dim is not None and rho.shape != (dim, dim):
        raise ValidationError('{} must be {}x{} (got {})'.format(name, dim, dim, rho.shape))
    tr = np.trace(rho)
    if abs(tr - 1.0) > tol.trace:
        raise ValidationError('{} has trace {} (expected 1)'.format(name, tr))
    wmin = np.min(np.linalg.eigvalsh(0.5 * (rho + dagger(rho))))
    if wmin < -tol.positivity:
        raise ValidationError('{} is not positive semidefinite (smallest eigenvalue {:.3g})'.format(name, wmin))
    return rho

def density_to_bloch(rho, tol=None):
    """Expanded Bloch vector (1, nx, ny, nz) of a qubit density matrix"""
    rho = check_density(rho, 2, tol=tol)
    return np.array([np.trace(p @ rho).real for p in PAULIS])

def bloch_to_density(n, tol=None):
    """Density matrix 1/2 sum_i n_i sigma_i of an expanded Bloch vector"""
    tol = resolve(tol)
    n = np.asarray(n, dtype=float)
    if n.shape != (4,):
        raise ValidationError('Expanded Bloch vector must have 4 components (got shape {})'.format(n.shape))
    if abs(n[0] - 1.0) > tol.trace:
        raise ValidationError('Expanded Bloch vector must have n0 = 1 (got {})'.format(n[0]))
    norm2 = float(np.dot(n[1:], n[1:]))
    if norm2 > 1.0 + tol.bloch_norm:
        raise ValidationError('Bloch vector norm {} exceeds 1'.format(np.sqrt(norm2)))
    return 0.5 * sum(c * p for c, p in zip(n, PAULIS))

def _bath_dim(dim_total, rho_b0):
    dim_b = rho_b0.shape[0]
    if dim_total != 2 * dim_b:
        raise ValidationError('Total dimension {} does not match qubit x bath dimension 2 x {}'.format(dim_total, dim_b))
    return dim_b

def transfer_matrix_from_unitary(u_total, rho_b0, tol=None):
    """Transfer matrix of rho_S -> Tr_B[U (rho_S (x) rho_B) U^dagger].

    The map is fixed by evolving the four basis Bloch vectors: the image of
    (1,0,0,0) is the first column (the affine part) and the image of
    (1,e_k) minus that column gives column k.
    """
    rho_b0 = check_density(rho_b0, name='rho_b0', tol=tol)
    u_total = check_unitary(u_total, 'u_total', tol)
    dim_b = _bath_dim(u_total.shape[0], rho_b0)

    images = []
    for n in BASIS_BLOCH_VECTORS:
        rho = kron(bloch_to_density(n, tol), rho_b0)
        rho_t = u_total @ rho @ dagger(u_total)
        rho_s = partial_trace_bath(rho_t, 2, dim_b)
        images.append([np.trace(p @ rho_s).real for p in PAULIS])

    images = np.array(images).T
    T = np.empty((4, 4))
    T[:, 0] = images[:, 0]
    T[:, 1:] = images[:, 1:] - images[:, [0]]
    return T

def quantum_transfer_matrix(h_total, rho_b0, t, tol=None):
    """Quantum transfer matrix T^(Q) for evolution under exp(-i h_total t).

    Args:
        h_total: Hermitian matrix on qubit (x) bath
        rho_b0: initial bath state
        t: time

    Returns:
        4x4 real matrix acting on expanded Bloch vectors
    """
    h_total = check_hermitian(h_total, 'h_total', tol)
    rho_b0 = as_square(rho_b0, 'rho_b0')
    _bath_dim(h_total.shape[0], rho_b0)
    return transfer_matrix_from_unitary(expm_hermitian(h_total, t, tol), rho_b0, tol)

class UVPair(object):
    """Bath operators u, v with U = I (x) u + sigma_z (x) v"""

    def __init__(self, u, v, t=None, tol=None):
        self.u = as_square(u, 'u')
        self.v = as_square(v, 'v')
        self.t = t
        if self.u.shape != self.v.shape:
            raise ValidationError('u and v must have equal shapes ({} vs {})'.format(self.u.shape, self.v.shape))
        self.check(tol)

    @property
    def bath_dim(self):
        return self.u.shape[0]

    def check(self, tol=None):
        """Verify uu^dagger + vv^dagger = I and uv^dagger + vu^dagger = 0"""
        tol = resolve(tol)
        u, v = self.u, self.v
        e1 = np.max(np.abs(u @ dagger(u) + v @ dagger(v) - np.eye(self.bath_dim)))
        e2 = np.max(np.abs(u @ dagger(v) + v @ dagger(u)))
        if max(e1, e2) > tol.round_trip:
            raise StructuralError('u/v pair violates the unitarity relations (errors {:.3g}, {:.3g})'.format(e1, e2))

    def unitary(self):
        return kron(SIGMA_0, self.u) + kron(SIGMA_Z, self.v)

    def __repr__(self):
        return str(self)

    def __str__(self):
        return 'UVPair(bath_dim={}, t={})'.format(self.bath_dim, self.t)

def uv_decompose(u_total, t=None, tol=None):
    """Split a dephasing-form unitary into u = 1/2 Tr_S[U], v = 1/2 Tr_S[sigma_z U]"""
    tol = resolve(tol)
    u_total = check_unitary(u_total, 'u_total', tol)
    dim = u_total.shape[0]
    if dim % 2 != 0:
        raise ValidationError('Unitary dimension {} is not 2 x bath dimension'.format(dim))
    dim_b = dim // 2

    zi = kron(SIGMA_Z, np.eye(dim_b))
    comm = np.max(np.abs(u_total @ zi - zi @ u_total))
    if comm > tol.unitary:
        raise StructuralError('Unitary does not commute with sigma_z (x) I (max deviation {:.3g}); not a dephasing evolution'.format(comm))

    blocks = u_total.reshape(2, dim_b, 2, dim_b)
    a = blocks[0, :, 0, :]
    d = blocks[1, :, 1, :]
    pair = UVPair(0.5 * (a + d), 0.5 * (a - d), t, tol)

    err = np.max(np.abs(pair.unitary() - u_total))
    if err > tol.unitary:
        raise StructuralError('u/v reconstruction error {:.3g}'.format(err))
    return pair

def cs_from_uv(uv, rho_b0, tol=None):
    """(c, s) of the dephasing transfer matrix from a u/v pair.

    With U = diag(A, D) on the qubit, the coherence rho_10 is multiplied by
    c + is = Tr[A^dagger D rho_B], which expands to
    c = Tr[(u^dagger u - v^dagger v) rho_B] and
    s = Tr[i(u^dagger v - v^dagger u) rho_B].
    """
    tol = resolve(tol)
    rho_b0 = check_density(rho_b0, uv.bath_dim, 'rho_b0', tol)
    u, v = uv.u, uv.v
    c = np.trace((dagger(u) @ u - dagger(v) @ v) @ rho_b0)
    s = np.trace(1j * (dagger(u) @ v - dagger(v) @ u) @ rho_b0)
    for name, x in (('c', c), ('s', s)):
        if abs(x.imag) > tol.unitary:
            raise StructuralError('{} has imaginary part {:.3g}'.format(name, x.imag))
    c, s = float(c.real), float(s.real)
    if c * c + s * s > 1.0 + tol.coherence:
        raise StructuralError('c^2 + s^2 = {} exceeds 1'.format(c * c + s * s))
    return c, s

def dephasing_cs(T, tol=None):
    """Read (c, s) from a transfer matrix after checking it is of dephasing form.

    Raises:
        StructuralError: for an affine map (T_i0 != delta_i0), for a map that
            moves populations, or for an (x,y) block that is not c*I + s*J
    """
    tol = resolve(tol)
    T = np.asarray(T, dtype=float)
    if T.shape != (4, 4):
        raise ValidationError('Transfer matrix must be 4x4 (got {})'.format(T.shape))

    affine = np.max(np.abs(T[:, 0] - np.array([1.0, 0.0, 0.0, 0.0])))
    if affine > tol.structure:
        raise StructuralError('Transfer matrix has an affine part (max |T_i0 - delta_i0| = {:.3g}); '
                              'such evolutions have no classical noise model'.format(affine))

    zfix = np.array([T[0, 1], T[0, 2], T[0, 3], T[3, 1], T[3, 2], T[1, 3], T[2, 3], T[3, 3] - 1.0])
    if np.max(np.abs(zfix)) > tol.structure:
        raise StructuralError('Transfer matrix does not conserve sigma_z (max deviation {:.3g})'.format(np.max(np.abs(zfix))))

    block = T[1:3, 1:3]
    if abs(block[0, 0] - block[1, 1]) > tol.structure or abs(block[0, 1] + block[1, 0]) > tol.structure:
        raise StructuralError('(x,y) block {} is not of the form [[c, -s], [s, c]]'.format(block.tolist()))

    return 0.5 * (block[0, 0] + block[1, 1]), 0.5 * (block[1, 0] - block[0, 1])
