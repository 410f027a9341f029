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

# Small dense complex linear algebra. Matrices are plain complex numpy
# arrays; the Hermitian/unitary "types" are enforced by the check_* helpers
# at the boundary of each operation.

from functools import reduce

import numpy as np
import scipy.linalg

from .errors import ValidationError
from .tolerances import resolve

from .logconfig import LogConfig
logger = LogConfig.getLogger(__file__)

SIGMA_0 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (SIGMA_0, SIGMA_X, SIGMA_Y, SIGMA_Z)

def as_matrix(a, name='matrix'):
    """Return <a> as a 2D complex array, rejecting empty or non-finite input"""
    m = np.array(a, dtype=complex)
    if m.ndim != 2 or m.size == 0:
        raise ValidationError('{} must be a non-empty 2D array (got shape {})'.format(name, m.shape))
    if not np.all(np.isfinite(m)):
        raise ValidationError('{} has non-finite entries'.format(name))
    return m

def as_square(a, name='matrix'):
    m = as_matrix(a, name)
    if m.shape[0] != m.shape[1]:
        raise ValidationError('{} must be square (got shape {})'.format(name, m.shape))
    return m

def dagger(a):
    return np.conj(np.swapaxes(a, -1, -2))

def check_hermitian(h, name='matrix', tol=None):
    h = as_square(h, name)
    err = np.max(np.abs(h - dagger(h)))
    if err > resolve(tol).hermitian:
        raise ValidationError('{} is not Hermitian (max deviation {:.3g})'.format(name, err))
    return h

def check_unitary(u, name='matrix', tol=None):
    u = as_square(u, name)
    err = np.max(np.abs(u @ dagger(u) - np.eye(u.shape[0])))
    if err > resolve(tol).unitary:
        raise ValidationError('{} is not unitary (max deviation of UU^dagger from I is {:.3g})'.format(name, err))
    return u

def kron(a, b):
    """Kronecker product a (x) b"""
    return np.kron(as_matrix(a, 'a'), as_matrix(b, 'b'))

def kron_all(*mats):
    return reduce(kron, mats)

def expm_hermitian(h, t, tol=None):
    """Return exp(-i h t) for a Hermitian h via its eigendecomposition.

    Args:
        h: Hermitian matrix (checked to the hermitian tolerance)
        t: real time

    Returns:
        the unitary V diag(exp(-i w t)) V^dagger
    """
    h = check_hermitian(h, 'h', tol)
    # symmetrise so eigh sees exactly Hermitian input
    w, v = scipy.linalg.eigh(0.5 * (h + dagger(h)))
    return (v * np.exp(-1j * w * t)) @ dagger(v)

def haar_unitaries(rng, n, size):
    """Draw <size> Haar-random SU(n) matrices from the Generator <rng>.

    QR decomposition of complex Ginibre matrices, with the phases of the R
    diagonal moved into Q so that Q is Haar distributed over U(n), then
    divided by the principal n-th root of its determinant.

    Returns:
        complex array of shape (size, n, n)
    """
    if n < 1:
        raise ValidationError('Unitary dimension must be >= 1 (got {})'.format(n))

    z = (rng.standard_normal((size, n, n)) + 1j * rng.standard_normal((size, n, n))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r, axis1=-2, axis2=-1)
    q = q * (d / np.abs(d))[:, np.newaxis, :]
    det = np.linalg.det(q)
    return q / (det ** (1.0 / n))[:, np.newaxis, np.newaxis]

def haar_random_unitary(n, seed):
    """A single Haar-random member of SU(n), deterministic for a given seed"""
    if n < 1:
        raise ValidationError('Unitary dimension must be >= 1 (got {})'.format(n))
    return haar_unitaries(np.random.default_rng(seed), n, 1)[0]

def wrap_phases(d, tol=None):
    """Map phases into (-pi, pi]; values within the branch tolerance of -pi become +pi"""
    d = np.asarray(d, dtype=float)
    d = np.where(d <= -np.pi + resolve(tol).branch, d + 2 * np.pi, d)
    return np.minimum(d, np.pi)

def eigenphases(u, tol=None):
    """Eigenphases d_j of a unitary, with u = sum_j exp(-i d_j)|j><j|.

    The complex Schur form of a normal matrix is diagonal, so its unitary
    factor gives an orthonormal eigenbasis even when eigenvalues coincide.

    Returns:
        (d, z): phases in (-pi, pi] and the matrix whose columns are the
        eigenvectors
    """
    u = check_unitary(u, 'u', tol)
    t, z = scipy.linalg.schur(u, output='complex')
    d = wrap_phases(-np.angle(np.diag(t)), tol)
    return d, z

def log_unitary(u, tol=None):
    """Hermitian H_U = sum_j d_j|j><j| with expm_hermitian(H_U, 1) == u"""
    d, z = eigenphases(u, tol)
    h = (z * d) @ dagger(z)
    return 0.5 * (h + dagger(h))

def partial_trace_bath(rho, dim_s, dim_b):
    """Trace out the second factor of a (dim_s*dim_b) square matrix ordered system (x) bath"""
    rho = np.asarray(rho)
    if rho.shape != (dim_s * dim_b, dim_s * dim_b):
        raise ValidationError('Cannot split a {} matrix into {} x {} factors'.format(rho.shape, dim_s, dim_b))
    return np.trace(rho.reshape(dim_s, dim_b, dim_s, dim_b), axis1=1, axis2=3)

def trace_distance(a, b):
    """Half the trace norm of a - b"""
    diff = np.asarray(a) - np.asarray(b)
    w = np.linalg.eigvalsh(0.5 * (diff + dagger(diff)))
    return 0.5 * float(np.sum(np.abs(w)))

def random_hermitian(rng, n, scale=1.0):
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return scale * (a + dagger(a)) / (2.0 * np.sqrt(n))

def random_density_matrix(rng, n):
    """Random full-rank state G G^dagger / Tr(G G^dagger) from a Ginibre matrix G"""
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    rho = g @ dagger(g)
    rho = rho / np.trace(rho).real
    return 0.5 * (rho + dagger(rho))
