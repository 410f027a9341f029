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
from scipy.stats import kstest

from rcnoise.errors import ValidationError
from rcnoise.linalg import SIGMA_X, SIGMA_Y, SIGMA_Z, check_hermitian, check_unitary, dagger, eigenphases, expm_hermitian
from rcnoise.linalg import haar_random_unitary, haar_unitaries, kron, log_unitary, partial_trace_bath
from rcnoise.linalg import random_density_matrix, trace_distance, wrap_phases

def test_expm_hermitian_pauli_z():
    t = 0.7
    u = expm_hermitian(SIGMA_Z, t)
    assert np.allclose(u, np.diag([np.exp(-1j * t), np.exp(1j * t)]), atol=1e-14)

def test_check_hermitian_rejects():
    with pytest.raises(ValidationError):
        check_hermitian(np.array([[0, 1], [0, 0]]))

def test_check_unitary_rejects():
    with pytest.raises(ValidationError):
        check_unitary(2 * np.eye(2))

def test_haar_unitaries_are_special_unitary():
    rng = np.random.default_rng(3)
    us = haar_unitaries(rng, 3, 50)
    for u in us:
        assert np.allclose(dagger(u) @ u, np.eye(3), atol=1e-10)
        assert abs(np.linalg.det(u) - 1.0) < 1e-10

def test_haar_random_unitary_reproducible():
    assert np.array_equal(haar_random_unitary(4, 17), haar_random_unitary(4, 17))
    assert not np.array_equal(haar_random_unitary(4, 17), haar_random_unitary(4, 18))

def test_haar_marginal_uniform():
    # |U_00|^2 of a Haar-random 2x2 unitary is uniform on [0, 1]
    us = haar_unitaries(np.random.default_rng(11), 2, 100000)
    x = np.abs(us[:, 0, 0]) ** 2
    assert kstest(x, 'uniform').pvalue > 1e-3

def test_log_unitary_round_trip():
    u = haar_random_unitary(4, 5)
    h = log_unitary(u)
    assert np.allclose(h, dagger(h), atol=1e-12)
    assert np.allclose(expm_hermitian(h, 1.0), u, atol=1e-10)

def test_eigenphase_range():
    d, _ = eigenphases(haar_random_unitary(5, 9))
    assert np.all(d > -np.pi) and np.all(d <= np.pi)

def test_wrap_phases_branch():
    assert wrap_phases(-np.pi) == pytest.approx(np.pi)
    assert wrap_phases(np.pi) == pytest.approx(np.pi)
    assert wrap_phases(0.5) == 0.5

def test_partial_trace_of_product():
    rng = np.random.default_rng(0)
    a = random_density_matrix(rng, 2)
    b = random_density_matrix(rng, 3)
    assert np.allclose(partial_trace_bath(kron(a, b), 2, 3), a, atol=1e-14)
    with pytest.raises(ValidationError):
        partial_trace_bath(kron(a, b), 3, 3)

def test_trace_distance():
    zero = np.diag([1.0, 0.0])
    one = np.diag([0.0, 1.0])
    assert trace_distance(zero, one) == pytest.approx(1.0)
    assert trace_distance(zero, zero) == 0.0
    plus = 0.5 * (np.eye(2) + SIGMA_X)
    assert trace_distance(zero, plus) == pytest.approx(np.sqrt(0.5))

def test_expm_hermitian_quarter_turn():
    assert np.allclose(expm_hermitian(SIGMA_X, np.pi / 2), -1j * SIGMA_X, atol=1e-14)

def test_minus_identity_phases():
    # both eigenvalues at the branch cut land on +pi
    d, _ = eigenphases(-np.eye(2))
    assert np.allclose(d, [np.pi, np.pi], atol=1e-15)
    assert np.allclose(log_unitary(-np.eye(2)), np.pi * np.eye(2), atol=1e-14)
    assert np.allclose(expm_hermitian(log_unitary(-np.eye(2)), 1.0), -np.eye(2), atol=1e-14)

def test_kron_examples():
    assert np.array_equal(kron(SIGMA_Z, np.eye(2)), np.diag([1, 1, -1, -1]))
    assert np.array_equal(kron(np.eye(2), SIGMA_Z), np.diag([1, -1, 1, -1]))
    xz = kron(SIGMA_X, SIGMA_Z)
    assert xz.shape == (4, 4)
    assert np.array_equal(xz[:2, 2:], SIGMA_Z) and np.array_equal(xz[:2, :2], np.zeros((2, 2)))
    assert np.array_equal(kron([[2.0]], SIGMA_Y), 2.0 * SIGMA_Y)

def test_kron_mixed_product():
    rng = np.random.default_rng(3)
    a, c = rng.normal(size=(2, 3, 3)) + 1j * rng.normal(size=(2, 3, 3))
    b, d = rng.normal(size=(2, 2, 2)) + 1j * rng.normal(size=(2, 2, 2))
    assert np.allclose(kron(a, b) @ kron(c, d), kron(a @ c, b @ d), atol=1e-12)
