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

from .base import DephasingModel, require
from ..dephasing import DecoherenceTrace, FieldPair
from ..errors import ValidationError

from ..logconfig import LogConfig
logger = LogConfig.getLogger(__file__)

class CentralSpinParams(DephasingModel):
    """Central spin in a nuclear spin bath, D(t) = exp(i arctan(at) - iBt) / sqrt(1 + a^2 t^2).

    alpha is an effective inverse time; the form only holds for alpha*t << 1,
    so traces flag the grid points where alpha*t > 1 but are still computed.
    """

    NAME = 'central-spin'
    # the closed form puts the free-precession branch second
    SWAP_BRANCHES = True

    def __init__(self, alpha=1.0, B=0.0):
        super(CentralSpinParams, self).__init__()
        if alpha <= 0:
            raise ValidationError('Central spin alpha must be positive (got {})'.format(alpha))
        self.alpha = float(alpha)
        self.B = float(B)

    def trace(self, grid):
        return central_spin_trace(self, grid)

    def analytic_angles(self, grid):
        return central_spin_angles(self, grid)

    def analytic_fields(self, grid):
        return central_spin_fields(self, grid)

    @staticmethod
    def from_spec(spec, base_dir=None):
        return CentralSpinParams(require(spec, 'alpha', CentralSpinParams.NAME), spec.get('B', 0.0))

    def __str__(self):
        return 'CentralSpinParams(alpha={}, B={})'.format(self.alpha, self.B)

def central_spin_trace(params, grid):
    grid = np.asarray(grid, dtype=float)
    at = params.alpha * grid
    r = 1.0 / np.sqrt(1.0 + at * at)
    phase = np.arctan(at) - params.B * grid

    outside = grid[at > 1.0]
    if len(outside) > 0:
        logger.warning('Central spin model used outside alpha*t << 1 for {} of {} grid points (from t = {})'.format(
                       len(outside), len(grid), outside[0]))

    metadata = {'model': CentralSpinParams.NAME, 'validity_exceeded': outside.tolist()}
    return DecoherenceTrace.from_polar(grid, r, phase, params.B, metadata)

def central_spin_angles(params, grid):
    """Closed-form branch angles (-Bt + 2 arctan(at), -Bt)"""
    grid = np.asarray(grid, dtype=float)
    precession = -params.B * grid
    return precession + 2.0 * np.arctan(params.alpha * grid), precession

def central_spin_fields(params, grid):
    """h1 = 2a/(1 + a^2 t^2), h2 = 0, with the closed-form angles"""
    grid = np.asarray(grid, dtype=float)
    phi1, phi2 = central_spin_angles(params, grid)
    h1 = 2.0 * params.alpha / (1.0 + (params.alpha * grid) ** 2)
    return FieldPair(grid, h1, np.zeros_like(grid), phi1, phi2, params.B)
