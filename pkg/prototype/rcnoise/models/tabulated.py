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
from ..dephasing import DecoherenceTrace, fields_from_angles
from ..config import resolve_path
from ..errors import ValidationError, GridRangeError

from ..logconfig import LogConfig
logger = LogConfig.getLogger(__file__)

class TabulatedDecoherence(DephasingModel):
    """Decoherence function D(t) = r(t) exp(i phi(t)) known only on a grid.

    The qubit coherence evolves as r exp(i(phi - Bt)), i.e. phi is the bath
    contribution on top of free precession at the static field B.
    """

    NAME = 'tabulated'

    def __init__(self, times, r, phi, B=0.0, source=None):
        super(TabulatedDecoherence, self).__init__()
        self.times = np.asarray(times, dtype=float)
        self.r = np.asarray(r, dtype=float)
        self.phi = np.asarray(phi, dtype=float)
        self.B = float(B)
        self.source = source

        if self.times.ndim != 1 or len(self.times) == 0:
            raise ValidationError('Tabulated decoherence needs at least one time')
        if self.r.shape != self.times.shape or self.phi.shape != self.times.shape:
            raise ValidationError('r and phi must have one value per time')
        if np.any(np.diff(self.times) <= 0):
            raise ValidationError('Tabulated times must be strictly increasing')
        if self.times[0] != 0.0 or abs(self.r[0] - 1.0) > 1e-9 or abs(self.phi[0]) > 1e-9:
            raise ValidationError('Tabulated data must start at t = 0 with r = 1, phi = 0 (got t = {}, r = {}, phi = {})'.format(
                                  self.times[0], self.r[0], self.phi[0]))
        self.r = self.r.copy()
        self.phi = self.phi.copy()
        self.r[0], self.phi[0] = 1.0, 0.0
        if np.any(self.r < 0) or np.any(self.r > 1):
            raise ValidationError('Tabulated r must lie in [0, 1]')

    def trace(self, grid=None):
        """DecoherenceTrace on the tabulated times, or interpolated onto <grid>"""
        times, r, phi = self.times, self.r, self.phi
        if grid is not None:
            grid = np.asarray(grid, dtype=float)
            if grid[0] < times[0] or grid[-1] > times[-1]:
                raise GridRangeError('Grid [{}, {}] exceeds the tabulated range [{}, {}]'.format(grid[0], grid[-1], times[0], times[-1]))
            r = np.interp(grid, times, r)
            phi = np.interp(grid, times, phi)
            times = grid
        return DecoherenceTrace.from_polar(times, r, phi - self.B * times, self.B,
                                           {'model': TabulatedDecoherence.NAME, 'source': self.source})

    def closed_form_angles(self):
        """Phi = -Bt + phi -/+ arccos(r), branch 1 taking the minus sign"""
        base = -self.B * self.times + self.phi
        spread = np.arccos(np.clip(self.r, 0.0, 1.0))
        return base - spread, base + spread

    def analytic_fields(self, grid=None):
        # derivatives of tabulated data still need finite differences, so
        # only the angles are closed-form here
        if grid is not None and not np.array_equal(np.asarray(grid, dtype=float), self.times):
            return None
        phi1, phi2 = self.closed_form_angles()
        return fields_from_angles(self.times, phi1, phi2, self.B)

    @staticmethod
    def from_spec(spec, base_dir=None):
        from ..parsers.decoherence import load_decoherence_csv

        if 'path' in spec:
            path = resolve_path(spec['path'], base_dir)
            return load_decoherence_csv(path, spec.get('B', 0.0))
        return TabulatedDecoherence(require(spec, 't', TabulatedDecoherence.NAME), require(spec, 'r', TabulatedDecoherence.NAME),
                                    require(spec, 'phi', TabulatedDecoherence.NAME), spec.get('B', 0.0))

    def __len__(self):
        return len(self.times)

    def __str__(self):
        return 'TabulatedDecoherence({} points, B={}, source={})'.format(len(self.times), self.B, self.source)
