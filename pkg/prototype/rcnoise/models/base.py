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


from ..dephasing import dephase_state
from ..errors import ValidationError

class DephasingModel(object):
    """Base class for the generators of decoherence traces.

    Subclasses set NAME (the "type" used in JSON model specs), implement
    trace(grid) and from_spec(spec), and may override analytic_fields when a
    closed form for the classical fields exists.
    """

    NAME = 'DephasingModel'
    # True when the closed-form branch labels are the reverse of the
    # generic (c + beta s, s - beta c) construction
    SWAP_BRANCHES = False

    def __init__(self):
        self.name = self.__class__.NAME

    def trace(self, grid):
        raise NotImplementedError()

    def analytic_fields(self, grid):
        """FieldPair from closed-form angles, or None if there is no closed form"""
        return None

    def quantum_states(self, rho_s0, grid):
        """Reduced qubit states on the grid for the initial state rho_s0"""
        return dephase_state(rho_s0, self.trace(grid))

    @staticmethod
    def from_spec(spec, base_dir=None):
        raise NotImplementedError()

    def __repr__(self):
        return str(self)

    def __str__(self):
        return '{}()'.format(self.__class__.__name__)

def require(spec, key, model_name):
    if key not in spec:
        raise ValidationError('Model spec for "{}" is missing "{}"'.format(model_name, key))
    return spec[key]
