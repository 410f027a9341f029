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


from .errors import ConfigError

class Tolerances(object):
    """Numerical tolerances shared by every module.

    All values are absolute unless the name says otherwise. An instance can
    be built from the [tolerances] table of a configuration file with
    Tolerances.from_config; unknown keys are rejected.
    """

    DEFAULTS = {
        'hermitian': 1e-12,
        'unitary': 1e-10,
        'round_trip': 1e-9,
        'trace': 1e-12,
        'positivity': 1e-10,
        'bloch_norm': 1e-10,
        'coherence': 1e-9,
        'structure': 1e-9,
        'r_min': 1e-6,
        'branch': 1e-12,
        'kraus': 1e-10,
        'multiqubit_positivity': 1e-8,
        'transitivity': 1e-10,
        'antisymmetry': 1e-12,
    }

    def __init__(self, **overrides):
        for k in overrides:
            if k not in Tolerances.DEFAULTS:
                raise ConfigError('Unknown tolerance "{}"'.format(k))

        for k, v in Tolerances.DEFAULTS.items():
            value = float(overrides.get(k, v))
            if value < 0:
                raise ConfigError('Tolerance "{}" must be non-negative (got {})'.format(k, value))
            setattr(self, k, value)

    @staticmethod
    def from_config(config):
        return Tolerances(**config.get('tolerances', {}))

    def as_dict(self):
        return {k: getattr(self, k) for k in Tolerances.DEFAULTS}

    def __repr__(self):
        return str(self)

    def __str__(self):
        return 'Tolerances({})'.format(', '.join('{}={}'.format(k, v) for k, v in sorted(self.as_dict().items())))

DEFAULT_TOLERANCES = Tolerances()

def resolve(tol):
    return DEFAULT_TOLERANCES if tol is None else tol
