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


class RCNoiseError(Exception):
    """Base class for all errors raised by rcnoise"""
    pass

class ValidationError(RCNoiseError, ValueError):
    """An input does not satisfy the invariants of its type"""
    pass

class ConfigError(RCNoiseError):
    pass

class StructuralError(RCNoiseError):
    """The evolution is not of dephasing form (or is affine)"""
    pass

class SingularityError(RCNoiseError):
    """Coherence dropped below the synthesis cutoff"""

    def __init__(self, message, time=None):
        super(SingularityError, self).__init__(message)
        self.time = time

class GridRangeError(RCNoiseError):
    """Requested time lies outside the sampled grid"""
    pass

class ModelValidityError(RCNoiseError):
    """The model produces an unphysical state on this grid"""
    pass

class CapabilityError(RCNoiseError):
    pass

class QuadratureError(RCNoiseError):

    def __init__(self, message, diagnostics=None):
        super(QuadratureError, self).__init__(message)
        self.diagnostics = diagnostics or {}

class ParseError(RCNoiseError):

    def __init__(self, message, path=None, line=None):
        if line is not None:
            message = '{}:{}: {}'.format(path, line, message)
        super(ParseError, self).__init__(message)
        self.path = path
        self.line = line
