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


import json
import os

from .central_spin import CentralSpinParams
from .finite_bath import FiniteBathModel
from .spin_boson import SpinBosonParams
from .tabulated import TabulatedDecoherence
from ..config import resolve_path
from ..errors import ValidationError, ParseError

from ..logconfig import LogConfig
logger = LogConfig.getLogger(__file__)

MODEL_TYPES = {
    SpinBosonParams.NAME: SpinBosonParams,
    CentralSpinParams.NAME: CentralSpinParams,
    TabulatedDecoherence.NAME: TabulatedDecoherence,
    FiniteBathModel.NAME: FiniteBathModel,
}

def model_from_spec(spec, base_dir=None):
    """Build a model from a spec dict naming its "type" and parameters.

    A spec that only has a "path" key is read as a JSON document first;
    relative paths are taken relative to <base_dir>.
    """
    spec = dict(spec)
    if 'type' not in spec and 'path' in spec:
        path = resolve_path(spec['path'], base_dir)
        spec = load_model_spec(path)
        base_dir = os.path.dirname(os.path.abspath(path))

    kind = spec.get('type')
    if kind not in MODEL_TYPES:
        raise ValidationError('Unknown model type "{}" (expected one of {})'.format(kind, sorted(MODEL_TYPES.keys())))

    model = MODEL_TYPES[kind].from_spec(spec, base_dir)
    logger.info('Model: {}'.format(model))
    return model

def load_model_spec(path):
    if not os.path.exists(path):
        raise ParseError('Model spec "{}" not found'.format(path), path)
    with open(path, 'r', encoding='utf-8') as f:
        try:
            return json.load(f)
        except json.JSONDecodeError as e:
            raise ParseError('invalid JSON: {}'.format(e.msg), path, e.lineno)
