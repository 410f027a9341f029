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

# Writers for the numeric series (CSV) and reports (JSON). Output is fully
# determined by the values passed in: fixed column order, 17 significant
# digits, sorted JSON keys.

import json
import os

import numpy as np
import pandas as pd

from .logconfig import LogConfig
logger = LogConfig.getLogger(__file__)

FLOAT_FORMAT = '%.17g'

def _ensure_parent(path):
    parent = os.path.dirname(os.path.abspath(path))
    os.makedirs(parent, exist_ok=True)

def write_csv(path, columns):
    """Write a CSV file from a list of (name, 1D array) pairs"""
    _ensure_parent(path)
    df = pd.DataFrame({name: np.asarray(values) for name, values in columns}, columns=[name for name, _ in columns])
    df.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator='\n')
    logger.debug('Wrote {} rows to {}'.format(len(df), path))

def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        value = float(obj)
        if not np.isfinite(value):
            return None
        return float(FLOAT_FORMAT % value)
    return obj

def write_json(path, data):
    _ensure_parent(path)
    with open(path, 'w') as f:
        json.dump(_jsonable(data), f, indent=2, sort_keys=True)
        f.write('\n')
    logger.debug('Wrote report {}'.format(path))
