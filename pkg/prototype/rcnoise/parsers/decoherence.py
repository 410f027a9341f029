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

# Reader for tabulated decoherence functions D(t) = r(t) exp(i phi(t)),
# e.g. the output of an external many-body solver. Format: UTF-8 CSV with
# the header `t,r,phi` and one row per time, times strictly increasing.

import csv
import os

import numpy as np

from ..errors import ParseError, ValidationError

from ..logconfig import LogConfig
logger = LogConfig.getLogger(__file__)

HEADER = ['t', 'r', 'phi']
# r values up to this far above 1 are clamped (with a warning beyond R_WARN)
R_CLAMP = 1e-6
R_WARN = 1e-9

def load_decoherence_csv(path, B=0.0):
    """Parse a `t,r,phi` file into a TabulatedDecoherence.

    Raises:
        ParseError: missing file or header, malformed rows, r < 0 or r > 1,
            non-increasing t; the message names the offending line
    """
    from ..models.tabulated import TabulatedDecoherence

    if not os.path.exists(path):
        raise ParseError('Decoherence file "{}" not found'.format(path), path)

    times, rs, phis = [], [], []
    with open(path, 'r', encoding='utf-8-sig', newline='') as f:
        reader = csv.reader(f)
        seen_header = False
        for row in reader:
            line = reader.line_num
            if len(row) == 0 or all(len(x.strip()) == 0 for x in row):
                continue
            row = [x.strip() for x in row]
            if not seen_header:
                if row != HEADER:
                    raise ParseError('expected header {} (got {})'.format(','.join(HEADER), ','.join(row)), path, line)
                seen_header = True
                continue

            if len(row) != 3:
                raise ParseError('expected 3 columns (got {})'.format(len(row)), path, line)
            try:
                t, r, phi = [float(x) for x in row]
            except ValueError:
                raise ParseError('non-numeric value in row {}'.format(row), path, line)
            if not np.all(np.isfinite([t, r, phi])):
                raise ParseError('non-finite value in row {}'.format(row), path, line)

            if len(times) > 0 and t <= times[-1]:
                raise ParseError('t = {} is not greater than the previous time {}'.format(t, times[-1]), path, line)
            if r < 0:
                raise ParseError('r = {} is negative'.format(r), path, line)
            if r > 1.0 + R_CLAMP:
                raise ParseError('r = {} exceeds 1'.format(r), path, line)
            if r > 1.0:
                if r > 1.0 + R_WARN:
                    logger.warning('{}:{}: clamping r = {} to 1'.format(path, line, r))
                r = 1.0

            times.append(t)
            rs.append(r)
            phis.append(phi)

    if len(times) == 0:
        raise ParseError('no data rows in "{}"'.format(path), path)

    logger.info('Loaded {} decoherence samples from {}'.format(len(times), path))
    try:
        return TabulatedDecoherence(times, rs, phis, B, source=path)
    except ValidationError as e:
        raise ParseError(str(e), path)
