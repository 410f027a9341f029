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


import os
import sys

import numpy as np

from .bloch import bloch_to_density
from .config import Config, Args, resolve_path
from .dephasing import phase_angles, synthesize_fields, verify_equivalence
from .depolarize import (clifford_average, clifford_table, depolarize_sweep, find_nz_root,
                         haar_isotropy_check, qubit_count)
from .errors import (ConfigError, ParseError, ValidationError, CapabilityError, GridRangeError,
                     SingularityError, ModelValidityError, StructuralError, QuadratureError)
from .linalg import trace_distance
from .models import model_from_spec, load_model_spec
from .models.tabulated import TabulatedDecoherence
from .multiqubit import BellBasisModel, check_transitivity, classical_multiqubit_evolve, mc_multiqubit_evolve, r_matrix
from .output import write_csv, write_json
from .tolerances import Tolerances

from .logconfig import LogConfig
logger = LogConfig.getLogger(__file__)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_SINGULARITY = 2
EXIT_INVALID = 3

class RunConfig(object):
    """Validated settings for one rcnoise run.

    Built from the layered Config (defaults, optional TOML file, then the
    command line), and also configures logging from it.
    """

    def __init__(self, userconfig=None, config_home=None):
        if userconfig is None:
            userconfig = {}
        elif isinstance(userconfig, str):
            userconfig = {'config': userconfig}
        elif not isinstance(userconfig, dict):
            raise ConfigError('Invalid type for userconfig (should be None/str/dict, found "{}")'.format(type(userconfig)))

        self._config = Config(userconfig, config_home)
        LogConfig.configure(self._config.config)

        self.command = self._config.get('command')
        self.config_dir = self._config['config_dir']
        self.seed = int(self._config.get('seed', 0))

        grid = self._config['grid']
        self.t_max = float(grid.get('t_max', 0.0))
        self.points = int(grid.get('points', 0))
        if self.points < 3:
            raise ConfigError('grid.points must be >= 3 (got {})'.format(self.points))
        if not self.t_max > 0:
            raise ConfigError('grid.t_max must be > 0 (got {})'.format(self.t_max))

        mc = self._config['montecarlo']
        self.samples = int(mc.get('samples', 0))
        self.chunk_size = int(mc.get('chunk_size', 10000))
        self.workers = int(mc.get('workers', 1))
        if self.samples < 1:
            raise ConfigError('montecarlo.samples must be >= 1 (got {})'.format(self.samples))
        if self.chunk_size < 1 or self.workers < 1:
            raise ConfigError('montecarlo.chunk_size and montecarlo.workers must be >= 1')

        self.tolerances = Tolerances.from_config(self._config.config)
        self.output_dir = self._config['output']['dir']
        self.model_spec = self._config.get('model')

    def grid(self):
        return np.linspace(0.0, self.t_max, self.points)

    def section(self, name):
        return self._config.get(name, {})

    def output_path(self, filename):
        return os.path.join(self.output_dir, filename)

    def require_model(self):
        if self.model_spec is None or len(self.model_spec) == 0:
            raise ConfigError('No [model] section defined in configuration!')
        return self.model_spec

    def __repr__(self):
        return str(self)

    def __str__(self):
        return 'RunConfig(command={}, grid=[0, {}] x {}, samples={}, seed={}, out={})'.format(
               self.command, self.t_max, self.points, self.samples, self.seed, self.output_dir)

def _initial_qubit_state(bloch):
    return bloch_to_density([1.0] + [float(x) for x in bloch])

def _equivalence(run, model, grid):
    """Fields, equivalence report and trace for a dephasing model on a grid"""
    tol = run.tolerances
    sect = run.section('synthesize')
    trace = model.trace(grid)
    # raises SingularityError with the offending time when r < r_min
    phase_angles(trace, tol)

    fields = model.analytic_fields(trace.times)
    if fields is not None:
        tolerance = float(sect.get('tolerance_analytic', 1e-6))
        logger.info('Using closed-form fields for {}'.format(model))
    else:
        tolerance = float(sect.get('tolerance_numeric', 1e-4))
        fields = synthesize_fields(trace, swap=model.SWAP_BRANCHES, tol=tol)

    rho0 = _initial_qubit_state(sect.get('initial_bloch', [1.0, 0.0, 0.0]))
    states = model.quantum_states(rho0, trace.times)
    report = verify_equivalence(states, fields, tolerance, rho0, tol, trace.times)
    return fields, report, trace

def _equivalence_dict(report, model, trace):
    data = report.to_dict()
    data['model'] = str(model)
    data['metadata'] = trace.metadata
    return data

def cmd_synthesize(run):
    """Synthesize the classical field pair of the configured model and verify it.

    Writes fields.csv (t,h1,h2,phi1,phi2) and equivalence.json.
    """
    model = model_from_spec(run.require_model(), run.config_dir)
    grid = None if isinstance(model, TabulatedDecoherence) else run.grid()
    fields, report, trace = _equivalence(run, model, grid)

    fields.to_csv(run.output_path('fields.csv'))
    write_json(run.output_path('equivalence.json'), _equivalence_dict(report, model, trace))
    return EXIT_OK if report.passed else EXIT_INVALID

def cmd_verify(run):
    """Tabulated-data path: generic synthesis against the closed-form angles"""
    spec = run.require_model()
    if 'type' not in spec and 'path' in spec:
        spec = dict(spec, type=TabulatedDecoherence.NAME)
    model = model_from_spec(spec, run.config_dir)
    if not isinstance(model, TabulatedDecoherence):
        raise ConfigError('verify needs a tabulated model (got {})'.format(model.NAME))

    fields, report, trace = _equivalence(run, model, None)
    generic = phase_angles(trace, run.tolerances)
    closed = model.closed_form_angles()
    diff = float(max(np.max(np.abs(g - c)) for g, c in zip(generic, closed)))
    angles_ok = diff <= run.tolerances.round_trip
    logger.info('Generic vs closed-form angles: max difference {:.3g}'.format(diff))

    fields.to_csv(run.output_path('fields.csv'))
    write_json(run.output_path('equivalence.json'), _equivalence_dict(report, model, trace))
    write_json(run.output_path('verify.json'), {
        'source': model.source,
        'points': len(model),
        'max_angle_difference': diff,
        'angle_tolerance': run.tolerances.round_trip,
        'angles_pass': angles_ok,
        'equivalence_pass': report.passed,
    })
    return EXIT_OK if (angles_ok and report.passed) else EXIT_INVALID

def _state_dict(rho):
    return {'re': np.real(rho), 'im': np.imag(rho)}

def cmd_depolarize(run):
    """Depolarization sweep: Haar Monte Carlo on the grid, or the exact Clifford average"""
    sect = run.section('depolarize')
    mode = sect.get('mode', 'haar')
    dim = int(sect.get('dim', 2))
    if dim < 2:
        raise ConfigError('depolarize.dim must be >= 2 (got {})'.format(dim))
    if dim == 2:
        rho0 = _initial_qubit_state(sect.get('initial_bloch', [0.0, 0.0, 1.0]))
    else:
        rho0 = np.zeros((dim, dim), dtype=complex)
        rho0[0, 0] = 1.0
    mixed = np.eye(dim) / dim

    if mode == 'clifford':
        n = qubit_count(dim)
        if n is None:
            raise ConfigError('Clifford mode needs dim = 2^n (got {})'.format(dim))
        table = clifford_table(n)
        avg = clifford_average(rho0, table)
        dist = trace_distance(avg, mixed)
        ok = dist <= 1e-12
        write_json(run.output_path('depolarize.json'), {
            'mode': mode, 'dim': dim, 'elements': len(table),
            'state_t1': _state_dict(avg), 'distance_to_mixed': dist, 'pass': ok,
        })
        return EXIT_OK if ok else EXIT_INVALID
    if mode != 'haar':
        raise ConfigError('Unknown depolarize.mode "{}" (expected haar or clifford)'.format(mode))

    times = run.grid()
    result = depolarize_sweep(rho0, times, run.samples, run.seed, run.chunk_size, run.workers,
                              show_progress=sys.stderr.isatty())
    report = {'mode': mode, 'dim': dim, 'samples': run.samples, 'seed': run.seed}

    if dim == 2:
        result.to_csv(run.output_path('depolarize.csv'))
        root = find_nz_root()
        agree = result.agreement()
        report['nz_root'] = root
        report['flagged_times'] = times[times > root]
        report['mc_vs_analytic'] = {
            'points': len(times),
            'within_3sigma': int(np.sum(agree)),
            'max_abs_difference': float(np.max(np.abs(result.nz - result.nz_analytic()))),
        }
    else:
        dists = [trace_distance(s, mixed) for s in result.states]
        write_csv(run.output_path('depolarize.csv'), [('t', times), ('distance_to_mixed', dists)])

    on_grid = np.isclose(times, 1.0, rtol=0.0, atol=1e-12)
    if np.any(on_grid):
        state, err_re, err_im = result.state_at(1.0)
        dev_re = np.abs(state.real - mixed)
        dev_im = np.abs(state.imag)
        report['t1'] = {
            'state': _state_dict(state),
            'pass': bool(np.all(dev_re <= 3.0 * err_re + 1e-12) and np.all(dev_im <= 3.0 * err_im + 1e-12)),
        }

    iso = haar_isotropy_check(rho0, float(sect.get('isotropy_t', 0.5)), run.samples, run.seed, run.chunk_size, run.workers)
    report['isotropy'] = iso.to_dict()
    write_json(run.output_path('depolarize.json'), report)
    return EXIT_OK

def _multiqubit_spec(run):
    spec = run.require_model()
    if 'n' not in spec and 'path' in spec:
        path = resolve_path(spec['path'], run.config_dir)
        spec = load_model_spec(path)
    return spec

def cmd_multiqubit(run):
    """r_ij(t) series, transitivity and positivity verdicts, and the MC cross-check.

    The initial state is the uniform superposition in the model basis, so
    every coherence carries r_ij(t) directly.
    """
    model = BellBasisModel.from_spec(_multiqubit_spec(run), run.grid())
    tol = run.tolerances
    sect = run.section('multiqubit')
    dim, times = model.dim, model.times
    rho0 = np.full((dim, dim), 1.0 / dim, dtype=complex)

    pairs = [(i, j) for i in range(dim) for j in range(i + 1, dim)]
    rs = np.array([r_matrix(model, t) for t in times])
    columns = [('t', times)]
    for i, j in pairs:
        columns.append(('r_{}_{}_re'.format(i, j), rs[:, i, j].real))
        columns.append(('r_{}_{}_im'.format(i, j), rs[:, i, j].imag))
    write_csv(run.output_path('r_matrix.csv'), columns)

    worst = 0.0
    for t in times:
        worst = max(worst, check_transitivity(model.gamma_at(t), tol)[1])
    transitive = worst <= tol.transitivity

    failures = []
    for t in times:
        try:
            classical_multiqubit_evolve(rho0, model, t, tol)
        except ModelValidityError as e:
            logger.warning(str(e))
            failures.append(float(t))

    report = {
        'model': str(model),
        'transitivity': {'pass': transitive, 'max_violation': worst},
        'positivity': {'pass': len(failures) == 0, 'failed_times': failures},
    }

    if sect.get('mc_check', True):
        idx = np.unique(np.linspace(0, len(times) - 1, int(sect.get('mc_points', 5))).astype(int))
        checks = []
        for k in idx:
            t = times[k]
            mean, err_re, err_im = mc_multiqubit_evolve(rho0, model, t, run.samples, run.seed, run.chunk_size, run.workers)
            expected = rho0 * rs[k]
            ok = bool(np.all(np.abs(mean.real - expected.real) <= 3.0 * err_re + 1e-12)
                      and np.all(np.abs(mean.imag - expected.imag) <= 3.0 * err_im + 1e-12))
            checks.append({'t': t, 'pass': ok, 'max_abs_difference': float(np.max(np.abs(mean - expected)))})
        report['mc_check'] = {'samples': run.samples, 'pass': all(c['pass'] for c in checks), 'points': checks}

    write_json(run.output_path('validity.json'), report)
    if not transitive:
        logger.error('gamma violates transitivity by {:.3g}'.format(worst))
    return EXIT_OK if (transitive and len(failures) == 0) else EXIT_INVALID

COMMAND_HANDLERS = {
    'synthesize': cmd_synthesize,
    'depolarize': cmd_depolarize,
    'multiqubit': cmd_multiqubit,
    'verify': cmd_verify,
}

def main(argv=None, config_home=None):
    try:
        args = Args(argv).get_args()
    except SystemExit as e:
        # argparse exits on --help and on bad arguments
        return EXIT_OK if e.code in (0, None) else EXIT_CONFIG

    try:
        run = RunConfig(args, config_home)
        logger.info(str(run))
        return COMMAND_HANDLERS[run.command](run)
    except SingularityError as e:
        logger.error('Synthesis failed at t = {}: {}'.format(e.time, e))
        return EXIT_SINGULARITY
    except (ModelValidityError, StructuralError, QuadratureError) as e:
        logger.error(str(e))
        return EXIT_INVALID
    except (ConfigError, ParseError, ValidationError, CapabilityError, GridRangeError) as e:
        logger.error(str(e))
        return EXIT_CONFIG

if __name__ == '__main__':
    sys.exit(main())
