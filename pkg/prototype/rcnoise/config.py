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


import argparse
import os
from shutil import copyfile
from collections.abc import Mapping

import toml
try:
    from xdg import xdg_config_home
    XDG_CONFIG_HOME = str(xdg_config_home())
except ImportError:
    from xdg import XDG_CONFIG_HOME

from .errors import ConfigError
from .logconfig import LogConfig
logger = LogConfig.getLogger(__file__)

COMMANDS = ['synthesize', 'depolarize', 'multiqubit', 'verify']

class Args(object):

    def __init__(self, argv=None):
        def bool_checker(x):
            return str(x).lower() == 'true'

        # options shared by every subcommand. the dotted dest names are
        # expanded into nested tables by get_args
        common = argparse.ArgumentParser(add_help=False)
        common.add_argument('-c', '--config', help='Path to a .toml configuration file', metavar='path')
        common.add_argument('--seed', type=int, help='Seed for all random sampling', metavar='seed')
        common.add_argument('--samples', dest='montecarlo.samples', type=int, help='Monte Carlo sample count', metavar='n')
        common.add_argument('--workers', dest='montecarlo.workers', type=int, help='Worker processes for Monte Carlo sampling', metavar='n')
        common.add_argument('--out', dest='output.dir', help='Output directory', metavar='dir')
        common.add_argument('--grid-points', dest='grid.points', type=int, help='Number of time grid points', metavar='n')
        common.add_argument('--t-max', dest='grid.t_max', type=float, help='Last time on the grid', metavar='t')
        common.add_argument('-l', '--loglevel', help='Logging verbosity level: DEBUG, INFO, WARNING, ERROR', metavar='loglevel')
        common.add_argument('-f', '--logfile', help='Redirect logging from stdout to this file', metavar='logfile')
        common.add_argument('-s', '--log-to-stdout', dest='log_to_stdout', type=bool_checker, help='keep logging to stdout even if --logfile used', metavar='true/false')

        self.parser = argparse.ArgumentParser(prog='rcnoise', description='Classical noise models for quantum dephasing and depolarization',
                                              epilog='Note: command-line arguments will override arguments from configuration files')
        subparsers = self.parser.add_subparsers(dest='command', metavar='command')
        subparsers.required = True
        subparsers.add_parser('synthesize', parents=[common], help='Synthesize classical fields for a dephasing model and verify them')
        subparsers.add_parser('depolarize', parents=[common], help='Haar/Clifford depolarization sweep')
        subparsers.add_parser('multiqubit', parents=[common], help='Multiqubit diagonal dephasing in a commuting-set eigenbasis')
        subparsers.add_parser('verify', parents=[common], help='Synthesize fields from a tabulated decoherence file and check the closed form')

        self.args = self.parser.parse_args(argv)

    def get_args(self):
        # restructure the arguments into a dict with the same nested structure as Config class expects
        orig = vars(self.args)
        args = {}
        for k, v in orig.items():
            # ignore any params with no value given
            if v is None:
                continue

            if k.find('.') == -1:
                args[k] = v
            else:
                parts = k.split('.')
                root = args
                for p in parts[:-1]:
                    root = root.setdefault(p, {})
                root[parts[-1]] = v
        return args

def resolve_path(path, base_dir=None):
    """<path> itself if absolute or <base_dir> is None, else <path> under <base_dir>"""
    if base_dir is None or os.path.isabs(path):
        return path
    return os.path.join(base_dir, path)

def update(d, u):
    """Recursively merge <u> into <d>, ignoring None values in <u>"""
    for k, v in u.items():
        if isinstance(v, Mapping):
            d[k] = update(d.get(k, {}), v)
        elif v is not None:
            d[k] = v
    return d

class Config(object):
    """Wrapper for all rcnoise configuration options

    Values are layered in ascending order of priority: the per-user default
    file in XDG_CONFIG_HOME/rcnoise/rcnoise.toml (created from the bundled
    copy on first use), a local TOML file given as config_dict['config'],
    and finally everything else in config_dict.
    """

    DEFAULT_CONFIG = 'rcnoise.toml'

    def __init__(self, config_dict, config_home=None):
        config_dict = dict(config_dict)
        config_home = XDG_CONFIG_HOME if config_home is None else config_home
        self.default_config_path = os.path.join(config_home, 'rcnoise', Config.DEFAULT_CONFIG)
        if not os.path.exists(self.default_config_path):
            logger.debug('Creating default config file {}'.format(self.default_config_path))
            os.makedirs(os.path.dirname(self.default_config_path), exist_ok=True)
            copyfile(Config.bundled_config_path(), self.default_config_path)

        logger.debug('Parsing default config file: {}'.format(self.default_config_path))
        config = Config._load(self.default_config_path)
        config['config_dir'] = os.getcwd()

        user_config_path = config_dict.pop('config', None)
        if user_config_path is not None:
            logger.debug('Loading user config {}'.format(user_config_path))
            if not os.path.exists(user_config_path):
                raise ConfigError('Configuration file "{}" not found'.format(user_config_path))
            config = update(config, Config._load(user_config_path))
            # relative paths inside a config file are relative to that file
            config['config_dir'] = os.path.dirname(os.path.abspath(user_config_path))

        self.config = update(config, config_dict)

        for section in ['grid', 'output', 'montecarlo']:
            if section not in self.config:
                raise ConfigError('No [{}] section defined in configuration!'.format(section))

    @staticmethod
    def bundled_config_path():
        return os.path.join(os.path.dirname(__file__), 'data', Config.DEFAULT_CONFIG)

    @staticmethod
    def _load(path):
        try:
            with open(path, 'r') as f:
                return toml.load(f)
        except toml.TomlDecodeError as e:
            raise ConfigError('Failed to parse "{}": {}'.format(path, e))

    def resolve_path(self, path):
        return resolve_path(path, self.config['config_dir'])

    def __getitem__(self, key):
        return self.config[key]

    def get(self, key, default=None):
        return self.config.get(key, default)
