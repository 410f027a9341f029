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
import logging

from .errors import ConfigError

LEVELS = ('DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL')

class LogConfig(object):
    """Process-wide registry of the package loggers.

    Every module calls LogConfig.getLogger(__file__) once at import time, so
    changing level or destination here affects all of them at once.
    """

    loggers = {}
    fmt = logging.Formatter('%(asctime)s [%(levelname)s] %(filename)s:%(lineno)d, %(message)s', datefmt='%H:%M:%S')
    level = logging.INFO
    # handlers attached to every logger, first one is the primary destination
    handlers = [logging.StreamHandler(sys.stdout)]

    @staticmethod
    def _key(obj):
        # module files are keyed as rcnoise.<module>
        if isinstance(obj, str) and obj.endswith('.py'):
            return 'rcnoise.' + os.path.splitext(os.path.basename(obj))[0]
        return str(obj)

    @staticmethod
    def getLogger(obj, level=None):
        """Logger for <obj>, usually a module's __file__.

        Loggers are cached, so repeated calls from one module return the same
        instance.
        """
        key = LogConfig._key(obj)
        logger = LogConfig.loggers.get(key)
        if logger is None:
            logger = logging.Logger(key)
            logger.setLevel(LogConfig.level if level is None else level)
            for h in LogConfig.handlers:
                logger.addHandler(h)
            LogConfig.loggers[key] = logger
        return logger

    @staticmethod
    def _rebind():
        for logger in LogConfig.loggers.values():
            logger.handlers = list(LogConfig.handlers)

    @staticmethod
    def setLogLevel(level):
        LogConfig.level = level
        for logger in LogConfig.loggers.values():
            logger.setLevel(level)

    @staticmethod
    def setLogLevelStr(name):
        """As setLogLevel, with a level name such as "INFO" or "debug" """
        name = str(name).upper()
        if name not in LEVELS:
            raise ConfigError('Unknown/invalid loglevel "{}" (expected one of {})'.format(name, ', '.join(LEVELS)))
        LogConfig.setLogLevel(getattr(logging, name))

    @staticmethod
    def setLogDestination(dest):
        """Send all logging to <dest> only"""
        dest.setFormatter(LogConfig.fmt)
        LogConfig.handlers = [dest]
        LogConfig._rebind()

    @staticmethod
    def addLogDestination(dest):
        dest.setFormatter(LogConfig.fmt)
        LogConfig.handlers.append(dest)
        LogConfig._rebind()

    @staticmethod
    def configure(config):
        """Apply the loglevel, logfile and log_to_stdout keys of a config dict.

        Calling this again replaces any log file opened by an earlier call.
        """
        LogConfig.setLogLevelStr(config.get('loglevel', 'INFO'))

        stdout = [h for h in LogConfig.handlers if not isinstance(h, logging.FileHandler)]
        for h in LogConfig.handlers:
            if isinstance(h, logging.FileHandler):
                h.close()
        if len(stdout) == 0:
            stdout = [logging.StreamHandler(sys.stdout)]
        stdout[0].setFormatter(LogConfig.fmt)

        logfile = config.get('logfile') or ''
        if len(logfile) == 0:
            LogConfig.handlers = stdout
        elif config.get('log_to_stdout', True):
            LogConfig.handlers = stdout + [logging.FileHandler(logfile)]
        else:
            LogConfig.handlers = [logging.FileHandler(logfile)]
        for h in LogConfig.handlers:
            h.setFormatter(LogConfig.fmt)
        LogConfig._rebind()

LogConfig.handlers[0].setFormatter(LogConfig.fmt)
