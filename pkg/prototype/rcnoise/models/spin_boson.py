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

# Spin-boson dephasing: D(t) = exp(Gamma(t) - iBt) with
#
#   Gamma(t) = -int_0^inf dw J(w) coth(beta w / 2) (1 - cos wt) / w^2
#
# For the ohmic density J(w) = A w exp(-w/W) and thermal time tau = beta/pi
# the integral has the closed form
#
#   Gamma(t) = -A [ 1/2 ln(1 + W^2 t^2) + ln(G(1+k)^2 / |G(1+k+it/beta)|^2) ],  k = 1/(beta W)
#
# (G the Gamma function), which tends to the familiar
# -A [ 1/2 ln(1 + W^2 t^2) + ln(sinh(t/tau) / (t/tau)) ] for W tau >> 1.

import csv
import warnings

import numpy as np
from scipy.integrate import quad, IntegrationWarning
from scipy.special import loggamma

from .base import DephasingModel, require
from ..dephasing import DecoherenceTrace
from ..config import resolve_path
from ..errors import ValidationError, QuadratureError

from ..logconfig import LogConfig
logger = LogConfig.getLogger(__file__)

# below this frequency the integrand is replaced by its w -> 0 limit
OMEGA_SERIES = 1e-8
# oscillation periods of cos(wt) per quadrature panel
PERIODS_PER_PANEL = 10

def _log_sinhc(x):
    """ln(sinh(x)/x) without overflow, by series for small x"""
    x = np.abs(np.asarray(x, dtype=float))
    out = np.empty_like(x)
    small = x < 1e-4
    xs = x[small]
    out[small] = xs ** 2 / 6.0 - xs ** 4 / 180.0
    xl = x[~small]
    out[~small] = xl + np.log1p(-np.exp(-2.0 * xl)) - np.log(2.0) - np.log(xl)
    return out

def gamma_ohmic(t, cutoff, tau, scale=1.0):
    """-scale [1/2 ln(1 + W^2 t^2) + ln(sinh(t/tau)/(t/tau))], zero at t = 0"""
    t = np.asarray(t, dtype=float)
    g = -scale * (0.5 * np.log1p((cutoff * t) ** 2) + _log_sinhc(t / tau))
    return float(g) if g.ndim == 0 else g

def gamma_ohmic_exact(t, cutoff, tau, amplitude=1.0):
    """Ohmic Gamma(t) at finite cutoff; equal to the quadrature of A w exp(-w/W)"""
    t = np.asarray(t, dtype=float)
    beta = np.pi * tau
    kappa = 1.0 / (beta * cutoff)
    # both terms take the complex branch so that Gamma(0) is exactly 0
    thermal = 2.0 * (loggamma(complex(1.0 + kappa, 0.0)).real - loggamma(1.0 + kappa + 1j * t / beta).real)
    g = -amplitude * (0.5 * np.log1p((cutoff * t) ** 2) + thermal)
    return float(g) if g.ndim == 0 else g

def gamma_quadrature(t, J, beta_th, omega_max, epsabs=1e-10, limit=200):
    """Gamma(t) = -int_0^omega_max J(w) coth(beta w/2)(1 - cos wt)/w^2 dw.

    The range is cut into panels of a few oscillation periods of cos(wt)
    and each panel is integrated adaptively with scipy's quad.

    Args:
        t: time (>= 0)
        J: spectral density, a callable of frequency
        beta_th: inverse temperature
        omega_max: upper integration limit

    Raises:
        QuadratureError: a panel failed to converge and the error estimate
            is too large to trust the result
    """
    if beta_th <= 0:
        raise ValidationError('Inverse temperature must be positive (got {})'.format(beta_th))
    if t < 0:
        raise ValidationError('Gamma(t) is defined for t >= 0 (got {})'.format(t))
    if t == 0:
        return 0.0

    slope0 = J(OMEGA_SERIES) / OMEGA_SERIES

    def integrand(w):
        if w < OMEGA_SERIES:
            # J ~ J'(0) w, coth(beta w/2) ~ 2/(beta w), (1 - cos wt)/w^2 ~ t^2/2
            return slope0 * t * t / beta_th
        return J(w) / np.tanh(0.5 * beta_th * w) * 2.0 * np.sin(0.5 * w * t) ** 2 / (w * w)

    width = PERIODS_PER_PANEL * 2.0 * np.pi / t
    edges = np.append(np.arange(0.0, omega_max, width), omega_max)
    edges = edges[np.concatenate([[True], np.diff(edges) > 0])]
    npanels = len(edges) - 1

    total, total_err, failures = 0.0, 0.0, []
    with warnings.catch_warnings():
        warnings.simplefilter('ignore', IntegrationWarning)
        for a, b in zip(edges[:-1], edges[1:]):
            res = quad(integrand, a, b, epsabs=epsabs / npanels, epsrel=1e-10, limit=limit, full_output=1)
            total += res[0]
            total_err += res[1]
            if len(res) > 3:
                failures.append((float(a), float(b), res[3]))

    if failures:
        diagnostics = {'t': t, 'panels': npanels, 'abserr': total_err, 'failures': failures}
        if total_err > 1e-6 * max(1.0, abs(total)):
            raise QuadratureError('Gamma quadrature did not converge at t = {} (error estimate {:.3g})'.format(t, total_err), diagnostics)
        logger.warning('Gamma quadrature at t = {}: {} panel(s) reported problems, error estimate {:.3g}'.format(t, len(failures), total_err))

    return -total

class OhmicCoupling(object):
    """J(w) = A w exp(-w/W) at thermal time tau = beta/pi"""

    KIND = 'ohmic'

    def __init__(self, amplitude=1.0, cutoff=20.0, tau=1.0):
        if cutoff <= 0 or tau <= 0 or amplitude < 0:
            raise ValidationError('Ohmic coupling needs cutoff > 0, tau > 0, amplitude >= 0 (got {}, {}, {})'.format(cutoff, tau, amplitude))
        self.amplitude = float(amplitude)
        self.cutoff = float(cutoff)
        self.tau = float(tau)

    @property
    def beta_th(self):
        return np.pi * self.tau

    def J(self, w):
        return self.amplitude * w * np.exp(-w / self.cutoff)

    def omega_max(self, t):
        return max(50.0 * self.cutoff, 50.0 / t) if t > 0 else 50.0 * self.cutoff

    def __str__(self):
        return 'OhmicCoupling(A={}, W={}, tau={})'.format(self.amplitude, self.cutoff, self.tau)

class TabulatedCoupling(object):
    """Spectral density sampled on a frequency grid, linearly interpolated, zero beyond it"""

    KIND = 'tabulated'

    def __init__(self, omega, J, beta_th):
        omega = np.asarray(omega, dtype=float)
        J = np.asarray(J, dtype=float)
        if omega.ndim != 1 or omega.shape != J.shape or len(omega) < 2:
            raise ValidationError('Tabulated J needs matching 1D omega and J arrays with at least 2 points')
        if np.any(np.diff(omega) <= 0) or omega[0] < 0:
            raise ValidationError('Tabulated J frequencies must be non-negative and strictly increasing')
        if np.any(J < 0):
            raise ValidationError('Tabulated J must be non-negative')
        if beta_th <= 0:
            raise ValidationError('Inverse temperature must be positive (got {})'.format(beta_th))
        if omega[0] > 0:
            omega = np.insert(omega, 0, 0.0)
            J = np.insert(J, 0, 0.0)
        self.omega = omega
        self.values = J
        self.beta_th = float(beta_th)

    @staticmethod
    def from_csv(path, beta_th):
        """Read a two-column `omega,J` CSV file with header"""
        with open(path, 'r', newline='') as f:
            rows = [row for row in csv.reader(f) if len(row) > 0]
        data = np.array([[float(x) for x in row] for row in rows[1:]])
        return TabulatedCoupling(data[:, 0], data[:, 1], beta_th)

    def J(self, w):
        return np.interp(w, self.omega, self.values, left=0.0, right=0.0)

    def omega_max(self, t):
        return float(self.omega[-1])

    def __str__(self):
        return 'TabulatedCoupling({} points, beta={})'.format(len(self.omega), self.beta_th)

class SpinBosonParams(DephasingModel):
    """Qubit coupled to a bosonic bath through sigma_z.

    Args:
        B: static splitting
        coupling: OhmicCoupling or TabulatedCoupling
        scale: overall factor on Gamma
        gamma: how Gamma is evaluated for an ohmic coupling, one of
            'closed-form' (large-cutoff formula), 'exact' (finite cutoff) or
            'quadrature'. Tabulated couplings always use quadrature.
    """

    NAME = 'spin-boson'
    GAMMA_METHODS = ['closed-form', 'exact', 'quadrature']

    def __init__(self, B=0.0, coupling=None, scale=1.0, gamma='closed-form'):
        super(SpinBosonParams, self).__init__()
        self.B = float(B)
        self.coupling = OhmicCoupling() if coupling is None else coupling
        self.scale = float(scale)
        if gamma not in SpinBosonParams.GAMMA_METHODS:
            raise ValidationError('Unknown Gamma method "{}" (expected one of {})'.format(gamma, SpinBosonParams.GAMMA_METHODS))
        self.gamma_method = gamma

    def gamma(self, grid):
        grid = np.asarray(grid, dtype=float)
        c = self.coupling
        if isinstance(c, OhmicCoupling) and self.gamma_method == 'closed-form':
            return gamma_ohmic(grid, c.cutoff, c.tau, self.scale * c.amplitude)
        if isinstance(c, OhmicCoupling) and self.gamma_method == 'exact':
            return gamma_ohmic_exact(grid, c.cutoff, c.tau, self.scale * c.amplitude)
        return self.scale * np.array([gamma_quadrature(t, c.J, c.beta_th, c.omega_max(t)) for t in grid])

    def trace(self, grid):
        return spin_boson_trace(self, grid)

    @staticmethod
    def from_spec(spec, base_dir=None):
        cspec = dict(spec.get('coupling', {'kind': 'ohmic'}))
        kind = cspec.pop('kind', 'ohmic')
        if kind == OhmicCoupling.KIND:
            coupling = OhmicCoupling(**cspec)
        elif kind == TabulatedCoupling.KIND:
            beta_th = require(cspec, 'beta_th', SpinBosonParams.NAME)
            if 'path' in cspec:
                path = resolve_path(cspec['path'], base_dir)
                coupling = TabulatedCoupling.from_csv(path, beta_th)
            else:
                coupling = TabulatedCoupling(require(cspec, 'omega', SpinBosonParams.NAME), require(cspec, 'J', SpinBosonParams.NAME), beta_th)
        else:
            raise ValidationError('Unknown spin-boson coupling kind "{}"'.format(kind))
        return SpinBosonParams(spec.get('B', 0.0), coupling, spec.get('scale', 1.0), spec.get('gamma', 'closed-form'))

    def __str__(self):
        return 'SpinBosonParams(B={}, {}, scale={}, gamma={})'.format(self.B, self.coupling, self.scale, self.gamma_method)

def spin_boson_trace(params, grid):
    """c = exp(Gamma) cos Bt, s = -exp(Gamma) sin Bt on the grid"""
    grid = np.asarray(grid, dtype=float)
    if len(grid) == 0 or grid[0] != 0.0:
        raise ValidationError('Spin-boson grid must start at t = 0')
    decay = np.exp(params.gamma(grid))
    c = decay * np.cos(params.B * grid)
    s = -decay * np.sin(params.B * grid)
    logger.debug('Spin-boson trace: r(t_max) = {:.3g}'.format(decay[-1]))
    return DecoherenceTrace(grid, c, s, params.B, {'model': SpinBosonParams.NAME})
