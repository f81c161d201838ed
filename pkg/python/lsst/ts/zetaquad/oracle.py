# This file is part of ts_zetaquad.
#
# Developed for the LSST Telescope and Site Systems.
# This product includes software developed by the LSST Project
# (https://www.lsst.org).
# See the COPYRIGHT file at the top-level directory of this distribution
# for details of code ownership.
#
# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.
#
# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU General Public License for more details.
#
# You should have received a copy of the GNU General Public License
# along with this program.  If not, see <https://www.gnu.org/licenses/>.

__all__ = [
    "OracleConfig",
    "I_M_h",
    "I_M_h_deriv",
    "G",
    "G_deriv",
    "zeta_oracle",
    "zeta_oracle_deriv",
    "hardy_theta",
    "hardy_Z",
    "refine_zero",
    "fit_rate",
    "convergence_rate",
]

import dataclasses
import logging
import math

import mpmath

from .exceptions import DegenerateFitError, DomainError, NonDecayError, RootFindingError
from .mordell import theta
from .precision import magnitude_digits
from .special import chi, chi_log_deriv, log_gamma
from .zeta_eval import EvalPoint, N_t, main_sums

_log = logging.getLogger(__name__)

# Number of consecutive negligible terms that ends a one-sided sum.
_QUIET_TERMS = 3

# The trapezoidal sum is truncated at |k h| <= _MAX_ABSCISSA.
_MAX_ABSCISSA = 20


@dataclasses.dataclass(frozen=True)
class OracleConfig:
    """Parameters of the trapezoidal benchmark zeta(s; h).

    Parameters
    ----------
    h : `mpmath.mpf` or number
        Step size, h > 0.
    ctx : `PrecisionContext`
        Working precision.
    truncation_threshold : `mpmath.mpf` (optional)
        A term is negligible when smaller than this times |h M^-s|.
        Defaults to ``10**(-digits - guard)``.
    """

    h: mpmath.mpf
    ctx: object
    truncation_threshold: mpmath.mpf = None

    def __post_init__(self):
        with self.ctx.workdps():
            h = mpmath.mpf(self.h)
        if h <= 0:
            raise ValueError(f"h={self.h} must be positive")
        object.__setattr__(self, "h", h)
        if self.truncation_threshold is None:
            object.__setattr__(
                self,
                "truncation_threshold",
                self.ctx.tol(self.ctx.digits + self.ctx.guard),
            )

    @classmethod
    def auto(cls, ctx):
        """Make a config whose discretization error
        exp(-pi / (sqrt(2) h)) is 10**(-digits - 5).
        """
        with ctx.workdps():
            h = mpmath.pi / (mpmath.sqrt(2) * (ctx.digits + 5) * mpmath.ln10)
        return cls(h=h, ctx=ctx)

    @property
    def k_max(self):
        """Largest |k| summed before giving up."""
        return math.ceil(_MAX_ABSCISSA / self.h)


def _one_side(M, s, cfg, direction, deriv, scale):
    """Sum the terms k = direction, 2 direction, ... until negligible."""
    h = cfg.h
    th = theta()
    inv_th = mpmath.conj(th)
    threshold = cfg.truncation_threshold * scale
    total = mpmath.mpc(0)
    quiet = 0
    for k in range(1, cfg.k_max + 1):
        x = direction * k * h
        log_base = mpmath.log(M + x * inv_th)
        term = mpmath.exp(
            -mpmath.pi * x * x - 2 * mpmath.pi * M * th * x - s * log_base
        ) / mpmath.cosh(mpmath.pi * th * x)
        if deriv:
            term *= -log_base
        total += term
        if abs(term) < threshold:
            quiet += 1
            if quiet >= _QUIET_TERMS:
                _log.debug(f"Oracle sum direction {direction} stopped at k={k}")
                return total
        else:
            quiet = 0
    raise NonDecayError(
        f"Oracle terms did not decay within k_max={cfg.k_max} "
        f"for M={mpmath.nstr(M, 10)}, s={mpmath.nstr(s, 15)}, h={mpmath.nstr(h, 5)}"
    )


def _I_M_h(M, s, cfg, deriv):
    ctx = cfg.ctx
    with ctx.workdps():
        M = mpmath.mpf(M)
        if M < 0.5:
            raise ValueError(f"M={M} must be >= 1/2")
        s = mpmath.mpc(s)
        with mpmath.extradps(magnitude_digits((abs(s) + M) * _MAX_ABSCISSA)):
            log_m = mpmath.log(M)
            center = mpmath.exp(-s * log_m)
            if deriv:
                center *= -log_m
            scale = abs(mpmath.exp(-s * log_m))
            total = (
                center
                + _one_side(M, s, cfg, 1, deriv, scale)
                + _one_side(M, s, cfg, -1, deriv, scale)
            )
            result = cfg.h * total
        return +result


def I_M_h(M, s, cfg):
    """Trapezoidal approximation of the Riemann-Siegel remainder integral,

    I_M(s; h) = h sum_k exp(-pi (kh)^2 - 2 pi M theta k h) / cosh(pi theta k h)
    (M + k h / theta)^-s,

    with theta = exp(-pi i / 4).

    Parameters
    ----------
    M : `mpmath.mpf` or number
        M >= 1/2.
    s : `CValue`
        Argument.
    cfg : `OracleConfig`
        Step size, precision and truncation threshold.

    Raises
    ------
    NonDecayError
        If either one-sided sum has not become negligible by ``cfg.k_max``.

    Notes
    -----
    The sum runs outward from k = 0 in each direction and stops after
    3 consecutive terms below ``cfg.truncation_threshold * |M^-s|``.
    """
    return _I_M_h(M, s, cfg, deriv=False)


def I_M_h_deriv(M, s, cfg):
    """d/ds of `I_M_h`; each term gains a factor -log(M + k h / theta)."""
    return _I_M_h(M, s, cfg, deriv=True)


def G(s, N, cfg):
    """Riemann-Siegel formula with the remainder integral discretized,

    G(s; N, h) = sum n^-s + chi(s) sum n^(s-1)
    - ((-1)^N / 2) [I_{N+1/2}(s; h) + chi(s) conj(I_{N+1/2}(conj(1 - s); h))].

    G converges to zeta(s) as h -> 0 for every N >= 0.
    """
    if N < 0:
        raise ValueError(f"N={N} must be >= 0")
    ctx = cfg.ctx
    with ctx.workdps():
        s = mpmath.mpc(s)
        c = chi(s, ctx)
        M = N + mpmath.mpf(0.5)
        remainder = I_M_h(M, s, cfg) + c * mpmath.conj(I_M_h(M, mpmath.conj(1 - s), cfg))
        with mpmath.extradps(magnitude_digits(abs(s) * mpmath.log(N + 1))):
            direct, dual = main_sums(s, N)
            total = direct + c * dual - (-1) ** N * remainder / 2
        return +total


def G_deriv(s, N, cfg):
    """dG/ds at fixed N and h."""
    if N < 0:
        raise ValueError(f"N={N} must be >= 0")
    ctx = cfg.ctx
    with ctx.workdps():
        s = mpmath.mpc(s)
        c = chi(s, ctx)
        dc = c * chi_log_deriv(s, ctx)
        M = N + mpmath.mpf(0.5)
        reflected = mpmath.conj(1 - s)
        remainder = (
            I_M_h_deriv(M, s, cfg)
            + dc * mpmath.conj(I_M_h(M, reflected, cfg))
            - c * mpmath.conj(I_M_h_deriv(M, reflected, cfg))
        )
        with mpmath.extradps(magnitude_digits(abs(s) * mpmath.log(N + 1))):
            direct, dual, direct_log, dual_log = main_sums(s, N, with_logs=True)
            total = -direct_log + dc * dual + c * dual_log - (-1) ** N * remainder / 2
        return +total


def zeta_oracle(s, ctx, h=None):
    """Benchmark value zeta(s; h) = G(s; N_t, h).

    Parameters
    ----------
    s : `CValue`
        Argument with Im(s) > 0.
    ctx : `PrecisionContext`
        Working precision.
    h : `mpmath.mpf` (optional)
        Step size; if `None` use `OracleConfig.auto`.

    Raises
    ------
    DomainError
        If Im(s) <= 0.
    """
    cfg = OracleConfig.auto(ctx) if h is None else OracleConfig(h=h, ctx=ctx)
    with ctx.workdps():
        point = EvalPoint(mpmath.mpc(s))
        return G(point.s, N_t(point.t), cfg)


def zeta_oracle_deriv(s, ctx, h=None):
    """Benchmark derivative dG/ds at N = N_t; see `zeta_oracle`."""
    cfg = OracleConfig.auto(ctx) if h is None else OracleConfig(h=h, ctx=ctx)
    with ctx.workdps():
        point = EvalPoint(mpmath.mpc(s))
        return G_deriv(point.s, N_t(point.t), cfg)


def hardy_theta(t, ctx):
    """Riemann-Siegel theta function, Im log Gamma(1/4 + i t/2) - (t/2) log pi."""
    with ctx.workdps():
        t = mpmath.mpf(t)
        value = log_gamma(mpmath.mpc(0.25, t / 2), ctx).imag - t / 2 * mpmath.log(mpmath.pi)
        return +value


def hardy_Z(t, ctx):
    """Hardy's function Z(t) = exp(i theta(t)) zeta(1/2 + i t), which is real.

    Returns the real part of the benchmark product.
    """
    with ctx.workdps():
        t = mpmath.mpf(t)
        value = mpmath.expj(hardy_theta(t, ctx)) * zeta_oracle(mpmath.mpc(0.5, t), ctx)
        return +value.real


def refine_zero(t_lo, t_hi, ctx, max_iter=100):
    """Locate a zero 1/2 + i gamma of zeta with t_lo < gamma < t_hi.

    Uses regula falsi with the Illinois modification on the sign of Z(t).

    Parameters
    ----------
    t_lo, t_hi : `mpmath.mpf` or number
        Bracket; Z must change sign between them.
    ctx : `PrecisionContext`
        Working precision; gamma is refined to about ``ctx.digits`` digits.
    max_iter : `int` (optional)
        Maximum number of iterations.

    Returns
    -------
    gamma : `mpmath.mpf`
        Ordinate of the zero.

    Raises
    ------
    ValueError
        If Z does not change sign on the bracket.
    RootFindingError
        If the iteration does not converge.
    """
    with ctx.workdps():
        a = mpmath.mpf(t_lo)
        b = mpmath.mpf(t_hi)
        fa = hardy_Z(a, ctx)
        fb = hardy_Z(b, ctx)
        if fa * fb > 0:
            raise ValueError(f"Z(t) does not change sign on [{t_lo}, {t_hi}]")
        tol = ctx.tol(ctx.digits + 2)
        side = 0
        c = a
        for niter in range(max_iter):
            previous = c
            c = (a * fb - b * fa) / (fb - fa)
            fc = hardy_Z(c, ctx)
            if fc == 0 or abs(c - previous) <= tol * abs(c):
                _log.debug(f"Zero near {mpmath.nstr(c, 20)} refined in {niter + 1} steps")
                return c
            if fc * fb > 0:
                b, fb = c, fc
                if side == -1:
                    fa /= 2
                side = -1
            else:
                a, fa = c, fc
                if side == 1:
                    fb /= 2
                side = 1
        raise RootFindingError(f"Zero refinement did not converge in {max_iter} steps")


def fit_rate(inverse_h, values):
    """Least-squares slope of ln |values| against 1/h.

    Parameters
    ----------
    inverse_h : `list` [`mpmath.mpf`]
        Abscissae 1/h_i.
    values : `list` [`mpmath.mpf`]
        Positive errors |G(h_i) - G(h_ref)|.

    Raises
    ------
    DegenerateFitError
        If there are fewer than 2 points, a value is zero,
        or all abscissae coincide.
    """
    if len(inverse_h) != len(values):
        raise ValueError("inverse_h and values must have the same length")
    if len(values) < 2:
        raise DegenerateFitError(f"Need at least 2 points; got {len(values)}")
    if any(v == 0 for v in values):
        raise DegenerateFitError("Cannot fit a zero difference")
    logs = [mpmath.log(abs(v)) for v in values]
    n = len(values)
    mean_x = mpmath.fsum(inverse_h) / n
    mean_y = mpmath.fsum(logs) / n
    sxx = mpmath.fsum((x - mean_x) ** 2 for x in inverse_h)
    if sxx == 0:
        raise DegenerateFitError("All 1/h values coincide")
    sxy = mpmath.fsum((x - mean_x) * (y - mean_y) for x, y in zip(inverse_h, logs))
    return sxy / sxx


def convergence_rate(s, h_list, ctx, evaluate=None):
    """Measure how fast the benchmark converges as h -> 0.

    Parameters
    ----------
    s : `CValue`
        Argument with Im(s) > 0.
    h_list : `list` [`mpmath.mpf`]
        Decreasing step sizes, at least 4.
    ctx : `PrecisionContext`
        Working precision.
    evaluate : callable (optional)
        ``evaluate(h)`` returns the value to study.
        Defaults to G(s; N_t, h).

    Returns
    -------
    slope : `mpmath.mpf`
        Least-squares slope of ln |evaluate(h_i) - evaluate(h_ref)|
        against 1/h_i, with h_ref = min(h_list) / 2.
        About -pi / sqrt(2) for the benchmark.

    Raises
    ------
    ValueError
        If ``h_list`` is not decreasing or has fewer than 4 entries.
    DegenerateFitError
        If a difference is below the working precision.

    Notes
    -----
    The error oscillates with period sqrt(2) in 1/h; sampling 1/h at
    multiples of sqrt(2) apart gives the cleanest fit.
    """
    if len(h_list) < 4:
        raise ValueError(f"Need at least 4 step sizes; got {len(h_list)}")
    with ctx.workdps():
        h_list = [mpmath.mpf(h) for h in h_list]
        if any(h2 >= h1 for h1, h2 in zip(h_list, h_list[1:])):
            raise ValueError("h_list must be strictly decreasing")
        if evaluate is None:
            point = EvalPoint(mpmath.mpc(s))
            N = N_t(point.t)

            def evaluate(h):
                return G(point.s, N, OracleConfig(h=h, ctx=ctx))

        reference = evaluate(h_list[-1] / 2)
        floor = ctx.tol(ctx.work_dps) * max(1, abs(reference))
        diffs = []
        for h in h_list:
            diff = abs(evaluate(h) - reference)
            if diff <= floor:
                raise DegenerateFitError(
                    f"Difference at h={mpmath.nstr(h, 5)} is below the working precision"
                )
            diffs.append(diff)
            _log.debug(f"1/h={mpmath.nstr(1 / h, 8)}: |diff|={mpmath.nstr(diff, 5)}")
        return fit_rate([1 / h for h in h_list], diffs)
