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
    "N_t",
    "B",
    "EvalPoint",
    "EvalResult",
    "main_sums",
    "I_Mp",
    "I_Mp_deriv",
    "F",
    "F_deriv",
    "zeta_p",
    "zeta_p_deriv",
]

import dataclasses

import mpmath

from .exceptions import DomainError
from .precision import magnitude_digits
from .special import chi, chi_log_deriv


def N_t(t, ctx=None):
    """Return N_t = floor(sqrt(t / (2 pi))).

    The result is checked against the interval boundaries t_n = 2 pi n^2
    at working precision, so t just below a boundary is never rounded up.

    Parameters
    ----------
    t : `mpmath.mpf` or number
        Height, t > 0.
    ctx : `PrecisionContext` (optional)
        Working precision; if `None` use the current precision.

    Raises
    ------
    DomainError
        If t <= 0.
    """
    if ctx is not None:
        with ctx.workdps():
            return N_t(t)
    t = mpmath.mpf(t)
    if t <= 0:
        raise DomainError(f"t={mpmath.nstr(t, 15)} must be positive")
    two_pi = 2 * mpmath.pi
    n = int(mpmath.floor(mpmath.sqrt(t / two_pi)))
    while two_pi * ((n + 1) * (n + 1)) <= t:
        n += 1
    while n > 0 and two_pi * (n * n) > t:
        n -= 1
    return n


def B(t, ctx=None):
    """Return B(t) = t / (2 pi N_t) - N_t - 1.

    B runs from -1 at t_n = 2 pi n^2 to (n+1)/n at t_{n+1}.

    Raises
    ------
    DomainError
        If t < 2 pi (so N_t = 0).
    """
    if ctx is not None:
        with ctx.workdps():
            return B(t)
    t = mpmath.mpf(t)
    n = N_t(t)
    if n < 1:
        raise DomainError(f"B(t) needs t >= 2 pi; t={mpmath.nstr(t, 15)}")
    return t / (2 * mpmath.pi * n) - n - 1


@dataclasses.dataclass(frozen=True)
class EvalPoint:
    """A point s = sigma + i t with t > 0."""

    s: mpmath.mpc

    def __post_init__(self):
        s = mpmath.mpc(self.s)
        if s.imag <= 0:
            raise DomainError(f"t=Im(s)={mpmath.nstr(s.imag, 15)} must be positive")
        object.__setattr__(self, "s", s)

    @property
    def sigma(self):
        return self.s.real

    @property
    def t(self):
        return self.s.imag


@dataclasses.dataclass(frozen=True)
class EvalResult:
    """Value of zeta_p or its derivative at one point.

    Attributes
    ----------
    value : `CValue`
        The computed value.
    N_used : `int`
        Length of the main sums, N_t.
    rule_p : `int`
        Order of the quadrature rule.
    digits : `int`
        Requested digits of the evaluation.
    """

    value: mpmath.mpc
    N_used: int
    rule_p: int
    digits: int


def main_sums(s, N, with_logs=False):
    """Compute the Riemann-Siegel main sums at the current precision.

    Returns
    -------
    sums : `tuple` [`CValue`]
        ``(sum n^-s, sum n^(s-1))`` for n = 1..N, and if ``with_logs``
        also ``(sum ln(n) n^-s, sum ln(n) n^(s-1))``.

    Notes
    -----
    Each n^-s is exp(-s ln n) with ln n computed at working precision;
    n^(s-1) is 1 / (n n^-s). Terms are added in increasing n.
    """
    direct = mpmath.mpc(0)
    dual = mpmath.mpc(0)
    direct_log = mpmath.mpc(0)
    dual_log = mpmath.mpc(0)
    for n in range(1, N + 1):
        log_n = mpmath.log(n)
        term = mpmath.exp(-s * log_n)
        dual_term = 1 / (n * term)
        direct += term
        dual += dual_term
        if with_logs:
            direct_log += log_n * term
            dual_log += log_n * dual_term
    if with_logs:
        return direct, dual, direct_log, dual_log
    return direct, dual


def _rule_nodes(M, rule):
    """Yield ``(weight, exponent_shift, log_base)`` for each term of I_{M,p}:
    the term is weight * exp(exponent_shift - s * log_base).
    """
    yield rule.omega0, 0, mpmath.log(M)
    for omega, lam in zip(rule.omega, rule.lambda_):
        shift = 2 * mpmath.pi * M * lam
        yield omega, -shift, mpmath.log(M + mpmath.j * lam)
        yield omega, shift, mpmath.log(M - mpmath.j * lam)


def _I_Mp(M, s, rule, deriv):
    total = mpmath.mpc(0)
    for weight, shift, log_base in _rule_nodes(M, rule):
        term = weight * mpmath.exp(shift - s * log_base)
        total += -log_base * term if deriv else term
    return total


def I_Mp(M, s, rule, ctx):
    """Quadrature approximation of the Riemann-Siegel remainder integral,

    I_{M,p}(s) = omega_0 M^-s + sum_j omega_j [exp(-2 pi M lambda_j) (M + i lambda_j)^-s
    + exp(2 pi M lambda_j) (M - i lambda_j)^-s].

    Parameters
    ----------
    M : `mpmath.mpf` or number
        M > 0; N + 1/2 in zeta_p.
    s : `CValue`
        Argument.
    rule : `QuadratureRule`
        Coefficients.
    ctx : `PrecisionContext`
        Working precision.

    Notes
    -----
    Each term is one exponential, exp(+-2 pi M lambda - s log(M +- i lambda)),
    since the two factors are individually huge for large M.
    """
    with ctx.workdps():
        M = mpmath.mpf(M)
        s = mpmath.mpc(s)
        with mpmath.extradps(magnitude_digits(abs(s) + M)):
            total = _I_Mp(M, s, rule, deriv=False)
        return +total


def I_Mp_deriv(M, s, rule, ctx):
    """d/ds of `I_Mp`; each term gains a factor -log(M +- i lambda_j)."""
    with ctx.workdps():
        M = mpmath.mpf(M)
        s = mpmath.mpc(s)
        with mpmath.extradps(magnitude_digits(abs(s) + M)):
            total = _I_Mp(M, s, rule, deriv=True)
        return +total


def F(s, N, rule, ctx):
    """Compute the approximation F(s; N, p) to zeta(s),

    F = sum n^-s + chi(s) sum n^(s-1)
    - ((-1)^N / 2) [I_{N+1/2,p}(s) + chi(s) conj(I_{N+1/2,p}(conj(1 - s)))].

    Parameters
    ----------
    s : `CValue`
        Argument.
    N : `int`
        Number of main-sum terms, N >= 0.
    rule : `QuadratureRule`
        Coefficients.
    ctx : `PrecisionContext`
        Working precision.
    """
    if N < 0:
        raise ValueError(f"N={N} must be >= 0")
    with ctx.workdps():
        s = mpmath.mpc(s)
        c = chi(s, ctx)
        M = N + mpmath.mpf(0.5)
        remainder = I_Mp(M, s, rule, ctx) + c * mpmath.conj(
            I_Mp(M, mpmath.conj(1 - s), rule, ctx)
        )
        with mpmath.extradps(magnitude_digits(abs(s) * mpmath.log(N + 1))):
            direct, dual = main_sums(s, N)
            total = direct + c * dual - (-1) ** N * remainder / 2
        return +total


def F_deriv(s, N, rule, ctx):
    """Compute dF/ds at fixed N.

    F' = -sum ln(n) n^-s + chi'(s) sum n^(s-1) + chi(s) sum ln(n) n^(s-1)
    - ((-1)^N / 2) [I'(s) + chi'(s) conj(I(conj(1-s))) - chi(s) conj(I'(conj(1-s)))],

    where I = I_{N+1/2,p} and chi' = chi * chi_log_deriv.
    """
    if N < 0:
        raise ValueError(f"N={N} must be >= 0")
    with ctx.workdps():
        s = mpmath.mpc(s)
        c = chi(s, ctx)
        dc = c * chi_log_deriv(s, ctx)
        M = N + mpmath.mpf(0.5)
        reflected = mpmath.conj(1 - s)
        remainder = (
            I_Mp_deriv(M, s, rule, ctx)
            + dc * mpmath.conj(I_Mp(M, reflected, rule, ctx))
            - c * mpmath.conj(I_Mp_deriv(M, reflected, rule, ctx))
        )
        with mpmath.extradps(magnitude_digits(abs(s) * mpmath.log(N + 1))):
            direct, dual, direct_log, dual_log = main_sums(s, N, with_logs=True)
            total = -direct_log + dc * dual + c * dual_log - (-1) ** N * remainder / 2
        return +total


def zeta_p(s, rule, ctx):
    """Approximate zeta(s) by zeta_p(s) = F(s; N_t, p).

    Parameters
    ----------
    s : `CValue`
        Argument with Im(s) > 0.
    rule : `QuadratureRule`
        Coefficients of order p.
    ctx : `PrecisionContext`
        Working precision.

    Returns
    -------
    result : `EvalResult`
        The value and the N_t used.

    Raises
    ------
    DomainError
        If Im(s) <= 0.

    Notes
    -----
    Accuracy has been studied in the strips 0 <= Re(s) <= 1
    and 1/2 <= Re(s) <= 2; any Re(s) is accepted.
    For t < 2 pi (N_t = 0) the value is F(s; 0, p), without accuracy claims.
    """
    with ctx.workdps():
        point = EvalPoint(mpmath.mpc(s))
        N = N_t(point.t)
        value = F(point.s, N, rule, ctx)
    return EvalResult(value=value, N_used=N, rule_p=rule.p, digits=ctx.digits)


def zeta_p_deriv(s, rule, ctx):
    """Approximate zeta'(s) by dF/ds at N = N_t frozen.

    zeta_p itself jumps at t = t_n, so this is not its derivative there.

    Raises
    ------
    DomainError
        If Im(s) <= 0.
    """
    with ctx.workdps():
        point = EvalPoint(mpmath.mpc(s))
        N = N_t(point.t)
        value = F_deriv(point.s, N, rule, ctx)
    return EvalResult(value=value, N_used=N, rule_p=rule.p, digits=ctx.digits)
