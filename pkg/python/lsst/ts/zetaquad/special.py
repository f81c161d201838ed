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

__all__ = ["log_gamma", "digamma", "chi", "chi_log_deriv", "chi_asymptotic"]

import functools

import mpmath

from .exceptions import NumericOverflowError, PoleError
from .precision import magnitude_digits


@functools.lru_cache(maxsize=None)
def _bernoulli(n, prec):
    """Bernoulli number B_n at binary precision ``prec``.

    Cached per (n, prec); filling the cache is idempotent.
    """
    with mpmath.workprec(prec):
        return mpmath.bernoulli(n)


def _check_pole(s, ctx, name):
    n = mpmath.nint(s.real)
    if n <= 0 and abs(s - n) < ctx.eps:
        raise PoleError(f"{name}: s={mpmath.nstr(s, 15)} is at the pole {int(n)}")


def _stirling_radius():
    """Smallest |z| at which the Stirling remainder can reach
    the current working precision.
    """
    return mpmath.mp.dps * mpmath.ln10 / (2 * mpmath.pi) + 2


def _shift_count(s, radius):
    """Number of unit shifts that moves ``s`` into the region where
    the Stirling series converges to working precision.
    """
    if s.real >= radius:
        return 0
    if abs(s.imag) >= radius:
        if s.real >= 0:
            return 0
        return int(mpmath.ceil(-s.real))
    return int(mpmath.ceil(radius - s.real))


def _stirling_terms(z, first_power):
    """Yield ``(k, B_2k, z**-(first_power + 2k - 2))`` for k = 1, 2, ...

    Stops near the smallest term of the asymptotic series.
    """
    prec = mpmath.mp.prec
    zinv2 = 1 / (z * z)
    power = z ** (-first_power)
    kmax = int(mpmath.pi * abs(z)) + 2
    for k in range(1, kmax + 1):
        yield k, _bernoulli(2 * k, prec), power
        power *= zinv2


def _log_gamma(s):
    """log Gamma at the current working precision."""
    tol = mpmath.mpf(10) ** (-mpmath.mp.dps)
    n = _shift_count(s, _stirling_radius())
    z = s + n
    result = (z - 0.5) * mpmath.log(z) - z + mpmath.log(2 * mpmath.pi) / 2
    for k, bern, power in _stirling_terms(z, 1):
        term = bern / (2 * k * (2 * k - 1)) * power
        result += term
        if abs(term) < tol:
            break
    for k in range(n):
        result -= mpmath.log(s + k)
    return result


def _digamma(s):
    """Digamma at the current working precision."""
    tol = mpmath.mpf(10) ** (-mpmath.mp.dps)
    n = _shift_count(s, _stirling_radius())
    z = s + n
    result = mpmath.log(z) - 1 / (2 * z)
    for k, bern, power in _stirling_terms(z, 2):
        term = bern / (2 * k) * power
        result -= term
        if abs(term) < tol:
            break
    for k in range(n):
        result -= 1 / (s + k)
    return result


def _log_cos(w):
    """log cos(w) with the dominant exponential factored out.

    Returns
    -------
    log_cos : `CValue`
        A logarithm of cos(w); may differ from the principal
        value by a multiple of 2 pi i.
    one_plus_q : `CValue`
        The factor ``1 + exp(+-2iw)``, which vanishes at zeros of cos.
    """
    if w.imag >= 0:
        q = mpmath.exp(2 * mpmath.j * w)
        sign = -1
    else:
        q = mpmath.exp(-2 * mpmath.j * w)
        sign = 1
    one_plus_q = 1 + q
    return sign * mpmath.j * w - mpmath.ln2 + mpmath.log(one_plus_q), one_plus_q


def _tan_parts(w):
    """Return ``(q, sign)`` with ``tan(w) = sign i (1 - q) / (1 + q)``
    and ``|q| <= 1``, so tan(w) never overflows for large |Im w|.
    """
    if w.imag >= 0:
        return mpmath.exp(2 * mpmath.j * w), 1
    return mpmath.exp(-2 * mpmath.j * w), -1


def log_gamma(s, ctx):
    """Compute the principal branch of log Gamma(s).

    Parameters
    ----------
    s : `CValue` or number
        Argument.
    ctx : `PrecisionContext`
        Working precision.

    Returns
    -------
    value : `CValue`
        log Gamma(s), continuous in the plane cut along the
        non-positive real axis.

    Raises
    ------
    PoleError
        If ``s`` is within ``ctx.eps`` of a non-positive integer.

    Notes
    -----
    Uses the Stirling series after raising ``s`` by integer shifts,
    ``log Gamma(s) = log Gamma(s + n) - sum_{k<n} log(s + k)``.
    The shift threshold and number of Bernoulli terms are chosen
    so that the remainder is below the working precision.
    """
    with ctx.workdps():
        s = mpmath.mpc(s)
        _check_pole(s, ctx, "log_gamma")
        with mpmath.extradps(magnitude_digits(s)):
            result = _log_gamma(s)
        return +result


def digamma(s, ctx):
    """Compute psi(s) = Gamma'(s)/Gamma(s).

    Uses the differentiated Stirling series with the same shift strategy
    as `log_gamma`.

    Raises
    ------
    PoleError
        If ``s`` is within ``ctx.eps`` of a non-positive integer.
    """
    with ctx.workdps():
        s = mpmath.mpc(s)
        _check_pole(s, ctx, "digamma")
        with mpmath.extradps(magnitude_digits(s)):
            result = _digamma(s)
        return +result


def chi(s, ctx):
    """Compute chi(s) = (2 pi)^s / (2 cos(pi s / 2) Gamma(s)).

    The factor with ``zeta(s) = chi(s) zeta(1 - s)``.

    Parameters
    ----------
    s : `CValue` or number
        Argument.
    ctx : `PrecisionContext`
        Working precision.

    Returns
    -------
    value : `CValue`
        chi(s).

    Raises
    ------
    PoleError
        If cos(pi s / 2) or 1/Gamma(s) vanishes within ``ctx.eps``.
    NumericOverflowError
        If the result is not finite.
    """
    with ctx.workdps():
        s = mpmath.mpc(s)
        _check_pole(s, ctx, "chi")
        with mpmath.extradps(magnitude_digits(s)):
            log_cos, one_plus_q = _log_cos(mpmath.pi * s / 2)
            if abs(one_plus_q) < ctx.eps:
                raise PoleError(f"chi: cos(pi s/2) vanishes at s={mpmath.nstr(s, 15)}")
            log_chi = (
                s * mpmath.log(2 * mpmath.pi) - mpmath.ln2 - log_cos - _log_gamma(s)
            )
            result = mpmath.exp(log_chi)
        if not mpmath.isfinite(result):
            raise NumericOverflowError(f"chi overflowed at s={mpmath.nstr(s, 15)}")
        return +result


def chi_log_deriv(s, ctx):
    """Compute chi'(s)/chi(s) = log(2 pi) + (pi/2) tan(pi s/2) - psi(s).

    Raises
    ------
    PoleError
        As for `chi`.
    NumericOverflowError
        If the result is not finite.
    """
    with ctx.workdps():
        s = mpmath.mpc(s)
        _check_pole(s, ctx, "chi_log_deriv")
        q, sign = _tan_parts(mpmath.pi * s / 2)
        if abs(1 + q) < ctx.eps:
            raise PoleError(
                f"chi_log_deriv: cos(pi s/2) vanishes at s={mpmath.nstr(s, 15)}"
            )
        with mpmath.extradps(magnitude_digits(s)):
            tan = sign * mpmath.j * (1 - q) / (1 + q)
            result = mpmath.log(2 * mpmath.pi) + mpmath.pi / 2 * tan - _digamma(s)
        if not mpmath.isfinite(result):
            raise NumericOverflowError(
                f"chi_log_deriv overflowed at s={mpmath.nstr(s, 15)}"
            )
        return +result


def chi_asymptotic(s, ctx, terms=3):
    """Compute chi(s) from its large-t Stirling expansion.

    ``log chi(s) ~ (1/2 - s) log(s / 2 pi) + s (i pi / 2 + 1)
    - sum_k B_2k / (2k (2k - 1)) s^(1 - 2k)``.

    This is the fixed-length form used by double and quadruple precision
    implementations; with ``terms=3`` the tail is
    ``(1/s)(1/12 + s^-2 (-1/360 + s^-2 / 1260))``.
    It is only accurate for Im(s) > 0 and large |s|;
    use `chi` for full precision.

    Parameters
    ----------
    s : `CValue` or number
        Argument, with Im(s) > 0.
    ctx : `PrecisionContext`
        Working precision.
    terms : `int` (optional)
        Number of Stirling tail terms.
    """
    if terms < 0:
        raise ValueError(f"terms={terms} must be >= 0")
    with ctx.workdps():
        s = mpmath.mpc(s)
        prec = mpmath.mp.prec
        tail = mpmath.mpc(0)
        for k in range(1, terms + 1):
            tail += _bernoulli(2 * k, prec) / (2 * k * (2 * k - 1)) * s ** (1 - 2 * k)
        log_chi = (
            (mpmath.mpf(0.5) - s) * mpmath.log(s / (2 * mpmath.pi))
            + s * (mpmath.j * mpmath.pi / 2 + 1)
            - tail
        )
        return mpmath.exp(log_chi)
