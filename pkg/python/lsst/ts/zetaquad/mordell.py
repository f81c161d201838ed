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

__all__ = ["THETA_PHASE", "theta", "mordell_H", "mordell_nodes", "MomentTable", "moments"]

import dataclasses

import mpmath

THETA_PHASE = -0.25
"""arg(theta) / pi, where theta = exp(-pi i / 4)."""

# Number of Taylor terms of numerator and denominator used
# near the removable singularities of H.
_SERIES_ORDER = 5


def theta():
    """Return theta = exp(-pi i / 4) at the current working precision."""
    return mpmath.expjpi(THETA_PHASE)


def _numerator(y):
    return mpmath.sqrt(2) * mpmath.cos(mpmath.pi * y / 2) * mpmath.expjpi(
        -(4 * y * y + 1) / 8
    ) - mpmath.expjpi(THETA_PHASE)


def _series_near_pole(y, y0):
    """Evaluate H(y) by dividing Taylor series about a zero y0 of cos(pi y)."""
    num = mpmath.taylor(_numerator, y0, _SERIES_ORDER)
    # cos(pi (y0 + h)) = sum_k pi^k / k! cos(pi y0 + k pi / 2) h^k
    den = [
        mpmath.pi ** k / mpmath.factorial(k) * mpmath.cos(mpmath.pi * (y0 + mpmath.mpf(k) / 2))
        for k in range(_SERIES_ORDER + 1)
    ]
    # Both series vanish at h = 0; divide the shifted series.
    a = num[1:]
    b = den[1:]
    quotient = []
    for k in range(len(a)):
        value = a[k] - mpmath.fsum(quotient[i] * b[k - i] for i in range(k))
        quotient.append(value / b[0])
    return mpmath.polyval(quotient[::-1], y - y0)


def mordell_H(y, ctx):
    """Evaluate the Mordell integral

    H(y) = int exp(-2 pi x^2 + 2 pi theta x y) / cosh(pi theta x) dx
    = [sqrt(2) cos(pi y/2) exp(-(pi i / 8)(4 y^2 + 1)) - exp(-pi i / 4)] / cos(pi y).

    Parameters
    ----------
    y : `mpmath.mpf` or number
        Real argument.
    ctx : `PrecisionContext`
        Working precision.

    Returns
    -------
    value : `CValue`
        H(y).

    Notes
    -----
    The zeros of cos(pi y) at half integers are removable singularities
    of H. Within ``10**(-digits/2)`` of one of them H is evaluated
    from a series expansion about that point.
    """
    with ctx.workdps():
        y = mpmath.mpf(y)
        y0 = mpmath.floor(y) + mpmath.mpf(0.5)
        if abs(y - y0) < ctx.tol(ctx.digits / 2):
            return _series_near_pole(y, y0)
        return _numerator(y) / mpmath.cos(mpmath.pi * y)


def mordell_nodes(p, ctx):
    """Return the 4p+2 nodes y_k = -1 + 2k/(4p+1), k = 0, ..., 4p+1.

    Each node is rounded once; y_0 = -1 and y_{4p+1} = 1 exactly.
    """
    if p < 1:
        raise ValueError(f"p={p} must be >= 1")
    with ctx.workdps():
        return tuple(mpmath.mpf(2 * k - 4 * p - 1) / (4 * p + 1) for k in range(4 * p + 2))


@dataclasses.dataclass(frozen=True)
class MomentTable:
    """Moments mu_k = H(y_k) of the quadrature functional.

    Attributes
    ----------
    p : `int`
        Order of the quadrature rule.
    mu : `tuple` [`CValue`]
        The 4p+2 moments mu_0, ..., mu_{4p+1}; mu_k = mu_{4p+1-k}.
    y : `tuple` [`mpmath.mpf`]
        The nodes y_0, ..., y_{4p+1}.
    """

    p: int
    mu: tuple
    y: tuple


def moments(p, ctx):
    """Compute the moment table for order p.

    H is even, so only mu_0..mu_2p are evaluated and the rest
    are mirrored: mu_k = mu_{4p+1-k} exactly.
    """
    y = mordell_nodes(p, ctx)
    half = [mordell_H(y[k], ctx) for k in range(2 * p + 1)]
    mu = half + half[::-1]
    return MomentTable(p=p, mu=tuple(mu), y=y)
