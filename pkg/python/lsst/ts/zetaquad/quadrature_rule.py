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

__all__ = ["QuadratureRule", "H_p", "validate_rule", "check_structure"]

import dataclasses

import mpmath

from .mordell import mordell_H, mordell_nodes


@dataclasses.dataclass(frozen=True)
class QuadratureRule:
    """Precomputed coefficients omega_{p,j}, lambda_{p,j} of zeta_p.

    Immutable, so safe to share between evaluations.

    Attributes
    ----------
    p : `int`
        Order of the rule (number of node pairs).
    omega0 : `CValue`
        omega_{p,0}.
    omega : `tuple` [`CValue`]
        omega_{p,1}, ..., omega_{p,p}.
    lambda_ : `tuple` [`CValue`]
        lambda_{p,1}, ..., lambda_{p,p}, ordered by increasing modulus.
    gen_digits : `int`
        Number of significant digits the coefficients are good to.
    residual : `mpmath.mpf` or `None`
        Max interpolation defect max_k |H_p(y_k) - H(y_k)|,
        or `None` if not yet validated.
    work_digits : `int` or `None`
        Working precision used to generate the rule, if known.
    """

    p: int
    omega0: mpmath.mpc
    omega: tuple
    lambda_: tuple
    gen_digits: int
    residual: mpmath.mpf = None
    work_digits: int = None

    def __post_init__(self):
        if self.p < 1:
            raise ValueError(f"p={self.p} must be >= 1")
        if len(self.omega) != self.p:
            raise ValueError(f"len(omega)={len(self.omega)} != p={self.p}")
        if len(self.lambda_) != self.p:
            raise ValueError(f"len(lambda_)={len(self.lambda_)} != p={self.p}")
        object.__setattr__(self, "omega", tuple(self.omega))
        object.__setattr__(self, "lambda_", tuple(self.lambda_))

    def validated(self, ctx):
        """Return a copy with ``residual`` set by `validate_rule`."""
        return dataclasses.replace(self, residual=validate_rule(self, ctx))

    def zeroed(self):
        """Return a copy with every omega set to zero."""
        zero = mpmath.mpc(0)
        return dataclasses.replace(
            self, omega0=zero, omega=(zero,) * self.p, residual=None
        )


def H_p(y, rule, ctx):
    """Evaluate the quadrature approximation of the Mordell integral,

    H_p(y) = omega_0 + 2 sum_j omega_j exp(-pi i lambda_j^2) cosh(2 pi lambda_j y).

    H_p is even in y and interpolates H at the nodes y_k.
    """
    with ctx.workdps():
        y = mpmath.mpf(y)
        total = mpmath.mpc(rule.omega0)
        for omega, lam in zip(rule.omega, rule.lambda_):
            total += (
                2
                * omega
                * mpmath.expjpi(-lam * lam)
                * mpmath.cosh(2 * mpmath.pi * lam * y)
            )
        return total


def validate_rule(rule, ctx):
    """Return the interpolation residual max_k |H_p(y_k) - H(y_k)|
    over the 4p+2 nodes.

    Use `QuadratureRule.validated` to get a rule with the residual stored.
    """
    with ctx.workdps():
        return max(
            abs(H_p(y, rule, ctx) - mordell_H(y, ctx))
            for y in mordell_nodes(rule.p, ctx)
        )


def check_structure(rule):
    """Check the qualitative shape of a rule's coefficients.

    Returns
    -------
    checks : `list` [`tuple` [`str`, `bool`]]
        ``(description, passed)`` for each check:

        * every lambda lies in the open fourth quadrant;
        * lambda is ordered by increasing modulus;
        * |omega_j| is strictly decreasing for j >= 2.
    """
    lams = rule.lambda_
    quadrant = all(lam.real > 0 > lam.imag for lam in lams)
    ordered = all(abs(lams[j]) <= abs(lams[j + 1]) for j in range(len(lams) - 1))
    mags = [abs(w) for w in rule.omega[1:]]
    decay = all(mags[j] > mags[j + 1] for j in range(len(mags) - 1))
    return [
        ("lambda in fourth quadrant", quadrant),
        ("lambda ordered by modulus", ordered),
        ("|omega_j| decreasing for j >= 2", decay),
    ]
