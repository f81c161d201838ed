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

__all__ = ["ComplexPolynomial", "convolve", "poly_roots"]

import dataclasses
import logging

import mpmath

from .exceptions import MultipleRootError, RootFindingError

_log = logging.getLogger(__name__)

# Phase offset of the initial Aberth points; avoids starting on the real axis,
# where real-coefficient symmetry can stall the iteration.
_START_PHASE = 0.4


def convolve(a, b):
    """Multiply two polynomials given as coefficient sequences
    (lowest degree first).
    """
    result = [mpmath.mpc(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            result[i + j] += ai * bj
    return result


@dataclasses.dataclass(frozen=True)
class ComplexPolynomial:
    """Monic polynomial with complex coefficients.

    Parameters
    ----------
    coeffs : sequence of `CValue`
        Coefficients, lowest degree first. The last must be exactly 1.

    Raises
    ------
    ValueError
        If ``coeffs`` is empty or the polynomial is not monic.
    """

    coeffs: tuple

    def __post_init__(self):
        coeffs = tuple(mpmath.mpc(c) for c in self.coeffs)
        if not coeffs:
            raise ValueError("coeffs must not be empty")
        if coeffs[-1] != 1:
            raise ValueError(
                f"Polynomial is not monic; leading coefficient={coeffs[-1]}"
            )
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def __call__(self, z):
        result = mpmath.mpc(0)
        for c in reversed(self.coeffs):
            result = result * z + c
        return result

    def eval_with_deriv(self, z):
        """Evaluate P(z) and P'(z) by Horner's rule."""
        value = mpmath.mpc(0)
        deriv = mpmath.mpc(0)
        for c in reversed(self.coeffs):
            deriv = deriv * z + value
            value = value * z + c
        return value, deriv

    def scale(self, z):
        """Return sum |c_k| |z|^k, the size of the terms in P(z)."""
        absz = abs(z)
        result = mpmath.mpf(0)
        for c in reversed(self.coeffs):
            result = result * absz + abs(c)
        return result

    def norm(self):
        """Euclidean norm of the coefficient vector."""
        return mpmath.sqrt(mpmath.fsum(abs(c) ** 2 for c in self.coeffs))


def _initial_points(poly):
    m = poly.degree
    c0 = abs(poly.coeffs[0])
    radius = c0 ** (mpmath.mpf(1) / m) if c0 != 0 else mpmath.mpf(1)
    return [
        radius
        * (1 + mpmath.mpf(k) / (8 * m))
        * mpmath.expjpi(mpmath.mpf(2 * k) / m + _START_PHASE / mpmath.pi)
        for k in range(m)
    ]


def _aberth(poly, max_iter):
    """Run Aberth-Ehrlich iteration with Gauss-Seidel updates."""
    m = poly.degree
    tol = mpmath.mpf(10) ** (-(mpmath.mp.dps - 5))
    z = _initial_points(poly)
    for niter in range(1, max_iter + 1):
        converged = True
        for i in range(m):
            value, deriv = poly.eval_with_deriv(z[i])
            if abs(value) <= tol * poly.scale(z[i]):
                continue
            converged = False
            if deriv == 0:
                z[i] *= 1 + mpmath.sqrt(tol)
                continue
            ratio = value / deriv
            repulsion = mpmath.fsum(1 / (z[i] - z[j]) for j in range(m) if j != i)
            z[i] -= ratio / (1 - ratio * repulsion)
        if converged:
            _log.debug(f"Aberth iteration converged in {niter} steps; degree={m}")
            return z
    raise RootFindingError(
        f"Root finding did not converge in {max_iter} iterations; degree={m}"
    )


def poly_roots(poly, ctx, max_iter=1000):
    """Find all roots of a monic polynomial.

    Parameters
    ----------
    poly : `ComplexPolynomial`
        Polynomial of degree >= 1.
    ctx : `PrecisionContext`
        Working precision.
    max_iter : `int` (optional)
        Maximum number of Aberth sweeps.

    Returns
    -------
    roots : `list` [`CValue`]
        All ``poly.degree`` roots, Newton-polished at working precision.

    Raises
    ------
    ValueError
        If the degree is 0.
    RootFindingError
        If the iteration does not converge, or a root fails the
        residual check ``|P(z)| < 10**-digits * sum |c_k| |z|^k``.
    MultipleRootError
        If two roots are closer than ``10**(-digits/2)``.
    """
    if poly.degree < 1:
        raise ValueError("poly must have degree >= 1")
    with ctx.workdps():
        if poly.degree == 1:
            return [-poly.coeffs[0]]
        roots = _aberth(poly, max_iter)
        for i, z in enumerate(roots):
            for _ in range(2):
                value, deriv = poly.eval_with_deriv(z)
                if value == 0 or deriv == 0:
                    break
                z -= value / deriv
            roots[i] = z

        eps = ctx.eps
        for z in roots:
            if abs(poly(z)) >= eps * poly.scale(z):
                raise RootFindingError(
                    f"Root {mpmath.nstr(z, 15)} has residual {mpmath.nstr(abs(poly(z)), 5)}"
                )
        simple_tol = ctx.tol(ctx.digits / 2)
        for i in range(len(roots)):
            for j in range(i + 1, len(roots)):
                if abs(roots[i] - roots[j]) <= simple_tol:
                    raise MultipleRootError(
                        f"Roots {i} and {j} coincide to within {mpmath.nstr(simple_tol, 3)} "
                        f"near {mpmath.nstr(roots[i], 15)}"
                    )
        return roots
