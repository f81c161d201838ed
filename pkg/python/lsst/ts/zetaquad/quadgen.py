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
    "apply_functional",
    "orthogonal_polys",
    "antisymmetry_defect",
    "pair_and_order_roots",
    "RawQuadSolution",
    "quad_weights",
    "convert_to_rule",
    "generate_rule",
]

import dataclasses
import logging
import math

import mpmath

from .exceptions import (
    BranchError,
    GenerationError,
    MultipleRootError,
    OrthogonalityBreakdownError,
    PairingError,
    QuadratureZeroDivisorError,
    RootFindingError,
)
from .mordell import moments, theta
from .polynomial import ComplexPolynomial, convolve, poly_roots
from .precision import PrecisionContext
from .quadrature_rule import QuadratureRule

_log = logging.getLogger(__name__)

# Failures that may go away at higher working precision.
_RETRYABLE_ERRORS = (
    OrthogonalityBreakdownError,
    RootFindingError,
    MultipleRootError,
    PairingError,
    QuadratureZeroDivisorError,
    BranchError,
)


def apply_functional(coeffs, moment_table):
    """Apply the moment functional L[x^k] = mu_k to a polynomial
    given by its coefficients (lowest degree first).
    """
    mu = moment_table.mu
    if len(coeffs) > len(mu):
        raise ValueError(
            f"Polynomial degree {len(coeffs) - 1} exceeds the {len(mu)} moments"
        )
    return mpmath.fsum(c * m for c, m in zip(coeffs, mu))


def orthogonal_polys(moment_table, ctx):
    """Compute monic orthogonal polynomials P_0, ..., P_m, m = 2p + 1,
    for the moment functional.

    Parameters
    ----------
    moment_table : `MomentTable`
        Moments mu_0, ..., mu_{4p+1}.
    ctx : `PrecisionContext`
        Working precision.

    Returns
    -------
    polys : `list` [`ComplexPolynomial`]
        P_0, ..., P_m.
    a : `list` [`CValue`]
        Recurrence coefficients a_0, ..., a_{m-1}.
    b : `list` [`CValue`]
        Recurrence coefficients b_0, ..., b_{m-1}; b_0 = 0.

    Raises
    ------
    OrthogonalityBreakdownError
        If |L[P_n^2]| < 10**(-digits - guard/2) ||P_n||^2 for some n.

    Notes
    -----
    P_{n+1}(x) = (x - a_n) P_n(x) - b_n P_{n-1}(x), with
    a_n = L[x P_n^2] / L[P_n^2] and b_n = L[P_n^2] / L[P_{n-1}^2].
    L is applied to the coefficient form of each product.
    """
    m = 2 * moment_table.p + 1
    with ctx.workdps():
        breakdown_tol = ctx.tol(ctx.digits + ctx.guard / 2)
        prev = [mpmath.mpc(0)]
        current = [mpmath.mpc(1)]
        prev_norm = None
        polys = [ComplexPolynomial(current)]
        a = []
        b = []
        for n in range(m):
            square = convolve(current, current)
            norm = apply_functional(square, moment_table)
            coeff_norm2 = mpmath.fsum(abs(c) ** 2 for c in current)
            if abs(norm) < breakdown_tol * coeff_norm2:
                raise OrthogonalityBreakdownError(
                    f"L[P_{n}^2]={mpmath.nstr(norm, 5)} is numerically zero "
                    f"at {ctx.work_dps} digits",
                    n=n,
                )
            a_n = apply_functional([mpmath.mpc(0)] + square, moment_table) / norm
            b_n = mpmath.mpc(0) if prev_norm is None else norm / prev_norm
            shifted = [mpmath.mpc(0)] + current
            padded = current + [mpmath.mpc(0)]
            padded_prev = prev + [mpmath.mpc(0)] * (len(shifted) - len(prev))
            following = [
                shifted[k] - a_n * padded[k] - b_n * padded_prev[k]
                for k in range(len(shifted))
            ]
            following[-1] = mpmath.mpc(1)
            a.append(a_n)
            b.append(b_n)
            prev, current, prev_norm = current, following, norm
            polys.append(ComplexPolynomial(current))
            _log.debug(f"P_{n + 1}: a={mpmath.nstr(a_n, 8)}, b={mpmath.nstr(b_n, 8)}")
        return polys, a, b


def antisymmetry_defect(poly):
    """Return max_k |c_k + c_{m-k}| for a polynomial of degree m.

    Zero when P(x) = -x^m P(1/x), the symmetry of P_{2p+1}.
    """
    coeffs = poly.coeffs
    m = poly.degree
    return max(abs(coeffs[k] + coeffs[m - k]) for k in range(m + 1))


def pair_and_order_roots(roots, ctx):
    """Order the roots of P_{2p+1} as z_{-p}, ..., z_p.

    Parameters
    ----------
    roots : `list` [`CValue`]
        The 2p+1 roots.
    ctx : `PrecisionContext`
        Working precision; ``10**(-digits/2)`` is the matching tolerance.

    Returns
    -------
    z : `list` [`CValue`]
        Roots indexed -p..p (``z[j + p]`` is z_j), with z_0 = 1 exactly,
        |z_j| increasing in j, |z_j| >= 1 for j > 0 and
        z_{-j} = 1/z_j recomputed from z_j.
        Equal moduli are ordered by increasing argument.

    Raises
    ------
    PairingError
        If no root is within tolerance of 1 or a root has no reciprocal
        partner within relative tolerance.
    """
    if len(roots) % 2 != 1:
        raise PairingError(f"Expected an odd number of roots; got {len(roots)}")
    with ctx.workdps():
        tol = ctx.tol(ctx.digits / 2)
        remaining = [mpmath.mpc(r) for r in roots]
        unit_index = min(range(len(remaining)), key=lambda i: abs(remaining[i] - 1))
        if abs(remaining[unit_index] - 1) > tol:
            raise PairingError(
                f"No root within {mpmath.nstr(tol, 3)} of 1; nearest is "
                f"{mpmath.nstr(remaining[unit_index], 15)}"
            )
        del remaining[unit_index]

        outer = []
        while remaining:
            big_index = max(range(len(remaining)), key=lambda i: abs(remaining[i]))
            big = remaining.pop(big_index)
            target = 1 / big
            if not remaining:
                raise PairingError(f"Root {mpmath.nstr(big, 15)} has no partner")
            partner_index = min(
                range(len(remaining)), key=lambda i: abs(remaining[i] - target)
            )
            if abs(remaining[partner_index] - target) > tol * abs(target):
                raise PairingError(
                    f"Root {mpmath.nstr(big, 15)} has no reciprocal partner; "
                    f"nearest candidate is {mpmath.nstr(remaining[partner_index], 15)}"
                )
            del remaining[partner_index]
            outer.append(big)

        outer.sort(key=lambda z: (abs(z), mpmath.arg(z)))
        return [1 / z for z in reversed(outer)] + [mpmath.mpc(1)] + outer


@dataclasses.dataclass(frozen=True)
class RawQuadSolution:
    """Nodes and weights of the quadrature sum_j u_j Q(z_j) = L[Q].

    Attributes
    ----------
    p : `int`
        Order.
    z : `tuple` [`CValue`]
        Nodes z_{-p}, ..., z_p; z_0 = 1 and z_{-j} z_j = 1.
    u : `tuple` [`CValue`]
        Weights u_{-p}, ..., u_p.
    identity_residual : `mpmath.mpf`
        max_j |u_{-j} - u_j z_j^(4p+1)|.
    """

    p: int
    z: tuple
    u: tuple
    identity_residual: mpmath.mpf

    def z_at(self, j):
        """Return z_j for -p <= j <= p."""
        return self.z[j + self.p]

    def u_at(self, j):
        """Return u_j for -p <= j <= p."""
        return self.u[j + self.p]

    def moment_defect(self, moment_table, ctx):
        """Return max_k |sum_j u_j z_j^k - mu_k| over k = 0, ..., 4p+1."""
        with ctx.workdps():
            defect = mpmath.mpf(0)
            powers = [mpmath.mpc(1)] * len(self.z)
            for mu_k in moment_table.mu:
                total = mpmath.fsum(u * zk for u, zk in zip(self.u, powers))
                defect = max(defect, abs(total - mu_k))
                powers = [zk * z for zk, z in zip(powers, self.z)]
            return defect


def quad_weights(P_m, P_m1, z, moment_table, ctx):
    """Compute the Gaussian quadrature weights
    u_j = L[P_{m-1}^2] / (P_{m-1}(z_j) P_m'(z_j)).

    Parameters
    ----------
    P_m : `ComplexPolynomial`
        Orthogonal polynomial of degree m = 2p + 1.
    P_m1 : `ComplexPolynomial`
        Orthogonal polynomial of degree m - 1.
    z : `list` [`CValue`]
        Ordered roots of ``P_m`` from `pair_and_order_roots`.
    moment_table : `MomentTable`
        Moments.
    ctx : `PrecisionContext`
        Working precision.

    Returns
    -------
    solution : `RawQuadSolution`
        Nodes, weights and the residual of u_{-j} = u_j z_j^(4p+1).

    Raises
    ------
    QuadratureZeroDivisorError
        If P_{m-1}(z_j) or P_m'(z_j) vanishes numerically.
    """
    p = moment_table.p
    with ctx.workdps():
        norm = apply_functional(convolve(P_m1.coeffs, P_m1.coeffs), moment_table)
        u = []
        for index, zj in enumerate(z):
            value = P_m1(zj)
            _, deriv = P_m.eval_with_deriv(zj)
            if abs(value) <= ctx.eps * P_m1.scale(zj) or deriv == 0:
                raise QuadratureZeroDivisorError(
                    f"Weight denominator vanishes at z_{index - p}={mpmath.nstr(zj, 15)}"
                )
            u.append(norm / (value * deriv))
        residual = mpmath.mpf(0)
        for j in range(1, p + 1):
            defect = abs(u[p - j] - u[p + j] * z[p + j] ** (4 * p + 1))
            residual = max(residual, defect)
        return RawQuadSolution(p=p, z=tuple(z), u=tuple(u), identity_residual=residual)


def convert_to_rule(sol, p, ctx):
    """Convert quadrature nodes and weights to zeta_p coefficients.

    lambda_j = (4p+1)/(4 pi) log z_j,  x_j = lambda_j / theta,
    omega_j = u_j exp(pi x_j^2 + 2 pi theta x_j),  omega_0 = u_0.

    Raises
    ------
    BranchError
        If some z_j (j > 0) lies on the cut of the principal logarithm.
    """
    if sol.p != p:
        raise ValueError(f"sol.p={sol.p} != p={p}")
    with ctx.workdps():
        th = theta()
        tol = ctx.tol(ctx.digits / 2)
        omega = []
        lambda_ = []
        for j in range(1, p + 1):
            zj = sol.z_at(j)
            if zj.real < 0 and abs(zj.imag) <= tol * abs(zj):
                raise BranchError(
                    f"z_{j}={mpmath.nstr(zj, 15)} is on the negative real axis"
                )
            lam = (4 * p + 1) / (4 * mpmath.pi) * mpmath.log(zj)
            x = lam / th
            omega.append(
                sol.u_at(j) * mpmath.exp(mpmath.pi * x * x + 2 * mpmath.pi * th * x)
            )
            lambda_.append(lam)
        return QuadratureRule(
            p=p,
            omega0=sol.u_at(0),
            omega=tuple(omega),
            lambda_=tuple(lambda_),
            gen_digits=ctx.digits,
            work_digits=ctx.work_dps,
        )


def _generate_at(p, work_digits):
    """Run the generation pipeline once at a fixed working precision."""
    ctx = PrecisionContext(digits=work_digits)
    moment_table = moments(p, ctx)
    polys, _, _ = orthogonal_polys(moment_table, ctx)
    P_m = polys[-1]
    roots = poly_roots(P_m, ctx)
    z = pair_and_order_roots(roots, ctx)
    sol = quad_weights(P_m, polys[-2], z, moment_table, ctx)
    return convert_to_rule(sol, p, ctx), sol


def _disagreement(rule, check):
    """Largest relative difference between two rules' coefficients."""
    pairs = [(rule.omega0, check.omega0)]
    pairs += list(zip(rule.omega, check.omega))
    pairs += list(zip(rule.lambda_, check.lambda_))
    return max(abs(a - b) / abs(b) for a, b in pairs)


def generate_rule(p, digits, residual_slack=10, max_retries=3, cross_check=True):
    """Generate the coefficients of zeta_p to ``digits`` significant digits.

    Parameters
    ----------
    p : `int`
        Order of the rule, 1 <= p <= 150.
    digits : `int`
        Requested number of correct significant digits.
    residual_slack : `int` (optional)
        Accept the rule if its interpolation residual and weight-identity
        residual are below ``10**(-digits + residual_slack)``.
    max_retries : `int` (optional)
        Number of times to raise the working precision and try again.
    cross_check : `bool` (optional)
        If true, regenerate at higher precision and require every
        coefficient to agree to ``10**(-digits - 2)`` relative.

    Returns
    -------
    rule : `QuadratureRule`
        Validated rule with ``gen_digits=digits``.

    Raises
    ------
    ValueError
        If p or digits is out of range.
    GenerationError
        If no attempt succeeds.

    Notes
    -----
    The map from moments to nodes and weights is ill-conditioned,
    so the pipeline runs at ceil(2.5 digits + 2p) working digits.
    """
    if not 1 <= p <= 150:
        raise ValueError(f"p={p} must be in the range [1, 150]")
    if digits < 1:
        raise ValueError(f"digits={digits} must be positive")
    target = PrecisionContext(digits=digits)
    accept = target.tol(digits - residual_slack)
    work_digits = math.ceil(2.5 * digits + 2 * p)
    for attempt in range(max_retries + 1):
        _log.info(f"Generating p={p} rule; digits={digits}, work_digits={work_digits}")
        try:
            rule, sol = _generate_at(p, work_digits)
            if sol.identity_residual > accept:
                raise GenerationError(
                    f"Weight identity residual {mpmath.nstr(sol.identity_residual, 3)} "
                    f"exceeds {mpmath.nstr(accept, 3)}"
                )
            if cross_check:
                check, _ = _generate_at(p, work_digits + max(20, digits // 2))
                with target.workdps():
                    disagreement = _disagreement(rule, check)
                if disagreement > target.tol(digits + 2):
                    raise GenerationError(
                        f"Coefficients changed by {mpmath.nstr(disagreement, 3)} "
                        "at higher precision"
                    )
            rule = dataclasses.replace(rule, gen_digits=digits).validated(
                PrecisionContext(digits=work_digits)
            )
            if rule.residual > accept:
                raise GenerationError(
                    f"Interpolation residual {mpmath.nstr(rule.residual, 3)} "
                    f"exceeds {mpmath.nstr(accept, 3)}"
                )
            _log.info(
                f"Generated p={p} rule; residual={mpmath.nstr(rule.residual, 3)}"
            )
            return rule
        except _RETRYABLE_ERRORS + (GenerationError,) as e:
            _log.warning(f"Attempt {attempt + 1} at {work_digits} digits failed: {e}")
            work_digits += max(20, work_digits // 2)
    raise GenerationError(
        f"Could not generate p={p} rule to {digits} digits "
        f"after {max_retries + 1} attempts"
    )
