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
    "SweepSpec",
    "SweepRow",
    "SweepReport",
    "DipPoint",
    "t_boundary",
    "sample_heights",
    "delta_at",
    "sweep",
    "sweep_async",
    "deriv_sweep",
    "dip_diagnostic",
    "mordell_error_profile",
    "write_csv",
    "write_dips_csv",
]

import asyncio
import csv
import dataclasses
import logging

import mpmath

from .coeff_file import format_real
from .exceptions import DomainError
from .mordell import mordell_H, mordell_nodes
from .oracle import G, OracleConfig, zeta_oracle, zeta_oracle_deriv
from .precision import PrecisionContext
from .quadrature_rule import H_p
from .zeta_eval import F, N_t, zeta_p, zeta_p_deriv

_log = logging.getLogger(__name__)

DEFAULT_ORACLE_EXTRA_DIGITS = 15

# Significant digits of t and log10(delta) in CSV files.
CSV_DIGITS = 17


def t_boundary(n):
    """Return t_n = 2 pi n^2 at the current precision."""
    return 2 * mpmath.pi * n * n


@dataclasses.dataclass(frozen=True)
class SweepSpec:
    """Description of an error sweep over t.

    Parameters
    ----------
    rule_p : `int`
        Order of the quadrature rule being measured.
    a, b : `str` or number
        Edges of the strip a <= Re(s) <= b; a < b.
    t_lo, t_hi : `str` or number
        Range of heights; t_lo >= t_1 = 2 pi.
        If t_lo > t_hi the range is empty.
    t_samples : `int`
        Number of uniformly spaced heights, >= 1.
    digits : `int`
        Target digits of the measurement.
    strip_points : `int` (optional)
        Number of sigma values across the strip, >= 2.
    eval_digits : `int` (optional)
        If not `None`, evaluate zeta_p at this reduced precision
        (with coefficients rounded to it) while the oracle keeps full precision.

    Raises
    ------
    ValueError
        If a field is out of range.
    """

    rule_p: int
    a: str
    b: str
    t_lo: str
    t_hi: str
    t_samples: int
    digits: int
    strip_points: int = 101
    eval_digits: int = None

    def __post_init__(self):
        if self.rule_p < 1:
            raise ValueError(f"rule_p={self.rule_p} must be >= 1")
        if not mpmath.mpf(self.a) < mpmath.mpf(self.b):
            raise ValueError(f"a={self.a} must be less than b={self.b}")
        if mpmath.mpf(self.t_lo) < t_boundary(1):
            raise ValueError(f"t_lo={self.t_lo} must be >= t_1 = 2 pi")
        if self.t_samples < 1:
            raise ValueError(f"t_samples={self.t_samples} must be >= 1")
        if self.strip_points < 2:
            raise ValueError(f"strip_points={self.strip_points} must be >= 2")
        if self.digits < 1:
            raise ValueError(f"digits={self.digits} must be >= 1")
        if self.eval_digits is not None and self.eval_digits < 1:
            raise ValueError(f"eval_digits={self.eval_digits} must be >= 1")

    def sigmas(self, ctx):
        """Return sigma_k = a + (b - a) k / (strip_points - 1)."""
        with ctx.workdps():
            a = mpmath.mpf(self.a)
            b = mpmath.mpf(self.b)
            last = self.strip_points - 1
            return [a + (b - a) * k / last for k in range(self.strip_points)]


@dataclasses.dataclass(frozen=True)
class SweepRow:
    """One measured height of a sweep.

    ``N_t`` is the N used by the evaluation, which may run at a lower
    precision than the sweep; ``B_t`` is computed from that N.
    """

    t: mpmath.mpf
    delta: mpmath.mpf
    N_t: int
    B_t: mpmath.mpf


@dataclasses.dataclass(frozen=True)
class SweepReport:
    """Result of `sweep` or `deriv_sweep`.

    Attributes
    ----------
    spec : `SweepSpec`
        What was measured.
    rows : `tuple` [`SweepRow`]
        Rows sorted by t.
    max_delta : `mpmath.mpf` or `None`
        Largest delta, or `None` if there are no rows.
    deriv : `bool`
        True if the rows measure the derivative.
    """

    spec: SweepSpec
    rows: tuple
    max_delta: mpmath.mpf
    deriv: bool = False

    @classmethod
    def from_rows(cls, spec, rows, deriv=False):
        rows = tuple(sorted(rows, key=lambda row: row.t))
        max_delta = max((row.delta for row in rows), default=None)
        return cls(spec=spec, rows=rows, max_delta=max_delta, deriv=deriv)


@dataclasses.dataclass(frozen=True)
class DipPoint:
    """Error of zeta_p at one height of a dip diagnostic.

    Attributes
    ----------
    t : `mpmath.mpf`
        Height.
    B_t : `mpmath.mpf`
        B(t); a Mordell node y_k when ``is_node``.
    error : `mpmath.mpf`
        |zeta_p(1/2 + i t) - zeta(1/2 + i t)|.
    is_node : `bool`
        True at a node, False at a midpoint.
    """

    t: mpmath.mpf
    B_t: mpmath.mpf
    error: mpmath.mpf
    is_node: bool


def sample_heights(spec, ctx):
    """Return the heights measured by a sweep, sorted and without duplicates.

    These are ``spec.t_samples`` uniformly spaced heights in [t_lo, t_hi]
    plus every interval boundary t_n in that range.
    """
    with ctx.workdps():
        t_lo = mpmath.mpf(spec.t_lo)
        t_hi = mpmath.mpf(spec.t_hi)
        if t_lo > t_hi:
            return []
        if t_lo == t_hi:
            return [t_lo]
        heights = {t_lo}
        if spec.t_samples > 1:
            step = (t_hi - t_lo) / (spec.t_samples - 1)
            heights.update(t_lo + step * k for k in range(1, spec.t_samples - 1))
            heights.add(t_hi)
        for n in range(N_t(t_lo), N_t(t_hi) + 1):
            t_n = t_boundary(n)
            if t_lo <= t_n <= t_hi:
                heights.add(t_n)
        return sorted(heights)


def _round_rule(rule, digits):
    """Return ``rule`` with coefficients rounded to ``digits`` digits."""
    with mpmath.workdps(digits):
        return dataclasses.replace(
            rule,
            omega0=+rule.omega0,
            omega=tuple(+w for w in rule.omega),
            lambda_=tuple(+lam for lam in rule.lambda_),
            residual=None,
        )


def delta_at(t, spec, rule, ctx, oracle_extra_digits=DEFAULT_ORACLE_EXTRA_DIGITS, deriv=False):
    """Measure the largest error of zeta_p across the strip at height t.

    Parameters
    ----------
    t : `mpmath.mpf` or number
        Height, t > 0.
    spec : `SweepSpec`
        Strip and sampling.
    rule : `QuadratureRule`
        Coefficients.
    ctx : `PrecisionContext`
        Measurement precision.
    oracle_extra_digits : `int` (optional)
        The oracle runs this many digits above ``ctx.digits``.
    deriv : `bool` (optional)
        Measure zeta_p_deriv against zeta_oracle_deriv instead.

    Returns
    -------
    delta : `mpmath.mpf`
        max_k |zeta_p(sigma_k + i t) - zeta(sigma_k + i t)|.
    """
    delta, _ = _measure(t, spec, rule, ctx, oracle_extra_digits, deriv)
    return delta


def _measure(t, spec, rule, ctx, oracle_extra_digits, deriv):
    """Return ``(delta, N)`` where N is the N_t zeta_p actually used."""
    oracle_ctx = ctx.raised(oracle_extra_digits)
    if spec.eval_digits is None:
        eval_ctx = ctx
    else:
        eval_ctx = PrecisionContext(digits=spec.eval_digits, guard=10)
        rule = _round_rule(rule, spec.eval_digits)
    evaluate = zeta_p_deriv if deriv else zeta_p
    benchmark = zeta_oracle_deriv if deriv else zeta_oracle
    with oracle_ctx.workdps():
        t = mpmath.mpf(t)
        errors = []
        for sigma in spec.sigmas(oracle_ctx):
            s = mpmath.mpc(sigma, t)
            result = evaluate(s, rule, eval_ctx)
            errors.append(abs(result.value - benchmark(s, oracle_ctx)))
        return max(errors), result.N_used


def _sweep_row(t, spec, rule, ctx, oracle_extra_digits, deriv):
    delta, N = _measure(t, spec, rule, ctx, oracle_extra_digits, deriv)
    if N < 1:
        raise DomainError(f"t={mpmath.nstr(t, 15)} is below t_1 = 2 pi")
    with ctx.workdps():
        B_t = mpmath.mpf(t) / (2 * mpmath.pi * N) - N - 1
        return SweepRow(t=t, delta=delta, N_t=N, B_t=B_t)


def _check_rule(spec, rule):
    if rule.p != spec.rule_p:
        raise ValueError(f"rule.p={rule.p} does not match spec.rule_p={spec.rule_p}")


def sweep(spec, rule, ctx, oracle_extra_digits=DEFAULT_ORACLE_EXTRA_DIGITS, deriv=False):
    """Measure delta_at over the heights of `sample_heights`.

    Parameters
    ----------
    spec : `SweepSpec`
        What to measure.
    rule : `QuadratureRule`
        Coefficients; ``rule.p`` must equal ``spec.rule_p``.
    ctx : `PrecisionContext`
        Measurement precision.
    oracle_extra_digits : `int` (optional)
        The oracle runs this many digits above ``ctx.digits``.
    deriv : `bool` (optional)
        Measure the derivative; see also `deriv_sweep`.

    Returns
    -------
    report : `SweepReport`
        One row per height, sorted by t.
    """
    _check_rule(spec, rule)
    heights = sample_heights(spec, ctx)
    _log.info(f"Sweeping p={rule.p} over {len(heights)} heights")
    rows = []
    for i, t in enumerate(heights):
        rows.append(_sweep_row(t, spec, rule, ctx, oracle_extra_digits, deriv))
        _log.debug(f"Row {i + 1}/{len(heights)}: t={mpmath.nstr(t, 12)}")
    return SweepReport.from_rows(spec, rows, deriv=deriv)


async def sweep_async(
    spec, rule, ctx, executor, oracle_extra_digits=DEFAULT_ORACLE_EXTRA_DIGITS, deriv=False
):
    """Compute the same report as `sweep`, one row per executor task.

    Parameters
    ----------
    executor : `concurrent.futures.Executor`
        Usually a `concurrent.futures.ProcessPoolExecutor`;
        the mpmath precision is process global, so do not use threads.

    Other parameters are as for `sweep`.
    """
    _check_rule(spec, rule)
    heights = sample_heights(spec, ctx)
    _log.info(f"Sweeping p={rule.p} over {len(heights)} heights in parallel")
    loop = asyncio.get_running_loop()
    tasks = [
        loop.run_in_executor(
            executor, _sweep_row, t, spec, rule, ctx, oracle_extra_digits, deriv
        )
        for t in heights
    ]
    rows = await asyncio.gather(*tasks)
    return SweepReport.from_rows(spec, rows, deriv=deriv)


def deriv_sweep(spec, rule, ctx, oracle_extra_digits=DEFAULT_ORACLE_EXTRA_DIGITS):
    """`sweep` of zeta_p_deriv against zeta_oracle_deriv."""
    return sweep(spec, rule, ctx, oracle_extra_digits=oracle_extra_digits, deriv=True)


def dip_diagnostic(n, rule, ctx, oracle_extra_digits=DEFAULT_ORACLE_EXTRA_DIGITS):
    """Measure the error of zeta_p on the critical line in [t_n, t_{n+1}]
    at the heights where B(t) is a Mordell node, and between them.

    Parameters
    ----------
    n : `int`
        Interval index, >= 1; the pattern is clearest for n >= 1000.
    rule : `QuadratureRule`
        Coefficients.
    ctx : `PrecisionContext`
        Measurement precision.
    oracle_extra_digits : `int` (optional)
        The oracle runs this many digits above ``ctx.digits``.

    Returns
    -------
    points : `list` [`DipPoint`]
        The 4p+2 nodes t = 2 pi n (n + 1 + y_k) and 4p+2 midpoints,
        sorted by t. The last midpoint lies between the node B = 1 and t_{n+1}.

    Notes
    -----
    N is fixed to n rather than recomputed from t, so rounding of
    t_n = 2 pi n^2 cannot move the first node into the previous interval.
    """
    if n < 1:
        raise ValueError(f"n={n} must be >= 1")
    oracle_ctx = ctx.raised(oracle_extra_digits)
    cfg = OracleConfig.auto(oracle_ctx)
    with oracle_ctx.workdps():
        nodes = list(mordell_nodes(rule.p, oracle_ctx))
        ends = nodes + [mpmath.mpf(n + 1) / n]
        mids = [(y1 + y2) / 2 for y1, y2 in zip(ends[:-1], ends[1:])]
        points = []
        for ys, is_node in ((nodes, True), (mids, False)):
            for y in ys:
                t = 2 * mpmath.pi * n * (n + 1 + y)
                s = mpmath.mpc(0.5, t)
                value = F(s, n, rule, ctx)
                error = abs(value - G(s, n, cfg))
                points.append(DipPoint(t=t, B_t=y, error=error, is_node=is_node))
                _log.debug(f"Dip point B={mpmath.nstr(y, 8)}: error={mpmath.nstr(error, 3)}")
        return sorted(points, key=lambda point: point.t)


def mordell_error_profile(rule, ctx, samples=201):
    """Return ``[(y, |H_p(y) - H(y)|)]`` on a uniform grid of y in [-1, 1].

    The error vanishes at the nodes y_k and, through B(t), shapes the
    error of zeta_p within each interval [t_n, t_{n+1}].
    """
    if samples < 2:
        raise ValueError(f"samples={samples} must be >= 2")
    with ctx.workdps():
        profile = []
        for k in range(samples):
            y = -1 + mpmath.mpf(2 * k) / (samples - 1)
            profile.append((y, abs(H_p(y, rule, ctx) - mordell_H(y, ctx))))
        return profile


def _log10_str(value):
    if value == 0:
        return "-inf"
    return mpmath.nstr(mpmath.log10(value), CSV_DIGITS)


def write_csv(report, path):
    """Write a sweep report as CSV with header ``t,delta,log10_delta,N_t,B_t``.

    t, log10_delta and B_t have 17 significant digits;
    delta has ``report.spec.digits`` digits in scientific notation.
    """
    with open(path, "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(["t", "delta", "log10_delta", "N_t", "B_t"])
        for row in report.rows:
            writer.writerow(
                [
                    mpmath.nstr(row.t, CSV_DIGITS),
                    format_real(row.delta, report.spec.digits),
                    _log10_str(row.delta),
                    row.N_t,
                    mpmath.nstr(row.B_t, CSV_DIGITS),
                ]
            )


def write_dips_csv(points, path, digits=20):
    """Write dip diagnostic points as CSV with header
    ``t,B_t,kind,error,log10_error``; kind is ``node`` or ``mid``.
    """
    with open(path, "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(["t", "B_t", "kind", "error", "log10_error"])
        for point in points:
            writer.writerow(
                [
                    mpmath.nstr(point.t, CSV_DIGITS),
                    mpmath.nstr(point.B_t, CSV_DIGITS),
                    "node" if point.is_node else "mid",
                    format_real(point.error, digits),
                    _log10_str(point.error),
                ]
            )
