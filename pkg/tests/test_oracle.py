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

import os
import pathlib
import random
import unittest

import mpmath

from lsst.ts import zetaquad

COEFFS_DIR = pathlib.Path(__file__).parent / "data" / "coeffs"
LONG_TESTS = os.environ.get("ZETAQUAD_LONG_TESTS", "0") == "1"

FIRST_ZERO = "14.134725141734693790457251983562"


class OracleConfigTestCase(unittest.TestCase):
    def test_constructor(self):
        ctx = zetaquad.PrecisionContext(digits=20, guard=12)
        cfg = zetaquad.OracleConfig(h=0.5, ctx=ctx)
        self.assertEqual(cfg.h, 0.5)
        self.assertEqual(cfg.k_max, 40)
        with ctx.workdps():
            self.assertEqual(cfg.truncation_threshold, mpmath.mpf(10) ** -32)
        for h in (0, -0.1):
            with self.subTest(h=h):
                with self.assertRaises(ValueError):
                    zetaquad.OracleConfig(h=h, ctx=ctx)

    def test_auto(self):
        ctx = zetaquad.PrecisionContext(digits=30)
        cfg = zetaquad.OracleConfig.auto(ctx)
        with ctx.workdps():
            error = mpmath.exp(-mpmath.pi / (mpmath.sqrt(2) * cfg.h))
            self.assertLess(abs(mpmath.log10(error) + 35), 1e-20)


class OracleTestCase(unittest.TestCase):
    def setUp(self):
        self.ctx = zetaquad.PrecisionContext(digits=30)

    def test_center_term(self):
        """A huge step leaves only the k = 0 term h M^-s."""
        with self.ctx.workdps():
            cfg = zetaquad.OracleConfig(h=5, ctx=self.ctx)
            s = mpmath.mpc(0.5, 10)
            value = zetaquad.I_M_h(1.5, s, cfg)
            expected = 5 * mpmath.power(mpmath.mpf(1.5), -s)
            self.assertLess(abs(value - expected), self.ctx.eps)

    def test_non_decay(self):
        cfg = zetaquad.OracleConfig(h=0.5, ctx=self.ctx, truncation_threshold=0)
        with self.assertRaises(zetaquad.NonDecayError):
            zetaquad.I_M_h(1.5, mpmath.mpc(0.5, 10), cfg)

    def test_invalid_arguments(self):
        cfg = zetaquad.OracleConfig.auto(self.ctx)
        s = mpmath.mpc(0.5, 10)
        with self.assertRaises(ValueError):
            zetaquad.I_M_h(0.25, s, cfg)
        with self.assertRaises(ValueError):
            zetaquad.G(s, -1, cfg)
        with self.assertRaises(ValueError):
            zetaquad.G_deriv(s, -1, cfg)
        with self.assertRaises(zetaquad.DomainError):
            zetaquad.zeta_oracle(mpmath.mpc(0.5, -10), self.ctx)

    def test_vs_mpmath(self):
        for s in (
            mpmath.mpc(0.5, 14),
            mpmath.mpc(0.5, 100),
            mpmath.mpc(0.2, 694),
            mpmath.mpc(2, 500),
            mpmath.mpc(0.5, 10),
        ):
            with self.subTest(s=s):
                value = zetaquad.zeta_oracle(s, self.ctx)
                with mpmath.workdps(50):
                    expected = mpmath.zeta(s)
                    self.assertLess(abs(value - expected), 1e-27 * max(1, abs(expected)))

    def test_precision_escalation(self):
        s = mpmath.mpc(0.7, 321)
        value = zetaquad.zeta_oracle(s, self.ctx)
        better = zetaquad.zeta_oracle(s, self.ctx.with_digits(40))
        with mpmath.workdps(50):
            self.assertLess(abs(value - better), self.ctx.eps * max(1, abs(better)))

    def test_N_independence(self):
        ctx = zetaquad.PrecisionContext(digits=25)
        cfg = zetaquad.OracleConfig.auto(ctx)
        s = mpmath.mpc(0.5, 1000)
        N = zetaquad.N_t(s.imag, ctx)
        self.assertEqual(N, 12)
        values = [zetaquad.G(s, n, cfg) for n in (N - 1, N, N + 1)]
        with ctx.workdps():
            for value in values[::2]:
                self.assertLess(abs(value - values[1]), ctx.tol(ctx.digits - 2))

    def test_functional_equation(self):
        with self.ctx.workdps():
            s = mpmath.mpc(0.3, 500)
            value = zetaquad.zeta_oracle(s, self.ctx)
            # zeta(1 - s) = conj(zeta(conj(1 - s))) and Im(conj(1 - s)) > 0.
            reflected = mpmath.conj(zetaquad.zeta_oracle(mpmath.conj(1 - s), self.ctx))
            residual = abs(value - zetaquad.chi(s, self.ctx) * reflected)
            self.assertLess(residual, self.ctx.tol(self.ctx.digits - 4) * max(1, abs(value)))

    def check_trust_chain(self, count, t_max):
        """Self-convergence and functional equation at random strip points."""
        rng = random.Random(2718)
        ctx = zetaquad.PrecisionContext(digits=20)
        finer = ctx.with_digits(30)
        t_lo = float(zetaquad.t_boundary(4))
        for _ in range(count):
            s = mpmath.mpc(rng.uniform(0, 1), rng.uniform(t_lo, t_max))
            with finer.workdps():
                mirror = mpmath.conj(1 - s)
            with self.subTest(s=s):
                value = zetaquad.zeta_oracle(s, ctx)
                better = zetaquad.zeta_oracle(s, finer)
                reflected = mpmath.conj(zetaquad.zeta_oracle(mirror, ctx))
                with finer.workdps():
                    self.assertLess(abs(value - better), ctx.eps * max(1, abs(better)))
                    residual = abs(value - zetaquad.chi(s, ctx) * reflected)
                    self.assertLess(residual, ctx.tol(ctx.digits - 4) * max(1, abs(value)))

    def test_trust_chain(self):
        self.check_trust_chain(count=20, t_max=2000)

    @unittest.skipUnless(LONG_TESTS, "set ZETAQUAD_LONG_TESTS=1 to run")
    def test_trust_chain_full(self):
        self.check_trust_chain(count=100, t_max=1e5)

    def test_step_halving(self):
        """I_M_h agrees with itself at h/2, and the gap decays as
        exp(-pi / (sqrt(2) h)).
        """
        M = 10.5
        s = mpmath.mpc(0.5, 694)
        cfg = zetaquad.OracleConfig.auto(self.ctx)
        value = zetaquad.I_M_h(M, s, cfg)
        halved = zetaquad.I_M_h(M, s, zetaquad.OracleConfig(h=cfg.h / 2, ctx=self.ctx))
        with self.ctx.workdps():
            self.assertLess(abs(value - halved), self.ctx.eps)

            inverse_h = [4 + mpmath.sqrt(2) * k for k in range(3)]
            gaps = []
            for u in inverse_h:
                coarse = zetaquad.I_M_h(M, s, zetaquad.OracleConfig(h=1 / u, ctx=self.ctx))
                fine = zetaquad.I_M_h(M, s, zetaquad.OracleConfig(h=1 / (2 * u), ctx=self.ctx))
                gaps.append(abs(coarse - fine))
            slope = zetaquad.fit_rate(inverse_h, gaps)
            expected = -mpmath.pi / mpmath.sqrt(2)
            self.assertLess(abs(slope / expected - 1), 0.05)

    def test_doubling_digits(self):
        """Doubling the digits moves a result by at most one unit in
        the last digit of the coarser result.
        """
        rule = zetaquad.read_rule(COEFFS_DIR / "p10.txt")
        ctx = zetaquad.PrecisionContext(digits=20)
        doubled = ctx.with_digits(40)

        def zeta_10(s, ctx):
            return zetaquad.zeta_p(s, rule, ctx).value

        for evaluate in (zetaquad.zeta_oracle, zeta_10):
            for s in (mpmath.mpc(2, 500), mpmath.mpc(1.5, 300)):
                with self.subTest(evaluate=evaluate.__name__, s=s):
                    coarse = evaluate(s, ctx)
                    fine = evaluate(s, doubled)
                    with doubled.workdps():
                        exponent = int(mpmath.floor(mpmath.log10(abs(fine))))
                        ulp = mpmath.mpf(10) ** (exponent - ctx.digits + 1)
                        self.assertLessEqual(abs(coarse - fine), ulp)

    def test_vs_zeta_p(self):
        ctx = zetaquad.PrecisionContext(digits=31)
        rule = zetaquad.read_rule(COEFFS_DIR / "p10.txt")
        s = mpmath.mpc(0.5, 694)
        with ctx.workdps():
            diff = zetaquad.zeta_oracle(s, ctx) - zetaquad.zeta_p(s, rule, ctx).value
            self.assertLess(abs(diff), 1e-15)

    def test_deriv(self):
        with self.ctx.workdps():
            s = mpmath.mpc(0.5, 100)
            value = zetaquad.zeta_oracle_deriv(s, self.ctx)
            delta = mpmath.mpf(10) ** -10
            diff = (
                zetaquad.zeta_oracle(s + delta, self.ctx) - zetaquad.zeta_oracle(s - delta, self.ctx)
            ) / (2 * delta)
            self.assertLess(abs(value - diff), 1e-17 * max(1, abs(diff)))
        with mpmath.workdps(50):
            expected = mpmath.zeta(s, derivative=1)
            self.assertLess(abs(value - expected), 1e-27 * max(1, abs(expected)))


class HardyTestCase(unittest.TestCase):
    def setUp(self):
        self.ctx = zetaquad.PrecisionContext(digits=25)

    def test_theta_and_Z(self):
        for t in (15, 50, 1000):
            with self.subTest(t=t):
                theta = zetaquad.hardy_theta(t, self.ctx)
                Z = zetaquad.hardy_Z(t, self.ctx)
                with mpmath.workdps(45):
                    self.assertLess(abs(theta - mpmath.siegeltheta(t)), 1e-22)
                    self.assertLess(abs(Z - mpmath.siegelz(t)), 1e-22)

    def test_refine_zero(self):
        gamma = zetaquad.refine_zero(13, 15, self.ctx)
        with mpmath.workdps(40):
            self.assertLess(abs(gamma - mpmath.mpf(FIRST_ZERO)), 1e-22)
            value = zetaquad.zeta_oracle(mpmath.mpc(0.5, gamma), self.ctx)
            self.assertLess(abs(value), self.ctx.tol(self.ctx.digits - 3))

    def test_refine_zero_errors(self):
        with self.assertRaises(ValueError):
            zetaquad.refine_zero(15, 16, self.ctx)
        with self.assertRaises(zetaquad.RootFindingError):
            zetaquad.refine_zero(13, 15, self.ctx, max_iter=1)


class ConvergenceRateTestCase(unittest.TestCase):
    def test_fit_rate(self):
        xs = [mpmath.mpf(x) for x in (1, 2, 3, 5)]
        slope = zetaquad.fit_rate(xs, [mpmath.exp(4 - 2 * x) for x in xs])
        self.assertAlmostEqual(float(slope), -2, places=12)

        with self.assertRaises(ValueError):
            zetaquad.fit_rate(xs, [1, 2])
        with self.assertRaises(zetaquad.DegenerateFitError):
            zetaquad.fit_rate([1], [1])
        with self.assertRaises(zetaquad.DegenerateFitError):
            zetaquad.fit_rate([1, 2], [1, 0])
        with self.assertRaises(zetaquad.DegenerateFitError):
            zetaquad.fit_rate([2, 2, 2], [1, 2, 3])

    def test_synthetic(self):
        ctx = zetaquad.PrecisionContext(digits=30)
        h_list = [mpmath.mpf(1) / n for n in (2, 3, 4, 5)]
        with ctx.workdps():
            slope = zetaquad.convergence_rate(
                None, h_list, ctx, evaluate=lambda h: mpmath.exp(-3 / h)
            )
        self.assertAlmostEqual(float(slope), -3, places=5)

    def test_errors(self):
        ctx = zetaquad.PrecisionContext(digits=30)
        s = mpmath.mpc(0.5, 100)
        with self.assertRaises(ValueError):
            zetaquad.convergence_rate(s, [0.5, 0.4, 0.3], ctx)
        with self.assertRaises(ValueError):
            zetaquad.convergence_rate(s, [0.5, 0.4, 0.4, 0.3], ctx)
        with self.assertRaises(zetaquad.DegenerateFitError):
            zetaquad.convergence_rate(
                s, [0.5, 0.4, 0.3, 0.2], ctx, evaluate=lambda h: mpmath.mpc(1, 1)
            )

    def check_rate(self, digits):
        """Fit the rate at the 30th zero, refined at ``digits``;
        1/h spans a factor of 4.4 in steps of 3 sqrt(2).
        """
        ctx = zetaquad.PrecisionContext(digits=digits)
        gamma = zetaquad.refine_zero(100, 102.5, ctx)
        with mpmath.workdps(digits + 10):
            expected_gamma = mpmath.zetazero(30).imag
            self.assertLess(abs(gamma - expected_gamma), mpmath.mpf(10) ** (5 - digits))
        with ctx.workdps():
            s = mpmath.mpc(0.5, gamma)
            h_list = [1 / (5 + 3 * mpmath.sqrt(2) * k) for k in range(5)]
            slope = zetaquad.convergence_rate(s, h_list, ctx)
            expected = -mpmath.pi / mpmath.sqrt(2)
        self.assertLess(abs(slope / expected - 1), 0.05)

    def test_benchmark_rate(self):
        self.check_rate(digits=40)

    @unittest.skipUnless(LONG_TESTS, "set ZETAQUAD_LONG_TESTS=1 to run")
    def test_benchmark_rate_full_precision(self):
        self.check_rate(digits=60)


if __name__ == "__main__":
    unittest.main()
