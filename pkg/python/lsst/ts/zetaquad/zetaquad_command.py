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

__all__ = ["ZetaQuadCommand", "ExitCode"]

import argparse
import concurrent.futures
import enum
import logging
import sys

import jsonschema
import mpmath
import yaml

from .coeff_file import read_rule, write_rule
from .config import load_config
from .exceptions import ZetaQuadError
from .harness import SweepSpec, dip_diagnostic, sweep, sweep_async, write_csv, write_dips_csv
from .oracle import convergence_rate
from .precision import PrecisionContext
from .quadgen import generate_rule
from .quadrature_rule import check_structure, validate_rule
from .zeta_eval import zeta_p, zeta_p_deriv


LOG_FORMAT = "%(levelname)s:%(name)s:%(message)s"


class ExitCode(enum.IntEnum):
    SUCCESS = 0
    VALIDATION_FAILED = 1
    USAGE = 2
    NUMERIC = 3


class UsageError(Exception):
    """Bad command-line value that argparse cannot check."""


class ZetaQuadCommand:
    """Command-line front end: generate and validate coefficient files,
    evaluate zeta_p, and run the error studies.

    Parameters
    ----------
    stdout : file-like (optional)
        Where results are printed; defaults to `sys.stdout`.
    stderr : file-like (optional)
        Where error messages are printed; defaults to `sys.stderr`.

    Notes
    -----
    Each subcommand ``name`` is handled by a coroutine ``do_name(args)``
    that returns an `ExitCode`.
    """

    def __init__(self, stdout=None, stderr=None):
        self.log = logging.getLogger("ZetaQuadCommand")
        self.stdout = sys.stdout if stdout is None else stdout
        self.stderr = sys.stderr if stderr is None else stderr
        self.config = None

    @classmethod
    async def amain(cls, argv=None):
        """Parse ``argv`` (default ``sys.argv[1:]``), run the command
        and return the exit code.
        """
        return await cls().execute(argv)

    @staticmethod
    def make_parser():
        parser = argparse.ArgumentParser(
            prog="run_zetaquad.py",
            description="Riemann zeta evaluation with complex Gaussian quadrature",
        )
        parser.add_argument("--config", help="YAML configuration file")
        parser.add_argument(
            "--log-level",
            choices=["DEBUG", "INFO", "WARNING", "ERROR"],
            help="Log level; overrides the configuration",
        )
        subparsers = parser.add_subparsers(dest="command", required=True)

        gen = subparsers.add_parser("gen", help="Generate a coefficient file")
        gen.add_argument("--p", type=int, required=True, help="Order of the rule")
        gen.add_argument("--digits", type=int, help="Significant digits")
        gen.add_argument("--out", required=True, help="Coefficient file to write")

        validate = subparsers.add_parser("validate", help="Check a coefficient file")
        validate.add_argument("--coeffs", required=True, help="Coefficient file")
        validate.add_argument("--digits", type=int, help="Digits to check to; default: the file's")

        evaluate = subparsers.add_parser("eval", help="Evaluate zeta_p or its derivative")
        evaluate.add_argument("--coeffs", required=True, help="Coefficient file")
        evaluate.add_argument("--s", required=True, help="Point as RE,IM")
        evaluate.add_argument("--deriv", action="store_true", help="Evaluate the derivative")
        evaluate.add_argument("--digits", type=int, help="Significant digits")

        sweep_parser = subparsers.add_parser("sweep", help="Measure the error over a range of t")
        sweep_parser.add_argument("--coeffs", required=True, help="Coefficient file")
        sweep_parser.add_argument("--a", required=True, help="Left edge of the strip")
        sweep_parser.add_argument("--b", required=True, help="Right edge of the strip")
        sweep_parser.add_argument("--t-lo", required=True, help="Smallest t")
        sweep_parser.add_argument("--t-hi", required=True, help="Largest t")
        sweep_parser.add_argument("--samples", type=int, required=True, help="Number of t values")
        sweep_parser.add_argument("--out", required=True, help="CSV file to write")
        sweep_parser.add_argument("--deriv", action="store_true", help="Measure the derivative")
        sweep_parser.add_argument("--strip-points", type=int, help="Number of sigma values")
        sweep_parser.add_argument("--digits", type=int, help="Target digits of the measurement")
        sweep_parser.add_argument(
            "--eval-digits", type=int, help="Evaluate zeta_p at this reduced precision"
        )

        rate = subparsers.add_parser("rate", help="Measure the benchmark convergence rate")
        rate.add_argument("--s", required=True, help="Point as RE,IM")
        rate.add_argument("--h-list", required=True, help="Decreasing step sizes H1,H2,...")
        rate.add_argument("--digits", type=int, help="Working digits")

        dips = subparsers.add_parser("dips", help="Measure the error at the Mordell nodes")
        dips.add_argument("--coeffs", required=True, help="Coefficient file")
        dips.add_argument("--n", type=int, required=True, help="Interval index")
        dips.add_argument("--out", required=True, help="CSV file to write")
        dips.add_argument("--digits", type=int, help="Target digits of the measurement")
        return parser

    def configure(self, config):
        self.config = config

    async def execute(self, argv=None):
        """Run one command and return its `ExitCode`."""
        parser = self.make_parser()
        try:
            args = parser.parse_args(argv)
        except SystemExit as e:
            return e.code

        try:
            self.configure(load_config(args.config))
        except (OSError, yaml.YAMLError, jsonschema.exceptions.ValidationError) as e:
            self.error(f"Invalid configuration: {e}")
            return ExitCode.USAGE

        level = args.log_level or self.config.log_level
        handler = logging.StreamHandler(self.stderr)
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        loggers = [logging.getLogger(name) for name in ("ZetaQuadCommand", "lsst.ts.zetaquad")]
        for logger in loggers:
            logger.setLevel(level)
            logger.addHandler(handler)
        try:
            return await self.run(args)
        finally:
            for logger in loggers:
                logger.removeHandler(handler)

    async def run(self, args):
        """Dispatch to ``do_<command>`` and map exceptions to exit codes."""
        self.log.info(f"Running {args.command}")
        do = getattr(self, f"do_{args.command}")
        try:
            return await do(args)
        except (UsageError, ValueError, OSError) as e:
            self.error(f"{args.command}: {e}")
            return ExitCode.USAGE
        except ZetaQuadError as e:
            self.log.exception(f"{args.command} failed")
            self.error(f"{args.command}: {e}")
            return ExitCode.NUMERIC

    def error(self, msg):
        print(msg, file=self.stderr)

    def output(self, msg):
        print(msg, file=self.stdout)

    def make_ctx(self, digits):
        if digits < 1:
            raise UsageError(f"--digits={digits} must be positive")
        return PrecisionContext(digits=digits, guard=self.config.guard_digits)

    @staticmethod
    def parse_point(text, ctx):
        """Parse ``RE,IM`` at full precision; Im must be positive."""
        parts = text.split(",")
        if len(parts) != 2:
            raise UsageError(f"--s={text!r} must have the form RE,IM")
        s = ctx.cvalue(parts[0].strip(), parts[1].strip())
        if s.imag <= 0:
            raise UsageError(f"--s={text!r}: Im(s) must be positive")
        return s

    async def do_gen(self, args):
        digits = self.config.gen_digits if args.digits is None else args.digits
        rule = generate_rule(
            args.p,
            digits,
            residual_slack=self.config.residual_slack,
            max_retries=self.config.max_precision_retries,
        )
        write_rule(rule, args.out)
        self.output(f"residual {mpmath.nstr(rule.residual, 5)}")
        return ExitCode.SUCCESS

    async def do_validate(self, args):
        rule = read_rule(args.coeffs)
        digits = rule.gen_digits if args.digits is None else args.digits
        ctx = self.make_ctx(digits)
        residual = validate_rule(rule, ctx)
        self.output(f"residual {mpmath.nstr(residual, 5)}")
        for name, passed in check_structure(rule):
            self.output(f"{'ok' if passed else 'FAIL'} {name}")
        if residual > ctx.tol(digits / 2):
            self.error(f"Residual exceeds 1e-{digits / 2:g}")
            return ExitCode.VALIDATION_FAILED
        return ExitCode.SUCCESS

    async def do_eval(self, args):
        digits = self.config.eval_digits if args.digits is None else args.digits
        ctx = self.make_ctx(digits)
        s = self.parse_point(args.s, ctx)
        rule = read_rule(args.coeffs, ctx)
        evaluate = zeta_p_deriv if args.deriv else zeta_p
        result = evaluate(s, rule, ctx)
        self.output(
            f"{mpmath.nstr(result.value.real, digits)} {mpmath.nstr(result.value.imag, digits)}"
        )
        return ExitCode.SUCCESS

    async def do_sweep(self, args):
        digits = self.config.eval_digits if args.digits is None else args.digits
        ctx = self.make_ctx(digits)
        rule = read_rule(args.coeffs, ctx)
        spec = SweepSpec(
            rule_p=rule.p,
            a=args.a,
            b=args.b,
            t_lo=args.t_lo,
            t_hi=args.t_hi,
            t_samples=args.samples,
            digits=digits,
            strip_points=args.strip_points or self.config.strip_points,
            eval_digits=args.eval_digits,
        )
        extra = self.config.oracle_extra_digits
        if self.config.workers > 1:
            with concurrent.futures.ProcessPoolExecutor(
                max_workers=self.config.workers
            ) as executor:
                report = await sweep_async(
                    spec, rule, ctx, executor, oracle_extra_digits=extra, deriv=args.deriv
                )
        else:
            report = sweep(spec, rule, ctx, oracle_extra_digits=extra, deriv=args.deriv)
        write_csv(report, args.out)
        max_delta = "none" if report.max_delta is None else mpmath.nstr(report.max_delta, 5)
        self.output(f"rows {len(report.rows)}")
        self.output(f"max_delta {max_delta}")
        return ExitCode.SUCCESS

    async def do_rate(self, args):
        digits = self.config.eval_digits if args.digits is None else args.digits
        ctx = self.make_ctx(digits)
        s = self.parse_point(args.s, ctx)
        h_list = [ctx.real(h.strip()) for h in args.h_list.split(",")]
        slope = convergence_rate(s, h_list, ctx)
        self.output(f"slope {mpmath.nstr(slope, 10)}")
        return ExitCode.SUCCESS

    async def do_dips(self, args):
        digits = self.config.eval_digits if args.digits is None else args.digits
        ctx = self.make_ctx(digits)
        rule = read_rule(args.coeffs, ctx)
        points = dip_diagnostic(
            args.n, rule, ctx, oracle_extra_digits=self.config.oracle_extra_digits
        )
        write_dips_csv(points, args.out)
        node_max = max(point.error for point in points if point.is_node)
        mid_max = max(point.error for point in points if not point.is_node)
        self.output(f"node_max {mpmath.nstr(node_max, 5)}")
        self.output(f"mid_max {mpmath.nstr(mid_max, 5)}")
        return ExitCode.SUCCESS
