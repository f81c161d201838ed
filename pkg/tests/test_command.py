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

import csv
import io
import pathlib
import tempfile
import unittest

import mpmath

from lsst.ts import zetaquad

TEST_DIR = pathlib.Path(__file__).parent
COEFFS_DIR = TEST_DIR / "data" / "coeffs"
CONFIG_DIR = TEST_DIR / "data" / "config"


class CommandTestCase(unittest.IsolatedAsyncioTestCase):
    def setUp(self):
        self.tempdir = tempfile.TemporaryDirectory()
        self.tempdir_path = pathlib.Path(self.tempdir.name)

    def tearDown(self):
        self.tempdir.cleanup()

    async def run_command(self, *argv):
        """Run the command line; return (exit code, stdout lines, stderr text)."""
        stdout = io.StringIO()
        stderr = io.StringIO()
        command = zetaquad.ZetaQuadCommand(stdout=stdout, stderr=stderr)
        code = await command.execute([str(arg) for arg in argv])
        return code, stdout.getvalue().splitlines(), stderr.getvalue()

    async def test_eval(self):
        coeffs = COEFFS_DIR / "p10.txt"
        s = mpmath.mpc(0.5, 694)
        for deriv in (False, True):
            with self.subTest(deriv=deriv):
                extra = ["--deriv"] if deriv else []
                code, lines, _ = await self.run_command(
                    "eval", "--coeffs", coeffs, "--s", "0.5,694", "--digits", 31, *extra
                )
                self.assertEqual(code, zetaquad.ExitCode.SUCCESS)
                self.assertEqual(len(lines), 1)
                with mpmath.workdps(40):
                    re, im = (mpmath.mpf(field) for field in lines[0].split())
                    expected = mpmath.zeta(s, derivative=1 if deriv else 0)
                    self.assertLess(abs(mpmath.mpc(re, im) - expected), 1e-13)

    async def test_eval_usage_errors(self):
        coeffs = COEFFS_DIR / "p5.txt"
        for argv in (
            ("eval", "--coeffs", coeffs, "--s", "0.5,0"),
            ("eval", "--coeffs", coeffs, "--s", "0.5,-3"),
            ("eval", "--coeffs", coeffs, "--s", "0.5"),
            ("eval", "--coeffs", coeffs, "--s", "0.5,14", "--digits", 0),
            ("eval", "--coeffs", COEFFS_DIR / "missing.txt", "--s", "0.5,14"),
            ("eval", "--coeffs", coeffs),
            ("nonsense",),
        ):
            with self.subTest(argv=argv):
                code, lines, _ = await self.run_command(*argv)
                self.assertEqual(code, zetaquad.ExitCode.USAGE)
                self.assertEqual(lines, [])

    async def test_amain(self):
        code = await zetaquad.ZetaQuadCommand.amain(["eval", "--s", "0.5,14"])
        self.assertEqual(code, zetaquad.ExitCode.USAGE)

    async def test_log_level_per_run(self):
        coeffs = COEFFS_DIR / "p5.txt"
        for level, shown in (("WARNING", False), ("INFO", True), ("WARNING", False)):
            with self.subTest(level=level):
                code, _, stderr = await self.run_command(
                    "--log-level", level, "eval", "--coeffs", coeffs, "--s", "0.5,14", "--digits", 19
                )
                self.assertEqual(code, zetaquad.ExitCode.SUCCESS)
                self.assertEqual("Running eval" in stderr, shown)

    async def test_bad_coefficient_file(self):
        path = self.tempdir_path / "bad.txt"
        path.write_text("zetaquad-coeffs 1\np 1\ndigits 5\nomega0 1 0\nomega 1 1 0\n")
        code, lines, stderr = await self.run_command("eval", "--coeffs", path, "--s", "0.5,14")
        self.assertEqual(code, zetaquad.ExitCode.NUMERIC)
        self.assertIn("line 5", stderr)

    async def test_config(self):
        coeffs = COEFFS_DIR / "p5.txt"
        code, lines, _ = await self.run_command(
            "--config", CONFIG_DIR / "few_digits.yaml", "eval", "--coeffs", coeffs, "--s", "0.5,100"
        )
        self.assertEqual(code, zetaquad.ExitCode.SUCCESS)
        self.assertEqual(len(lines), 1)

        for path in (CONFIG_DIR / "invalid_unknown_field.yaml", CONFIG_DIR / "missing.yaml"):
            with self.subTest(path=path.name):
                code, lines, stderr = await self.run_command(
                    "--config", path, "eval", "--coeffs", coeffs, "--s", "0.5,100"
                )
                self.assertEqual(code, zetaquad.ExitCode.USAGE)
                self.assertIn("Invalid configuration", stderr)

    async def test_validate(self):
        code, lines, _ = await self.run_command("validate", "--coeffs", COEFFS_DIR / "p10.txt")
        self.assertEqual(code, zetaquad.ExitCode.SUCCESS)
        self.assertTrue(lines[0].startswith("residual "))
        self.assertLess(float(lines[0].split()[1]), 1e-28)
        self.assertEqual(
            lines[1:],
            [
                "ok lambda in fourth quadrant",
                "ok lambda ordered by modulus",
                "ok |omega_j| decreasing for j >= 2",
            ],
        )

        text = (COEFFS_DIR / "p10.txt").read_text()
        path = self.tempdir_path / "perturbed.txt"
        path.write_text(text.replace("omega0 1.", "omega0 2.", 1))
        code, lines, stderr = await self.run_command("validate", "--coeffs", path)
        self.assertEqual(code, zetaquad.ExitCode.VALIDATION_FAILED)
        self.assertIn("Residual exceeds", stderr)

    async def test_gen(self):
        path = self.tempdir_path / "p2.txt"
        code, lines, _ = await self.run_command("gen", "--p", 2, "--digits", 15, "--out", path)
        self.assertEqual(code, zetaquad.ExitCode.SUCCESS)
        self.assertTrue(lines[0].startswith("residual "))
        rule = zetaquad.read_rule(path)
        self.assertEqual(rule.p, 2)
        self.assertEqual(rule.gen_digits, 15)

        code, lines, _ = await self.run_command("validate", "--coeffs", path)
        self.assertEqual(code, zetaquad.ExitCode.SUCCESS)

        code, lines, _ = await self.run_command("gen", "--p", 0, "--digits", 15, "--out", path)
        self.assertEqual(code, zetaquad.ExitCode.USAGE)

    async def test_sweep(self):
        path = self.tempdir_path / "sweep.csv"
        common = [
            "--config",
            CONFIG_DIR / "few_digits.yaml",
            "sweep",
            "--coeffs",
            COEFFS_DIR / "p5.txt",
            "--a",
            "0",
            "--b",
            "1",
            "--out",
            path,
        ]
        code, lines, _ = await self.run_command(
            *common, "--t-lo", "100", "--t-hi", "110", "--samples", 2
        )
        self.assertEqual(code, zetaquad.ExitCode.SUCCESS)
        self.assertEqual(lines[0], "rows 3")
        self.assertTrue(lines[1].startswith("max_delta "))
        with open(path, newline="") as f:
            rows = list(csv.reader(f))
        self.assertEqual(rows[0], ["t", "delta", "log10_delta", "N_t", "B_t"])
        self.assertEqual(len(rows), 4)

        code, lines, _ = await self.run_command(
            *common, "--t-lo", "110", "--t-hi", "100", "--samples", 2
        )
        self.assertEqual(code, zetaquad.ExitCode.SUCCESS)
        self.assertEqual(lines, ["rows 0", "max_delta none"])

        code, lines, _ = await self.run_command(
            *common, "--t-lo", "1", "--t-hi", "100", "--samples", 2
        )
        self.assertEqual(code, zetaquad.ExitCode.USAGE)

    async def test_rate(self):
        h_list = ",".join(str(1 / (3 + k)) for k in range(4))
        code, lines, _ = await self.run_command(
            "rate", "--s", "0.5,100", "--h-list", h_list, "--digits", 30
        )
        self.assertEqual(code, zetaquad.ExitCode.SUCCESS)
        self.assertTrue(lines[0].startswith("slope "))
        self.assertLess(float(lines[0].split()[1]), 0)

        code, lines, _ = await self.run_command("rate", "--s", "0.5,100", "--h-list", "0.5,0.4")
        self.assertEqual(code, zetaquad.ExitCode.USAGE)

    async def test_dips(self):
        path = self.tempdir_path / "dips.csv"
        code, lines, _ = await self.run_command(
            "dips", "--coeffs", COEFFS_DIR / "p5.txt", "--n", 3, "--digits", 19, "--out", path
        )
        self.assertEqual(code, zetaquad.ExitCode.SUCCESS)
        self.assertEqual([line.split()[0] for line in lines], ["node_max", "mid_max"])
        with open(path, newline="") as f:
            rows = list(csv.reader(f))
        self.assertEqual(len(rows), 1 + 8 * 5 + 4)
        self.assertEqual(sum(row[2] == "node" for row in rows[1:]), 4 * 5 + 2)


if __name__ == "__main__":
    unittest.main()
