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

import glob
import pathlib
import unittest

import jsonschema
import yaml

from lsst.ts import zetaquad

TEST_CONFIG_DIR = pathlib.Path(__file__).parent / "data" / "config"


class ValidationTestCase(unittest.TestCase):
    """Test validation of the config schema."""

    def setUp(self):
        schemapath = pathlib.Path(__file__).parents[1] / "schema" / "zetaquad.yaml"
        with open(schemapath, "r") as f:
            rawschema = f.read()
        self.schema = yaml.safe_load(rawschema)
        self.validator = zetaquad.DefaultingValidator(schema=self.schema)
        self.default = dict(
            eval_digits=40,
            gen_digits=60,
            guard_digits=None,
            oracle_extra_digits=15,
            strip_points=101,
            residual_slack=10,
            max_precision_retries=3,
            workers=1,
            log_level="WARNING",
        )
        self.all_specified = dict(
            eval_digits=30,
            gen_digits=50,
            guard_digits=20,
            oracle_extra_digits=12,
            strip_points=11,
            residual_slack=8,
            max_precision_retries=2,
            workers=2,
            log_level="INFO",
        )

    def test_schema_path(self):
        self.assertEqual(zetaquad.SCHEMA_PATH.name, "zetaquad.yaml")
        self.assertTrue(zetaquad.SCHEMA_PATH.is_file())

    def test_default(self):
        result = self.validator.validate(None)
        self.assertEqual(result, self.default)

    def test_some_specified(self):
        for field, value in self.all_specified.items():
            one_field_data = {field: value}
            with self.subTest(one_field_data=one_field_data):
                result = self.validator.validate(one_field_data)
                for field, default_value in self.default.items():
                    if field in one_field_data:
                        self.assertEqual(result[field], one_field_data[field])
                    else:
                        self.assertEqual(result[field], default_value)

    def test_all_specified(self):
        data = self.all_specified.copy()
        result = self.validator.validate(data)
        self.assertEqual(data, self.all_specified)
        self.assertEqual(result, self.all_specified)

    def test_invalid_configs(self):
        for name, badval in (
            ("eval_digits", 0),  # not positive
            ("eval_digits", "40"),  # wrong type
            ("gen_digits", 1.5),  # wrong type
            ("guard_digits", 9),  # too small
            ("oracle_extra_digits", -1),  # negative
            ("strip_points", 1),  # too small
            ("residual_slack", -1),  # negative
            ("max_precision_retries", -1),  # negative
            ("workers", 0),  # not positive
            ("log_level", "VERBOSE"),  # not in enum
            ("no_such_field", 1),  # additional property
        ):
            bad_data = {name: badval}
            with self.subTest(bad_data=bad_data):
                with self.assertRaises(jsonschema.exceptions.ValidationError):
                    self.validator.validate(bad_data)

    def test_load_config(self):
        config = zetaquad.load_config()
        for field, value in self.default.items():
            self.assertEqual(getattr(config, field), value)

        config = zetaquad.load_config(TEST_CONFIG_DIR / "all_fields.yaml")
        for field, value in self.all_specified.items():
            self.assertEqual(getattr(config, field), value)

    def test_invalid_config_files(self):
        paths = sorted(glob.glob(str(TEST_CONFIG_DIR / "invalid_*.yaml")))
        self.assertGreater(len(paths), 0)
        for path in paths:
            with self.subTest(path=path):
                with self.assertRaises(jsonschema.exceptions.ValidationError):
                    zetaquad.load_config(path)


if __name__ == "__main__":
    unittest.main()
