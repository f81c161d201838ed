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

__all__ = ["SCHEMA_PATH", "DefaultingValidator", "load_schema", "load_config"]

import copy
import pathlib
import types

import jsonschema
import yaml

SCHEMA_PATH = pathlib.Path(__file__).resolve().parents[4].joinpath("schema", "zetaquad.yaml")


def _extend_with_default(validator_class):
    """Make a validator class that sets defaults as it validates."""
    validate_properties = validator_class.VALIDATORS["properties"]

    def set_defaults(validator, properties, instance, schema):
        if isinstance(instance, dict):
            for name, subschema in properties.items():
                if "default" in subschema:
                    instance.setdefault(name, subschema["default"])
        yield from validate_properties(validator, properties, instance, schema)

    return jsonschema.validators.extend(validator_class, {"properties": set_defaults})


_DefaultingDraft7Validator = _extend_with_default(jsonschema.Draft7Validator)


class DefaultingValidator:
    """Validate configuration data against a schema and fill in defaults.

    Parameters
    ----------
    schema : `dict`
        JSON schema (draft 7).

    Raises
    ------
    jsonschema.exceptions.SchemaError
        If ``schema`` is not a valid schema.
    """

    def __init__(self, schema):
        jsonschema.Draft7Validator.check_schema(schema)
        self.schema = schema
        self.defaults_validator = _DefaultingDraft7Validator(schema)
        self.final_validator = jsonschema.Draft7Validator(schema)

    def validate(self, data):
        """Return a validated copy of ``data`` with defaults filled in.

        Parameters
        ----------
        data : `dict` or `None`
            Configuration data; `None` is treated as an empty dict.
            Not modified.

        Raises
        ------
        jsonschema.exceptions.ValidationError
            If the data is invalid.
        """
        data = {} if data is None else copy.deepcopy(data)
        self.defaults_validator.validate(data)
        self.final_validator.validate(data)
        return data


def load_schema(path=SCHEMA_PATH):
    with open(path, "r") as f:
        return yaml.safe_load(f)


def load_config(path=None):
    """Load and validate a configuration file.

    Parameters
    ----------
    path : `str` or `pathlib.Path` (optional)
        YAML configuration file. If `None` use the defaults.

    Returns
    -------
    config : `types.SimpleNamespace`
        Validated configuration.

    Raises
    ------
    jsonschema.exceptions.ValidationError
        If the configuration is invalid.
    """
    data = None
    if path is not None:
        with open(path, "r") as f:
            data = yaml.safe_load(f)
    validator = DefaultingValidator(load_schema())
    return types.SimpleNamespace(**validator.validate(data))
