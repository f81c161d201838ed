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

__all__ = ["FORMAT_HEADER", "format_real", "serialize_rule", "parse_rule", "read_rule", "write_rule"]

import re

import mpmath

from .exceptions import CoeffParseError
from .precision import PrecisionContext
from .quadrature_rule import QuadratureRule

FORMAT_HEADER = "zetaquad-coeffs 1"

_NUMBER = r"([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)"


def format_real(value, digits):
    """Format a real number in scientific notation with ``digits``
    significant digits, e.g. ``1.881852180702220422e-1``.

    Numbers with a zero exponent are written without one.
    """
    return mpmath.nstr(value, digits, strip_zeros=False, min_fixed=0, max_fixed=0)


def parse(regex, line, line_number):
    """Parse one line of a coefficient file.

    Parameters
    ----------
    regex : `str`
        Regex that must match the whole line.
    line : `str`
        Line to parse.
    line_number : `int`
        1-based line number, for error messages.

    Returns
    -------
    match : `re.Match`
        The match.

    Raises
    ------
    CoeffParseError
        If the line does not match the regex.
    """
    match = re.fullmatch(regex, line.strip())
    if match is None:
        raise CoeffParseError(f"could not parse {line!r}", line_number)
    return match


def parse_get(regex, line, line_number):
    """Parse one line and return the value of group(1)."""
    return parse(regex, line, line_number).group(1)


def serialize_rule(rule, digits=None):
    """Format a rule as the text of a coefficient file.

    Parameters
    ----------
    rule : `QuadratureRule`
        The rule.
    digits : `int` (optional)
        Significant digits to write; defaults to ``rule.gen_digits``.

    Returns
    -------
    text : `str`
        File contents, ending with a newline::

            zetaquad-coeffs 1
            p <p>
            digits <digits>
            omega0 <re> <im>
            omega <j> <re> <im>     (j = 1, ..., p)
            lambda <j> <re> <im>    (j = 1, ..., p)
    """
    if digits is None:
        digits = rule.gen_digits

    def fmt(value):
        return f"{format_real(value.real, digits)} {format_real(value.imag, digits)}"

    lines = [FORMAT_HEADER, f"p {rule.p}", f"digits {digits}", f"omega0 {fmt(rule.omega0)}"]
    lines += [f"omega {j} {fmt(w)}" for j, w in enumerate(rule.omega, start=1)]
    lines += [f"lambda {j} {fmt(lam)}" for j, lam in enumerate(rule.lambda_, start=1)]
    return "\n".join(lines) + "\n"


def parse_rule(text, ctx=None):
    """Parse the text of a coefficient file.

    Parameters
    ----------
    text : `str`
        File contents. Blank lines and lines starting with ``#`` are ignored.
    ctx : `PrecisionContext` (optional)
        Precision at which to parse the numbers. If `None`, use the
        ``digits`` recorded in the file.

    Returns
    -------
    rule : `QuadratureRule`
        The rule, with ``gen_digits`` from the file and no residual.

    Raises
    ------
    CoeffParseError
        If the text is malformed; the message gives the line number.
    """
    records = [
        (number, line)
        for number, line in enumerate(text.splitlines(), start=1)
        if line.strip() and not line.lstrip().startswith("#")
    ]
    if len(records) < 4:
        last = records[-1][0] if records else 1
        raise CoeffParseError(f"file has {len(records)} records; need at least 4", last)

    number, line = records[0]
    if line.strip() != FORMAT_HEADER:
        raise CoeffParseError(f"expected {FORMAT_HEADER!r}; got {line!r}", number)
    p = int(parse_get(r"p\s+(\d+)", records[1][1], records[1][0]))
    if p < 1:
        raise CoeffParseError(f"p={p} must be >= 1", records[1][0])
    digits = int(parse_get(r"digits\s+(\d+)", records[2][1], records[2][0]))
    if digits < 1:
        raise CoeffParseError(f"digits={digits} must be >= 1", records[2][0])
    if ctx is None:
        ctx = PrecisionContext(digits=digits)

    expected = 3 + 1 + 2 * p
    if len(records) != expected:
        raise CoeffParseError(
            f"p={p} requires {expected} records; got {len(records)}", records[-1][0]
        )

    with ctx.workdps():
        number, line = records[3]
        match = parse(rf"omega0\s+{_NUMBER}\s+{_NUMBER}", line, number)
        omega0 = mpmath.mpc(mpmath.mpf(match.group(1)), mpmath.mpf(match.group(2)))
        values = dict(omega=[], lambda_=[])
        for index, (number, line) in enumerate(records[4:]):
            name = "omega" if index < p else "lambda"
            j = index % p + 1
            match = parse(rf"{name}\s+(\d+)\s+{_NUMBER}\s+{_NUMBER}", line, number)
            if int(match.group(1)) != j:
                raise CoeffParseError(
                    f"expected {name} index {j}; got {match.group(1)}", number
                )
            key = "omega" if name == "omega" else "lambda_"
            values[key].append(
                mpmath.mpc(mpmath.mpf(match.group(2)), mpmath.mpf(match.group(3)))
            )
    return QuadratureRule(
        p=p,
        omega0=omega0,
        omega=tuple(values["omega"]),
        lambda_=tuple(values["lambda_"]),
        gen_digits=digits,
    )


def read_rule(path, ctx=None):
    """Read a coefficient file; see `parse_rule`."""
    with open(path, "r", encoding="utf-8") as f:
        return parse_rule(f.read(), ctx)


def write_rule(rule, path, digits=None):
    """Write a coefficient file; see `serialize_rule`."""
    with open(path, "w", encoding="utf-8") as f:
        f.write(serialize_rule(rule, digits))
