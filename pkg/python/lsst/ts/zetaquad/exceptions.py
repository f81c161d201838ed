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
    "ZetaQuadError",
    "PoleError",
    "NumericOverflowError",
    "DomainError",
    "OrthogonalityBreakdownError",
    "RootFindingError",
    "MultipleRootError",
    "PairingError",
    "QuadratureZeroDivisorError",
    "BranchError",
    "GenerationError",
    "CoeffParseError",
    "NonDecayError",
    "DegenerateFitError",
]


class ZetaQuadError(Exception):
    """An expected numerical failure.

    The command-line tool reports these as a one-line message
    (no traceback) and exits with code 3.
    """

    pass


class PoleError(ZetaQuadError):
    """Argument is at (or too close to) a pole of a special function."""

    pass


class NumericOverflowError(ZetaQuadError):
    """A result could not be represented as a finite number."""

    pass


class DomainError(ZetaQuadError):
    """Argument is outside the domain of the operation, e.g. t <= 0."""

    pass


class OrthogonalityBreakdownError(ZetaQuadError):
    """The moment functional is numerically degenerate at this precision.

    Raising the working precision and retrying may help.
    """

    def __init__(self, msg, n):
        super().__init__(msg)
        self.n = n


class RootFindingError(ZetaQuadError):
    """Simultaneous root iteration did not converge."""

    pass


class MultipleRootError(ZetaQuadError):
    """Two computed roots are too close to be treated as simple."""

    pass


class PairingError(ZetaQuadError):
    """Roots do not have the expected reciprocal structure."""

    pass


class QuadratureZeroDivisorError(ZetaQuadError):
    """A quadrature weight denominator vanished numerically."""

    pass


class BranchError(ZetaQuadError):
    """A root lies on the branch cut of the principal logarithm."""

    pass


class GenerationError(ZetaQuadError):
    """Coefficient generation failed at every precision tried."""

    pass


class CoeffParseError(ZetaQuadError):
    """A coefficient file could not be parsed.

    Parameters
    ----------
    msg : `str`
        Description of the problem.
    line_number : `int` or `None`
        1-based line number of the offending line, if known.
    """

    def __init__(self, msg, line_number=None):
        if line_number is not None:
            msg = f"line {line_number}: {msg}"
        super().__init__(msg)
        self.line_number = line_number


class NonDecayError(ZetaQuadError):
    """Oracle summation terms did not decay within the term limit."""

    pass


class DegenerateFitError(ZetaQuadError):
    """A convergence-rate fit has no usable data."""

    pass
