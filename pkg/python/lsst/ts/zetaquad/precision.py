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

__all__ = ["CValue", "PrecisionContext", "magnitude_digits"]

import dataclasses

import mpmath

CValue = mpmath.mpc
"""Arbitrary-precision complex number type used throughout the package."""


@dataclasses.dataclass(frozen=True)
class PrecisionContext:
    """Working precision for a numerical operation.

    Parameters
    ----------
    digits : `int`
        Requested number of correct decimal digits.
    guard : `int` (optional)
        Extra working digits. If `None` use ``int(0.2 * digits) + 15``.

    Raises
    ------
    ValueError
        If ``digits < 1`` or ``guard < 10``.

    Notes
    -----
    Every public operation that takes a context evaluates its body
    inside ``ctx.workdps()``, i.e. at ``digits + guard`` decimal digits,
    and compares results against ``ctx.eps = 10**-digits``.

    The working precision of `mpmath` is process-global,
    so concurrent evaluation must use processes, not threads.
    """

    digits: int
    guard: int = None

    def __post_init__(self):
        if self.digits < 1:
            raise ValueError(f"digits={self.digits} must be positive")
        if self.guard is None:
            object.__setattr__(self, "guard", int(0.2 * self.digits) + 15)
        if self.guard < 10:
            raise ValueError(f"guard={self.guard} must be >= 10")

    @property
    def work_dps(self):
        """Working precision in decimal digits."""
        return self.digits + self.guard

    @property
    def eps(self):
        """Acceptance tolerance ``10**-digits`` as an `mpmath.mpf`."""
        return self.tol(self.digits)

    def tol(self, exponent):
        """Return ``10**-exponent`` at working precision."""
        with self.workdps():
            return mpmath.mpf(10) ** (-exponent)

    def workdps(self):
        """Return a context manager that sets the working precision."""
        return mpmath.workdps(self.work_dps)

    def with_digits(self, digits):
        """Return a context with a different number of digits.

        The guard is recomputed from the default rule.
        """
        return PrecisionContext(digits=digits)

    def raised(self, extra):
        """Return a context with ``extra`` more digits (and default guard)."""
        return PrecisionContext(digits=self.digits + extra)

    def real(self, value):
        """Convert a number or decimal string to `mpmath.mpf`
        at working precision.
        """
        with self.workdps():
            return mpmath.mpf(value)

    def cvalue(self, re, im=0):
        """Build a `CValue` from real and imaginary parts.

        Parts may be numbers or decimal strings; strings are parsed
        at full working precision.
        """
        with self.workdps():
            return mpmath.mpc(mpmath.mpf(re), mpmath.mpf(im))


def magnitude_digits(magnitude):
    """Extra working digits that absorb cancellation between terms
    of size ``magnitude``, e.g. the phases ``s log n`` at large height.
    """
    return int(mpmath.log10(abs(magnitude) + 1)) + 2
