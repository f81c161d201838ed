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

from .exceptions import *
from .precision import *
from .special import *
from .polynomial import *
from .mordell import *
from .quadrature_rule import *
from .quadgen import *
from .coeff_file import *
from .zeta_eval import *
from .oracle import *
from .harness import *
from .config import *
from .zetaquad_command import *

try:
    from .version import *
except ImportError:
    __version__ = "?"
