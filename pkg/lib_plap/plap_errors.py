#!/usr/bin/env python3
#
############################################################################
#
# MODULE:      plap_errors
# AUTHOR(S):   m.plap.homoclinic developers
#
# PURPOSE:     Exceptions shared by the m.plap.homoclinic library
# COPYRIGHT:   (C) 2026 by the m.plap.homoclinic developers and the GRASS
#              Development Team
#
# This program is free software; you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation; either version 2 of the License, or
# (at your option) any later version.
#
# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU General Public License for more details.
#
############################################################################

# exit codes of the m.plap.homoclinic modules
EXIT_OK = 0
EXIT_CLAIM_FAILURE = 1
EXIT_CONFIG_ERROR = 2
EXIT_SOLVER_FAILURE = 3


class PlapError(Exception):
    """Base class of all m.plap.homoclinic errors"""


class ConfigError(PlapError):
    """Invalid or unknown entry in a run configuration"""


class InvalidParameterError(PlapError, ValueError):
    """Numeric parameter outside of its admissible range"""


class NonfiniteEnergy(PlapError):
    """The energy or its gradient evaluated to inf or nan"""


class InsufficientData(PlapError):
    """Not enough solution records for a sequence-level check"""


class MaxIterExceeded(PlapError):
    """Iteration budget exhausted before the stopping test was met.

    The best iterate is kept as a complete solution record with its
    certificates recomputed, so callers can still report it.
    """

    def __init__(self, record, message=None):
        self.record = record
        super().__init__(
            message
            or f"Level {record.n}: no convergence after "
            f"{record.iterations} iterations "
            f"(projected gradient {record.pg_norm:.3e})",
        )
