#!/usr/bin/env python3
#
############################################################################
#
# MODULE:      m.plap.homoclinic.worker
# AUTHOR(S):   m.plap.homoclinic developers
#
# PURPOSE:     Minimizes the energy over the box of a single level n and
#              writes the solution record
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

# %Module
# % description: Minimizes the p-Laplacian energy over the box of a single level
# % keyword: miscellaneous
# % keyword: p-Laplacian
# %end

# %option
# % key: config
# % type: string
# % required: yes
# % multiple: no
# % key_desc: path
# % description: Path to the JSON run configuration
# %end

# %option
# % key: override
# % type: string
# % required: no
# % multiple: yes
# % key_desc: key=value
# % description: Scalar configuration overrides by dotted key
# %end

# %option
# % key: level
# % type: integer
# % required: yes
# % multiple: no
# % description: Level n of the box W_n
# %end

# %option
# % key: record_dir
# % type: string
# % required: yes
# % multiple: no
# % key_desc: path
# % description: Directory the solution record is written to
# %end


import sys

import grass.script as grass
from grass.pygrass.utils import get_lib_path

# import module library
path = get_lib_path(modname="m.plap.homoclinic")
if path is None:
    grass.fatal("Unable to find the m.plap.homoclinic library directory.")
sys.path.append(path)
try:
    from plap_config import load_config
    from plap_errors import MaxIterExceeded, PlapError
    from plap_output import write_failure, write_record
    from plap_solver import minimize_on_Wn
except Exception as imp_err:
    grass.fatal(f"m.plap.homoclinic library could not be imported: {imp_err}")


def main():
    """Main function of m.plap.homoclinic.worker"""
    level = int(options["level"])
    record_dir = options["record_dir"]
    overrides = [ovr for ovr in options["override"].split(",") if ovr]
    try:
        cfg = load_config(options["config"], overrides)
    except PlapError as err:
        grass.fatal(_(f"Invalid configuration: {err}"))

    try:
        rec = minimize_on_Wn(
            level,
            cfg.lam,
            cfg.spec,
            cfg.nonlinearity,
            cfg.weights,
            cfg.p,
            cfg.solver,
        )
    except MaxIterExceeded as err:
        # keep the best iterate, the level still counts as failed
        write_record(record_dir, err.record)
        write_failure(record_dir, level, err)
        grass.warning(str(err))
        return
    except PlapError as err:
        write_failure(record_dir, level, err)
        grass.warning(_(f"Level {level} failed: {err}"))
        return
    write_record(record_dir, rec)
    grass.verbose(_(f"Level {level} done: eta = {rec.eta!r}"))


if __name__ == "__main__":
    options, flags = grass.parser()
    main()
