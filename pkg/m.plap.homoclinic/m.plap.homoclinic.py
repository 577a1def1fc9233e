#!/usr/bin/env python3
#
############################################################################
#
# MODULE:      m.plap.homoclinic
# AUTHOR(S):   m.plap.homoclinic developers
#
# PURPOSE:     Computes homoclinic solutions of the discrete p-Laplacian
#              with oscillatory nonlinearity and certifies them
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
# % description: Computes and certifies homoclinic solutions of the discrete p-Laplacian
# % keyword: miscellaneous
# % keyword: difference equation
# % keyword: p-Laplacian
# % keyword: optimization
# %end

# %option
# % key: command
# % type: string
# % required: no
# % multiple: no
# % options: solve,probe,gradcheck
# % description: Command to run
# % answer: solve
# %end

# %option
# % key: config
# % type: string
# % required: no
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
# % description: Scalar configuration overrides by dotted key, e.g. solver.tol_pg=1e-9
# %end

# %option
# % key: output_dir
# % type: string
# % required: no
# % multiple: no
# % key_desc: path
# % description: Directory for the CSV and JSON artifacts (overrides the configuration)
# %end

# %option
# % key: nprocs
# % type: integer
# % required: no
# % multiple: no
# % label: Number of parallel processes
# % description: Number of cores for multiprocessing, -2 is the number of available cores - 1
# % answer: -2
# %end

# %flag
# % key: v
# % description: Print the version of the toolset and exit
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
    from plap_config import VERSION
    from plap_errors import EXIT_CONFIG_ERROR
except Exception as imp_err:
    grass.fatal(f"m.plap.homoclinic library could not be imported: {imp_err}")


def main():
    """Main function of m.plap.homoclinic"""
    if flags["v"]:
        print(f"m.plap.homoclinic {VERSION}")
        return 0
    if not options["config"]:
        grass.error(_("Option <config> is required"))
        return EXIT_CONFIG_ERROR

    command = options["command"]
    addon = f"m.plap.homoclinic.{command}"
    param = {"config": options["config"]}
    if options["override"]:
        param["override"] = options["override"].split(",")
    if options["output_dir"]:
        param["output_dir"] = options["output_dir"]
    if command == "solve":
        param["nprocs"] = options["nprocs"]

    grass.message(_(f"Running {addon}..."))
    proc = grass.start_command(addon, **param)
    return proc.wait()


if __name__ == "__main__":
    options, flags = grass.parser()
    sys.exit(main())
