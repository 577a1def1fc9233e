#!/usr/bin/env python3
#
############################################################################
#
# MODULE:      m.plap.homoclinic.gradcheck
# AUTHOR(S):   m.plap.homoclinic developers
#
# PURPOSE:     Compares the analytic energy gradient with central
#              differences on seeded random lattice vectors
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

# %module
# % description: Verifies the energy gradient by finite differences and writes gradcheck.json.
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
# % key: output_dir
# % type: string
# % required: no
# % multiple: no
# % key_desc: path
# % description: Directory for gradcheck.json
# %end

import os
import sys

import grass.script as grass
from grass.pygrass.utils import get_lib_path

# import module library
path = get_lib_path(modname="m.plap.homoclinic")
if path is None:
    grass.fatal("Unable to find the m.plap.homoclinic library directory.")
sys.path.append(path)
try:
    from plap_commands import run_gradcheck
    from plap_config import load_config
    from plap_errors import EXIT_CONFIG_ERROR, ConfigError
    from plap_output import write_json
except Exception as imp_err:
    grass.fatal(f"m.plap.homoclinic library could not be imported: {imp_err}")


def main():
    """Main function of m.plap.homoclinic.gradcheck"""
    overrides = [ovr for ovr in options["override"].split(",") if ovr]
    try:
        cfg = load_config(options["config"], overrides, options["output_dir"] or None)
    except ConfigError as err:
        grass.error(_(f"Invalid configuration: {err}"))
        return EXIT_CONFIG_ERROR

    doc, exit_code = run_gradcheck(cfg)
    os.makedirs(cfg.output_dir, exist_ok=True)
    write_json(os.path.join(cfg.output_dir, "gradcheck.json"), doc)
    if not doc["pass"]:
        grass.warning(
            _(
                f"Gradient error {doc['max_rel_error']:.3e} exceeds the "
                f"tolerance {doc['tolerance']:.1e}",
            ),
        )
    return exit_code


if __name__ == "__main__":
    options, flags = grass.parser()
    sys.exit(main())
