#!/usr/bin/env python3
#
############################################################################
#
# MODULE:      m.plap.homoclinic.probe
# AUTHOR(S):   m.plap.homoclinic developers
#
# PURPOSE:     Probes the growth and sign hypotheses of a nonlinearity and
#              estimates the growth rates B_+, B_- and B_0
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
# % description: Probes the hypotheses of a nonlinearity and writes probe.json.
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
# % description: Directory for probe.json
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
    from plap_commands import run_probe
    from plap_config import load_config
    from plap_errors import EXIT_CONFIG_ERROR, EXIT_OK, ConfigError
    from plap_output import write_json
except Exception as imp_err:
    grass.fatal(f"m.plap.homoclinic library could not be imported: {imp_err}")


def main():
    """Main function of m.plap.homoclinic.probe"""
    overrides = [ovr for ovr in options["override"].split(",") if ovr]
    try:
        cfg = load_config(options["config"], overrides, options["output_dir"] or None)
    except ConfigError as err:
        grass.error(_(f"Invalid configuration: {err}"))
        return EXIT_CONFIG_ERROR

    doc = run_probe(cfg)
    os.makedirs(cfg.output_dir, exist_ok=True)
    out = os.path.join(cfg.output_dir, "probe.json")
    write_json(out, doc)
    grass.message(_(f"Generated probe report <{out}>"))
    return EXIT_OK


if __name__ == "__main__":
    options, flags = grass.parser()
    sys.exit(main())
