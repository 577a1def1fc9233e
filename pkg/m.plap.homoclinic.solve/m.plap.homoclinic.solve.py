#!/usr/bin/env python3
#
############################################################################
#
# MODULE:      m.plap.homoclinic.solve
# AUTHOR(S):   m.plap.homoclinic developers
#
# PURPOSE:     Solves the box-constrained minimizations for the levels
#              n = 1..N in parallel and certifies the solution sequence
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
# % description: Solves and certifies the level sequence of homoclinic solutions of the discrete p-Laplacian.
# % keyword: miscellaneous
# % keyword: p-Laplacian
# % keyword: optimization
# % keyword: parallel
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
# % description: Directory for solutions.csv, summary.csv and report.json
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

import atexit
import sys
import tempfile

import grass.script as grass
from grass.pygrass.modules import Module, ParallelModuleQueue
from grass.pygrass.utils import get_lib_path

from grass_gis_helpers.cleanup import general_cleanup

# import module library
path = get_lib_path(modname="m.plap.homoclinic")
if path is None:
    grass.fatal("Unable to find the m.plap.homoclinic library directory.")
sys.path.append(path)
try:
    from plap_commands import finish_solve
    from plap_config import load_config, setup_parallel_processing
    from plap_errors import EXIT_CONFIG_ERROR, ConfigError
    from plap_output import read_failure, read_record
except Exception as imp_err:
    grass.fatal(f"m.plap.homoclinic library could not be imported: {imp_err}")

rm_dirs = []


def cleanup():
    """Remove all not needed files at the end"""
    general_cleanup(rm_dirs=rm_dirs)


def main():
    """Main function of m.plap.homoclinic.solve"""
    config = options["config"]
    overrides = [ovr for ovr in options["override"].split(",") if ovr]
    try:
        cfg = load_config(config, overrides, options["output_dir"] or None)
    except ConfigError as err:
        grass.error(_(f"Invalid configuration: {err}"))
        return EXIT_CONFIG_ERROR

    nprocs = setup_parallel_processing(int(options["nprocs"]))
    # set number of parallel processes to number of levels
    if cfg.N < nprocs:
        nprocs = cfg.N
    record_dir = tempfile.mkdtemp(prefix="plap_records_")
    rm_dirs.append(record_dir)
    queue = ParallelModuleQueue(nprocs=nprocs)

    # set queue and variables for worker addon
    try:
        grass.message(_(f"Solving {cfg.N} levels in parallel..."))
        for level in range(1, cfg.N + 1):
            param = {
                "config": config,
                "level": level,
                "record_dir": record_dir,
            }
            if overrides:
                param["override"] = overrides
            worker = Module(
                "m.plap.homoclinic.worker",
                **param,
                run_=False,
            )
            # catch all GRASS output to stdout and stderr
            worker.stdout = grass.PIPE
            worker.stderr = grass.PIPE
            queue.put(worker)
        queue.wait()
    except Exception:
        for proc_num in range(queue.get_num_run_procs()):
            proc = queue.get(proc_num)
            if proc.returncode != 0:
                errmsg = proc.outputs["stderr"].value.strip()
                grass.warning(
                    _(f"\nERROR by processing <{proc.get_bash()}>: {errmsg}"),
                )

    # collect in level order; a missing record is a failed level
    records = []
    failures = {}
    for level in range(1, cfg.N + 1):
        rec = read_record(record_dir, level)
        msg = read_failure(record_dir, level)
        if rec is not None:
            records.append(rec)
        elif msg is None:
            msg = "worker wrote no record"
        if msg is not None:
            failures[level] = msg
    return finish_solve(cfg, records, failures)


if __name__ == "__main__":
    options, flags = grass.parser()
    atexit.register(cleanup)
    sys.exit(main())
