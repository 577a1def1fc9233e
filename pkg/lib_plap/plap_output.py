#!/usr/bin/env python3
#
############################################################################
#
# MODULE:      plap_output
# AUTHOR(S):   m.plap.homoclinic developers
#
# PURPOSE:     Deterministic CSV and JSON artifacts of m.plap.homoclinic
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

import csv
import json
import math
import os
from enum import Enum

import numpy as np

from plap_solver import SolutionRecord

SOLUTIONS_HEADER = ("n", "k", "u_k")
SUMMARY_HEADER = (
    "n",
    "eta",
    "norm_x",
    "u_max",
    "residual_inf",
    "iterations",
    "window_lo",
    "window_hi",
    "claim2",
    "claim3",
)


def format_float(value):
    """Shortest round-trip decimal, non-finite values as inf, -inf, nan"""
    value = float(value)
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return repr(value)


def to_jsonable(obj):
    """Plain JSON types with non-finite floats written as strings"""
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        value = float(obj)
        return value if math.isfinite(value) else format_float(value)
    if isinstance(obj, dict):
        return {str(key): to_jsonable(val) for key, val in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [to_jsonable(val) for val in obj]
    return obj


def write_json(path, doc):
    with open(path, "w", encoding="utf-8") as out:
        out.write(json.dumps(to_jsonable(doc), sort_keys=True, indent=2, ensure_ascii=False))
        out.write("\n")


def read_json(path):
    with open(path, encoding="utf-8") as src:
        return json.load(src)


def _cell(value):
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format_float(value)
    return str(value)


def write_csv(path, header, rows):
    with open(path, "w", encoding="utf-8", newline="") as out:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_cell(val) for val in row])


def write_solutions(path, records):
    rows = [
        (rec.n, int(k), float(val))
        for rec in records
        for k, val in zip(rec.u.indices, rec.u.values)
    ]
    write_csv(path, SOLUTIONS_HEADER, rows)


def write_summary(path, records, claim_flags):
    """Args:
    claim_flags (dict): n -> (claim2 pass, claim3 pass)
    """
    rows = []
    for rec in records:
        row = rec.summary_row()
        claim2, claim3 = claim_flags.get(rec.n, (False, False))
        rows.append([row[col] for col in SUMMARY_HEADER[:-2]] + [claim2, claim3])
    write_csv(path, SUMMARY_HEADER, rows)


def record_path(directory, n):
    return os.path.join(directory, f"record_{n}.json")


def write_record(directory, rec):
    write_json(record_path(directory, rec.n), rec.as_dict())


def read_record(directory, n):
    """Solution record written by a worker, None if it is missing"""
    path = record_path(directory, n)
    if not os.path.isfile(path):
        return None
    return SolutionRecord.from_dict(read_json(path))


def failure_path(directory, n):
    return os.path.join(directory, f"failure_{n}.json")


def write_failure(directory, n, message):
    write_json(failure_path(directory, n), {"n": int(n), "message": str(message)})


def read_failure(directory, n):
    path = failure_path(directory, n)
    if not os.path.isfile(path):
        return None
    return read_json(path)["message"]
