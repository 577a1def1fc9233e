#!/usr/bin/env python3
#
############################################################################
#
# MODULE:      m.plap.homoclinic test base
# AUTHOR(S):   m.plap.homoclinic developers
#
# PURPOSE:     Test base for m.plap.homoclinic with the desk configurations
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
#############################################################################

import copy
import json
import os
import shutil
import sys
import tempfile

from grass.gunittest.case import TestCase
from grass.pygrass.utils import get_lib_path

# import module library, from the installed addon or the source tree
path = get_lib_path(modname="m.plap.homoclinic")
if path is None:
    path = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "lib_plap")
sys.path.append(path)

from plap_lattice import WeightPair, WeightSeq  # noqa: E402
from plap_nonlinearity import (  # noqa: E402
    desk_spec,
    make_example1,
    make_example2,
    make_kuang_family,
    make_zero,
)
from plap_solver import SolverParams  # noqa: E402

# desk configuration D1: a = 1, b(k) = 2 + |k|, p = 2, lambda = 1,
# single-site bumps with c_n = n, d_n = n + 1/2 and the minimal masses
D1_CONFIG = {
    "p": 2,
    "lambda": 1,
    "N": 5,
    "seed": 7,
    "weights": {
        "a": {"kind": "constant", "c0": 1},
        "b": {"kind": "affine_abs", "c0": 2, "c1": 1},
    },
    "nonlinearity": {
        "builtin": "example2",
        "spec": {
            "c": {"kind": "linear", "a": 1, "b": 0},
            "d": {"kind": "linear", "a": 1, "b": 0.5},
            "h": "auto",
        },
    },
}


class PlapTestBase(TestCase):
    """Base test class for m.plap.homoclinic"""

    p = 2.0
    lam = 1.0
    tmp_dir = None

    @classmethod
    # pylint: disable=invalid-name
    def setUpClass(cls):
        """Builds the D1 objects and a scratch directory"""
        cls.weights = WeightPair(
            a=WeightSeq.constant(1.0),
            b=WeightSeq.affine_abs(2.0, 1.0),
        )
        cls.spec1 = desk_spec("example1", cls.weights, cls.p)
        cls.spec2 = desk_spec("example2", cls.weights, cls.p)
        cls.example1 = make_example1(cls.spec1, cls.weights, cls.p)
        cls.example2 = make_example2(cls.spec2, cls.weights, cls.p)
        cls.kuang = make_kuang_family(2.0, 1.0, cls.p)
        cls.zero = make_zero()
        cls.params = SolverParams()
        cls.tmp_dir = tempfile.mkdtemp(prefix="plap_test_")

    @classmethod
    # pylint: disable=invalid-name
    def tearDownClass(cls):
        """Remove the scratch directory"""
        if cls.tmp_dir is not None:
            shutil.rmtree(cls.tmp_dir, ignore_errors=True)

    def d1_config(self, **changes):
        """D1 configuration document with top-level keys replaced"""
        doc = copy.deepcopy(D1_CONFIG)
        doc.update(copy.deepcopy(changes))
        return doc

    def write_config(self, doc, name="config.json"):
        """Write a configuration document and return its path"""
        cfg_path = os.path.join(self.tmp_dir, name)
        with open(cfg_path, "w", encoding="utf-8") as out:
            json.dump(doc, out)
        return cfg_path

    def assertRelative(self, first, second, rel, msg=None):
        """first equals second up to the relative tolerance rel"""
        scale = max(abs(first), abs(second), 1e-300)
        self.assertLessEqual(
            abs(first - second) / scale,
            rel,
            msg or f"{first!r} and {second!r} differ by more than {rel}",
        )
