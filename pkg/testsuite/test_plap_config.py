#!/usr/bin/env python3
#
############################################################################
#
# MODULE:      m.plap.homoclinic test config
# AUTHOR(S):   m.plap.homoclinic developers
#
# PURPOSE:     Tests reading, overriding and validating run configurations
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

import os

from grass.gunittest.main import test

from plap_test_base import PlapTestBase

from plap_config import apply_overrides, build_config, load_config, parse_override
from plap_errors import ConfigError
from plap_nonlinearity import DeskHeightsExample1, DeskHeightsExample2


class TestPlapConfig(PlapTestBase):
    """Test class for the run configuration"""

    def test_overrides(self):
        """Dotted keys with JSON-decoded scalar values"""
        print("\nTest overrides ...")
        self.assertEqual(parse_override("solver.tol_pg=1e-9"), ("solver.tol_pg", 1e-9))
        self.assertEqual(parse_override("output_dir=out"), ("output_dir", "out"))
        for bad in ("lambda", "=3", "p=[1, 2]"):
            with self.assertRaises(ConfigError, msg=bad):
                parse_override(bad)
        doc = apply_overrides(self.d1_config(), ["solver.max_iter=10", "lambda=2"])
        self.assertEqual(doc["solver"], {"max_iter": 10})
        self.assertEqual(doc["lambda"], 2)
        self.assertNotIn("solver", self.d1_config())
        with self.assertRaises(ConfigError):
            apply_overrides(self.d1_config(), ["p.x=1"])
        print("Test overrides successfully finished.\n")

    def test_build_d1(self):
        """The desk configuration builds the expected objects"""
        print("\nTest desk configuration ...")
        cfg = build_config(self.d1_config())
        self.assertEqual((cfg.p, cfg.lam, cfg.N, cfg.seed), (2.0, 1.0, 5, 7))
        self.assertEqual(cfg.builtin, "example2")
        self.assertIsInstance(cfg.spec.h, DeskHeightsExample2)
        self.assertEqual(cfg.spec.h(1), 17.0)
        self.assertEqual(cfg.nonlinearity.F(0, 2.0), 17.0)
        self.assertEqual(cfg.weights.site_scale(0), 4.0)
        self.assertEqual(cfg.solver, self.params)
        self.assertEqual(cfg.echo["solver"]["window_K0"], 16)
        self.assertEqual(cfg.echo["probe"]["k_thresholds"], [1, 2, 4, 8])

        doc = self.d1_config(
            nonlinearity={"builtin": "example1", "params": {"side": "negative"}},
            solver={"max_iter": 100, "tail_eps": 1e-9},
        )
        cfg = build_config(doc)
        self.assertIsInstance(cfg.spec.h, DeskHeightsExample1)
        self.assertEqual(cfg.nonlinearity.F(-1, 5.0), cfg.spec.h(1))
        self.assertEqual(cfg.solver.max_iter, 100)
        self.assertIsInstance(cfg.solver.max_iter, int)
        print("Test desk configuration successfully finished.\n")

    def test_invalid_documents(self):
        """Missing, unknown and out-of-range entries"""
        print("\nTest invalid configurations ...")
        doc = self.d1_config()
        del doc["weights"]
        bad_docs = [
            doc,
            self.d1_config(extra=1),
            self.d1_config(p=1.0),
            self.d1_config(N=0),
            self.d1_config(N=2.5),
            self.d1_config(**{"lambda": 0}),
            self.d1_config(nonlinearity={"builtin": "cubic"}),
            self.d1_config(nonlinearity={"builtin": "kuang", "params": {"mu": 1}}),
            self.d1_config(solver={"armijo_c": 2}),
            self.d1_config(probe={"k_thresholds": 3}),
            self.d1_config(
                weights={
                    "a": {"kind": "constant", "c0": 1},
                    "b": {"kind": "affine_abs", "c0": 0, "c1": 1},
                },
            ),
        ]
        for bad in bad_docs:
            with self.assertRaises(ConfigError, msg=str(bad)):
                build_config(bad)
        print("Test invalid configurations successfully finished.\n")

    def test_load_config(self):
        """Reading from disk with overrides and output directory"""
        print("\nTest loading configurations ...")
        path = self.write_config(self.d1_config(), "load.json")
        cfg = load_config(path, ["N=2"], output_dir=self.tmp_dir)
        self.assertEqual(cfg.N, 2)
        self.assertEqual(cfg.output_dir, self.tmp_dir)
        with self.assertRaises(ConfigError):
            load_config(os.path.join(self.tmp_dir, "missing.json"))
        broken = os.path.join(self.tmp_dir, "broken.json")
        with open(broken, "w", encoding="utf-8") as out:
            out.write("{")
        with self.assertRaises(ConfigError):
            load_config(broken)
        print("Test loading configurations successfully finished.\n")


if __name__ == "__main__":
    test()
