#!/usr/bin/env python3
#
############################################################################
#
# MODULE:      m.plap.homoclinic test
# AUTHOR(S):   m.plap.homoclinic developers
#
# PURPOSE:     Tests the solve, probe and gradcheck commands end to end
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

import csv
import json
import os

from grass.gunittest.gmodules import SimpleModule
from grass.gunittest.main import test

from plap_test_base import PlapTestBase


class TestMPlapHomoclinic(PlapTestBase):
    """Test class for the m.plap.homoclinic commands"""

    def run_command(self, command, config, output_dir, **kwargs):
        module = SimpleModule(
            "m.plap.homoclinic",
            command=command,
            config=config,
            output_dir=output_dir,
            **kwargs,
        )
        return module

    def read_csv(self, path):
        with open(path, encoding="utf-8", newline="") as src:
            return list(csv.DictReader(src))

    def read_bytes(self, directory, names):
        out = {}
        for name in names:
            with open(os.path.join(directory, name), "rb") as src:
                out[name] = src.read()
        return out

    def test_version(self):
        """The -v flag prints the toolset version"""
        print("\nTest version flag ...")
        module = SimpleModule("m.plap.homoclinic", flags="v")
        self.assertModule(module, "Printing the version fails.")
        self.assertIn("m.plap.homoclinic 1.0.0", module.outputs.stdout)
        print("Test version flag successfully finished.\n")

    def test_solve_d1(self):
        """Five levels of the desk configuration, all claims pass"""
        print("\nTest solve on the desk configuration ...")
        config = self.write_config(self.d1_config(), "d1.json")
        output_dir = os.path.join(self.tmp_dir, "solve_d1")
        module = self.run_command("solve", config, output_dir, nprocs=2)
        self.assertModule(module, "Solving the desk configuration fails.")

        summary = self.read_csv(os.path.join(output_dir, "summary.csv"))
        self.assertEqual([int(row["n"]) for row in summary], [1, 2, 3, 4, 5])
        etas = [float(row["eta"]) for row in summary]
        self.assertEqual(etas[0], 0.0)
        self.assertTrue(all(b < a for a, b in zip(etas, etas[1:])), etas)
        for row in summary:
            self.assertEqual(row["claim2"], "true")
            self.assertEqual(row["claim3"], "true")
            self.assertLessEqual(float(row["residual_inf"]), 1e-6)

        solutions = self.read_csv(os.path.join(output_dir, "solutions.csv"))
        self.assertEqual({int(row["n"]) for row in solutions}, {1, 2, 3, 4, 5})

        with open(os.path.join(output_dir, "report.json"), encoding="utf-8") as src:
            report = json.load(src)
        self.assertEqual(report["version"], "1.0.0")
        self.assertEqual(report["failures"], {})
        self.assertTrue(all(claim["pass"] for claim in report["claims"]))

        # a second run reproduces every artifact byte for byte
        names = ("solutions.csv", "summary.csv", "report.json")
        first = self.read_bytes(output_dir, names)
        module = self.run_command("solve", config, output_dir, nprocs=1)
        self.assertModule(module, "Repeating the desk configuration fails.")
        self.assertEqual(self.read_bytes(output_dir, names), first)
        print("Test solve on the desk configuration successfully finished.\n")

    def test_invalid_lambda(self):
        """A nonpositive lambda is a configuration error"""
        print("\nTest invalid lambda ...")
        config = self.write_config(self.d1_config(), "d1_lambda.json")
        output_dir = os.path.join(self.tmp_dir, "solve_lambda")
        module = self.run_command("solve", config, output_dir, override="lambda=-1")
        self.assertModuleFail(module)
        self.assertEqual(module.popen.returncode, 2)
        self.assertIn("positive real parameter", module.outputs.stderr)
        self.assertFalse(os.path.exists(os.path.join(output_dir, "summary.csv")))

        module = SimpleModule("m.plap.homoclinic", command="probe")
        self.assertModuleFail(module)
        self.assertEqual(module.popen.returncode, 2)
        print("Test invalid lambda successfully finished.\n")

    def test_unknown_key(self):
        """Unknown configuration keys are rejected"""
        print("\nTest unknown configuration key ...")
        config = self.write_config(self.d1_config(tolerance=1), "d1_unknown.json")
        output_dir = os.path.join(self.tmp_dir, "solve_unknown")
        module = self.run_command("solve", config, output_dir)
        self.assertModuleFail(module)
        self.assertEqual(module.popen.returncode, 2)
        self.assertIn("tolerance", module.outputs.stderr)
        print("Test unknown configuration key successfully finished.\n")

    def test_solve_zero(self):
        """f = 0 solves every level but fails the sequence claims"""
        print("\nTest solve with f = 0 ...")
        doc = self.d1_config(N=3, nonlinearity={"builtin": "zero"})
        config = self.write_config(doc, "zero.json")
        output_dir = os.path.join(self.tmp_dir, "solve_zero")
        module = self.run_command("solve", config, output_dir)
        self.assertModuleFail(module)
        self.assertEqual(module.popen.returncode, 1)
        summary = self.read_csv(os.path.join(output_dir, "summary.csv"))
        self.assertEqual([float(row["eta"]) for row in summary], [0.0, 0.0, 0.0])
        with open(os.path.join(output_dir, "report.json"), encoding="utf-8") as src:
            report = json.load(src)
        failed = {claim["claim_id"] for claim in report["claims"] if not claim["pass"]}
        self.assertIn("C4_eta_divergence", failed)
        self.assertIn("lambda_threshold", failed)
        print("Test solve with f = 0 successfully finished.\n")

    def test_solver_failure(self):
        """An exhausted iteration budget gives exit code 3"""
        print("\nTest solver failure ...")
        config = self.write_config(self.d1_config(N=2), "d1_budget.json")
        output_dir = os.path.join(self.tmp_dir, "solve_budget")
        module = self.run_command("solve", config, output_dir, override="solver.max_iter=1")
        self.assertModuleFail(module)
        self.assertEqual(module.popen.returncode, 3)
        with open(os.path.join(output_dir, "report.json"), encoding="utf-8") as src:
            report = json.load(src)
        self.assertEqual(list(report["failures"]), ["2"])
        self.assertEqual(report["records"][1]["status"], "max_iter")
        print("Test solver failure successfully finished.\n")

    def test_probe(self):
        """Hypothesis probes of the desk configuration"""
        print("\nTest probe ...")
        config = self.write_config(self.d1_config(), "d1_probe.json")
        output_dir = os.path.join(self.tmp_dir, "probe")
        module = self.run_command("probe", config, output_dir)
        self.assertModule(module, "Probing the desk configuration fails.")
        with open(os.path.join(output_dir, "probe.json"), encoding="utf-8") as src:
            probe = json.load(src)
        for name in ("B", "F_vanishes_nonpositive", "F1", "F2"):
            self.assertTrue(probe["hypotheses"][name]["pass"], name)
        self.assertEqual(
            probe["growth_conditions"],
            {"F4_plus": False, "F4_minus": False, "F5": True},
        )
        self.assertTrue(probe["lambda_threshold"]["pass"])
        self.assertEqual(probe["config"]["lambda"], 1.0)

        for builtin, params in (("kuang", {"mu": 2, "nu": 1}), ("zero", {})):
            doc = self.d1_config(nonlinearity={"builtin": builtin, "params": params})
            config = self.write_config(doc, f"{builtin}_probe.json")
            output_dir = os.path.join(self.tmp_dir, f"probe_{builtin}")
            module = self.run_command("probe", config, output_dir)
            self.assertModule(module, f"Probing <{builtin}> fails.")
            with open(os.path.join(output_dir, "probe.json"), encoding="utf-8") as src:
                probe = json.load(src)
            f2 = probe["hypotheses"]["F2"]
            if builtin == "kuang":
                self.assertFalse(f2["pass"])
                self.assertGreater(f2["witness"]["f"], 0.0)
            else:
                self.assertTrue(f2["pass"])
                self.assertEqual(probe["B"]["B_est"], 0.0)
                self.assertFalse(probe["lambda_threshold"]["pass"])
        print("Test probe successfully finished.\n")

    def test_gradcheck(self):
        """Finite-difference gradient check on seeded vectors"""
        print("\nTest gradcheck ...")
        for p in (2, 3):
            config = self.write_config(self.d1_config(p=p), f"d1_grad_{p}.json")
            output_dir = os.path.join(self.tmp_dir, f"gradcheck_{p}")
            module = self.run_command("gradcheck", config, output_dir)
            self.assertModule(module, f"Gradient check fails for p = {p}.")
            with open(
                os.path.join(output_dir, "gradcheck.json"),
                encoding="utf-8",
            ) as src:
                doc = json.load(src)
            self.assertTrue(doc["pass"])
            self.assertLessEqual(doc["max_rel_error"], 1e-5)
            self.assertEqual(doc["window"], [-20, 20])

        # the same seed reproduces the report byte for byte
        output_dir = os.path.join(self.tmp_dir, "gradcheck_2")
        first = self.read_bytes(output_dir, ("gradcheck.json",))
        config = os.path.join(self.tmp_dir, "d1_grad_2.json")
        module = self.run_command("gradcheck", config, output_dir)
        self.assertModule(module, "Repeating the gradient check fails.")
        self.assertEqual(self.read_bytes(output_dir, ("gradcheck.json",)), first)
        print("Test gradcheck successfully finished.\n")

    def test_gradcheck_below_two(self):
        """Kink-free vectors at p = 1.5 meet the looser tolerance"""
        print("\nTest gradcheck for p = 1.5 ...")
        config = self.write_config(self.d1_config(p=1.5), "d1_grad_15.json")
        output_dir = os.path.join(self.tmp_dir, "gradcheck_15")
        module = self.run_command("gradcheck", config, output_dir)
        self.assertModule(module, "Gradient check fails for p = 1.5.")
        with open(os.path.join(output_dir, "gradcheck.json"), encoding="utf-8") as src:
            doc = json.load(src)
        self.assertTrue(doc["pass"])
        self.assertEqual(doc["tolerance"], 1e-4)
        self.assertLessEqual(doc["max_rel_error"], 1e-4)
        self.assertEqual(doc["p"], 1.5)
        print("Test gradcheck for p = 1.5 successfully finished.\n")


if __name__ == "__main__":
    test()
