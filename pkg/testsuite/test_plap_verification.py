#!/usr/bin/env python3
#
############################################################################
#
# MODULE:      m.plap.homoclinic test verification
# AUTHOR(S):   m.plap.homoclinic developers
#
# PURPOSE:     Tests the claim certificates of computed solution sequences
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

import dataclasses
import math

from grass.gunittest.main import test

from plap_test_base import PlapTestBase

from plap_energy import EnergyContext
from plap_errors import InsufficientData, InvalidParameterError
from plap_lattice import LatticeVec
from plap_nonlinearity import BProbeReport
from plap_solver import run_sequence
from plap_verification import (
    DEGENERATE_NOTE,
    ClaimId,
    claim_suite,
    spike_bound,
    verify_claim1,
    verify_claim2,
    verify_claim3,
    verify_claim4,
    verify_embedding,
    verify_lambda_threshold,
    verify_norm_growth,
)


def b_report(b_est):
    """Probe report carrying only the combined estimate"""
    return BProbeReport(
        b_plus=[b_est],
        b_minus=[0.0],
        b_zero=[0.0],
        k_thresholds=[1],
        t_thresholds=[2.0],
        k_grid=[-1, 1],
        t_grid=[2.0],
        b_est=b_est,
    )


class TestPlapVerification(PlapTestBase):
    """Test class for the claim certificates"""

    records = None
    zero_records = None

    @classmethod
    # pylint: disable=invalid-name
    def setUpClass(cls):
        """Solves three levels of the desk configuration and of f = 0"""
        super().setUpClass()
        cls.records = run_sequence(
            3,
            cls.lam,
            cls.spec2,
            cls.example2,
            cls.weights,
            cls.p,
            cls.params,
        ).records
        cls.zero_records = run_sequence(
            3,
            cls.lam,
            cls.spec2,
            cls.zero,
            cls.weights,
            cls.p,
            cls.params,
        ).records
        cls.ctx = EnergyContext(cls.weights, cls.p, cls.example2, cls.lam)

    def claim4(self, records, nl=None):
        return verify_claim4(
            records,
            self.spec2,
            self.weights,
            self.p,
            nl or self.example2,
            self.lam,
        )

    def test_spike_bound(self):
        """s_n of the desk configuration"""
        print("\nTest spike bound ...")
        bounds = [
            spike_bound(n, self.spec2, self.weights, self.p, self.example2, 1.0)
            for n in (1, 2, 3)
        ]
        self.assertEqual(bounds, [0.0, -9.0, -55.0])

        # the suite searches spikes as far out as the solver does
        params = dataclasses.replace(self.params, spike_search=12)
        reports = claim_suite(
            self.records,
            self.spec2,
            self.weights,
            self.p,
            self.example2,
            self.lam,
            params,
        )
        claim1 = [rep for rep in reports if rep.claim_id == ClaimId.C1_BOUNDED_BELOW]
        for rec, report in zip(self.records, claim1):
            expected = spike_bound(
                rec.n, self.spec2, self.weights, self.p, self.example2, 1.0, 12,
            )
            self.assertEqual(report.witness["spike_bound"], expected)
            self.assertEqual(report.witness["spike_bound"], rec.spike_bound)
        print("Test spike bound successfully finished.\n")

    def test_claim_suite_d1(self):
        """Every claim passes on the desk configuration"""
        print("\nTest claim suite ...")
        reports = claim_suite(
            self.records,
            self.spec2,
            self.weights,
            self.p,
            self.example2,
            self.lam,
            self.params,
        )
        self.assertEqual(len(reports), 4 * 3 + 2)
        failed = [rep.as_dict() for rep in reports if not rep.passed]
        self.assertEqual(failed, [])
        ids = {rep.claim_id for rep in reports}
        self.assertIn(ClaimId.C4_ETA_DIVERGENCE, ids)
        self.assertIn(ClaimId.T2_NORM_GROWTH, ids)
        print("Test claim suite successfully finished.\n")

    def test_claim1(self):
        """Feasibility and the spike bound"""
        print("\nTest claim 1 ...")
        rec = self.records[2]
        self.assertTrue(verify_claim1(rec, self.spec2, self.ctx, -1.0).passed)
        trivial = dataclasses.replace(rec, u=LatticeVec.zeros(-1, 1))
        report = verify_claim1(trivial, self.spec2, self.ctx, -1.0)
        self.assertFalse(report.passed)
        self.assertEqual(report.witness["spike_bound"], -55.0)
        outside = dataclasses.replace(rec, u=LatticeVec(0, [3.0, -2.0]))
        report = verify_claim1(outside, self.spec2, self.ctx, -1.0)
        self.assertFalse(report.witness["feasible"])
        print("Test claim 1 successfully finished.\n")

    def test_claim2(self):
        """Bounds 0 <= u <= c_n with a witness for the violation"""
        print("\nTest claim 2 ...")
        for rec in self.records:
            self.assertTrue(verify_claim2(rec, self.spec2).passed)
        rec = self.records[2]
        bad = dataclasses.replace(rec, u=LatticeVec.spike(0, 4.0, (-2, 2)))
        report = verify_claim2(bad, self.spec2)
        self.assertFalse(report.passed)
        self.assertEqual(report.witness["k"], 0)
        self.assertEqual(report.witness["value"], 4.0)
        self.assertEqual(report.witness["margin"], 1.0)
        negative = dataclasses.replace(rec, u=LatticeVec(-1, [0.0, 1.0, -0.5]))
        report = verify_claim2(negative, self.spec2)
        self.assertFalse(report.passed)
        self.assertEqual(report.witness["k"], 1)
        print("Test claim 2 successfully finished.\n")

    def test_claim3(self):
        """Residual and tail certificates"""
        print("\nTest claim 3 ...")
        rec = self.records[2]
        report = verify_claim3(rec, self.ctx, self.params)
        self.assertTrue(report.passed)
        cut = dataclasses.replace(rec, u=rec.u.restricted(-1, 1))
        report = verify_claim3(cut, self.ctx, self.params)
        self.assertFalse(report.passed)
        self.assertFalse(report.witness["tail_ok"])
        print("Test claim 3 successfully finished.\n")

    def test_claim4(self):
        """Energy divergence, its degenerate case and the input checks"""
        print("\nTest claim 4 ...")
        report = self.claim4(self.records)
        self.assertTrue(report.passed)
        self.assertTrue(report.witness["strictly_decreasing"])
        self.assertLess(report.witness["eta_slope"], 0.0)

        report = self.claim4(self.zero_records, self.zero)
        self.assertFalse(report.passed)
        self.assertEqual(report.note, DEGENERATE_NOTE)

        report = self.claim4(self.records[::-1])
        self.assertFalse(report.passed)
        self.assertFalse(report.witness["nonincreasing"])

        with self.assertRaises(InsufficientData):
            self.claim4(self.records[:1])
        print("Test claim 4 successfully finished.\n")

    def test_norm_growth(self):
        """Strict norm growth, exemptions and the level order"""
        print("\nTest norm growth ...")
        report = verify_norm_growth(self.records, self.weights, self.p)
        self.assertTrue(report.passed)
        self.assertFalse(report.exempt)

        report = verify_norm_growth(self.zero_records, self.weights, self.p)
        self.assertFalse(report.passed)
        self.assertTrue(report.exempt)
        self.assertEqual(report.note, DEGENERATE_NOTE)
        self.assertEqual(len(report.witness["exempt_pairs"]), 2)

        report = verify_norm_growth(self.records[::-1], self.weights, self.p)
        self.assertFalse(report.passed)
        with self.assertRaises(InsufficientData):
            verify_norm_growth(self.records[:1], self.weights, self.p)

        reports = claim_suite(
            self.records[:1],
            self.spec2,
            self.weights,
            self.p,
            self.example2,
            self.lam,
            self.params,
        )
        tail = reports[-2:]
        self.assertEqual(
            [rep.claim_id for rep in tail],
            [ClaimId.C4_ETA_DIVERGENCE, ClaimId.T2_NORM_GROWTH],
        )
        self.assertFalse(any(rep.passed for rep in tail))
        print("Test norm growth successfully finished.\n")

    def test_embedding(self):
        """Embedding chain on every record"""
        print("\nTest embedding ...")
        for rec in self.records:
            report = verify_embedding(rec, self.weights, self.p)
            self.assertTrue(report.passed)
            linf = report.witness["linf"]
            self.assertLessEqual(linf, report.witness["lp"])
        print("Test embedding successfully finished.\n")

    def test_lambda_threshold(self):
        """lambda > 1 / (B p) under finite, infinite and vanishing B"""
        print("\nTest lambda threshold ...")
        report = verify_lambda_threshold(0.2, 2, b_report(2.0))
        self.assertFalse(report.passed)
        self.assertEqual(report.witness["threshold"], 0.25)
        self.assertTrue(verify_lambda_threshold(0.3, 2, b_report(2.0)).passed)
        self.assertTrue(verify_lambda_threshold(0.01, 2, b_report(math.inf)).passed)
        report = verify_lambda_threshold(1.0, 2, b_report(0.0))
        self.assertFalse(report.passed)
        self.assertEqual(report.witness["threshold"], math.inf)
        with self.assertRaises(InvalidParameterError):
            verify_lambda_threshold(-1.0, 2, b_report(2.0))
        print("Test lambda threshold successfully finished.\n")


if __name__ == "__main__":
    test()
