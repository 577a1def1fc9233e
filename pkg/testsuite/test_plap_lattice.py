#!/usr/bin/env python3
#
############################################################################
#
# MODULE:      m.plap.homoclinic test lattice
# AUTHOR(S):   m.plap.homoclinic developers
#
# PURPOSE:     Tests weights, lattice vectors, phi_p and the norms
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

import math

import numpy as np
from grass.gunittest.main import test

from plap_test_base import PlapTestBase

from plap_errors import InvalidParameterError
from plap_lattice import (
    Exponent,
    LatticeVec,
    WeightSeq,
    embedding_check,
    forward_diff,
    norm_linf,
    norm_lp,
    norm_x,
    norm_x_power,
    phi_p,
)


class TestPlapLattice(PlapTestBase):
    """Test class for the sequence-space primitives"""

    def test_exponent(self):
        """Exponents p <= 1 are rejected"""
        print("\nTest exponent ...")
        self.assertEqual(Exponent(1.5), 1.5)
        for bad in (1.0, 0.5, -2):
            with self.assertRaises(InvalidParameterError):
                Exponent(bad)
        print("Test exponent successfully finished.\n")

    def test_weights(self):
        """Weight rules, exact lower bound and coercivity surrogate"""
        print("\nTest weights ...")
        b = self.weights.b
        self.assertEqual(b(0), 2.0)
        self.assertEqual(b(-3), 5.0)
        self.assertEqual(self.weights.b0, 2.0)
        self.assertTrue(b.coercivity_holds(64))
        self.assertFalse(self.weights.a.coercive)
        power = WeightSeq.power(1.0, 2.0, 0.5)
        self.assertAlmostEqual(power(4), 5.0)
        table = WeightSeq.from_table({0: 0.5, 3: 7.0}, WeightSeq.constant(2.0))
        self.assertEqual(table(0), 0.5)
        self.assertEqual(table(3), 7.0)
        self.assertEqual(table(1), 2.0)
        self.assertEqual(table.lower_bound, 0.5)
        np.testing.assert_array_equal(table(np.array([0, 1, 3])), [0.5, 2.0, 7.0])
        with self.assertRaises(InvalidParameterError):
            WeightSeq.constant(0.0)
        with self.assertRaises(InvalidParameterError):
            WeightSeq.affine_abs(1.0, -1.0)
        print("Test weights successfully finished.\n")

    def test_lattice_vec(self):
        """Zero extension and window-independent equality"""
        print("\nTest lattice vectors ...")
        u = LatticeVec(-1, [0.0, 1.0, 0.0])
        spike = LatticeVec.spike(0, 1.0)
        self.assertEqual(u, spike)
        self.assertEqual(u(5), 0.0)
        self.assertEqual(spike(0), 1.0)
        self.assertEqual(spike.padded(-3, 3).window, (-3, 3))
        self.assertEqual(spike.padded(-3, 3), spike)
        self.assertNotEqual(spike, spike.scaled(2.0))
        with self.assertRaises(InvalidParameterError):
            LatticeVec(0, [])
        with self.assertRaises(InvalidParameterError):
            LatticeVec(0, [1.0, math.nan])

        placed = LatticeVec.spike(2, 1.0, (0, 3))
        self.assertEqual(placed(2), 1.0)
        self.assertEqual(list(placed.values), [0.0, 0.0, 1.0, 0.0])
        for k0 in (-2, -1, 4):
            with self.assertRaises(InvalidParameterError, msg=str(k0)):
                LatticeVec.spike(k0, 1.0, (0, 3))
        print("Test lattice vectors successfully finished.\n")

    def test_phi_p(self):
        """phi_p examples and oddness"""
        print("\nTest phi_p ...")
        self.assertEqual(phi_p(3.0, 2), 3.0)
        self.assertEqual(phi_p(0.0, 1.3), 0.0)
        self.assertEqual(phi_p(-2.0, 3), -4.0)
        t = np.linspace(0.01, 5.0, 50)
        for p in (1.3, 2.0, 2.5, 4.0):
            np.testing.assert_allclose(phi_p(-t, p), -phi_p(t, p), rtol=1e-15)
        print("Test phi_p successfully finished.\n")

    def test_forward_diff(self):
        """Forward differences with zero extension"""
        print("\nTest forward differences ...")
        spike = LatticeVec.spike(0, 1.0)
        self.assertEqual(forward_diff(spike, 0), 1.0)
        self.assertEqual(forward_diff(spike, 1), -1.0)
        zero = LatticeVec.zeros(-2, 2)
        np.testing.assert_array_equal(forward_diff(zero, np.arange(-4, 5)), 0.0)
        print("Test forward differences successfully finished.\n")

    def test_norms(self):
        """Norm of X, l^p and l^inf on the desk weights"""
        print("\nTest norms ...")
        spike = LatticeVec.spike(0, 1.0)
        self.assertAlmostEqual(norm_x(spike, self.weights, 2), 2.0, places=14)
        self.assertAlmostEqual(
            norm_x(LatticeVec.spike(0, 3.0), self.weights, 2),
            6.0,
            places=13,
        )
        self.assertEqual(norm_x(LatticeVec.zeros(-3, 3), self.weights, 2), 0.0)
        self.assertEqual(norm_lp(spike, 2), 1.0)
        self.assertEqual(norm_linf(spike), 1.0)
        pair = LatticeVec(0, [1.0, -1.0])
        self.assertAlmostEqual(norm_lp(pair, 2), math.sqrt(2.0), places=15)
        self.assertEqual(norm_linf(pair), 1.0)
        print("Test norms successfully finished.\n")

    def test_norm_properties(self):
        """Homogeneity, window-extension invariance and the quadratic form"""
        print("\nTest norm properties ...")
        rng = np.random.default_rng(3)
        for _i in range(20):
            u = LatticeVec(int(rng.integers(-10, 10)), rng.uniform(-1, 1, 9))
            base = norm_x(u, self.weights, 2.5)
            for c in (-3.0, 0.5, 7.0):
                self.assertRelative(norm_x(u.scaled(c), self.weights, 2.5), abs(c) * base, 1e-12)
            wide = u.padded(u.kmin - 5, u.kmax + 5)
            self.assertRelative(norm_x(wide, self.weights, 2.5), base, 1e-15)
            # p = 2: two-pass quadratic form
            ext = np.concatenate(([0.0], u.values, [0.0]))
            ks = np.arange(u.kmin, u.kmax + 2)
            quad = np.sum(self.weights.a(ks) * np.diff(ext) ** 2)
            quad += np.sum(self.weights.b(u.indices) * u.values**2)
            self.assertRelative(norm_x_power(u, self.weights, 2), quad, 1e-12)
        print("Test norm properties successfully finished.\n")

    def test_embedding(self):
        """Embedding chain on the spike, zero and random vectors"""
        print("\nTest embedding ...")
        holds, (linf, lp, bound) = embedding_check(
            LatticeVec.spike(0, 1.0),
            self.weights,
            2,
        )
        self.assertTrue(holds)
        self.assertEqual((linf, lp), (1.0, 1.0))
        self.assertAlmostEqual(bound, math.sqrt(2.0), places=14)
        holds, norms = embedding_check(LatticeVec.zeros(0, 4), self.weights, 2)
        self.assertTrue(holds)
        self.assertEqual(norms, (0.0, 0.0, 0.0))
        rng = np.random.default_rng(11)
        for _i in range(1000):
            u = LatticeVec(-20, rng.uniform(-1, 1, 41))
            self.assertTrue(embedding_check(u, self.weights, 2)[0])
        print("Test embedding successfully finished.\n")


if __name__ == "__main__":
    test()
