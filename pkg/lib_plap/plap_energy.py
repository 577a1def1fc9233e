#!/usr/bin/env python3
#
############################################################################
#
# MODULE:      plap_energy
# AUTHOR(S):   m.plap.homoclinic developers
#
# PURPOSE:     Energy functionals Phi, Psi and J_lambda of the discrete
#              p-Laplacian problem, their gradient (the residual of the
#              difference equation) and a finite-difference verifier
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

import math
from dataclasses import dataclass

import numpy as np

from plap_errors import InvalidParameterError, NonfiniteEnergy
from plap_lattice import LatticeVec, norm_x_power, phi_p

# moves below this fraction of 1 + |t| integrate f instead of differencing F
SMALL_MOVE = 1e-6
# magnitudes of differences and values are floored here before |v|^(p-2)
KINK_FLOOR = 1e-12
GAUSS_NODES, GAUSS_WEIGHTS = np.polynomial.legendre.leggauss(4)
# mapped from [-1, 1] to [0, 1]
GAUSS_NODES = 0.5 * (GAUSS_NODES + 1.0)
GAUSS_WEIGHTS = 0.5 * GAUSS_WEIGHTS


def check_lambda(lam):
    """Reject lambda <= 0"""
    if not (math.isfinite(lam) and lam > 0):
        raise InvalidParameterError(
            f"λ is a positive real parameter, got lambda = {lam}",
        )
    return float(lam)


def power_change(v, dv, p):
    """|v + dv|^p - |v|^p, free of cancellation where the sign is kept"""
    v = np.asarray(v, dtype=float)
    dv = np.asarray(dv, dtype=float)
    v_new = v + dv
    kept = (v != 0) & (np.sign(v_new) == np.sign(v))
    ratio = np.where(kept, dv / np.where(v == 0, 1.0, v), 0.0)
    with np.errstate(divide="ignore"):
        smooth = np.abs(v) ** p * np.expm1(p * np.log1p(ratio))
    direct = np.abs(v_new) ** p - np.abs(v) ** p
    return np.where(kept, smooth, direct)


@dataclass(frozen=True)
class EnergyReport:
    phi: float
    psi: float
    j: float
    lam: float


def phi_functional(u, w, p):
    """Phi(u) = (1/p) sum a(k)|Delta u(k-1)|^p + b(k)|u(k)|^p"""
    return norm_x_power(u, w, p) / float(p)


def psi_functional(u, nl):
    """Psi(u) = sum F(k, u(k)), taken over the window (F(k, 0) = 0)"""
    return math.fsum(np.asarray(nl.F(u.indices, u.values), dtype=float).tolist())


def j_functional(u, w, p, nl, lam):
    """J_lambda(u) = Phi(u) - lambda Psi(u)

    Returns:
        (EnergyReport): Phi, Psi, J and lambda
    """
    lam = check_lambda(lam)
    phi = phi_functional(u, w, p)
    psi = psi_functional(u, nl)
    j = phi - lam * psi
    if not math.isfinite(j):
        raise NonfiniteEnergy(
            f"J_lambda is not finite (Phi = {phi}, Psi = {psi}) for "
            f"nonlinearity <{nl.name}>",
        )
    return EnergyReport(phi=phi, psi=psi, j=j, lam=lam)


def grad_j(u, w, p, nl, lam):
    """Partial derivatives of J_lambda, i.e. the residual of the equation

    g(k) = -a(k+1) phi_p(Delta u(k)) + a(k) phi_p(Delta u(k-1))
           + b(k) phi_p(u(k)) - lambda f(k, u(k))

    Returns:
        (LatticeVec): g on the window of u padded by one index per side
    """
    lam = check_lambda(lam)
    kmin, kmax = u.kmin - 1, u.kmax + 1
    ext = u.on_window(kmin - 1, kmax + 1)
    diffs = np.diff(ext)
    ks = np.arange(kmin, kmax + 1)
    vals = ext[1:-1]
    back = diffs[:-1]
    fwd = diffs[1:]
    grad = (
        -w.a(ks + 1) * phi_p(fwd, p)
        + w.a(ks) * phi_p(back, p)
        + w.b(ks) * phi_p(vals, p)
        - lam * np.asarray(nl.f(ks, vals), dtype=float)
    )
    if not np.all(np.isfinite(grad)):
        raise NonfiniteEnergy(
            f"Gradient of J_lambda is not finite for nonlinearity <{nl.name}>",
        )
    return LatticeVec(kmin, grad)


def fd_gradient_check(u, w, p, nl, lam, h):
    """Compare grad_j with central differences of J_lambda on u's window

    Only the summands of J that depend on u(k) change when u(k) moves, so
    the central difference in coordinate k is taken over those summands.

    Args:
        u (LatticeVec): Point to check
        h (float): Difference step, h > 0

    Returns:
        (float): max |central - analytic| / (1 + |analytic|)
    """
    lam = check_lambda(lam)
    if not h > 0:
        raise InvalidParameterError(f"Difference step must be positive, got {h}")
    ks = u.indices
    x = u.values
    left = u.on_window(u.kmin - 1, u.kmax - 1)
    right = u.on_window(u.kmin + 1, u.kmax + 1)
    a_k = w.a(ks)
    a_k1 = w.a(ks + 1)
    b_k = w.b(ks)

    def local_phi(xk):
        return (
            a_k * np.abs(xk - left) ** p
            + a_k1 * np.abs(right - xk) ** p
            + b_k * np.abs(xk) ** p
        ) / float(p)

    d_phi = (local_phi(x + h) - local_phi(x - h)) / (2.0 * h)
    d_psi = (
        np.asarray(nl.F(ks, x + h), dtype=float)
        - np.asarray(nl.F(ks, x - h), dtype=float)
    ) / (2.0 * h)
    central = d_phi - lam * d_psi
    analytic = grad_j(u, w, p, nl, lam).values[1:-1]
    return float(np.max(np.abs(central - analytic) / (1.0 + np.abs(analytic))))


@dataclass(frozen=True)
class EnergyContext:
    """Everything J_lambda depends on besides the lattice vector"""

    weights: object
    p: float
    nonlinearity: object
    lam: float

    def __post_init__(self):
        check_lambda(self.lam)

    def energy(self, u):
        return j_functional(u, self.weights, self.p, self.nonlinearity, self.lam)

    def j(self, u):
        return self.energy(u).j

    def gradient(self, u):
        return grad_j(u, self.weights, self.p, self.nonlinearity, self.lam)

    def on_window(self, kmin, kmax):
        return WindowEnergy(self, kmin, kmax)


class WindowEnergy:
    """J_lambda and its gradient restricted to vectors supported on a window

    The weights are tabulated once, so repeated evaluations inside an
    iterative solver only touch plain arrays.
    """

    def __init__(self, ctx, kmin, kmax):
        self.ctx = ctx
        self.kmin = int(kmin)
        self.kmax = int(kmax)
        self.ks = np.arange(self.kmin, self.kmax + 1)
        self.p = float(ctx.p)
        self.lam = float(ctx.lam)
        self.nl = ctx.nonlinearity
        # a(k) for k = kmin..kmax+1
        self.a_ext = np.asarray(ctx.weights.a(np.arange(self.kmin, self.kmax + 2)))
        self.b = np.asarray(ctx.weights.b(self.ks))

    @property
    def size(self):
        return self.ks.size

    def _diffs(self, x):
        return np.diff(np.concatenate(([0.0], x, [0.0])))

    def value(self, x):
        diffs = self._diffs(x)
        phi = math.fsum(
            np.concatenate(
                (self.a_ext * np.abs(diffs) ** self.p, self.b * np.abs(x) ** self.p),
            ).tolist(),
        ) / self.p
        psi = math.fsum(np.asarray(self.nl.F(self.ks, x), dtype=float).tolist())
        j = phi - self.lam * psi
        if not math.isfinite(j):
            raise NonfiniteEnergy(
                f"J_lambda is not finite on window [{self.kmin}, {self.kmax}] "
                f"for nonlinearity <{self.nl.name}>",
            )
        return j

    def gradient(self, x):
        diffs = self._diffs(x)
        grad = (
            -self.a_ext[1:] * phi_p(diffs[1:], self.p)
            + self.a_ext[:-1] * phi_p(diffs[:-1], self.p)
            + self.b * phi_p(x, self.p)
            - self.lam * np.asarray(self.nl.f(self.ks, x), dtype=float)
        )
        if not np.all(np.isfinite(grad)):
            raise NonfiniteEnergy(
                f"Gradient of J_lambda is not finite on window "
                f"[{self.kmin}, {self.kmax}] for nonlinearity <{self.nl.name}>",
            )
        return grad

    def change(self, x, x_new):
        """J(x_new) - J(x), accumulated term by term

        Power terms use |v|^p expm1(p log1p(dv / v)) where the sign is kept;
        F is integrated over [x, x_new] with Gauss-Legendre nodes where the
        move is small. Decreases far below the round-off of J itself stay
        resolvable this way.
        """
        step = x_new - x
        phi = math.fsum(
            np.concatenate(
                (
                    self.a_ext * power_change(self._diffs(x), self._diffs(step), self.p),
                    self.b * power_change(x, step, self.p),
                ),
            ).tolist(),
        ) / self.p
        direct = np.asarray(self.nl.F(self.ks, x_new), dtype=float) - np.asarray(
            self.nl.F(self.ks, x),
            dtype=float,
        )
        small = np.abs(step) <= SMALL_MOVE * (1.0 + np.abs(x))
        if np.any(small):
            nodes = x[small, None] + step[small, None] * GAUSS_NODES[None, :]
            values = np.asarray(self.nl.f(self.ks[small, None], nodes), dtype=float)
            direct[small] = step[small] * (values @ GAUSS_WEIGHTS)
        delta = phi - self.lam * math.fsum(direct.tolist())
        if not math.isfinite(delta):
            raise NonfiniteEnergy(
                f"Change of J_lambda is not finite on window "
                f"[{self.kmin}, {self.kmax}] for nonlinearity <{self.nl.name}>",
            )
        return delta

    def curvature(self, x):
        """Diagonal of the Hessian of Phi, with |v| floored at KINK_FLOOR"""
        diffs = np.maximum(np.abs(self._diffs(x)), KINK_FLOOR) ** (self.p - 2.0)
        sites = np.maximum(np.abs(x), KINK_FLOOR) ** (self.p - 2.0)
        return (self.p - 1.0) * (
            self.a_ext[1:] * diffs[1:] + self.a_ext[:-1] * diffs[:-1] + self.b * sites
        )

    def vector(self, x):
        return LatticeVec(self.kmin, x)
