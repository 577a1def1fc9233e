#!/usr/bin/env python3
#
############################################################################
#
# MODULE:      plap_lattice
# AUTHOR(S):   m.plap.homoclinic developers
#
# PURPOSE:     Sequence-space primitives for m.plap.homoclinic: exponent,
#              weight sequences, finitely supported lattice vectors, the
#              power map phi_p, forward differences and the norms of X,
#              l^p and l^infinity
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

from plap_errors import InvalidParameterError

WEIGHT_KINDS = ("constant", "affine_abs", "power", "table")

# relative slack of the embedding chain
EMBEDDING_SLACK = 1e-12


class Exponent(float):
    """The exponent p of the p-Laplacian, a real number p > 1"""

    def __new__(cls, p):
        value = float(p)
        if not value > 1.0:
            raise InvalidParameterError(
                f"The exponent p must be a real number > 1, got {p}",
            )
        return super().__new__(cls, value)


@dataclass(frozen=True)
class WeightSeq:
    """Rule-defined positive weight sequence k -> w(k) on the integers

    Args:
        kind (str): One of "constant" (c0), "affine_abs" (c0 + c1*|k|),
                    "power" (c0 + c1*|k|^alpha) or "table" (explicit
                    values with a default rule for all other k)
        c0 (float): Constant term
        c1 (float): Coefficient of the |k| term
        alpha (float): Exponent of the power rule
        table (tuple): Pairs (k, value) of the table rule
        default (WeightSeq): Rule used outside of the table
        coercive_from (int): If set, the sequence is declared to be
                             nondecreasing in |k| for |k| >= coercive_from
    """

    kind: str
    c0: float = 1.0
    c1: float = 0.0
    alpha: float = 1.0
    table: tuple = ()
    default: "WeightSeq | None" = None
    coercive_from: "int | None" = None

    def __post_init__(self):
        if self.kind not in WEIGHT_KINDS:
            raise InvalidParameterError(
                f"Unknown weight kind <{self.kind}>, use one of {WEIGHT_KINDS}",
            )
        if self.kind == "table":
            if self.default is None:
                raise InvalidParameterError(
                    "A table weight needs a default rule",
                )
            table = tuple(sorted((int(k), float(v)) for k, v in self.table))
            if any(not (math.isfinite(v) and v > 0) for _k, v in table):
                raise InvalidParameterError(
                    "Table weights must be finite and positive",
                )
            object.__setattr__(self, "table", table)
            return
        if not (math.isfinite(self.c0) and self.c0 > 0):
            raise InvalidParameterError(
                f"Weight constant c0 must be positive, got {self.c0}",
            )
        if not (math.isfinite(self.c1) and self.c1 >= 0):
            raise InvalidParameterError(
                f"Weight coefficient c1 must be nonnegative, got {self.c1}",
            )
        if self.kind == "power" and not self.alpha > 0:
            raise InvalidParameterError(
                f"Weight exponent alpha must be positive, got {self.alpha}",
            )

    @classmethod
    def constant(cls, c):
        return cls("constant", c0=c)

    @classmethod
    def affine_abs(cls, c0, c1, coercive_from=None):
        if coercive_from is None and c1 > 0:
            coercive_from = 0
        return cls("affine_abs", c0=c0, c1=c1, coercive_from=coercive_from)

    @classmethod
    def power(cls, c0, c1, alpha, coercive_from=None):
        if coercive_from is None and c1 > 0:
            coercive_from = 0
        return cls(
            "power",
            c0=c0,
            c1=c1,
            alpha=alpha,
            coercive_from=coercive_from,
        )

    @classmethod
    def from_table(cls, values, default, coercive_from=None):
        return cls(
            "table",
            table=tuple(dict(values).items()),
            default=default,
            coercive_from=coercive_from,
        )

    def __call__(self, k):
        """Evaluate the weight at a single index or an integer array"""
        k_arr = np.asarray(k, dtype=np.int64)
        abs_k = np.abs(k_arr).astype(float)
        if self.kind == "constant":
            out = np.full(k_arr.shape, float(self.c0))
        elif self.kind == "affine_abs":
            out = self.c0 + self.c1 * abs_k
        elif self.kind == "power":
            out = self.c0 + self.c1 * abs_k**self.alpha
        else:
            out = np.asarray(self.default(k_arr), dtype=float).copy()
            for key, value in self.table:
                out[k_arr == key] = value
        if out.ndim == 0:
            return float(out)
        return out

    @property
    def lower_bound(self):
        """Exact infimum of the sequence over all integers"""
        if self.kind == "table":
            values = [v for _k, v in self.table]
            return min([self.default.lower_bound, *values])
        # c1 >= 0, so every rule attains its minimum c0 at k = 0
        return float(self.c0)

    @property
    def coercive(self):
        return self.coercive_from is not None

    def coercivity_holds(self, k_max):
        """Check the declared monotonicity beyond coercive_from up to k_max

        Args:
            k_max (int): Largest |k| to test

        Returns:
            (bool): True if w is nondecreasing in |k| on
                    coercive_from <= |k| <= k_max on both sides
        """
        if not self.coercive:
            return False
        start = abs(int(self.coercive_from))
        if k_max <= start:
            return True
        ks = np.arange(start, int(k_max) + 1)
        right = np.asarray(self(ks))
        left = np.asarray(self(-ks))
        return bool(np.all(np.diff(right) >= 0) and np.all(np.diff(left) >= 0))


@dataclass(frozen=True)
class WeightPair:
    """The weights a and b of the operator, b bounded below by b_0 > 0"""

    a: WeightSeq
    b: WeightSeq

    @property
    def b0(self):
        return self.b.lower_bound

    def site_scale(self, k):
        """The spike scale a(k+1) + a(k) + b(k)"""
        k_arr = np.asarray(k, dtype=np.int64)
        return self.a(k_arr + 1) + self.a(k_arr) + self.b(k_arr)


@dataclass(frozen=True, eq=False)
class LatticeVec:
    """Finitely supported real function on the integers

    u(k) = values[k - offset] inside the window and u(k) = 0 outside.
    """

    offset: int
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=float).reshape(-1)
        if values.size == 0:
            raise InvalidParameterError("A lattice vector needs a window")
        if not np.all(np.isfinite(values)):
            raise InvalidParameterError("Lattice vector values must be finite")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "offset", int(self.offset))

    @classmethod
    def zeros(cls, kmin, kmax):
        return cls(kmin, np.zeros(kmax - kmin + 1))

    @classmethod
    def spike(cls, k0, t, window=None):
        """Single-site vector with u(k0) = t, optionally on a larger window"""
        kmin, kmax = window if window else (k0, k0)
        if not kmin <= k0 <= kmax:
            raise InvalidParameterError(
                f"Spike site {k0} lies outside the window [{kmin}, {kmax}]",
            )
        values = np.zeros(kmax - kmin + 1)
        values[k0 - kmin] = t
        return cls(kmin, values)

    @property
    def kmin(self):
        return self.offset

    @property
    def kmax(self):
        return self.offset + self.values.size - 1

    @property
    def window(self):
        return (self.kmin, self.kmax)

    @property
    def indices(self):
        return np.arange(self.kmin, self.kmax + 1)

    def __len__(self):
        return self.values.size

    def __call__(self, k):
        k_arr = np.asarray(k, dtype=np.int64)
        pos = k_arr - self.offset
        inside = (pos >= 0) & (pos < self.values.size)
        out = np.where(inside, self.values[np.clip(pos, 0, self.values.size - 1)], 0.0)
        if out.ndim == 0:
            return float(out)
        return out

    def on_window(self, kmin, kmax):
        """Values of the induced function on [kmin, kmax] as an array"""
        return np.asarray(self(np.arange(kmin, kmax + 1)), dtype=float)

    def padded(self, kmin, kmax):
        """Same function on the window [min(kmin, .), max(kmax, .)]"""
        lo = min(kmin, self.kmin)
        hi = max(kmax, self.kmax)
        return LatticeVec(lo, self.on_window(lo, hi))

    def restricted(self, kmin, kmax):
        """Truncate the function to [kmin, kmax] (zero outside)"""
        return LatticeVec(kmin, self.on_window(kmin, kmax))

    def with_values(self, values):
        return LatticeVec(self.offset, values)

    def scaled(self, c):
        return LatticeVec(self.offset, c * self.values)

    def __eq__(self, other):
        if not isinstance(other, LatticeVec):
            return NotImplemented
        lo = min(self.kmin, other.kmin)
        hi = max(self.kmax, other.kmax)
        return bool(np.array_equal(self.on_window(lo, hi), other.on_window(lo, hi)))

    __hash__ = None

    def __repr__(self):
        return f"LatticeVec(offset={self.offset}, values={self.values.tolist()})"


def phi_p(t, p):
    """The odd power map |t|^(p-2) t, continuously extended by 0 at t = 0"""
    t_arr = np.asarray(t, dtype=float)
    out = np.sign(t_arr) * np.abs(t_arr) ** (float(p) - 1.0)
    if out.ndim == 0:
        return float(out)
    return out


def forward_diff(u, k):
    """Delta u(k-1) = u(k) - u(k-1), with zero extension outside the window"""
    k_arr = np.asarray(k, dtype=np.int64)
    return u(k_arr) - u(k_arr - 1)


def norm_terms(u, w, p):
    """Nonzero summands of ||u||^p

    The difference terms a(k)|Delta u(k-1)|^p live on the window enlarged
    by one index to the right, the mass terms b(k)|u(k)|^p on the window.

    Returns:
        diff_terms (np.ndarray): a(k)|Delta u(k-1)|^p for k = kmin..kmax+1
        mass_terms (np.ndarray): b(k)|u(k)|^p for k = kmin..kmax
    """
    ext = u.on_window(u.kmin - 1, u.kmax)
    ext = np.append(ext, 0.0)
    diffs = np.diff(ext)
    ks = np.arange(u.kmin, u.kmax + 2)
    diff_terms = w.a(ks) * np.abs(diffs) ** p
    mass_terms = w.b(u.indices) * np.abs(u.values) ** p
    return diff_terms, mass_terms


def norm_x_power(u, w, p):
    """||u||^p, summed with compensation over all nonzero terms"""
    diff_terms, mass_terms = norm_terms(u, w, p)
    return math.fsum(np.concatenate((diff_terms, mass_terms)).tolist())


def norm_x(u, w, p):
    """The norm of X: (sum a(k)|Delta u(k-1)|^p + b(k)|u(k)|^p)^(1/p)"""
    return norm_x_power(u, w, p) ** (1.0 / float(p))


def norm_lp(u, p):
    return math.fsum((np.abs(u.values) ** float(p)).tolist()) ** (1.0 / float(p))


def norm_linf(u):
    return float(np.max(np.abs(u.values)))


def embedding_check(u, w, p):
    """Check ||u||_inf <= ||u||_p <= b_0^(-1/p) ||u||

    Returns:
        (bool): True if the chain holds up to EMBEDDING_SLACK
        (tuple): (||u||_inf, ||u||_p, b_0^(-1/p) ||u||)
    """
    if not w.b0 > 0:
        raise InvalidParameterError("The embedding needs b_0 > 0")
    linf = norm_linf(u)
    lp = norm_lp(u, p)
    bound = w.b0 ** (-1.0 / float(p)) * norm_x(u, w, p)
    holds = linf <= lp * (1.0 + EMBEDDING_SLACK) and lp <= bound * (
        1.0 + EMBEDDING_SLACK
    )
    return holds, (linf, lp, bound)
