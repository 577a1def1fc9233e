#!/usr/bin/env python3
#
############################################################################
#
# MODULE:      plap_nonlinearity
# AUTHOR(S):   m.plap.homoclinic developers
#
# PURPOSE:     Nonlinearities f(k, t) with closed-form primitives F(k, t),
#              the oscillatory bump constructions, the comparison family
#              and numeric probes of the growth and sign hypotheses
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
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.integrate import quad

from plap_errors import InvalidParameterError

SEQUENCE_KINDS = ("linear", "power", "list")

# queried index range of an oscillatory spec
N_MAX = 64
# bumps of the single-site construction are searched up to this index
N_LIMIT = 1_000_000

F1_TOLERANCE = 1e-3
F3_TAIL_TOLERANCE = 0.05


@dataclass(frozen=True)
class SequenceRule:
    """Rule n -> s_n for n >= 1

    Args:
        kind (str): "linear" (a*n + b), "power" (a*n^alpha + b) or "list"
                    (explicit values s_1, s_2, ... followed by the overflow
                    rule)
    """

    kind: str
    a: float = 1.0
    b: float = 0.0
    alpha: float = 1.0
    values: tuple = ()
    overflow: "SequenceRule | None" = None

    def __post_init__(self):
        if self.kind not in SEQUENCE_KINDS:
            raise InvalidParameterError(
                f"Unknown sequence kind <{self.kind}>, use one of "
                f"{SEQUENCE_KINDS}",
            )
        if self.kind == "list":
            object.__setattr__(
                self,
                "values",
                tuple(float(v) for v in self.values),
            )
            if self.overflow is None:
                raise InvalidParameterError(
                    "A list sequence needs an overflow rule",
                )

    def __call__(self, n):
        n_arr = np.asarray(n, dtype=np.int64)
        if self.kind == "linear":
            out = self.a * n_arr.astype(float) + self.b
        elif self.kind == "power":
            out = self.a * n_arr.astype(float) ** self.alpha + self.b
        else:
            listed = np.asarray(self.values)
            inside = (n_arr >= 1) & (n_arr <= listed.size)
            idx = np.clip(n_arr - 1, 0, max(listed.size - 1, 0))
            head = listed[idx] if listed.size else np.zeros(n_arr.shape)
            out = np.where(inside, head, self.overflow(n_arr))
        out = np.asarray(out, dtype=float)
        if out.ndim == 0:
            return float(out)
        return out


@dataclass(frozen=True)
class DeskHeightsExample1:
    """h_n = (n + 1) (a(k_n+1) + a(k_n) + b(k_n)) c_{n+1}^p, k_n = +-n"""

    weights: object
    p: float
    c: SequenceRule
    side: int = 1

    def __call__(self, n):
        n_arr = np.asarray(n, dtype=np.int64)
        scale = self.weights.site_scale(self.side * n_arr)
        out = (n_arr + 1) * scale * np.asarray(self.c(n_arr + 1)) ** self.p
        out = np.asarray(out, dtype=float)
        if out.ndim == 0:
            return float(out)
        return out


@dataclass(frozen=True)
class DeskHeightsExample2:
    """h_n with sum_{k<=n} h_k = n (a(1) + a(0) + b(0)) c_{n+1}^p + 1"""

    weights: object
    p: float
    c: SequenceRule

    def cumulative(self, n):
        n_arr = np.asarray(n, dtype=np.int64)
        scale0 = float(self.weights.site_scale(0))
        out = n_arr * scale0 * np.asarray(self.c(n_arr + 1)) ** self.p + 1.0
        return np.where(n_arr >= 1, out, 0.0)

    def __call__(self, n):
        n_arr = np.asarray(n, dtype=np.int64)
        out = self.cumulative(n_arr) - self.cumulative(n_arr - 1)
        out = np.asarray(out, dtype=float)
        if out.ndim == 0:
            return float(out)
        return out


@dataclass(frozen=True)
class OscillatorySpec:
    """Sequences c_n < d_n < c_{n+1} and bump masses h_n"""

    c: SequenceRule
    d: SequenceRule
    h: object
    n_max: int = N_MAX

    def levels(self, n_max=None):
        """Arrays (n, c_n, d_n) for n = 1..n_max"""
        n = np.arange(1, (n_max or self.n_max) + 1)
        return n, np.asarray(self.c(n)), np.asarray(self.d(n))

    def structure_violation(self, n_max=None):
        """First n violating 0 < c_n < d_n < c_{n+1}, or None"""
        n, c, d = self.levels(n_max)
        c_next = np.asarray(self.c(n + 1))
        bad = ~((c > 0) & (c < d) & (d < c_next))
        if np.any(bad):
            return int(n[np.argmax(bad)])
        return None

    def validate(self, n_max=None):
        bad = self.structure_violation(n_max)
        if bad is not None:
            raise InvalidParameterError(
                f"Sequences violate 0 < c_n < d_n < c_(n+1) at n = {bad}",
            )


def desk_heights(builtin, weights, p, c, side=1):
    """Minimal masses h_n for the levels c: per site or cumulative"""
    if builtin == "example1":
        return DeskHeightsExample1(weights, float(p), c, side)
    return DeskHeightsExample2(weights, float(p), c)


def desk_spec(builtin, weights, p, side=1, n_max=N_MAX):
    """Default spec c_n = n, d_n = n + 1/2 with the minimal desk masses"""
    c = SequenceRule("linear", a=1.0, b=0.0)
    d = SequenceRule("linear", a=1.0, b=0.5)
    h = desk_heights(builtin, weights, p, c, side)
    return OscillatorySpec(c=c, d=d, h=h, n_max=n_max)


def tent_f(t, lo, hi, mass):
    """Tent on [lo, hi] with apex 2 mass / (hi - lo) and integral mass"""
    width = hi - lo
    inside = (t >= lo) & (t <= hi)
    # width - 2 |t - mid| written so that both ends are exactly 0
    value = 4.0 * mass / width**2 * np.minimum(t - lo, hi - t)
    return np.where(inside, value, 0.0)


def tent_primitive(t, lo, hi, mass):
    """Integral of tent_f from -inf to t, piecewise quadratic"""
    width = hi - lo
    mid = 0.5 * (lo + hi)
    rising = 2.0 * mass * (t - lo) ** 2 / width**2
    falling = mass - 2.0 * mass * (hi - t) ** 2 / width**2
    return np.where(
        t <= lo,
        0.0,
        np.where(t <= mid, rising, np.where(t < hi, falling, mass)),
    )


class Nonlinearity:
    """Evaluable pair (f, F) with F(k, t) = int_0^t f(k, s) ds

    Subclasses implement f and F vectorized over broadcastable integer
    site and real level arrays.
    """

    name = "nonlinearity"
    vanishes_nonpositive = False
    continuous = True

    def f(self, k, t):
        raise NotImplementedError

    def F(self, k, t):
        raise NotImplementedError

    def kinks(self, k):
        """Levels t where f(k, .) is not differentiable"""
        return np.empty(0)

    @property
    def flags(self):
        return {
            "vanishes_nonpositive": self.vanishes_nonpositive,
            "continuous": self.continuous,
        }

    def describe(self):
        return {"name": self.name, "flags": self.flags}


def _scalar_or_array(out):
    out = np.asarray(out, dtype=float)
    if out.ndim == 0:
        return float(out)
    return out


class ZeroNonlinearity(Nonlinearity):
    name = "zero"
    vanishes_nonpositive = True

    def f(self, k, t):
        k_b, t_b = np.broadcast_arrays(np.asarray(k), np.asarray(t, dtype=float))
        return _scalar_or_array(np.zeros(t_b.shape))

    def F(self, k, t):
        return self.f(k, t)


class Example1Nonlinearity(Nonlinearity):
    """One tent per site: bump n of mass h_n on [d_n, c_(n+1)] at site +-n"""

    name = "example1"
    vanishes_nonpositive = True

    def __init__(self, spec, side=1):
        self.spec = spec
        self.side = 1 if side >= 0 else -1

    def _bumps(self, k, t):
        k_b, t_b = np.broadcast_arrays(
            np.asarray(k, dtype=np.int64),
            np.asarray(t, dtype=float),
        )
        n = self.side * k_b
        active = n >= 1
        n_safe = np.where(active, n, 1)
        lo = np.asarray(self.spec.d(n_safe), dtype=float)
        hi = np.asarray(self.spec.c(n_safe + 1), dtype=float)
        mass = np.asarray(self.spec.h(n_safe), dtype=float)
        return active, t_b, lo, hi, mass

    def f(self, k, t):
        active, t_b, lo, hi, mass = self._bumps(k, t)
        return _scalar_or_array(np.where(active, tent_f(t_b, lo, hi, mass), 0.0))

    def F(self, k, t):
        active, t_b, lo, hi, mass = self._bumps(k, t)
        return _scalar_or_array(
            np.where(active, tent_primitive(t_b, lo, hi, mass), 0.0),
        )

    def kinks(self, k):
        n = self.side * int(k)
        if n < 1:
            return np.empty(0)
        lo = self.spec.d(n)
        hi = self.spec.c(n + 1)
        return np.array([lo, 0.5 * (lo + hi), hi])

    def describe(self):
        desc = super().describe()
        desc["side"] = "positive" if self.side > 0 else "negative"
        return desc


class Example2Nonlinearity(Nonlinearity):
    """All bumps on the single site k = 0: f(0, .) is a sum of tents"""

    name = "example2"
    vanishes_nonpositive = True

    def __init__(self, spec):
        self.spec = spec

    def _tables(self, t_max):
        """Bump tables for every n with d_n < t_max (at least one bump)"""
        count = 1
        while float(self.spec.d(count)) < t_max:
            count *= 2
            if count > N_LIMIT:
                raise InvalidParameterError(
                    f"Level {t_max} is beyond the bump index limit {N_LIMIT}",
                )
        n = np.arange(1, count + 1)
        lo = np.asarray(self.spec.d(n), dtype=float)
        hi = np.asarray(self.spec.c(n + 1), dtype=float)
        mass = np.asarray(self.spec.h(n), dtype=float)
        # cumulative mass of the bumps left of bump n
        before = np.concatenate(([0.0], np.cumsum(mass)[:-1]))
        return lo, hi, mass, before

    def _at_site_zero(self, t, primitive):
        t = np.asarray(t, dtype=float)
        if t.size == 0:
            return np.zeros(t.shape)
        lo, hi, mass, before = self._tables(float(np.max(t)))
        # bump whose interval [d_n, c_(n+1)] is the last one starting at or
        # below t; t below d_1 maps to index -1
        idx = np.searchsorted(lo, t, side="right") - 1
        idx_safe = np.clip(idx, 0, lo.size - 1)
        if primitive:
            val = before[idx_safe] + tent_primitive(
                t,
                lo[idx_safe],
                hi[idx_safe],
                mass[idx_safe],
            )
        else:
            val = tent_f(t, lo[idx_safe], hi[idx_safe], mass[idx_safe])
        return np.where(idx >= 0, val, 0.0)

    def _evaluate(self, k, t, primitive):
        k_b, t_b = np.broadcast_arrays(
            np.asarray(k, dtype=np.int64),
            np.asarray(t, dtype=float),
        )
        out = np.zeros(t_b.shape)
        site = k_b == 0
        if np.any(site):
            out[site] = self._at_site_zero(t_b[site], primitive)
        return _scalar_or_array(out)

    def f(self, k, t):
        return self._evaluate(k, t, primitive=False)

    def F(self, k, t):
        return self._evaluate(k, t, primitive=True)

    def cumulative_mass(self, n):
        """sum_{k=1}^n h_k"""
        return math.fsum(np.asarray(self.spec.h(np.arange(1, n + 1))).tolist())

    def kinks(self, k):
        if int(k) != 0:
            return np.empty(0)
        n = np.arange(1, self.spec.n_max + 1)
        lo = np.asarray(self.spec.d(n))
        hi = np.asarray(self.spec.c(n + 1))
        return np.sort(np.concatenate((lo, 0.5 * (lo + hi), hi)))


class KuangNonlinearity(Nonlinearity):
    """f(k, t) = k^(-mu) |t|^(p-2) t ln(1 + |t|^nu) for k >= 1, 0 otherwise

    The primitive has no elementary closed form; it is computed by adaptive
    quadrature of the site-independent part and cached per level.
    """

    name = "kuang"

    def __init__(self, mu, nu, p):
        self.mu = float(mu)
        self.nu = float(nu)
        self.p = float(p)
        self._primitive = lru_cache(maxsize=65536)(self._integrate)

    def _integrate(self, level):
        value, _err = quad(
            lambda s: s ** (self.p - 1.0) * math.log1p(s**self.nu),
            0.0,
            level,
            epsabs=0.0,
            epsrel=1e-12,
            limit=200,
        )
        return value

    def _site_factor(self, k_b):
        k_safe = np.where(k_b >= 1, k_b, 1).astype(float)
        return np.where(k_b >= 1, k_safe ** (-self.mu), 0.0)

    def f(self, k, t):
        k_b, t_b = np.broadcast_arrays(
            np.asarray(k, dtype=np.int64),
            np.asarray(t, dtype=float),
        )
        abs_t = np.abs(t_b)
        out = (
            self._site_factor(k_b)
            * np.sign(t_b)
            * abs_t ** (self.p - 1.0)
            * np.log1p(abs_t**self.nu)
        )
        return _scalar_or_array(out)

    def F(self, k, t):
        k_b, t_b = np.broadcast_arrays(
            np.asarray(k, dtype=np.int64),
            np.asarray(t, dtype=float),
        )
        # the integrand is odd, so the primitive is even in t
        levels = np.abs(t_b).reshape(-1)
        prim = np.array([self._primitive(float(lv)) for lv in levels.tolist()])
        out = self._site_factor(k_b) * prim.reshape(t_b.shape)
        return _scalar_or_array(out)

    def kinks(self, k):
        return np.array([0.0])

    def describe(self):
        desc = super().describe()
        desc.update({"mu": self.mu, "nu": self.nu})
        return desc


def make_zero():
    return ZeroNonlinearity()


def make_example1(spec, w, p, side="positive"):
    """Bump construction with one tent per site and exact masses h_k

    Args:
        spec (OscillatorySpec): Sequences c_n, d_n, h_n
        w (WeightPair): Weights a and b
        p (float): Exponent
        side (str): "positive" puts bump n at site n, "negative" at site -n

    Returns:
        (Example1Nonlinearity): The nonlinearity
    """
    sign = 1 if side == "positive" else -1
    if side not in ("positive", "negative"):
        raise InvalidParameterError(f"Unknown side <{side}>")
    spec.validate()
    n = np.arange(1, spec.n_max + 1)
    need = n * w.site_scale(sign * n) * np.asarray(spec.c(n + 1)) ** float(p)
    mass = np.asarray(spec.h(n))
    bad = ~(mass > need)
    if np.any(bad):
        first = int(n[np.argmax(bad)])
        raise InvalidParameterError(
            f"Bump masses violate h_n > n (a(n+1)+a(n)+b(n)) c_(n+1)^p at "
            f"n = {first} (h_n = {mass[first - 1]}, bound {need[first - 1]})",
        )
    return Example1Nonlinearity(spec, sign)


def make_example2(spec, w, p):
    """Single-site tent sum with exact per-bump masses h_n

    The tents are normalized to 2 h_n / (c_(n+1) - d_n)^2 so that the bump
    over [d_n, c_(n+1)] integrates to h_n.
    """
    spec.validate()
    n = np.arange(1, spec.n_max + 1)
    mass = np.asarray(spec.h(n))
    if np.any(mass < 0):
        raise InvalidParameterError("Bump masses h_n must be nonnegative")
    cumulative = np.cumsum(mass)
    need = n * float(w.site_scale(0)) * np.asarray(spec.c(n + 1)) ** float(p)
    bad = ~(cumulative > need)
    if np.any(bad):
        first = int(n[np.argmax(bad)])
        raise InvalidParameterError(
            "Bump masses violate sum_(k<=n) h_k > n (a(1)+a(0)+b(0)) "
            f"c_(n+1)^p at n = {first}",
        )
    return Example2Nonlinearity(spec)


def make_kuang_family(mu, nu, p):
    if not mu > 1:
        raise InvalidParameterError(f"The family needs mu > 1, got {mu}")
    if not nu >= 1:
        raise InvalidParameterError(f"The family needs nu >= 1, got {nu}")
    return KuangNonlinearity(mu, nu, p)


def superlinear_ratio(nl, p, k, t):
    """f(k, t) t / |t|^p"""
    t_arr = np.asarray(t, dtype=float)
    return _scalar_or_array(
        np.asarray(nl.f(k, t_arr)) * t_arr / np.abs(t_arr) ** float(p),
    )


@dataclass
class HypothesisReport:
    name: str
    passed: bool
    witness: "dict | None" = None
    details: dict = field(default_factory=dict)

    def as_dict(self):
        return {
            "name": self.name,
            "pass": self.passed,
            "witness": self.witness,
            "details": self.details,
        }


def check_F1(nl, p, t_grid, k_range, tolerance=F1_TOLERANCE):
    """Probe lim_(t->0) |f(k,t)| / |t|^(p-1) = 0 uniformly in k

    Args:
        t_grid (list): Decreasing positive levels tending to 0
        k_range (tuple): Sites (kmin, kmax) over which the sup is taken

    Returns:
        (HypothesisReport): sup ratio per level; passes if the ratios are
                            nonincreasing and the last one is below tolerance
    """
    t_arr = np.asarray(t_grid, dtype=float)
    if t_arr.size == 0 or np.any(t_arr <= 0) or np.any(np.diff(t_arr) >= 0):
        raise InvalidParameterError(
            "The (F1) grid must be a decreasing sequence of positive levels",
        )
    ks = np.arange(k_range[0], k_range[1] + 1)
    kk, tt = np.meshgrid(ks, t_arr, indexing="ij")
    mag = np.maximum(np.abs(nl.f(kk, tt)), np.abs(nl.f(kk, -tt)))
    ratios = np.max(mag / tt ** (float(p) - 1.0), axis=0)
    monotone = bool(np.all(ratios[1:] <= ratios[:-1] * (1.0 + 1e-12)))
    passed = monotone and ratios[-1] <= tolerance
    witness = None
    if not passed:
        worst = int(np.argmax(ratios))
        witness = {"t": float(t_arr[worst]), "ratio": float(ratios[worst])}
    return HypothesisReport(
        name="F1",
        passed=passed,
        witness=witness,
        details={
            "t_grid": t_arr.tolist(),
            "sup_ratio": ratios.tolist(),
            "monotone": monotone,
            "tolerance": tolerance,
        },
    )


def check_F2(nl, spec, samples_per_interval, k_range=(-32, 32), n_max=None):
    """Probe f(k, t) <= 0 on every [c_n, d_n]"""
    if samples_per_interval < 3:
        raise InvalidParameterError("Use at least 3 samples per interval")
    n, c, d = spec.levels(n_max)
    frac = np.linspace(0.0, 1.0, samples_per_interval)
    levels = c[:, None] + (d - c)[:, None] * frac[None, :]
    ks = np.arange(k_range[0], k_range[1] + 1)
    values = np.asarray(nl.f(ks[:, None, None], levels[None, :, :]))
    worst = np.unravel_index(int(np.argmax(values)), values.shape)
    max_value = float(values[worst])
    passed = max_value <= 0.0
    witness = None
    if not passed:
        witness = {
            "k": int(ks[worst[0]]),
            "n": int(n[worst[1]]),
            "t": float(levels[worst[1], worst[2]]),
            "f": max_value,
        }
    return HypothesisReport(
        name="F2",
        passed=passed,
        witness=witness,
        details={
            "max_sampled_f": max_value,
            "levels": int(n.size),
            "samples_per_interval": int(samples_per_interval),
            "k_range": [int(k_range[0]), int(k_range[1])],
        },
    )


def check_F3(nl, spec, r, n, K, t_samples=201, tolerance=F3_TAIL_TOLERANCE):
    """Probe summability of s_k = max_(t in [r, d_n]) |F(k, t)| over |k| <= K

    The tail ratio sum_(K/2 < |k| <= K) s_k / sum_(|k| <= K) s_k serves as
    finite-range surrogate of s in l_1.
    """
    if not r < 0:
        raise InvalidParameterError(f"(F3) needs r < 0, got {r}")
    d_n = float(spec.d(n))
    _n, c_lv, d_lv = spec.levels(n)
    levels = np.unique(
        np.concatenate(
            (
                np.linspace(r, d_n, t_samples),
                c_lv[c_lv <= d_n],
                d_lv[d_lv <= d_n],
                [0.0],
            ),
        ),
    )
    ks = np.arange(-K, K + 1)
    s_k = np.max(np.abs(np.asarray(nl.F(ks[:, None], levels[None, :]))), axis=1)
    abs_k = np.abs(ks)
    partial = [
        math.fsum(s_k[abs_k <= m].tolist()) for m in range(K + 1)
    ]
    total = partial[-1]
    tail = math.fsum(s_k[abs_k > K // 2].tolist())
    tail_ratio = tail / total if total > 0 else 0.0
    passed = tail_ratio <= tolerance
    witness = None
    if not passed:
        witness = {"K": int(K), "tail_ratio": tail_ratio}
    return HypothesisReport(
        name="F3",
        passed=passed,
        witness=witness,
        details={
            "r": float(r),
            "n": int(n),
            "K": int(K),
            "s_k": s_k.tolist(),
            "partial_sums": partial,
            "tail_ratio": tail_ratio,
            "tolerance": tolerance,
        },
    )


def check_vanishes_nonpositive(nl, r=-1.0, k_range=(-32, 32), samples=64):
    """Probe F(k, s) = 0 for s <= 0"""
    levels = np.linspace(r, 0.0, samples)
    ks = np.arange(k_range[0], k_range[1] + 1)
    values = np.abs(np.asarray(nl.F(ks[:, None], levels[None, :])))
    worst = np.unravel_index(int(np.argmax(values)), values.shape)
    passed = float(values[worst]) == 0.0
    witness = None
    if not passed:
        witness = {
            "k": int(ks[worst[0]]),
            "s": float(levels[worst[1]]),
            "F": float(np.asarray(nl.F(ks[worst[0]], levels[worst[1]]))),
        }
    return HypothesisReport(
        name="F_vanishes_nonpositive",
        passed=passed,
        witness=witness,
        details={"declared": nl.vanishes_nonpositive, "r": float(r)},
    )


def check_weights(w, k_max=64):
    """Probe positivity of a, b >= b_0 > 0 and the coercivity surrogate of b"""
    ks = np.arange(-k_max, k_max + 2)
    a_vals = np.asarray(w.a(ks))
    b_vals = np.asarray(w.b(ks))
    a_positive = bool(np.all(a_vals > 0))
    b_bounded = bool(w.b0 > 0 and np.all(b_vals >= w.b0))
    coercive = w.b.coercivity_holds(k_max)
    passed = a_positive and b_bounded and coercive
    witness = None
    if not passed:
        witness = {
            "a_positive": a_positive,
            "b_bounded_below": b_bounded,
            "b_coercive": coercive,
        }
    return HypothesisReport(
        name="B",
        passed=passed,
        witness=witness,
        details={
            "b0": w.b0,
            "k_max": int(k_max),
            "coercive_from": w.b.coercive_from,
        },
    )


def check_primitive(nl, k_range, t_range, count, seed=0, h=1e-6):
    """Largest relative mismatch between central differences of F and f

    Levels closer than 10 h to a kink of f(k, .) are resampled.
    """
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _i in range(count):
        k = int(rng.integers(k_range[0], k_range[1] + 1))
        kinks = nl.kinks(k)
        t = float(rng.uniform(t_range[0], t_range[1]))
        while kinks.size and np.min(np.abs(kinks - t)) < 10.0 * h:
            t = float(rng.uniform(t_range[0], t_range[1]))
        central = (float(nl.F(k, t + h)) - float(nl.F(k, t - h))) / (2.0 * h)
        exact = float(nl.f(k, t))
        worst = max(worst, abs(central - exact) / max(1.0, abs(exact)))
    return worst


@dataclass
class BProbeReport:
    """Threshold-indexed lower estimates of B_+, B_-, B_0 and B"""

    b_plus: list
    b_minus: list
    b_zero: list
    k_thresholds: list
    t_thresholds: list
    k_grid: list
    t_grid: list
    b_plus_diverging: bool = False
    b_minus_diverging: bool = False
    b_zero_diverging: bool = False
    b_plus_est: float = 0.0
    b_minus_est: float = 0.0
    b_zero_est: float = 0.0
    b_est: float = 0.0
    b_zero_site: int = 0

    def as_dict(self):
        return {
            "B_plus": self.b_plus,
            "B_minus": self.b_minus,
            "B_zero": self.b_zero,
            "B_plus_est": self.b_plus_est,
            "B_minus_est": self.b_minus_est,
            "B_zero_est": self.b_zero_est,
            "B_est": self.b_est,
            "B_plus_diverging": self.b_plus_diverging,
            "B_minus_diverging": self.b_minus_diverging,
            "B_zero_diverging": self.b_zero_diverging,
            "B_zero_site": self.b_zero_site,
            "k_thresholds": self.k_thresholds,
            "t_thresholds": self.t_thresholds,
            "k_grid": self.k_grid,
            "t_grid": self.t_grid,
        }

    def hypotheses(self):
        """Which of the growth conditions show divergence evidence"""
        return {
            "F4_plus": self.b_plus_diverging,
            "F4_minus": self.b_minus_diverging,
            "F5": self.b_zero_diverging,
        }


def default_probe_grids(spec, k_max=32, t_count=64, k_thresholds=(1, 2, 4, 8)):
    """Sample grids for estimate_B

    The level grid holds every c_n and d_n up to n = k_max + 2 plus a
    geometric grid; the level thresholds are c_(k_i + 1).
    """
    k_grid = np.arange(-k_max, k_max + 1)
    n = np.arange(1, k_max + 3)
    c_lv = np.asarray(spec.c(n))
    d_lv = np.asarray(spec.d(n))
    geo = np.geomspace(0.5 * float(c_lv[0]), float(c_lv[-1]), t_count)
    t_grid = np.unique(np.concatenate((c_lv, d_lv, geo)))
    t_thresholds = [float(spec.c(k + 1)) for k in k_thresholds]
    return k_grid, t_grid, list(k_thresholds), t_thresholds


def _diverging(values):
    arr = np.asarray(values, dtype=float)
    return bool(arr.size > 1 and arr[-1] > 0 and np.all(np.diff(arr) > 0))


def estimate_B(nl, w, p, k_grid, t_grid, k_thresholds, t_thresholds):
    """Estimate the limsup quantities B_+, B_- and B_0 on finite grids

    With R(k, t) = F(k, t) / ((a(k+1) + a(k) + b(k)) t^p) and thresholds
    (k_i, t_i):

    - B_+[i] = max R over k_i <= k < k_(i+1), t >= t_i
    - B_-[i] = the same for -k
    - M[k, i] = max R at site k over t_i <= t < t_(i+1), for every k

    The last block is open towards the end of the grid. B_+ or B_- is
    reported as +inf (divergence evidence) when its block maxima strictly
    increase; otherwise the largest block maximum is a lower estimate.

    B_0 is judged site by site. It is +inf when the block maxima M[k, :] of
    any single site strictly increase. Otherwise a site contributes its
    ratio at the end of the grid when no larger value occurs in its last
    block, and 0 when the ratio is already falling there. A bump that has
    passed contributes nothing. The reported B_0 list holds the block
    maxima of the witness site b_zero_site.
    """
    k_arr = np.asarray(k_grid, dtype=np.int64)
    t_arr = np.asarray(t_grid, dtype=float)
    if np.any(np.diff(k_arr) <= 0) or np.any(np.diff(t_arr) <= 0):
        raise InvalidParameterError("Probe grids must be increasing")
    k_thr = [int(k) for k in k_thresholds]
    t_thr = [float(t) for t in t_thresholds]
    if len(k_thr) != len(t_thr) or not k_thr:
        raise InvalidParameterError("Thresholds must come in (k, t) pairs")
    scale = np.asarray(w.site_scale(k_arr))
    ratio = np.asarray(nl.F(k_arr[:, None], t_arr[None, :])) / (
        scale[:, None] * t_arr[None, :] ** float(p)
    )

    def block_max(rows, cols):
        if not np.any(rows) or not np.any(cols):
            return 0.0
        return float(np.max(ratio[np.ix_(rows, cols)]))

    b_plus, b_minus = [], []
    site_max = np.zeros((k_arr.size, len(t_thr)))
    for i, (k_lo, t_lo) in enumerate(zip(k_thr, t_thr)):
        last = i == len(k_thr) - 1
        k_hi = None if last else k_thr[i + 1]
        t_hi = None if last else t_thr[i + 1]
        cols_tail = t_arr >= t_lo
        plus_rows = (k_arr >= k_lo) & (True if last else k_arr < k_hi)
        minus_rows = (-k_arr >= k_lo) & (True if last else -k_arr < k_hi)
        b_plus.append(block_max(plus_rows, cols_tail))
        b_minus.append(block_max(minus_rows, cols_tail))
        cols_block = cols_tail & (True if last else t_arr < t_hi)
        if np.any(cols_block):
            site_max[:, i] = np.max(ratio[:, cols_block], axis=1)

    growing = np.all(np.diff(site_max, axis=1) > 0, axis=1) & (site_max[:, -1] > 0)
    if site_max.shape[1] < 2:
        growing[:] = False
    # a site keeps its end-of-grid ratio only if that ratio tops its last block
    end_ratio = ratio[:, -1]
    held = end_ratio >= site_max[:, -1] * (1.0 - 1e-12)
    sustained = np.where(held, end_ratio, 0.0)
    witness = int(np.argmax(growing)) if np.any(growing) else int(np.argmax(sustained))

    report = BProbeReport(
        b_plus=b_plus,
        b_minus=b_minus,
        b_zero=site_max[witness].tolist(),
        k_thresholds=k_thr,
        t_thresholds=t_thr,
        k_grid=[int(k_arr[0]), int(k_arr[-1])],
        t_grid=t_arr.tolist(),
        b_zero_site=int(k_arr[witness]),
    )
    report.b_plus_diverging = _diverging(b_plus)
    report.b_minus_diverging = _diverging(b_minus)
    report.b_zero_diverging = bool(np.any(growing))
    report.b_plus_est = math.inf if report.b_plus_diverging else max(b_plus)
    report.b_minus_est = math.inf if report.b_minus_diverging else max(b_minus)
    report.b_zero_est = (
        math.inf if report.b_zero_diverging else float(np.max(sustained))
    )
    report.b_est = max(report.b_plus_est, report.b_minus_est, report.b_zero_est)
    return report
