#!/usr/bin/env python3
#
############################################################################
#
# MODULE:      plap_solver
# AUTHOR(S):   m.plap.homoclinic developers
#
# PURPOSE:     Box-constrained minimization of J_lambda over W_n with spike
#              initialization, adaptive windows, the level sequence driver
#              and a brute-force grid oracle
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
from dataclasses import asdict, dataclass, field
from typing import NamedTuple

import grass.script as grass
import numpy as np
import psutil

from plap_energy import EnergyContext, check_lambda
from plap_errors import (
    InvalidParameterError,
    MaxIterExceeded,
    NonfiniteEnergy,
)
from plap_lattice import LatticeVec, norm_x

# slack of the bounds 0 <= u(k) <= c_n
BOUND_SLACK = 1e-10
# smallest line-search fraction before the search counts as stalled
MIN_ALPHA = 1e-16
# descent outcomes that count as a solved level
SOLVED_STATUSES = ("converged", "roundoff")
# BB step lengths are kept inside [STEP_MIN, STEP_MAX]
STEP_MIN = 1e-10
STEP_MAX = 1e10
# below p = 2, values this close to 0 are snapped to 0 when J does not grow
KINK_SNAP = 1e-12

BRUTE_FORCE_LIMIT = 10**7
BRUTE_FORCE_MAX_SITES = 5


@dataclass(frozen=True)
class BoxSet:
    """Box lower <= u(k) <= upper for every k, here for level n"""

    n: int
    lower: float
    upper: float

    def __post_init__(self):
        if not (math.isfinite(self.lower) and math.isfinite(self.upper)):
            raise InvalidParameterError("Box bounds must be finite")
        if self.lower > self.upper:
            raise InvalidParameterError(
                f"Empty box [{self.lower}, {self.upper}]",
            )

    @classmethod
    def for_level(cls, n, spec, r):
        """The set W_n = {u : r <= u(k) <= d_n}"""
        d_n = float(spec.d(n))
        if not r < 0:
            raise InvalidParameterError(f"The box needs r < 0, got r = {r}")
        if not d_n > 0:
            raise InvalidParameterError(f"The box needs d_n > 0, got {d_n}")
        return cls(n=int(n), lower=float(r), upper=d_n)

    def project(self, x):
        return np.clip(x, self.lower, self.upper)

    def contains(self, u, slack=0.0):
        vals = u.values
        return bool(
            np.all(vals >= self.lower - slack) and np.all(vals <= self.upper + slack),
        )


@dataclass(frozen=True)
class SolverParams:
    tol_pg: float = 1e-8
    tol_residual: float = 1e-6
    max_iter: "int | None" = None
    armijo_c: float = 1e-4
    backtrack: float = 0.5
    step0: float = 1.0
    window_K0: int = 16
    window_growth: float = 4.0
    tail_eps: float = 1e-8
    r: float = -1.0
    max_doublings: int = 3
    spike_search: int = 8

    def __post_init__(self):
        for name in ("tol_pg", "tol_residual", "step0", "tail_eps"):
            if not getattr(self, name) > 0:
                raise InvalidParameterError(f"Solver parameter {name} must be > 0")
        for name in ("armijo_c", "backtrack"):
            value = getattr(self, name)
            if not 0 < value < 1:
                raise InvalidParameterError(
                    f"Solver parameter {name} must lie in (0, 1), got {value}",
                )
        if self.max_iter is not None and self.max_iter < 1:
            raise InvalidParameterError("Solver parameter max_iter must be >= 1")
        if self.window_K0 < 1:
            raise InvalidParameterError("Solver parameter window_K0 must be >= 1")
        if not self.window_growth > 1:
            raise InvalidParameterError("Solver parameter window_growth must be > 1")
        if not self.r < 0:
            raise InvalidParameterError(f"Solver parameter r must be < 0, got {self.r}")
        if self.max_doublings < 0 or self.spike_search < 0:
            raise InvalidParameterError(
                "Solver parameters max_doublings and spike_search must be >= 0",
            )

    def iteration_budget(self, window_size):
        if self.max_iter is not None:
            return int(self.max_iter)
        return 50 * int(window_size)


class SpikeChoice(NamedTuple):
    k0: int
    t: float
    energy: float


@dataclass
class SolutionRecord:
    n: int
    u: LatticeVec
    eta: float
    norm_x: float
    u_max: float
    residual_inf: float
    pg_norm: float
    iterations: int
    window: tuple
    certificates: dict
    status: str = "converged"
    spike: "SpikeChoice | None" = None
    c_n: float = 0.0
    box: "BoxSet | None" = None
    lam: float = 1.0
    truncations: int = 0
    doublings: int = 0
    line_search: dict = field(default_factory=dict)

    @property
    def converged(self):
        return self.status in SOLVED_STATUSES

    @property
    def spike_bound(self):
        """s_n = min(0, spike energy of the selected spike)"""
        if self.spike is None:
            return 0.0
        return min(0.0, self.spike.energy)

    def summary_row(self):
        return {
            "n": self.n,
            "eta": self.eta,
            "norm_x": self.norm_x,
            "u_max": self.u_max,
            "residual_inf": self.residual_inf,
            "iterations": self.iterations,
            "window_lo": self.window[0],
            "window_hi": self.window[1],
        }

    def as_dict(self):
        return {
            "n": self.n,
            "offset": self.u.offset,
            "values": self.u.values.tolist(),
            "eta": self.eta,
            "norm_x": self.norm_x,
            "u_max": self.u_max,
            "residual_inf": self.residual_inf,
            "pg_norm": self.pg_norm,
            "iterations": self.iterations,
            "window": list(self.window),
            "certificates": dict(self.certificates),
            "status": self.status,
            "spike": None if self.spike is None else self.spike._asdict(),
            "c_n": self.c_n,
            "box": None if self.box is None else asdict(self.box),
            "lambda": self.lam,
            "truncations": self.truncations,
            "doublings": self.doublings,
            "line_search": dict(self.line_search),
        }

    @classmethod
    def from_dict(cls, data):
        spike = data.get("spike")
        box = data.get("box")
        return cls(
            n=int(data["n"]),
            u=LatticeVec(data["offset"], data["values"]),
            eta=float(data["eta"]),
            norm_x=float(data["norm_x"]),
            u_max=float(data["u_max"]),
            residual_inf=float(data["residual_inf"]),
            pg_norm=float(data["pg_norm"]),
            iterations=int(data["iterations"]),
            window=tuple(data["window"]),
            certificates=dict(data["certificates"]),
            status=data["status"],
            spike=None if spike is None else SpikeChoice(**spike),
            c_n=float(data["c_n"]),
            box=None if box is None else BoxSet(**box),
            lam=float(data["lambda"]),
            truncations=int(data["truncations"]),
            doublings=int(data["doublings"]),
            line_search=dict(data["line_search"]),
        )


def spike_energy(k0, t, w, p, nl, lam):
    """J_lambda of the spike u(k0) = t, u = 0 elsewhere

    (1/p)(a(k0+1) + a(k0) + b(k0)) t^p - lambda F(k0, t)
    """
    lam = check_lambda(lam)
    if t == 0:
        return 0.0
    scale = float(w.site_scale(k0))
    return scale * abs(float(t)) ** float(p) / float(p) - lam * float(nl.F(k0, t))


def spike_levels(n, spec):
    """Trial levels {c_1..c_(n+1), d_1..d_n, d_n} cut to t <= d_n"""
    idx = np.arange(1, n + 2)
    d_n = float(spec.d(n))
    levels = np.concatenate(
        (np.asarray(spec.c(idx)), np.asarray(spec.d(idx[:-1])), [d_n]),
    )
    return np.unique(levels[(levels > 0) & (levels <= d_n)])


def select_spike(n, spec, w, p, nl, lam, k_search):
    """Lowest-energy spike over |k0| <= k_search and the trial levels

    Ties go to the smaller |k0|, then the smaller k0, then the smaller t.

    Returns:
        (SpikeChoice): k0, t and the spike energy
    """
    lam = check_lambda(lam)
    levels = spike_levels(n, spec)
    ks = np.arange(-int(k_search), int(k_search) + 1)
    scale = np.asarray(w.site_scale(ks))
    energies = (
        scale[:, None] * levels[None, :] ** float(p) / float(p)
        - lam * np.asarray(nl.F(ks[:, None], levels[None, :]))
    )
    best = min(
        (float(energies[i, j]), abs(int(k)), int(k), float(levels[j]))
        for i, k in enumerate(ks)
        for j in range(levels.size)
    )
    return SpikeChoice(k0=best[2], t=best[3], energy=best[0])


def window_select(n, spec, k0, params):
    """Window holding k0 and 0 with margin max(K0, ceil(growth n)) per side"""
    margin = max(int(params.window_K0), math.ceil(params.window_growth * n))
    return (min(k0, 0) - margin, max(k0, 0) + margin)


def _doubled(window):
    width = window[1] - window[0]
    grow = math.ceil(width / 2)
    return (window[0] - grow, window[1] + grow)


def _descend(energy, x0, box, params, c_n, truncate):
    """Projected gradient with Barzilai-Borwein trial steps

    The search runs along d = P(x - s D g) - x with monotone Armijo
    backtracking on the change of J, evaluated term by term. D is the
    identity for p >= 2. Below p = 2 it is the inverse diagonal of the
    Hessian of Phi, so entries close to a kink of |v|^p move on their
    own scale. Only steps with a strict decrease of J are accepted.

    Returns:
        (tuple): x, iterations, status and the line-search statistics;
                 status is one of converged, roundoff, stalled, max_iter
    """
    p = energy.p
    scaled = p < 2
    budget = params.iteration_budget(energy.size)
    x = box.project(np.asarray(x0, dtype=float))
    j = energy.value(x)
    g = energy.gradient(x)
    step = params.step0
    stats = {
        "armijo_steps": 0,
        "descent_ok": True,
        "min_decrease": None,
        "truncations": 0,
        "snaps": 0,
    }
    status = "max_iter"
    iterations = 0
    for iterations in range(1, budget + 1):  # noqa: B007
        pg = float(np.max(np.abs(box.project(x - g) - x)))
        if pg <= params.tol_pg:
            status = "converged"
            iterations -= 1
            break
        metric = 1.0 / energy.curvature(x) if scaled else 1.0
        d = box.project(x - step * metric * g) - x
        slope = float(np.dot(g, d))
        if not slope < 0:
            # the BB step overshot into a face; restart with the plain step
            step = params.step0
            d = box.project(x - step * metric * g) - x
            slope = float(np.dot(g, d))
        alpha = 1.0
        while True:
            x_new = x + alpha * d
            change = energy.change(x, x_new)
            if change < 0 and change <= params.armijo_c * alpha * slope:
                break
            alpha *= params.backtrack
            if alpha < MIN_ALPHA:
                # no representable decrease left along d
                status = "roundoff" if pg <= params.tol_residual else "stalled"
                break
        if status != "max_iter":
            grass.debug(
                f"Line search ended as {status} at iteration {iterations}, "
                f"pg = {pg:.3e}",
                2,
            )
            break
        stats["armijo_steps"] += 1
        if truncate:
            cut = np.clip(x_new, 0.0, c_n)
            if not np.array_equal(cut, x_new):
                extra = energy.change(x_new, cut)
                if extra <= 0:
                    x_new, change = cut, change + extra
                    stats["truncations"] += 1
        if p < 2:
            snapped = np.where(np.abs(x_new) < KINK_SNAP, 0.0, x_new)
            if not np.array_equal(snapped, x_new):
                extra = energy.change(x_new, snapped)
                if extra <= 0:
                    x_new, change = snapped, change + extra
                    stats["snaps"] += 1
        if not change < 0:
            stats["descent_ok"] = False
        if stats["min_decrease"] is None or -change < stats["min_decrease"]:
            stats["min_decrease"] = -change
        j_new = energy.value(x_new)
        g_new = energy.gradient(x_new)
        s_vec = x_new - x
        y_vec = g_new - g
        sy = float(np.dot(s_vec, y_vec))
        if sy > 0:
            ss = float(np.dot(s_vec, s_vec / metric))
            step = min(max(ss / sy, STEP_MIN), STEP_MAX)
        else:
            step = params.step0
        grass.debug(
            f"iter {iterations}: J = {j_new!r}, dJ = {change!r}, pg = {pg:.3e}, "
            f"alpha = {alpha:.3e}, next step = {step:.3e}",
            2,
        )
        x, j, g = x_new, j_new, g_new
    return x, iterations, status, stats


def certify(u, n, box, ctx, params, c_n):
    """Recompute J, the norms and the certificates of a candidate u

    Returns:
        (dict): eta, norm_x, u_max, residual_inf, pg_norm and the three
                certificate booleans
    """
    eta = ctx.j(u)
    grad = ctx.gradient(u)
    vals = grad.values
    u_pad = u.on_window(grad.kmin, grad.kmax)
    inactive = (u_pad > box.lower) & (u_pad < box.upper)
    residual_inf = float(np.max(np.abs(vals[inactive]))) if np.any(inactive) else 0.0
    pg_norm = float(np.max(np.abs(box.project(u_pad - vals) - u_pad)))
    tail = max(abs(u.values[0]), abs(u.values[-1]))
    return {
        "eta": eta,
        "norm_x": norm_x(u, ctx.weights, ctx.p),
        "u_max": float(np.max(u.values)),
        "residual_inf": residual_inf,
        "pg_norm": pg_norm,
        "certificates": {
            "claim2_bounds": bool(
                np.min(u.values) >= -BOUND_SLACK
                and np.max(u.values) <= c_n + BOUND_SLACK,
            ),
            "residual_ok": residual_inf <= params.tol_residual,
            "tail_ok": bool(tail <= params.tail_eps),
        },
    }


def minimize_on_Wn(n, lam, spec, nl, w, p, params):
    """Minimize J_lambda over W_n starting from the best spike

    Args:
        n (int): Level, n >= 1
        lam (float): lambda > 0
        spec (OscillatorySpec): Sequences c_n, d_n, h_n
        nl (Nonlinearity): The nonlinearity f
        w (WeightPair): Weights a and b
        p (float): Exponent
        params (SolverParams): Tolerances and window rules

    Returns:
        (SolutionRecord): Certified record of the minimizer found

    Raises:
        MaxIterExceeded: Carries the record of the best iterate
        NonfiniteEnergy: If J or its gradient is not finite
    """
    lam = check_lambda(lam)
    if not nl.continuous:
        raise InvalidParameterError(f"Nonlinearity <{nl.name}> is not continuous")
    truncate = bool(nl.vanishes_nonpositive)
    if not truncate:
        grass.warning(
            _(
                f"Nonlinearity <{nl.name}> is not flagged to vanish for "
                "t <= 0, the truncation step is skipped",
            ),
        )
    box = BoxSet.for_level(n, spec, params.r)
    c_n = float(spec.c(n))
    ctx = EnergyContext(w, float(p), nl, lam)
    spike = select_spike(
        n,
        spec,
        w,
        p,
        nl,
        lam,
        max(params.spike_search, n + 1),
    )
    window = window_select(n, spec, spike.k0, params)
    start = LatticeVec.zeros(*window)
    if spike.energy < 0:
        start = LatticeVec.spike(spike.k0, spike.t, window)

    total_iter = 0
    doublings = 0
    stats_total = {
        "armijo_steps": 0,
        "truncations": 0,
        "snaps": 0,
        "descent_ok": True,
        "min_decrease": None,
    }
    while True:
        energy = ctx.on_window(*window)
        x0 = start.on_window(*window)
        x, iterations, status, stats = _descend(
            energy,
            x0,
            box,
            params,
            c_n,
            truncate,
        )
        total_iter += iterations
        for key in ("armijo_steps", "truncations", "snaps"):
            stats_total[key] += stats[key]
        stats_total["descent_ok"] = stats_total["descent_ok"] and stats["descent_ok"]
        decreases = [
            v for v in (stats_total["min_decrease"], stats["min_decrease"]) if v is not None
        ]
        stats_total["min_decrease"] = min(decreases) if decreases else None
        u = LatticeVec(window[0], x)
        tail = max(abs(x[0]), abs(x[-1]))
        if tail <= params.tail_eps or doublings >= params.max_doublings:
            break
        grass.warning(
            _(
                f"Level {n}: tail {tail:.3e} above {params.tail_eps:.1e} on "
                f"window {window}, doubling the window",
            ),
        )
        start = u
        window = _doubled(window)
        doublings += 1

    fresh = certify(u, n, box, ctx, params, c_n)
    if fresh["eta"] > spike.energy + BOUND_SLACK and spike.energy < 0:
        grass.warning(
            _(f"Level {n}: minimizer does not beat its spike initializer"),
        )
    record = SolutionRecord(
        n=int(n),
        u=u,
        eta=fresh["eta"],
        norm_x=fresh["norm_x"],
        u_max=fresh["u_max"],
        residual_inf=fresh["residual_inf"],
        pg_norm=fresh["pg_norm"],
        iterations=total_iter,
        window=window,
        certificates=fresh["certificates"],
        status=status,
        spike=spike,
        c_n=c_n,
        box=box,
        lam=lam,
        truncations=stats_total["truncations"],
        doublings=doublings,
        line_search={
            "armijo_steps": stats_total["armijo_steps"],
            "descent_ok": stats_total["descent_ok"],
            "min_decrease": stats_total["min_decrease"],
            "snaps": stats_total["snaps"],
        },
    )
    grass.verbose(
        _(
            f"Level {n}: eta = {record.eta!r}, ||u|| = {record.norm_x!r}, "
            f"{total_iter} iterations on window {window}",
        ),
    )
    if not record.converged:
        raise MaxIterExceeded(record)
    return record


@dataclass
class SequenceResult:
    """Records of a level sequence with per-level failures"""

    records: list
    failures: dict = field(default_factory=dict)

    @property
    def degenerate(self):
        return bool(self.records) and all(
            rec.eta == 0 and rec.norm_x == 0 for rec in self.records
        )

    @property
    def eta_dropped(self):
        return len(self.records) >= 2 and self.records[-1].eta < self.records[0].eta

    @property
    def norm_grew(self):
        return (
            len(self.records) >= 2
            and self.records[-1].norm_x > self.records[0].norm_x
        )

    def summary(self):
        return {
            "levels": [rec.n for rec in self.records],
            "failures": {str(n): msg for n, msg in sorted(self.failures.items())},
            "degenerate": self.degenerate,
            "eta_dropped": self.eta_dropped,
            "norm_grew": self.norm_grew,
        }


def run_sequence(N, lam, spec, nl, w, p, params):
    """Solve levels n = 1..N one after another

    A failing level is stored in the failures and does not stop later
    levels; non-converged records are kept as well.
    """
    if N < 1:
        raise InvalidParameterError(f"N must be >= 1, got {N}")
    lam = check_lambda(lam)
    result = SequenceResult(records=[])
    for n in range(1, N + 1):
        try:
            result.records.append(minimize_on_Wn(n, lam, spec, nl, w, p, params))
        except MaxIterExceeded as exc:
            result.records.append(exc.record)
            result.failures[n] = str(exc)
        except NonfiniteEnergy as exc:
            result.failures[n] = str(exc)
    if result.degenerate:
        grass.warning(_("All levels returned u = 0, the sequence is degenerate"))
    return result


def _chunk_size(sites):
    """Combinations per chunk so that the work arrays fit into free memory"""
    available = psutil.virtual_memory().available
    per_combination = 16 * 8 * (sites + 2)
    return int(min(max(available // (4 * per_combination), 1_000), 1_000_000))


def brute_force_min(window, value_grid, lam, nl, w, p, box):
    """Exhaustive minimum of J_lambda over a level grid on a small window

    The grid is projected onto the box first, so a degenerate box still
    has its single point as candidate.

    Args:
        window (tuple): (kmin, kmax) with at most 5 sites
        value_grid (list): Levels each site may take

    Returns:
        (LatticeVec): The grid minimizer u*
        (float): J_lambda(u*)
    """
    lam = check_lambda(lam)
    kmin, kmax = int(window[0]), int(window[1])
    sites = kmax - kmin + 1
    if not 1 <= sites <= BRUTE_FORCE_MAX_SITES:
        raise InvalidParameterError(
            f"Brute force works on 1 to {BRUTE_FORCE_MAX_SITES} sites, got {sites}",
        )
    levels = np.unique(box.project(np.asarray(value_grid, dtype=float)))
    total = levels.size**sites
    if total > BRUTE_FORCE_LIMIT:
        raise InvalidParameterError(
            f"{total} grid combinations exceed the limit of {BRUTE_FORCE_LIMIT}",
        )
    ks = np.arange(kmin, kmax + 1)
    a_ext = np.asarray(w.a(np.arange(kmin, kmax + 2)))
    b_vals = np.asarray(w.b(ks))
    pf = float(p)
    chunk = _chunk_size(sites)
    best_j = math.inf
    best_idx = 0
    for start in range(0, total, chunk):
        flat = np.arange(start, min(start + chunk, total))
        digits = np.unravel_index(flat, (levels.size,) * sites)
        X = np.stack([levels[dig] for dig in digits], axis=1)
        diffs = np.diff(np.pad(X, ((0, 0), (1, 1))), axis=1)
        phi = (
            np.sum(a_ext * np.abs(diffs) ** pf, axis=1)
            + np.sum(b_vals * np.abs(X) ** pf, axis=1)
        ) / pf
        psi = np.sum(np.asarray(nl.F(ks[None, :], X)), axis=1)
        j_vals = phi - lam * psi
        pos = int(np.argmin(j_vals))
        if j_vals[pos] < best_j:
            best_j = float(j_vals[pos])
            best_idx = int(flat[pos])
    digits = np.unravel_index(best_idx, (levels.size,) * sites)
    u_star = LatticeVec(kmin, [levels[dig] for dig in digits])
    j_star = EnergyContext(w, pf, nl, lam).j(u_star)
    return u_star, j_star
