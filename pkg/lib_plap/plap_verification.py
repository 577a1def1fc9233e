#!/usr/bin/env python3
#
############################################################################
#
# MODULE:      plap_verification
# AUTHOR(S):   m.plap.homoclinic developers
#
# PURPOSE:     Recompute-and-certify checks over solution records: bounds,
#              critical points, energy divergence, norm growth, the
#              embedding chain and the lambda threshold
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
from enum import Enum

import numpy as np

from plap_energy import EnergyContext, check_lambda
from plap_errors import InsufficientData
from plap_lattice import embedding_check, norm_x
from plap_solver import BOUND_SLACK, BoxSet, select_spike

DEGENERATE_NOTE = "degenerate: B = 0 regime, theorem hypotheses unmet"
FINITE_SURROGATE_NOTE = (
    "finite-N surrogate: strict growth over the computed levels only"
)


class ClaimId(Enum):
    C1_BOUNDED_BELOW = "C1_bounded_below"
    C2_BOUNDS = "C2_bounds"
    C3_CRITICAL = "C3_critical"
    C4_ETA_DIVERGENCE = "C4_eta_divergence"
    T2_NORM_GROWTH = "T2_norm_growth"
    EMB_INEQUALITY = "EMB_inequality"
    LAMBDA_THRESHOLD = "lambda_threshold"


@dataclass
class ClaimReport:
    claim_id: ClaimId
    passed: bool
    witness: dict = field(default_factory=dict)
    note: str = ""
    exempt: bool = False
    n: "int | None" = None

    def as_dict(self):
        return {
            "claim_id": self.claim_id.value,
            "n": self.n,
            "pass": self.passed,
            "witness": self.witness,
            "note": self.note,
            "exempt": self.exempt,
        }


def spike_bound(n, spec, w, p, nl, lam, k_search=8):
    """s_n = min(0, lowest spike energy admissible in W_n)"""
    choice = select_spike(n, spec, w, p, nl, lam, max(k_search, n + 1))
    return min(0.0, choice.energy)


def verify_claim1(rec, spec, ctx, r, k_search=8):
    """Computational consequence of the attained infimum

    The record lies in W_n and its energy is at most the spike bound s_n.
    """
    box = BoxSet.for_level(rec.n, spec, r)
    eta = ctx.j(rec.u)
    bound = spike_bound(
        rec.n, spec, ctx.weights, ctx.p, ctx.nonlinearity, ctx.lam, k_search,
    )
    feasible = box.contains(rec.u)
    passed = feasible and eta <= bound + BOUND_SLACK
    return ClaimReport(
        ClaimId.C1_BOUNDED_BELOW,
        passed,
        witness={"eta": eta, "spike_bound": bound, "feasible": feasible},
        note="feasible point at or below the spike bound, not the infimum",
        n=rec.n,
    )


def verify_claim2(rec, spec):
    """0 <= u(k) <= c_n for every k, up to BOUND_SLACK"""
    c_n = float(spec.c(rec.n))
    vals = rec.u.values
    excess = np.maximum(-vals, vals - c_n)
    worst = int(np.argmax(excess))
    margin = float(excess[worst])
    passed = float(np.min(vals)) >= -BOUND_SLACK and float(
        np.max(vals),
    ) <= c_n + BOUND_SLACK
    return ClaimReport(
        ClaimId.C2_BOUNDS,
        bool(passed),
        witness={
            "k": int(rec.u.kmin + worst),
            "value": float(vals[worst]),
            "margin": margin,
            "c_n": c_n,
        },
        n=rec.n,
    )


def verify_claim3(rec, ctx, params, box=None):
    """Residual bound at box-inactive indices and tail certificate"""
    box = box or rec.box
    grad = ctx.gradient(rec.u)
    u_pad = rec.u.on_window(grad.kmin, grad.kmax)
    if box is None:
        inactive = np.ones(u_pad.size, dtype=bool)
    else:
        inactive = (u_pad > box.lower) & (u_pad < box.upper)
    residual = np.where(inactive, np.abs(grad.values), 0.0)
    worst = int(np.argmax(residual))
    residual_inf = float(residual[worst])
    tail = float(max(abs(rec.u.values[0]), abs(rec.u.values[-1])))
    residual_ok = residual_inf <= params.tol_residual
    tail_ok = tail <= params.tail_eps
    return ClaimReport(
        ClaimId.C3_CRITICAL,
        bool(residual_ok and tail_ok),
        witness={
            "k": int(grad.kmin + worst),
            "residual": residual_inf,
            "tail": tail,
            "residual_ok": bool(residual_ok),
            "tail_ok": bool(tail_ok),
        },
        n=rec.n,
    )


def verify_claim4(records, spec, w, p, nl, lam, k_search=8):
    """eta_n nonincreasing, eta_n <= s_n for every n and eta_N < eta_1

    Raises:
        InsufficientData: For fewer than two records
    """
    if len(records) < 2:
        raise InsufficientData(
            f"Energy divergence needs at least 2 records, got {len(records)}",
        )
    lam = check_lambda(lam)
    ctx = EnergyContext(w, float(p), nl, lam)
    levels = [rec.n for rec in records]
    etas = [ctx.j(rec.u) for rec in records]
    bounds = [spike_bound(n, spec, w, p, nl, lam, k_search) for n in levels]
    nonincreasing = all(
        later <= earlier + BOUND_SLACK for earlier, later in zip(etas, etas[1:])
    )
    strictly = all(later < earlier for earlier, later in zip(etas, etas[1:]))
    below = [eta <= s_n + BOUND_SLACK for eta, s_n in zip(etas, bounds)]
    dropped = etas[-1] < etas[0]
    slope = float(np.polyfit(np.asarray(levels, dtype=float), etas, 1)[0])
    witness = {
        "n": levels,
        "eta": etas,
        "spike_bound": bounds,
        "nonincreasing": nonincreasing,
        "strictly_decreasing": strictly,
        "eta_slope": slope,
    }
    if not all(below):
        witness["first_above_bound"] = levels[below.index(False)]
    note = ""
    if all(eta == 0 for eta in etas):
        note = DEGENERATE_NOTE
    return ClaimReport(
        ClaimId.C4_ETA_DIVERGENCE,
        bool(nonincreasing and all(below) and dropped),
        witness=witness,
        note=note,
    )


def verify_norm_growth(records, w, p):
    """Strict growth of ||u_n|| across records with distinct energies

    Consecutive records with equal eta are exempt; a run in which every
    pair is exempt is flagged exempt and does not pass.
    """
    if len(records) < 2:
        raise InsufficientData(
            f"Norm growth needs at least 2 records, got {len(records)}",
        )
    levels = [rec.n for rec in records]
    if any(later <= earlier for earlier, later in zip(levels, levels[1:])):
        return ClaimReport(
            ClaimId.T2_NORM_GROWTH,
            False,
            witness={"n": levels},
            note="records are not in increasing level order",
        )
    norms = [norm_x(rec.u, w, p) for rec in records]
    exempt_pairs = []
    failed_pairs = []
    for i in range(len(records) - 1):
        if records[i].eta == records[i + 1].eta:
            exempt_pairs.append([levels[i], levels[i + 1]])
        elif not norms[i + 1] > norms[i]:
            failed_pairs.append([levels[i], levels[i + 1]])
    all_exempt = len(exempt_pairs) == len(records) - 1
    passed = not failed_pairs and not all_exempt
    return ClaimReport(
        ClaimId.T2_NORM_GROWTH,
        passed,
        witness={
            "n": levels,
            "norm_x": norms,
            "exempt_pairs": exempt_pairs,
            "failed_pairs": failed_pairs,
        },
        note=DEGENERATE_NOTE if all_exempt else FINITE_SURROGATE_NOTE,
        exempt=all_exempt,
    )


def verify_embedding(rec, w, p):
    holds, (linf, lp, bound) = embedding_check(rec.u, w, p)
    return ClaimReport(
        ClaimId.EMB_INEQUALITY,
        holds,
        witness={"linf": linf, "lp": lp, "bound": bound},
        n=rec.n,
    )


def verify_lambda_threshold(lam, p, b_report):
    """Does lambda exceed 1 / (B p) under the sampled lower estimate of B?

    Divergence evidence (B = +inf) admits every lambda > 0.
    """
    lam = check_lambda(lam)
    b_est = b_report.b_est
    witness = {"lambda": lam, "B_est": b_est, "p": float(p)}
    if math.isinf(b_est) and b_est > 0:
        witness["threshold"] = 0.0
        return ClaimReport(
            ClaimId.LAMBDA_THRESHOLD,
            True,
            witness=witness,
            note="B = +inf evidence: every lambda > 0 qualifies",
        )
    if not b_est > 0:
        witness["threshold"] = math.inf
        return ClaimReport(
            ClaimId.LAMBDA_THRESHOLD,
            False,
            witness=witness,
            note="hypothesis regime unmet: B estimate is not positive",
        )
    threshold = 1.0 / (b_est * float(p))
    witness["threshold"] = threshold
    return ClaimReport(ClaimId.LAMBDA_THRESHOLD, lam > threshold, witness=witness)


def claim_suite(records, spec, w, p, nl, lam, params):
    """All record-level and sequence-level reports of a solve run"""
    ctx = EnergyContext(w, float(p), nl, lam)
    reports = []
    for rec in records:
        box = BoxSet.for_level(rec.n, spec, params.r)
        reports.append(verify_claim1(rec, spec, ctx, params.r, params.spike_search))
        reports.append(verify_claim2(rec, spec))
        reports.append(verify_claim3(rec, ctx, params, box))
        reports.append(verify_embedding(rec, w, p))
    try:
        reports.append(
            verify_claim4(records, spec, w, p, nl, lam, params.spike_search),
        )
        reports.append(verify_norm_growth(records, w, p))
    except InsufficientData as exc:
        for claim in (ClaimId.C4_ETA_DIVERGENCE, ClaimId.T2_NORM_GROWTH):
            reports.append(ClaimReport(claim, False, note=str(exc)))
    return reports
