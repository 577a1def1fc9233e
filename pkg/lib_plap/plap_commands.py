#!/usr/bin/env python3
#
############################################################################
#
# MODULE:      plap_commands
# AUTHOR(S):   m.plap.homoclinic developers
#
# PURPOSE:     Bodies of the solve, probe and gradcheck commands: run the
#              library on a validated configuration and write the artifacts
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

import os

import grass.script as grass
import numpy as np

from plap_config import VERSION
from plap_energy import fd_gradient_check
from plap_errors import (
    EXIT_CLAIM_FAILURE,
    EXIT_OK,
    EXIT_SOLVER_FAILURE,
)
from plap_lattice import LatticeVec
from plap_nonlinearity import (
    check_F1,
    check_F2,
    check_F3,
    check_vanishes_nonpositive,
    check_weights,
    default_probe_grids,
    estimate_B,
    superlinear_ratio,
)
from plap_output import write_json, write_solutions, write_summary
from plap_verification import ClaimId, claim_suite, verify_lambda_threshold

# (k, t) pairs of the growth ratio f(k, t) t / |t|^p in probe.json
GROWTH_SAMPLES = ((1, 1.0), (1, 10.0), (10, 10.0), (100, 10.0), (100, 100.0))
# resampling attempts for kink-free gradcheck vectors
MAX_RESAMPLE = 1000


def b_probe(cfg):
    """estimate_B on the default grids of the configuration"""
    k_grid, t_grid, k_thr, t_thr = default_probe_grids(
        cfg.spec,
        k_max=cfg.probe.k_max,
        t_count=cfg.probe.t_count,
        k_thresholds=cfg.probe.k_thresholds,
    )
    return estimate_B(
        cfg.nonlinearity,
        cfg.weights,
        cfg.p,
        k_grid,
        t_grid,
        k_thr,
        t_thr,
    )


def run_probe(cfg):
    """Hypothesis probes, B estimates and the lambda verdict

    Returns:
        (dict): Content of probe.json
    """
    nl = cfg.nonlinearity
    k_range = (-cfg.probe.k_max, cfg.probe.k_max)
    grass.message(_(f"Probing hypotheses of nonlinearity <{nl.name}>..."))
    hypotheses = [
        check_weights(cfg.weights, cfg.probe.k_max),
        check_vanishes_nonpositive(nl, cfg.solver.r, k_range),
        check_F1(nl, cfg.p, cfg.probe.f1_grid, k_range),
        check_F2(
            nl,
            cfg.spec,
            cfg.probe.samples_per_interval,
            k_range,
            cfg.probe.levels,
        ),
    ]
    f3_reports = [
        check_F3(nl, cfg.spec, cfg.solver.r, cfg.probe.levels, int(K))
        for K in cfg.probe.f3_K
    ]
    report = b_probe(cfg)
    verdict = verify_lambda_threshold(cfg.lam, cfg.p, report)
    for hyp in [*hypotheses, *f3_reports]:
        if hyp.passed:
            grass.verbose(_(f"Hypothesis {hyp.name} passed"))
        else:
            grass.warning(_(f"Hypothesis {hyp.name} failed: {hyp.witness}"))
    return {
        "version": VERSION,
        "config": cfg.echo,
        "nonlinearity": nl.describe(),
        "hypotheses": {hyp.name: hyp.as_dict() for hyp in hypotheses},
        "F3": [hyp.as_dict() for hyp in f3_reports],
        "B": report.as_dict(),
        "growth_conditions": report.hypotheses(),
        "lambda_threshold": verdict.as_dict(),
        "growth_ratio": [
            {
                "k": k,
                "t": t,
                "ratio": superlinear_ratio(nl, cfg.p, k, t),
            }
            for k, t in GROWTH_SAMPLES
        ],
    }


def _kink_free(values, ks, nl, p, h):
    """True if no entry or (for p < 2) difference sits within 10 h of a kink"""
    margin = 10.0 * h
    for k, val in zip(ks, values):
        kinks = nl.kinks(int(k))
        if kinks.size and np.min(np.abs(kinks - val)) < margin:
            return False
    if p < 2:
        diffs = np.diff(np.concatenate(([0.0], values, [0.0])))
        if np.min(np.abs(values)) < margin or np.min(np.abs(diffs)) < margin:
            return False
    return True


def run_gradcheck(cfg):
    """Central differences of J against grad_J on seeded random vectors

    Returns:
        (dict): Content of gradcheck.json
        (int): Exit code, 0 iff the largest error is within tolerance
    """
    settings = cfg.gradcheck
    rng = np.random.default_rng(cfg.seed)
    half = settings.window // 2
    ks = np.arange(-half, -half + settings.window)
    tolerance = settings.tolerance if cfg.p >= 2 else settings.tolerance_kink
    errors = []
    resampled = 0
    for _i in range(settings.vectors):
        values = rng.uniform(settings.low, settings.high, ks.size)
        attempts = 0
        while not _kink_free(values, ks, cfg.nonlinearity, cfg.p, settings.h):
            attempts += 1
            if attempts > MAX_RESAMPLE:
                grass.fatal(_("Could not draw a kink-free gradcheck vector"))
            values = rng.uniform(settings.low, settings.high, ks.size)
        resampled += attempts
        u = LatticeVec(int(ks[0]), values)
        errors.append(
            fd_gradient_check(
                u,
                cfg.weights,
                cfg.p,
                cfg.nonlinearity,
                cfg.lam,
                settings.h,
            ),
        )
    worst = int(np.argmax(errors))
    max_error = float(errors[worst])
    passed = max_error <= tolerance
    doc = {
        "version": VERSION,
        "config": cfg.echo,
        "p": cfg.p,
        "vectors": settings.vectors,
        "window": [int(ks[0]), int(ks[-1])],
        "h": settings.h,
        "max_rel_error": max_error,
        "worst_vector": worst,
        "resampled": resampled,
        "tolerance": tolerance,
        "pass": passed,
    }
    grass.message(_(f"Largest relative gradient error: {max_error:.3e}"))
    return doc, EXIT_OK if passed else EXIT_CLAIM_FAILURE


def finish_solve(cfg, records, failures):
    """Certify the records of a solve run and write its three artifacts

    Args:
        cfg (RunConfig): The run configuration
        records (list): SolutionRecords in level order
        failures (dict): level -> message of levels that failed

    Returns:
        (int): Exit code of the solve command
    """
    output_dir = cfg.output_dir
    os.makedirs(output_dir, exist_ok=True)
    reports = claim_suite(
        records,
        cfg.spec,
        cfg.weights,
        cfg.p,
        cfg.nonlinearity,
        cfg.lam,
        cfg.solver,
    )
    b_report = b_probe(cfg)
    reports.append(verify_lambda_threshold(cfg.lam, cfg.p, b_report))

    claim_flags = {}
    for rep in reports:
        if rep.n is None:
            continue
        c2, c3 = claim_flags.get(rep.n, (True, True))
        if rep.claim_id == ClaimId.C2_BOUNDS:
            c2 = rep.passed
        elif rep.claim_id == ClaimId.C3_CRITICAL:
            c3 = rep.passed
        claim_flags[rep.n] = (c2, c3)

    write_solutions(os.path.join(output_dir, "solutions.csv"), records)
    write_summary(os.path.join(output_dir, "summary.csv"), records, claim_flags)
    write_json(
        os.path.join(output_dir, "report.json"),
        {
            "version": VERSION,
            "config": cfg.echo,
            "records": [
                {
                    **rec.summary_row(),
                    "status": rec.status,
                    "pg_norm": rec.pg_norm,
                    "spike": rec.spike._asdict() if rec.spike else None,
                    "spike_bound": rec.spike_bound,
                    "certificates": rec.certificates,
                    "truncations": rec.truncations,
                    "doublings": rec.doublings,
                    "line_search": rec.line_search,
                }
                for rec in records
            ],
            "claims": [rep.as_dict() for rep in reports],
            "B": b_report.as_dict(),
            "failures": {str(n): msg for n, msg in sorted(failures.items())},
        },
    )

    if failures or not all(rec.converged for rec in records):
        for n, msg in sorted(failures.items()):
            grass.warning(_(f"Level {n} failed: {msg}"))
        return EXIT_SOLVER_FAILURE
    failed = [rep for rep in reports if not rep.passed]
    for rep in failed:
        where = f" at level {rep.n}" if rep.n is not None else ""
        grass.warning(
            _(f"Claim {rep.claim_id.value}{where} failed. {rep.note}".strip()),
        )
    if failed:
        return EXIT_CLAIM_FAILURE
    grass.message(_(f"All claims passed for {len(records)} levels"))
    return EXIT_OK
