"""Run an experiment sweep over (x, y, rho) cells."""

from __future__ import annotations

import logging
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from pathlib import Path

import numpy as np

from .. import arcs, bounds, expsum, moments
from ..errors import BoundViolation, SmoothMomentsError
from ..smooth_core import K_from_y, exponent_params, sieve_smooth, y_from_K
from .config import ExperimentConfig
from .plot import write_svg
from .rows import ResultRow, read_csv, read_jsonl, write_csv, write_jsonl

log = logging.getLogger(__name__)

THREADS_ENV = "SMOOTH_MOMENTS_THREADS"
AUTO_REL_TOL = 1e-8
PARSEVAL_REL_TOL = 1e-9


def thread_count() -> int:
    v = os.environ.get(THREADS_ENV)
    if v:
        try:
            return max(1, int(v))
        except ValueError:
            log.warning("ignoring non-integer %s=%r", THREADS_ENV, v)
    return min(4, os.cpu_count() or 1)


def _rat_str(f: Fraction) -> str:
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def _cells(cfg: ExperimentConfig):
    for x in cfg.x_values:
        if cfg.K_values is not None:
            for K in cfg.K_values:
                y = y_from_K(x, K)
                for rho in cfg.rho_values:
                    yield x, y, K, _rat_str(K), rho
        else:
            for y in cfg.y_values:
                Keff = K_from_y(x, y)
                K = Fraction(Keff).limit_denominator(10**6) if Keff is not None else None
                label = format(Keff, ".17g") if Keff is not None else None
                for rho in cfg.rho_values:
                    yield x, y, K, label, rho


def compute_moment(s_set, rho: Fraction, policy) -> moments.MomentResult:
    """Moment according to a grid policy (see the README for the ``auto`` rule)."""
    s = moments.even_integer(rho)
    if policy.mode == "fixed":
        return moments.moment_quadrature(s_set, float(rho), policy.N)
    if policy.mode == "refined":
        return moments.moment_refined(s_set, float(rho), policy.rel_tol)
    if s is not None:
        try:
            return moments.even_moment_exact(s_set, s)
        except SmoothMomentsError:
            return moments.moment_quadrature(
                s_set, float(rho), moments.alias_free_size(s_set.x, s)
            )
    return moments.moment_refined(s_set, float(rho), AUTO_REL_TOL)


def _log_ratio(v, base):
    if v is None or base is None or base <= 1 or not v > 0 or math.isinf(v):
        return None
    return math.log(v) / math.log(base)


def _run_cell(cfg: ExperimentConfig, index: int, cell) -> list[ResultRow]:
    x, y, K, K_label, rho = cell
    base = dict(x=x, y=y, K=K_label, rho=_rat_str(rho))
    t0 = time.monotonic()
    try:
        rows = _cell_rows(cfg, index, cell, base)
    except SmoothMomentsError as e:
        log.warning("cell x=%s y=%s rho=%s failed: %s", x, y, rho, e)
        rows = [ResultRow(kind="error", error=f"{type(e).__name__}: {e}", **base)]
    if cfg.include_timing:
        ms = (time.monotonic() - t0) * 1000.0
        for r in rows:
            r.time_ms = ms
    return rows


def _cell_rows(cfg, index, cell, base) -> list[ResultRow]:
    x, y, K, _, rho = cell
    s_set = sieve_smooth(x, y)
    psi = s_set.count
    base = {**base, "psi": psi}

    parseval = moments.moment_quadrature(s_set, 2, x + 1).value
    parseval_ok = abs(parseval - psi) <= PARSEVAL_REL_TOL * psi

    m = compute_moment(s_set, rho, cfg.grid_policy)
    value = m.value
    s = moments.even_integer(rho)
    trivial_ok = None
    if rho >= 2:
        tb = bounds.trivial_bound(rho, psi).total
        trivial_ok = float(value) <= tb * (1 + bounds.TRIVIAL_REL_TOL)
    diagonal_ok = None
    if s is not None:
        floor_ = psi**s
        diagonal_ok = value >= floor_ if isinstance(value, int) else value >= floor_ * (1 - 1e-9)

    mbase = dict(
        base,
        moment=value,
        method=m.method.value,
        N=m.N,
        error_estimate=m.error_estimate,
        x_exponent=_log_ratio(float(value), x),
        psi_exponent=_log_ratio(float(value), psi),
        parseval_ok=parseval_ok,
        trivial_ok=trivial_ok,
        diagonal_ok=diagonal_ok,
    )

    params = exponent_params(K, rho, cfg.epsilon) if K is not None else None
    rows: list[ResultRow] = []
    reports = []
    if params is not None:
        reports = bounds.all_bounds(x, y, psi, params, cfg.harper_K, cfg.sunit_C, cfg.bounds)
    elif "TRIVIAL" in cfg.bounds and rho >= 2:
        reports = [bounds.trivial_bound(rho, psi, x, y)]
    for rep in reports:
        try:
            rep = bounds.compare(rep, m)
            err = None
        except BoundViolation as e:
            err = f"BoundViolation: {e}"
        rows.append(
            ResultRow(
                kind="bound",
                bound_id=rep.bound_id,
                bound_total=rep.total,
                bound_x_exponent=rep.x_exponent,
                ratio=rep.ratio,
                valid=rep.valid,
                nontrivial=rep.nontrivial,
                out_of_theory=not params.in_theory if params is not None else None,
                error=err,
                **mbase,
            )
        )
    if not rows:
        rows.append(ResultRow(kind="moment", **mbase))

    for split in cfg.arc_splits:
        rows.append(_arc_row(s_set, rho, params, split, m, base))

    if cfg.skeleton_samples and params is not None:
        rows.extend(_skeleton_rows(cfg, index, s_set, params, base))
    return rows


def _arc_row(s_set, rho, params, split, m, base) -> ResultRow:
    if params is None:
        return ResultRow(kind="error", arc_split=split, error="no exponent K for this cell", **base)
    try:
        Q = arcs.optimal_Q(s_set.x, params, split)
        s = moments.even_integer(rho)
        N = m.N if m.N else moments.alias_free_size(s_set.x, s)
        if s is not None:
            N = max(N, moments.alias_free_size(s_set.x, s))
        dec = arcs.arc_decompose(s_set, float(rho), Q, N, params, split)
    except SmoothMomentsError as e:
        return ResultRow(kind="error", arc_split=split, error=f"{type(e).__name__}: {e}", **base)
    return ResultRow(
        kind="arc",
        arc_split=split,
        Q=dec.Q,
        N=dec.N,
        split_q=dec.split_q,
        part1=dec.part1,
        part2=dec.part2,
        sharp_part=dec.sharp_part,
        flat_part=dec.flat_part,
        moment=dec.total,
        out_of_theory=not params.in_theory,
        **base,
    )


def _skeleton_rows(cfg, index, s_set, params, base) -> list[ResultRow]:
    rng = np.random.default_rng([cfg.seed, index])
    x = s_set.x
    Q = x ** (0.5 + cfg.epsilon)
    out = []
    for theta in rng.random(cfg.skeleton_samples).tolist():
        lab = arcs.classify_theta(theta, Q, x)
        for rep in (
            expsum.skeleton_ft(theta, lab.a, lab.q, s_set),
            expsum.skeleton_harper(theta, lab.a, lab.q, s_set, params),
            expsum.skeleton_baker(theta, lab.a, lab.q, s_set, params),
        ):
            out.append(
                ResultRow(
                    kind="skeleton",
                    bound_id=rep.lemma_id,
                    bound_total=rep.value,
                    moment=rep.modulus,
                    ratio=rep.ratio,
                    valid=rep.valid,
                    out_of_theory=rep.out_of_theory,
                    theta=theta,
                    a=lab.a,
                    q=lab.q,
                    L=rep.L,
                    Q=Q,
                    **base,
                )
            )
    return out


def run_config(cfg: ExperimentConfig, output: str | os.PathLike | None = None) -> list[ResultRow]:
    """Run every cell and return the rows in deterministic cell order.

    Files are written to ``output`` (or ``cfg.output``) in the configured
    formats; the SVG is drawn from the persisted rows.
    """
    cells = list(_cells(cfg))
    workers = thread_count()
    if workers > 1 and len(cells) > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            per_cell = list(ex.map(lambda ic: _run_cell(cfg, *ic), enumerate(cells)))
    else:
        per_cell = [_run_cell(cfg, i, c) for i, c in enumerate(cells)]
    rows = [r for cell_rows in per_cell for r in cell_rows]

    out_dir = output if output is not None else cfg.output
    if out_dir is not None and cfg.formats:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        if "CSV" in cfg.formats:
            write_csv(rows, out_dir / "results.csv")
        if "JSONL" in cfg.formats:
            write_jsonl(rows, out_dir / "results.jsonl")
        if "SVG" in cfg.formats:
            persisted = (
                read_csv(out_dir / "results.csv")
                if "CSV" in cfg.formats
                else read_jsonl(out_dir / "results.jsonl")
            )
            write_svg(persisted, out_dir / "results.svg")
    return rows
