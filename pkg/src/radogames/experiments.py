"""Monte Carlo harness: sample boards across a probability grid, certify
winners, count structures, and emit deterministic CSV/JSON reports.

Sampling is coupled: one uniform draw per integer per (n, trial), shared
across the probability grid, so boards are nested in p trial-wise and
monotone comparisons are meaningful per trial rather than only on average.
"""

from __future__ import annotations

import csv
import io
import json
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np
from scipy.optimize import minimize

from radogames.engine import BREAKER, MAKER, Certification, certify_winner
from radogames.hypergraphs import Board, Hypergraph, enumerate_solutions, sample_board
from radogames.matrices import RadoSystem, SizeCapError, is_abundant, is_irredundant, max_density
from radogames.structures import find_structure

CSV_COLUMNS = (
    "system_id",
    "n",
    "p",
    "seed",
    "board_size",
    "edges",
    "components",
    "max_component",
    "bicycle",
    "winner",
    "certificate",
    "millis",
)


class DegenerateDataError(ValueError):
    """All observed frequencies are equal: no transition to fit."""


@dataclass(frozen=True)
class ExperimentSpec:
    system: RadoSystem
    system_id: str
    n_values: tuple[int, ...]
    trials: int
    seed: int
    probabilities: tuple[float, ...] = ()
    multipliers: tuple[float, ...] = ()
    solver_cap: int = 24
    probe_cap: int = 16
    structure_cap: int = 30
    node_budget: int = 150_000  # per-solve position cap; overruns become 'unknown'
    breaker_side_multiplier: float = 0.2  # conservative default for blocker-regime studies

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not self.probabilities and not self.multipliers:
            raise ValueError("provide explicit probabilities or multipliers")
        if any(not 0 <= p <= 1 for p in self.probabilities):
            raise ValueError("probabilities must lie in [0, 1]")

    def resolve_probabilities(self, n: int) -> tuple[float, ...]:
        """Grid for one n, ascending.  Multipliers scale n^(-1/density)."""
        if self.probabilities:
            return tuple(sorted(self.probabilities))
        density, _ = max_density(self.system)
        scale = float(n) ** (-1 / float(density))
        return tuple(sorted(min(1.0, m * scale) for m in self.multipliers))


@dataclass(frozen=True)
class TrialRecord:
    system_id: str
    n: int
    p: float
    seed: int
    board_size: int
    edge_count: int
    component_count: int
    max_component_size: int
    bicycle_found: bool
    winner: str  # maker | breaker | unknown
    certificate: str
    elapsed_ms: float

    def csv_row(self) -> list:
        return [
            self.system_id,
            self.n,
            repr(self.p),
            self.seed,
            self.board_size,
            self.edge_count,
            self.component_count,
            self.max_component_size,
            int(self.bicycle_found),
            self.winner,
            self.certificate,
            f"{self.elapsed_ms:.3f}",
        ]


@dataclass(frozen=True)
class SummaryStats:
    n: int
    p: float
    trials: int
    maker_freq: float
    breaker_freq: float
    unknown_freq: float


@dataclass
class SweepResult:
    records: list[TrialRecord]
    summary: dict[tuple[int, float], SummaryStats]
    metadata: dict


def _trial_seed(seed: int, n: int, trial: int) -> int:
    """Stable 63-bit mix; independent of p so boards couple across the grid."""
    x = (seed * 0x9E3779B97F4A7C15 + n * 0xC2B2AE3D27D4EB4F + trial * 0x165667B19E3779F9)
    return (x ^ (x >> 29)) % (1 << 63)


def run_threshold_sweep(spec: ExperimentSpec) -> SweepResult:
    """Sample, build, certify, and record every (n, p, trial) cell.

    Within one trial the probability grid shares its board seed, and a
    positive certification carries forward as a hint sub-board: a win for the
    claiming player on a sub-board stays a win on every larger board.
    Cap overruns record an 'unknown' row; the sweep never aborts.
    """
    records: dict[tuple[int, float, int], TrialRecord] = {}
    for n in spec.n_values:
        grid = spec.resolve_probabilities(n)
        for trial in range(spec.trials):
            seed = _trial_seed(spec.seed, n, trial)
            known_win: Optional[Hypergraph] = None
            for p in grid:
                record, known_win = _run_trial(spec, n, p, trial, seed, known_win)
                records[(n, p, trial)] = record
    ordered = [records[key] for key in sorted(records)]
    summary = summarize(ordered)
    k = spec.system.cols
    metadata = {
        "system_id": spec.system_id,
        "seed": spec.seed,
        "trials": spec.trials,
        "breaker_side_multiplier": spec.breaker_side_multiplier,
        "blocker_regime_constant_bound": 1.0 / (k * math.e**2),
    }
    return SweepResult(ordered, summary, metadata)


def _run_trial(
    spec: ExperimentSpec, n: int, p: float, trial: int, seed: int, known_win
) -> tuple[TrialRecord, Optional[Hypergraph]]:
    t0 = time.perf_counter()
    board = sample_board(n, p, seed)
    h = enumerate_solutions(spec.system, board)
    comp_ids = h.component_ids()
    comp_sizes = [len(h.component_vertices(cid)) for cid in comp_ids] or [0]
    cert = certify_winner(
        h,
        solver_cap=spec.solver_cap,
        probe_cap=spec.probe_cap,
        known_win=known_win,
        node_budget=spec.node_budget,
    )
    winner = cert.winner or "unknown"
    certificate = cert.certificate if cert.winner else "unknown-heuristic"
    if winner == MAKER and known_win is None:
        known_win = h.induced(cert.witness_vertices)
    elapsed = (time.perf_counter() - t0) * 1000
    record = TrialRecord(
        spec.system_id,
        n,
        p,
        seed,
        len(board),
        len(h.edges),
        len(comp_ids),
        max(comp_sizes),
        cert.bicycle_found,
        winner,
        certificate,
        elapsed,
    )
    return record, known_win


def summarize(records: Iterable[TrialRecord]) -> dict[tuple[int, float], SummaryStats]:
    cells: dict[tuple[int, float], list[TrialRecord]] = {}
    for r in records:
        cells.setdefault((r.n, r.p), []).append(r)
    out = {}
    for (n, p), rs in sorted(cells.items()):
        t = len(rs)
        out[(n, p)] = SummaryStats(
            n,
            p,
            t,
            sum(r.winner == MAKER for r in rs) / t,
            sum(r.winner == BREAKER for r in rs) / t,
            sum(r.winner == "unknown" for r in rs) / t,
        )
    return out


# ---------------------------------------------------------------------------
# Structure frequencies
# ---------------------------------------------------------------------------


def structure_frequency(spec: ExperimentSpec, kinds: Sequence[str]) -> dict:
    """Per (n, p): for each kind, the number of components containing it,
    summed over trials; components above the structure cap count as unknown.
    """
    counts: dict[tuple[int, float], dict[str, int]] = {}
    for n in spec.n_values:
        grid = spec.resolve_probabilities(n)
        for trial in range(spec.trials):
            seed = _trial_seed(spec.seed, n, trial)
            for p in grid:
                board = sample_board(n, p, seed)
                h = enumerate_solutions(spec.system, board)
                cell = counts.setdefault((n, p), {k: 0 for k in kinds} | {"unknown": 0})
                for cid in h.component_ids():
                    edges = h.component_edges(cid)
                    if not edges:
                        continue
                    if len(edges) > spec.structure_cap:
                        cell["unknown"] += 1
                        continue
                    for kind in kinds:
                        if find_structure(h, cid, kind) is not None:
                            cell[kind] += 1
    return counts


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------


def emit_report(records: Sequence[TrialRecord], fmt: str, path: str) -> None:
    text = render_report(records, fmt)
    with open(path, "w", newline="") as fh:
        fh.write(text)


def render_report(records: Sequence[TrialRecord], fmt: str) -> str:
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for r in records:
            writer.writerow(r.csv_row())
        return buf.getvalue()
    if fmt == "json":
        docs = [
            {
                "system_id": r.system_id,
                "n": r.n,
                "p": r.p,
                "seed": r.seed,
                "board_size": r.board_size,
                "edges": r.edge_count,
                "components": r.component_count,
                "max_component": r.max_component_size,
                "bicycle": r.bicycle_found,
                "winner": r.winner,
                "certificate": r.certificate,
                "millis": r.elapsed_ms,
            }
            for r in records
        ]
        return json.dumps(docs, indent=2) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


def parse_report_json(text: str) -> list[TrialRecord]:
    docs = json.loads(text)
    return [
        TrialRecord(
            d["system_id"],
            int(d["n"]),
            float(d["p"]),
            int(d["seed"]),
            int(d["board_size"]),
            int(d["edges"]),
            int(d["components"]),
            int(d["max_component"]),
            bool(d["bicycle"]),
            d["winner"],
            d["certificate"],
            float(d["millis"]),
        )
        for d in docs
    ]


def frequency_table(summary: dict[tuple[int, float], SummaryStats]) -> str:
    """Plot-friendly table: one block per n of 'p maker breaker unknown'."""
    lines = []
    for n in sorted({n for n, _ in summary}):
        lines.append(f"# n={n}")
        for (m, p), s in sorted(summary.items()):
            if m == n:
                lines.append(f"{p!r} {s.maker_freq:.4f} {s.breaker_freq:.4f} {s.unknown_freq:.4f}")
        lines.append("")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# Transition fitting
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TransitionFit:
    n: int
    p_half: float
    ci_low: float
    ci_high: float


def fit_transition(
    summary: dict[tuple[int, float], SummaryStats],
    bootstrap: int = 200,
    seed: int = 0,
) -> dict[int, TransitionFit]:
    """Logistic fit of the claimer's win frequency against log p, per n.

    Returns the fitted 0.5 crossing with a bootstrap percentile interval.
    Requires at least three probability points and non-constant frequencies.
    """
    out = {}
    for n in sorted({n for n, _ in summary}):
        points = [(p, s) for (m, p), s in sorted(summary.items()) if m == n and p > 0]
        if len(points) < 3:
            raise DegenerateDataError(f"n={n}: need at least 3 positive-p points")
        freqs = [s.maker_freq for _, s in points]
        if len(set(freqs)) == 1:
            raise DegenerateDataError(f"n={n}: all frequencies equal {freqs[0]}")
        logs = np.array([math.log(p) for p, _ in points])
        wins = np.array([round(s.maker_freq * s.trials) for _, s in points], dtype=float)
        totals = np.array([s.trials for _, s in points], dtype=float)
        p_half = _logistic_p_half(logs, wins, totals)
        rng = np.random.default_rng(seed + n)
        resampled = []
        for _ in range(bootstrap):
            draws = rng.binomial(totals.astype(int), np.clip(wins / totals, 0, 1))
            if len(set(draws.tolist())) == 1 and len(set((draws / totals).tolist())) == 1:
                continue
            try:
                resampled.append(_logistic_p_half(logs, draws.astype(float), totals))
            except (ValueError, FloatingPointError):
                continue
        if resampled:
            lo, hi = np.percentile(resampled, [2.5, 97.5])
        else:
            lo = hi = p_half
        out[n] = TransitionFit(n, p_half, float(lo), float(hi))
    return out


def _logistic_p_half(logs: np.ndarray, wins: np.ndarray, totals: np.ndarray) -> float:
    def neg_log_lik(theta):
        a, b = theta
        z = a + b * logs
        # log(1 + e^z) computed stably
        log1p = np.logaddexp(0.0, z)
        return float(np.sum(totals * log1p - wins * z))

    center = float(np.mean(logs))
    best = minimize(
        neg_log_lik,
        x0=np.array([-center, 1.0]),
        method="Nelder-Mead",
        options={"maxiter": 2000, "xatol": 1e-10, "fatol": 1e-12},
    )
    a, b = best.x
    if b <= 0:
        raise ValueError("non-increasing fit")
    return float(math.exp(-a / b))
