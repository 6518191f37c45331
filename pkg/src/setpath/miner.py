"""Differential audit of the set-matrix detector against the DFS oracle.

Four kinds of disagreement are recorded:

``soundness-violation``
    the oracle finds a path/cycle but the detector cell is V.
``completeness-violation``
    the detector cell is not V but no simple path/cycle exists.
``lemma0-mismatch``
    both agree a path exists, but ``(T^k)_ij`` differs from the oracle's
    bridge set (vertices common to every such path).
``leftright-mismatch``
    the non-V pattern of the left power ``T·T^{k-1}`` differs from the right
    power ``T^{k-1}·T`` at ``(i, j)``.

Records are canonically ordered (graph size and bit pattern, then kind,
then ``(i, j, k)``, then direction) and are emitted as JSON lines.
"""

from __future__ import annotations

import json
import logging
import multiprocessing
import statistics
import time
from collections import defaultdict
from dataclasses import asdict, dataclass, field
from typing import Any, Callable, Iterable, Optional, Sequence

import numpy as np

from .detector import build_R, build_T, detect_cycles, detect_paths, hamiltonian_cycle
from .graph import Digraph, GraphPopulation, complete_digraph, emit_json_graph, parse_json_graph
from .oracle import bridge_set, oracle_k_cycles, oracle_k_paths, path_profile
from .set_algebra import left_power, left_powers, render_bits, right_power, right_powers

log = logging.getLogger(__name__)

SOUNDNESS = "soundness-violation"
COMPLETENESS = "completeness-violation"
LEMMA0 = "lemma0-mismatch"
LEFTRIGHT = "leftright-mismatch"
DIRECTIONS = (SOUNDNESS, COMPLETENESS, LEMMA0, LEFTRIGHT)

_KIND_ORDER = {"path": 0, "cycle": 1}
_DIRECTION_ORDER = {d: idx for idx, d in enumerate(DIRECTIONS)}


@dataclass(frozen=True)
class DiscrepancyRecord:
    """One replayable disagreement; ``i``, ``j`` are 1-based, ``j`` is None for cycles.

    ``detector_value`` is the rendered detector cell.  ``oracle_value`` is the
    simple path/cycle count for soundness and completeness records, the
    rendered bridge set for lemma0 records, and the rendered left-power cell
    for leftright records.
    """

    graph: str
    kind: str
    i: int
    j: Optional[int]
    k: int
    direction: str
    detector_value: str
    oracle_value: Any

    def sort_key(self) -> tuple:
        g = parse_json_graph(self.graph)
        return (
            g.sort_key(),
            _KIND_ORDER[self.kind],
            self.i,
            self.j or 0,
            self.k,
            _DIRECTION_ORDER[self.direction],
        )

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json(cls, line: str) -> DiscrepancyRecord:
        return cls(**json.loads(line))


@dataclass
class DirectionTotals:
    queries: int = 0
    violations: int = 0

    @property
    def agreements(self) -> int:
        return self.queries - self.violations

    def to_json(self) -> dict:
        return {"queries": self.queries, "agreements": self.agreements, "violations": self.violations}


@dataclass
class InvariantTotals:
    """Detector invariants that need no oracle."""

    collapse_checks: int = 0
    collapse_violations: int = 0
    structure_cells: int = 0
    structure_violations: int = 0
    hamiltonian_checks: int = 0
    hamiltonian_mismatches: int = 0
    collapse_examples: list[str] = field(default_factory=list)

    def merge(self, other: InvariantTotals, keep_examples: int = 5) -> None:
        for name in (
            "collapse_checks",
            "collapse_violations",
            "structure_cells",
            "structure_violations",
            "hamiltonian_checks",
            "hamiltonian_mismatches",
        ):
            setattr(self, name, getattr(self, name) + getattr(other, name))
        room = keep_examples - len(self.collapse_examples)
        if room > 0:
            self.collapse_examples.extend(other.collapse_examples[:room])

    def to_json(self) -> dict:
        d = asdict(self)
        return d


@dataclass
class GraphAudit:
    code: tuple
    n: int
    records: list[DiscrepancyRecord]
    totals: dict[str, DirectionTotals]
    violations_by_kind: dict[str, int]
    invariants: InvariantTotals
    seconds: float


def audit_graph(g: Digraph, k_range: tuple[int, int], check_invariants: bool = True) -> GraphAudit:
    """Compare detector and oracle on every path/cycle query of one graph."""
    started = time.perf_counter()
    n = g.n
    k_lo, k_hi = k_range
    gjson = emit_json_graph(g)
    v = (1 << n) - 1
    t = build_T(g)
    r_bits = build_R(g).bits()
    k_top = max(k_hi, n + 2) if check_invariants else k_hi
    # rights[k] = bits of T^k
    rights: list[Optional[list[list[int]]]] = [None]
    rights += [p.bits() for p in right_powers(t, k_top)]
    lefts: list[Optional[list[list[int]]]] = [None]
    lefts += [p.bits() for p in left_powers(t, k_hi)]
    prof = path_profile(g, k_hi)

    totals = {d: DirectionTotals() for d in DIRECTIONS}
    by_kind: dict[str, int] = defaultdict(int)
    records: list[DiscrepancyRecord] = []

    def record(kind, i, j, k, direction, det_bits, oracle_value):
        totals[direction].violations += 1
        by_kind[f"{kind}:{direction}"] += 1
        records.append(
            DiscrepancyRecord(
                gjson,
                kind,
                i + 1,
                None if j is None else j + 1,
                k,
                direction,
                render_bits(det_bits, n),
                oracle_value,
            )
        )

    for k in range(k_lo, k_hi + 1):
        tk, lk = rights[k], lefts[k]
        for i in range(n):
            for j in range(n):
                if i == j:
                    continue
                cell = tk[i][j]
                det = cell != v
                cnt = prof.count[i][j][k] if k <= prof.max_k else 0
                totals[SOUNDNESS].queries += 1
                totals[COMPLETENESS].queries += 1
                totals[LEFTRIGHT].queries += 1
                if cnt and not det:
                    record("path", i, j, k, SOUNDNESS, cell, cnt)
                elif det and not cnt:
                    record("path", i, j, k, COMPLETENESS, cell, 0)
                elif det and cnt:
                    totals[LEMMA0].queries += 1
                    bridge = prof.bridge[i][j][k]
                    if bridge != cell:
                        record("path", i, j, k, LEMMA0, cell, render_bits(bridge, n))
                if (lk[i][j] != v) != det:
                    record("path", i, j, k, LEFTRIGHT, cell, render_bits(lk[i][j], n))

    for k in range(k_lo, k_hi + 1):
        for i in range(n):
            if k == 1:
                cell = (1 << n) if g.has_loop(i) else v
            else:
                tprev = rights[k - 1][i]
                cell = v
                for nu in range(n):
                    cell &= tprev[nu] | r_bits[nu][i]
            det = cell != v
            cnt = prof.cycle_count(g, i, k)
            totals[SOUNDNESS].queries += 1
            totals[COMPLETENESS].queries += 1
            if cnt and not det:
                record("cycle", i, None, k, SOUNDNESS, cell, cnt)
            elif det and not cnt:
                record("cycle", i, None, k, COMPLETENESS, cell, 0)

    inv = InvariantTotals()
    if check_invariants:
        for k in range(n, n + 3):
            inv.collapse_checks += 1
            bad = [(i, j) for i in range(n) for j in range(n) if rights[k][i][j] != v]
            if bad:
                inv.collapse_violations += 1
                if not inv.collapse_examples:
                    i, j = bad[0]
                    inv.collapse_examples.append(
                        f"{gjson} k={k} cell ({i + 1},{j + 1}) = {render_bits(rights[k][i][j], n)}"
                    )
        for k in range(1, k_top + 1):
            for i in range(n):
                for j in range(n):
                    c = rights[k][i][j]
                    if c != v:
                        inv.structure_cells += 1
                        if not c >> j & 1 or c >> i & 1:
                            inv.structure_violations += 1
        if n >= 2:
            tprev = rights[n - 1][0]
            full = v
            for nu in range(n):
                full &= tprev[nu] | r_bits[nu][0]
            inv.hamiltonian_checks += 1
            if hamiltonian_cycle(g) != (full != v):
                inv.hamiltonian_mismatches += 1

    records.sort(key=lambda rec: (_KIND_ORDER[rec.kind], rec.i, rec.j or 0, rec.k, _DIRECTION_ORDER[rec.direction]))
    return GraphAudit(
        g.sort_key(), n, records, totals, dict(by_kind), inv, time.perf_counter() - started
    )


@dataclass
class SweepSummary:
    population: dict
    k_range: tuple[int, int]
    graphs: int = 0
    totals: dict[str, DirectionTotals] = field(default_factory=lambda: {d: DirectionTotals() for d in DIRECTIONS})
    violations_by_kind: dict[str, int] = field(default_factory=lambda: defaultdict(int))
    graphs_with_findings: int = 0
    invariants: InvariantTotals = field(default_factory=InvariantTotals)
    wall_time: float = 0.0
    graph_seconds: list[float] = field(default_factory=list)

    def add(self, audit: GraphAudit) -> None:
        self.graphs += 1
        for d, tot in audit.totals.items():
            self.totals[d].queries += tot.queries
            self.totals[d].violations += tot.violations
        for key, cnt in audit.violations_by_kind.items():
            self.violations_by_kind[key] += cnt
        if audit.records:
            self.graphs_with_findings += 1
        self.invariants.merge(audit.invariants)
        self.graph_seconds.append(audit.seconds)

    @property
    def soundness_violations(self) -> int:
        return self.totals[SOUNDNESS].violations

    @property
    def leftright_agreement_rate(self) -> float:
        t = self.totals[LEFTRIGHT]
        return t.agreements / t.queries if t.queries else 1.0

    def timing(self) -> dict:
        s = self.graph_seconds
        if not s:
            return {"n": self.population.get("n"), "samples": 0}
        return {
            "n": self.population.get("n"),
            "samples": len(s),
            "total_s": sum(s),
            "median_graph_s": statistics.median(s),
            "max_graph_s": max(s),
        }

    def to_json(self) -> dict:
        return {
            "population": self.population,
            "k_range": list(self.k_range),
            "graphs": self.graphs,
            "graphs_with_findings": self.graphs_with_findings,
            "totals": {d: t.to_json() for d, t in self.totals.items()},
            "violations_by_kind": dict(sorted(self.violations_by_kind.items())),
            "leftright_agreement_rate": self.leftright_agreement_rate,
            "invariants": self.invariants.to_json(),
            "wall_time_s": self.wall_time,
            "timing": self.timing(),
        }


def _audit_task(args: tuple[Digraph, tuple[int, int], bool]) -> GraphAudit:
    return audit_graph(*args)


def _resolve_k_range(n: int, k_range: Optional[tuple[int, int]]) -> tuple[int, int]:
    lo, hi = k_range if k_range is not None else (1, n)
    if not 1 <= lo <= hi <= n:
        raise ValueError(f"k range [{lo}, {hi}] must lie within [1, {n}]")
    return lo, hi


def sweep(
    population: GraphPopulation,
    k_range: Optional[tuple[int, int]] = None,
    workers: int = 1,
    sink: Optional[Callable[[DiscrepancyRecord], None]] = None,
    check_invariants: bool = True,
    chunksize: int = 64,
) -> tuple[SweepSummary, list[DiscrepancyRecord]]:
    """Audit every graph in ``population``.

    When ``sink`` is given, records are streamed to it in canonical order and
    the returned list is empty; otherwise they are collected and returned.
    Output does not depend on ``workers``.
    """
    kr = _resolve_k_range(population.n, k_range)
    if population.kind == "exhaustive":
        graphs: Iterable[Digraph] = iter(population)
    else:
        graphs = sorted(population, key=Digraph.sort_key)
    summary = SweepSummary(population.describe(), kr)
    collected: list[DiscrepancyRecord] = []
    emit = sink if sink is not None else collected.append
    started = time.perf_counter()
    tasks = ((g, kr, check_invariants) for g in graphs)
    if workers > 1:
        with multiprocessing.Pool(workers) as pool:
            for audit in pool.imap(_audit_task, tasks, chunksize=chunksize):
                summary.add(audit)
                for rec in audit.records:
                    emit(rec)
    else:
        for task in tasks:
            audit = _audit_task(task)
            summary.add(audit)
            for rec in audit.records:
                emit(rec)
    summary.wall_time = time.perf_counter() - started
    log.info(
        "swept %d graphs (%s) in %.1fs: %s",
        summary.graphs,
        population.describe(),
        summary.wall_time,
        {d: t.violations for d, t in summary.totals.items()},
    )
    return summary, collected


def replay(record: DiscrepancyRecord) -> bool:
    """Recompute one record from scratch with the single-query entry points.

    True when the same disagreement, with the same rendered values, reappears.
    """
    g = parse_json_graph(record.graph)
    n, k, i = g.n, record.k, record.i - 1
    if record.kind == "cycle":
        cell = detect_cycles(g, k).cells[i]
        det = not cell.is_V()
        cnt = oracle_k_cycles(g, i, k).count
        if record.direction == SOUNDNESS:
            ok = cnt > 0 and not det
        elif record.direction == COMPLETENESS:
            ok = det and cnt == 0
        else:
            return False
        return ok and str(cell) == record.detector_value and cnt == record.oracle_value
    j = record.j - 1
    cell = detect_paths(g, k, keep_witness=True).witness_matrix[i, j]
    det = not cell.is_V()
    if str(cell) != record.detector_value:
        return False
    if record.direction in (SOUNDNESS, COMPLETENESS):
        q = oracle_k_paths(g, i, j, k)
        cnt = q.count
        if record.direction == SOUNDNESS:
            return cnt > 0 and not det and cnt == record.oracle_value
        return det and cnt == 0 and record.oracle_value == 0
    if record.direction == LEMMA0:
        bridge = bridge_set(g, i, j, k)
        return det and not bridge.is_V() and bridge != cell and str(bridge) == record.oracle_value
    if record.direction == LEFTRIGHT:
        left = left_power(build_T(g), k)[i, j]
        return (not left.is_V()) != det and str(left) == record.oracle_value
    return False


def write_records(fh, records: Iterable[DiscrepancyRecord]) -> int:
    count = 0
    for rec in records:
        fh.write(rec.to_json() + "\n")
        count += 1
    return count


def read_records(path) -> list[DiscrepancyRecord]:
    with open(path) as fh:
        return [DiscrepancyRecord.from_json(line) for line in fh if line.strip()]


@dataclass
class BenchRow:
    n: int
    median_s: float
    samples: list[float]


@dataclass
class BenchTable:
    rows: list[BenchRow]
    slope: Optional[float]

    def ratios(self) -> list[float]:
        return [b.median_s / a.median_s for a, b in zip(self.rows, self.rows[1:])]

    def to_json(self) -> dict:
        return {
            "rows": [{"n": r.n, "median_s": r.median_s, "samples": r.samples} for r in self.rows],
            "ratios": self.ratios(),
            "loglog_slope": self.slope,
        }

    def to_text(self) -> str:
        lines = [f"{'n':>6} {'median_s':>12}"]
        lines += [f"{r.n:>6} {r.median_s:>12.6f}" for r in self.rows]
        if self.slope is not None:
            lines.append(f"log-log slope: {self.slope:.3f}")
        return "\n".join(lines)


def bench_powers(n_list: Sequence[int], reps: int = 5) -> BenchTable:
    """Median wall time of ``right_power(T, n-1)`` on complete digraphs."""
    if reps < 1:
        raise ValueError("reps must be >= 1")
    if list(n_list) != sorted(n_list) or any(n < 2 for n in n_list):
        raise ValueError("n_list must be ascending with every n >= 2")
    rows = []
    for n in n_list:
        t = build_T(complete_digraph(n))
        right_power(t, n - 1)  # warm-up
        samples = []
        for _ in range(reps):
            start = time.perf_counter()
            right_power(t, n - 1)
            samples.append(time.perf_counter() - start)
        rows.append(BenchRow(n, statistics.median(samples), samples))
    slope = None
    if len(rows) >= 2:
        x = np.log([r.n for r in rows])
        y = np.log([r.median_s for r in rows])
        slope = float(np.polyfit(x, y, 1)[0])
    return BenchTable(rows, slope)
