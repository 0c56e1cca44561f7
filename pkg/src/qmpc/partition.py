"""Qubit partitioning: reserve a connected, reliability-scored region of the
device for each circuit.

Two searches produce candidates.  The exhaustive one enumerates every
connected k-subset of free qubits and is the quality baseline; the heuristic
one grows regions from well-connected starting points by fidelity degree and
stays polynomial.  Both score candidates the same way, except that the
exhaustive score adds the region diameter as a connectivity penalty, and both
raise the CNOT error of region edges that sit under strong crosstalk from
already-allocated neighbours.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .circuits import QuantumCircuit, stats
from .errors import PartitionError, PartitionSizeError
from .hardware import CrosstalkTable, Edge, HardwareModel, subgraph_diameter

GSP_MAX_QUBITS = 8

METHOD_GSP = "GSP"
METHOD_QHSP = "QHSP"


@dataclass(frozen=True)
class Partition:
    """A connected region bound to one circuit; lower score is better.

    ``qubits`` keeps construction order (merge order for the heuristic,
    sorted for the exhaustive search).
    """

    circuit_id: str
    qubits: tuple[int, ...]
    score: float
    method: str

    @property
    def qubit_set(self) -> frozenset[int]:
        return frozenset(self.qubits)

    def to_json_dict(self) -> dict:
        return {
            "circuit_id": self.circuit_id,
            "qubits": list(self.qubits),
            "score": self.score,
            "method": self.method,
        }


@dataclass(frozen=True)
class FidelityDegreeTable:
    """Per-qubit fidelity degree and the weight it was computed with."""

    values: np.ndarray
    lam: float


def fidelity_degree(model: HardwareModel, lam: float = 2.0) -> FidelityDegreeTable:
    """Score each qubit by weighted neighbour CNOT fidelity plus readout fidelity.

    degree(q) = sum over neighbours v of lam * (1 - E[q][v]), plus (1 - R[q]).
    High values mark well-connected, low-error qubits.
    """
    if lam <= 0:
        raise ValueError("lam must be positive")
    values = np.zeros(model.num_qubits)
    for q in range(model.num_qubits):
        total = sum(lam * (1.0 - model.edge_error(q, v)) for v in model.neighbors(q))
        values[q] = total + (1.0 - float(model.readout_error[q]))
    return FidelityDegreeTable(values, lam)


def starting_points(model: HardwareModel, circuit: QuantumCircuit) -> list[int]:
    """Physical qubits whose connectivity can host the busiest logical qubit.

    Falls back to the best-connected qubits when nothing on the device reaches
    the circuit's largest logical degree.
    """
    largest_logical = stats(circuit).largest_logical_degree
    degrees = [model.degree(q) for q in range(model.num_qubits)]
    max_degree = max(degrees)
    if max_degree < largest_logical:
        return [q for q in range(model.num_qubits) if degrees[q] == max_degree]
    return [q for q in range(model.num_qubits) if degrees[q] >= largest_logical]


def _induced_edges(model: HardwareModel, qubits) -> list[Edge]:
    qs = set(qubits)
    return [e for e in model.edges if e[0] in qs and e[1] in qs]


def crosstalk_adjust(
    model: HardwareModel,
    candidate_qubits,
    used_qubits,
    strong_pairs: CrosstalkTable | None,
) -> dict[Edge, float]:
    """CNOT errors of the candidate's internal edges, raised where a strong
    conditional error is triggered by an edge inside already-allocated qubits.

    The conditional error replaces the solo error (it already is the degraded
    total, not an increment); several applicable conditioners take the max.
    """
    used = set(used_qubits)
    adjusted: dict[Edge, float] = {}
    for edge in _induced_edges(model, candidate_qubits):
        err = model.cnot_error[edge]
        if strong_pairs is not None:
            for cond, cond_err in strong_pairs.conditional_errors(edge).items():
                if cond[0] in used and cond[1] in used:
                    err = max(err, cond_err)
        adjusted[edge] = err
    return adjusted


def _score(model: HardwareModel, qubits, circuit: QuantumCircuit, adjusted: dict[Edge, float], with_diameter: bool) -> float:
    edges = _induced_edges(model, qubits)
    avg = sum(adjusted[e] for e in edges) / len(edges) if edges else 0.0
    readout = sum(float(model.readout_error[q]) for q in qubits)
    score = avg * circuit.cnot_count + readout
    if with_diameter:
        score += subgraph_diameter(model, qubits)
    return score


def score_gsp(model: HardwareModel, qubits, circuit: QuantumCircuit, adjusted: dict[Edge, float]) -> float:
    """Region diameter + mean internal CNOT error x CNOT count + readout sum."""
    return _score(model, qubits, circuit, adjusted, with_diameter=True)


def score_qhsp(model: HardwareModel, qubits, circuit: QuantumCircuit, adjusted: dict[Edge, float]) -> float:
    """Same as the exhaustive score minus the diameter term."""
    return _score(model, qubits, circuit, adjusted, with_diameter=False)


def connected_k_subsets(model: HardwareModel, free: set[int], k: int) -> list[tuple[int, ...]]:
    """All connected k-subsets of ``free``, sorted for determinism."""
    if k < 1:
        return []
    level = {frozenset([q]) for q in free}
    seen = set(level)
    for _ in range(k - 1):
        nxt = set()
        for sub in level:
            for q in sub:
                for v in model.neighbors(q):
                    if v in free and v not in sub:
                        grown = sub | {v}
                        if grown not in seen:
                            seen.add(grown)
                            nxt.add(grown)
        level = nxt
    return sorted(tuple(sorted(s)) for s in level)


def gsp_partition(
    model: HardwareModel,
    circuit: QuantumCircuit,
    used_qubits,
    strong_pairs: CrosstalkTable | None = None,
    jobs: int = 1,
) -> list[Partition]:
    """Exhaustively score every connected region of the right size.

    Cost grows exponentially with circuit size, so requests beyond
    ``GSP_MAX_QUBITS`` qubits are refused outright.
    """
    k = circuit.num_qubits
    if k > GSP_MAX_QUBITS:
        raise PartitionSizeError(
            f"exhaustive search is capped at {GSP_MAX_QUBITS} circuit qubits (got {k}); use the qhsp method"
        )
    used = set(used_qubits)
    free = set(range(model.num_qubits)) - used
    if len(free) < k:
        raise PartitionError(f"only {len(free)} free qubits for a {k}-qubit circuit")
    subsets = connected_k_subsets(model, free, k)
    if not subsets:
        raise PartitionError(f"no connected {k}-qubit region among free qubits")

    def score_one(subset: tuple[int, ...]) -> Partition:
        adjusted = crosstalk_adjust(model, subset, used, strong_pairs)
        return Partition(circuit.id, subset, score_gsp(model, subset, circuit, adjusted), METHOD_GSP)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            candidates = list(pool.map(score_one, subsets))
    else:
        candidates = [score_one(s) for s in subsets]
    candidates.sort(key=lambda p: (p.score, tuple(sorted(p.qubits))))
    return candidates


def _grow_region(model: HardwareModel, start: int, k: int, table: FidelityDegreeTable, used: set[int]) -> list[int] | None:
    """Grow a region from ``start`` by repeatedly letting the highest-degree
    member adopt its best free neighbour.  Returns None when growth stalls."""
    values = table.values
    region = [start]
    while len(region) < k:
        merged = False
        for q in sorted(region, key=lambda q: (-values[q], q)):
            free_neighbours = [v for v in model.neighbors(q) if v not in used and v not in region]
            if free_neighbours:
                best = min(free_neighbours, key=lambda v: (-values[v], v))
                region.append(best)
                merged = True
                break
        if not merged:
            return None
    return region


def qhsp_partition(
    model: HardwareModel,
    circuit: QuantumCircuit,
    used_qubits,
    strong_pairs: CrosstalkTable | None = None,
    lam: float = 2.0,
) -> list[Partition]:
    """Heuristic partition search seeded at well-connected qubits."""
    k = circuit.num_qubits
    used = set(used_qubits)
    free = set(range(model.num_qubits)) - used
    if len(free) < k:
        raise PartitionError(f"only {len(free)} free qubits for a {k}-qubit circuit")
    table = fidelity_degree(model, lam)
    candidates: list[Partition] = []
    seen: set[frozenset[int]] = set()
    for start in sorted(starting_points(model, circuit)):
        region = _grow_region(model, start, k, table, used)
        if region is None:
            continue
        if used & set(region):  # only possible when the start itself is taken
            continue
        key = frozenset(region)
        if key in seen:
            continue
        seen.add(key)
        adjusted = crosstalk_adjust(model, region, used, strong_pairs)
        candidates.append(
            Partition(circuit.id, tuple(region), score_qhsp(model, region, circuit, adjusted), METHOD_QHSP)
        )
    if not candidates:
        raise PartitionError(f"no feasible {k}-qubit region from any starting point")
    candidates.sort(key=lambda p: (p.score, tuple(sorted(p.qubits))))
    return candidates


def _densities(circuits) -> list[Fraction]:
    return [stats(c).density for c in circuits]


def allocate_all(
    model: HardwareModel,
    circuits: list[QuantumCircuit],
    method: str = "qhsp",
    lam: float = 2.0,
    strong_pairs: CrosstalkTable | None = None,
    jobs: int = 1,
) -> list[Partition]:
    """Allocate disjoint regions to circuits already ordered by density.

    Each allocation marks its qubits used, and later candidates see their
    edge errors adjusted against everything allocated so far.
    """
    dens = _densities(circuits)
    if any(dens[i] < dens[i + 1] for i in range(len(dens) - 1)):
        raise PartitionError("circuits must be ordered by density, descending")
    if sum(c.num_qubits for c in circuits) > model.num_qubits:
        raise PartitionError("combined circuit size exceeds the device")
    used: set[int] = set()
    out: list[Partition] = []
    for circuit in circuits:
        if method == "gsp":
            best = gsp_partition(model, circuit, used, strong_pairs, jobs=jobs)[0]
        elif method == "qhsp":
            best = qhsp_partition(model, circuit, used, strong_pairs, lam=lam)[0]
        else:
            raise ValueError(f"unknown partition method {method!r}")
        out.append(best)
        used |= best.qubit_set
    return out
