"""Device model: coupling graph, calibration, conditional-error table, routing matrices.

The routing matrices combine hop distance with the error cost of moving a
state along the graph.  Both are normalized by their own maximum before the
weighted sum so that equal weights compare like with like.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import networkx as nx
import numpy as np

from .errors import CalibrationError, CrosstalkError, DisconnectedGraphError, HardwareError

Edge = tuple[int, int]


def _edge(i: int, j: int) -> Edge:
    return (i, j) if i < j else (j, i)


@dataclass(frozen=True)
class HardwareModel:
    """Static device snapshot: topology plus one set of calibration data."""

    num_qubits: int
    edges: tuple[Edge, ...]
    cnot_error: dict[Edge, float]
    readout_error: np.ndarray
    single_qubit_error: np.ndarray

    def graph(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self.num_qubits))
        g.add_edges_from(self.edges)
        return g

    def neighbors(self, q: int) -> tuple[int, ...]:
        return self._adjacency[q]

    @property
    def _adjacency(self) -> dict[int, tuple[int, ...]]:
        adj = self.__dict__.get("_adj_cache")
        if adj is None:
            tmp: dict[int, list[int]] = {q: [] for q in range(self.num_qubits)}
            for a, b in self.edges:
                tmp[a].append(b)
                tmp[b].append(a)
            adj = {q: tuple(sorted(ns)) for q, ns in tmp.items()}
            object.__setattr__(self, "_adj_cache", adj)
        return adj

    def has_edge(self, i: int, j: int) -> bool:
        return _edge(i, j) in self.cnot_error

    def edge_error(self, i: int, j: int) -> float:
        try:
            return self.cnot_error[_edge(i, j)]
        except KeyError:
            raise HardwareError(f"({i},{j}) is not a coupling edge") from None

    def degree(self, q: int) -> int:
        return len(self.neighbors(q))


def build_hardware(topology: dict, calibration: dict) -> HardwareModel:
    """Assemble and validate a model from already-decoded JSON objects."""
    try:
        n = int(topology["num_qubits"])
        raw_edges = topology["edges"]
    except (KeyError, TypeError) as exc:
        raise HardwareError(f"topology is missing field: {exc}") from None
    if n < 1:
        raise HardwareError("device must have at least one qubit")

    edges: list[Edge] = []
    seen = set()
    for pair in raw_edges:
        if len(pair) != 2:
            raise HardwareError(f"bad edge entry {pair!r}")
        i, j = int(pair[0]), int(pair[1])
        if i == j:
            raise HardwareError(f"self-loop edge ({i},{j})")
        if not (0 <= i < n and 0 <= j < n):
            raise HardwareError(f"edge ({i},{j}) references a qubit outside 0..{n - 1}")
        e = _edge(i, j)
        if e in seen:
            continue
        seen.add(e)
        edges.append(e)
    edges.sort()

    graph = nx.Graph(edges)
    graph.add_nodes_from(range(n))
    if n > 1 and not nx.is_connected(graph):
        parts = [sorted(c) for c in nx.connected_components(graph)]
        raise DisconnectedGraphError(f"coupling graph is disconnected: components {parts}")

    cnot_error: dict[Edge, float] = {}
    for entry in calibration.get("cnot_errors", []):
        if len(entry) != 3:
            raise CalibrationError(f"bad cnot_errors entry {entry!r}")
        i, j, err = int(entry[0]), int(entry[1]), float(entry[2])
        e = _edge(i, j)
        if e not in seen:
            raise CalibrationError(f"cnot_errors entry ({i},{j}) is not a coupling edge")
        if not 0.0 <= err < 1.0:
            raise CalibrationError(f"CNOT error {err} for edge ({i},{j}) outside [0,1)")
        cnot_error[e] = err  # both orders may appear; last one wins
    for e in edges:
        if e not in cnot_error:
            raise CalibrationError(f"missing CNOT error for edge {e}")

    readout = calibration.get("readout_errors")
    if readout is None or len(readout) != n:
        raise CalibrationError(f"readout_errors must list all {n} qubits")
    readout = np.asarray([float(r) for r in readout])
    if np.any(readout < 0.0) or np.any(readout >= 1.0):
        bad = int(np.argmax((readout < 0.0) | (readout >= 1.0)))
        raise CalibrationError(f"readout error for qubit {bad} outside [0,1)")

    single = calibration.get("single_qubit_errors")
    if single is None:
        single = np.zeros(n)
    else:
        if len(single) != n:
            raise CalibrationError(f"single_qubit_errors must list all {n} qubits")
        single = np.asarray([float(s) for s in single])

    return HardwareModel(n, tuple(edges), cnot_error, readout, single)


def load_hardware(topology_path: str | Path, calibration_path: str | Path) -> HardwareModel:
    """Load topology and calibration JSON files into a validated model."""
    with open(topology_path) as fh:
        topology = json.load(fh)
    with open(calibration_path) as fh:
        calibration = json.load(fh)
    return build_hardware(topology, calibration)


# --- derived matrices --------------------------------------------------------


def hop_count_matrix(model: HardwareModel) -> np.ndarray:
    """All-pairs shortest-path hop counts."""
    n = model.num_qubits
    out = np.zeros((n, n))
    for src, lengths in nx.all_pairs_shortest_path_length(model.graph()):
        for dst, d in lengths.items():
            out[src, dst] = d
    return out


def swap_distance_matrix(model: HardwareModel, normalize: bool = True) -> np.ndarray:
    """Hop-count matrix, scaled so the largest entry is 1."""
    out = hop_count_matrix(model)
    peak = out.max()
    if normalize and peak > 0:
        out = out / peak
    return out


def swap_error_matrix(model: HardwareModel, normalize: bool = True) -> np.ndarray:
    """Failure probability of the most reliable swap path between each pair.

    Moving a state across one edge costs three CNOTs, so an edge succeeds
    with probability (1 - E)^3; the matrix holds 1 minus the best achievable
    path success product, scaled so the largest entry is 1.
    """
    n = model.num_qubits
    graph = model.graph()
    for a, b in model.edges:
        e = model.cnot_error[(a, b)]
        # -log success keeps Dijkstra additive; the product below is exact
        graph[a][b]["weight"] = -3.0 * math.log(1.0 - e) if e > 0 else 0.0
    out = np.zeros((n, n))
    for src in range(n):
        paths = nx.single_source_dijkstra_path(graph, src, weight="weight")
        for dst, path in paths.items():
            if dst == src:
                continue
            success = 1.0
            for a, b in zip(path, path[1:]):
                success *= (1.0 - model.cnot_error[_edge(a, b)]) ** 3
            out[src, dst] = 1.0 - success
    out = np.maximum(out, out.T)  # symmetric by construction; guard float drift
    peak = out.max()
    if normalize and peak > 0:
        out = out / peak
    return out


def combined_distance(swap_dist: np.ndarray, swap_err: np.ndarray, alpha1: float = 0.5, alpha2: float = 0.5) -> np.ndarray:
    """Elementwise weighted sum of the two routing matrices."""
    if swap_dist.shape != swap_err.shape:
        raise ValueError(f"shape mismatch: {swap_dist.shape} vs {swap_err.shape}")
    return alpha1 * swap_dist + alpha2 * swap_err


@dataclass(frozen=True)
class DistanceMatrices:
    swap_distance: np.ndarray
    swap_error: np.ndarray
    combined: np.ndarray
    alpha1: float
    alpha2: float


def distance_matrices(model: HardwareModel, alpha1: float = 0.5, alpha2: float = 0.5) -> DistanceMatrices:
    s = swap_distance_matrix(model)
    e = swap_error_matrix(model)
    return DistanceMatrices(s, e, combined_distance(s, e, alpha1, alpha2), alpha1, alpha2)


def subgraph_diameter(model: HardwareModel, qubits) -> int:
    """Longest shortest path within the induced subgraph on ``qubits``."""
    qubits = set(qubits)
    for q in qubits:
        if not 0 <= q < model.num_qubits:
            raise HardwareError(f"qubit {q} outside device")
    sub = model.graph().subgraph(qubits)
    if len(qubits) <= 1:
        return 0
    if not nx.is_connected(sub):
        raise DisconnectedGraphError(f"qubit set {sorted(qubits)} induces a disconnected subgraph")
    return nx.diameter(sub)


def induced_distances(model: HardwareModel, qubits) -> dict[int, dict[int, int]]:
    """All-pairs shortest paths restricted to the induced subgraph."""
    sub = model.graph().subgraph(set(qubits))
    return {src: dict(lengths) for src, lengths in nx.all_pairs_shortest_path_length(sub)}


# --- crosstalk ----------------------------------------------------------------


@dataclass(frozen=True)
class CrosstalkTable:
    """Conditional CNOT errors: (affected edge, conditioning edge) -> error.

    Entries are directional; a symmetric effect needs one entry per direction.
    """

    entries: dict[tuple[Edge, Edge], float]

    def __len__(self) -> int:
        return len(self.entries)

    def conditional_errors(self, gate: Edge) -> dict[Edge, float]:
        return {cond: err for (g, cond), err in self.entries.items() if g == gate}


def _validate_pair(gate: Edge, cond: Edge, model: HardwareModel, hops: np.ndarray) -> None:
    for e in (gate, cond):
        if e not in model.cnot_error:
            raise CrosstalkError(f"crosstalk entry references non-edge {e}")
    if set(gate) & set(cond):
        raise CrosstalkError(f"crosstalk pair {gate}|{cond} shares a qubit")
    gap = min(int(hops[a, b]) for a in gate for b in cond)
    if gap != 1:
        raise CrosstalkError(f"crosstalk pair {gate}|{cond} is {gap} hops apart, expected exactly 1")


def build_crosstalk(pairs: list[dict], model: HardwareModel) -> CrosstalkTable:
    hops = hop_count_matrix(model)
    entries: dict[tuple[Edge, Edge], float] = {}
    for item in pairs:
        try:
            gate = _edge(int(item["gate"][0]), int(item["gate"][1]))
            cond = _edge(int(item["conditioned_on"][0]), int(item["conditioned_on"][1]))
            err = float(item["error"])
        except (KeyError, TypeError, IndexError):
            raise CrosstalkError(f"bad crosstalk entry {item!r}") from None
        _validate_pair(gate, cond, model, hops)
        if not 0.0 <= err < 1.0:
            raise CrosstalkError(f"conditional error {err} for {gate}|{cond} outside [0,1)")
        entries[(gate, cond)] = err
    return CrosstalkTable(entries)


def load_crosstalk(path: str | Path, model: HardwareModel) -> CrosstalkTable:
    with open(path) as fh:
        data = json.load(fh)
    return build_crosstalk(data.get("pairs", []), model)


def extract_strong_crosstalk(table: CrosstalkTable, model: HardwareModel, factor: float = 3.0) -> CrosstalkTable:
    """Keep only pairs whose conditional error exceeds ``factor`` times the solo error.

    Direction matters: one direction of a pair can survive while the other is
    dropped.  Applying the filter twice changes nothing.
    """
    kept = {}
    for (gate, cond), err in table.entries.items():
        if gate not in model.cnot_error:
            raise CrosstalkError(f"crosstalk entry references non-edge {gate}")
        if err > factor * model.cnot_error[gate]:
            kept[(gate, cond)] = err
    return CrosstalkTable(kept)
