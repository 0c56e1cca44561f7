"""Routing: turn partitioned circuits into one hardware-compliant gate sequence.

Gates whose operands sit on a coupling edge pass straight through.  A blocked
CNOT is repaired either by a SWAP (three CNOTs, permutes the mapping) or, when
control and target are exactly two apart inside the partition, by a bridged
CNOT (four CNOTs, mapping unchanged).  Candidates are ranked by a cost that
charges each option's own CNOTs against the distance it saves for the front
layer and, with a smaller weight, for a lookahead window.  All movement stays
inside the owning circuit's partition.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circuits import BARRIER, CX, Gate, MEASURE, DagCircuit, QuantumCircuit
from .errors import RoutingError
from .hardware import HardwareModel
from .partition import Partition

SWAP = "SWAP"
BRIDGE = "BRIDGE"

# a bridged CNOT over control-middle-target, in emission order
BRIDGE_PATTERN = ((0, 1), (1, 2), (0, 1), (1, 2))


@dataclass(frozen=True)
class TentativeGate:
    """A candidate repair: SWAP over an edge, or BRIDGE over a 2-hop path."""

    kind: str
    qubits: tuple[int, ...]  # physical: (a, b) for SWAP, (control, middle, target) for BRIDGE
    node: int | None = None  # DAG node the bridge executes

    @property
    def n_tent(self) -> int:
        return 3 if self.kind == SWAP else 4

    def cnot_pairs(self) -> tuple[tuple[int, int], ...]:
        if self.kind == SWAP:
            a, b = self.qubits
            return ((a, b), (b, a), (a, b))
        c, m, t = self.qubits
        return tuple((self.qubits[i], self.qubits[j]) for i, j in BRIDGE_PATTERN)


@dataclass(frozen=True)
class ScheduledGate:
    circuit_id: str
    gate: Gate  # physical qubits; measure clbits stay circuit-local


@dataclass
class Schedule:
    """Routing result: emitted sequence plus per-circuit accounting."""

    entries: list[ScheduledGate]
    swap_counts: dict[str, int]
    bridge_counts: dict[str, int]
    final_mappings: dict[str, dict[int, int]]
    iterations: int

    def additional_cnots(self, circuit_id: str | None = None) -> int:
        if circuit_id is not None:
            return 3 * (self.swap_counts[circuit_id] + self.bridge_counts[circuit_id])
        return 3 * (sum(self.swap_counts.values()) + sum(self.bridge_counts.values()))

    def depth(self) -> int:
        level: dict[int, int] = {}
        deepest = 0
        for entry in self.entries:
            qubits = entry.gate.qubits
            top = max((level.get(q, 0) for q in qubits), default=0)
            if entry.gate.kind == BARRIER:
                for q in qubits:
                    level[q] = top
                continue
            for q in qubits:
                level[q] = top + 1
            deepest = max(deepest, top + 1)
        return deepest


class _Job:
    """Mutable routing state for one circuit."""

    def __init__(self, model: HardwareModel, circuit: QuantumCircuit, dag: DagCircuit, partition: Partition, l2p):
        if len(partition.qubits) != circuit.num_qubits:
            raise ValueError(f"partition size {len(partition.qubits)} != circuit qubits {circuit.num_qubits}")
        self.circuit = circuit
        self.dag = dag
        self.partition = tuple(partition.qubits)
        self.part_set = set(self.partition)
        self.l2p = list(l2p)
        if sorted(self.l2p) != sorted(self.partition):
            raise ValueError("initial mapping is not a bijection onto the partition")
        self.p2l = {p: l for l, p in enumerate(self.l2p)}
        self.in_deg = dag.in_degrees()
        self.front = {i for i, d in enumerate(self.in_deg) if d == 0}
        self.executed = [False] * dag.num_nodes
        self.remaining = dag.num_nodes
        self.part_edges = sorted(e for e in model.edges if e[0] in self.part_set and e[1] in self.part_set)
        self.adjacency = {q: set(model.neighbors(q)) & self.part_set for q in self.partition}
        self.cx_nodes = [i for i, g in enumerate(circuit.gates) if g.kind == CX]
        self.swaps = 0
        self.bridges = 0
        # anti-oscillation state, cleared whenever the circuit emits a gate
        self.banned_edges: set[tuple[int, int]] = set()
        self.stalled = 0

    @property
    def done(self) -> bool:
        return self.remaining == 0

    def mark_executed(self, node: int) -> None:
        self.executed[node] = True
        self.front.discard(node)
        self.remaining -= 1
        for succ in self.dag.successors[node]:
            self.in_deg[succ] -= 1
            if self.in_deg[succ] == 0:
                self.front.add(succ)

    def apply_swap(self, a: int, b: int) -> None:
        la, lb = self.p2l[a], self.p2l[b]
        self.l2p[la], self.l2p[lb] = b, a
        self.p2l[a], self.p2l[b] = lb, la
        self.swaps += 1

    def blocked_front(self) -> list[tuple[int, int, int]]:
        """(node, logical control, logical target) for every front gate."""
        out = []
        for node in sorted(self.front):
            g = self.dag.gate(node)
            out.append((node, g.qubits[0], g.qubits[1]))
        return out

    def extended_layer(self, size: int) -> list[tuple[int, int]]:
        """Next unexecuted CNOTs beyond the front layer, in program order."""
        out = []
        for node in self.cx_nodes:
            if self.executed[node] or node in self.front:
                continue
            g = self.dag.gate(node)
            out.append((g.qubits[0], g.qubits[1]))
            if len(out) >= size:
                break
        return out


def find_swap_bridge_pairs(job: _Job, model: HardwareModel) -> list[TentativeGate]:
    """Repair candidates for a job whose front layer is fully blocked.

    SWAPs: every partition-internal edge touching a front-gate operand.
    BRIDGEs: every front CNOT whose operands are exactly two apart inside the
    partition, one candidate per valid middle qubit.
    """
    front = job.blocked_front()
    endpoints = set()
    for _, lq1, lq2 in front:
        endpoints.add(job.l2p[lq1])
        endpoints.add(job.l2p[lq2])
    candidates: list[TentativeGate] = [
        TentativeGate(SWAP, e) for e in job.part_edges if e[0] in endpoints or e[1] in endpoints
    ]
    for node, lq1, lq2 in front:
        c, t = job.l2p[lq1], job.l2p[lq2]
        for middle in sorted(job.adjacency[c] & job.adjacency[t]):
            candidates.append(TentativeGate(BRIDGE, (c, middle, t), node))
    if not candidates:
        raise RoutingError("no SWAP or BRIDGE candidate for a blocked front layer")
    return candidates


def cost_h(
    tentative: TentativeGate,
    front: list[tuple[int, int, int]],
    extended: list[tuple[int, int]],
    dist: np.ndarray,
    l2p: list[int],
    p2l: dict[int, int],
    weight_w: float = 0.5,
    self_cost: bool = True,
) -> float:
    """Average routing distance if ``tentative`` were applied; lower is better.

    A SWAP is judged under the post-swap mapping and charges its own three
    CNOTs; a BRIDGE is judged under the unchanged mapping, charges its four
    CNOTs, and the CNOT it executes drops out of the front-layer term.  The
    lookahead term is scaled by ``weight_w`` and averaged over its window.
    """
    if tentative.kind == SWAP:
        a, b = tentative.qubits
        mapping = list(l2p)
        la, lb = p2l[a], p2l[b]
        mapping[la], mapping[lb] = b, a
        resolved = None
    else:
        mapping = l2p
        resolved = tentative.node

    front_term = sum(dist[mapping[lq1], mapping[lq2]] for node, lq1, lq2 in front if node != resolved)
    if self_cost:
        self_term = sum(dist[p, q] for p, q in tentative.cnot_pairs())
        h = (front_term + self_term) / (len(front) + tentative.n_tent)
    else:
        h = front_term / len(front)
    if extended:
        ext_term = sum(dist[mapping[lq1], mapping[lq2]] for lq1, lq2 in extended)
        h += weight_w * ext_term / len(extended)
    return h


def _forced_path_route(job: _Job, model: HardwareModel, entries: list[ScheduledGate]) -> None:
    """Stall escape hatch: walk the oldest blocked gate's control along the
    shortest partition-internal path until the gate is executable.

    The cost-driven selection can orbit between retreat swaps whose own CNOTs
    look cheaper than any approach; this deterministic fallback guarantees
    progress once a circuit has gone too long without emitting anything.
    """
    node = min(job.front)
    gate = job.dag.gate(node)
    src, dst = job.l2p[gate.qubits[0]], job.l2p[gate.qubits[1]]
    parent = {src: None}
    queue = [src]
    while queue:
        nxt = []
        for u in queue:
            for v in sorted(job.adjacency[u]):
                if v not in parent:
                    parent[v] = u
                    nxt.append(v)
        queue = nxt
    if dst not in parent:
        raise RoutingError(f"partition of circuit {job.circuit.id!r} is not internally connected")
    path = [dst]
    while path[-1] != src:
        path.append(parent[path[-1]])
    path.reverse()
    for step in path[1:-1]:  # move the control up to the target's neighbour
        edge = (min(src, step), max(src, step))
        for p, q in TentativeGate(SWAP, edge).cnot_pairs():
            entries.append(ScheduledGate(job.circuit.id, Gate(CX, (p, q))))
        job.apply_swap(*edge)  # apply_swap also counts the swap
        src = step


def _emit_ready(job: _Job, model: HardwareModel, entries: list[ScheduledGate]) -> None:
    """Emit every front gate that is executable as mapped, cascading."""
    progress = True
    while progress:
        progress = False
        for node in sorted(job.front):
            gate = job.dag.gate(node)
            if gate.kind == CX:
                a, b = job.l2p[gate.qubits[0]], job.l2p[gate.qubits[1]]
                if not model.has_edge(a, b):
                    continue
                emitted = Gate(CX, (a, b))
            elif gate.kind == MEASURE:
                emitted = Gate(MEASURE, (job.l2p[gate.qubits[0]],), clbit=gate.clbit)
            else:  # 1q gates and barriers never block
                emitted = Gate(gate.kind, tuple(job.l2p[q] for q in gate.qubits), gate.params)
            entries.append(ScheduledGate(job.circuit.id, emitted))
            job.mark_executed(node)
            job.banned_edges.clear()
            job.stalled = 0
            progress = True


def mapping_transition(
    model: HardwareModel,
    dist: np.ndarray,
    jobs_spec: list[tuple[QuantumCircuit, DagCircuit, Partition, list[int]]],
    weight_w: float = 0.5,
    ext_size: int = 20,
    swap_only: bool = False,
    self_cost: bool = True,
    stall_limit: int | None = None,
) -> Schedule:
    """Route all circuits together, visiting them densest-first each round.

    Each round emits whatever is executable, then inserts at most one repair
    gate per still-blocked circuit.  A circuit that keeps inserting swaps
    without emitting anything falls back to deterministic shortest-path
    routing after ``stall_limit`` insertions (default: scales with its
    partition size).  An iteration cap of ten times the total gate count
    remains as the guard against a non-terminating selection loop, which
    would be a bug rather than an input problem.
    """
    jobs = [_Job(model, c, dag, part, l2p) for c, dag, part, l2p in jobs_spec]
    entries: list[ScheduledGate] = []
    total_gates = sum(len(j.circuit.gates) for j in jobs)
    cap = 10 * max(total_gates, 1)
    iterations = 0
    while any(not j.done for j in jobs):
        iterations += 1
        if iterations > cap:
            raise RoutingError(f"routing did not terminate within {cap} iterations")
        for job in jobs:
            if job.done:
                continue
            _emit_ready(job, model, entries)
            if not job.front:
                continue
            limit = stall_limit if stall_limit is not None else 2 * len(job.partition) + 4
            if job.stalled >= limit:
                _forced_path_route(job, model, entries)
                continue
            candidates = find_swap_bridge_pairs(job, model)
            if swap_only:
                candidates = [c for c in candidates if c.kind == SWAP]
                if not candidates:
                    raise RoutingError("swap-only routing found no SWAP candidate")
            # a swap edge used since the last emitted gate would likely just
            # oscillate (a cheap retreat edge can outscore every approach),
            # so prune those while alternatives exist; emission lifts the ban
            if job.banned_edges:
                pruned = [c for c in candidates if not (c.kind == SWAP and c.qubits in job.banned_edges)]
                if pruned:
                    candidates = pruned
            front = job.blocked_front()
            extended = job.extended_layer(ext_size)
            best = min(
                candidates,
                key=lambda cand: (
                    cost_h(cand, front, extended, dist, job.l2p, job.p2l, weight_w, self_cost),
                    0 if cand.kind == BRIDGE else 1,
                    cand.qubits,
                ),
            )
            for p, q in best.cnot_pairs():
                entries.append(ScheduledGate(job.circuit.id, Gate(CX, (p, q))))
            if best.kind == SWAP:
                job.apply_swap(*best.qubits)
                job.banned_edges.add(best.qubits)
                job.stalled += 1
            else:
                job.bridges += 1
                job.mark_executed(best.node)
                job.banned_edges.clear()
                job.stalled = 0
    return Schedule(
        entries=entries,
        swap_counts={j.circuit.id: j.swaps for j in jobs},
        bridge_counts={j.circuit.id: j.bridges for j in jobs},
        final_mappings={j.circuit.id: dict(enumerate(j.l2p)) for j in jobs},
        iterations=iterations,
    )


def initial_mapping(
    model: HardwareModel,
    dist: np.ndarray,
    partition: Partition,
    circuit: QuantumCircuit,
    dag: DagCircuit,
    rng: np.random.Generator,
    attempts: int = 10,
    weight_w: float = 0.5,
    ext_size: int = 20,
    swap_only: bool = False,
    self_cost: bool = True,
) -> list[int]:
    """Pick the best of ``attempts`` random placements.

    Each candidate bijection is evaluated by actually routing the circuit to
    completion and counting inserted CNOTs; ties fall back to the summed
    routing distance of the circuit's CNOTs under the candidate placement,
    then to attempt order, so a fixed generator state fixes the result.
    """
    base = sorted(partition.qubits)
    cx_pairs = [(g.qubits[0], g.qubits[1]) for g in circuit.gates if g.kind == CX]
    best_key = None
    best_l2p: list[int] | None = None
    for attempt in range(attempts):
        l2p = [int(p) for p in rng.permutation(base)]
        trial = mapping_transition(
            model, dist, [(circuit, dag, partition, l2p)],
            weight_w=weight_w, ext_size=ext_size, swap_only=swap_only, self_cost=self_cost,
        )
        inserted = trial.additional_cnots(circuit.id)
        tie = sum(float(dist[l2p[a], l2p[b]]) for a, b in cx_pairs)
        key = (inserted, tie, attempt)
        if best_key is None or key < best_key:
            best_key = key
            best_l2p = l2p
    assert best_l2p is not None
    return best_l2p


# --- merged output -----------------------------------------------------------


def merged_circuit(schedule: Schedule, model: HardwareModel, circuits: list[QuantumCircuit]):
    """Flatten a schedule into one circuit over the whole device.

    Classical bits are concatenated per circuit in plan order; the manifest
    records, for every circuit, its final logical-to-physical map and the
    global classical bits its measurements landed in.
    """
    offsets: dict[str, int] = {}
    total_clbits = 0
    for c in circuits:
        offsets[c.id] = total_clbits
        total_clbits += c.num_clbits
    gates = []
    for entry in schedule.entries:
        g = entry.gate
        if g.kind == MEASURE:
            gates.append(Gate(MEASURE, g.qubits, clbit=offsets[entry.circuit_id] + g.clbit))
        else:
            gates.append(g)
    merged = QuantumCircuit("merged", model.num_qubits, total_clbits, tuple(gates))
    manifest = {
        c.id: {
            "logical_to_physical": {str(l): p for l, p in sorted(schedule.final_mappings[c.id].items())},
            "clbits": [offsets[c.id] + i for i in range(c.num_clbits)],
        }
        for c in circuits
    }
    return merged, manifest


def emit_merged_qasm(schedule: Schedule, model: HardwareModel, circuits: list[QuantumCircuit]):
    """Render the merged schedule as OpenQASM with one creg per circuit."""
    creg_names = {c.id: f"c{i}" for i, c in enumerate(circuits)}
    lines = ['OPENQASM 2.0;', 'include "qelib1.inc";', f"qreg q[{model.num_qubits}];"]
    for c in circuits:
        if c.num_clbits:
            lines.append(f"creg {creg_names[c.id]}[{c.num_clbits}];")
    for entry in schedule.entries:
        g = entry.gate
        if g.kind == MEASURE:
            lines.append(f"measure q[{g.qubits[0]}] -> {creg_names[entry.circuit_id]}[{g.clbit}];")
        elif g.kind == BARRIER:
            args = ",".join(f"q[{q}]" for q in g.qubits)
            lines.append(f"barrier {args};")
        else:
            head = g.kind
            if g.params:
                head += "(" + ",".join(repr(p) for p in g.params) + ")"
            args = ",".join(f"q[{q}]" for q in g.qubits)
            lines.append(f"{head} {args};")
    _, manifest = merged_circuit(schedule, model, circuits)
    return "\n".join(lines) + "\n", manifest
