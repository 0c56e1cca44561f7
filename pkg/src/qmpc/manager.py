"""Decide how many circuits share the device at once.

Capacity gives an upper bound K; the fidelity gate then compares the score of
partitioning each circuit alone against partitioning them together, and trims
the batch until the mean degradation stays under the user threshold.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

from .circuits import QuantumCircuit, stats
from .errors import CircuitTooLargeError, PartitionError
from .hardware import CrosstalkTable, HardwareModel
from .partition import Partition, allocate_all, gsp_partition, qhsp_partition


class Verdict(enum.Enum):
    SIMULTANEOUS = "SIMULTANEOUS"
    REDUCED = "REDUCED"
    INDEPENDENT = "INDEPENDENT"


@dataclass(frozen=True)
class ExecutionPlan:
    """One batch of circuits cleared to run together, with its partitions."""

    selected: tuple[str, ...]
    partitions: tuple[Partition, ...]
    delta_s: float
    threshold: float
    verdict: Verdict
    trf: int

    def verdict_label(self) -> str:
        if self.verdict is Verdict.REDUCED:
            return f"REDUCED({len(self.selected)})"
        return self.verdict.value

    def to_json_dict(self) -> dict:
        return {
            "selected": list(self.selected),
            "partitions": [p.to_json_dict() for p in self.partitions],
            "delta_s": self.delta_s,
            "threshold": self.threshold,
            "verdict": self.verdict_label(),
            "trf": self.trf,
        }


def sort_by_density(circuits: list[QuantumCircuit]) -> list[QuantumCircuit]:
    """Densest circuit (CNOTs per qubit) first; stable for ties."""
    return sorted(circuits, key=lambda c: stats(c).density, reverse=True)


def select_k(circuits: list[QuantumCircuit], num_qubits: int) -> list[QuantumCircuit]:
    """Largest density-ordered prefix whose combined size fits the device."""
    for c in circuits:
        if c.num_qubits > num_qubits:
            raise CircuitTooLargeError(
                f"circuit {c.id!r} needs {c.num_qubits} qubits but the device has {num_qubits}"
            )
    ordered = sort_by_density(circuits)
    total = 0
    prefix: list[QuantumCircuit] = []
    for c in ordered:
        if total + c.num_qubits > num_qubits:
            break
        total += c.num_qubits
        prefix.append(c)
    return prefix


def _best_alone(model, circuit, method, lam, strong, jobs=1) -> Partition:
    if method == "gsp":
        return gsp_partition(model, circuit, set(), strong, jobs=jobs)[0]
    return qhsp_partition(model, circuit, set(), strong, lam=lam)[0]


def independent_plan(
    model: HardwareModel,
    circuit: QuantumCircuit,
    method: str = "qhsp",
    lam: float = 2.0,
    threshold: float = 0.1,
    strong_pairs: CrosstalkTable | None = None,
    jobs: int = 1,
) -> ExecutionPlan:
    best = _best_alone(model, circuit, method, lam, strong_pairs, jobs=jobs)
    return ExecutionPlan((circuit.id,), (best,), 0.0, threshold, Verdict.INDEPENDENT, 1)


def fidelity_gate(
    model: HardwareModel,
    circuits: list[QuantumCircuit],
    method: str = "qhsp",
    lam: float = 2.0,
    threshold: float = 0.1,
    strong_pairs: CrosstalkTable | None = None,
    jobs: int = 1,
) -> ExecutionPlan:
    """Gate a density-ordered batch on the joint-vs-alone score difference.

    delta_s is the mean over the batch of (score allocated together - score of
    the circuit partitioned alone).  While it does not stay under the
    threshold, the lowest-density circuit is dropped and the check repeats;
    a single survivor is declared independent.
    """
    if len(circuits) < 2:
        raise ValueError("fidelity_gate needs at least two circuits; use independent_plan")
    alone = {c.id: _best_alone(model, c, method, lam, strong_pairs, jobs=jobs).score for c in circuits}
    current = list(circuits)
    while len(current) >= 2:
        joint = allocate_all(model, current, method=method, lam=lam, strong_pairs=strong_pairs, jobs=jobs)
        delta_s = sum(p.score - alone[p.circuit_id] for p in joint) / len(current)
        if delta_s < threshold:
            verdict = Verdict.SIMULTANEOUS if len(current) == len(circuits) else Verdict.REDUCED
            return ExecutionPlan(
                tuple(c.id for c in current), tuple(joint), delta_s, threshold, verdict, len(current)
            )
        current = current[:-1]
    return independent_plan(model, current[0], method, lam, threshold, strong_pairs, jobs=jobs)


def plan_all(
    model: HardwareModel,
    circuits: list[QuantumCircuit],
    method: str = "qhsp",
    lam: float = 2.0,
    threshold: float = 0.1,
    strong_pairs: CrosstalkTable | None = None,
    jobs: int = 1,
) -> list[ExecutionPlan]:
    """Cover every submitted circuit with a plan, re-queueing whatever the
    fidelity gate drops."""
    ids = [c.id for c in circuits]
    if len(set(ids)) != len(ids):
        raise PartitionError("circuit ids must be unique")
    remaining = sort_by_density(circuits)
    plans: list[ExecutionPlan] = []
    while remaining:
        prefix = select_k(remaining, model.num_qubits)
        if len(prefix) <= 1:
            plan = independent_plan(model, prefix[0], method, lam, threshold, strong_pairs, jobs=jobs)
        else:
            plan = fidelity_gate(model, prefix, method, lam, threshold, strong_pairs, jobs=jobs)
        plans.append(plan)
        taken = set(plan.selected)
        remaining = [c for c in remaining if c.id not in taken]
    return plans
