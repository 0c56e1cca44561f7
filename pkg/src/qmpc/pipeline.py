"""End-to-end compilation: plan batches, place, route, and package outputs."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .circuits import QuantumCircuit, build_dag
from .hardware import CrosstalkTable, HardwareModel, distance_matrices
from .manager import ExecutionPlan, plan_all
from .scheduler import Schedule, emit_merged_qasm, initial_mapping, mapping_transition, merged_circuit
from .verify import estimate_success


@dataclass
class RunConfig:
    """Knobs for one compilation run; defaults are the recommended settings."""

    method: str = "qhsp"
    lam: float = 2.0
    delta: float = 0.1
    weight_w: float = 0.5
    alpha1: float = 0.5
    alpha2: float = 0.5
    ext_layer: int = 20
    attempts: int = 10
    seed: int = 0
    jobs: int = 1
    swap_only: bool = False
    self_cost: bool = True


@dataclass
class CompiledPlan:
    plan: ExecutionPlan
    circuits: list[QuantumCircuit]
    schedule: Schedule
    merged: QuantumCircuit
    qasm: str
    manifest: dict
    stats: dict


@dataclass
class CompileResult:
    plans: list[CompiledPlan] = field(default_factory=list)


def _plan_stats(model: HardwareModel, compiled: CompiledPlan, index: int) -> dict:
    sched = compiled.schedule
    per_circuit = {}
    for circuit, part in zip(compiled.circuits, compiled.plan.partitions):
        per_circuit[circuit.id] = {
            "qubits": circuit.num_qubits,
            "partition": list(part.qubits),
            "partition_score": part.score,
            "additional_cnots": sched.additional_cnots(circuit.id),
            "swaps": sched.swap_counts[circuit.id],
            "bridges": sched.bridge_counts[circuit.id],
        }
    return {
        "plan_index": index,
        "verdict": compiled.plan.verdict_label(),
        "delta_s": compiled.plan.delta_s,
        "threshold": compiled.plan.threshold,
        "trf": compiled.plan.trf,
        "depth": sched.depth(),
        "total_additional_cnots": sched.additional_cnots(),
        "esp": estimate_success(sched, model),
        "circuits": per_circuit,
    }


def compile_plan(
    model: HardwareModel,
    plan: ExecutionPlan,
    circuits_by_id: dict[str, QuantumCircuit],
    config: RunConfig,
    dist: np.ndarray,
    seed_seq: np.random.SeedSequence,
    index: int = 0,
) -> CompiledPlan:
    """Place and route one plan's circuits simultaneously."""
    circuits = [circuits_by_id[cid] for cid in plan.selected]
    dags = [build_dag(c) for c in circuits]
    children = seed_seq.spawn(len(circuits))
    jobs_spec = []
    for circuit, dag, part, child in zip(circuits, dags, plan.partitions, children):
        rng = np.random.default_rng(child)
        l2p = initial_mapping(
            model, dist, part, circuit, dag, rng,
            attempts=config.attempts, weight_w=config.weight_w, ext_size=config.ext_layer,
            swap_only=config.swap_only, self_cost=config.self_cost,
        )
        jobs_spec.append((circuit, dag, part, l2p))
    schedule = mapping_transition(
        model, dist, jobs_spec,
        weight_w=config.weight_w, ext_size=config.ext_layer,
        swap_only=config.swap_only, self_cost=config.self_cost,
    )
    merged, manifest = merged_circuit(schedule, model, circuits)
    qasm, _ = emit_merged_qasm(schedule, model, circuits)
    compiled = CompiledPlan(plan, circuits, schedule, merged, qasm, manifest, {})
    compiled.stats = _plan_stats(model, compiled, index)
    return compiled


def compile_workloads(
    model: HardwareModel,
    circuits: list[QuantumCircuit],
    config: RunConfig | None = None,
    strong_pairs: CrosstalkTable | None = None,
) -> CompileResult:
    """Full pipeline: order by density, gate batch sizes, partition, route."""
    config = config or RunConfig()
    matrices = distance_matrices(model, config.alpha1, config.alpha2)
    plans = plan_all(
        model, circuits,
        method=config.method, lam=config.lam, threshold=config.delta, strong_pairs=strong_pairs,
        jobs=config.jobs,
    )
    by_id = {c.id: c for c in circuits}
    root = np.random.SeedSequence(config.seed)
    plan_seeds = root.spawn(len(plans))
    result = CompileResult()
    for i, (plan, seq) in enumerate(zip(plans, plan_seeds)):
        result.plans.append(compile_plan(model, plan, by_id, config, matrices.combined, seq, index=i))
    return result
