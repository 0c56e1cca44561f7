"""Desk-scale correctness checks: exact simulation, equivalence, metrics.

The simulator is a dense statevector over the qubits a circuit actually
touches, so a merged circuit on a large device stays cheap as long as its
active region is small.  Measurements whose qubit is acted on again later
split the state into outcome branches; terminal measurements are read off the
final state jointly, which keeps the common all-measures-at-the-end case to a
single branch.

Bit-order conventions (also documented in the README): in a distribution key,
string position i holds classical bit i (or qubit i when the circuit never
measures); in a statevector, bit b of the amplitude index belongs to qubit b.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .circuits import BARRIER, CX, MEASURE, Gate, QuantumCircuit
from .errors import SimulationError, VerificationError
from .hardware import HardwareModel

SIMULATION_QUBIT_CAP = 12
_BRANCH_CAP = 4096

_SQ2 = 1.0 / math.sqrt(2.0)

_FIXED_1Q = {
    "id": np.eye(2, dtype=complex),
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
    "h": np.array([[_SQ2, _SQ2], [_SQ2, -_SQ2]], dtype=complex),
    "s": np.array([[1, 0], [0, 1j]], dtype=complex),
    "sdg": np.array([[1, 0], [0, -1j]], dtype=complex),
    "t": np.array([[1, 0], [0, np.exp(1j * math.pi / 4)]], dtype=complex),
    "tdg": np.array([[1, 0], [0, np.exp(-1j * math.pi / 4)]], dtype=complex),
}


def _u3(theta: float, phi: float, lam: float) -> np.ndarray:
    c, s = math.cos(theta / 2.0), math.sin(theta / 2.0)
    return np.array(
        [[c, -np.exp(1j * lam) * s], [np.exp(1j * phi) * s, np.exp(1j * (phi + lam)) * c]],
        dtype=complex,
    )


def gate_matrix(kind: str, params: tuple[float, ...]) -> np.ndarray:
    """2x2 matrix of a supported one-qubit gate."""
    if kind in _FIXED_1Q:
        return _FIXED_1Q[kind]
    if kind == "rx":
        (t,) = params
        return np.array(
            [[math.cos(t / 2), -1j * math.sin(t / 2)], [-1j * math.sin(t / 2), math.cos(t / 2)]], dtype=complex
        )
    if kind == "ry":
        (t,) = params
        return np.array(
            [[math.cos(t / 2), -math.sin(t / 2)], [math.sin(t / 2), math.cos(t / 2)]], dtype=complex
        )
    if kind == "rz":
        (t,) = params
        return np.array([[np.exp(-1j * t / 2), 0], [0, np.exp(1j * t / 2)]], dtype=complex)
    if kind == "u1":
        (lam,) = params
        return np.array([[1, 0], [0, np.exp(1j * lam)]], dtype=complex)
    if kind == "u2":
        phi, lam = params
        return _u3(math.pi / 2, phi, lam)
    if kind == "u3":
        return _u3(*params)
    raise SimulationError(f"no matrix for gate kind {kind!r}")


def _apply_1q(state: np.ndarray, mat: np.ndarray, axis: int) -> np.ndarray:
    out = np.tensordot(mat, state, axes=(1, axis))
    return np.moveaxis(out, 0, axis)


def _apply_cx(state: np.ndarray, control: int, target: int) -> np.ndarray:
    out = state.copy()
    m = state.ndim
    sel10 = [slice(None)] * m
    sel11 = [slice(None)] * m
    sel10[control], sel10[target] = 1, 0
    sel11[control], sel11[target] = 1, 1
    out[tuple(sel10)] = state[tuple(sel11)]
    out[tuple(sel11)] = state[tuple(sel10)]
    return out


@dataclass
class _Branch:
    weight: float
    state: np.ndarray
    writes: dict[int, tuple[int, int]]  # clbit -> (gate index, value)


def _project(state: np.ndarray, axis: int):
    """Probabilities and renormalized post-measurement states for one qubit."""
    probs = np.abs(state) ** 2
    axes = tuple(i for i in range(state.ndim) if i != axis)
    marg = probs.sum(axis=axes)
    outcomes = []
    for value in (0, 1):
        p = float(marg[value])
        if p <= 1e-30:
            continue
        sel = [slice(None)] * state.ndim
        sel[axis] = 1 - value
        post = state.copy()
        post[tuple(sel)] = 0.0
        outcomes.append((value, p, post / math.sqrt(p)))
    return outcomes


def simulate(circuit: QuantumCircuit, cap: int = SIMULATION_QUBIT_CAP) -> dict[str, float]:
    """Exact noiseless outcome distribution.

    Keys run over classical bits when the circuit measures, otherwise over
    qubits.  The cap applies to the number of *active* qubits, so merged
    circuits on big devices are fine while their occupied region is small.
    """
    active = sorted({q for g in circuit.gates for q in g.qubits})
    if len(active) > cap:
        raise SimulationError(f"{len(active)} active qubits exceed the simulation cap of {cap}")
    axis_of = {q: i for i, q in enumerate(active)}
    m = len(active)

    # a measurement can be read off the final state unless a gate acts on its
    # qubit afterwards, in which case the state has to branch on the outcome
    measure_positions = [i for i, g in enumerate(circuit.gates) if g.kind == MEASURE]
    must_branch = set()
    for i in measure_positions:
        q = circuit.gates[i].qubits[0]
        for j in range(i + 1, len(circuit.gates)):
            gate = circuit.gates[j]
            if gate.kind not in (MEASURE, BARRIER) and q in gate.qubits:
                must_branch.add(i)
                break

    state0 = np.zeros([2] * m, dtype=complex)
    state0[tuple([0] * m)] = 1.0
    branches = [_Branch(1.0, state0, {})]
    pending: list[tuple[int, int, int]] = []  # (gate index, clbit, axis)

    for i, g in enumerate(circuit.gates):
        if g.kind == BARRIER:
            continue
        if g.kind == MEASURE:
            axis = axis_of[g.qubits[0]]
            if i in must_branch:
                grown: list[_Branch] = []
                for br in branches:
                    for value, p, post in _project(br.state, axis):
                        writes = dict(br.writes)
                        writes[g.clbit] = (i, value)
                        grown.append(_Branch(br.weight * p, post, writes))
                branches = grown
                if len(branches) > _BRANCH_CAP:
                    raise SimulationError("too many mid-circuit measurement branches")
            else:
                pending.append((i, g.clbit, axis))
            continue
        if g.kind == CX:
            ca, ta = axis_of[g.qubits[0]], axis_of[g.qubits[1]]
            for br in branches:
                br.state = _apply_cx(br.state, ca, ta)
        else:
            mat = gate_matrix(g.kind, g.params)
            axis = axis_of[g.qubits[0]]
            for br in branches:
                br.state = _apply_1q(br.state, mat, axis)

    has_measure = bool(measure_positions)
    result: dict[str, float] = {}
    if has_measure:
        width = circuit.num_clbits
        read_axes = sorted({axis for _, _, axis in pending})
        pos_of = {axis: k for k, axis in enumerate(read_axes)}
        for br in branches:
            probs = np.abs(br.state) ** 2
            drop = tuple(i for i in range(m) if i not in pos_of)
            joint = probs.sum(axis=drop) if drop else probs
            joint = joint.reshape([2] * len(read_axes)) if read_axes else joint.reshape([])
            for outcome in np.ndindex(*([2] * len(read_axes))):
                p = float(joint[outcome]) if read_axes else float(joint)
                if p <= 0.0:
                    continue
                bits = [0] * width
                last_write: dict[int, tuple[int, int]] = dict(br.writes)
                for gate_idx, clbit, axis in pending:
                    prev = last_write.get(clbit)
                    if prev is None or gate_idx > prev[0]:
                        last_write[clbit] = (gate_idx, outcome[pos_of[axis]])
                for clbit, (_, value) in last_write.items():
                    bits[clbit] = value
                key = "".join(map(str, bits))
                result[key] = result.get(key, 0.0) + br.weight * p
                if not read_axes:
                    break
    else:
        br = branches[0]
        probs = np.abs(br.state) ** 2
        width = circuit.num_qubits
        for outcome in np.ndindex(*([2] * m)):
            p = float(probs[outcome])
            if p <= 0.0:
                continue
            bits = ["0"] * width
            for q, axis in axis_of.items():
                bits[q] = str(outcome[axis])
            key = "".join(bits)
            result[key] = result.get(key, 0.0) + p
    return result


def statevector(circuit: QuantumCircuit, cap: int = SIMULATION_QUBIT_CAP) -> np.ndarray:
    """Final amplitudes over all declared qubits; bit b of an index is qubit b.

    Only defined for measurement-free circuits.
    """
    if any(g.kind == MEASURE for g in circuit.gates):
        raise SimulationError("statevector is only defined for measurement-free circuits")
    if circuit.num_qubits > cap:
        raise SimulationError(f"{circuit.num_qubits} qubits exceed the simulation cap of {cap}")
    n = circuit.num_qubits
    state = np.zeros([2] * n, dtype=complex)
    state[tuple([0] * n)] = 1.0
    for g in circuit.gates:
        if g.kind == BARRIER:
            continue
        if g.kind == CX:
            state = _apply_cx(state, g.qubits[0], g.qubits[1])
        else:
            state = _apply_1q(state, gate_matrix(g.kind, g.params), g.qubits[0])
    # axis q carries qubit q; little-endian flat order wants qubit 0 last
    return np.transpose(state, axes=tuple(reversed(range(n)))).reshape(-1)


def total_variation(p: dict[str, float], q: dict[str, float]) -> float:
    keys = set(p) | set(q)
    return 0.5 * sum(abs(p.get(k, 0.0) - q.get(k, 0.0)) for k in keys)


def marginalize(dist: dict[str, float], positions: list[int]) -> dict[str, float]:
    """Project a distribution over bit strings onto the given positions."""
    out: dict[str, float] = {}
    for key, p in dist.items():
        sub = "".join(key[i] for i in positions)
        out[sub] = out.get(sub, 0.0) + p
    return out


@dataclass(frozen=True)
class EquivalenceReport:
    passed: bool
    max_tv: float
    per_circuit: dict[str, float]


def check_equivalence(
    sources: list[QuantumCircuit],
    merged: QuantumCircuit,
    manifest: dict,
    cap: int = SIMULATION_QUBIT_CAP,
    tol: float = 1e-9,
) -> EquivalenceReport:
    """Compare each source circuit's ideal distribution against the matching
    marginal of the merged circuit's distribution."""
    merged_dist = simulate(merged, cap=cap)
    per_circuit: dict[str, float] = {}
    for src in sources:
        entry = manifest.get(src.id)
        if entry is None:
            raise VerificationError(f"manifest has no entry for circuit {src.id!r}")
        clbits = entry.get("clbits", [])
        if len(clbits) != src.num_clbits:
            raise VerificationError(
                f"manifest lists {len(clbits)} clbits for {src.id!r}, circuit has {src.num_clbits}"
            )
        if src.num_clbits == 0:
            raise VerificationError(f"circuit {src.id!r} has no measurements to compare")
        if any(not 0 <= b < merged.num_clbits for b in clbits):
            raise VerificationError(f"manifest clbits for {src.id!r} fall outside the merged register")
        got = marginalize(merged_dist, list(clbits))
        want = simulate(src, cap=cap)
        per_circuit[src.id] = total_variation(got, want)
    max_tv = max(per_circuit.values(), default=0.0)
    return EquivalenceReport(max_tv < tol, max_tv, per_circuit)


def expected_outcomes(circuit: QuantumCircuit, cap: int = SIMULATION_QUBIT_CAP) -> set[str]:
    """Most likely ideal outcomes (ties included) for use as a PST target."""
    dist = simulate(circuit, cap=cap)
    peak = max(dist.values())
    return {k for k, v in dist.items() if v >= peak - 1e-12}


def compute_pst(counts: dict[str, int], expected) -> float:
    """Fraction of trials that landed in the expected outcome set."""
    if not counts:
        raise VerificationError("empty counts")
    total = sum(counts.values())
    if total <= 0:
        raise VerificationError("counts sum to zero")
    targets = {expected} if isinstance(expected, str) else set(expected)
    hit = sum(v for k, v in counts.items() if k in targets)
    return hit / total


def estimate_success(gates, model: HardwareModel, adjusted_errors=None) -> float:
    """Product of per-operation success probabilities: (1 - E) per executed
    CNOT and (1 - R) per measured qubit.  An analytic fidelity proxy."""
    if hasattr(gates, "entries"):  # Schedule
        gates = [entry.gate for entry in gates.entries]
    elif isinstance(gates, QuantumCircuit):
        gates = gates.gates
    p = 1.0
    for g in gates:
        if g.kind == CX:
            edge = (min(g.qubits), max(g.qubits))
            err = model.cnot_error[edge] if adjusted_errors is None else adjusted_errors.get(edge, model.cnot_error[edge])
            p *= 1.0 - err
        elif g.kind == MEASURE:
            p *= 1.0 - float(model.readout_error[g.qubits[0]])
    return p
