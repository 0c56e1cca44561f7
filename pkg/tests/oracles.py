"""Independent reference implementations used as test oracles.

Everything here deliberately avoids the package's own code paths: plain BFS,
Floyd-Warshall, brute-force path and subset enumeration, and a dense unitary
builder that works on integer basis indices.
"""
from __future__ import annotations

from itertools import combinations

import numpy as np


def bfs_hops(n: int, edges: list[tuple[int, int]], src: int) -> dict[int, int]:
    adj: dict[int, list[int]] = {i: [] for i in range(n)}
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    dist = {src: 0}
    queue = [src]
    while queue:
        nxt = []
        for u in queue:
            for v in adj[u]:
                if v not in dist:
                    dist[v] = dist[u] + 1
                    nxt.append(v)
        queue = nxt
    return dist


def all_pairs_hops(n: int, edges: list[tuple[int, int]]) -> np.ndarray:
    out = np.zeros((n, n))
    for s in range(n):
        for t, d in bfs_hops(n, edges, s).items():
            out[s, t] = d
    return out


def floyd_warshall(nodes: list[int], edges: list[tuple[int, int]]) -> dict[tuple[int, int], float]:
    dist = {(a, b): (0 if a == b else float("inf")) for a in nodes for b in nodes}
    for a, b in edges:
        dist[(a, b)] = dist[(b, a)] = 1
    for k in nodes:
        for i in nodes:
            for j in nodes:
                via = dist[(i, k)] + dist[(k, j)]
                if via < dist[(i, j)]:
                    dist[(i, j)] = via
    return dist


def all_simple_paths(edges: list[tuple[int, int]], src: int, dst: int) -> list[list[int]]:
    adj: dict[int, list[int]] = {}
    for a, b in edges:
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    paths = []

    def walk(node, seen, path):
        if node == dst:
            paths.append(path[:])
            return
        for nxt in adj.get(node, []):
            if nxt not in seen:
                seen.add(nxt)
                path.append(nxt)
                walk(nxt, seen, path)
                path.pop()
                seen.remove(nxt)

    walk(src, {src}, [src])
    return paths


def best_swap_path_error(edges: list[tuple[int, int]], errors: dict, src: int, dst: int) -> float:
    """1 minus the best achievable product of (1-E)^3 over any simple path."""
    best = 0.0
    for path in all_simple_paths(edges, src, dst):
        success = 1.0
        for a, b in zip(path, path[1:]):
            e = errors[(a, b) if (a, b) in errors else (b, a)]
            success *= (1.0 - e) ** 3
        best = max(best, success)
    return 1.0 - best


def dependency_edges(gates) -> set[tuple[int, int]]:
    """Brute-force scan: (a, b) iff a shared qubit has no toucher between them."""
    out = set()
    for a in range(len(gates)):
        for b in range(a + 1, len(gates)):
            for q in set(gates[a].qubits) & set(gates[b].qubits):
                if not any(q in gates[m].qubits for m in range(a + 1, b)):
                    out.add((a, b))
                    break
    return out


def connected_subsets_brute(n: int, edges: list[tuple[int, int]], free: set[int], k: int) -> set[frozenset]:
    """All connected k-subsets via combinations plus a connectivity flood."""
    eset = {tuple(sorted(e)) for e in edges}

    def connected(sub: tuple[int, ...]) -> bool:
        sub_set = set(sub)
        seen = {sub[0]}
        queue = [sub[0]]
        while queue:
            u = queue.pop()
            for v in sub_set - seen:
                if tuple(sorted((u, v))) in eset:
                    seen.add(v)
                    queue.append(v)
        return seen == sub_set

    return {frozenset(c) for c in combinations(sorted(free), k) if connected(c)}


# --- dense unitary oracle ------------------------------------------------------

_1Q = {
    "id": np.eye(2, dtype=complex),
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.diag([1, -1]).astype(complex),
    "h": np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2),
    "s": np.diag([1, 1j]).astype(complex),
    "sdg": np.diag([1, -1j]).astype(complex),
    "t": np.diag([1, np.exp(1j * np.pi / 4)]).astype(complex),
    "tdg": np.diag([1, np.exp(-1j * np.pi / 4)]).astype(complex),
}


def one_qubit_matrix(kind: str, params) -> np.ndarray:
    if kind in _1Q:
        return _1Q[kind]
    if kind == "rx":
        (t,) = params
        return np.array(
            [[np.cos(t / 2), -1j * np.sin(t / 2)], [-1j * np.sin(t / 2), np.cos(t / 2)]], dtype=complex
        )
    if kind == "ry":
        (t,) = params
        return np.array([[np.cos(t / 2), -np.sin(t / 2)], [np.sin(t / 2), np.cos(t / 2)]], dtype=complex)
    if kind == "rz":
        (t,) = params
        return np.diag([np.exp(-1j * t / 2), np.exp(1j * t / 2)]).astype(complex)
    if kind == "u1":
        (lam,) = params
        return np.diag([1, np.exp(1j * lam)]).astype(complex)
    if kind == "u2":
        phi, lam = params
        return unitary_u3(np.pi / 2, phi, lam)
    if kind == "u3":
        return unitary_u3(*params)
    raise ValueError(kind)


def unitary_u3(theta, phi, lam) -> np.ndarray:
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array(
        [[c, -np.exp(1j * lam) * s], [np.exp(1j * phi) * s, np.exp(1j * (phi + lam)) * c]], dtype=complex
    )


def circuit_unitary(n: int, ops: list[tuple]) -> np.ndarray:
    """Dense unitary built column by column through integer bit arithmetic.

    ``ops`` is a list of ("cx", control, target) or (kind, qubit, params).
    Basis index bit b corresponds to qubit b (little-endian).
    """
    dim = 2**n
    unitary = np.eye(dim, dtype=complex)
    for op in ops:
        gate = np.zeros((dim, dim), dtype=complex)
        if op[0] == "cx":
            _, control, target = op
            for col in range(dim):
                row = col ^ (1 << target) if (col >> control) & 1 else col
                gate[row, col] = 1.0
        else:
            kind, qubit, params = op
            mat = one_qubit_matrix(kind, params)
            for col in range(dim):
                bit = (col >> qubit) & 1
                for out_bit in (0, 1):
                    row = (col & ~(1 << qubit)) | (out_bit << qubit)
                    gate[row, col] = mat[out_bit, bit]
        unitary = gate @ unitary
    return unitary
