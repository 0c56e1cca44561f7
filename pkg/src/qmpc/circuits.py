"""Circuit representation: OpenQASM 2.0 subset parser, dependency DAG, statistics.

The IR is deliberately small: a circuit is an ordered tuple of gates over a
single quantum register.  Two-qubit support is limited to ``cx``; anything the
router inserts (SWAP, bridged CNOT) is expressed as plain ``cx`` gates, so the
emitted text stays inside the same subset it parses.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import MultiRegisterError, QasmError, UnsupportedGateError

ONE_QUBIT_GATES = frozenset(
    {"id", "x", "y", "z", "h", "s", "sdg", "t", "tdg", "rx", "ry", "rz", "u1", "u2", "u3"}
)

PARAM_COUNTS = {name: 0 for name in ONE_QUBIT_GATES}
PARAM_COUNTS.update({"rx": 1, "ry": 1, "rz": 1, "u1": 1, "u2": 2, "u3": 3, "cx": 0})

CX = "cx"
MEASURE = "measure"
BARRIER = "barrier"


@dataclass(frozen=True)
class Gate:
    """One operation: a supported 1q gate, ``cx``, ``measure`` or ``barrier``.

    ``clbit`` is set only for measurements.  Barriers may span any number of
    qubits; every other kind touches one or two.
    """

    kind: str
    qubits: tuple[int, ...]
    params: tuple[float, ...] = ()
    clbit: int | None = None

    def __post_init__(self):
        if self.kind == CX and (len(self.qubits) != 2 or self.qubits[0] == self.qubits[1]):
            raise ValueError(f"cx needs two distinct qubits, got {self.qubits}")

    @property
    def is_two_qubit(self) -> bool:
        return self.kind == CX


@dataclass(frozen=True)
class QuantumCircuit:
    id: str
    num_qubits: int
    num_clbits: int
    gates: tuple[Gate, ...]

    def __post_init__(self):
        for g in self.gates:
            for q in g.qubits:
                if not 0 <= q < self.num_qubits:
                    raise ValueError(f"gate {g.kind} references qubit {q} outside register of size {self.num_qubits}")

    @property
    def cnot_count(self) -> int:
        return sum(1 for g in self.gates if g.kind == CX)


@dataclass(frozen=True)
class CircuitStats:
    qubit_count: int
    cnot_count: int
    density: Fraction
    largest_logical_degree: int


def stats(circuit: QuantumCircuit) -> CircuitStats:
    """Per-circuit numbers used for ordering and partition sizing.

    ``density`` is CNOTs per qubit, kept exact as a fraction so that sorting
    and the identity density * qubit_count == cnot_count never suffer float
    rounding.  ``largest_logical_degree`` counts distinct CX partners.
    """
    if circuit.num_qubits < 1:
        raise ValueError("circuit must have at least one qubit")
    partners: dict[int, set[int]] = {}
    cnots = 0
    for g in circuit.gates:
        if g.kind == CX:
            cnots += 1
            a, b = g.qubits
            partners.setdefault(a, set()).add(b)
            partners.setdefault(b, set()).add(a)
    largest = max((len(s) for s in partners.values()), default=0)
    return CircuitStats(
        qubit_count=circuit.num_qubits,
        cnot_count=cnots,
        density=Fraction(cnots, circuit.num_qubits),
        largest_logical_degree=largest,
    )


class DagCircuit:
    """Dependency DAG over gate indices.

    An edge a -> b exists iff the two gates share a qubit and no gate between
    them touches that qubit.  Barriers participate like any other node, which
    makes them scheduling fences for every qubit they span.
    """

    def __init__(self, circuit: QuantumCircuit):
        self.circuit = circuit
        n = len(circuit.gates)
        succ: list[set[int]] = [set() for _ in range(n)]
        pred: list[set[int]] = [set() for _ in range(n)]
        last_on: dict[int, int] = {}
        for i, g in enumerate(circuit.gates):
            for q in g.qubits:
                if q in last_on:
                    succ[last_on[q]].add(i)
                    pred[i].add(last_on[q])
                last_on[q] = i
        self.successors = [tuple(sorted(s)) for s in succ]
        self.predecessors = [tuple(sorted(p)) for p in pred]

    @property
    def num_nodes(self) -> int:
        return len(self.circuit.gates)

    def gate(self, node: int) -> Gate:
        return self.circuit.gates[node]

    def front_layer(self) -> list[int]:
        """Nodes with no predecessors."""
        return [i for i in range(self.num_nodes) if not self.predecessors[i]]

    def in_degrees(self) -> list[int]:
        return [len(p) for p in self.predecessors]


def build_dag(circuit: QuantumCircuit) -> DagCircuit:
    return DagCircuit(circuit)


# --- parsing ---------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"(?P<real>\d+\.\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?|\d+[eE][+-]?\d+)"
    r"|(?P<int>\d+)|(?P<id>[A-Za-z_][A-Za-z0-9_]*)|(?P<string>\"[^\"]*\")|(?P<arrow>->)|(?P<sym>[;,()\[\]+\-*/])"
)


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(source: str) -> list[_Token]:
    tokens = []
    for lineno, line in enumerate(source.split("\n"), start=1):
        pos = 0
        while pos < len(line):
            if line[pos].isspace():
                pos += 1
                continue
            if line.startswith("//", pos):
                break
            m = _TOKEN_RE.match(line, pos)
            if m is None:
                raise QasmError(f"unexpected character {line[pos]!r}", lineno, pos + 1)
            tokens.append(_Token(m.lastgroup, m.group(m.lastgroup), lineno, pos + 1))
            pos = m.end()
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> _Token | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def next(self) -> _Token:
        tok = self.peek()
        if tok is None:
            last = self.tokens[-1] if self.tokens else None
            raise QasmError("unexpected end of input", last.line if last else 1, last.col if last else 1)
        self.pos += 1
        return tok

    def expect(self, text: str) -> _Token:
        tok = self.next()
        if tok.text != text:
            raise QasmError(f"expected {text!r}, got {tok.text!r}", tok.line, tok.col)
        return tok

    def expect_kind(self, kind: str, what: str) -> _Token:
        tok = self.next()
        if tok.kind != kind:
            raise QasmError(f"expected {what}, got {tok.text!r}", tok.line, tok.col)
        return tok

    # parameter expressions: + - * / with parentheses, numbers and pi
    def parse_expr(self) -> float:
        value = self.parse_term()
        while (tok := self.peek()) is not None and tok.text in "+-":
            self.next()
            rhs = self.parse_term()
            value = value + rhs if tok.text == "+" else value - rhs
        return value

    def parse_term(self) -> float:
        value = self.parse_factor()
        while (tok := self.peek()) is not None and tok.text in "*/":
            self.next()
            rhs = self.parse_factor()
            if tok.text == "*":
                value *= rhs
            else:
                if rhs == 0:
                    raise QasmError("division by zero in parameter", tok.line, tok.col)
                value /= rhs
        return value

    def parse_factor(self) -> float:
        tok = self.next()
        if tok.text == "-":
            return -self.parse_factor()
        if tok.text == "+":
            return self.parse_factor()
        if tok.text == "(":
            value = self.parse_expr()
            self.expect(")")
            return value
        if tok.kind in ("real", "int"):
            return float(tok.text)
        if tok.text == "pi":
            return math.pi
        raise QasmError(f"bad parameter expression near {tok.text!r}", tok.line, tok.col)


def _parse_program(source: str, allow_multiple_cregs: bool):
    """Shared parser core.

    Returns (num_qubits, creg_sizes, gates).  ``creg_sizes`` is an ordered
    dict creg name -> size; clbit indices in gates are global across cregs in
    declaration order.
    """
    parser = _Parser(_tokenize(source))
    qreg: tuple[str, int] | None = None
    cregs: dict[str, int] = {}
    creg_offsets: dict[str, int] = {}
    gates: list[Gate] = []

    def creg_total() -> int:
        return sum(cregs.values())

    def parse_ref(expect_reg: str | None):
        name_tok = parser.expect_kind("id", "register name")
        reg = name_tok.text
        idx = None
        if parser.peek() is not None and parser.peek().text == "[":
            parser.next()
            idx_tok = parser.expect_kind("int", "index")
            idx = int(idx_tok.text)
            parser.expect("]")
        if expect_reg == "q":
            if qreg is None or reg != qreg[0]:
                raise QasmError(f"unknown quantum register {reg!r}", name_tok.line, name_tok.col)
            size = qreg[1]
        else:
            if reg not in cregs:
                raise QasmError(f"unknown classical register {reg!r}", name_tok.line, name_tok.col)
            size = cregs[reg]
        if idx is not None and not 0 <= idx < size:
            raise QasmError(f"index {idx} out of range for {reg}[{size}]", name_tok.line, name_tok.col)
        return reg, idx, name_tok

    while (tok := parser.peek()) is not None:
        if tok.text == "OPENQASM":
            parser.next()
            ver = parser.next()
            if ver.text != "2.0":
                raise QasmError(f"unsupported OpenQASM version {ver.text}", ver.line, ver.col)
            parser.expect(";")
        elif tok.text == "include":
            parser.next()
            parser.expect_kind("string", "include path")
            parser.expect(";")
        elif tok.text == "qreg":
            parser.next()
            name = parser.expect_kind("id", "register name").text
            parser.expect("[")
            size = int(parser.expect_kind("int", "register size").text)
            parser.expect("]")
            parser.expect(";")
            if qreg is not None:
                raise MultiRegisterError("multiple quantum registers are not supported", tok.line, tok.col)
            if size < 1:
                raise QasmError("quantum register must have at least one qubit", tok.line, tok.col)
            qreg = (name, size)
        elif tok.text == "creg":
            parser.next()
            name = parser.expect_kind("id", "register name").text
            parser.expect("[")
            size = int(parser.expect_kind("int", "register size").text)
            parser.expect("]")
            parser.expect(";")
            if cregs and not allow_multiple_cregs:
                raise MultiRegisterError("multiple classical registers are not supported", tok.line, tok.col)
            if name in cregs:
                raise QasmError(f"classical register {name!r} redeclared", tok.line, tok.col)
            creg_offsets[name] = creg_total()
            cregs[name] = size
        elif tok.text == "measure":
            parser.next()
            qreg_name, qidx, _ = parse_ref("q")
            parser.expect("->")
            creg_name, cidx, ctok = parse_ref("c")
            parser.expect(";")
            offset = creg_offsets[creg_name]
            if qidx is None and cidx is None:
                if qreg[1] != cregs[creg_name]:
                    raise QasmError(
                        f"register sizes differ in measure {qreg_name} -> {creg_name}", ctok.line, ctok.col
                    )
                for i in range(qreg[1]):
                    gates.append(Gate(MEASURE, (i,), clbit=offset + i))
            elif qidx is not None and cidx is not None:
                gates.append(Gate(MEASURE, (qidx,), clbit=offset + cidx))
            else:
                raise QasmError("measure must index both registers or neither", ctok.line, ctok.col)
        elif tok.text == "barrier":
            parser.next()
            touched: list[int] = []
            while True:
                _, idx, _ = parse_ref("q")
                if idx is None:
                    touched.extend(i for i in range(qreg[1]) if i not in touched)
                elif idx not in touched:
                    touched.append(idx)
                if parser.peek() is not None and parser.peek().text == ",":
                    parser.next()
                    continue
                break
            parser.expect(";")
            gates.append(Gate(BARRIER, tuple(touched)))
        elif tok.kind == "id":
            parser.next()
            name = tok.text
            if name in ("gate", "opaque", "if", "reset"):
                raise QasmError(f"unsupported statement {name!r}", tok.line, tok.col)
            if name not in ONE_QUBIT_GATES and name != CX:
                raise UnsupportedGateError(f"unsupported gate {name!r}", tok.line, tok.col)
            params: list[float] = []
            if parser.peek() is not None and parser.peek().text == "(":
                parser.next()
                params.append(parser.parse_expr())
                while parser.peek() is not None and parser.peek().text == ",":
                    parser.next()
                    params.append(parser.parse_expr())
                parser.expect(")")
            want = PARAM_COUNTS[name]
            if len(params) != want:
                raise QasmError(f"gate {name!r} takes {want} parameter(s), got {len(params)}", tok.line, tok.col)
            refs = []
            while True:
                refs.append(parse_ref("q"))
                if parser.peek() is not None and parser.peek().text == ",":
                    parser.next()
                    continue
                break
            parser.expect(";")
            if name == CX:
                if len(refs) != 2 or refs[0][1] is None or refs[1][1] is None:
                    raise QasmError("cx needs two indexed qubit arguments", tok.line, tok.col)
                if refs[0][1] == refs[1][1]:
                    raise QasmError("cx control and target must differ", tok.line, tok.col)
                gates.append(Gate(CX, (refs[0][1], refs[1][1]), tuple(params)))
            else:
                if len(refs) != 1:
                    raise QasmError(f"gate {name!r} takes one qubit argument", tok.line, tok.col)
                idx = refs[0][1]
                if idx is None:  # broadcast over the register
                    for i in range(qreg[1]):
                        gates.append(Gate(name, (i,), tuple(params)))
                else:
                    gates.append(Gate(name, (idx,), tuple(params)))
        else:
            raise QasmError(f"unexpected token {tok.text!r}", tok.line, tok.col)

    if qreg is None:
        raise QasmError("no quantum register declared", 1, 1)
    return qreg[1], cregs, gates


def parse_qasm(source: str, circuit_id: str = "circuit") -> QuantumCircuit:
    """Parse the supported OpenQASM 2.0 subset into a circuit.

    Supported statements: optional ``OPENQASM 2.0;`` header and ``include``,
    one ``qreg``, at most one ``creg``, the 1q gate set, ``cx``, ``measure``
    and ``barrier``.  Errors carry line/column positions; unsupported gates
    are reported by name rather than silently decomposed.
    """
    num_qubits, cregs, gates = _parse_program(source, allow_multiple_cregs=False)
    return QuantumCircuit(circuit_id, num_qubits, sum(cregs.values()), tuple(gates))


def parse_merged_qasm(source: str, circuit_id: str = "merged"):
    """Parse compiler output, which carries one creg per merged circuit.

    Returns (circuit, creg_layout) where creg_layout maps creg name to
    (offset, size) in declaration order.  Workload inputs should go through
    :func:`parse_qasm`, which enforces the single-register rule.
    """
    num_qubits, cregs, gates = _parse_program(source, allow_multiple_cregs=True)
    layout = {}
    offset = 0
    for name, size in cregs.items():
        layout[name] = (offset, size)
        offset += size
    circuit = QuantumCircuit(circuit_id, num_qubits, offset, tuple(gates))
    return circuit, layout


# --- emission ---------------------------------------------------------------


def _format_gate(g: Gate, qname: str = "q", clbit_ref=None) -> str:
    if g.kind == MEASURE:
        target = clbit_ref(g.clbit) if clbit_ref else f"c[{g.clbit}]"
        return f"measure {qname}[{g.qubits[0]}] -> {target};"
    if g.kind == BARRIER:
        args = ",".join(f"{qname}[{q}]" for q in g.qubits)
        return f"barrier {args};"
    head = g.kind
    if g.params:
        head += "(" + ",".join(repr(p) for p in g.params) + ")"
    args = ",".join(f"{qname}[{q}]" for q in g.qubits)
    return f"{head} {args};"


def emit_qasm(circuit: QuantumCircuit) -> str:
    """Render a circuit back to the same subset it was parsed from."""
    lines = ['OPENQASM 2.0;', 'include "qelib1.inc";', f"qreg q[{circuit.num_qubits}];"]
    if circuit.num_clbits:
        lines.append(f"creg c[{circuit.num_clbits}];")
    lines.extend(_format_gate(g) for g in circuit.gates)
    return "\n".join(lines) + "\n"
