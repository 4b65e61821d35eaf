"""Clifford+T gates, single-qubit words and multi-qubit circuits.

Convention: a word or circuit lists gates in time order (first applied first).
The matrix of ``g1 g2 ... gn`` is therefore ``gn @ ... @ g1``.  Qubit 0 is the
most significant bit of a basis index.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from ._core import apply_1q, zw_abs2
from .ring import ONE, ZERO, CyclotomicInt, RingUnitary, Root2Int

ONE_QUBIT = ("H", "T", "Tdg", "S", "Sdg", "X", "Y", "Z")
TWO_QUBIT = ("CX", "CY", "CZ", "SWAP")
PAULIS = ("I", "X", "Y", "Z")
PHASE = "W"

_INVERSE = {"H": "H", "T": "Tdg", "Tdg": "T", "S": "Sdg", "Sdg": "S", "X": "X", "Y": "Y", "Z": "Z"}


class CircuitError(ValueError):
    pass


def w(k: int) -> CyclotomicInt:
    return CyclotomicInt.omega_power(k)


@lru_cache(maxsize=None)
def gate_matrix(token: str) -> RingUnitary:
    """Exact 2x2 matrix of a single-qubit token (``w^k`` is the scalar omega^k)."""
    if token.startswith("w"):
        k = phase_power(token)
        return RingUnitary([[w(k), ZERO], [ZERO, w(k)]], 0)
    i = w(2)
    table = {
        "I": ([[ONE, ZERO], [ZERO, ONE]], 0),
        "H": ([[ONE, ONE], [ONE, -ONE]], 1),
        "T": ([[ONE, ZERO], [ZERO, w(1)]], 0),
        "Tdg": ([[ONE, ZERO], [ZERO, w(7)]], 0),
        "S": ([[ONE, ZERO], [ZERO, w(2)]], 0),
        "Sdg": ([[ONE, ZERO], [ZERO, w(6)]], 0),
        "X": ([[ZERO, ONE], [ONE, ZERO]], 0),
        "Y": ([[ZERO, -i], [i, ZERO]], 0),
        "Z": ([[ONE, ZERO], [ZERO, -ONE]], 0),
    }
    if token not in table:
        raise CircuitError(f"unknown gate {token!r}")
    entries, L = table[token]
    return RingUnitary(entries, L)


def phase_power(token: str) -> int:
    if token == "w":
        return 1
    if token.startswith("w^"):
        return int(token[2:]) % 8
    raise CircuitError(f"not a phase token: {token!r}")


def phase_token(k: int) -> str:
    return f"w^{k % 8}"


def is_phase(token: str) -> bool:
    return token == "w" or token.startswith("w^")


# ---------------------------------------------------------------------------
# single-qubit words


def parse_word(text: str) -> tuple[str, ...]:
    out = []
    for tok in text.split():
        if tok == "I":
            continue
        if is_phase(tok):
            out.append(phase_token(phase_power(tok)))
        elif tok in _INVERSE:
            out.append(tok)
        else:
            raise CircuitError(f"unknown gate {tok!r}")
    return tuple(out)


def format_word(word: Sequence[str]) -> str:
    return " ".join(word) if word else "I"


def word_matrix(word: Iterable[str]) -> RingUnitary:
    m = RingUnitary.identity(2)
    for tok in word:
        m = gate_matrix(tok) @ m
    return m


def invert_word(word: Sequence[str]) -> tuple[str, ...]:
    out = []
    for tok in reversed(word):
        if is_phase(tok):
            out.append(phase_token(-phase_power(tok)))
        else:
            out.append(_INVERSE[tok])
    return tuple(out)


def word_tcount(word: Iterable[str]) -> int:
    return sum(1 for tok in word if tok in ("T", "Tdg"))


def simplify_phases(word: Sequence[str]) -> tuple[str, ...]:
    """Collect all omega powers into one leading token (phases are scalars)."""
    k = 0
    rest = []
    for tok in word:
        if is_phase(tok):
            k += phase_power(tok)
        else:
            rest.append(tok)
    k %= 8
    return ((phase_token(k),) if k else ()) + tuple(rest)


def diag_phase_word(k: int) -> tuple[str, ...]:
    """Word for diag(1, w^k) with at most one T gate."""
    return {
        0: (),
        1: ("T",),
        2: ("S",),
        3: ("S", "T"),
        4: ("Z",),
        5: ("Z", "T"),
        6: ("Sdg",),
        7: ("Tdg",),
    }[k % 8]


# ---------------------------------------------------------------------------
# multi-qubit circuits


@dataclass(frozen=True)
class Gate:
    name: str
    qubits: tuple[int, ...] = ()
    params: tuple[int, ...] = ()

    def to_json(self) -> dict:
        return {"gate": self.name, "qubits": list(self.qubits), "params": list(self.params)}

    @classmethod
    def from_json(cls, data: dict) -> Gate:
        return cls(data["gate"], tuple(data.get("qubits", ())), tuple(data.get("params", ())))

    def inverse(self) -> Gate:
        if self.name == PHASE:
            return Gate(PHASE, (), ((-self.params[0]) % 8,))
        if self.name in _INVERSE:
            return Gate(_INVERSE[self.name], self.qubits)
        return self

    def __str__(self) -> str:
        if self.name == PHASE:
            return phase_token(self.params[0])
        return f"{self.name}({','.join(map(str, self.qubits))})"


@dataclass
class Circuit:
    nqubits: int
    gates: list[Gate] = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.gates)

    def __iter__(self):
        return iter(self.gates)

    def copy(self) -> Circuit:
        return Circuit(self.nqubits, list(self.gates), dict(self.meta))

    def add(self, name: str, *qubits: int, params: Sequence[int] = ()) -> Circuit:
        if name == PHASE:
            k = params[0] % 8
            if k:
                self.gates.append(Gate(PHASE, (), (k,)))
            return self
        for q in qubits:
            if not 0 <= q < self.nqubits:
                raise CircuitError(f"qubit {q} out of range for {self.nqubits}-qubit circuit")
        if name in ONE_QUBIT:
            if len(qubits) != 1:
                raise CircuitError(f"{name} acts on one qubit")
        elif name in TWO_QUBIT:
            if len(qubits) != 2 or qubits[0] == qubits[1]:
                raise CircuitError(f"{name} needs two distinct qubits")
        else:
            raise CircuitError(f"unknown gate {name!r}")
        self.gates.append(Gate(name, tuple(qubits)))
        return self

    def add_word(self, word: Iterable[str], qubit: int) -> Circuit:
        for tok in word:
            if is_phase(tok):
                self.add(PHASE, params=(phase_power(tok),))
            else:
                self.add(tok, qubit)
        return self

    def extend(self, other: Circuit) -> Circuit:
        if other.nqubits != self.nqubits:
            raise CircuitError("qubit count mismatch")
        self.gates.extend(other.gates)
        return self

    def inverse(self) -> Circuit:
        return Circuit(self.nqubits, [g.inverse() for g in reversed(self.gates)], dict(self.meta))

    def tcount(self) -> int:
        return sum(1 for g in self.gates if g.name in ("T", "Tdg"))

    def tdepth(self) -> int:
        """T layers under as-soon-as-possible scheduling (Clifford gates are free)."""
        depth = [0] * self.nqubits
        for g in self.gates:
            if not g.qubits:
                continue
            d = max(depth[q] for q in g.qubits)
            if g.name in ("T", "Tdg"):
                d += 1
            for q in g.qubits:
                depth[q] = d
        return max(depth, default=0)

    def count(self, *names: str) -> int:
        return sum(1 for g in self.gates if g.name in names)

    def global_phase(self) -> int:
        return sum(g.params[0] for g in self.gates if g.name == PHASE) % 8

    # -- exact and float evaluation --------------------------------------

    def unitary(self) -> RingUnitary:
        """Exact matrix, built column by column."""
        n = self.nqubits
        dim = 1 << n
        cols = [[(0, 0, 0, 0)] * dim for _ in range(dim)]
        for j in range(dim):
            cols[j][j] = (0, 0, 0, 1)
        L = 0
        for g in self.gates:
            L += apply_gate_raw(cols, n, g)
        rows = [[CyclotomicInt(*cols[j][i]) for j in range(dim)] for i in range(dim)]
        return RingUnitary(rows, L)

    def unitary_float(self) -> np.ndarray:
        n = self.nqubits
        state = np.eye(1 << n, dtype=complex)
        for g in self.gates:
            state = apply_gate_float(state, n, g)
        return state

    # -- serialisation ---------------------------------------------------

    def to_json(self) -> dict:
        return {
            "nqubits": self.nqubits,
            "gates": [g.to_json() for g in self.gates],
            "meta": self.meta,
        }

    @classmethod
    def from_json(cls, data: dict) -> Circuit:
        c = cls(int(data["nqubits"]), [], dict(data.get("meta", {})))
        for rec in data["gates"]:
            g = Gate.from_json(rec)
            if g.name == PHASE:
                c.add(PHASE, params=g.params)
            else:
                c.add(g.name, *g.qubits)
        return c

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1)

    @classmethod
    def from_word(cls, word: Iterable[str], nqubits: int = 1, qubit: int = 0) -> Circuit:
        return cls(nqubits).add_word(word, qubit)

    def to_word(self) -> tuple[str, ...]:
        if self.nqubits != 1:
            raise CircuitError("only single-qubit circuits have a word form")
        return tuple(phase_token(g.params[0]) if g.name == PHASE else g.name for g in self.gates)

    def listing(self, ancilla: int = 1) -> str:
        """Human-readable listing: controlled Paulis as Λ(P), local runs as (...)_q."""
        parts: list[str] = []
        run: list[str] = []
        run_q: int | None = None

        def flush():
            nonlocal run, run_q
            if run:
                parts.append(f"({' '.join(run)})_{run_q}")
            run, run_q = [], None

        names = {"CX": "X", "CY": "Y", "CZ": "Z"}
        for g in self.gates:
            if g.name in ONE_QUBIT:
                q = g.qubits[0]
                if run_q is not None and q != run_q:
                    flush()
                run_q = q
                run.append(g.name)
                continue
            flush()
            if g.name == PHASE:
                parts.append(phase_token(g.params[0]))
            elif g.name in names and self.nqubits == 2:
                parts.append(f"Λ({names[g.name]})")
            else:
                parts.append(str(g))
        flush()
        return " ".join(parts) if parts else "I"


def _raw(m: RingUnitary):
    return [tuple(x) for row in m.entries for x in row]


@lru_cache(maxsize=None)
def _raw_gate(name: str):
    m = gate_matrix(name)
    return _raw(m), m.L


def apply_gate_raw(cols, n: int, g: Gate) -> int:
    """Apply ``g`` in place to each raw column; return the added denominator exponent."""
    if g.name == PHASE:
        k = g.params[0] % 8
        for idx, col in enumerate(cols):
            cols[idx] = [_times_omega(a, k) for a in col]
        return 0
    if g.name in ONE_QUBIT:
        (m00, m01, m10, m11), L = _raw_gate(g.name)
        q = g.qubits[0]
        for idx, col in enumerate(cols):
            cols[idx] = apply_1q(col, n, q, m00, m01, m10, m11)
        return L
    c, t = g.qubits
    bc = 1 << (n - 1 - c)
    bt = 1 << (n - 1 - t)
    dim = 1 << n
    for col in cols:
        for i in range(dim):
            if g.name == "SWAP":
                if (i & bc) and not (i & bt):
                    j = (i ^ bc) | bt
                    col[i], col[j] = col[j], col[i]
            elif i & bc:
                if g.name == "CX":
                    if not (i & bt):
                        j = i | bt
                        col[i], col[j] = col[j], col[i]
                elif g.name == "CZ":
                    if i & bt:
                        a = col[i]
                        col[i] = (-a[0], -a[1], -a[2], -a[3])
                elif g.name == "CY":
                    if not (i & bt):
                        j = i | bt
                        a0, a1 = col[i], col[j]
                        # (a0, a1) -> (-i a1, i a0)
                        col[i] = _times_omega(a1, 6)
                        col[j] = _times_omega(a0, 2)
                else:
                    raise CircuitError(f"unknown gate {g.name!r}")
    return 0


def _times_omega(a, k: int):
    a0, a1, a2, a3 = a
    for _ in range(k % 8):
        a0, a1, a2, a3 = a1, a2, a3, -a0
    return (a0, a1, a2, a3)


_FLOAT_1Q: dict[str, np.ndarray] = {}


def float_gate(name: str) -> np.ndarray:
    if name not in _FLOAT_1Q:
        _FLOAT_1Q[name] = gate_matrix(name).to_numpy()
    return _FLOAT_1Q[name]


def apply_gate_float(state: np.ndarray, n: int, g: Gate) -> np.ndarray:
    """Apply to a state vector (1-d) or to every column of a matrix (2-d)."""
    vec = state.ndim == 1
    psi = state.reshape((2,) * n + (-1,))
    if g.name == PHASE:
        out = psi * np.exp(1j * np.pi * g.params[0] / 4)
    elif g.name in ONE_QUBIT:
        q = g.qubits[0]
        out = np.moveaxis(np.tensordot(float_gate(g.name), psi, axes=([1], [q])), 0, q)
    else:
        c, t = g.qubits
        out = psi.copy()
        idx1 = [slice(None)] * (n + 1)
        idx1[c] = 1
        sub = out[tuple(idx1)]
        tq = t if t < c else t - 1
        if g.name == "SWAP":
            out = np.swapaxes(psi, c, t).copy()
        else:
            P = float_gate({"CX": "X", "CY": "Y", "CZ": "Z"}[g.name])
            sub = np.moveaxis(np.tensordot(P, sub, axes=([1], [tq])), 0, tq)
            out[tuple(idx1)] = sub
    out = out.reshape(state.shape)
    return out if not vec else out.reshape(-1)


def controlled_phase_word(k: int) -> tuple[str, ...]:
    """Gates on the control realising Λ(w^k) = diag(1, w^k) on that qubit."""
    return diag_phase_word(k)


def norm_squared(amps) -> Root2Int:
    a = b = 0
    for x in amps:
        s, t = zw_abs2(*x)
        a += s
        b += t
    return Root2Int(a, b)
