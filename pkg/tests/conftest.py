from __future__ import annotations

import random

import pytest

from rusforge.circuits import word_matrix

GATES = ("H", "S", "Sdg", "T", "Tdg", "X", "Y", "Z")


def random_word(rng: random.Random, max_t: int = 12, length: int | None = None) -> tuple[str, ...]:
    """Random single-qubit word with at most ``max_t`` T gates."""
    length = rng.randint(0, 3 * max_t) if length is None else length
    out, t = [], 0
    for _ in range(length):
        g = rng.choice(GATES)
        if g in ("T", "Tdg"):
            if t >= max_t:
                g = "H"
            else:
                t += 1
        out.append(g)
    return tuple(out)


def special(word):
    """word matrix times a phase so that det == 1, or None when impossible."""
    from rusforge.ring import SQRT2_Z, determinant

    m = word_matrix(word)
    det, k = determinant(m)
    for j in range(8):
        if det.times_omega(2 * j) == SQRT2_Z**k:
            return m.times_omega(j)
    return None


@pytest.fixture
def rng():
    return random.Random(12345)
