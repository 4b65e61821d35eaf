"""Density of approximable z-rotations: RUS designs against unitary circuits.

Grey points are x = x0 / sqrt(|x0|^2 + |y0|^2) for x0, y0 in Z[w] with
2^ell - |x0|^2 - |y0|^2 totally nonnegative; blue points are those for which
that remainder is a norm |w|^2.  Blue points with y0 = 0 are exact
z-rotations reachable by a one-ancilla RUS protocol.  Red points are the
top-left entries x0 / sqrt2^k of unitary matrices over Z[w, 1/sqrt2] with
k <= red_ell.

Everything is restricted to the quadrant 0 <= arg x <= pi/2.  The counts are
informational; deduplication is by exact value.
"""

from __future__ import annotations

import cmath
import itertools
import math
import random
from dataclasses import dataclass, field

from . import normeq
from .ring import CyclotomicInt, Root2Int

MAX_ELL = 4


@dataclass
class DensityReport:
    ell: int
    red_ell: int
    grey: list[complex] = field(default_factory=list)
    blue: list[complex] = field(default_factory=list)
    rotations: list[float] = field(default_factory=list)  # phases of blue points with y0 = 0
    red: list[complex] = field(default_factory=list)
    eps_max: float = 0.0
    red_within: int = 0
    checked: int = 0  # blue points whose solution y was re-verified

    def summary(self) -> dict:
        return {
            "ell": self.ell,
            "red_ell": self.red_ell,
            "grey": len(self.grey),
            "blue": len(self.blue),
            "blue_rotations": len(self.rotations),
            "eps_max": self.eps_max,
            "red": len(self.red),
            "red_within_eps_max": self.red_within,
            "blue_verified": self.checked,
        }


def _small_elements(bound: int) -> list[CyclotomicInt]:
    """x in Z[w] with both embeddings of |x|^2 at most ``bound``.

    The two embeddings sum to 2 (a^2 + b^2 + c^2 + d^2), so the coefficient
    box is finite."""
    m = math.isqrt(bound)
    out = []
    for a, b, c, d in itertools.product(range(-m, m + 1), repeat=4):
        if a * a + b * b + c * c + d * d > bound:
            continue
        x = CyclotomicInt(a, b, c, d)
        n = x.abs_squared()
        if _nonneg(Root2Int(bound, 0) - n):
            out.append(x)
    return out


def _nonneg(x: Root2Int) -> bool:
    return x.sign() >= 0 and x.bullet().sign() >= 0


def _solvable(xi: Root2Int, rng) -> bool:
    """Easily solvable, with the returned y re-checked exactly."""
    if xi == 0:
        return True
    _, w = normeq.solve(xi, rng=rng)
    return w is not None and w.abs_squared() == xi


def _in_quadrant(v: complex, tol: float = 1e-12) -> bool:
    return v.real >= -tol and v.imag >= -tol and abs(v) > tol


def _key(v: complex) -> tuple[float, float]:
    return (round(v.real, 10), round(v.imag, 10))


def rotation_distance(a: float, b: float) -> float:
    """d between diag(e^{ia}, e^{-ia}) and diag(e^{ib}, e^{-ib})."""
    x = math.acos(min(1.0, abs(math.cos(a - b))))
    return math.sqrt(2) * math.sin(x / 2)


def nearest_neighbor_max(phases: list[float]) -> float:
    """Largest nearest-neighbour distance among sorted phases."""
    ph = sorted(phases)
    if len(ph) < 2:
        return 0.0
    worst = 0.0
    for i, a in enumerate(ph):
        near = min(rotation_distance(a, ph[j]) for j in (i - 1, i + 1) if 0 <= j < len(ph))
        worst = max(worst, near)
    return worst


def density(ell: int, red_ell: int | None = None, seed: int = 0) -> DensityReport:
    if not 0 <= ell <= MAX_ELL:
        raise ValueError(f"ell must lie in [0, {MAX_ELL}]")
    red_ell = ell + 1 if red_ell is None else red_ell
    rng = random.Random(seed)
    rep = DensityReport(ell, red_ell)
    bound = 1 << ell
    elems = _small_elements(bound)
    norms = [x.abs_squared() for x in elems]
    grey, blue, rot = {}, {}, {}
    solved: dict[Root2Int, bool] = {}
    for x, nx in zip(elems, norms):
        if not x:
            continue
        vx = complex(x)
        if not _in_quadrant(vx):
            continue
        for y, ny in zip(elems, norms):
            xi = Root2Int(bound, 0) - nx - ny
            if not _nonneg(xi):
                continue
            v = vx / math.sqrt(float(nx + ny))
            grey.setdefault(_key(v), v)
            if xi not in solved:
                ok = _solvable(xi, rng)
                solved[xi] = ok
                rep.checked += ok
            if solved[xi]:
                blue.setdefault(_key(v), v)
                if not y:
                    rot.setdefault(round(cmath.phase(vx), 10), cmath.phase(vx))
    rep.grey = list(grey.values())
    rep.blue = list(blue.values())
    rep.rotations = sorted(rot.values())
    rep.eps_max = nearest_neighbor_max(rep.rotations)

    red = {}
    for k in range(red_ell + 1):
        for x in _small_elements(1 << k):
            xi = Root2Int(1 << k, 0) - x.abs_squared()
            if not x or not _nonneg(xi):
                continue
            v = complex(x) / math.sqrt(2) ** k
            if not _in_quadrant(v) or _key(v) in red:
                continue
            if xi not in solved:
                solved[xi] = _solvable(xi, rng)
            if solved[xi]:
                red[_key(v)] = v
    rep.red = list(red.values())
    # distance to the nearest z-rotation is sqrt(1 - |x|)
    rep.red_within = sum(1 for v in rep.red if math.sqrt(max(0.0, 1 - abs(v))) <= rep.eps_max)
    return rep
