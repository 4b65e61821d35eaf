"""Seeded, splittable random streams."""

from __future__ import annotations

import os
import random

SEED_ENV = "RUS_FORGE_SEED"


def resolve_seed(seed: int | None, required: bool = False) -> int | None:
    """Explicit seed, else the environment fallback."""
    if seed is not None:
        return int(seed)
    env = os.environ.get(SEED_ENV)
    if env not in (None, ""):
        return int(env)
    if required:
        raise ValueError(f"a seed is required (pass --seed or set {SEED_ENV})")
    return None


def stream(seed: int | None, label: str) -> random.Random:
    """Independent stream for one consumer; same (seed, label) gives the same sequence."""
    return random.Random(f"{0 if seed is None else seed}:{label}")
