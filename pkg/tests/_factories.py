"""Random optimal base codes shared by the conversion and acceptance tests."""

from __future__ import annotations

import random

from lrcc.construct import BaseCode, BaseCodeASpec, ConditionGViolated, build_base_a
from lrcc.gf import make_tower
from lrcc.lrc import Regime, is_optimal_lrc

# (r, delta, g) shapes with g <= 8 where random points often give an optimal
# code; r = 1 codes meet the standard bound, the others the improved one
SHAPES = [(1, 2, 3), (1, 2, 8), (1, 3, 4), (1, 3, 5), (2, 2, 5), (2, 2, 7), (3, 2, 4), (3, 2, 6), (2, 3, 3), (3, 3, 3)]
FIELD = make_tower(37)


def random_optimal_base(rng: random.Random, shape: tuple[int, int, int], field=FIELD, tries: int = 200) -> BaseCode:
    """Base-A code with g - l = 1, verified optimal by computation.

    Points inside a group are distinct; groups may overlap.  Candidates that
    violate the union-size condition or meet neither distance bound are
    resampled.  The regime whose bound is met is stored in ``params["regime"]``.
    """
    r, delta, g = shape
    w = r + delta - 1
    for _ in range(tries):
        G = tuple(tuple(rng.sample(range(field.order), w)) for _ in range(g))
        try:
            base = build_base_a(BaseCodeASpec(field, r, delta, r + delta, G))
        except ConditionGViolated:
            continue
        if base.code.k != (g - 1) * r:
            continue
        for regime in (Regime.IMPROVED, Regime.STANDARD):
            if is_optimal_lrc(base.code, base.partition, regime):
                base.params["regime"] = regime.value
                return base
    raise RuntimeError(f"no optimal base found for shape {shape}")


def plan_choices(base: BaseCode) -> list[tuple[int, int]]:
    """All (t, h) with t | l, l/t > g - l >= h >= 0."""
    g, l = base.g, base.code.k // base.r
    return [(t, h) for t in range(1, l + 1) if l % t == 0 and l // t > g - l for h in range(0, g - l + 1)]
