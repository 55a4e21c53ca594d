#!/usr/bin/env python3
"""Rebuild the GF(49) base-A instance and run merge conversions on it.

Prints the initial and final code parameters, the coset leaders, the access
counts of a batch of conversions and the audit table.
"""

from __future__ import annotations

import argparse

import numpy as np

from lrcc.construct import (
    build_base_a,
    coset_family_base_a,
    example1_initial_spec,
    example1_leaders,
    example1_final_spec,
)
from lrcc.convert import audit_optimality, certify_same_initial, convert, convert_same_initial, final_matches_puncture, make_plan
from lrcc.lrc import Regime, is_optimal_lrc


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--runs", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    init = build_base_a(example1_initial_spec())
    F = init.code.tower
    print(f"field: {F}")
    print(f"initial code: {list(init.code.params)}")
    leaders = example1_leaders()
    print("coset leaders:", ", ".join(F.fmt(x) for x in leaders))
    family = [build_base_a(s).code for s in coset_family_base_a(example1_initial_spec(), 6, leaders, shared=(2,))]
    print(f"scaled initial codes equal: {all(c.same_code(init.code) for c in family)}")

    base = build_base_a(example1_final_spec())
    print(f"final code: {list(base.code.params)}, optimal (improved bound): "
          f"{is_optimal_lrc(base.code, base.partition, Regime.IMPROVED)}")

    plan = make_plan(base, 8, 1, regime=Regime.IMPROVED)
    print(f"plan: t={plan.t} h={plan.h} s={plan.s}, final equals punctured base: {final_matches_puncture(plan)}")
    rng = np.random.default_rng(args.seed)
    counts = set()
    for _ in range(args.runs):
        tr = convert(plan, [C.random_codeword(rng) for C in plan.initial])
        counts.add((tr.rho_r, tr.rho_w))
    print(f"{args.runs} conversions, (rho_r, rho_w) values seen: {sorted(counts)}")
    print(audit_optimality(plan, tr).table())

    cert = certify_same_initial(plan, init.blocks)
    words = [init.code.random_codeword(rng) for _ in range(plan.t)]
    tr = convert_same_initial(plan, cert, words)
    print(f"same-initial variant: rho_r={tr.rho_r} rho_w={tr.rho_w}, output in final code: {plan.final.contains(tr.final_codeword)}")


if __name__ == "__main__":
    main()
