#!/usr/bin/env python3
"""Evaluate the length ceiling for optimal LRCs at a few parameter sets."""

from __future__ import annotations

from lrcc.lrc import PreconditionViolated, superlinear_length_bound

# (label, d, r, delta, q, w, u, v)
CASES = [
    ("d=2delta+1, r=delta+1, delta=3, q=7", 7, 4, 3, 7, 3, 2, 0),
    ("d=2delta+1, r=delta+1, delta=2, q=49", 5, 3, 2, 49, 3, 2, 0),
    ("GF(49), r=2, delta=2, d=5", 5, 2, 2, 49, 17, 16, 0),
    ("GF(49), r=2, delta=2, d=9 (even t)", 9, 2, 2, 49, 6, 2, 0),
    ("GF(49), r=2, delta=2, d=4", 4, 2, 2, 49, 17, 16, 0),
]


def main() -> None:
    print(f"{'case':<42}{'t':>3}  n_max")
    for label, d, r, dl, q, w, u, v in CASES:
        t = (d - 1) // dl
        try:
            val = f"{superlinear_length_bound(None, None, d, r, dl, q, w=w, u=u, v=v):.2f}"
        except PreconditionViolated as exc:
            val = f"n/a ({exc})"
        print(f"{label:<42}{t:>3}  {val}")


if __name__ == "__main__":
    main()
