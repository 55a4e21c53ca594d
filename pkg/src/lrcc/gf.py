"""Exact arithmetic in GF(p) and GF(p^m) in the polynomial basis.

An element of GF(p^m) is the coefficient vector ``(c_0, ..., c_{m-1})`` of
``c_0 + c_1 b + ... + c_{m-1} b^{m-1}`` where ``b`` is a root of the tower's
modulus.  Internally every element is stored as the integer
``sum(c_i * p**i)``; that integer order is the canonical order used for every
deterministic choice (modulus, primitive element, coset leaders).

Scalar arithmetic on a :class:`FieldTower` accepts ints or integer numpy arrays
and is vectorized, which is what the linear-algebra layer relies on.  The
lookup tables are a cache built from the schoolbook polynomial product
(:meth:`FieldTower.mul_reference`), which stays available as an oracle.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

DEFAULT_CEILING = 2**20
_FULL_TABLE_MAX = 1024


class FieldError(ValueError):
    pass


class NotPrime(FieldError):
    pass


class Reducible(FieldError):
    pass


class TooLarge(FieldError):
    pass


class NoSubfieldMarked(FieldError):
    pass


class OrderDoesNotDivide(FieldError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


# -- dense polynomials over GF(p), little-endian coefficient lists ----------


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def poly_mod(a: Sequence[int], mod: Sequence[int], p: int) -> list[int]:
    a = _trim([c % p for c in a])
    mod = _trim([c % p for c in mod])
    dm = len(mod) - 1
    inv_lead = pow(mod[-1], p - 2, p)
    while len(a) - 1 >= dm and a:
        shift = len(a) - 1 - dm
        f = a[-1] * inv_lead % p
        for i, c in enumerate(mod):
            a[shift + i] = (a[shift + i] - f * c) % p
        _trim(a)
    return a


def poly_mul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return out


def _monic_polys(p: int, degree: int) -> Iterable[list[int]]:
    # increasing integer encoding
    for low in itertools.product(range(p), repeat=degree):
        yield list(reversed(low)) + [1]


def is_irreducible(modulus: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg/2."""
    f = _trim([c % p for c in modulus])
    deg = len(f) - 1
    if deg < 1:
        return False
    if deg == 1:
        return True
    for d in range(1, deg // 2 + 1):
        for g in _monic_polys(p, d):
            if not poly_mod(f, g, p):
                return False
    return True


def smallest_irreducible(p: int, m: int) -> list[int]:
    for f in _monic_polys(p, m):
        if is_irreducible(f, p):
            return f
    raise Reducible(f"no irreducible polynomial of degree {m} over GF({p})")  # pragma: no cover


def poly_str(coeffs: Sequence[int], var: str = "b") -> str:
    terms = []
    for i, c in enumerate(coeffs):
        if c == 0:
            continue
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        if not mono:
            terms.append(str(c))
        elif c == 1:
            terms.append(mono)
        else:
            terms.append(f"{c}{mono}")
    return "+".join(terms) if terms else "0"


class FieldTower:
    """GF(p^m) with a verified irreducible modulus and an optional marked subfield.

    Use :func:`make_tower` to construct one.  Instances are immutable.
    """

    def __init__(self, p: int, m: int, modulus: Sequence[int], base_degree: int | None = None):
        self.p = int(p)
        self.m = int(m)
        self.modulus = tuple(int(c) % self.p for c in modulus)
        self.base_degree = base_degree
        self.order = self.p**self.m
        self._weights = self.p ** np.arange(self.m, dtype=np.int64)
        self._digits = self.to_digits(np.arange(self.order, dtype=np.int64))
        self._mul_table = None
        self._add_table = None
        self._build_tables()

    # -- encoding ---------------------------------------------------------

    def encode(self, coeffs: Sequence[int]) -> int:
        coeffs = list(coeffs)
        if len(coeffs) > self.m:
            coeffs = poly_mod(coeffs, self.modulus, self.p)
        return int(sum((int(c) % self.p) * self.p**i for i, c in enumerate(coeffs)))

    def decode(self, value: int) -> tuple[int, ...]:
        value = int(value)
        return tuple((value // self.p**i) % self.p for i in range(self.m))

    def to_digits(self, arr) -> np.ndarray:
        arr = np.asarray(arr, dtype=np.int64)
        return (arr[..., None] // self._weights) % self.p

    def from_digits(self, digits) -> np.ndarray:
        return (np.asarray(digits, dtype=np.int64) % self.p) @ self._weights

    def __call__(self, value) -> "FieldElement":
        if isinstance(value, FieldElement):
            if value.tower != self:
                raise FieldError("element belongs to a different tower")
            return value
        if isinstance(value, (list, tuple)):
            return FieldElement(self, self.encode(value))
        value = int(value)
        if not 0 <= value < self.order:
            raise FieldError(f"{value} is not an element encoding of GF({self.order})")
        return FieldElement(self, value)

    def gen(self) -> "FieldElement":
        """The polynomial-basis generator ``b`` (a root of the modulus)."""
        return self(self.encode([0, 1]))

    def elements(self) -> list["FieldElement"]:
        return [FieldElement(self, v) for v in range(self.order)]

    # -- reference arithmetic (oracle) -----------------------------------

    def mul_reference(self, a: int, b: int) -> int:
        prod = poly_mul(self.decode(a), self.decode(b), self.p)
        return self.encode(poly_mod(prod, self.modulus, self.p) if prod else [])

    def add_reference(self, a: int, b: int) -> int:
        return self.encode([x + y for x, y in zip(self.decode(a), self.decode(b))])

    def pow_reference(self, a: int, e: int) -> int:
        result, base = 1, int(a)
        while e:
            if e & 1:
                result = self.mul_reference(result, base)
            base = self.mul_reference(base, base)
            e >>= 1
        return result

    # -- tables -----------------------------------------------------------

    def _mult_matrix(self, c: int) -> np.ndarray:
        cols = [self.decode(self.mul_reference(c, self.p**j)) for j in range(self.m)]
        return np.array(cols, dtype=np.int64)  # row j = digits(c * b^j)

    def _build_tables(self) -> None:
        q = self.order
        self._primitive = _find_primitive(self)
        exp = np.ones(1, dtype=np.int64)
        gp = self._primitive
        while len(exp) < q - 1:
            mat = self._mult_matrix(gp)
            exp = np.concatenate([exp, self.from_digits(self.to_digits(exp) @ mat)])
            gp = self.mul_reference(gp, gp)
        exp = exp[: q - 1]
        log = np.zeros(q, dtype=np.int64)
        log[exp] = np.arange(q - 1, dtype=np.int64)
        self._exp = np.concatenate([exp, exp])
        self._log = log
        neg_digits = (-self._digits) % self.p
        self._neg = self.from_digits(neg_digits)
        if q <= _FULL_TABLE_MAX:
            a = np.arange(q, dtype=np.int64)
            self._mul_table = self._mul_log(a[:, None], a[None, :])
            self._add_table = np.stack([self._add_digits(i, a) for i in range(q)])

    def _mul_log(self, a, b):
        res = self._exp[self._log[a] + self._log[b]]
        return np.where((a == 0) | (b == 0), 0, res)

    def _add_digits(self, a, b):
        if self.p == 2:
            return np.bitwise_xor(a, b)
        if self.m == 1:
            return (np.asarray(a) + np.asarray(b)) % self.p
        return self.from_digits(self._digits[a] + self._digits[b])

    # -- vectorized arithmetic -------------------------------------------

    def add(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self._add_table is not None:
            return self._add_table[a, b]
        return self._add_digits(a, b)

    def neg(self, a):
        return self._neg[np.asarray(a, dtype=np.int64)]

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self._mul_table is not None:
            return self._mul_table[a, b]
        return self._mul_log(a, b)

    def inv(self, a):
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroDivisionError("inverse of zero")
        return self._exp[(-self._log[a]) % (self.order - 1)]

    def power(self, a, e: int):
        a = np.asarray(a, dtype=np.int64)
        e = int(e)
        if e == 0:
            return np.ones_like(a)
        if e < 0:
            a, e = self.inv(a), -e
        res = self._exp[(self._log[a] * (e % (self.order - 1))) % (self.order - 1)]
        return np.where(a == 0, 0, res)

    def log(self, a) -> int:
        a = int(a)
        if a == 0:
            raise ZeroDivisionError("log of zero")
        return int(self._log[a])

    # -- subfield ----------------------------------------------------------

    @property
    def subfield_order(self) -> int:
        if self.base_degree is None:
            raise NoSubfieldMarked("tower has no marked subfield")
        return self.p**self.base_degree

    def in_subfield(self, x) -> bool:
        x = int(x)
        return int(self.power(x, self.subfield_order)) == x

    def subfield_elements(self) -> list[int]:
        q = self.subfield_order
        a = np.arange(self.order, dtype=np.int64)
        return [int(v) for v in a[self.power(a, q) == a]]

    # -- misc --------------------------------------------------------------

    def to_dict(self) -> dict:
        return {"p": self.p, "m": self.m, "modulus": list(self.modulus), "base_degree": self.base_degree}

    @classmethod
    def from_dict(cls, d: dict, ceiling: int = DEFAULT_CEILING) -> "FieldTower":
        return make_tower(d["p"], d["m"], d.get("modulus"), d.get("base_degree"), ceiling=ceiling)

    def fmt(self, value) -> str:
        return poly_str(self.decode(value))

    def _key(self):
        return (self.p, self.m, self.modulus)

    def __eq__(self, other):
        return isinstance(other, FieldTower) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        sub = f", subfield GF({self.p}^{self.base_degree})" if self.base_degree else ""
        return f"FieldTower(GF({self.p}^{self.m}), modulus={poly_str(self.modulus, 'x')}{sub})"


def _find_primitive(F: FieldTower) -> int:
    q = F.order
    if q == 2:
        return 1
    factors = prime_factors(q - 1)
    for g in range(2, q):
        if all(F.pow_reference(g, (q - 1) // f) != 1 for f in factors):
            return g
    raise FieldError("no primitive element found; modulus is not irreducible")  # pragma: no cover


def make_tower(
    p: int,
    m: int = 1,
    modulus: Sequence[int] | str | None = None,
    base_degree: int | None = None,
    ceiling: int = DEFAULT_CEILING,
) -> FieldTower:
    """Build GF(p^m).

    ``modulus`` is a little-endian coefficient list of a monic degree-``m``
    polynomial, or ``None``/``"auto"`` for the smallest monic irreducible one in
    the integer order (``x`` when ``m == 1``).  ``base_degree`` marks the
    subfield GF(p^base_degree) used for Frobenius twists.
    """
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if m < 1:
        raise FieldError("degree must be >= 1")
    if p**m > ceiling:
        raise TooLarge(f"GF({p}^{m}) exceeds the brute-force ceiling {ceiling}")
    if modulus is None or (isinstance(modulus, str) and modulus.lower() == "auto"):
        mod = smallest_irreducible(p, m)
    else:
        mod = _trim([int(c) % p for c in modulus])
        if len(mod) - 1 != m:
            raise FieldError(f"modulus has degree {len(mod) - 1}, expected {m}")
        if mod[-1] != 1:
            raise FieldError("modulus must be monic")
        if not is_irreducible(mod, p):
            raise Reducible(f"{poly_str(mod, 'x')} is reducible over GF({p})")
    if base_degree is not None and (base_degree < 1 or m % base_degree):
        raise FieldError(f"subfield degree {base_degree} does not divide {m}")
    return FieldTower(p, m, mod, base_degree)


@dataclass(frozen=True)
class FieldElement:
    tower: FieldTower
    value: int

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.tower.decode(self.value)

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.tower != self.tower:
                raise FieldError("mixed towers")
            return other.value
        if isinstance(other, (int, np.integer)):
            return self.tower.encode([int(other)])
        return NotImplemented

    def _wrap(self, v) -> "FieldElement":
        return FieldElement(self.tower, int(v))

    def __add__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.tower.add(self.value, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.tower.sub(self.value, o))

    def __rsub__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.tower.sub(o, self.value))

    def __mul__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.tower.mul(self.value, o))

    __rmul__ = __mul__

    def __neg__(self):
        return self._wrap(self.tower.neg(self.value))

    def inverse(self) -> "FieldElement":
        return self._wrap(self.tower.inv(self.value))

    def __truediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return self._wrap(self.tower.mul(self.value, self.tower.inv(o)))

    def __pow__(self, e: int):
        return self._wrap(self.tower.power(self.value, e))

    def __bool__(self):
        return self.value != 0

    def __int__(self):
        return self.value

    def __index__(self):
        return self.value

    def __lt__(self, other: "FieldElement"):
        return self.value < other.value

    def __str__(self):
        return self.tower.fmt(self.value)

    def __repr__(self):
        return f"<{self} in GF({self.tower.order})>"

    def to_json(self) -> list[int]:
        return list(self.coeffs)


def multiplicative_order(x: FieldElement) -> int:
    if not x:
        raise ZeroDivisionError("zero has no multiplicative order")
    q1 = x.tower.order - 1
    return q1 // math.gcd(q1, x.tower.log(x.value))


def primitive_element(F: FieldTower) -> FieldElement:
    """Smallest element (integer order) of multiplicative order |F| - 1."""
    return FieldElement(F, F._primitive)


def frobenius(x: FieldElement, i: int = 1, q: int | None = None) -> FieldElement:
    """``x ** (q ** i)`` where ``q`` is the order of the tower's marked subfield."""
    F = x.tower
    qq = F.subfield_order
    if q is not None and q != qq:
        raise NoSubfieldMarked(f"q={q} is not the marked subfield order {qq}")
    if not x:
        return x
    return FieldElement(F, int(F.power(x.value, pow(qq, i, F.order - 1) or (F.order - 1))))


@dataclass(frozen=True)
class Coset:
    leader: int
    elements: tuple[int, ...]


def coset_enumerate(F: FieldTower, subgroup_order: int) -> list[Coset]:
    """All cosets of the order-``s`` multiplicative subgroup, leaders smallest-first."""
    q1 = F.order - 1
    s = int(subgroup_order)
    if s < 1 or q1 % s:
        raise OrderDoesNotDivide(f"{s} does not divide {q1}")
    step = q1 // s
    subgroup = F._exp[np.arange(s) * step]
    seen = np.zeros(F.order, dtype=bool)
    cosets = []
    for leader in range(1, F.order):
        if seen[leader]:
            continue
        members = np.sort(F.mul(leader, subgroup))
        seen[members] = True
        cosets.append(Coset(leader, tuple(int(v) for v in members)))
    return cosets
