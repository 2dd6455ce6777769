"""Arithmetic in GF(q^2) for q = p^a, in a polynomial basis over GF(p).

Elements have two interchangeable forms.  :class:`FieldElement` carries the
coefficient vector (little-endian, fixed length ``2a``).  Internally every
element is also an integer *code* ``sum(c_i * p**i)`` in ``[0, q^2)``; the
hot paths (plane enumeration, unital classification) work on numpy arrays of
codes through cached operation tables.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import CapExceeded, DivisionByZero, NotPrime

DEFAULT_CAP = 2**32
# full q2 x q2 tables above this size would not fit comfortably in memory
TABLE_CAP = 2**12


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


def prime_power(q: int) -> tuple[int, int]:
    """Split ``q`` as ``p**a``; raise :class:`NotPrime` if it is not a prime power."""
    if q < 2:
        raise NotPrime(f"{q} is not a prime power")
    p = next(d for d in range(2, q + 1) if q % d == 0)
    a, r = 0, q
    while r % p == 0:
        r //= p
        a += 1
    if r != 1 or not is_prime(p):
        raise NotPrime(f"{q} is not a prime power")
    return p, a


# -- polynomials over GF(p): little-endian coefficient lists ------------------

def _trim(f: list[int]) -> list[int]:
    while f and f[-1] == 0:
        f.pop()
    return f


def _poly_mod(f: list[int], g: list[int], p: int) -> list[int]:
    """Remainder of ``f`` modulo ``g`` (``g`` trimmed, nonzero)."""
    f = _trim(list(f))
    dg = len(g) - 1
    inv_lead = pow(g[-1], p - 2, p) if p > 2 else 1
    while len(f) - 1 >= dg:
        c = (f[-1] * inv_lead) % p
        shift = len(f) - 1 - dg
        for i, gi in enumerate(g):
            f[shift + i] = (f[shift + i] - c * gi) % p
        _trim(f)
    return f


def is_irreducible(f: tuple[int, ...] | list[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree 1..deg(f)//2."""
    f = _trim(list(f))
    n = len(f) - 1
    if n < 1:
        return False
    for d in range(1, n // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            if not _poly_mod(f, list(low) + [1], p):
                return False
    return True


def smallest_irreducible(p: int, degree: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of the given degree.

    Coefficient vectors ``(c_0, ..., c_{degree-1})`` are compared with the
    constant term most significant; the result includes the leading 1.
    """
    for low in itertools.product(range(p), repeat=degree):
        if low[0] == 0:
            continue
        f = low + (1,)
        if is_irreducible(f, p):
            return f
    raise AssertionError("unreachable: irreducible polynomials exist in every degree")


@dataclass(frozen=True)
class FieldElement:
    coeffs: tuple[int, ...]

    def __repr__(self) -> str:
        return f"FieldElement({list(self.coeffs)})"


@dataclass(frozen=True)
class FieldSpec:
    """GF(q^2) with q = p^a, defined by a monic irreducible ``modulus`` of degree 2a."""

    p: int
    a: int
    modulus: tuple[int, ...]
    q: int = field(init=False)
    q2: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "q", self.p**self.a)
        object.__setattr__(self, "q2", self.p ** (2 * self.a))
        if len(self.modulus) != 2 * self.a + 1 or self.modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree 2a")

    @property
    def degree(self) -> int:
        return 2 * self.a

    def __repr__(self) -> str:
        return f"FieldSpec(GF({self.q}^2), modulus={self.modulus_str()})"

    def modulus_str(self) -> str:
        terms = []
        for i in range(len(self.modulus) - 1, -1, -1):
            c = self.modulus[i]
            if not c:
                continue
            mono = "1" if i == 0 else ("x" if i == 1 else f"x^{i}")
            terms.append(mono if c == 1 and i else (f"{c}" if i == 0 else f"{c}*{mono}"))
        return " + ".join(terms)

    # -- code <-> coefficient vector ------------------------------------------

    def coeffs(self, x: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.degree):
            x, r = divmod(x, self.p)
            out.append(r)
        return tuple(out)

    def code(self, coeffs) -> int:
        if len(coeffs) != self.degree or any(not 0 <= c < self.p for c in coeffs):
            raise ValueError(f"bad coefficient vector {coeffs!r}")
        x = 0
        for c in reversed(coeffs):
            x = x * self.p + c
        return x

    def element(self, x: int) -> FieldElement:
        return FieldElement(self.coeffs(x))

    # -- scalar arithmetic on codes (polynomial path, no tables) --------------

    def poly_add(self, x: int, y: int) -> int:
        if self.p == 2:
            return x ^ y
        cx, cy = self.coeffs(x), self.coeffs(y)
        return self.code([(u + v) % self.p for u, v in zip(cx, cy)])

    def poly_neg(self, x: int) -> int:
        if self.p == 2:
            return x
        return self.code([(-u) % self.p for u in self.coeffs(x)])

    def poly_mul(self, x: int, y: int) -> int:
        cx, cy = self.coeffs(x), self.coeffs(y)
        prod = [0] * (2 * self.degree - 1)
        for i, u in enumerate(cx):
            if u:
                for j, v in enumerate(cy):
                    prod[i + j] += u * v
        prod = [c % self.p for c in prod]
        r = _poly_mod(prod, list(self.modulus), self.p)
        return self.code(r + [0] * (self.degree - len(r)))

    def poly_pow(self, x: int, e: int) -> int:
        result, base = 1, x
        while e:
            if e & 1:
                result = self.poly_mul(result, base)
            base = self.poly_mul(base, base)
            e >>= 1
        return result

    def poly_frobenius(self, x: int) -> int:
        # a successive p-th powers give x^q
        for _ in range(self.a):
            x = self.poly_pow(x, self.p)
        return x

    # -- cached tables ----------------------------------------------------------

    @property
    def has_tables(self) -> bool:
        return self.q2 <= TABLE_CAP

    @cached_property
    def _digits(self) -> np.ndarray:
        codes = np.arange(self.q2, dtype=np.int64)
        return np.stack([(codes // self.p**i) % self.p for i in range(self.degree)], axis=1)

    @cached_property
    def add_table(self) -> np.ndarray:
        self._require_tables()
        codes = np.arange(self.q2, dtype=np.int64)
        if self.p == 2:
            return np.bitwise_xor.outer(codes, codes).astype(np.int32)
        out = np.zeros((self.q2, self.q2), dtype=np.int64)
        d = self._digits
        for i in range(self.degree):
            out += (np.add.outer(d[:, i], d[:, i]) % self.p) * self.p**i
        return out.astype(np.int32)

    @cached_property
    def neg_table(self) -> np.ndarray:
        d = (-self._digits) % self.p
        return (d * (self.p ** np.arange(self.degree))).sum(axis=1).astype(np.int32)

    @cached_property
    def _exp_log(self) -> tuple[np.ndarray, np.ndarray]:
        order = self.q2 - 1
        factors = {f for f in range(2, order + 1) if order % f == 0 and is_prime(f)}
        for g in range(2, self.q2):
            if all(self.poly_pow(g, order // f) != 1 for f in factors):
                break
        exp = np.zeros(2 * order, dtype=np.int64)
        x = 1
        for i in range(order):
            exp[i] = x
            x = self.poly_mul(x, g)
        exp[order:] = exp[:order]
        log = np.zeros(self.q2, dtype=np.int64)
        log[exp[:order]] = np.arange(order)
        return exp, log

    @cached_property
    def mul_table(self) -> np.ndarray:
        self._require_tables()
        exp, log = self._exp_log
        order = self.q2 - 1
        t = exp[(log[:, None] + log[None, :]) % order]
        t[0, :] = 0
        t[:, 0] = 0
        return t.astype(np.int32)

    @cached_property
    def inv_table(self) -> np.ndarray:
        self._require_tables()
        exp, log = self._exp_log
        order = self.q2 - 1
        t = exp[(-log) % order]
        t[0] = 0
        return t.astype(np.int32)

    @cached_property
    def frob_table(self) -> np.ndarray:
        self._require_tables()
        return np.array([self.poly_frobenius(x) for x in range(self.q2)], dtype=np.int32)

    @cached_property
    def norm_table(self) -> np.ndarray:
        self._require_tables()
        idx = np.arange(self.q2)
        return self.mul_table[idx, self.frob_table].astype(np.int32)

    def _require_tables(self):
        if not self.has_tables:
            raise CapExceeded(f"operation tables need q^2 <= {TABLE_CAP}, got {self.q2}")

    # -- scalar arithmetic on codes (table path when available) -----------------

    def add(self, x: int, y: int) -> int:
        return int(self.add_table[x, y]) if self.has_tables else self.poly_add(x, y)

    def neg(self, x: int) -> int:
        return int(self.neg_table[x]) if self.has_tables else self.poly_neg(x)

    def sub(self, x: int, y: int) -> int:
        return self.add(x, self.neg(y))

    def mul(self, x: int, y: int) -> int:
        return int(self.mul_table[x, y]) if self.has_tables else self.poly_mul(x, y)

    def inv(self, x: int) -> int:
        if x == 0:
            raise DivisionByZero("inverse of zero")
        return int(self.inv_table[x]) if self.has_tables else self.poly_pow(x, self.q2 - 2)

    def pow(self, x: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(x), -e)
        return self.poly_pow(x, e)

    def frobenius(self, x: int) -> int:
        return int(self.frob_table[x]) if self.has_tables else self.poly_frobenius(x)

    def norm(self, x: int) -> int:
        if self.has_tables:
            return int(self.norm_table[x])
        return self.poly_mul(x, self.poly_frobenius(x))

    def subfield(self) -> list[int]:
        """Codes of GF(q), i.e. the fixed points of x -> x^q."""
        return [x for x in range(self.q2) if self.frobenius(x) == x]


def make_field(p: int, a: int, cap: int = DEFAULT_CAP) -> FieldSpec:
    """GF(q^2), q = p^a, with the lexicographically smallest irreducible modulus."""
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if a < 1:
        raise ValueError("extension degree must be >= 1")
    if p ** (2 * a) > cap:
        raise CapExceeded(f"|GF(q^2)| = {p ** (2 * a)} exceeds cap {cap}")
    return FieldSpec(p, a, smallest_irreducible(p, 2 * a))


def field_for_q(q: int, cap: int = DEFAULT_CAP) -> FieldSpec:
    p, a = prime_power(q)
    return make_field(p, a, cap)


# -- FieldElement-level API ---------------------------------------------------

def _c(x: FieldElement, spec: FieldSpec) -> int:
    return spec.code(x.coeffs)


def zero(spec: FieldSpec) -> FieldElement:
    return spec.element(0)


def one(spec: FieldSpec) -> FieldElement:
    return spec.element(1)


def add(x: FieldElement, y: FieldElement, spec: FieldSpec) -> FieldElement:
    return spec.element(spec.add(_c(x, spec), _c(y, spec)))


def neg(x: FieldElement, spec: FieldSpec) -> FieldElement:
    return spec.element(spec.neg(_c(x, spec)))


def sub(x: FieldElement, y: FieldElement, spec: FieldSpec) -> FieldElement:
    return spec.element(spec.sub(_c(x, spec), _c(y, spec)))


def mul(x: FieldElement, y: FieldElement, spec: FieldSpec) -> FieldElement:
    return spec.element(spec.mul(_c(x, spec), _c(y, spec)))


def inv(x: FieldElement, spec: FieldSpec) -> FieldElement:
    return spec.element(spec.inv(_c(x, spec)))


def power(x: FieldElement, e: int, spec: FieldSpec) -> FieldElement:
    return spec.element(spec.pow(_c(x, spec), e))


def frobenius_q(x: FieldElement, spec: FieldSpec) -> FieldElement:
    return spec.element(spec.frobenius(_c(x, spec)))


def hermitian_norm(x: FieldElement, spec: FieldSpec) -> FieldElement:
    """x^(q+1); always an element of the subfield GF(q)."""
    return spec.element(spec.norm(_c(x, spec)))
