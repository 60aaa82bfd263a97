"""Exact arithmetic in finite chain rings.

A ring is fixed by four parameters (p, f, e, n): the residue
characteristic p, the inertia degree f, the ramification index e
(``INF`` for equal characteristic) and the length n of the quotient.
Concretely the ring is W[x]/(x^e - p, x^n) where W is the Galois ring
of characteristic p^ceil(n/e) with residue field F_{p^f}; the three
familiar regimes are e = 1 (Galois rings, including Z/p^n), e = INF
(F_q[T]/(T^n)) and 1 < e < INF (ramified quotients, Eisenstein unit
fixed to 1).

Elements are stored as canonical digit vectors: x = sum c[i][j] *
omega_i * pi^j with 0 <= c[i][j] < p, omega_i = y^(i-1) running over a
fixed basis of the unramified part and pi the uniformizer.  All
arithmetic reduces to the digit normal form, so equality of elements is
equality of tuples.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator

import numpy as np

INF = math.inf

# Rings up to this size get dense add/mul lookup tables.
TABLE_CAP = 6000


class RingParameterError(ValueError):
    """Raised for parameter tuples that do not define a chain ring."""


def _is_prime(m: int) -> bool:
    if m < 2:
        return False
    d = 2
    while d * d <= m:
        if m % d == 0:
            return False
        d += 1
    return True


def _poly_mulmod(a, b, h, p):
    # product of a, b mod (h, p); h monic
    f = len(h) - 1
    out = [0] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca:
            for j, cb in enumerate(b):
                out[i + j] = (out[i + j] + ca * cb) % p
    for d in range(len(out) - 1, f - 1, -1):
        c = out[d]
        if c:
            out[d] = 0
            for t in range(f + 1):
                out[d - f + t] = (out[d - f + t] - c * h[t]) % p
    out = out[:f]
    while out and out[-1] == 0:
        out.pop()
    return out


def _poly_gcd(a, b, p):
    a, b = list(a), list(b)
    while b:
        inv = pow(b[-1], -1, p)
        b = [(c * inv) % p for c in b]
        while len(a) >= len(b):
            c = a[-1]
            off = len(a) - len(b)
            for t in range(len(b)):
                a[off + t] = (a[off + t] - c * b[t]) % p
            while a and a[-1] == 0:
                a.pop()
        a, b = b, a
    return a


def _is_irreducible(h, p) -> bool:
    # h monic of degree f over F_p; irreducible iff gcd(x^(p^d) - x, h)
    # is trivial for every d <= f//2
    f = len(h) - 1
    if f == 1:
        return True
    for d in range(1, f // 2 + 1):
        # x^(p^d) mod h via square-and-multiply
        exp = p**d
        acc = [1]
        base = [0, 1]
        while exp:
            if exp & 1:
                acc = _poly_mulmod(acc, base, h, p)
            base = _poly_mulmod(base, base, h, p)
            exp >>= 1
        diff = list(acc)
        while len(diff) < 2:
            diff.append(0)
        diff[1] = (diff[1] - 1) % p
        while diff and diff[-1] == 0:
            diff.pop()
        g = _poly_gcd(diff, h, p)
        if len(g) > 1:
            return False
    return True


def minimal_irreducible(p: int, f: int) -> tuple[int, ...]:
    """Monic irreducible of degree f over F_p whose lower-coefficient
    digits, read as a base-p integer, are smallest.  Returns coefficient
    tuple (c0, ..., c_{f-1}, 1)."""
    for k in range(p**f):
        low = [(k // p**t) % p for t in range(f)]
        h = tuple(low) + (1,)
        if _is_irreducible(list(h), p):
            return h
    raise RingParameterError(f"no irreducible of degree {f} mod {p}")


class RingSpec:
    """A finite chain ring with canonical digit coordinates.

    Instances are immutable in spirit; lookup tables are cached lazily.
    Equality and hashing go by the defining parameters.
    """

    def __init__(self, p: int, f: int, e, n: int):
        if not _is_prime(p):
            raise RingParameterError(f"p = {p} is not prime")
        if not (isinstance(f, int) and f >= 1):
            raise RingParameterError(f"inertia degree f = {f} invalid")
        if not (isinstance(n, int) and n >= 1):
            raise RingParameterError(f"length n = {n} invalid")
        if e != INF and not (isinstance(e, int) and e >= 1):
            raise RingParameterError(f"ramification e = {e} invalid")
        self.p = p
        self.f = f
        self.e = e
        self.n = n
        self.q = p**f
        self.xi = n if e == INF else min(e, n)
        self.size = self.q**n
        self.unramified_poly = minimal_irreducible(p, f)
        # precision of the unramified coefficient ring W
        self.base_precision = 1 if e == INF else -(-n // e)
        self.eisenstein_unit = 1 if (e != INF and 1 < e) else None
        self._fn = f * n
        self._radix = tuple(p ** (self._fn - 1 - t) for t in range(self._fn))
        self._yred = self._build_yred()

    # -- identity ----------------------------------------------------

    def __repr__(self):
        e = "inf" if self.e == INF else self.e
        return f"RingSpec(p={self.p}, f={self.f}, e={e}, n={self.n})"

    def __eq__(self, other):
        return (
            isinstance(other, RingSpec)
            and (self.p, self.f, self.e, self.n) == (other.p, other.f, other.e, other.n)
        )

    def __hash__(self):
        return hash((self.p, self.f, self.e, self.n))

    # -- digit arithmetic --------------------------------------------

    def _build_yred(self):
        # y^s mod h for 0 <= s <= 2f-2, with integer (unreduced) coeffs
        f = self.f
        h = self.unramified_poly
        rows = []
        for s in range(2 * f - 1):
            if s < f:
                row = [0] * f
                row[s] = 1
            else:
                prev = rows[s - 1]
                row = [0] * f
                for t in range(f - 1):
                    row[t + 1] = prev[t]
                lead = prev[f - 1]
                if lead:
                    for t in range(f):
                        row[t] -= lead * h[t]
            rows.append(row)
        return rows

    def _canon(self, acc: list[int]) -> tuple[int, ...]:
        p, e, n, f = self.p, self.e, self.n, self.f
        for j in range(n):
            for i in range(f):
                pos = i * n + j
                c = acc[pos] % p
                carry = (acc[pos] - c) // p
                acc[pos] = c
                if carry and e != INF and j + e < n:
                    acc[i * n + j + e] += carry
        return tuple(acc)

    def _add_digits(self, a, b):
        return self._canon([x + y for x, y in zip(a, b)])

    def _neg_digits(self, a):
        return self._canon([-x for x in a])

    def _mul_digits(self, a, b):
        f, n = self.f, self.n
        acc = [0] * self._fn
        yred = self._yred
        for i in range(f):
            for j in range(n):
                ca = a[i * n + j]
                if not ca:
                    continue
                for i2 in range(f):
                    row = yred[i + i2]
                    for j2 in range(n - j):
                        cb = b[i2 * n + j2]
                        if not cb:
                            continue
                        c = ca * cb
                        jj = j + j2
                        for t in range(f):
                            if row[t]:
                                acc[t * n + jj] += c * row[t]
        return self._canon(acc)

    # -- element constructors ----------------------------------------

    def element(self, coords) -> "RingElem":
        coords = tuple(int(c) for c in coords)
        if len(coords) != self._fn or any(c < 0 or c >= self.p for c in coords):
            raise RingParameterError(f"bad coordinate vector {coords}")
        return RingElem(self, coords)

    @cached_property
    def zero(self) -> "RingElem":
        return RingElem(self, (0,) * self._fn)

    @cached_property
    def one(self) -> "RingElem":
        c = [0] * self._fn
        c[0] = 1
        return RingElem(self, tuple(c))

    @cached_property
    def uniformizer(self) -> "RingElem":
        c = [0] * self._fn
        if self.n >= 2:
            c[1] = 1
        return RingElem(self, tuple(c))

    def from_int(self, m: int) -> "RingElem":
        """Image of the rational integer m."""
        acc = [0] * self._fn
        acc[0] = m
        return RingElem(self, self._canon(acc))

    def index(self, a: "RingElem") -> int:
        return sum(c * r for c, r in zip(a.coords, self._radix))

    def from_index(self, idx: int) -> "RingElem":
        if not 0 <= idx < self.size:
            raise RingParameterError(f"index {idx} out of range")
        coords = tuple((idx // r) % self.p for r in self._radix)
        return RingElem(self, coords)

    def elements(self) -> Iterator["RingElem"]:
        for idx in range(self.size):
            yield self.from_index(idx)

    # -- ring operations ---------------------------------------------

    def add(self, a, b):
        return RingElem(self, self._add_digits(a.coords, b.coords))

    def neg(self, a):
        return RingElem(self, self._neg_digits(a.coords))

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        return RingElem(self, self._mul_digits(a.coords, b.coords))

    def valuation(self, a: "RingElem") -> int:
        """min j with a nonzero digit in column j; n for the zero element."""
        n = self.n
        best = n
        for i in range(self.f):
            for j in range(n):
                if j >= best:
                    break
                if a.coords[i * n + j]:
                    best = j
                    break
        return best

    def additive_order(self, a: "RingElem") -> int:
        v = self.valuation(a)
        if v >= self.n:
            return 1
        if self.e == INF:
            return self.p
        return self.p ** (-(-(self.n - v) // self.e))

    # -- distinguished subsets ---------------------------------------

    def units(self) -> Iterator["RingElem"]:
        for a in self.elements():
            if self.valuation(a) == 0:
                yield a

    def unit_count(self) -> int:
        return self.q**self.n - self.q ** (self.n - 1)

    def omega_units(self) -> list["RingElem"]:
        """The Teichmueller-style basis units omega_i = y^(i-1)."""
        out = []
        for i in range(self.f):
            c = [0] * self._fn
            c[i * self.n] = 1
            out.append(RingElem(self, tuple(c)))
        return out

    def ideal_indices(self, j: int) -> list[int]:
        """Indices of the ideal pi^j R, j in [0, n]."""
        return [i for i in range(self.size) if self.valuation(self.from_index(i)) >= min(j, self.n)]

    @property
    def omega1_index(self) -> int:
        """Ideal index of the p-torsion subgroup Omega_1(R, +) = pi^(n-xi) R."""
        return self.n - self.xi

    @property
    def d_invariant(self) -> int:
        """Minimal generator count of (R, +): f * xi."""
        return self.f * self.xi

    def omega1_generators(self) -> list["RingElem"]:
        """The f*xi generators omega_i * pi^(n-xi+j), (i, j)-lexicographic."""
        out = []
        for i in range(self.f):
            for j in range(self.xi):
                c = [0] * self._fn
                c[i * self.n + self.n - self.xi + j] = 1
                out.append(RingElem(self, tuple(c)))
        return out

    # -- lookup tables ------------------------------------------------

    def _digit_matrix(self):
        idx = np.arange(self.size)
        cols = [(idx // r) % self.p for r in self._radix]
        return np.stack(cols, axis=1).astype(np.int64)

    def _canon_array(self, acc):
        # acc: [..., fn] int64, reduced in place column by column
        p, e, n, f = self.p, self.e, self.n, self.f
        for j in range(n):
            for i in range(f):
                pos = i * n + j
                c = np.remainder(acc[..., pos], p)
                carry = (acc[..., pos] - c) // p
                acc[..., pos] = c
                if e != INF and j + e < n:
                    acc[..., i * n + j + e] += carry
        return acc

    @cached_property
    def _tables(self):
        N = self.size
        if N > TABLE_CAP:
            raise RingParameterError(f"ring of size {N} exceeds table cap {TABLE_CAP}")
        D = self._digit_matrix()
        fn = self._fn
        radix = np.array(self._radix, dtype=np.int64)
        # basis products, unreduced
        BP = np.zeros((fn, fn, fn), dtype=np.int64)
        for i in range(self.f):
            for j in range(self.n):
                for i2 in range(self.f):
                    for j2 in range(self.n):
                        if j + j2 >= self.n:
                            continue
                        row = self._yred[i + i2]
                        for t in range(self.f):
                            BP[i * self.n + j, i2 * self.n + j2, t * self.n + j + j2] += row[t]
        dtype = np.int32 if N > 255 else np.int16
        add = np.empty((N, N), dtype=dtype)
        mul = np.empty((N, N), dtype=dtype)
        chunk = max(1, 2_000_000 // max(N, 1))
        for lo in range(0, N, chunk):
            hi = min(N, lo + chunk)
            raw = D[lo:hi, None, :] + D[None, :, :]
            add[lo:hi] = self._canon_array(raw) @ radix
            raw = np.einsum("ap,bq,pqr->abr", D[lo:hi], D, BP)
            mul[lo:hi] = self._canon_array(raw) @ radix
        return add, mul

    @property
    def add_table(self) -> np.ndarray:
        return self._tables[0]

    @property
    def mul_table(self) -> np.ndarray:
        return self._tables[1]

    @cached_property
    def neg_table(self) -> np.ndarray:
        # index of -a for each a
        add = self.add_table
        out = np.empty(self.size, dtype=add.dtype)
        for a in range(self.size):
            out[a] = int(np.nonzero(add[a] == 0)[0][0])
        return out

    @cached_property
    def valuation_table(self) -> np.ndarray:
        return np.array([self.valuation(a) for a in self.elements()], dtype=np.int64)

    @cached_property
    def unit_inverse_table(self) -> dict[int, int]:
        mul = self.mul_table
        one = self.index(self.one)
        out = {}
        for u in range(self.size):
            if self.valuation_table[u] == 0:
                out[u] = int(np.nonzero(mul[u] == one)[0][0])
        return out

    # -- serialization ------------------------------------------------

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "f": self.f,
            "e": "inf" if self.e == INF else self.e,
            "n": self.n,
        }

    @staticmethod
    def from_json(obj: dict) -> "RingSpec":
        e = obj["e"]
        if e == "inf":
            e = INF
        return make_ring(obj["p"], obj["f"], e, obj["n"])


@dataclass(frozen=True)
class RingElem:
    """An element of a RingSpec, held as its canonical digit tuple."""

    ring: RingSpec
    coords: tuple[int, ...]

    def __add__(self, other):
        return self.ring.add(self, other)

    def __sub__(self, other):
        return self.ring.sub(self, other)

    def __neg__(self):
        return self.ring.neg(self)

    def __mul__(self, other):
        return self.ring.mul(self, other)

    def __repr__(self):
        return f"<{'.'.join(str(c) for c in self.coords)}>"

    @property
    def index(self) -> int:
        return self.ring.index(self)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def is_unit(self) -> bool:
        return self.ring.valuation(self) == 0


def make_ring(p: int, f: int, e, n: int) -> RingSpec:
    """Validated constructor; accepts e = INF (or the string 'inf')."""
    if e == "inf":
        e = INF
    return RingSpec(p, f, e, n)


def valuation(a: RingElem) -> int:
    return a.ring.valuation(a)


def units(R: RingSpec) -> Iterator[RingElem]:
    return R.units()


def omega_units(R: RingSpec) -> list[RingElem]:
    return R.omega_units()


def omega1_subgroup(R: RingSpec) -> int:
    """Ideal index of the p-torsion subgroup: n - xi."""
    return R.omega1_index


# -- ring isomorphism testing (small rings) --------------------------


def _hom_images(R1: RingSpec, R2: RingSpec, gens, cands, assignment, pos):
    if pos == len(gens):
        yield list(assignment)
        return
    for img in cands[pos]:
        assignment.append(img)
        yield from _hom_images(R1, R2, gens, cands, assignment, pos + 1)
        assignment.pop()


def ring_isomorphism(R1: RingSpec, R2: RingSpec):
    """Search for a ring isomorphism R1 -> R2; returns an index map or
    None.  Exhaustive over additive-generator images, so intended for
    small rings only."""
    if R1.size != R2.size or R1.p != R2.p:
        return None
    if R1.size > 256:
        raise RingParameterError("isomorphism search capped at size 256")
    if sorted(R1.valuation_table.tolist()).count(0) != sorted(R2.valuation_table.tolist()).count(0):
        return None
    gens = []
    for i in range(R1.f):
        for j in range(R1.xi):
            c = [0] * R1._fn
            c[i * R1.n + j] = 1
            gens.append(R1.element(c))
    orders = [R1.additive_order(g) for g in gens]
    elems2 = list(R2.elements())
    cands = []
    for g, o in zip(gens, orders):
        if g == R1.one:
            cands.append([R2.one])
        else:
            cands.append([b for b in elems2 if R2.additive_order(b) == o])
    # digit grouping: coordinates of x in terms of the generators
    ebound = R1.n + 1 if R1.e == INF else R1.e

    def gen_coords(x: RingElem) -> list[int]:
        out = []
        for i in range(R1.f):
            for j in range(R1.xi):
                t, l = 0, 0
                while j + ebound * l < R1.n:
                    t += x.coords[i * R1.n + j + ebound * l] * R1.p**l
                    l += 1
                out.append(t)
        return out

    n1 = R1.size
    for imgs in _hom_images(R1, R2, gens, cands, [], 0):
        phi = {}
        ok = True
        for idx in range(n1):
            x = R1.from_index(idx)
            acc = R2.zero
            for t, img in zip(gen_coords(x), imgs):
                term = R2.zero
                base = img
                tt = t
                while tt:
                    if tt & 1:
                        term = term + base
                    base = base + base
                    tt >>= 1
                acc = acc + term
            phi[idx] = acc.index
        if len(set(phi.values())) != n1:
            continue
        for a in range(n1):
            for b in range(n1):
                pa, pb = R1.from_index(a), R1.from_index(b)
                if phi[(pa * pb).index] != int(R2.mul_table[phi[a], phi[b]]):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return phi
    return None


def ring_isomorphic(R1: RingSpec, R2: RingSpec) -> bool:
    return ring_isomorphism(R1, R2) is not None
