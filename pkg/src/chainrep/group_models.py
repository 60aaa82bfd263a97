"""Group models: Heisenberg, unitriangular and affine groups over a
chain ring, plus table-backed abstract groups for oracle work.

Family elements are tuples of ring element indices, so they hash and
sort canonically; multiplication routes through the ring lookup tables.
``to_abstract`` materializes a dense multiplication table (numpy,
chunked) for groups up to the configured cap, which is what the
character-table oracle consumes.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .chain_ring import RingElem, RingSpec


class CapExceededError(ValueError):
    pass


class Char2UnsupportedError(ValueError):
    """Raised by operations that rely on halving and are not offered in
    residue characteristic 2."""


def group_cap(default: int = 4096) -> int:
    value = os.environ.get("CHAINREP_ORACLE_CAP")
    return int(value) if value else default


@dataclass(frozen=True)
class SubgroupHandle:
    label: str
    elements: tuple = field(repr=False)

    def __contains__(self, g):
        return g in self._set

    @cached_property
    def _set(self):
        return frozenset(self.elements)

    @property
    def order(self):
        return len(self.elements)


# -- Heisenberg groups -----------------------------------------------


class HeisenbergGroup:
    """Hei_{2k+1}(R): triples (x, y, z) with x, y in R^k, z in R, and
    (x1,y1,z1)(x2,y2,z2) = (x1+x2, y1+y2, z1+z2+x1.y2)."""

    def __init__(self, R: RingSpec, k: int = 1):
        if k < 1:
            raise ValueError("k must be >= 1")
        self.ring = R
        self.k = k
        self.order = R.size ** (2 * k + 1)
        self._add = R.add_table
        self._mul = R.mul_table
        self._neg = R.neg_table
        self.identity = (0,) * (2 * k + 1)

    def __repr__(self):
        return f"HeisenbergGroup({self.ring!r}, k={self.k})"

    @cached_property
    def elements(self) -> list[tuple]:
        from itertools import product

        return [t for t in product(range(self.ring.size), repeat=2 * self.k + 1)]

    def mul(self, g, h):
        k = self.k
        add, mul = self._add, self._mul
        out = [int(add[g[t], h[t]]) for t in range(2 * k)]
        z = add[g[2 * k], h[2 * k]]
        for t in range(k):
            z = add[z, mul[g[t], h[k + t]]]
        out.append(int(z))
        return tuple(out)

    def inv(self, g):
        k = self.k
        add, mul, neg = self._add, self._mul, self._neg
        out = [int(neg[g[t]]) for t in range(2 * k)]
        z = neg[g[2 * k]]
        for t in range(k):
            z = add[z, mul[g[t], g[k + t]]]
        out.append(int(z))
        return tuple(out)

    def conj(self, h, g):
        return self.mul(h, self.mul(g, self.inv(h)))

    def commutator(self, g, h):
        return self.mul(self.mul(g, h), self.mul(self.inv(g), self.inv(h)))

    def pack(self, x, y, z):
        """Element from RingElem vectors x, y (length k) and scalar z."""
        xi = tuple(a.index for a in x)
        yi = tuple(a.index for a in y)
        return xi + yi + (z.index,)

    @cached_property
    def center(self) -> SubgroupHandle:
        zer = (0,) * (2 * self.k)
        return SubgroupHandle(
            "center", tuple(zer + (z,) for z in range(self.ring.size))
        )

    @cached_property
    def abelian_polarization(self) -> SubgroupHandle:
        """A = {(x, 0, z)}: the fixed maximal abelian subgroup."""
        from itertools import product

        S = self.ring.size
        k = self.k
        els = [
            x + (0,) * k + (z,)
            for x in product(range(S), repeat=k)
            for z in range(S)
        ]
        return SubgroupHandle("A", tuple(els))

    @cached_property
    def complement(self) -> SubgroupHandle:
        """L = {(0, y, 0)}."""
        from itertools import product

        S = self.ring.size
        k = self.k
        els = [(0,) * k + y + (0,) for y in product(range(S), repeat=k)]
        return SubgroupHandle("L", tuple(els))

    def stabilizer_subgroup(self, ann_indices) -> SubgroupHandle:
        """L_s = {(0, y, 0) : every y_t in the given ideal}."""
        from itertools import product

        k = self.k
        els = [(0,) * k + y + (0,) for y in product(sorted(ann_indices), repeat=k)]
        return SubgroupHandle("L_s", tuple(els))

    def to_abstract(self, cap: int | None = None) -> "AbstractGroup":
        cap = cap or group_cap()
        if self.order > cap:
            raise CapExceededError(f"|G| = {self.order} exceeds cap {cap}")
        S = self.ring.size
        k = self.k
        w = 2 * k + 1
        EL = np.array(self.elements, dtype=np.int64)
        radix = S ** np.arange(w - 1, -1, -1, dtype=np.int64)
        add = np.asarray(self._add, dtype=np.int64)
        mul = np.asarray(self._mul, dtype=np.int64)
        N = self.order
        table = np.empty((N, N), dtype=np.int32)
        chunk = max(1, 4_000_000 // N)
        for lo in range(0, N, chunk):
            hi = min(N, lo + chunk)
            L = EL[lo:hi, None, :]
            Rr = EL[None, :, :]
            cols = []
            for t in range(2 * k):
                cols.append(add[L[:, :, t], Rr[:, :, t]])
            z = add[L[:, :, 2 * k], Rr[:, :, 2 * k]]
            for t in range(k):
                z = add[z, mul[L[:, :, t], Rr[:, :, k + t]]]
            cols.append(z)
            idx = np.zeros_like(cols[0])
            for t in range(w):
                idx += cols[t] * radix[t]
            table[lo:hi] = idx
        return AbstractGroup(table, names=self.elements, validate=False)


# -- unitriangular groups --------------------------------------------


class UnitriangularGroup:
    """Upper unitriangular size x size matrices over R; elements are
    tuples of the strictly-upper entries in row-major order."""

    def __init__(self, R: RingSpec, size: int):
        if size < 2:
            raise ValueError("matrix size must be >= 2")
        self.ring = R
        self.size = size
        self.positions = [(i, j) for i in range(size) for j in range(i + 1, size)]
        self.pos_index = {pos: t for t, pos in enumerate(self.positions)}
        self.nentries = len(self.positions)
        self.order = R.size**self.nentries
        self.identity = (0,) * self.nentries
        self._add = R.add_table
        self._mul = R.mul_table
        self._neg = R.neg_table

    def __repr__(self):
        return f"UnitriangularGroup({self.ring!r}, size={self.size})"

    @cached_property
    def elements(self) -> list[tuple]:
        from itertools import product

        return [t for t in product(range(self.ring.size), repeat=self.nentries)]

    def mul(self, a, b):
        add, mul = self._add, self._mul
        out = []
        for (i, j) in self.positions:
            c = add[a[self.pos_index[(i, j)]], b[self.pos_index[(i, j)]]]
            for t in range(i + 1, j):
                c = add[c, mul[a[self.pos_index[(i, t)]], b[self.pos_index[(t, j)]]]]
            out.append(int(c))
        return tuple(out)

    def inv(self, a):
        add, mul, neg = self._add, self._mul, self._neg
        out = [0] * self.nentries
        # back-substitute by increasing band j - i
        for gap in range(1, self.size):
            for i in range(self.size - gap):
                j = i + gap
                c = a[self.pos_index[(i, j)]]
                for t in range(i + 1, j):
                    c = add[c, mul[a[self.pos_index[(i, t)]], out[self.pos_index[(t, j)]]]]
                out[self.pos_index[(i, j)]] = int(neg[c])
        return tuple(out)

    def conj(self, h, g):
        return self.mul(h, self.mul(g, self.inv(h)))

    @cached_property
    def center(self) -> SubgroupHandle:
        """Matrices supported on the top-right corner entry."""
        corner = self.pos_index[(0, self.size - 1)]
        els = []
        for z in range(self.ring.size):
            v = [0] * self.nentries
            v[corner] = z
            els.append(tuple(v))
        return SubgroupHandle("center", tuple(els))

    def embed_heisenberg(self, g) -> tuple:
        """Image of a Hei_{2k+1} element (k = size-2): x fills the first
        row, y the last column, z the corner."""
        k = self.size - 2
        out = [0] * self.nentries
        for t in range(k):
            out[self.pos_index[(0, 1 + t)]] = g[t]
            out[self.pos_index[(1 + t, self.size - 1)]] = g[k + t]
        out[self.pos_index[(0, self.size - 1)]] = g[2 * k]
        return tuple(out)

    @cached_property
    def heisenberg_subgroup(self) -> SubgroupHandle:
        H = HeisenbergGroup(self.ring, self.size - 2)
        return SubgroupHandle(
            "heisenberg", tuple(self.embed_heisenberg(g) for g in H.elements)
        )

    @cached_property
    def middle_subgroup(self) -> SubgroupHandle:
        """Unitriangular matrices of the inner (size-2) block."""
        from itertools import product

        inner = [
            (i, j) for i in range(1, self.size - 1) for j in range(i + 1, self.size - 1)
        ]
        els = []
        for vals in product(range(self.ring.size), repeat=len(inner)):
            v = [0] * self.nentries
            for pos, c in zip(inner, vals):
                v[self.pos_index[pos]] = c
            els.append(tuple(v))
        return SubgroupHandle("middle", tuple(els))

    def to_abstract(self, cap: int | None = None) -> "AbstractGroup":
        cap = cap or group_cap()
        if self.order > cap:
            raise CapExceededError(f"|G| = {self.order} exceeds cap {cap}")
        S = self.ring.size
        EL = np.array(self.elements, dtype=np.int64)
        radix = S ** np.arange(self.nentries - 1, -1, -1, dtype=np.int64)
        add = np.asarray(self._add, dtype=np.int64)
        mul = np.asarray(self._mul, dtype=np.int64)
        N = self.order
        table = np.empty((N, N), dtype=np.int32)
        chunk = max(1, 4_000_000 // N)
        for lo in range(0, N, chunk):
            hi = min(N, lo + chunk)
            L = EL[lo:hi, None, :]
            Rr = EL[None, :, :]
            idx = np.zeros((hi - lo, N), dtype=np.int64)
            for (i, j) in self.positions:
                c = add[L[:, :, self.pos_index[(i, j)]], Rr[:, :, self.pos_index[(i, j)]]]
                for t in range(i + 1, j):
                    c = add[c, mul[L[:, :, self.pos_index[(i, t)]], Rr[:, :, self.pos_index[(t, j)]]]]
                idx += c * radix[self.pos_index[(i, j)]]
            table[lo:hi] = idx
        return AbstractGroup(table, names=self.elements, validate=False)


# -- affine groups ----------------------------------------------------


class AffineGroup:
    """Aff(R) = R join R^*: pairs (a, u) acting as x |-> a + u x, with
    (a1,u1)(a2,u2) = (a1 + u1 a2, u1 u2)."""

    def __init__(self, R: RingSpec):
        self.ring = R
        self._units = [u.index for u in R.units()]
        self.order = R.size * len(self._units)
        self._add = R.add_table
        self._mul = R.mul_table
        self._neg = R.neg_table
        self._uinv = R.unit_inverse_table
        self.identity = (0, R.one.index)

    def __repr__(self):
        return f"AffineGroup({self.ring!r})"

    @cached_property
    def elements(self) -> list[tuple]:
        return [(a, u) for a in range(self.ring.size) for u in self._units]

    def mul(self, g, h):
        a1, u1 = g
        a2, u2 = h
        return (int(self._add[a1, self._mul[u1, a2]]), int(self._mul[u1, u2]))

    def inv(self, g):
        a, u = g
        w = self._uinv[u]
        return (int(self._mul[w, self._neg[a]]), int(w))

    @cached_property
    def translations(self) -> SubgroupHandle:
        one = self.ring.one.index
        return SubgroupHandle(
            "translations", tuple((a, one) for a in range(self.ring.size))
        )

    def to_abstract(self, cap: int | None = None) -> "AbstractGroup":
        cap = cap or group_cap()
        if self.order > cap:
            raise CapExceededError(f"|G| = {self.order} exceeds cap {cap}")
        els = self.elements
        pos = {g: i for i, g in enumerate(els)}
        N = self.order
        table = np.empty((N, N), dtype=np.int32)
        for i, g in enumerate(els):
            row = [pos[self.mul(g, h)] for h in els]
            table[i] = row
        return AbstractGroup(table, names=els, validate=False)


# -- abstract table groups -------------------------------------------


class AbstractGroup:
    """A finite group given by its dense multiplication table.  Elements
    are 0..n-1; ``names`` optionally attaches labels (family tuples)."""

    def __init__(self, table, names=None, validate=True):
        table = np.asarray(table)
        n = table.shape[0]
        if table.shape != (n, n):
            raise ValueError("table must be square")
        self.table = table
        self.order = n
        self.names = list(names) if names is not None else None
        ident = None
        rng = np.arange(n)
        for g in range(n):
            if np.array_equal(table[g], rng):
                ident = g
                break
        if ident is None or not np.array_equal(table[:, ident], rng):
            raise ValueError("no two-sided identity")
        self.identity = ident
        inv = np.empty(n, dtype=np.int64)
        for g in range(n):
            w = np.nonzero(table[g] == ident)[0]
            if len(w) != 1 or table[int(w[0]), g] != ident:
                raise ValueError("inverses missing or not two-sided")
            inv[g] = w[0]
        self.inverse = inv
        if validate:
            self._check_associativity()

    @property
    def elements(self):
        return list(range(self.order))

    def mul(self, a, b):
        return int(self.table[a, b])

    def inv(self, a):
        return int(self.inverse[a])

    def conj(self, h, g):
        return int(self.table[self.table[h, g], self.inverse[h]])

    def _generating_set(self) -> list[int]:
        gens = []
        known = {self.identity}
        while len(known) < self.order:
            g = min(set(range(self.order)) - known)
            gens.append(g)
            known = set(self.closure(list(known) + [g]))
        return gens

    def _check_associativity(self):
        # Light's test: associativity on a generating set implies it
        # everywhere
        for a in self._generating_set():
            left = self.table[:, self.table[a, :]]
            right = self.table[self.table[:, a], :]
            if not np.array_equal(left, right):
                raise ValueError(f"associativity fails through element {a}")

    def closure(self, seed) -> list[int]:
        out = {self.identity}
        frontier = set(seed) - out
        out |= frontier
        while frontier:
            new = set()
            base = np.array(sorted(out), dtype=np.int64)
            for g in frontier:
                new |= set(self.table[base, g].tolist())
                new |= set(self.table[g, base].tolist())
            frontier = new - out
            out |= frontier
        return sorted(out)

    @cached_property
    def element_orders(self) -> np.ndarray:
        n = self.order
        orders = np.zeros(n, dtype=np.int64)
        cur = np.arange(n)
        orders[self.identity] = 1
        step = 1
        idx = np.arange(n)
        while np.any(orders == 0):
            step += 1
            cur = self.table[cur, idx]
            hit = (orders == 0) & (cur == self.identity)
            orders[hit] = step
            if step > n:
                raise ValueError("order computation ran away")
        return orders

    @cached_property
    def exponent(self) -> int:
        out = 1
        for o in set(self.element_orders.tolist()):
            out = out * o // math.gcd(out, o)
        return out

    @cached_property
    def center(self) -> list[int]:
        eq = self.table == self.table.T
        return [g for g in range(self.order) if eq[g].all()]

    @cached_property
    def conjugacy(self):
        """(reps, class_of, class_sizes): reps ascending by least member."""
        n = self.order
        class_of = np.full(n, -1, dtype=np.int64)
        reps = []
        allg = np.arange(n)
        for g in range(n):
            if class_of[g] >= 0:
                continue
            members = np.unique(self.table[self.table[allg, g], self.inverse[allg]])
            class_of[members] = len(reps)
            reps.append(g)
        sizes = np.bincount(class_of, minlength=len(reps))
        return reps, class_of, sizes

    @cached_property
    def commutator_subgroup(self) -> list[int]:
        n = self.order
        vals = set()
        chunk = max(1, 2_000_000 // n)
        allg = np.arange(n)
        for lo in range(0, n, chunk):
            hi = min(n, lo + chunk)
            x = allg[lo:hi, None]
            y = allg[None, :]
            conj = self.table[self.table[x, y], self.inverse[x]]
            comm = self.table[conj, self.inverse[y]]
            vals |= set(np.unique(comm).tolist())
        return self.closure(sorted(vals))

    def centralizer(self, elems) -> list[int]:
        mask = np.ones(self.order, dtype=bool)
        for s in elems:
            mask &= self.table[:, s] == self.table[s, :]
        return [int(g) for g in np.nonzero(mask)[0]]

    def subgroup(self, elems) -> "AbstractGroup":
        elems = sorted(elems)
        pos = {g: i for i, g in enumerate(elems)}
        sub = np.array(
            [[pos[int(self.table[a, b])] for b in elems] for a in elems],
            dtype=np.int64,
        )
        names = [self.names[g] for g in elems] if self.names else list(elems)
        return AbstractGroup(sub, names=names, validate=False)

    def quotient(self, normal_elems):
        """(quotient group, coset_of array); normal_elems must be a
        normal subgroup."""
        nset = set(normal_elems)
        for g in range(self.order):
            for s in normal_elems:
                if self.conj(g, s) not in nset:
                    raise ValueError("subgroup is not normal")
        coset_of = np.full(self.order, -1, dtype=np.int64)
        reps = []
        for g in range(self.order):
            if coset_of[g] >= 0:
                continue
            for s in normal_elems:
                coset_of[self.mul(g, s)] = len(reps)
            reps.append(g)
        m = len(reps)
        qt = np.array(
            [[coset_of[self.mul(reps[a], reps[b])] for b in range(m)] for a in range(m)],
            dtype=np.int64,
        )
        return AbstractGroup(qt, validate=False), coset_of

    def to_json(self) -> dict:
        return {"table": self.table.tolist()}

    @staticmethod
    def from_json(obj, cap: int | None = None) -> "AbstractGroup":
        cap = cap or group_cap()
        table = np.asarray(obj["table"], dtype=np.int64)
        if table.shape[0] > cap:
            raise CapExceededError(f"table of order {table.shape[0]} exceeds cap {cap}")
        return AbstractGroup(table, names=obj.get("names"), validate=True)


def subgroup_from_predicate(group, pred) -> list:
    """Elements satisfying pred, verified to form a subgroup."""
    els = [g for g in group.elements if pred(g)]
    eset = set(els)
    if group.identity not in eset:
        raise ValueError("predicate excludes the identity")
    for a in els:
        if group.inv(a) not in eset:
            raise ValueError("predicate set not closed under inversion")
    for a in els:
        for b in els:
            if group.mul(a, b) not in eset:
                raise ValueError("predicate set not closed under multiplication")
    return els


# -- distinguished abstract groups -----------------------------------


def semidirect_cyclic(modulus: int, multipliers) -> AbstractGroup:
    """Z/modulus acted on by the unit subgroup generated by the given
    multipliers: elements (c, m), (c1,m1)(c2,m2) = (c1+m1*c2, m1*m2)."""
    mults = {1}
    frontier = {m % modulus for m in multipliers}
    while frontier - mults:
        mults |= frontier
        frontier = {(a * b) % modulus for a in mults for b in mults}
    for m in mults:
        if math.gcd(m, modulus) != 1:
            raise ValueError(f"multiplier {m} is not a unit mod {modulus}")
    ms = sorted(mults)
    els = [(c, m) for c in range(modulus) for m in ms]
    pos = {g: i for i, g in enumerate(els)}
    n = len(els)
    table = np.empty((n, n), dtype=np.int64)
    for i, (c1, m1) in enumerate(els):
        table[i] = [pos[((c1 + m1 * c2) % modulus, (m1 * m2) % modulus)] for (c2, m2) in els]
    return AbstractGroup(table, names=els, validate=True)


def semidirect_cyclic_hom(modulus: int, multiplier: int, h_order: int) -> AbstractGroup:
    """Z/modulus acted on by Z/h_order through c -> multiplier*c; the
    action may factor through a proper quotient of Z/h_order."""
    m = multiplier % modulus
    if math.gcd(m, modulus) != 1:
        raise ValueError(f"multiplier {m} is not a unit mod {modulus}")
    if pow(m, h_order, modulus) != 1:
        raise ValueError("multiplier order does not divide h_order")
    els = [(c, t) for c in range(modulus) for t in range(h_order)]
    pos = {g: i for i, g in enumerate(els)}
    n = len(els)
    table = np.empty((n, n), dtype=np.int64)
    for i, (c1, t1) in enumerate(els):
        mt = pow(m, t1, modulus)
        table[i] = [
            pos[((c1 + mt * c2) % modulus, (t1 + t2) % h_order)] for (c2, t2) in els
        ]
    return AbstractGroup(table, names=els, validate=True)


def quaternion_group() -> AbstractGroup:
    """Q8 with elements (+-1, +-i, +-j, +-k)."""
    basis = {
        ("1", "1"): ("1", 1), ("1", "i"): ("i", 1), ("1", "j"): ("j", 1), ("1", "k"): ("k", 1),
        ("i", "1"): ("i", 1), ("j", "1"): ("j", 1), ("k", "1"): ("k", 1),
        ("i", "i"): ("1", -1), ("j", "j"): ("1", -1), ("k", "k"): ("1", -1),
        ("i", "j"): ("k", 1), ("j", "i"): ("k", -1),
        ("j", "k"): ("i", 1), ("k", "j"): ("i", -1),
        ("k", "i"): ("j", 1), ("i", "k"): ("j", -1),
    }
    els = [(ax, s) for ax in ("1", "i", "j", "k") for s in (1, -1)]
    pos = {g: i for i, g in enumerate(els)}
    n = 8
    table = np.empty((n, n), dtype=np.int64)
    for a, (ax1, s1) in enumerate(els):
        for b, (ax2, s2) in enumerate(els):
            ax, s = basis[(ax1, ax2)]
            table[a, b] = pos[(ax, s * s1 * s2)]
    return AbstractGroup(table, names=els, validate=True)


def general_linear_2(R: RingSpec) -> AbstractGroup:
    """GL_2 over a residue field (n = 1 rings only; oracle-scale)."""
    if R.n != 1:
        raise ValueError("general_linear_2 supports fields only")
    mul, add = R.mul_table, R.add_table
    neg = R.neg_table
    els = []
    for a in range(R.size):
        for b in range(R.size):
            for c in range(R.size):
                for d in range(R.size):
                    det = add[mul[a, d], neg[mul[b, c]]]
                    if det != 0:
                        els.append((a, b, c, d))
    pos = {g: i for i, g in enumerate(els)}
    n = len(els)
    if n > group_cap():
        raise CapExceededError(f"|GL2| = {n} exceeds cap")
    table = np.empty((n, n), dtype=np.int64)
    for i, (a, b, c, d) in enumerate(els):
        row = []
        for (e, f, g, h) in els:
            row.append(
                pos[(
                    int(add[mul[a, e], mul[b, g]]),
                    int(add[mul[a, f], mul[b, h]]),
                    int(add[mul[c, e], mul[d, g]]),
                    int(add[mul[c, f], mul[d, h]]),
                )]
            )
        table[i] = row
    return AbstractGroup(table, names=els, validate=False)


# -- structure scan ---------------------------------------------------


@dataclass
class StructureScan:
    order: int
    is_p_group: bool
    p: int | None
    exponent: int
    center: list
    center_invariant_count: int
    omega1_center: list
    commutator: list
    is_two_step: bool
    commutator_cyclic: bool
    class_reps: list
    class_sizes: list
    maximal_abelian: list


def _invariant_count(G: AbstractGroup, elems) -> int:
    """Number of invariant factors of an abelian subgroup, via the
    p-rank maximized over primes."""
    if len(elems) == 1:
        return 0
    orders = [int(G.element_orders[g]) for g in elems]
    primes = set()
    for o in orders:
        d = 2
        while d * d <= o:
            if o % d == 0:
                primes.add(d)
                while o % d == 0:
                    o //= d
            d += 1
        if o > 1:
            primes.add(o)
    best = 0
    for p in primes:
        cnt = sum(1 for g in elems if G.element_orders[g] in (1, p))
        rank = 0
        while p**rank < cnt:
            rank += 1
        assert p**rank == cnt, "p-torsion subgroup size is not a p-power"
        best = max(best, rank)
    return best


def structure_scan(G: AbstractGroup, cap: int | None = None) -> StructureScan:
    cap = cap or group_cap()
    if G.order > cap:
        raise CapExceededError(f"|G| = {G.order} exceeds cap {cap}")
    n = G.order
    facs = {}
    m = n
    d = 2
    while d * d <= m:
        while m % d == 0:
            facs[d] = facs.get(d, 0) + 1
            m //= d
        d += 1
    if m > 1:
        facs[m] = facs.get(m, 0) + 1
    is_p = len(facs) == 1
    p = next(iter(facs)) if is_p else None

    center = G.center
    comm = G.commutator_subgroup
    cset = set(center)
    two_step = all(g in cset for g in comm) and len(comm) > 1
    comm_orders = [int(G.element_orders[g]) for g in comm]
    comm_cyclic = max(comm_orders) == len(comm) if len(comm) > 1 else True

    omega1 = []
    if is_p:
        omega1 = [g for g in center if G.element_orders[g] in (1, p)]

    reps, class_of, sizes = G.conjugacy

    # greedy maximal abelian: extend the center by commuting elements
    S = set(G.closure(center))
    while True:
        C = G.centralizer(sorted(S))
        extra = [g for g in C if g not in S]
        if not extra:
            break
        S = set(G.closure(sorted(S) + [min(extra)]))
    max_ab = sorted(S)

    return StructureScan(
        order=n,
        is_p_group=is_p,
        p=p,
        exponent=G.exponent,
        center=center,
        center_invariant_count=_invariant_count(G, center),
        omega1_center=omega1,
        commutator=comm,
        is_two_step=two_step,
        commutator_cyclic=comm_cyclic,
        class_reps=reps,
        class_sizes=[int(s) for s in sizes],
        maximal_abelian=max_ab,
    )


# -- abelian decomposition and characters ----------------------------


def _extgcd(a, b):
    if b == 0:
        return (a, 1, 0) if a >= 0 else (-a, -1, 0)
    g, u, v = _extgcd(b, a % b)
    return g, v, u - (a // b) * v


def abelian_basis(group, elems):
    """Decompose an abelian subgroup into cyclic factors.

    Returns (gens, orders, coords): independent generators with orders
    d1 | d2 | ..., and a dict mapping each element to its coordinate
    tuple.  Validated internally by checking the coordinate map is a
    bijection."""
    elems = list(elems)
    eset = set(elems)
    N = len(elems)
    ident = group.identity
    if N == 1:
        return [], [], {ident: ()}
    # greedy generators
    gens = []
    known = {ident}
    for g in elems:
        if g not in known:
            gens.append(g)
            frontier = set(known)
            while True:
                new = {group.mul(a, h) for a in frontier for h in gens} - known
                if not new:
                    break
                known |= new
                frontier = new
    m = len(gens)
    # spanning-tree exponent vectors
    coords_raw = {ident: [0] * m}
    queue = [ident]
    relations = []
    while queue:
        a = queue.pop()
        for i, g in enumerate(gens):
            b = group.mul(a, g)
            v = list(coords_raw[a])
            v[i] += 1
            if b in coords_raw:
                relations.append([x - y for x, y in zip(v, coords_raw[b])])
            else:
                coords_raw[b] = v
                queue.append(b)
    assert len(coords_raw) == N
    # HNF of the relation lattice
    H = [None] * m
    for row in relations:
        row = list(row)
        for c in range(m):
            if row[c] == 0:
                continue
            if H[c] is None:
                H[c] = row
                row = None
                break
            a0, b0 = H[c][c], row[c]
            g0, u0, v0 = _extgcd(a0, b0)
            newpiv = [u0 * x + v0 * y for x, y in zip(H[c], row)]
            row = [(a0 // g0) * y - (b0 // g0) * x for x, y in zip(H[c], row)]
            H[c] = newpiv
        # fully reduced rows vanish
    assert all(h is not None for h in H), "relation lattice not full rank"
    K = [list(h) for h in H]
    # SNF D = U K V; only V^-1 is needed: rows of K are relations, so
    # column operations are the generator-coordinate changes and the new
    # cyclic generators are products by rows of V^-1
    Vinv = [[1 if i == j else 0 for j in range(m)] for i in range(m)]

    def row_op(i, j, c):  # row_i += c * row_j
        K[i] = [x + c * y for x, y in zip(K[i], K[j])]

    def row_swap(i, j):
        K[i], K[j] = K[j], K[i]

    def col_op(i, j, c):  # col_i += c * col_j ; Vinv: row_j -= c * row_i
        for t in range(m):
            K[t][i] += c * K[t][j]
        Vinv[j] = [x - c * y for x, y in zip(Vinv[j], Vinv[i])]

    def col_swap(i, j):
        for t in range(m):
            K[t][i], K[t][j] = K[t][j], K[t][i]
        Vinv[i], Vinv[j] = Vinv[j], Vinv[i]

    def neg_row(i):
        K[i] = [-x for x in K[i]]

    for t in range(m):
        while True:
            # find a nonzero pivot in the remaining block
            piv = None
            for i in range(t, m):
                for j in range(t, m):
                    if K[i][j]:
                        if piv is None or abs(K[i][j]) < abs(K[piv[0]][piv[1]]):
                            piv = (i, j)
            if piv is None:
                break
            i0, j0 = piv
            if i0 != t:
                row_swap(t, i0)
            if j0 != t:
                col_swap(t, j0)
            if K[t][t] < 0:
                neg_row(t)
            done = True
            for i in range(t + 1, m):
                if K[i][t] % K[t][t]:
                    row_op(i, t, -(K[i][t] // K[t][t]))
                    done = False
                elif K[i][t]:
                    row_op(i, t, -(K[i][t] // K[t][t]))
            for j in range(t + 1, m):
                if K[t][j] % K[t][t]:
                    col_op(j, t, -(K[t][j] // K[t][t]))
                    done = False
                elif K[t][j]:
                    col_op(j, t, -(K[t][j] // K[t][t]))
            if done:
                # divisibility fix-up: pivot must divide the rest
                bad = None
                for i in range(t + 1, m):
                    for j in range(t + 1, m):
                        if K[i][j] % K[t][t]:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                row_op(t, bad, 1)
        assert K[t][t] != 0
    dvec = [K[t][t] for t in range(m)]
    assert math.prod(dvec) == N, "relation lattice misses the group order"

    def power(g, expo):
        out = ident
        base = g
        e = expo % N if expo >= 0 else (expo % N + N) % N
        while e:
            if e & 1:
                out = group.mul(out, base)
            base = group.mul(base, base)
            e >>= 1
        return out

    new_gens = []
    for i in range(m):
        h = ident
        for t in range(m):
            h = group.mul(h, power(gens[t], Vinv[i][t]))
        new_gens.append(h)
    keep = [i for i in range(m) if dvec[i] > 1]
    new_gens = [new_gens[i] for i in keep]
    orders = [dvec[i] for i in keep]
    # coordinates by enumeration
    coords = {}
    from itertools import product as iproduct

    for tup in iproduct(*[range(d) for d in orders]):
        g = ident
        for h, e in zip(new_gens, tup):
            g = group.mul(g, power(h, e))
        assert g not in coords, "coordinate map not injective"
        coords[g] = tup
    assert len(coords) == N and all(g in coords for g in elems)
    return new_gens, orders, coords


def abelian_characters(group, elems):
    """All characters of an abelian subgroup as (order M, exponent dict)
    pairs, deterministically ordered."""
    from itertools import product as iproduct

    gens, orders, coords = abelian_basis(group, elems)
    M = 1
    for d in orders:
        M = M * d // math.gcd(M, d)
    out = []
    for w in iproduct(*[range(d) for d in orders]):
        exps = {}
        for g, tup in coords.items():
            exps[g] = sum(wi * (M // di) * ti for wi, di, ti in zip(w, orders, tup)) % M
        out.append((M, exps))
    return out


def extend_character(group, sub_elems, sub_order, sub_exps, big_elems):
    """Extend a character of a subgroup (given by exponent dict at the
    stated root order) over a larger abelian subgroup; first match in
    canonical order."""
    for M, exps in abelian_characters(group, big_elems):
        scale_ok = M % sub_order == 0
        if not scale_ok:
            continue
        t = M // sub_order
        if all((exps[a] - t * sub_exps[a]) % M == 0 for a in sub_elems):
            return M, exps
    raise ValueError("no extension found (subgroup data inconsistent?)")
