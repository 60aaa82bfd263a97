"""Irreducible representations of Heisenberg groups over chain rings
via the orbit method on the dual of the fixed maximal abelian subgroup.

Characters of A = {(x, 0, z)} are psi_{w,b}(x,0,z) = psi(w.x + b z).
The complement L = {(0,y,0)} acts by psi_{w,b} |-> psi_{w + b y, b}, so
orbits at central parameter b are cosets of (bR)^k, the stabilizer is
Ann(b)^k, and the induced representation attached to an orbit plus a
stabilizer character has dimension q^{(n-i)k} where i = val(b).  The
catalog enumerates one entry per (orbit, stabilizer character) pair.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .chain_ring import RingElem, RingSpec
from .char_duality import AddChar, base_character_data, psi_b
from .exactrep import LinearChar, MonomialRep
from .group_models import Char2UnsupportedError, HeisenbergGroup, SubgroupHandle

EXPLICIT_CAP = 100_000


class NotGenericError(ValueError):
    """Central character is not primitive, so the two-step uniqueness
    statement does not apply."""


@dataclass(frozen=True)
class IrrepDescriptor:
    orbit_rep: tuple  # (b_vec indices, b index)
    level: int
    dim: int
    lambda_label: tuple
    stabilizer_order: int

    def central_char(self, R: RingSpec) -> AddChar:
        return psi_b(R, R.from_index(self.orbit_rep[1]))


def annihilator_indices(R: RingSpec, b_idx: int) -> list[int]:
    """Indices of Ann(b) = {y : b y = 0} = pi^(n - val b) R."""
    row = R.mul_table[b_idx]
    return [y for y in range(R.size) if row[y] == 0]


def ideal_of(R: RingSpec, b_idx: int) -> list[int]:
    """Indices of the principal ideal b R."""
    return sorted(set(int(v) for v in R.mul_table[b_idx]))


def _coset_min_reps(R: RingSpec, ideal: list[int]) -> list[int]:
    """rep[v] = least index in the coset v + ideal."""
    add = R.add_table
    rep = [None] * R.size
    for v in range(R.size):
        rep[v] = min(int(add[v, i]) for i in ideal)
    return rep


def orbit_representatives(H: HeisenbergGroup, b_idx: int) -> list[tuple]:
    """Lex-least representatives of the orbits of L on characters with
    central parameter b: cosets of (bR)^k."""
    R = H.ring
    rep = _coset_min_reps(R, ideal_of(R, b_idx))
    reps = sorted({tuple(rep[v] for v in w) for w in product(range(R.size), repeat=H.k)})
    return reps


def orbit_of(H: HeisenbergGroup, b_vec: tuple, b_idx: int) -> list[tuple]:
    R = H.ring
    ideal = ideal_of(R, b_idx)
    add = R.add_table
    out = set()
    for shift in product(ideal, repeat=H.k):
        out.add(tuple(int(add[v, s]) for v, s in zip(b_vec, shift)))
    return sorted(out)


def stabilizer_subgroup(H: HeisenbergGroup, b_idx: int) -> SubgroupHandle:
    return H.stabilizer_subgroup(annihilator_indices(H.ring, b_idx))


def irrep_catalog(H: HeisenbergGroup) -> list[IrrepDescriptor]:
    """One descriptor per irreducible: orbit representative plus a
    character label of the stabilizer.  Explicit mode; use
    catalog_summary for rings beyond the desk cap."""
    R = H.ring
    if R.size ** (H.k + 1) > EXPLICIT_CAP:
        raise ValueError(
            f"dual of size {R.size ** (H.k + 1)} exceeds the explicit cap; "
            "use catalog_summary"
        )
    out = []
    for b_idx in range(R.size):
        level = int(R.valuation_table[b_idx])
        ann = annihilator_indices(R, b_idx)
        # dim = [L : stabilizer] = orbit size = |bR|^k
        dim = len(ideal_of(R, b_idx)) ** H.k
        # lambda labels: coset reps of pi^level R ... duality for Ann(b)
        lam_rep = _coset_min_reps(R, ideal_of(R, _power_uniformizer(R, level)))
        lam_labels = sorted({tuple(lam_rep[v] for v in w) for w in product(range(R.size), repeat=H.k)})
        for w in orbit_representatives(H, b_idx):
            for lab in lam_labels:
                out.append(
                    IrrepDescriptor(
                        orbit_rep=(w, b_idx),
                        level=level,
                        dim=dim,
                        lambda_label=lab,
                        stabilizer_order=len(ann) ** H.k,
                    )
                )
    return out


def _power_uniformizer(R: RingSpec, j: int) -> int:
    """Index of pi^j (0 if j >= n)."""
    if j >= R.n:
        return 0
    if j == 0:
        return R.one.index
    pw = R.uniformizer
    for _ in range(j - 1):
        pw = pw * R.uniformizer
    return pw.index


@dataclass(frozen=True)
class LevelSummary:
    level: int
    num_central_params: int
    orbits_per_param: int
    lambdas_per_orbit: int
    dim: int

    @property
    def irrep_count(self) -> int:
        return self.num_central_params * self.orbits_per_param * self.lambdas_per_orbit

    @property
    def dim_sq_total(self) -> int:
        return self.irrep_count * self.dim * self.dim


def catalog_summary(R: RingSpec, k: int) -> list[LevelSummary]:
    """Counts per level without enumerating the dual; exact for any
    parameter size."""
    q, n = R.q, R.n
    out = []
    for i in range(n + 1):
        num_b = q ** (n - i) - q ** (n - i - 1) if i < n else 1
        out.append(
            LevelSummary(
                level=i,
                num_central_params=num_b,
                orbits_per_param=q ** (i * k),
                lambdas_per_orbit=q ** (i * k),
                dim=q ** ((n - i) * k),
            )
        )
    total = sum(s.dim_sq_total for s in out)
    assert total == q ** (n * (2 * k + 1)), "catalog does not exhaust the group"
    return out


def stone_von_neumann_dim(H: HeisenbergGroup, chi: AddChar) -> int:
    """Dimension of the unique irreducible with primitive central
    character chi: [H : A] = q^{nk}."""
    if chi.level != 0:
        raise NotGenericError(
            f"central character has level {chi.level}; kernel meets the socle"
        )
    return H.ring.q ** (H.ring.n * H.k)


@dataclass(frozen=True)
class SymplecticModule:
    """V = R^{2k} with the standard symplectic pairing."""

    ring: RingSpec
    k: int

    def pairing_index(self, v: tuple, w: tuple) -> int:
        R = self.ring
        add, mul, neg = R.add_table, R.mul_table, R.neg_table
        acc = 0
        for t in range(self.k):
            acc = add[acc, mul[v[t], w[self.k + t]]]
            acc = add[acc, neg[mul[v[self.k + t], w[t]]]]
        return int(acc)

    def radical_of_ideal(self, ideal_index: int) -> list[tuple]:
        """V(a) = {v : <v, V> inside pi^ideal_index R}, computed by
        pairing against the standard basis vectors."""
        R = self.ring
        cut = min(ideal_index, R.n)
        basis = []
        for t in range(2 * self.k):
            e = [0] * (2 * self.k)
            e[t] = R.one.index
            basis.append(tuple(e))
        out = []
        for v in product(range(R.size), repeat=2 * self.k):
            if all(R.valuation_table[self.pairing_index(v, e)] >= cut for e in basis):
                out.append(v)
        return out


def schrodinger_dim(M: SymplecticModule, chi: AddChar) -> int:
    """sqrt of [V : V(conductor chi)], the dimension of the attached
    two-step model; refuses residue characteristic 2."""
    R = M.ring
    if R.p == 2:
        raise Char2UnsupportedError("halving is unavailable in residue characteristic 2")
    if R.size ** (2 * M.k) > EXPLICIT_CAP:
        raise ValueError("module too large for explicit radical computation")
    from .char_duality import conductor

    rad = M.radical_of_ideal(conductor(chi))
    total = R.size ** (2 * M.k)
    quot, rem = divmod(total, len(rad))
    assert rem == 0
    import math

    root = math.isqrt(quot)
    assert root * root == quot, "index of the radical is not a perfect square"
    return root


# -- explicit induced models -----------------------------------------


def extended_character(H: HeisenbergGroup, b_vec: tuple, b_idx: int, lam_label: tuple):
    """The linear character psi_{b_vec, b} x lambda on H_s = A . L_s,
    tabulated; returns (subgroup elements, LinearChar)."""
    R = H.ring
    k = H.k
    mod, base = base_character_data(R)
    mul, add = R.mul_table, R.add_table
    ann = annihilator_indices(R, b_idx)
    exps = {}
    els = []
    for x in product(range(R.size), repeat=k):
        for y in product(ann, repeat=k):
            for z in range(R.size):
                g = x + y + (z,)
                acc = base[mul[b_idx, z]]
                for t in range(k):
                    acc += base[mul[b_vec[t], x[t]]]
                    acc += base[mul[lam_label[t], y[t]]]
                els.append(g)
                exps[g] = acc % mod
    return els, LinearChar(mod, exps)


def mackey_induced_rep(
    H: HeisenbergGroup, b_vec: tuple, b_idx: int, lam_label: tuple | None = None, check=True
) -> MonomialRep:
    """Explicit monomial model of the irreducible attached to the orbit
    of psi_{b_vec, b} and the stabilizer character lambda."""
    if lam_label is None:
        lam_label = (0,) * H.k
    els, chi = extended_character(H, b_vec, b_idx, lam_label)
    return MonomialRep.induce(H, els, chi, check=check)
