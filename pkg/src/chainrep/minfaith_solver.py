"""Minimal faithful dimension: closed forms, the greedy p-group
solver, and explicit faithful models.

The closed forms: for Heisenberg groups over a chain ring the minimum
is sum_{i<xi} f q^{k(n-i)}; unitriangular groups of size k+2 match the
Heisenberg value away from residue characteristic 2; affine groups give
q^n - q^{n-1}; a two-step p-group with cyclic commutator subgroup gives
sqrt([G:Z]) + d'(Z) - 1.

The solver reduces the p-group problem to a minimum-weight spanning
subset of restricted central characters in the dual of the p-torsion
of the center, which the dimension-greedy choice solves exactly by the
matroid exchange property."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .chain_ring import INF, RingSpec, make_ring
from .char_duality import (
    DualVector,
    NotSpanningError,
    basis_greedy,
    psi_b,
    restrict_to_omega1,
    spans_dual,
)
from .exactrep import DirectSumRep, LinearChar, MonomialRep
from .group_models import (
    AbstractGroup,
    AffineGroup,
    Char2UnsupportedError,
    HeisenbergGroup,
    StructureScan,
    abelian_basis,
    abelian_characters,
    extend_character,
    structure_scan,
)
from .mackey_irreps import irrep_catalog, mackey_induced_rep

MATRIX_CAP = 4096


class NotTwoStepError(ValueError):
    pass


class CommutatorNotCyclicError(ValueError):
    pass


class NonSquareIndexError(ValueError):
    pass


class ConstraintViolationError(ValueError):
    pass


class PoolDoesNotSpanError(NotSpanningError):
    pass


# -- closed forms -----------------------------------------------------


def formula_heisenberg(p: int, f: int, e, n: int, k: int = 1) -> int:
    """sum_{i<xi} f * q^(k(n-i)) for Hei_{2k+1}(R)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if e == "inf":
        e = INF
    xi = n if e == INF else min(e, n)
    q = p**f
    if not isinstance(xi, int):
        raise ValueError("bad parameters")
    make_ring(p, f, e, n)  # parameter validation
    return sum(f * q ** (k * (n - i)) for i in range(xi))


def formula_unitriangular(p: int, f: int, e, n: int, size: int) -> int:
    """Unitriangular groups of matrix size k+2 share the Heisenberg
    value; residue characteristic 2 is out of scope."""
    if size < 3:
        raise ValueError("matrix size must be >= 3")
    if p == 2:
        raise Char2UnsupportedError(
            "unitriangular reduction is not available in residue characteristic 2"
        )
    return formula_heisenberg(p, f, e, n, k=size - 2)


def formula_affine(p: int, f: int, n: int) -> int:
    """q^n - q^(n-1): the unit count of the ring."""
    q = p**f
    return q**n - q ** (n - 1)


def formula_two_step(G: AbstractGroup, scan: StructureScan | None = None) -> int:
    """sqrt([G:Z]) + d'(Z) - 1 for a two-step p-group with cyclic
    commutator subgroup."""
    scan = scan or structure_scan(G)
    if not scan.is_p_group:
        raise NotTwoStepError("group is not a p-group")
    if not scan.is_two_step:
        raise NotTwoStepError("commutator subgroup is not central (or is trivial)")
    if not scan.commutator_cyclic:
        raise CommutatorNotCyclicError("commutator subgroup is not cyclic")
    index = G.order // len(scan.center)
    root = math.isqrt(index)
    if root * root != index:
        raise NonSquareIndexError(f"[G:Z] = {index} is not a perfect square")
    return root + scan.center_invariant_count - 1


# -- level profile audit ----------------------------------------------


def levels_lower_bound_audit(p: int, f: int, e, n: int, k: int, alphas) -> bool:
    """Check one level profile: alphas[i] spanning vectors taken at
    level i must satisfy the suffix bounds, and the resulting dimension
    total must dominate the closed form."""
    if e == "inf":
        e = INF
    xi = n if e == INF else min(e, n)
    q = p**f
    alphas = list(alphas)
    if len(alphas) != xi or any(a < 0 for a in alphas):
        raise ConstraintViolationError(f"profile {alphas} malformed for xi = {xi}")
    if sum(alphas) != f * xi:
        raise ConstraintViolationError(f"profile {alphas} does not have f*xi entries")
    for i in range(xi):
        if sum(alphas[i:]) > f * (xi - i):
            raise ConstraintViolationError(
                f"profile {alphas} packs too many vectors at levels >= {i}"
            )
    total = sum(alphas[i] * q ** (k * (n - i)) for i in range(xi))
    return total >= formula_heisenberg(p, f, e, n, k)


# -- solver -----------------------------------------------------------


@dataclass
class FaithfulSolution:
    """A minimal faithful direct sum: summand descriptors, total
    dimension, and (when materialized) explicit monomial models with a
    verified trivial kernel."""

    group: str
    total_dim: int
    summands: list
    certificate: list | None = None
    reps: list | None = field(default=None, repr=False)
    verified_faithful: bool | None = None

    def to_json(self) -> dict:
        out = {
            "group": self.group,
            "total_dim": self.total_dim,
            "summands": [_summand_json(s) for s in self.summands],
        }
        if self.certificate is not None:
            out["certificate"] = [list(v) for v in self.certificate]
        if self.verified_faithful is not None:
            out["verified_faithful"] = self.verified_faithful
        return out


def _summand_json(s):
    if isinstance(s, dict):
        return s
    return {"summand": repr(s)}


def solve_pgroup(entries, p: int, ambient_dim: int) -> FaithfulSolution:
    """Greedy minimum: entries are (dim, dual vector, payload) triples
    covering the complete irreducible catalog of a p-group; returns the
    dimension-greedy spanning selection, which is exact."""
    dims = [t[0] for t in entries]
    vecs = [t[1] for t in entries]
    if not entries:
        raise PoolDoesNotSpanError("empty catalog")
    try:
        chosen = basis_greedy(vecs, dims, p, ambient_dim)
    except NotSpanningError as exc:
        raise PoolDoesNotSpanError(str(exc)) from None
    total = sum(dims[i] for i in chosen)

    def _coords(v):
        return tuple(v.coords) if isinstance(v, DualVector) else tuple(v)

    return FaithfulSolution(
        group="p-group catalog",
        total_dim=total,
        summands=[entries[i][2] for i in chosen],
        certificate=[_coords(vecs[i]) for i in chosen],
    )


def heisenberg_catalog_entries(H: HeisenbergGroup):
    """(dim, DualVector, descriptor) per catalog irrep."""
    R = H.ring
    out = []
    for desc in irrep_catalog(H):
        chi = desc.central_char(R)
        out.append((desc.dim, restrict_to_omega1(chi), desc))
    return out


def solve_heisenberg(R: RingSpec, k: int = 1) -> FaithfulSolution:
    H = HeisenbergGroup(R, k)
    sol = solve_pgroup(heisenberg_catalog_entries(H), R.p, R.d_invariant)
    sol.group = f"heisenberg k={k} over {R!r}"
    return sol


# -- explicit constructions ------------------------------------------


def heisenberg_basis_parameters(R: RingSpec) -> list:
    """The central parameters b_ij = omega_i pi^j, i <= f, j < xi, whose
    characters restrict to a basis of the dual of Omega_1."""
    out = []
    for i in range(R.f):
        for j in range(R.xi):
            c = [0] * (R.f * R.n)
            c[i * R.n + j] = 1
            out.append(R.element(c))
    return out


def construct_faithful_heisenberg(
    R: RingSpec, k: int = 1, matrices: bool | None = None
) -> FaithfulSolution:
    """Direct sum over the basis parameters b_ij of the induced model
    with trivial orbit and stabilizer character.  Emits explicit
    monomial matrices and verifies the kernel when the group is at desk
    scale (or when forced via matrices=True)."""
    H = HeisenbergGroup(R, k)
    params = heisenberg_basis_parameters(R)
    vectors = [restrict_to_omega1(psi_b(R, b)) for b in params]
    if not spans_dual(vectors, R):
        raise PoolDoesNotSpanError("basis parameters fail to span (internal error)")
    summands = []
    total = 0
    for b in params:
        j = R.valuation(b)
        dim = R.q ** (k * (R.n - j))
        total += dim
        summands.append(
            {"b": list(b.coords), "level": j, "dim": dim}
        )
    expected = formula_heisenberg(R.p, R.f, R.e, R.n, k)
    assert total == expected, "construction total deviates from the closed form"
    if matrices is None:
        matrices = H.order <= MATRIX_CAP
    reps = None
    verified = None
    if matrices:
        reps = [
            mackey_induced_rep(H, (0,) * k, b.index, (0,) * k, check=False)
            for b in params
        ]
        assert [r.degree for r in reps] == [s["dim"] for s in summands]
        verified = DirectSumRep(reps).is_faithful()
    return FaithfulSolution(
        group=f"heisenberg k={k} over {R!r}",
        total_dim=total,
        summands=summands,
        certificate=[v.coords for v in vectors],
        reps=reps,
        verified_faithful=verified,
    )


def construct_faithful_two_step(G: AbstractGroup) -> FaithfulSolution:
    """Induced character from a maximal abelian subgroup through a
    center character faithful on the commutator subgroup, plus r-1
    linear characters through the commutator quotient."""
    scan = structure_scan(G)
    target = formula_two_step(G, scan)
    Z = scan.center
    B = scan.commutator
    A = scan.maximal_abelian
    r = scan.center_invariant_count
    # chi1: character of Z injective on B
    bgens, borders, _ = abelian_basis(G, B)
    assert len(borders) == 1
    c = borders[0]
    bgen = bgens[0]
    chi1 = None
    for M, exps in abelian_characters(G, Z):
        v = exps[bgen]
        if v and M // math.gcd(v, M) == c:
            chi1 = (M, exps)
            break
    assert chi1 is not None, "no center character is faithful on the commutator"
    M1, exps1 = chi1
    MA, expsA = extend_character(G, Z, M1, exps1, A)
    rho = MonomialRep.induce(G, A, LinearChar(MA, expsA), check=False)
    assert rho.degree == G.order // len(A)
    assert rho.degree**2 == G.order // len(Z), (
        "maximal abelian does not sit halfway between center and group"
    )
    reps = [rho]
    # remaining summands: coordinate characters of ker(chi1) extended
    # through G/B
    K1 = sorted(g for g in Z if exps1[g] % M1 == 0)
    Q, coset_of = G.quotient(B)
    k1_images = sorted({int(coset_of[g]) for g in K1})
    kgens, korders, kcoords = abelian_basis(Q, k1_images)
    for t in range(len(kgens)):
        dt = korders[t]
        sub_exps = {g: kcoords[g][t] % dt for g in k1_images}
        MQ, expsQ = extend_character(Q, k1_images, dt, sub_exps, Q.elements)
        lin = LinearChar(MQ, {g: expsQ[int(coset_of[g])] for g in G.elements})
        reps.append(MonomialRep.linear(G, lin))
    total = sum(rep.degree for rep in reps)
    assert total == target, f"construction reached {total}, closed form {target}"
    verified = DirectSumRep(reps).is_faithful()
    return FaithfulSolution(
        group=f"two-step table group of order {G.order}",
        total_dim=total,
        summands=[{"kind": "induced", "dim": rho.degree}]
        + [{"kind": "linear", "dim": 1} for _ in reps[1:]],
        reps=reps,
        verified_faithful=verified,
    )


def construct_faithful_affine(R: RingSpec, matrices: bool | None = None) -> FaithfulSolution:
    """Induce the fixed primitive character of the translation subgroup
    up to Aff(R): a faithful model of dimension q^n - q^(n-1)."""
    from .char_duality import base_character_data

    Aff = AffineGroup(R)
    target = formula_affine(R.p, R.f, R.n)
    if matrices is None:
        matrices = Aff.order <= MATRIX_CAP
    summand = {"kind": "induced from translations", "dim": target}
    reps = None
    verified = None
    if matrices:
        mod, base = base_character_data(R)
        trans = list(Aff.translations.elements)
        chi = LinearChar(mod, {g: base[g[0]] for g in trans})
        rho = MonomialRep.induce(Aff, trans, chi, check=False)
        assert rho.degree == target
        reps = [rho]
        verified = DirectSumRep(reps).is_faithful()
    return FaithfulSolution(
        group=f"affine over {R!r}",
        total_dim=target,
        summands=[summand],
        reps=reps,
        verified_faithful=verified,
    )


# -- cyclic-by-multipliers orbit bound -------------------------------


def orbit_lower_bound(modulus: int, multipliers, h_order: int | None = None):
    """(orbit size of a generator of Z/modulus, equality flag).  The
    orbit of a generator under the multiplier subgroup is the subgroup
    itself; equality in the dimension bound holds when the acting group
    embeds (h_order equals the multiplier subgroup size)."""
    mults = {1}
    frontier = {m % modulus for m in multipliers}
    for m in frontier:
        if math.gcd(m, modulus) != 1:
            raise ValueError(f"multiplier {m} is not invertible mod {modulus}")
    while frontier - mults:
        mults |= frontier
        frontier = {(a * b) % modulus for a in mults for b in mults}
    bound = len(mults)
    equality = h_order is None or h_order == bound
    return bound, equality
