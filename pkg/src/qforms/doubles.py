"""Twisted-double invariants of small finite groups.

Given a finite group G with a 3-cocycle w, the maximal Tannakian
subcategories of the twisted double are parameterized by pairs (N, b): a
normal abelian subgroup N with w in Omega(G;N), and b running over a torsor
of size |Hom(wedge^2 N, Q/Z)^G|.  This module enumerates that census, the
subgroup N^w(G) generated by all passing N, the radical group G/N^w(G) and
the mantle descriptor (N^w(G), w restricted), plus two self-contained
engines used for the small-dimension classification counts: cyclic group
cohomology in Tate form, and the orbit counts of reductive cocycle classes
on the elementary abelian group of order p^3.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import config
from .abelian import FinAbGroup, GroupHom, Subgroup, abelian_structure
from .cocycles import (
    Cocycle3,
    invariant_alternating_count,
    omega_in_Omega,
    restrict,
    zero_cocycle,
)
from .errors import InvalidInputError
from .groups import FinGroup
from .premetric import (
    PreMetricGroup,
    build_premetric,
    coradical_subgroup,
)
from .qz import QZ, qz


@dataclass(frozen=True)
class CensusEntry:
    """One normal abelian subgroup's contribution to the Lagrangian census."""

    subgroup: tuple  # element indices in G
    obstruction_ok: bool
    torsor_size: int

    def __post_init__(self):
        if self.torsor_size > 0 and not self.obstruction_ok:
            raise InvalidInputError("a positive torsor needs a vanishing obstruction")


def lagrangian_census(G: FinGroup, w: Optional[Cocycle3] = None,
                      cap: int | None = None):
    """One entry per normal abelian subgroup, plus the total count.

    The torsor size is the number of G-invariant alternating bilinear forms
    on N when the obstruction vanishes, and 0 otherwise.
    """
    if w is None:
        w = zero_cocycle(G)
    if w.group != G:
        raise InvalidInputError("cocycle lives on a different group")
    entries = []
    total = 0
    for N in G.normal_abelian_subgroups():
        ok = omega_in_Omega(w, N, cap=cap)
        size = invariant_alternating_count(G, N) if ok else 0
        entries.append(CensusEntry(N, ok, size))
        total += size
    return entries, total


def n_omega(G: FinGroup, w: Optional[Cocycle3] = None, cap: int | None = None):
    """The subgroup generated by all normal abelian N with w in Omega(G;N)."""
    if w is None:
        w = zero_cocycle(G)
    gens = set()
    for N in G.normal_abelian_subgroups():
        if omega_in_Omega(w, N, cap=cap):
            gens.update(N)
    return G.closure(gens)


@dataclass(frozen=True)
class RadicalMantleReport:
    n_omega_elements: tuple
    radical_group: FinGroup
    mantle_group: FinGroup
    mantle_cocycle: Cocycle3
    reductive: bool


def radical_and_mantle(G: FinGroup, w: Optional[Cocycle3] = None,
                       cap: int | None = None) -> RadicalMantleReport:
    """Radical group G/N^w(G) and mantle descriptor (N^w(G), w restricted).

    N^w(G) is always a normal (indeed nilpotent) subgroup; both facts are
    asserted.  The double is reductive iff N^w(G) = G.
    """
    if w is None:
        w = zero_cocycle(G)
    nw = n_omega(G, w, cap=cap)
    if not G.is_normal(nw):
        raise InvalidInputError("N^w(G) failed to be normal")
    sub, _ = G.subgroup_group(nw)
    if not sub.is_nilpotent():
        raise InvalidInputError("N^w(G) failed to be nilpotent")
    quot, _ = G.quotient(nw)
    return RadicalMantleReport(
        n_omega_elements=nw,
        radical_group=quot,
        mantle_group=sub,
        mantle_cocycle=restrict(w, nw),
        reductive=(len(nw) == G.order),
    )


# -- cyclic group cohomology ------------------------------------------------------


def cyclic_cohomology(m: int, module: Optional[FinAbGroup], degree: int,
                      action: Optional[GroupHom] = None) -> FinAbGroup:
    """Tate-periodic cohomology of Z/m with coefficients in a finite module.

    ``module=None`` means the divisible coefficients Q/Z with the trivial
    action: H^odd = Z/m and H^even = 0 in positive degrees.  For a finite
    module M with an action of order dividing m,
        H^odd  = ker(Norm) / im(g - 1),
        H^even = M^g / im(Norm),
    where Norm = 1 + g + ... + g^(m-1).
    """
    if m < 1 or degree < 1:
        raise InvalidInputError("cyclic_cohomology needs m >= 1 and degree >= 1")
    if module is None:
        return FinAbGroup([m] if degree % 2 == 1 and m > 1 else [])
    if action is None:
        action = GroupHom(module, module, module.generators())
    if action.domain != module or action.codomain != module:
        raise InvalidInputError("the action must be an endomorphism of the module")
    if not action.is_bijective():
        raise InvalidInputError("the action must be invertible")
    x = action
    for _ in range(m - 1):
        x = action.compose(x)
    if any(x(g) != g for g in module.generators()):
        raise InvalidInputError("the action's order must divide m")

    elems = module.elements()

    def norm(v):
        total = module.zero
        y = v
        for _ in range(m):
            total = module.add(total, y)
            y = action(y)
        return total

    if degree % 2 == 1:
        top = [v for v in elems if norm(v) == module.zero]
        bottom = {module.add(action(v), module.neg(v)) for v in elems}
    else:
        top = [v for v in elems if action(v) == v]
        bottom = {norm(v) for v in elems}
    sub = Subgroup(module, bottom)
    reps = {}
    for v in sorted(top):
        coset = min(module.add(v, h) for h in sub.sorted_elements)
        reps.setdefault(coset, coset)
    rep_list = sorted(reps)
    index = {}
    for v in top:
        index[v] = min(module.add(v, h) for h in sub.sorted_elements)

    def cadd(u, v2):
        return index[module.add(u, v2)]

    grp, _, _ = abelian_structure(rep_list, cadd, index[module.zero])
    return grp


# -- reductive cocycle classes on E_{p^3} ------------------------------------------


def _gl3_generators(p: int):
    gens = []
    for i in range(3):
        for j in range(3):
            if i != j:
                E = np.eye(3, dtype=np.int64)
                E[i, j] = 1
                gens.append(E % p)
    if p > 2:
        root = _primitive_root(p)
        D = np.eye(3, dtype=np.int64)
        D[0, 0] = root
        gens.append(D)
    return gens


def _primitive_root(p: int) -> int:
    order = p - 1
    factors = []
    n = order
    d = 2
    while d * d <= n:
        if n % d == 0:
            factors.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        factors.append(n)
    for g in range(2, p):
        if all(pow(g, order // f, p) != 1 for f in factors):
            return g
    raise InvalidInputError(f"{p} is not prime")


def symmetric_form_premetric(p: int, S) -> PreMetricGroup:
    """The form q(x) = (x^T S x)/p on (Z/p)^3 for a symmetric matrix S."""
    S = [[int(v) % p for v in row] for row in S]
    q_gen = [qz(S[i][i], p) for i in range(3)]
    b_rows = [[qz(2 * S[i][j], p) for j in range(i)] for i in range(1, 3)]
    return build_premetric([p, p, p], q_gen, b_rows)


def _isogen_sym_matrices(p: int):
    """Symmetric S over F_p whose form makes E_{p^3} isotropically generated.

    Vectorised: evaluate x^T S x for every S and every x (in chunks), then
    check that the isotropic vectors span F_p^3.
    """
    vecs = np.array(list(itertools.product(range(p), repeat=3)), dtype=np.int64)
    coords = [(0, 0), (1, 1), (2, 2), (0, 1), (0, 2), (1, 2)]
    combos = np.array(list(itertools.product(range(p), repeat=6)), dtype=np.int64)
    # quadratic monomial values per vector: x_i * x_j (doubled off-diagonal)
    mono = np.stack(
        [vecs[:, i] * vecs[:, j] * (1 if i == j else 2) for (i, j) in coords],
        axis=1,
    )
    passing = []
    chunk = 4096
    for start in range(0, len(combos), chunk):
        block = combos[start : start + chunk]
        values = block @ mono.T % p  # (chunk, num_vecs)
        for row, combo in zip(values, block):
            iso = vecs[row == 0]
            if _rank_mod_p(iso, p) == 3:
                S = np.zeros((3, 3), dtype=np.int64)
                for (i, j), c in zip(coords, combo):
                    S[i, j] = c
                    S[j, i] = c
                passing.append(S)
    return passing


def _rank_mod_p(rows, p: int) -> int:
    A = rows % p
    rank = 0
    ncols = A.shape[1] if A.size else 0
    for col in range(ncols):
        piv = None
        for r in range(rank, A.shape[0]):
            if A[r, col] % p:
                piv = r
                break
        if piv is None:
            continue
        A[[rank, piv]] = A[[piv, rank]]
        inv = pow(int(A[rank, col]), -1, p)
        A[rank] = A[rank] * inv % p
        for r in range(A.shape[0]):
            if r != rank and A[r, col]:
                A[r] = (A[r] - A[r, col] * A[rank]) % p
        rank += 1
        if rank == 3:
            break
    return rank


def _sym_key(S, p: int) -> int:
    key = 0
    for i in range(3):
        for j in range(i, 3):
            key = key * p + int(S[i, j]) % p
    return key


def ep3_orbit_reps(p: int):
    """Orbit representatives of reductive non-pointed cocycle classes on the
    elementary abelian group of order p^3.

    Odd p: states are pairs (lambda, S), lambda a unit and S symmetric with
    the isotropic-generation property; A acts by (det(A) lambda, A^T S A).
    p = 2: states are supports (subsets of the 7 order-2 subgroups) of
    weight 1 or 3 whose complements generate the group.
    """
    if p == 2:
        vectors = list(itertools.product(range(2), repeat=3))[1:]
        states = []
        for weight in (1, 3):
            for support in itertools.combinations(range(7), weight):
                complement = [np.array(vectors[i]) for i in range(7) if i not in support]
                if complement and _rank_mod_p(np.array(complement), 2) == 3:
                    states.append(frozenset(support))
        gens = _gl3_generators(2)
        vec_arr = np.array(vectors, dtype=np.int64)
        vec_index = {tuple(v): i for i, v in enumerate(vectors)}

        def act(A, support):
            return frozenset(
                vec_index[tuple(vec_arr[i] @ A % 2)] for i in support
            )

        return _orbit_reps(states, gens, act)

    if p > 7:
        raise InvalidInputError("ep3 orbit counting is limited to p <= 7")
    if p % 2 == 0 or p < 2:
        raise InvalidInputError("p must be prime")
    sym = _isogen_sym_matrices(p)
    n_s = len(sym)
    stack = np.stack(sym)  # (n_s, 3, 3)
    skeys = _sym_keys_vec(stack, p)
    order = np.argsort(skeys)
    sorted_keys = skeys[order]
    gens = _gl3_generators(p)
    n_states = (p - 1) * n_s  # state index = (lam - 1) * n_s + s_idx
    parent = list(range(n_states))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for A in gens:
        det = int(round(np.linalg.det(A.astype(float)))) % p
        S2 = np.einsum("mi,nmk,kl->nil", A, stack, A) % p
        key2 = _sym_keys_vec(S2, p)
        s_idx2 = order[np.searchsorted(sorted_keys, key2)]
        for lam in range(1, p):
            lam2 = det * lam % p
            base, base2 = (lam - 1) * n_s, (lam2 - 1) * n_s
            for s in range(n_s):
                ri, rj = find(base + s), find(base2 + int(s_idx2[s]))
                if ri != rj:
                    parent[max(ri, rj)] = min(ri, rj)
    roots = sorted({find(i) for i in range(n_states)})
    return [(root // n_s + 1, sym[root % n_s]) for root in roots]


def _sym_keys_vec(stack, p: int):
    """Base-p packing of the 6 independent entries of symmetric matrices."""
    key = np.zeros(stack.shape[0], dtype=np.int64)
    for (i, j) in ((0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)):
        key = key * p + stack[:, i, j] % p
    return key


def _orbit_reps(states, gens, act):
    index = {s: i for i, s in enumerate(states)}
    parent = list(range(len(states)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for A in gens:
        for s, i in index.items():
            t = act(A, s)
            j = index[t]
            ri, rj = find(i), find(j)
            if ri != rj:
                parent[max(ri, rj)] = min(ri, rj)
    roots = sorted({find(i) for i in range(len(states))})
    return [states[r] for r in roots]


def ep3_orbit_count(p: int) -> int:
    """Number of braided-equivalence classes of integral non-pointed
    reductive doubles of dimension p^6 (expected p + 1)."""
    return len(ep3_orbit_reps(p))


# -- weight and support on E_8 ------------------------------------------------------


def support_and_weight(w: Cocycle3):
    """Support of a cocycle on the elementary abelian 2-group of order 8:
    the set of order-2 subgroups where the restriction is nontrivial,
    detected by the coboundary-stable value w(g, g, g)."""
    G = w.group
    if G.order != 8 or not G.is_abelian() or any(
        G.element_order(g) != 2 for g in range(1, 8)
    ):
        raise InvalidInputError("support/weight is defined on (Z/2)^3 only")
    support = tuple(
        g for g in range(1, 8) if not w(g, g, g).is_zero()
    )
    return support, len(support)
