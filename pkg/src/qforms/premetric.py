"""Pre-metric groups: finite abelian groups with quadratic forms into Q/Z.

A quadratic form is stored by its values on the standard generators plus the
bilinear pairing values on generator pairs; the diagonal of the pairing is
forced by polarization, ``B(g, g) = 2 q(g)``, and never stored.  On top of
the basic form calculus this module implements the lattice of isotropic
subgroups and everything derived from it: radical, coradical, mantle, core,
isotropic generation, reductivity, and the classification of reductive and
anisotropic groups at prime-power order.

Conventions:
  * multiplicative ``q(x) = 1`` in root-of-unity language is ``q(x) == 0``
    here; a fermion is an order-2 element with ``q(x) == 1/2``;
  * "isotropic subgroup" means ``q`` vanishes on the subgroup (the pairing
    then vanishes on it too, by polarization);
  * all enumerations are in the documented deterministic order, so reports
    and censuses are reproducible byte for byte.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import prod
from typing import Optional

from . import config
from .abelian import (
    FinAbGroup,
    GroupHom,
    Subgroup,
    abelian_structure,
    canonical_from_orders,
    coset_space,
    generated_subgroup,
)
from .errors import InternalCheckError, InvalidInputError
from .qz import QZ, qz


class PreMetricGroup:
    """A finite abelian group with a Q/Z-valued quadratic form."""

    __slots__ = ("group", "q_gen", "b_pairs", "_q_table", "_light_cone")

    def __init__(self, group: FinAbGroup, q_gen, b_pairs) -> None:
        q_gen = tuple(q_gen)
        b_pairs = tuple(tuple(row) for row in b_pairs)
        k = group.rank
        if len(q_gen) != k:
            raise InvalidInputError("need one q-value per generator")
        if len(b_pairs) != max(k - 1, 0) or any(
            len(row) != i + 1 for i, row in enumerate(b_pairs)
        ):
            raise InvalidInputError(
                "b_pairs must be lower-triangular: row i lists B(g_{i+1}, g_j) for j <= i"
            )
        d = group.invariant_factors
        for i in range(k):
            if not (q_gen[i] * (d[i] * d[i])).is_zero() or not (
                q_gen[i] * (2 * d[i])
            ).is_zero():
                raise InvalidInputError(
                    f"q(g{i}) = {q_gen[i]} is not well defined on a generator of order {d[i]}"
                )
        for i in range(1, k):
            for j in range(i):
                b = b_pairs[i - 1][j]
                if not (b * d[i]).is_zero() or not (b * d[j]).is_zero():
                    raise InvalidInputError(
                        f"B(g{i}, g{j}) = {b} is not well defined"
                    )
        object.__setattr__(self, "group", group)
        object.__setattr__(self, "q_gen", q_gen)
        object.__setattr__(self, "b_pairs", b_pairs)
        object.__setattr__(self, "_q_table", None)
        object.__setattr__(self, "_light_cone", None)

    def __setattr__(self, name, value):  # pragma: no cover
        raise AttributeError("PreMetricGroup is immutable")

    # -- evaluation --------------------------------------------------------

    def b_gen(self, i: int, j: int) -> QZ:
        """Pairing of standard generators, including the forced diagonal."""
        if i == j:
            return self.q_gen[i] * 2
        if i < j:
            i, j = j, i
        return self.b_pairs[i - 1][j]

    def eval_q(self, x) -> QZ:
        x = self.group.check_element(x)
        total = QZ.ZERO
        for i, c in enumerate(x):
            if c:
                total = total + self.q_gen[i] * (c * c)
        for i in range(1, len(x)):
            if x[i]:
                for j in range(i):
                    if x[j]:
                        total = total + self.b_pairs[i - 1][j] * (x[i] * x[j])
        return total

    def eval_b(self, x, y) -> QZ:
        x = self.group.check_element(x)
        y = self.group.check_element(y)
        total = QZ.ZERO
        for i, (a, b) in enumerate(zip(x, y)):
            if a and b:
                total = total + self.q_gen[i] * (2 * a * b)
        k = len(x)
        for i in range(1, k):
            for j in range(i):
                c = x[i] * y[j] + x[j] * y[i]
                if c:
                    total = total + self.b_pairs[i - 1][j] * c
        return total

    def q_table(self) -> dict:
        if self._q_table is None:
            object.__setattr__(
                self, "_q_table", {x: self.eval_q(x) for x in self.group.elements()}
            )
        return self._q_table

    def q_values(self) -> tuple:
        """The multiset of q-values in element order, as a sorted tuple."""
        return tuple(sorted(self.q_table().values()))

    @property
    def order(self) -> int:
        return self.group.order

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PreMetricGroup)
            and self.group == other.group
            and self.q_gen == other.q_gen
            and self.b_pairs == other.b_pairs
        )

    def __hash__(self) -> int:
        return hash((self.group, self.q_gen, self.b_pairs))

    def __repr__(self) -> str:
        return f"PreMetricGroup({self.group.describe()}, q_gen={list(map(str, self.q_gen))})"


# -- constructors -----------------------------------------------------------


def build_premetric(group, q_gen, b_pairs) -> PreMetricGroup:
    """Validated construction from raw generator data."""
    if not isinstance(group, FinAbGroup):
        group = FinAbGroup(group)
    return PreMetricGroup(group, q_gen, b_pairs)


def trivial_form() -> PreMetricGroup:
    return PreMetricGroup(FinAbGroup([]), [], [])


def q_odd(p: int, m: int, a: int) -> PreMetricGroup:
    """``q(x) = a x^2 / p^m`` on Z/p^m, p odd."""
    if p < 3 or p % 2 == 0:
        raise InvalidInputError("q_odd needs an odd prime")
    if m < 1:
        raise InvalidInputError("q_odd needs m >= 1")
    return PreMetricGroup(FinAbGroup([p**m]), [qz(a, p**m)], [])


def q_two(m: int, a: int) -> PreMetricGroup:
    """``q(x) = a x^2 / 2^(m+1)`` on Z/2^m."""
    if m < 1:
        raise InvalidInputError("q_two needs m >= 1")
    return PreMetricGroup(FinAbGroup([2**m]), [qz(a, 2 ** (m + 1))], [])


def hyper(n: int) -> PreMetricGroup:
    """The hyperbolic plane ``q(x, y) = x y / n`` on (Z/n)^2."""
    if n < 1:
        raise InvalidInputError("hyper needs n >= 1")
    if n == 1:
        return trivial_form()
    return PreMetricGroup(FinAbGroup([n, n]), [QZ.ZERO, QZ.ZERO], [[qz(1, n)]])


def f_form(m: int) -> PreMetricGroup:
    """``q(x, y) = (x^2 + x y + y^2) / 2^m`` on (Z/2^m)^2."""
    if m < 1:
        raise InvalidInputError("f_form needs m >= 1")
    n = 2**m
    return PreMetricGroup(FinAbGroup([n, n]), [qz(1, n), qz(1, n)], [[qz(1, n)]])


def hyper_general(A) -> PreMetricGroup:
    """``A + dual(A)`` with the evaluation pairing; q vanishes on both halves."""
    if not isinstance(A, FinAbGroup):
        A = FinAbGroup(A)
    k = A.rank
    if k == 0:
        return trivial_form()
    orders = list(A.invariant_factors) * 2
    G, images = canonical_from_orders(orders)

    def pair_q(img):
        a, phi = img[:k], img[k:]
        return _dual_pairing(A, a, phi)

    def pair_b(u, v):
        return _dual_pairing(A, u[:k], v[k:]) + _dual_pairing(A, v[:k], u[k:])

    q_gen = [pair_q(img) for img in images]
    b_rows = [
        [pair_b(images[i], images[j]) for j in range(i)]
        for i in range(1, len(images))
    ]
    return PreMetricGroup(G, q_gen, b_rows)


def _dual_pairing(A: FinAbGroup, a, phi) -> QZ:
    total = QZ.ZERO
    for x, f, d in zip(a, phi, A.invariant_factors):
        total = total + qz(x * f, d)
    return total


def orthogonal_sum(P1: PreMetricGroup, P2: PreMetricGroup) -> PreMetricGroup:
    """Direct product group; q adds, the pairing vanishes across the factors."""
    if P1.group.rank == 0:
        return P2
    if P2.group.rank == 0:
        return P1
    k1 = P1.group.rank
    orders = list(P1.group.invariant_factors) + list(P2.group.invariant_factors)
    G, images = canonical_from_orders(orders)

    def q_of(img):
        return P1.eval_q(img[:k1]) + P2.eval_q(img[k1:])

    def b_of(u, v):
        return P1.eval_b(u[:k1], v[:k1]) + P2.eval_b(u[k1:], v[k1:])

    q_gen = [q_of(img) for img in images]
    b_rows = [
        [b_of(images[i], images[j]) for j in range(i)] for i in range(1, len(images))
    ]
    return PreMetricGroup(G, q_gen, b_rows)


def sum_of(parts) -> PreMetricGroup:
    total = trivial_form()
    for p in parts:
        total = orthogonal_sum(total, p)
    return total


_NAMED = {
    "q_odd": q_odd,
    "q_two": q_two,
    "hyper": hyper,
    "f_form": f_form,
    "hyper_general": hyper_general,
    "trivial": trivial_form,
}


def build_named(name: str, args) -> PreMetricGroup:
    try:
        ctor = _NAMED[name]
    except KeyError:
        raise InvalidInputError(f"unknown constructor {name!r}") from None
    return ctor(*args)


def sum_closure(bases, max_order: int):
    """All orthogonal sums of multisets of ``bases`` with order <= max_order.

    Includes the empty sum (the trivial group).  Deterministic order: by
    construction depth, then base index.
    """
    out = [trivial_form()]
    frontier = [(trivial_form(), 0)]
    while frontier:
        nxt = []
        for current, start in frontier:
            for i in range(start, len(bases)):
                if current.order * bases[i].order > max_order:
                    continue
                s = orthogonal_sum(current, bases[i])
                out.append(s)
                nxt.append((s, i))
        frontier = nxt
    return out


# -- the light cone and degeneracy -------------------------------------------


def light_cone(P: PreMetricGroup) -> frozenset:
    """Elements with q(x) = 0."""
    if P._light_cone is None:
        lc = frozenset(x for x, v in P.q_table().items() if v.is_zero())
        object.__setattr__(P, "_light_cone", lc)
    return P._light_cone


def is_anisotropic(P: PreMetricGroup) -> bool:
    return len(light_cone(P)) == 1


def kernel_of_b(P: PreMetricGroup) -> Subgroup:
    """The radical of the pairing: elements pairing trivially with everything."""
    gens = P.group.generators()
    ker = [
        x
        for x in P.group.elements()
        if all(P.eval_b(x, g).is_zero() for g in gens)
    ]
    return Subgroup(P.group, ker)


@dataclass(frozen=True)
class DegeneracyClass:
    kind: str  # nondegenerate | slightly_degenerate | tannakian_radical | other
    fermion: Optional[tuple] = None
    kernel: Optional[Subgroup] = None


def degeneracy_class(P: PreMetricGroup) -> DegeneracyClass:
    ker = kernel_of_b(P)
    if ker.is_trivial():
        return DegeneracyClass("nondegenerate")
    if all(P.eval_q(x).is_zero() for x in ker.sorted_elements):
        return DegeneracyClass("tannakian_radical", kernel=ker)
    if ker.order == 2:
        delta = max(ker.sorted_elements)
        if P.eval_q(delta) == QZ.HALF:
            return DegeneracyClass("slightly_degenerate", fermion=delta, kernel=ker)
    return DegeneracyClass("other", kernel=ker)


def is_metric(P: PreMetricGroup) -> bool:
    return degeneracy_class(P).kind == "nondegenerate"


def fermions(P: PreMetricGroup) -> list:
    """All order-2 elements with q = 1/2, in element order."""
    return [
        x
        for x in P.group.elements()
        if P.group.element_order(x) == 2 and P.eval_q(x) == QZ.HALF
    ]


# -- isotropic subgroup lattice ----------------------------------------------


def isotropic_subgroups(P: PreMetricGroup, cap: int | None = None) -> list:
    """All subgroups on which q vanishes, sorted by (order, elements)."""
    config.check_cap(P.order, cap, "abelian_cap")
    A = P.group
    lc = sorted(light_cone(P))
    table = P.q_table()
    trivial = frozenset({A.zero})
    seen = {trivial}
    frontier = [trivial]
    while frontier:
        nxt = []
        for H in frontier:
            for x in lc:
                if x in H:
                    continue
                K = _isotropic_extend(P, H, x, table)
                if K is not None and K not in seen:
                    seen.add(K)
                    nxt.append(K)
        frontier = nxt
    subs = [Subgroup(A, s) for s in seen]
    return sorted(subs, key=Subgroup.sort_key)


def _isotropic_extend(P, base, x, table):
    A = P.group
    out = set(base)
    shift = x
    while shift not in base:
        for h in base:
            y = A.add(h, shift)
            if not table[y].is_zero():
                return None
            out.add(y)
        shift = A.add(shift, x)
    return frozenset(out)


def maximal_isotropic_subgroups(P: PreMetricGroup, cap: int | None = None) -> list:
    """Isotropic subgroups maximal under inclusion, in deterministic order.

    Maximality is decided by pairwise inclusion over the full isotropic list,
    which stays correct for degenerate forms where dimension counts fail.
    """
    subs = isotropic_subgroups(P, cap=cap)
    out = []
    for H in subs:
        if not any(H.elements < K.elements for K in subs):
            out.append(H)
    return out


def radical_subgroup(P: PreMetricGroup, cap: int | None = None) -> Subgroup:
    """Intersection of all maximal isotropic subgroups."""
    maxima = maximal_isotropic_subgroups(P, cap=cap)
    elems = set(maxima[0].elements)
    for H in maxima[1:]:
        elems &= H.elements
    return Subgroup(P.group, elems)


def coradical_subgroup(P: PreMetricGroup) -> Subgroup:
    """Subgroup generated by the light cone."""
    return generated_subgroup(P.group, sorted(light_cone(P)))


# -- localization -------------------------------------------------------------


def orthogonal_complement(P: PreMetricGroup, H: Subgroup) -> Subgroup:
    gens = H.generators
    elems = [
        x
        for x in P.group.elements()
        if all(P.eval_b(x, g).is_zero() for g in gens)
    ]
    return Subgroup(P.group, elems)


def localize(P: PreMetricGroup, H: Subgroup, with_map: bool = False):
    """The induced form on ``H_perp / H`` for an isotropic subgroup H.

    Asserts that q is constant on every coset of H inside the complement
    before quotienting; a failure there would signal an internal bug, since
    isotropy of H makes constancy automatic.
    """
    if H.parent != P.group:
        raise InvalidInputError("H does not live in the given group")
    table = P.q_table()
    if any(not table[h].is_zero() for h in H.sorted_elements):
        raise InvalidInputError("localization needs an isotropic subgroup")
    if H.is_trivial():
        if with_map:
            return P, {x: x for x in P.group.elements()}
        return P
    perp = orthogonal_complement(P, H)
    cosets = coset_space(perp.sorted_elements, H)
    rep_of = cosets["rep_of"]
    for x in perp.sorted_elements:
        if table[x] != table[rep_of[x]]:
            raise InternalCheckError(
                "q is not constant on a coset of an isotropic subgroup"
            )
    A = P.group

    def cadd(u, v):
        return rep_of[A.add(u, v)]

    Q, to_q, from_q = abelian_structure(cosets["reps"], cadd, rep_of[A.zero])
    gens = [from_q[e] for e in Q.generators()]
    q_gen = [table[g] for g in gens]
    b_rows = [
        [P.eval_b(gens[i], gens[j]) for j in range(i)] for i in range(1, len(gens))
    ]
    result = PreMetricGroup(Q, q_gen, b_rows)
    if with_map:
        return result, {x: to_q[rep_of[x]] for x in perp.sorted_elements}
    return result


def restricted(P: PreMetricGroup, S: Subgroup, with_maps: bool = False):
    """The form restricted to a subgroup, re-expressed in canonical form."""
    if S.parent != P.group:
        raise InvalidInputError("S does not live in the given group")
    A = P.group
    Q, to_q, from_q = abelian_structure(S.sorted_elements, A.add, A.zero)
    gens = [from_q[e] for e in Q.generators()]
    q_gen = [P.eval_q(g) for g in gens]
    b_rows = [
        [P.eval_b(gens[i], gens[j]) for j in range(i)] for i in range(1, len(gens))
    ]
    result = PreMetricGroup(Q, q_gen, b_rows)
    if with_maps:
        return result, to_q, from_q
    return result


def mantle(P: PreMetricGroup, cap: int | None = None) -> PreMetricGroup:
    """Localization at the radical; always reductive."""
    return localize(P, radical_subgroup(P, cap=cap))


def core(P: PreMetricGroup, cap: int | None = None, verify: bool = False):
    """Localization at the first maximal isotropic subgroup.

    With ``verify=True`` every other choice is localized too and checked
    isomorphic to the first (the core is choice-independent).
    """
    maxima = maximal_isotropic_subgroups(P, cap=cap)
    result = localize(P, maxima[0])
    if verify:
        for E in maxima[1:]:
            if are_isomorphic(result, localize(P, E)) is None:
                raise InternalCheckError(
                    "core localizations at two maximal isotropic subgroups differ"
                )
    return result


# -- isotropic generation ------------------------------------------------------


def primary_component(P: PreMetricGroup, p: int) -> PreMetricGroup:
    elems = [
        x for x in P.group.elements() if _is_p_power(P.group.element_order(x), p)
    ]
    return restricted(P, Subgroup(P.group, elems))


def _is_p_power(n: int, p: int) -> bool:
    while n % p == 0:
        n //= p
    return n == 1


def _prime_divisors(n: int) -> list:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def contains_hyperbolic(P: PreMetricGroup, n: int):
    """Search for (a, c), both isotropic of order n, spanning a hyperbolic
    (Z/n)^2 inside P: the pairing B(a, c) must have exact order n.  Returns
    the first such pair in element order, or None.
    """
    if n == 1:
        return (P.group.zero, P.group.zero)
    A = P.group
    candidates = [
        x
        for x in sorted(light_cone(P))
        if A.element_order(x) == n
    ]
    n2 = n * n
    for a in candidates:
        for c in candidates:
            if P.eval_b(a, c).order != n:
                continue
            if len(generated_subgroup(A, [a, c]).elements) == n2:
                return (a, c)
    return None


def is_isotropically_generated(P: PreMetricGroup, algorithm: str = "auto") -> bool:
    """Whether the group is generated by its isotropic elements.

    Two independent routes:
      * ``closure``: the coradical is the whole group (works for any form);
      * ``criterion``: per prime component of a metric group, the exponent
        kills every q-value and a hyperbolic pair of full order exists.
    ``auto`` runs closure, plus the criterion as a cross-check whenever the
    form is nondegenerate; disagreement raises InternalCheckError.
    """
    by_closure = coradical_subgroup(P).is_whole()
    if algorithm == "closure":
        return by_closure
    metric = is_metric(P)
    if algorithm == "criterion" and not metric:
        raise InvalidInputError("the criterion algorithm needs a nondegenerate form")
    if algorithm not in ("criterion", "auto", "both"):
        raise InvalidInputError(f"unknown algorithm {algorithm!r}")
    if not metric:  # auto on degenerate input: closure only
        return by_closure
    by_criterion = True
    for p in _prime_divisors(P.order):
        comp = primary_component(P, p)
        n = comp.group.exponent
        if any(not (v * n).is_zero() for v in comp.q_table().values()):
            by_criterion = False
            break
        if contains_hyperbolic(comp, n) is None:
            by_criterion = False
            break
    if algorithm == "criterion":
        return by_criterion
    if by_closure != by_criterion:
        raise InternalCheckError(
            "closure and criterion disagree on isotropic generation"
        )
    return by_closure


# -- reductivity and classification --------------------------------------------


def is_reductive(P: PreMetricGroup, cap: int | None = None) -> bool:
    """Trivial radical, with the classification theorems as cross-checks.

    On a metric group of odd prime-power order the odd dichotomy
    (reductive iff isotropically generated or anisotropic) is asserted; on a
    2-group the trichotomy classifier must assign exactly one case to every
    reductive input.
    """
    reductive = radical_subgroup(P, cap=cap).is_trivial()
    n = P.order
    if n % 2 == 1 and n > 1 and len(_prime_divisors(n)) == 1 and is_metric(P):
        dichotomy = is_isotropically_generated(P, "closure") or is_anisotropic(P)
        if dichotomy != reductive:
            raise InternalCheckError("odd dichotomy violated")
    if _is_p_power(n, 2) and reductive:
        classify_reductive_2group(P, _known_reductive=True)
    return reductive


def classify_reductive_2group(
    P: PreMetricGroup, _known_reductive: bool = False
):
    """Case tag 1, 2 or 3 of the reductive trichotomy, or "not reductive".

    Case 1: isotropically generated.  Case 2: nontrivial anisotropic.
    Case 3: an explicit orthogonal splitting into an isotropically generated
    exponent-2 metric group and a nontrivial anisotropic part with at most
    one fermion is exhibited.  Exactly one case must apply; anything else
    signals a bug.
    """
    if not _is_p_power(P.order, 2):
        raise InvalidInputError("classify_reductive_2group needs a 2-group")
    if not _known_reductive and not radical_subgroup(P).is_trivial():
        return "not reductive"
    case1 = is_isotropically_generated(P, "closure")
    case2 = P.order > 1 and is_anisotropic(P)
    case3 = case3_splitting(P) is not None
    tags = [t for t, hit in ((1, case1), (2, case2), (3, case3)) if hit]
    if len(tags) != 1:
        raise InternalCheckError(
            f"trichotomy failure: cases {tags} hold simultaneously for {P!r}"
        )
    return tags[0]


def case3_splitting(P: PreMetricGroup):
    """An orthogonal splitting witnessing case 3, or None.

    Searches subgroups T of the coradical; T must carry an isotropically
    generated nondegenerate form of exponent 2, with orthogonal complement
    meeting it trivially, covering the group, anisotropic, nontrivial, and
    holding at most one fermion.
    """
    corad = coradical_subgroup(P)
    for T in _subgroups_within(P.group, corad.sorted_elements):
        if T.is_trivial() or T.order == P.order:
            continue
        RT = restricted(P, T)
        if RT.group.exponent != 2:
            continue
        if not is_metric(RT):
            continue
        if not coradical_subgroup(RT).is_whole():
            continue
        Tp = orthogonal_complement(P, T)
        if T.intersection(Tp).order != 1:
            continue
        if T.order * Tp.order != P.order:
            continue
        RTp = restricted(P, Tp)
        if RTp.order == 1 or not is_anisotropic(RTp):
            continue
        if len(fermions(RTp)) > 1:
            continue
        return (T, Tp)
    return None


def _subgroups_within(A: FinAbGroup, allowed_elements) -> list:
    allowed = sorted(allowed_elements)
    trivial = frozenset({A.zero})
    seen = {trivial}
    frontier = [trivial]
    while frontier:
        nxt = []
        for H in frontier:
            for x in allowed:
                if x in H:
                    continue
                K = set(H)
                shift = x
                while shift not in H:
                    K.update(A.add(h, shift) for h in H)
                    shift = A.add(shift, x)
                K = frozenset(K)
                if K not in seen:
                    seen.add(K)
                    nxt.append(K)
        frontier = nxt
    return sorted((Subgroup(A, s) for s in seen), key=Subgroup.sort_key)


def decomposition_type(P: PreMetricGroup) -> str:
    """Type I, II or III of a reductive group, from the coradical's degeneracy."""
    if not radical_subgroup(P).is_trivial():
        raise InvalidInputError("decomposition_type needs a reductive group")
    dp = degeneracy_class(P).kind
    corad = restricted(P, coradical_subgroup(P))
    dc = degeneracy_class(corad).kind
    if dc == "nondegenerate":
        return "I"
    if dp == "slightly_degenerate" and dc == "slightly_degenerate":
        return "II"
    if dp == "nondegenerate" and dc == "slightly_degenerate":
        return "III"
    raise InternalCheckError(
        f"reductive group with degeneracy ({dp}, coradical {dc}) has no type"
    )


# -- isomorphism ----------------------------------------------------------------


def are_isomorphic(
    P1: PreMetricGroup, P2: PreMetricGroup, cap: int | None = None
) -> Optional[GroupHom]:
    """A form-preserving isomorphism, or None.

    Prefilters by invariant factors, the sorted q-value multiset, and the
    light-cone size; then assigns images to the standard generators, pruning
    on exact element order, q-values, partial pairings, and partial spans.
    """
    config.check_cap(P1.order + P2.order, cap, "abelian_cap")
    A1, A2 = P1.group, P2.group
    if A1.invariant_factors != A2.invariant_factors:
        return None
    if P1.q_values() != P2.q_values():
        return None
    if len(light_cone(P1)) != len(light_cone(P2)):
        return None
    k = A1.rank
    if k == 0:
        return GroupHom(A1, A2, [])
    d = A1.invariant_factors
    t2 = P2.q_table()
    buckets = {}
    for y in A2.elements():
        buckets.setdefault((A2.element_order(y), t2[y]), []).append(y)
    expected = [prod(d[: i + 1]) for i in range(k)]

    def rec(i, chosen, span):
        if i == k:
            return GroupHom(A1, A2, chosen)
        want = (d[i], P1.q_gen[i])
        for y in buckets.get(want, ()):
            if y in span:
                continue
            ok = True
            for j in range(i):
                if P2.eval_b(y, chosen[j]) != P1.b_gen(i, j):
                    ok = False
                    break
            if not ok:
                continue
            new_span = _span_extend(A2, span, y)
            if len(new_span) != expected[i]:
                continue
            found = rec(i + 1, chosen + [y], new_span)
            if found is not None:
                return found
        return None

    return rec(0, [], frozenset({A2.zero}))


def _span_extend(A, base, x):
    out = set(base)
    shift = x
    while shift not in base:
        out.update(A.add(h, shift) for h in base)
        shift = A.add(shift, x)
    return frozenset(out)


# -- complementarity -------------------------------------------------------------


def complementary_closure(P_base: PreMetricGroup, P_other: PreMetricGroup) -> Subgroup:
    """Subgroup of ``P_other`` generated by elements complementary to the base.

    In the pointed setting, y is complementary to the base iff some base
    element x has q(x) + q(y) = 0.
    """
    base_values = set(P_base.q_table().values())
    comp = [
        y for y in P_other.group.elements() if (-P_other.eval_q(y)) in base_values
    ]
    return generated_subgroup(P_other.group, comp)


# -- aggregate report -------------------------------------------------------------


@dataclass(frozen=True)
class ReductiveReport:
    reductive: bool
    radical: Subgroup
    coradical: Subgroup
    mantle: PreMetricGroup
    case_2group: Optional[int] = None
    decomposition_type: Optional[str] = None


def analyze(P: PreMetricGroup, cap: int | None = None) -> ReductiveReport:
    rad = radical_subgroup(P, cap=cap)
    corad = coradical_subgroup(P)
    man = localize(P, rad)
    reductive = rad.is_trivial()
    case = None
    if _is_p_power(P.order, 2) and reductive:
        case = classify_reductive_2group(P, _known_reductive=True)
    dtype = decomposition_type(P) if reductive else None
    return ReductiveReport(
        reductive=reductive,
        radical=rad,
        coradical=corad,
        mantle=man,
        case_2group=case,
        decomposition_type=dtype,
    )
