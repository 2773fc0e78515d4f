"""Finite abelian groups in invariant-factor form, with subgroup machinery.

Elements are residue tuples against a fixed invariant-factor presentation
``d1 | d2 | ... | dk``; every other presentation (direct products, coset
groups, black-box subgroups) is converted on construction, so equality of
elements and subgroups is plain tuple/set equality.  All enumeration orders
are total and documented: elements are lexicographic, subgroups sort by
(order, lexicographic element list).
"""

from __future__ import annotations

import itertools
from math import gcd, prod

from . import config
from .errors import InvalidInputError
from .snf import smith_normal_form, unimodular_inverse


class FinAbGroup:
    """A finite abelian group ``Z/d1 x ... x Z/dk`` with ``d1 | d2 | ... | dk``."""

    __slots__ = ("invariant_factors", "_elements")

    def __init__(self, invariant_factors) -> None:
        factors = tuple(int(d) for d in invariant_factors)
        for d in factors:
            if d < 2:
                raise InvalidInputError("invariant factors must be >= 2")
        for a, b in zip(factors, factors[1:]):
            if b % a != 0:
                raise InvalidInputError(
                    f"invariant factors must form a divisibility chain, got {factors}"
                )
        object.__setattr__(self, "invariant_factors", factors)
        object.__setattr__(self, "_elements", None)

    def __setattr__(self, name, value):  # pragma: no cover
        raise AttributeError("FinAbGroup is immutable")

    # -- basic data --------------------------------------------------------

    @property
    def order(self) -> int:
        return prod(self.invariant_factors)

    @property
    def exponent(self) -> int:
        return self.invariant_factors[-1] if self.invariant_factors else 1

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)

    @property
    def zero(self) -> tuple:
        return (0,) * self.rank

    def elements(self) -> tuple:
        """All elements in lexicographic order (cached)."""
        if self._elements is None:
            elems = tuple(
                itertools.product(*(range(d) for d in self.invariant_factors))
            )
            object.__setattr__(self, "_elements", elems)
        return self._elements

    def generators(self) -> tuple:
        """The standard generators e_1, ..., e_k."""
        k = self.rank
        return tuple(
            tuple(1 if j == i else 0 for j in range(k)) for i in range(k)
        )

    # -- arithmetic ---------------------------------------------------------

    def contains(self, x) -> bool:
        return len(x) == self.rank and all(
            0 <= c < d for c, d in zip(x, self.invariant_factors)
        )

    def check_element(self, x) -> tuple:
        x = tuple(int(c) for c in x)
        if not self.contains(x):
            raise InvalidInputError(f"{x} is not an element of {self}")
        return x

    def add(self, x, y) -> tuple:
        return tuple((a + b) % d for a, b, d in zip(x, y, self.invariant_factors))

    def neg(self, x) -> tuple:
        return tuple((-a) % d for a, d in zip(x, self.invariant_factors))

    def scale(self, k: int, x) -> tuple:
        return tuple((k * a) % d for a, d in zip(x, self.invariant_factors))

    def element_order(self, x) -> int:
        o = 1
        for a, d in zip(x, self.invariant_factors):
            if a:
                o = (o * (d // gcd(a, d))) // gcd(o, d // gcd(a, d))
        return o

    # -- protocol ------------------------------------------------------------

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FinAbGroup)
            and self.invariant_factors == other.invariant_factors
        )

    def __hash__(self) -> int:
        return hash(self.invariant_factors)

    def __repr__(self) -> str:
        if not self.invariant_factors:
            return "FinAbGroup(trivial)"
        return "FinAbGroup(%s)" % " x ".join(f"Z/{d}" for d in self.invariant_factors)

    def describe(self) -> str:
        if not self.invariant_factors:
            return "1"
        return " x ".join(f"Z/{d}" for d in self.invariant_factors)


def _prime_powers(n: int) -> dict:
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def canonical_from_orders(orders):
    """Invariant-factor form of ``Z/m1 x ... x Z/mr`` plus generator images.

    Returns ``(group, images)`` where ``images[j]`` is the tuple in the
    product presentation realising the j-th canonical generator (built by
    CRT from the prime-power pieces of the m_i).
    """
    orders = [int(m) for m in orders]
    pieces = []  # (prime, exponent, source index)
    for i, m in enumerate(orders):
        if m < 1:
            raise InvalidInputError("cyclic orders must be positive")
        for p, e in _prime_powers(m).items():
            pieces.append((p, e, i))
    # greedily take the largest remaining power of each prime -> descending chain
    by_prime: dict = {}
    for p, e, i in pieces:
        by_prime.setdefault(p, []).append((e, i))
    for p in by_prime:
        by_prime[p].sort(reverse=True)
    chain = []  # list of lists of (p, e, i)
    while any(by_prime.values()):
        factor = []
        for p in sorted(by_prime):
            if by_prime[p]:
                e, i = by_prime[p].pop(0)
                factor.append((p, e, i))
        chain.append(factor)
    chain.reverse()  # ascending divisibility
    factors = [prod(p**e for p, e, _ in fac) for fac in chain]
    group = FinAbGroup(factors)
    images = []
    for fac in chain:
        img = [0] * len(orders)
        for p, e, i in fac:
            img[i] = (img[i] + orders[i] // p**e) % orders[i]
        images.append(tuple(img))
    return group, images


class Subgroup:
    """A subgroup of a FinAbGroup, stored as its full element set.

    Equality is element-set equality; ``generators`` is a cached convenience,
    recomputed greedily (largest-order element first, ties lexicographic).
    """

    __slots__ = ("parent", "elements", "sorted_elements", "_generators")

    def __init__(self, parent: FinAbGroup, elements) -> None:
        object.__setattr__(self, "parent", parent)
        object.__setattr__(self, "elements", frozenset(elements))
        object.__setattr__(self, "sorted_elements", tuple(sorted(self.elements)))
        object.__setattr__(self, "_generators", None)

    def __setattr__(self, name, value):  # pragma: no cover
        raise AttributeError("Subgroup is immutable")

    @classmethod
    def generated(cls, parent: FinAbGroup, gens) -> "Subgroup":
        return cls(parent, _closure(parent, gens))

    @classmethod
    def trivial(cls, parent: FinAbGroup) -> "Subgroup":
        return cls(parent, [parent.zero])

    @classmethod
    def whole(cls, parent: FinAbGroup) -> "Subgroup":
        return cls(parent, parent.elements())

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def generators(self) -> tuple:
        if self._generators is None:
            object.__setattr__(self, "_generators", _greedy_generators(self))
        return self._generators

    def contains(self, x) -> bool:
        return tuple(x) in self.elements

    def is_whole(self) -> bool:
        return self.order == self.parent.order

    def is_trivial(self) -> bool:
        return self.order == 1

    def intersection(self, other: "Subgroup") -> "Subgroup":
        return Subgroup(self.parent, self.elements & other.elements)

    def join(self, other: "Subgroup") -> "Subgroup":
        return Subgroup.generated(self.parent, self.elements | other.elements)

    def sort_key(self):
        return (self.order, self.sorted_elements)

    def __le__(self, other: "Subgroup") -> bool:
        return self.elements <= other.elements

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Subgroup)
            and self.parent == other.parent
            and self.elements == other.elements
        )

    def __hash__(self) -> int:
        return hash((self.parent, self.elements))

    def __repr__(self) -> str:
        return f"Subgroup(order={self.order} of {self.parent.describe()})"


def _closure(A: FinAbGroup, gens) -> frozenset:
    seen = {A.zero}
    for g in gens:
        g = A.check_element(g)
        if g in seen:
            continue
        # seen is a subgroup; extend by the cosets seen + k*g
        new = set(seen)
        shift = g
        while shift not in seen:
            new.update(A.add(x, shift) for x in seen)
            shift = A.add(shift, g)
        seen = new
    return frozenset(seen)


def _greedy_generators(H: Subgroup) -> tuple:
    A = H.parent
    if H.order == 1:
        return ()
    remaining = sorted(H.elements, key=lambda x: (-A.element_order(x), x))
    gens = []
    covered = {A.zero}
    for x in remaining:
        if x in covered:
            continue
        gens.append(x)
        covered = _closure(A, gens)
        if len(covered) == H.order:
            break
    return tuple(gens)


def generated_subgroup(A: FinAbGroup, S) -> Subgroup:
    """Smallest subgroup of A containing S; empty S gives the trivial subgroup."""
    return Subgroup.generated(A, S)


def enumerate_subgroups(A: FinAbGroup, cap: int | None = None) -> list:
    """Every subgroup exactly once, sorted by (order, lexicographic elements)."""
    config.check_cap(A.order, cap, "abelian_cap")
    trivial = Subgroup.trivial(A)
    seen = {trivial.elements: trivial}
    frontier = [trivial]
    elems = A.elements()
    while frontier:
        nxt = []
        for H in frontier:
            for x in elems:
                if x in H.elements:
                    continue
                K = frozenset(_extend(A, H.elements, x))
                if K not in seen:
                    sub = Subgroup(A, K)
                    seen[K] = sub
                    nxt.append(sub)
        frontier = nxt
    return sorted(seen.values(), key=Subgroup.sort_key)


def _extend(A: FinAbGroup, base: frozenset, x) -> set:
    out = set(base)
    shift = x
    while shift not in base:
        out.update(A.add(h, shift) for h in base)
        shift = A.add(shift, x)
    return out


class GroupHom:
    """A homomorphism between FinAbGroups, given on standard generators."""

    __slots__ = ("domain", "codomain", "images")

    def __init__(self, domain: FinAbGroup, codomain: FinAbGroup, images) -> None:
        images = tuple(codomain.check_element(y) for y in images)
        if len(images) != domain.rank:
            raise InvalidInputError("need one image per standard generator")
        for d, y in zip(domain.invariant_factors, images):
            if d % codomain.element_order(y) != 0:
                raise InvalidInputError(
                    f"image {y} of a generator of order {d} has order "
                    f"{codomain.element_order(y)}, which does not divide {d}"
                )
        object.__setattr__(self, "domain", domain)
        object.__setattr__(self, "codomain", codomain)
        object.__setattr__(self, "images", images)

    def __setattr__(self, name, value):  # pragma: no cover
        raise AttributeError("GroupHom is immutable")

    def __call__(self, x) -> tuple:
        x = self.domain.check_element(x)
        out = self.codomain.zero
        for c, img in zip(x, self.images):
            out = self.codomain.add(out, self.codomain.scale(c, img))
        return out

    def is_bijective(self) -> bool:
        if self.domain.order != self.codomain.order:
            return False
        return len({self(x) for x in self.domain.elements()}) == self.domain.order

    def compose(self, first: "GroupHom") -> "GroupHom":
        """self after first."""
        if first.codomain != self.domain:
            raise InvalidInputError("composition mismatch")
        return GroupHom(
            first.domain, self.codomain, [self(y) for y in first.images]
        )

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GroupHom)
            and self.domain == other.domain
            and self.codomain == other.codomain
            and self.images == other.images
        )

    def __hash__(self) -> int:
        return hash((self.domain, self.codomain, self.images))

    def __repr__(self) -> str:
        return f"GroupHom({self.domain.describe()} -> {self.codomain.describe()}, {self.images})"


def identity_hom(A: FinAbGroup) -> GroupHom:
    return GroupHom(A, A, A.generators())


def automorphisms(A: FinAbGroup, cap: int | None = None):
    """Yield every automorphism of A exactly once, in a deterministic order.

    Candidates assign images to standard generators in element order, pruned
    by order divisibility and by the partial subgroup sizes, so the full
    |A|^rank space is never materialised.
    """
    config.check_cap(A.order, cap, "abelian_cap")
    factors = A.invariant_factors
    elems = A.elements()
    by_divisor = {
        d: tuple(x for x in elems if d % A.element_order(x) == 0)
        for d in set(factors)
    }
    k = A.rank
    expected = [prod(factors[: i + 1]) for i in range(k)]

    def rec(i, chosen, span):
        if i == k:
            yield GroupHom(A, A, chosen)
            return
        for y in by_divisor[factors[i]]:
            if y in span:
                continue
            new_span = _extend(A, span, y)
            if len(new_span) != expected[i]:
                continue
            yield from rec(i + 1, chosen + [y], frozenset(new_span))

    if k == 0:
        yield GroupHom(A, A, [])
        return
    yield from rec(0, [], frozenset({A.zero}))


# -- black-box canonicalisation ------------------------------------------


def abelian_structure(elements, add, zero):
    """Classify a black-box finite abelian group and build explicit maps.

    ``elements`` is a sequence of hashable values closed under ``add`` with
    neutral element ``zero``.  Returns ``(group, to_coords, from_coords)``
    where ``group`` is the invariant-factor form, ``to_coords`` maps every
    black-box element to its tuple in ``group`` and ``from_coords`` is the
    inverse map on all of ``group``.
    """
    elements = list(elements)
    n = len(elements)
    if n == 1:
        g = FinAbGroup([])
        return g, {elements[0]: ()}, {(): elements[0]}

    def el_order(x):
        o = 1
        y = x
        while y != zero:
            y = add(y, x)
            o += 1
        return o

    orders = {x: el_order(x) for x in elements}
    # greedy generating set: largest order first, ties by sort order
    gens = []
    covered = {zero}
    for x in sorted(elements, key=lambda e: (-orders[e], _sort_token(e))):
        if x in covered:
            continue
        gens.append(x)
        covered = _bb_closure(covered, x, add)
        if len(covered) == n:
            break
    gen_orders = [orders[g] for g in gens]
    r = len(gens)

    # discrete logs and the kernel lattice of Z^r -> group, via the box
    vals = {(): zero}
    for g, o in zip(gens, gen_orders):
        nxt = {}
        for combo, v in vals.items():
            acc = v
            for c in range(o):
                nxt[combo + (c,)] = acc
                acc = add(acc, g)
        vals = nxt
    dlog = {}
    kernel_cols = []
    for combo in sorted(vals):
        val = vals[combo]
        if val not in dlog:
            dlog[val] = combo
        if val == zero and any(combo):
            kernel_cols.append(list(combo))
    for i, o in enumerate(gen_orders):
        col = [0] * r
        col[i] = o
        kernel_cols.append(col)

    rel = [[col[i] for col in kernel_cols] for i in range(r)]  # r x (#cols)
    S, U, _ = smith_normal_form(rel)
    diag = [S[i][i] for i in range(r)]
    keep = [i for i, s in enumerate(diag) if s > 1]
    group = FinAbGroup([diag[i] for i in keep])

    def project(combo):
        return tuple(
            sum(U[i][j] * combo[j] for j in range(r)) % diag[i] for i in keep
        )

    to_coords = {x: project(dlog[x]) for x in elements}
    U_inv = unimodular_inverse(U)
    from_coords = {}
    powers = []  # powers[i][c] = c * gens[i]
    for g, o in zip(gens, gen_orders):
        row = [zero]
        for _ in range(o - 1):
            row.append(add(row[-1], g))
        powers.append(row)
    for coords in group.elements():
        full = [0] * r
        for pos, i in enumerate(keep):
            full = [f + U_inv[t][i] * coords[pos] for t, f in enumerate(full)]
        val = zero
        for c, row, o in zip(full, powers, gen_orders):
            val = add(val, row[c % o])
        from_coords[coords] = val
    return group, to_coords, from_coords


def _sort_token(x):
    # black-box elements are tuples or frozensets of tuples; give both a key
    if isinstance(x, frozenset):
        return tuple(sorted(x))
    return x


def _bb_closure(base, x, add):
    out = set(base)
    new = [x]
    while new:
        y = new.pop()
        if y in out:
            continue
        out.add(y)
        for b in list(out):
            s = add(b, y)
            if s not in out:
                new.append(s)
    return out


def quotient(A: FinAbGroup, H: Subgroup):
    """Quotient A/H in invariant-factor form, with the projection hom.

    The projection composed with any section is the identity on cosets.
    """
    if H.parent != A:
        raise InvalidInputError("H is not a subgroup of A")
    if H.is_trivial():
        return A, identity_hom(A)
    cosets = coset_space(A.elements(), H)
    rep_of = cosets["rep_of"]
    reps = cosets["reps"]

    def cadd(u, v):
        return rep_of[A.add(u, v)]

    Q, to_q, _ = abelian_structure(reps, cadd, rep_of[A.zero])
    images = [to_q[rep_of[g]] for g in A.generators()]
    return Q, GroupHom(A, Q, images)


def coset_space(subset_elements, H: Subgroup):
    """Cosets of H inside a union of H-cosets, with canonical (min) reps."""
    A = H.parent
    rep_of = {}
    reps = []
    for x in sorted(subset_elements):
        if x in rep_of:
            continue
        coset = sorted(A.add(x, h) for h in H.elements)
        rep = coset[0]
        reps.append(rep)
        for y in coset:
            rep_of[y] = rep
    return {"rep_of": rep_of, "reps": reps}
