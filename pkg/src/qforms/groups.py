"""Finite groups as validated Cayley tables, with the subgroup queries the
twisted-double engine needs: abelian subgroups, normality, quotients,
nilpotency, and a desk-scale isomorphism test.

Convention: elements are indices 0..n-1 with index 0 the identity; the table
entry ``table[i][j]`` is the index of the product g_i g_j.
"""

from __future__ import annotations

import itertools

import numpy as np

from . import config
from .abelian import FinAbGroup, abelian_structure
from .errors import InvalidInputError


class FinGroup:
    __slots__ = ("order", "table", "names", "_inv", "_np_table", "_conj")

    def __init__(self, table, names=None, cap: int | None = None) -> None:
        table = tuple(tuple(int(v) for v in row) for row in table)
        n = len(table)
        config.check_cap(n, cap, "group_cap")
        if n == 0 or any(len(row) != n for row in table):
            raise InvalidInputError("Cayley table must be square and non-empty")
        if any(v < 0 or v >= n for row in table for v in row):
            raise InvalidInputError("Cayley table entries must be element indices")
        for i in range(n):
            if table[0][i] != i or table[i][0] != i:
                raise InvalidInputError("index 0 must be the identity")
        M = np.array(table, dtype=np.intp)
        left = M[M, :]          # left[a,b,c]  = (ab)c
        right = np.take(M, M, axis=1)  # right[a,b,c] = a(bc)
        if not np.array_equal(left, right):
            bad = np.argwhere(left != right)[0]
            raise InvalidInputError(
                f"non-associative table at ({bad[0]}, {bad[1]}, {bad[2]})"
            )
        inv = [-1] * n
        for a in range(n):
            hits = [b for b in range(n) if table[a][b] == 0]
            if len(hits) != 1 or table[hits[0]][a] != 0:
                raise InvalidInputError(f"element {a} lacks a unique inverse")
            inv[a] = hits[0]
        if names is not None:
            names = tuple(str(s) for s in names)
            if len(names) != n:
                raise InvalidInputError("need one name per element")
        object.__setattr__(self, "order", n)
        object.__setattr__(self, "table", table)
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "_inv", tuple(inv))
        object.__setattr__(self, "_np_table", M)
        object.__setattr__(self, "_conj", None)

    def __setattr__(self, name, value):  # pragma: no cover
        raise AttributeError("FinGroup is immutable")

    # -- arithmetic ----------------------------------------------------------

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self._inv[a]

    def conj(self, g: int, x: int) -> int:
        """g x g^{-1}."""
        return self.table[self.table[g][x]][self._inv[g]]

    def conj_perm(self, g: int):
        """Conjugation by g as an index array."""
        if self._conj is None:
            object.__setattr__(self, "_conj", {})
        if g not in self._conj:
            M = self._np_table
            self._conj[g] = M[M[g], self._inv[g]]
        return self._conj[g]

    def element_order(self, a: int) -> int:
        o, x = 1, a
        while x != 0:
            x = self.table[x][a]
            o += 1
        return o

    def commute(self, a: int, b: int) -> bool:
        return self.table[a][b] == self.table[b][a]

    def is_abelian(self) -> bool:
        return np.array_equal(self._np_table, self._np_table.T)

    def center(self) -> tuple:
        return tuple(
            a for a in range(self.order)
            if all(self.commute(a, b) for b in range(self.order))
        )

    # -- subgroups -------------------------------------------------------------

    def closure(self, gens) -> tuple:
        out = {0}
        frontier = [0]
        gens = sorted(set(gens))
        while frontier:
            x = frontier.pop()
            for g in gens:
                for y in (self.table[x][g], self.table[g][x]):
                    if y not in out:
                        out.add(y)
                        frontier.append(y)
        return tuple(sorted(out))

    def is_subgroup(self, subset) -> bool:
        s = set(subset)
        return 0 in s and all(
            self.table[a][self._inv[b]] in s for a in s for b in s
        )

    def is_normal(self, subset) -> bool:
        s = set(subset)
        return all(self.conj(g, x) in s for g in range(self.order) for x in s)

    def is_abelian_subset(self, subset) -> bool:
        return all(self.commute(a, b) for a, b in itertools.combinations(subset, 2))

    def abelian_subgroups(self) -> list:
        """All abelian subgroups, sorted by (order, element tuple)."""
        trivial = (0,)
        seen = {trivial}
        frontier = [trivial]
        while frontier:
            nxt = []
            for H in frontier:
                hs = set(H)
                for x in range(1, self.order):
                    if x in hs:
                        continue
                    if not all(self.commute(x, h) for h in H):
                        continue
                    K = self.closure(H + (x,))
                    if K not in seen:
                        seen.add(K)
                        nxt.append(K)
            frontier = nxt
        return sorted(seen, key=lambda s: (len(s), s))

    def normal_abelian_subgroups(self) -> list:
        return [H for H in self.abelian_subgroups() if self.is_normal(H)]

    def subgroup_group(self, subset):
        """The subgroup as its own FinGroup plus the index embedding."""
        subset = tuple(sorted(set(subset)))
        if not self.is_subgroup(subset):
            raise InvalidInputError("subset is not a subgroup")
        local = {g: i for i, g in enumerate(subset)}
        if subset[0] != 0:
            raise InvalidInputError("a subgroup must contain the identity")
        table = [
            [local[self.table[a][b]] for b in subset] for a in subset
        ]
        names = None
        if self.names is not None:
            names = [self.names[g] for g in subset]
        return FinGroup(table, names), subset

    def quotient(self, normal_subset):
        """Quotient by a normal subgroup: (FinGroup, projection list)."""
        N = tuple(sorted(set(normal_subset)))
        if not self.is_subgroup(N) or not self.is_normal(N):
            raise InvalidInputError("quotient needs a normal subgroup")
        coset_of = {}
        cosets = []
        for g in range(self.order):
            if g in coset_of:
                continue
            coset = tuple(sorted(self.table[g][x] for x in N))
            idx = len(cosets)
            cosets.append(coset)
            for y in coset:
                coset_of[y] = idx
        # force the identity coset to index 0 (it is: g=0 comes first)
        table = [
            [coset_of[self.table[cosets[i][0]][cosets[j][0]]] for j in range(len(cosets))]
            for i in range(len(cosets))
        ]
        qmap = [coset_of[g] for g in range(self.order)]
        return FinGroup(table), qmap

    # -- structure ---------------------------------------------------------------

    def commutator_subgroup(self, left, right) -> tuple:
        comms = set()
        for a in left:
            for b in right:
                c = self.table[self.table[a][b]][
                    self.table[self._inv[a]][self._inv[b]]
                ]
                comms.add(c)
        return self.closure(comms)

    def is_nilpotent(self) -> bool:
        whole = tuple(range(self.order))
        current = whole
        while True:
            nxt = self.commutator_subgroup(whole, current)
            if nxt == current:
                return len(current) == 1
            current = nxt
            if len(current) == 1:
                return True

    def abelian_invariants(self) -> FinAbGroup:
        """Invariant factors, for abelian groups only."""
        if not self.is_abelian():
            raise InvalidInputError("abelian_invariants needs an abelian group")
        grp, _, _ = abelian_structure(
            list(range(self.order)), lambda a, b: self.table[a][b], 0
        )
        return grp

    def __eq__(self, other) -> bool:
        return isinstance(other, FinGroup) and self.table == other.table

    def __hash__(self) -> int:
        return hash(self.table)

    def __repr__(self) -> str:
        return f"FinGroup(order={self.order})"


# -- constructors -----------------------------------------------------------------


def cyclic(n: int) -> FinGroup:
    if n < 1:
        raise InvalidInputError("cyclic group order must be positive")
    return FinGroup([[(i + j) % n for j in range(n)] for i in range(n)])


def abelian_cayley(A: FinAbGroup):
    """An abelian group as a Cayley table; returns (group, element list)."""
    elems = list(A.elements())
    index = {e: i for i, e in enumerate(elems)}
    table = [[index[A.add(a, b)] for b in elems] for a in elems]
    return FinGroup(table), elems


def dihedral(n: int) -> FinGroup:
    """Dihedral group of order 2n: elements (r^i s^e), index = i + n*e."""
    if n < 1:
        raise InvalidInputError("dihedral parameter must be positive")

    def mul(a, b):
        i, e = a % n, a // n
        j, f = b % n, b // n
        # (r^i s^e)(r^j s^f) = r^(i + j or i - j) s^(e+f)
        k = (i + j) % n if e == 0 else (i - j) % n
        return k + n * ((e + f) % 2)

    return FinGroup([[mul(a, b) for b in range(2 * n)] for a in range(2 * n)])


def quaternion8() -> FinGroup:
    """The quaternion group {±1, ±i, ±j, ±k}; index order 1,-1,i,-i,j,-j,k,-k."""
    labels = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
    sign = {lbl: (-1 if lbl.startswith("-") else 1) for lbl in labels}
    base = {lbl: lbl.lstrip("-") for lbl in labels}
    rules = {
        ("1", "1"): (1, "1"), ("1", "i"): (1, "i"), ("1", "j"): (1, "j"),
        ("1", "k"): (1, "k"), ("i", "1"): (1, "i"), ("j", "1"): (1, "j"),
        ("k", "1"): (1, "k"), ("i", "i"): (-1, "1"), ("j", "j"): (-1, "1"),
        ("k", "k"): (-1, "1"), ("i", "j"): (1, "k"), ("j", "i"): (-1, "k"),
        ("j", "k"): (1, "i"), ("k", "j"): (-1, "i"), ("k", "i"): (1, "j"),
        ("i", "k"): (-1, "j"),
    }

    def mul(a, b):
        s = sign[a] * sign[b]
        t, c = rules[(base[a], base[b])]
        s *= t
        return ("-" if s < 0 else "") + c

    index = {lbl: i for i, lbl in enumerate(labels)}
    table = [[index[mul(a, b)] for b in labels] for a in labels]
    return FinGroup(table, names=labels)


def symmetric3() -> FinGroup:
    return dihedral(3)


def direct_product(G: FinGroup, H: FinGroup) -> FinGroup:
    n, m = G.order, H.order

    def mul(a, b):
        return G.table[a // m][b // m] * m + H.table[a % m][b % m]

    return FinGroup([[mul(a, b) for b in range(n * m)] for a in range(n * m)])


def groups_isomorphic(G: FinGroup, H: FinGroup) -> bool:
    """Backtracking isomorphism test with order-profile pruning (desk scale)."""
    if G.order != H.order:
        return False
    og = sorted(G.element_order(a) for a in range(G.order))
    oh = sorted(H.element_order(a) for a in range(H.order))
    if og != oh:
        return False
    gens = []
    span = (0,)
    for a in sorted(range(G.order), key=lambda a: (-G.element_order(a), a)):
        if a in span:
            continue
        gens.append(a)
        span = G.closure(gens)
        if len(span) == G.order:
            break
    by_order = {}
    for b in range(H.order):
        by_order.setdefault(H.element_order(b), []).append(b)

    def extend_words(mapping, span_g):
        # grow the partial map on the closure of the chosen generators
        out = dict(mapping)
        frontier = list(out)
        while frontier:
            x = frontier.pop()
            for g in list(out):
                for (p, q) in ((x, g), (g, x)):
                    z = G.table[p][q]
                    w = H.table[out[p]][out[q]]
                    if z in out:
                        if out[z] != w:
                            return None
                    else:
                        out[z] = w
                        frontier.append(z)
        if len(set(out.values())) != len(out):
            return None
        return out

    def rec(i, mapping):
        if i == len(gens):
            return len(mapping) == G.order
        a = gens[i]
        for b in by_order[G.element_order(a)]:
            if b in mapping.values():
                continue
            trial = dict(mapping)
            trial[a] = b
            grown = extend_words(trial, None)
            if grown is None:
                continue
            if rec(i + 1, grown):
                return True
        return False

    return rec(0, {0: 0})
