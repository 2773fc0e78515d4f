"""Cochains and 3-cocycles on finite groups, and the obstruction calculus
for Lagrangian subcategories of a twisted double supported on a normal
abelian subgroup N.

The pipeline, all in additive Q/Z notation:

  * ``mu_g``: the 2-cochain giving the tensor structure on conjugation by g,
        mu_g(y, z) = w(gyg', gzg', g) + w(g, y, z) - w(gyg', g, z),
    which satisfies
        mu_g(xy,z) + mu_g(x,y) - mu_g(x,yz) - mu_g(y,z)
            = w(gxg', gyg', gzg') - w(x, y, z)
    for all g, x, y, z (asserted exhaustively on construction);
  * ``cocycle_trivial_on``: solve d(nu) = w|_N for a 2-cochain nu on N by
    exact linear algebra mod L*|N| (L clears the denominators of w|_N; the
    extra |N| covers every elementary divisor of the coboundary matrix);
  * ``m_class``: m(g) = mu_g|_N + nu - nu^g, a 2-cocycle on N for every g;
    the 1-cocycle property of m is validated exactly against the cochain
        gamma_{g,h}(x) = w(g, hxh', h) - w(g, h, x) - w(ghxh'g', g, h),
    via  (del m)(g,h) = d(gamma_{g,h});
  * ``obstruction_vanishes``: find an alternating bilinear form B on N with
        B^g - B + Alt(m(g)) = 0
    for every generator g of G (enough, by the validated cocycle property).

Storage is exact throughout: integer numerator arrays over one denominator.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import gcd, lcm

import numpy as np

from . import config
from .abelian import FinAbGroup, abelian_structure
from .errors import InternalCheckError, InvalidInputError
from .groups import FinGroup, abelian_cayley
from .qz import QZ, qz
from .snf import solve_linear_mod


def _lift(num, den, target):
    return num * (target // den)


class Cochain2:
    """A normalized 2-cochain on a FinGroup, with exact Q/Z values."""

    __slots__ = ("group", "num", "den")

    def __init__(self, group: FinGroup, num, den: int, validate_cocycle=False):
        num = np.asarray(num, dtype=np.int64) % den
        if num.shape != (group.order, group.order):
            raise InvalidInputError("2-cochain table has the wrong shape")
        if num[0, :].any() or num[:, 0].any():
            raise InvalidInputError("2-cochain is not normalized")
        object.__setattr__(self, "group", group)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", int(den))
        if validate_cocycle and not self.is_cocycle():
            raise InvalidInputError("2-cochain fails the cocycle identity")

    def __setattr__(self, name, value):  # pragma: no cover
        raise AttributeError("Cochain2 is immutable")

    def __call__(self, x: int, y: int) -> QZ:
        return qz(int(self.num[x, y]), self.den)

    def is_cocycle(self) -> bool:
        M = self.group._np_table
        W = self.num
        # d(mu)(x,y,z) = mu(y,z) - mu(xy,z) + mu(x,yz) - mu(x,y)
        d = (W[np.newaxis, :, :] - W[M, :]
             + np.stack([W[x][M] for x in range(self.group.order)])
             - W[:, :, np.newaxis]) % self.den
        return not d.any()

    def alt_num(self):
        """Numerators of Alt: (x, y) -> mu(x, y) - mu(y, x)."""
        return (self.num - self.num.T) % self.den

    def add(self, other: "Cochain2") -> "Cochain2":
        den = lcm(self.den, other.den)
        return Cochain2(
            self.group,
            _lift(self.num, self.den, den) + _lift(other.num, other.den, den),
            den,
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, Cochain2) or self.group is not other.group:
            return False
        den = lcm(self.den, other.den)
        return np.array_equal(
            _lift(self.num, self.den, den) % den,
            _lift(other.num, other.den, den) % den,
        )

    def __hash__(self):  # pragma: no cover
        raise TypeError("Cochain2 is not hashable")


class Cocycle3:
    """A normalized 3-cocycle on a FinGroup; the identity dw = 0 is checked
    at every quadruple on construction."""

    __slots__ = ("group", "num", "den")

    def __init__(self, group: FinGroup, num, den: int, _validated=False):
        num = np.asarray(num, dtype=np.int64) % den
        n = group.order
        if num.shape != (n, n, n):
            raise InvalidInputError("3-cocycle table has the wrong shape")
        if num[0].any() or num[:, 0].any() or num[:, :, 0].any():
            raise InvalidInputError(
                "3-cocycle is not normalized: w(1,y,z) = w(x,1,z) = w(x,y,1) = 0 required"
            )
        object.__setattr__(self, "group", group)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", int(den))
        if not _validated:
            bad = self._first_violation()
            if bad is not None:
                raise InvalidInputError(
                    f"3-cocycle identity fails at quadruple {bad}"
                )

    def __setattr__(self, name, value):  # pragma: no cover
        raise AttributeError("Cocycle3 is immutable")

    def _first_violation(self):
        if not self.num.any():
            return None
        M = self.group._np_table
        W = self.num
        n = self.group.order
        for w in range(n):
            # d(omega)(w,x,y,z) = w(x,y,z) - w(wx,y,z) + w(w,xy,z) - w(w,x,yz) + w(w,x,y)
            t0 = W
            t1 = W[M[w], :, :]
            t2 = W[w][M, :]
            t3 = W[w][:, M]
            t4 = W[w][:, :, np.newaxis]
            d = (t0 - t1 + t2 - t3 + t4) % self.den
            if d.any():
                x, y, z = map(int, np.argwhere(d)[0])
                return (w, x, y, z)
        return None

    def __call__(self, x: int, y: int, z: int) -> QZ:
        return qz(int(self.num[x, y, z]), self.den)

    def values_qz(self):
        n = self.group.order
        return [
            self(x, y, z)
            for x in range(n)
            for y in range(n)
            for z in range(n)
        ]

    def add(self, other: "Cocycle3") -> "Cocycle3":
        if self.group is not other.group and self.group != other.group:
            raise InvalidInputError("cocycles live on different groups")
        den = lcm(self.den, other.den)
        return Cocycle3(
            self.group,
            _lift(self.num, self.den, den) + _lift(other.num, other.den, den),
            den,
            _validated=True,
        )

    def is_trivial_table(self) -> bool:
        return not self.num.any()

    def __eq__(self, other) -> bool:
        if not isinstance(other, Cocycle3) or self.group != other.group:
            return False
        den = lcm(self.den, other.den)
        return np.array_equal(
            _lift(self.num, self.den, den) % den,
            _lift(other.num, other.den, den) % den,
        )

    def __hash__(self):  # pragma: no cover
        raise TypeError("Cocycle3 is not hashable")


def zero_cocycle(G: FinGroup) -> Cocycle3:
    return Cocycle3(G, np.zeros((G.order,) * 3, dtype=np.int64), 1, _validated=True)


def validate_cocycle(G: FinGroup, values) -> Cocycle3:
    """Build a Cocycle3 from a dense table of QZ values (row-major x,y,z)."""
    n = G.order
    values = list(values)
    if len(values) != n**3:
        raise InvalidInputError(f"expected {n**3} values, got {len(values)}")
    den = 1
    for v in values:
        den = lcm(den, v.den)
    num = np.array([v.numerator_mod(den) for v in values], dtype=np.int64)
    return Cocycle3(G, num.reshape(n, n, n), den)


def inflate(base: Cocycle3, qmap, G: FinGroup) -> Cocycle3:
    """Pull back a cocycle along the projection ``G -> base.group``.

    ``qmap[g]`` is the image index of g; the result vanishes whenever any
    argument lies in the kernel of the projection.
    """
    qmap = np.asarray(qmap, dtype=np.intp)
    if qmap.shape != (G.order,) or qmap[0] != 0:
        raise InvalidInputError("quotient map must send identity to identity")
    Q = base.group
    for a in range(G.order):
        for b in range(G.order):
            if qmap[G.table[a][b]] != Q.table[qmap[a]][qmap[b]]:
                raise InvalidInputError("quotient map is not a homomorphism")
    num = base.num[np.ix_(qmap, qmap, qmap)]
    return Cocycle3(G, num, base.den, _validated=True)


def restrict(w: Cocycle3, subset) -> Cocycle3:
    """Restriction to a subgroup, as a cocycle on the subgroup's own table."""
    H, embedding = w.group.subgroup_group(subset)
    idx = np.asarray(embedding, dtype=np.intp)
    return Cocycle3(H, w.num[np.ix_(idx, idx, idx)], w.den, _validated=True)


# -- standard representatives on abelian groups --------------------------------


def abelian_cocycle_type_i(A: FinAbGroup, i: int, a: int):
    """w(x,y,z) = a * x_i * floor((y_i + z_i)/d_i) / d_i on the Cayley form of A."""
    G, elems = abelian_cayley(A)
    d = A.invariant_factors[i]
    num = np.zeros((G.order,) * 3, dtype=np.int64)
    for xi, x in enumerate(elems):
        for yi, y in enumerate(elems):
            for zi, z in enumerate(elems):
                num[xi, yi, zi] = (a * x[i] * ((y[i] + z[i]) // d)) % d
    return Cocycle3(G, num, d), G, elems


def abelian_cocycle_type_ii(A: FinAbGroup, i: int, j: int, a: int):
    """w(x,y,z) = a * x_i * floor((y_j + z_j)/d_j) / d_i, for i != j."""
    if i == j:
        raise InvalidInputError("type II needs two distinct coordinates")
    G, elems = abelian_cayley(A)
    di, dj = A.invariant_factors[i], A.invariant_factors[j]
    num = np.zeros((G.order,) * 3, dtype=np.int64)
    for xi, x in enumerate(elems):
        for yi, y in enumerate(elems):
            for zi, z in enumerate(elems):
                num[xi, yi, zi] = (a * x[i] * ((y[j] + z[j]) // dj)) % di
    return Cocycle3(G, num, di), G, elems


def abelian_cocycle_type_iii(A: FinAbGroup, i: int, j: int, k: int, a: int):
    """w(x,y,z) = a * x_i * y_j * z_k / gcd(d_i, d_j, d_k), pairwise distinct."""
    if len({i, j, k}) != 3:
        raise InvalidInputError("type III needs three distinct coordinates")
    G, elems = abelian_cayley(A)
    d = gcd(gcd(A.invariant_factors[i], A.invariant_factors[j]), A.invariant_factors[k])
    num = np.zeros((G.order,) * 3, dtype=np.int64)
    for xi, x in enumerate(elems):
        for yi, y in enumerate(elems):
            for zi, z in enumerate(elems):
                num[xi, yi, zi] = (a * x[i] * y[j] * z[k]) % d
    return Cocycle3(G, num, d), G, elems


# -- conjugation cochains -------------------------------------------------------


def mu_g(w: Cocycle3, g: int) -> Cochain2:
    """The conjugation 2-cochain of g; its defining identity is asserted at
    every triple before returning."""
    G = w.group
    W = w.num
    c = G.conj_perm(g)
    t1 = W[np.ix_(c, c, [g])][:, :, 0]   # w(gyg', gzg', g)
    t2 = W[g]                            # w(g, y, z)
    t3 = W[c][:, g, :]                   # w(gyg', g, z)
    mu = (t1 + t2 - t3) % w.den
    out = Cochain2(G, mu, w.den)
    _assert_d2mu(w, g, out)
    return out


def _assert_d2mu(w: Cocycle3, g: int, mu: Cochain2) -> None:
    G = w.group
    M = G._np_table
    c = G.conj_perm(g)
    num = mu.num
    lhs = (num[M, :] + num[:, :, np.newaxis]
           - np.stack([num[x][M] for x in range(G.order)])
           - num[np.newaxis, :, :]) % w.den
    # lhs(x,y,z) = mu(xy,z) + mu(x,y) - mu(x,yz) - mu(y,z)
    rhs = (w.num[np.ix_(c, c, c)] - w.num) % w.den
    if not np.array_equal(lhs, rhs):
        raise InternalCheckError(f"conjugation cochain identity fails for g={g}")


# -- normal abelian subgroup context ---------------------------------------------


class NormalAbelianContext:
    """A normal abelian subgroup N of G with local multiplication, canonical
    abelian coordinates, and the conjugation action of G on N."""

    def __init__(self, G: FinGroup, subset):
        subset = tuple(sorted(set(subset)))
        if not G.is_subgroup(subset):
            raise InvalidInputError("N is not a subgroup")
        if not G.is_abelian_subset(subset):
            raise InvalidInputError("N is not abelian")
        if not G.is_normal(subset):
            raise InvalidInputError("N is not normal in G")
        self.G = G
        self.elements = subset
        self.local, self.embedding = G.subgroup_group(subset)
        self.local_index = {g: i for i, g in enumerate(subset)}
        self.ab, self._to_coords, self._from_coords = abelian_structure(
            list(range(self.local.order)),
            lambda a, b: self.local.table[a][b],
            0,
        )
        self.gen_locals = [self._from_coords[e] for e in self.ab.generators()]

    @property
    def order(self) -> int:
        return self.local.order

    def coords(self, local_idx: int):
        return self._to_coords[local_idx]

    def conj_local(self, g: int):
        """Conjugation by g in G as a permutation of local indices."""
        out = []
        for x in self.elements:
            y = self.G.conj(g, x)
            out.append(self.local_index[y])
        return np.asarray(out, dtype=np.intp)


def generating_set(G: FinGroup) -> list:
    """First elements generating G, in table order."""
    gens = []
    span = (0,)
    for g in range(1, G.order):
        if g in span:
            continue
        gens.append(g)
        span = G.closure(gens)
        if len(span) == G.order:
            break
    return gens


# -- the coboundary solver --------------------------------------------------------


def cocycle_trivial_on(w: Cocycle3, subset, cap: int | None = None,
                       perm_seed: int | None = None):
    """A 2-cochain mu on N with d(mu) = w|_N, or None if the restriction is
    cohomologically nontrivial.

    Works over Z/M with M = L * |N| where L clears the denominators of w|_N:
    every elementary divisor of the integer coboundary matrix divides |N|,
    so a Q/Z solution exists iff one with denominator M does.
    """
    subset = tuple(sorted(set(subset)))
    if not w.group.is_abelian_subset(subset):
        raise InvalidInputError("cocycle_trivial_on needs an abelian subgroup")
    m = len(subset)
    config.check_cap(m, cap, "solve_cap")
    wn = restrict(w, subset)
    H = wn.group
    if not wn.num.any():
        return Cochain2(H, np.zeros((m, m), dtype=np.int64), 1)
    L = wn.den
    M = L * m
    scale = M // L
    nonid = list(range(1, m))
    var = {}
    for x in nonid:
        for y in nonid:
            var[(x, y)] = len(var)
    rows = []
    rhs = []
    for x in nonid:
        for y in nonid:
            for z in nonid:
                row = np.zeros(len(var), dtype=np.int64)
                # d(mu)(x,y,z) = mu(y,z) - mu(xy,z) + mu(x,yz) - mu(x,y)
                row[var[(y, z)]] += 1
                xy = H.table[x][y]
                if xy != 0 and z != 0:
                    row[var[(xy, z)]] -= 1
                yz = H.table[y][z]
                if yz != 0:
                    row[var[(x, yz)]] += 1
                row[var[(x, y)]] -= 1
                rows.append(row)
                rhs.append(int(wn.num[x, y, z]) * scale)
    sol = solve_linear_mod(np.array(rows), rhs, M, perm_seed=perm_seed)
    if sol is None:
        return None
    num = np.zeros((m, m), dtype=np.int64)
    for (x, y), idx in var.items():
        num[x, y] = sol[idx]
    return Cochain2(H, num, M)


# -- m_{w,N} and the obstruction ---------------------------------------------------


def m_class(w: Cocycle3, subset, nu: Cochain2 | None = None,
            cap: int | None = None, perm_seed: int | None = None):
    """The family m(g) = mu_g|_N + nu - nu^g for all g, plus the chosen nu.

    Every m(g) is validated as a 2-cocycle on N, and the 1-cocycle property
    of the family is validated exactly against the gamma identity.
    """
    ctx = NormalAbelianContext(w.group, subset)
    if nu is None:
        nu = cocycle_trivial_on(w, ctx.elements, cap=cap, perm_seed=perm_seed)
        if nu is None:
            raise InvalidInputError(
                "the restriction of the cocycle to N is cohomologically nontrivial"
            )
    G = w.group
    emb = np.asarray(ctx.embedding, dtype=np.intp)
    den = lcm(w.den, nu.den)
    out = {}
    for g in range(G.order):
        c_global = G.conj_perm(g)[emb]           # images of N under conj by g
        c_local = np.asarray([ctx.local_index[int(t)] for t in c_global],
                             dtype=np.intp)
        mu = mu_g(w, g)
        mu_n = mu.num[np.ix_(emb, emb)]
        nu_g = nu.num[np.ix_(c_local, c_local)]
        m_num = (_lift(mu_n, mu.den, den) + _lift(nu.num, nu.den, den)
                 - _lift(nu_g, nu.den, den)) % den
        out[g] = Cochain2(ctx.local, m_num, den, validate_cocycle=True)
    _assert_gamma_identity(w, ctx, out)
    return out, nu, ctx


def _assert_gamma_identity(w: Cocycle3, ctx: NormalAbelianContext, m: dict) -> None:
    """(del m)(g,h) must equal d(gamma_{g,h}) exactly, for all pairs g, h."""
    G = w.group
    emb = np.asarray(ctx.embedding, dtype=np.intp)
    Mloc = ctx.local._np_table
    for g in range(G.order):
        for h in range(G.order):
            gh = G.mul(g, h)
            c_h = G.conj_perm(h)[emb]
            c_h_local = np.asarray(
                [ctx.local_index[int(t)] for t in c_h], dtype=np.intp
            )
            den = lcm(lcm(m[gh].den, m[g].den), lcm(m[h].den, w.den))
            dm = (_lift(m[gh].num, m[gh].den, den)
                  - _lift(m[g].num[np.ix_(c_h_local, c_h_local)], m[g].den, den)
                  - _lift(m[h].num, m[h].den, den)) % den
            # gamma_{g,h}(x) = w(g, hxh', h) - w(g, h, x) - w(ghxh'g', g, h)
            hx = c_h
            ghx = G.conj_perm(g)[hx]
            gam = (w.num[g, hx, h] - w.num[g, h, emb] - w.num[ghx, g, h]) % w.den
            gam = _lift(gam, w.den, den)
            dgam = (gam[Mloc] - gam[:, np.newaxis] - gam[np.newaxis, :]) % den
            if not np.array_equal(dm, dgam % den):
                raise InternalCheckError(
                    f"1-cocycle property of m fails at pair ({g}, {h})"
                )


@dataclass(frozen=True)
class AltForm:
    """An alternating bilinear form on N, stored on abelian generator pairs:
    ``pairs[i-1][j] = B(n_i, n_j)`` for j < i."""

    invariant_factors: tuple
    pairs: tuple

    def value(self, coords_x, coords_y) -> QZ:
        # B(x, y) = sum_{i>j} (x_i y_j - x_j y_i) B(n_i, n_j)
        total = QZ.ZERO
        k = len(self.invariant_factors)
        for i in range(1, k):
            for j in range(i):
                c = coords_x[i] * coords_y[j] - coords_x[j] * coords_y[i]
                if c:
                    total = total + self.pairs[i - 1][j] * c
        return total


def _alt_matrix(ctx: NormalAbelianContext, chain: Cochain2):
    """Alt of a 2-cocycle on N as a biadditive form; biadditivity asserted."""
    alt = chain.alt_num()
    Mloc = ctx.local._np_table
    den = chain.den
    lhs = alt[Mloc, :]
    rhs = (alt[:, np.newaxis, :] + alt[np.newaxis, :, :]) % den
    if not np.array_equal(lhs % den, rhs):
        raise InternalCheckError("Alt of a 2-cocycle failed to be biadditive")
    return alt, den


def obstruction_vanishes(w: Cocycle3, subset, cap: int | None = None,
                         perm_seed: int | None = None):
    """An alternating form B on N with B^g - B + Alt(m(g)) = 0 for all
    generators g of G, or None when no such form exists.

    The 1-cocycle property of m (validated in m_class) extends the identity
    from a generating set to every g in G.
    """
    m, _nu, ctx = m_class(w, subset, cap=cap, perm_seed=perm_seed)
    d = ctx.ab.invariant_factors
    k = len(d)
    nstar = ctx.ab.exponent if k else 1
    pair_list = [(i, j) for i in range(1, k) for j in range(i)]
    if not pair_list:
        return AltForm(d, ())
    var = {p: t for t, p in enumerate(pair_list)}
    gens = generating_set(ctx.G)
    coords_of_conj = {}
    for g in gens:
        cl = ctx.conj_local(g)
        coords_of_conj[g] = [ctx.coords(int(cl[loc])) for loc in ctx.gen_locals]
    rows, rhs = [], []
    for (i, j) in pair_list:
        for dd in (d[i], d[j]):
            row = np.zeros(len(var), dtype=np.int64)
            row[var[(i, j)]] = dd
            rows.append(row)
            rhs.append(0)
    for g in gens:
        alt, aden = _alt_matrix(ctx, m[g])
        conj_coords = coords_of_conj[g]
        for (a, b) in pair_list:
            row = np.zeros(len(var), dtype=np.int64)
            cx, cy = conj_coords[a], conj_coords[b]
            for (i, j) in pair_list:
                coeff = cx[i] * cy[j] - cx[j] * cy[i]
                row[var[(i, j)]] += coeff
            row[var[(a, b)]] -= 1
            val = qz(int(alt[ctx.gen_locals[a], ctx.gen_locals[b]]), aden)
            rows.append(row)
            rhs.append(-val.numerator_mod(nstar))
    sol = solve_linear_mod(np.array(rows), rhs, nstar, perm_seed=perm_seed)
    if sol is None:
        return None
    pairs = tuple(
        tuple(qz(int(sol[var[(i, j)]]), nstar) for j in range(i))
        for i in range(1, k)
    )
    return AltForm(d, pairs)


def omega_in_Omega(w: Cocycle3, subset, cap: int | None = None) -> bool:
    """Whether w restricts trivially to N and the Lagrangian obstruction
    vanishes there."""
    if cocycle_trivial_on(w, subset, cap=cap) is None:
        return False
    return obstruction_vanishes(w, subset, cap=cap) is not None


def invariant_alternating_count(G: FinGroup, subset) -> int:
    """|Hom(wedge^2 N, Q/Z)^G|: the number of G-invariant alternating
    biadditive forms on N."""
    ctx = NormalAbelianContext(G, subset)
    d = ctx.ab.invariant_factors
    k = len(d)
    pair_list = [(i, j) for i in range(1, k) for j in range(i)]
    if not pair_list:
        return 1
    moduli = [gcd(d[i], d[j]) for (i, j) in pair_list]
    gens = generating_set(G)
    action_trivial = all(
        np.array_equal(ctx.conj_local(g), np.arange(ctx.order)) for g in gens
    )
    total_forms = 1
    for mm in moduli:
        total_forms *= mm
    if action_trivial:
        return total_forms
    conj_coords = {
        g: [ctx.coords(int(ctx.conj_local(g)[loc])) for loc in ctx.gen_locals]
        for g in gens
    }
    count = 0
    for combo in itertools.product(*(range(mm) for mm in moduli)):
        B = {p: qz(c, mm) for p, c, mm in zip(pair_list, combo, moduli)}

        def val(cx, cy):
            total = QZ.ZERO
            for (i, j) in pair_list:
                coeff = cx[i] * cy[j] - cx[j] * cy[i]
                if coeff:
                    total = total + B[(i, j)] * coeff
            return total

        ok = True
        for g in gens:
            cc = conj_coords[g]
            for (a, b) in pair_list:
                lhs = val(cc[a], cc[b])
                if lhs != B[(a, b)]:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            count += 1
    return count
