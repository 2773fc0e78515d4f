"""Classification of anisotropic pre-metric groups at prime-power order.

The classifier materialises explicit reference groups, one per isomorphism
class: eighteen 2-group classes spread over nine rows, and per odd prime p
two classes of order p plus one of order p^2 (whose shape depends on
p mod 4).  Classification is then an isomorphism test against the reference
list, which makes the tables self-verifying: the row class counts
(1,2,2,4,4,1,2,1,1) and the completeness of the match are asserted when the
references are first built.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import InternalCheckError, InvalidInputError
from .premetric import (
    PreMetricGroup,
    are_isomorphic,
    f_form,
    fermions,
    is_anisotropic,
    orthogonal_sum,
    q_odd,
    q_two,
    trivial_form,
)

_ROW_CLASS_COUNTS_2 = {
    "1*": 1,
    "2*": 2,
    "3*": 2,
    "4*": 4,
    "5*": 4,
    "6": 1,
    "7": 2,
    "8*": 1,
    "9*": 1,
}


@dataclass(frozen=True)
class AnisotropicLabel:
    table: str  # "2-groups" or "odd"
    row: str
    parameters: tuple

    def __str__(self) -> str:
        return f"table {self.table}, row {self.row}, parameters {self.parameters}"


def _dedupe(candidates):
    """Keep one representative per isomorphism class, first parameters win."""
    out = []
    for params, grp in candidates:
        if not is_anisotropic(grp):
            raise InternalCheckError(f"reference candidate {params} is isotropic")
        if all(are_isomorphic(grp, other) is None for _, other in out):
            out.append((params, grp))
    return out


@lru_cache(maxsize=1)
def references_2groups():
    """The 18 reference anisotropic pre-metric 2-group classes, by row."""
    rows = {
        "1*": [((), trivial_form())],
        "2*": [((a,), q_two(1, a)) for a in (1, 3)],
        "3*": [((a, a), orthogonal_sum(q_two(1, a), q_two(1, a))) for a in (1, 3)],
        "4*": [((a,), q_two(2, a)) for a in (1, 3, 5, 7)],
        "5*": [
            ((a, c), orthogonal_sum(q_two(2, a), q_two(1, c)))
            for a in (1, 3, 5, 7)
            for c in (1, 3)
        ],
        "6": [((), f_form(1))],
        "7": [((a,), orthogonal_sum(f_form(1), q_two(1, a))) for a in (1, 3)],
        "8*": [((2,), q_two(1, 2))],
        "9*": [((2, a), orthogonal_sum(q_two(1, 2), q_two(1, a))) for a in (1, 3)],
    }
    refs = {}
    for row, candidates in rows.items():
        classes = _dedupe(candidates)
        if len(classes) != _ROW_CLASS_COUNTS_2[row]:
            raise InternalCheckError(
                f"row {row} produced {len(classes)} classes, "
                f"expected {_ROW_CLASS_COUNTS_2[row]}"
            )
        refs[row] = classes
    fermion_bounds = {row: (1 if row.endswith("*") else 3) for row in refs}
    for row, classes in refs.items():
        for params, grp in classes:
            count = len(fermions(grp))
            if count > fermion_bounds[row] or (
                not row.endswith("*") and count <= 1
            ):
                raise InternalCheckError(
                    f"row {row} fermion count {count} contradicts its annotation"
                )
    return refs


def _least_nonresidue(p: int) -> int:
    squares = {pow(a, 2, p) for a in range(1, p)}
    for b in range(2, p):
        if b not in squares:
            return b
    raise InternalCheckError(f"no quadratic non-residue mod {p}")


@lru_cache(maxsize=None)
def references_odd(p: int):
    """Reference anisotropic metric p-groups for an odd prime: rows 1-3."""
    if p < 3 or p % 2 == 0:
        raise InvalidInputError("odd reference table needs an odd prime")
    b = _least_nonresidue(p)
    rows = {"1": _dedupe([((a,), q_odd(p, 1, a)) for a in (1, b)])}
    if p % 4 == 1:
        rows["2"] = _dedupe([((1, b), orthogonal_sum(q_odd(p, 1, 1), q_odd(p, 1, b)))])
    else:
        rows["3"] = _dedupe([((1, 1), orthogonal_sum(q_odd(p, 1, 1), q_odd(p, 1, 1)))])
    if len(rows["1"]) != 2:
        raise InternalCheckError("row 1 must have exactly 2 classes")
    return rows


def _prime_power_base(n: int):
    if n == 1:
        return None
    p = 2
    while n % p != 0:
        p += 1
    while n % p == 0:
        n //= p
    return p if n == 1 else False


def classify_anisotropic(P: PreMetricGroup) -> AnisotropicLabel:
    """Match an anisotropic prime-power group against the reference tables."""
    if not is_anisotropic(P):
        raise InvalidInputError("classify_anisotropic needs an anisotropic group")
    base = _prime_power_base(P.order)
    if base is False:
        raise InvalidInputError("classify_anisotropic needs prime-power order")
    if base is None or base == 2:
        table, refs = "2-groups", references_2groups()
    else:
        table, refs = "odd", references_odd(base)
    for row, classes in refs.items():
        for params, grp in classes:
            if grp.order == P.order and are_isomorphic(P, grp) is not None:
                return AnisotropicLabel(table, row, params)
    raise InternalCheckError(
        f"anisotropic group {P!r} matches no reference class; the tables are complete"
    )
