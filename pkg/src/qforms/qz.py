"""Exact arithmetic in the circle group Q/Z.

Quadratic forms, bilinear pairings, and cochains all take values in Q/Z.
The additive convention is fixed project-wide: the root of unity
``exp(2*pi*i*a/m)`` is represented by the residue class ``a/m``, so a
multiplicative statement like ``q(x) = 1`` reads ``q(x) == QZ.ZERO`` here,
and ``q(x) = -1`` reads ``q(x) == qz(1, 2)``.
"""

from __future__ import annotations

from math import gcd

from .errors import InvalidInputError, SchemaError


class QZ:
    """A residue ``num/den`` in Q/Z, always reduced with ``0 <= num < den``.

    The zero element is exactly ``0/1``.  Instances are immutable and
    hashable; addition, negation, and scaling by integers are closed.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: int, den: int) -> None:
        if den < 1:
            raise InvalidInputError("denominator must be a positive integer")
        num %= den
        g = gcd(num, den)
        object.__setattr__(self, "num", num // g)
        object.__setattr__(self, "den", den // g)

    def __setattr__(self, name, value):  # pragma: no cover - immutability guard
        raise AttributeError("QZ values are immutable")

    # -- algebra ---------------------------------------------------------

    def __add__(self, other: "QZ") -> "QZ":
        return QZ(self.num * other.den + other.num * self.den, self.den * other.den)

    def __sub__(self, other: "QZ") -> "QZ":
        return QZ(self.num * other.den - other.num * self.den, self.den * other.den)

    def __neg__(self) -> "QZ":
        return QZ(-self.num, self.den)

    def __mul__(self, k: int) -> "QZ":
        if not isinstance(k, int):
            return NotImplemented
        return QZ(self.num * k, self.den)

    __rmul__ = __mul__

    # -- queries ---------------------------------------------------------

    @property
    def order(self) -> int:
        """Additive order of the residue, i.e. its reduced denominator."""
        return self.den

    def is_zero(self) -> bool:
        return self.num == 0

    def numerator_mod(self, modulus: int) -> int:
        """Return ``n`` with ``self == n/modulus``; ``modulus`` must clear the denominator."""
        if modulus % self.den != 0:
            raise InvalidInputError(f"{self} does not lie in (1/{modulus})Z/Z")
        return self.num * (modulus // self.den)

    # -- protocol --------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, QZ) and self.num == other.num and self.den == other.den
        )

    def __lt__(self, other: "QZ") -> bool:
        return self.num * other.den < other.num * self.den

    def __le__(self, other: "QZ") -> bool:
        return self.num * other.den <= other.num * self.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __str__(self) -> str:
        return f"{self.num}/{self.den}"

    __repr__ = __str__


QZ.ZERO = QZ(0, 1)
QZ.HALF = QZ(1, 2)


def qz(a: int, m: int) -> QZ:
    """Canonical constructor: ``a/m`` reduced modulo 1."""
    return QZ(a, m)


def parse_qz(text: str) -> QZ:
    """Parse ``"a/m"`` (reduced or not) or a bare integer string."""
    s = text.strip()
    try:
        if "/" in s:
            a_str, m_str = s.split("/")
            return QZ(int(a_str), int(m_str))
        return QZ(int(s), 1)
    except (ValueError, InvalidInputError) as exc:
        raise SchemaError(f"cannot parse {text!r} as a fraction a/m") from exc


def qz_sum(values) -> QZ:
    total = QZ.ZERO
    for v in values:
        total = total + v
    return total
