"""Ground fields for exact linear algebra: Q and GF(p).

A field object is a small factory that builds, parses, and formats
scalars.  Rational scalars are `fractions.Fraction`; prime-field scalars
are `GFElement` instances that overload arithmetic so the generic
elimination code never branches on the field kind.

Fields compare by value, so two `PrimeField(7)` instances are
interchangeable.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterator, Union

from .errors import FieldMismatch, ParseError

MAX_PRIME = 2**16

Scalar = Union[Fraction, "GFElement"]


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


class GFElement:
    """A residue modulo a prime, tied to its field.

    Arithmetic accepts another element of the same field or a plain int.
    Division by zero raises ZeroDivisionError like the built-in types.
    """

    __slots__ = ("field", "v")

    def __init__(self, field: "PrimeField", v: int):
        self.field = field
        self.v = v % field.p

    def _lift(self, other) -> "GFElement | None":
        if isinstance(other, GFElement):
            if other.field.p != self.field.p:
                raise FieldMismatch(
                    f"GF({self.field.p}) vs GF({other.field.p})"
                )
            return other
        if isinstance(other, int):
            return self.field.scalar(other)
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self.field.scalar(self.v + o.v)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self.field.scalar(self.v - o.v)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self.field.scalar(o.v - self.v)

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self.field.scalar(self.v * o.v)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if o.v == 0:
            raise ZeroDivisionError(f"division by zero in GF({self.field.p})")
        return self.field.scalar(self.v * pow(o.v, -1, self.field.p))

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if self.v == 0:
            raise ZeroDivisionError(f"division by zero in GF({self.field.p})")
        return self.field.scalar(o.v * pow(self.v, -1, self.field.p))

    def __neg__(self):
        return self.field.scalar(-self.v)

    def __pow__(self, n: int):
        return self.field.scalar(pow(self.v, n, self.field.p))

    def __eq__(self, other):
        if isinstance(other, GFElement):
            return self.field.p == other.field.p and self.v == other.v
        if isinstance(other, int):
            return self.v == other % self.field.p
        return NotImplemented

    def __hash__(self):
        return hash((self.field.p, self.v))

    def __bool__(self):
        return self.v != 0

    def __lt__(self, other):
        # canonical residue order; used only to pick deterministic orderings
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self.v < o.v

    def __repr__(self):
        return f"{self.v}(mod {self.field.p})"


class Rationals:
    """The field of rational numbers.  Scalars are Fraction values."""

    kind = "Q"

    @property
    def zero(self) -> Fraction:
        return Fraction(0)

    @property
    def one(self) -> Fraction:
        return Fraction(1)

    def scalar(self, x) -> Fraction:
        """Coerce an int, Fraction, or "a/b" string to a Fraction."""
        if isinstance(x, float):
            raise TypeError("floats are not exact; pass int, Fraction, or str")
        return Fraction(x)

    def parse(self, s: str) -> Fraction:
        try:
            return Fraction(s.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise ParseError(f"bad rational scalar {s!r}: {e}") from None

    def format(self, x: Fraction) -> str:
        return str(x)

    def elements(self) -> Iterator[Fraction]:
        raise TypeError("Q is infinite; cannot enumerate its elements")

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("Q")

    def __repr__(self):
        return "Q"


class PrimeField:
    """GF(p) for a prime p <= 2**16.

    Elements are cached per field instance, so arithmetic mostly shuffles
    references instead of allocating.
    """

    kind = "GFp"

    def __init__(self, p: int):
        if not isinstance(p, int) or not _is_prime(p):
            raise ParseError(f"field order {p!r} is not prime")
        if p > MAX_PRIME:
            raise ParseError(f"field order {p} exceeds the cap {MAX_PRIME}")
        self.p = p
        if p <= 1024:
            self._cache = tuple(GFElement(self, v) for v in range(p))
        else:
            self._cache = None

    @property
    def zero(self) -> GFElement:
        return self.scalar(0)

    @property
    def one(self) -> GFElement:
        return self.scalar(1)

    def scalar(self, x) -> GFElement:
        """Coerce an int, integer string, or same-field element."""
        if isinstance(x, GFElement):
            if x.field.p != self.p:
                raise FieldMismatch(f"GF({x.field.p}) element given to GF({self.p})")
            return x
        if isinstance(x, str):
            x = int(x)
        if not isinstance(x, int):
            raise TypeError(f"cannot coerce {type(x).__name__} into GF({self.p})")
        if self._cache is not None:
            return self._cache[x % self.p]
        return GFElement(self, x)

    def parse(self, s: str) -> GFElement:
        try:
            return self.scalar(int(s.strip()))
        except ValueError:
            raise ParseError(f"bad GF({self.p}) scalar {s!r}") from None

    def format(self, x: GFElement) -> str:
        return str(x.v)

    def elements(self) -> Iterator[GFElement]:
        for v in range(self.p):
            yield self.scalar(v)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GFp", self.p))

    def __repr__(self):
        return f"GF({self.p})"


Field = Union[Rationals, PrimeField]

QQ = Rationals()


def GF(p: int) -> PrimeField:
    return PrimeField(p)


def field_from_spec(spec) -> Field:
    """Build a field from its JSON form {"kind": "Q"} / {"kind": "GFp", "p": n},
    or from a short name like "Q" / "gf7"."""
    if isinstance(spec, str):
        name = spec.strip().lower()
        if name in ("q", "qq", "rational", "rationals"):
            return QQ
        if name.startswith("gf"):
            body = name[2:].lstrip("(").rstrip(")")
            try:
                return PrimeField(int(body))
            except ValueError:
                raise ParseError(f"bad field name {spec!r}") from None
        raise ParseError(f"bad field name {spec!r}")
    if isinstance(spec, dict):
        kind = spec.get("kind")
        if kind == "Q":
            return QQ
        if kind == "GFp":
            if "p" not in spec:
                raise ParseError('field {"kind": "GFp"} needs "p"')
            return PrimeField(spec["p"])
        raise ParseError(f"unknown field kind {kind!r}")
    raise ParseError(f"bad field spec {spec!r}")


def field_to_spec(field: Field) -> dict:
    if isinstance(field, Rationals):
        return {"kind": "Q"}
    return {"kind": "GFp", "p": field.p}


def same_field(*fields: Field) -> Field:
    """Assert all arguments are the same field and return it."""
    first = fields[0]
    for f in fields[1:]:
        if f != first:
            raise FieldMismatch(f"{first!r} vs {f!r}")
    return first
