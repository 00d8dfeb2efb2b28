"""Prime fields F_q and their quadratic extensions F_q[w]/(w^2 - d)."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

__all__ = [
    "UnsupportedFieldError",
    "is_prime",
    "check_field",
    "smallest_nonresidue",
    "FieldElem",
    "extension_elements",
]

MAX_Q = 13


class UnsupportedFieldError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % p for p in range(2, int(n**0.5) + 1))


def check_field(q: int, *, allow_char2: bool = False) -> int:
    """Validate ``q`` as a supported base field size and return it."""
    if not isinstance(q, int) or isinstance(q, bool):
        raise UnsupportedFieldError(f"unsupported field: q={q!r} is not an integer")
    if q == 2 and allow_char2:
        return q
    if q < 3 or q > MAX_Q or q % 2 == 0 or not is_prime(q):
        raise UnsupportedFieldError(f"unsupported field: q={q} (need an odd prime 3 <= q <= {MAX_Q})")
    return q


@lru_cache(maxsize=None)
def smallest_nonresidue(q: int) -> int:
    squares = {x * x % q for x in range(1, q)}
    return next(d for d in range(2, q) if d not in squares)


@dataclass(frozen=True)
class FieldElem:
    """``a + b*w`` in F_q[w]/(w^2 - d), with ``d`` the smallest non-residue mod ``q``.

    Elements with ``b == 0`` are the elements of F_q.
    """

    a: int
    b: int
    q: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "a", self.a % self.q)
        object.__setattr__(self, "b", self.b % self.q)

    @classmethod
    def of(cls, a: int, q: int) -> FieldElem:
        return cls(a, 0, q)

    @property
    def d(self) -> int:
        return smallest_nonresidue(self.q)

    def _same(self, other: FieldElem | int) -> FieldElem:
        if isinstance(other, int):
            return FieldElem(other, 0, self.q)
        if other.q != self.q:
            raise ValueError(f"mixing F_{self.q}^2 and F_{other.q}^2")
        return other

    def __add__(self, other: FieldElem | int) -> FieldElem:
        o = self._same(other)
        return FieldElem(self.a + o.a, self.b + o.b, self.q)

    __radd__ = __add__

    def __neg__(self) -> FieldElem:
        return FieldElem(-self.a, -self.b, self.q)

    def __sub__(self, other: FieldElem | int) -> FieldElem:
        return self + (-self._same(other))

    def __rsub__(self, other: int) -> FieldElem:
        return self._same(other) - self

    def __mul__(self, other: FieldElem | int) -> FieldElem:
        o = self._same(other)
        return FieldElem(self.a * o.a + self.d * self.b * o.b, self.a * o.b + self.b * o.a, self.q)

    __rmul__ = __mul__

    def norm(self) -> int:
        return (self.a * self.a - self.d * self.b * self.b) % self.q

    def inverse(self) -> FieldElem:
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("zero has no inverse")
        inv = pow(n, -1, self.q)
        return FieldElem(self.a * inv, -self.b * inv, self.q)

    def __truediv__(self, other: FieldElem | int) -> FieldElem:
        return self * self._same(other).inverse()

    def __pow__(self, n: int) -> FieldElem:
        base, result = (self, FieldElem(1, 0, self.q)) if n >= 0 else (self.inverse(), FieldElem(1, 0, self.q))
        n = abs(n)
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def frobenius(self) -> FieldElem:
        """``x -> x^q``; conjugation ``w -> -w`` since ``w^(q-1) = d^((q-1)/2) = -1``."""
        return FieldElem(self.a, -self.b, self.q)

    def is_base(self) -> bool:
        return self.b == 0

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def encode(self) -> int:
        return self.a + self.b * self.q

    @classmethod
    def decode(cls, code: int, q: int) -> FieldElem:
        return cls(code % q, code // q, q)

    def __str__(self) -> str:
        if self.b == 0:
            return str(self.a)
        return f"{self.a}+{self.b}w" if self.a else f"{self.b}w"


def extension_elements(q: int) -> list[FieldElem]:
    """All ``q^2`` elements of F_{q^2}, ordered by :meth:`FieldElem.encode`."""
    return [FieldElem.decode(c, q) for c in range(q * q)]
