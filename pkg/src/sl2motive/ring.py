"""Exact Laurent polynomials in ``q`` over the rationals, and Z/2-equivariant class pairs.

Every class computed by this package is an element of Z[q, q^-1], where ``q`` is
the class of the affine line.  Intermediate formulas pick up halves, so
coefficients are stored as :class:`fractions.Fraction` and integrality is
checked separately on final answers.

The text format is ``c*q^k`` terms joined by ``+``/``-`` in decreasing degree,
e.g. ``1/2*q^3 - 2*q + 1``.  :func:`parse_poly` and ``str()`` round-trip.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Union

__all__ = [
    "LaurentPoly",
    "EquivariantClass",
    "NonInvertibleError",
    "InexactDivisionError",
    "q",
    "ONE",
    "ZERO",
    "poly_arith",
    "divide_exact",
    "evaluate_at",
    "parse_poly",
    "z2_product",
    "z2_power",
]

Scalar = Union[int, Fraction]


class NonInvertibleError(ArithmeticError):
    """Raised when a negative power of a non-monomial is requested."""


class InexactDivisionError(ArithmeticError):
    """Raised when an exact division leaves a nonzero remainder."""


class LaurentPoly:
    """Immutable Laurent polynomial with rational coefficients.

    Zero coefficients are never stored, so two polynomials are equal exactly
    when their term maps are equal.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, Scalar] | None = None) -> None:
        clean: dict[int, Fraction] = {}
        if terms:
            for exp, coeff in terms.items():
                if not isinstance(exp, int):
                    raise TypeError(f"exponent must be an int, got {exp!r}")
                c = Fraction(coeff)
                if c:
                    clean[exp] = c
        self._terms = clean
        self._hash: int | None = None

    # -- constructors -----------------------------------------------------

    @classmethod
    def constant(cls, c: Scalar) -> LaurentPoly:
        return cls({0: c})

    @classmethod
    def monomial(cls, exp: int, coeff: Scalar = 1) -> LaurentPoly:
        return cls({exp: coeff})

    @classmethod
    def coerce(cls, value: LaurentPoly | Scalar) -> LaurentPoly:
        if isinstance(value, LaurentPoly):
            return value
        if isinstance(value, (int, Fraction)):
            return cls.constant(value)
        raise TypeError(f"cannot interpret {value!r} as a Laurent polynomial")

    # -- inspection -------------------------------------------------------

    @property
    def terms(self) -> dict[int, Fraction]:
        """A copy of the exponent -> coefficient map."""
        return dict(self._terms)

    def items(self) -> list[tuple[int, Fraction]]:
        """Terms sorted by decreasing exponent."""
        return sorted(self._terms.items(), reverse=True)

    def coefficient(self, exp: int) -> Fraction:
        return self._terms.get(exp, Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self._terms.values())

    def is_polynomial(self) -> bool:
        return all(e >= 0 for e in self._terms)

    @property
    def degree(self) -> int:
        if not self._terms:
            raise ValueError("the zero polynomial has no degree")
        return max(self._terms)

    @property
    def valuation(self) -> int:
        if not self._terms:
            raise ValueError("the zero polynomial has no valuation")
        return min(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly.constant(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # -- arithmetic -------------------------------------------------------

    def __neg__(self) -> LaurentPoly:
        return LaurentPoly({e: -c for e, c in self._terms.items()})

    def __pos__(self) -> LaurentPoly:
        return self

    def __add__(self, other: LaurentPoly | Scalar) -> LaurentPoly:
        try:
            other = LaurentPoly.coerce(other)
        except TypeError:
            return NotImplemented
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, 0) + c
        return LaurentPoly(out)

    __radd__ = __add__

    def __sub__(self, other: LaurentPoly | Scalar) -> LaurentPoly:
        try:
            other = LaurentPoly.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: Scalar) -> LaurentPoly:
        return LaurentPoly.coerce(other) - self

    def __mul__(self, other: LaurentPoly | Scalar) -> LaurentPoly:
        if isinstance(other, (int, Fraction)):
            return LaurentPoly({e: c * other for e, c in self._terms.items()})
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        out: dict[int, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
        return LaurentPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> LaurentPoly:
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            if not self.is_monomial():
                raise NonInvertibleError(f"non-invertible: ({self})^{n}")
            (e, c), = self._terms.items()
            return LaurentPoly({e * n: c ** n})
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __truediv__(self, other: LaurentPoly | Scalar) -> LaurentPoly:
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return self * (1 / Fraction(other))
        if isinstance(other, LaurentPoly):
            return divide_exact(self, other)
        return NotImplemented

    def __call__(self, q0: Scalar) -> Fraction:
        return evaluate_at(self, q0)

    # -- text -------------------------------------------------------------

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        pieces: list[str] = []
        for i, (e, c) in enumerate(self.items()):
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if e == 0:
                body = _fmt_coeff(mag)
            else:
                var = "q" if e == 1 else f"q^{e}"
                body = var if mag == 1 else f"{_fmt_coeff(mag)}*{var}"
            if i == 0:
                pieces.append(body if sign == "+" else f"-{body}")
            else:
                pieces.append(f" {sign} {body}")
        return "".join(pieces)

    def __repr__(self) -> str:
        return f"LaurentPoly({str(self)!r})"

    def to_latex(self) -> str:
        """Math-mode rendering; accepted back by :func:`parse_poly`."""
        text = re.sub(r"\^(-?\d+)", r"^{\1}", str(self))
        return text.replace("*", " ")


def _fmt_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


ZERO = LaurentPoly()
ONE = LaurentPoly.constant(1)
q = LaurentPoly.monomial(1)


def poly_arith(op: str, a: LaurentPoly, b: LaurentPoly | int) -> LaurentPoly:
    """Dispatch ``add``/``sub``/``mul``/``pow`` by name."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "pow":
        if not isinstance(b, int):
            raise TypeError("pow takes an integer exponent")
        return a ** b
    raise ValueError(f"unknown operation {op!r}")


def divide_exact(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    """Return ``c`` with ``b * c == a``; raise :class:`InexactDivisionError` otherwise."""
    if b.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if a.is_zero():
        return ZERO
    # Units of Q[q, 1/q] are monomials, so shift both sides to genuine
    # polynomials with nonzero constant term and do long division.
    va, vb = a.valuation, b.valuation
    num = {e - va: c for e, c in a._terms.items()}
    den = {e - vb: c for e, c in b._terms.items()}
    dn = max(den)
    lead = den[dn]
    quot: dict[int, Fraction] = {}
    while num:
        top = max(num)
        if top < dn:
            break
        factor = num[top] / lead
        shift = top - dn
        quot[shift] = factor
        for e, c in den.items():
            k = e + shift
            v = num.get(k, 0) - factor * c
            if v:
                num[k] = v
            else:
                num.pop(k, None)
    if num:
        raise InexactDivisionError(f"inexact division: ({a}) / ({b})")
    return LaurentPoly({e + va - vb: c for e, c in quot.items()})


def evaluate_at(a: LaurentPoly, q0: Scalar) -> Fraction:
    """Exact value of ``a`` at the rational point ``q0``."""
    q0 = Fraction(q0)
    if q0 == 0:
        if any(e < 0 for e in a._terms):
            raise ZeroDivisionError("cannot evaluate a negative power of q at 0")
        return a.coefficient(0)
    return sum((c * q0 ** e for e, c in a._terms.items()), Fraction(0))


_TERM = re.compile(
    r"""\s*(?P<sign>[+-])?\s*
        (?:(?P<num>\d+)(?:\s*/\s*(?P<den>\d+))?)?\s*
        (?P<star>\*)?\s*
        (?P<var>q(?:\s*\^\s*(?P<exp>-?\d+))?)?\s*""",
    re.VERBOSE,
)


def parse_poly(text: str) -> LaurentPoly:
    """Parse the text format written by ``str(LaurentPoly)``.

    Also accepts the LaTeX rendering (``$``, braces around exponents, implicit
    multiplication) and the Unicode minus sign.
    """
    s = text.strip().strip("$").replace("−", "-").replace("{", "").replace("}", "")
    s = s.replace("\\cdot", "*")
    if not s:
        raise ValueError("empty polynomial")
    terms: dict[int, Fraction] = {}
    pos = 0
    first = True
    while pos < len(s):
        m = _TERM.match(s, pos)
        if m is None or m.end() == pos:
            raise ValueError(f"cannot parse polynomial at {s[pos:]!r}")
        if m.group("num") is None and m.group("var") is None:
            raise ValueError(f"dangling sign in polynomial {text!r}")
        if m.group("sign") is None and not first:
            raise ValueError(f"missing operator in polynomial {text!r}")
        if m.group("star") and (m.group("num") is None or m.group("var") is None):
            raise ValueError(f"misplaced '*' in polynomial {text!r}")
        coeff = Fraction(1)
        if m.group("num") is not None:
            den = int(m.group("den")) if m.group("den") else 1
            coeff = Fraction(int(m.group("num")), den)
        if m.group("sign") == "-":
            coeff = -coeff
        exp = 0
        if m.group("var"):
            exp = int(m.group("exp")) if m.group("exp") else 1
        terms[exp] = terms.get(exp, 0) + coeff
        pos = m.end()
        first = False
    return LaurentPoly(terms)


@dataclass(frozen=True)
class EquivariantClass:
    """Class of a variety with a Z/2-action, split as ``[X]^+`` and ``[X]^-``.

    ``plus`` is the class of the quotient by Z/2 and ``plus + minus`` the class
    of the variety itself.
    """

    plus: LaurentPoly
    minus: LaurentPoly

    def __post_init__(self) -> None:
        object.__setattr__(self, "plus", LaurentPoly.coerce(self.plus))
        object.__setattr__(self, "minus", LaurentPoly.coerce(self.minus))

    @classmethod
    def trivial(cls, total: LaurentPoly | Scalar) -> EquivariantClass:
        """A variety on which Z/2 acts trivially."""
        return cls(LaurentPoly.coerce(total), ZERO)

    @classmethod
    def free_points(cls, count: int) -> EquivariantClass:
        """``count`` points permuted freely in pairs."""
        half = Fraction(count, 2)
        return cls(LaurentPoly.constant(half), LaurentPoly.constant(half))

    def total(self) -> LaurentPoly:
        return self.plus + self.minus

    def difference(self) -> LaurentPoly:
        return self.plus - self.minus

    def __add__(self, other: EquivariantClass) -> EquivariantClass:
        return EquivariantClass(self.plus + other.plus, self.minus + other.minus)

    def __sub__(self, other: EquivariantClass) -> EquivariantClass:
        return EquivariantClass(self.plus - other.plus, self.minus - other.minus)

    def __mul__(self, other: EquivariantClass) -> EquivariantClass:
        return z2_product(self, other)

    def __pow__(self, n: int) -> EquivariantClass:
        return z2_power(self, n)


def z2_product(a: EquivariantClass, b: EquivariantClass) -> EquivariantClass:
    """Split of ``[A x B]`` under the diagonal Z/2-action."""
    return EquivariantClass(
        a.plus * b.plus + a.minus * b.minus,
        a.plus * b.minus + a.minus * b.plus,
    )


def z2_power(x: EquivariantClass, n: int) -> EquivariantClass:
    """Split of ``[X^n]`` under the diagonal action, in closed form."""
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"z2_power needs a positive integer exponent, got {n!r}")
    t = x.total() ** n
    d = x.difference() ** n
    half = Fraction(1, 2)
    return EquivariantClass((t + d) * half, (t - d) * half)


def sum_polys(polys: Iterable[LaurentPoly]) -> LaurentPoly:
    total = ZERO
    for p in polys:
        total = total + p
    return total
