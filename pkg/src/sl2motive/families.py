"""Variety family descriptors, the text grammar for them, and Jordan-type puncture reduction.

Grammar (whitespace-free)::

    spec       := free | surface | twisted | abelian
    free       := "free:n=" INT [",punct=" plist]
    surface    := "surface:g=" INT [",punct=" plist]
    twisted    := "twisted:g=" INT ",r=" INT
    abelian    := ("abelian-sl2" | "abelian-gl2") ":n=" INT
    plist      := puncture ("," puncture)*
    puncture   := "J+" | "J-" | "-Id"

``twisted:g=G,r=R`` is shorthand for ``surface:g=G,punct=J+,...,J+,-Id`` with
``R`` copies of ``J+``; :func:`format_spec` always writes the long form.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from typing import Union

__all__ = [
    "PunctureClass",
    "Free",
    "Surface",
    "FreeParabolic",
    "SurfaceParabolic",
    "AbelianSL2",
    "AbelianGL2",
    "VarietySpec",
    "PunctureReduction",
    "twisted",
    "SpecSyntaxError",
    "jordan_reduce",
    "parse_spec",
    "format_spec",
    "GRAMMAR_HINT",
]

GRAMMAR_HINT = (
    "expected one of: free:n=N | free:n=N,punct=P,... | surface:g=G | "
    "surface:g=G,punct=P,... | twisted:g=G,r=R | abelian-sl2:n=N | abelian-gl2:n=N "
    "(punctures P are J+, J- or -Id)"
)


class SpecSyntaxError(ValueError):
    pass


class PunctureClass(str, Enum):
    """Conjugacy class prescribed at a puncture."""

    JPLUS = "J+"
    JMINUS = "J-"
    MINUS_ID = "-Id"

    def __str__(self) -> str:
        return self.value


def _check_punctures(punctures: tuple[PunctureClass, ...]) -> tuple[PunctureClass, ...]:
    punctures = tuple(PunctureClass(p) for p in punctures)
    if not punctures:
        raise ValueError("a parabolic family needs at least one puncture")
    return punctures


def _check_int(name: str, value: int, low: int) -> None:
    if not isinstance(value, int) or isinstance(value, bool) or value < low:
        raise ValueError(f"{name} must be an integer >= {low}, got {value!r}")


@dataclass(frozen=True)
class Free:
    """Representations of the free group on ``n`` generators."""

    n: int

    def __post_init__(self) -> None:
        _check_int("n", self.n, 1)


@dataclass(frozen=True)
class Surface:
    """Representations of the fundamental group of a closed genus-``g`` surface."""

    g: int

    def __post_init__(self) -> None:
        _check_int("g", self.g, 1)


@dataclass(frozen=True)
class FreeParabolic:
    """Free group on ``n + s`` generators, the last ``s`` sent into prescribed classes."""

    n: int
    punctures: tuple[PunctureClass, ...]

    def __post_init__(self) -> None:
        _check_int("n", self.n, 0)
        object.__setattr__(self, "punctures", _check_punctures(self.punctures))

    @property
    def s(self) -> int:
        return len(self.punctures)


@dataclass(frozen=True)
class SurfaceParabolic:
    """Genus-``g`` surface with ``s`` punctures whose loops land in prescribed classes."""

    g: int
    punctures: tuple[PunctureClass, ...]

    def __post_init__(self) -> None:
        _check_int("g", self.g, 1)
        object.__setattr__(self, "punctures", _check_punctures(self.punctures))

    @property
    def s(self) -> int:
        return len(self.punctures)


@dataclass(frozen=True)
class AbelianSL2:
    """Commuting ``n``-tuples in SL2."""

    n: int

    def __post_init__(self) -> None:
        _check_int("n", self.n, 1)


@dataclass(frozen=True)
class AbelianGL2:
    """Commuting ``n``-tuples in GL2."""

    n: int

    def __post_init__(self) -> None:
        _check_int("n", self.n, 1)


VarietySpec = Union[Free, Surface, FreeParabolic, SurfaceParabolic, AbelianSL2, AbelianGL2]


def twisted(g: int, r: int) -> SurfaceParabolic:
    """``r`` punctures of type J+ plus a single -Id puncture."""
    _check_int("r", r, 0)
    return SurfaceParabolic(g, (PunctureClass.JPLUS,) * r + (PunctureClass.MINUS_ID,))


@dataclass(frozen=True)
class PunctureReduction:
    r_plus: int
    r_minus: int
    t: int

    @property
    def r(self) -> int:
        return self.r_plus + self.r_minus

    @property
    def sigma(self) -> int:
        return -1 if (self.r_minus + self.t) % 2 else 1

    @property
    def twisted(self) -> bool:
        return self.sigma == -1


def jordan_reduce(punctures: tuple[PunctureClass, ...] | list[PunctureClass]) -> PunctureReduction:
    """Count puncture types.

    Since ``-J_-`` is conjugate to ``J_+`` and ``-Id`` is central, a list of
    Jordan-type punctures is equivalent to ``r`` punctures of type ``J_+``
    with the surface relation twisted by the sign ``sigma``.
    """
    kinds = [PunctureClass(p) for p in punctures]
    return PunctureReduction(
        r_plus=kinds.count(PunctureClass.JPLUS),
        r_minus=kinds.count(PunctureClass.JMINUS),
        t=kinds.count(PunctureClass.MINUS_ID),
    )


_SPEC = re.compile(r"^(?P<family>[a-z0-9-]+):(?P<body>.+)$")


def _parse_punctures(text: str) -> tuple[PunctureClass, ...]:
    if not text:
        raise SpecSyntaxError(f"empty puncture list; {GRAMMAR_HINT}")
    out = []
    for item in text.split(","):
        try:
            out.append(PunctureClass(item))
        except ValueError:
            raise SpecSyntaxError(f"unknown puncture {item!r}; {GRAMMAR_HINT}") from None
    return tuple(out)


def _parse_int(key: str, text: str) -> int:
    if not re.fullmatch(r"\d+", text):
        raise SpecSyntaxError(f"{key} must be a non-negative integer, got {text!r}; {GRAMMAR_HINT}")
    return int(text)


def parse_spec(text: str) -> VarietySpec:
    """Parse a family descriptor such as ``surface:g=2,punct=J+,J-,-Id``."""
    m = _SPEC.match(text.strip().replace(" ", ""))
    if m is None:
        raise SpecSyntaxError(f"cannot parse {text!r}; {GRAMMAR_HINT}")
    family, body = m.group("family"), m.group("body")
    punct: tuple[PunctureClass, ...] | None = None
    if ",punct=" in body:
        body, plist = body.split(",punct=", 1)
        punct = _parse_punctures(plist)
    params: dict[str, int] = {}
    for item in body.split(","):
        key, sep, value = item.partition("=")
        if not sep or key in params:
            raise SpecSyntaxError(f"bad parameter {item!r} in {text!r}; {GRAMMAR_HINT}")
        params[key] = _parse_int(key, value)

    def expect(*keys: str) -> None:
        if set(params) != set(keys):
            raise SpecSyntaxError(
                f"{family} takes parameters {', '.join(keys)}; got {', '.join(params) or 'none'}; {GRAMMAR_HINT}"
            )

    try:
        if family == "free":
            expect("n")
            return Free(params["n"]) if punct is None else FreeParabolic(params["n"], punct)
        if family == "surface":
            expect("g")
            return Surface(params["g"]) if punct is None else SurfaceParabolic(params["g"], punct)
        if punct is not None:
            raise SpecSyntaxError(f"{family} does not take punctures; {GRAMMAR_HINT}")
        if family == "twisted":
            expect("g", "r")
            return twisted(params["g"], params["r"])
        if family == "abelian-sl2":
            expect("n")
            return AbelianSL2(params["n"])
        if family == "abelian-gl2":
            expect("n")
            return AbelianGL2(params["n"])
    except SpecSyntaxError:
        raise
    except ValueError as exc:
        raise SpecSyntaxError(f"{exc}; {GRAMMAR_HINT}") from None
    raise SpecSyntaxError(f"unknown family {family!r}; {GRAMMAR_HINT}")


def format_spec(spec: VarietySpec) -> str:
    """Inverse of :func:`parse_spec` (twisted specs come back in long form)."""
    match spec:
        case Free(n):
            return f"free:n={n}"
        case Surface(g):
            return f"surface:g={g}"
        case FreeParabolic(n, punctures):
            return f"free:n={n},punct={','.join(p.value for p in punctures)}"
        case SurfaceParabolic(g, punctures):
            return f"surface:g={g},punct={','.join(p.value for p in punctures)}"
        case AbelianSL2(n):
            return f"abelian-sl2:n={n}"
        case AbelianGL2(n):
            return f"abelian-gl2:n={n}"
    raise TypeError(f"not a variety spec: {spec!r}")
