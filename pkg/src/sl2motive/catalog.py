"""Classes of SL2 representation varieties, their strata, and their character varieties.

Closed forms are kept verbatim as reference data; the same classes are
re-assembled from strata with the rules in :mod:`sl2motive.motive`, and the two
routes are compared by the test suite.  A few printed formulas are known to be
off; :func:`diagnostics` names them, and the corresponding ``printed_*``
functions keep the printed form available.

Every family is first normalised (see :func:`kernel_of`): Jordan-type
punctures collapse to ``r`` punctures of type J+, with the surface relation
twisted by ``sigma``.
"""

from __future__ import annotations

from enum import Enum
from fractions import Fraction
from typing import NamedTuple

from .families import (
    AbelianGL2,
    AbelianSL2,
    Free,
    FreeParabolic,
    Surface,
    SurfaceParabolic,
    VarietySpec,
    jordan_reduce,
)
from .motive import (
    Atom,
    CoreReplace,
    Disjoint,
    EvalTrace,
    Fibration,
    MotiveExpr,
    PrincipalQuotient,
    Z2Quotient,
    atom,
    evaluate_motive,
)
from .ring import EquivariantClass, LaurentPoly, ONE, ZERO, divide_exact, q, z2_power, z2_product

__all__ = [
    "StratumId",
    "NotTabulatedError",
    "Kernel",
    "kernel_of",
    "stratum_class",
    "stratum_motive",
    "representation_variety_class",
    "character_variety_class",
    "character_variety_via_strata",
    "assembly_motive",
    "helper_plane_class",
    "diagnostics",
    "printed_abelian_gl2",
    "printed_surface_reducible",
    "free_box",
    "surface_box",
    "free_parabolic_box",
    "surface_parabolic_box",
    "twisted_box",
    "twisted_representation",
    "SUSPECT_TWISTED",
]

HALF = Fraction(1, 2)
SL2 = q**3 - q
TORUS_INVERSION = EquivariantClass(q, -1)  # C* with t -> 1/t; C*/Z2 = C via t + 1/t
TORUS_PAIR_SWAP = EquivariantClass(q**2 - q, 1 - q)  # (C*)^2 with swap; quotient C x C*
SL2_MOD_TORUS_WEYL = EquivariantClass(q**2, q)  # SL2/T; quotient by Weyl is P^2 minus a conic

SUSPECT_TWISTED = "suspect at r=0, g=1"


class NotTabulatedError(LookupError):
    pass


class StratumId(str, Enum):
    IRR = "Irr"
    UPSILON_HAT = "UpsilonHat"
    DELTA_HAT = "DeltaHat"
    IOTA = "Iota"
    VARRHO = "Varrho"
    RED = "Red"

    def __str__(self) -> str:
        return self.value


PRIMARY_STRATA = (StratumId.IRR, StratumId.UPSILON_HAT, StratumId.DELTA_HAT, StratumId.IOTA, StratumId.VARRHO)
REDUCIBLE_STRATA = PRIMARY_STRATA[1:]


class Kernel(NamedTuple):
    """Normalised family: ``kind`` plus up to two integer parameters."""

    kind: str
    a: int = 0
    b: int = 0


def kernel_of(spec: VarietySpec) -> Kernel:
    match spec:
        case Free(n):
            return Kernel("free", n)
        case Surface(g):
            return Kernel("surface", g)
        case FreeParabolic(n, punctures):
            # No relation on a free group, so only the J+/J- count matters.
            r = jordan_reduce(punctures).r
            if r:
                return Kernel("free_parabolic", n, r)
            return Kernel("free", n) if n else Kernel("point")
        case SurfaceParabolic(g, punctures):
            red = jordan_reduce(punctures)
            if red.twisted:
                return Kernel("twisted", g, red.r)
            return Kernel("surface_parabolic", g, red.r) if red.r else Kernel("surface", g)
        case AbelianSL2(n):
            return Kernel("abelian_sl2", n)
        case AbelianGL2(n):
            return Kernel("abelian_gl2", n)
    raise TypeError(f"not a variety spec: {spec!r}")


def _integral(p: LaurentPoly, what: str) -> LaurentPoly:
    if not p.is_integral():
        raise ArithmeticError(f"{what} has non-integral coefficients: {p}")
    return p


# -- helper classes ---------------------------------------------------------


def helper_plane_class(kind: str, s: int, g: int | None = None) -> LaurentPoly:
    """Classes of the affine pieces cut out by the surface relation.

    ``pi_s``: ``{c_1 + ... + c_s = 0, all c_j != 0}``.
    ``Pi_s``: the same hyperplane condition with ``2g`` extra free coordinates
    entering through a nonzero linear form.
    """
    if s < 1:
        raise ValueError("s must be >= 1")
    if kind == "pi_s":
        sign = -1 if s % 2 else 1
        return sign * (divide_exact((1 - q) ** s - 1, q) + 1)
    if kind == "Pi_s":
        if g is None or g < 1:
            raise ValueError("Pi_s needs a genus g >= 1")
        return q ** (2 * g - 1) * (q - 1) ** s
    raise ValueError(f"unknown helper class {kind!r}")


# -- free groups ------------------------------------------------------------


def _free_upsilon(n: int) -> LaurentPoly:
    return 2**n * (q**2 - 1) * divide_exact(q**n - 1, q - 1)


def _free_delta(n: int) -> LaurentPoly:
    return SL2 * HALF * ((q - 1) ** (n - 1) + (q + 1) ** (n - 1)) - 2**n * q**2


def _free_varrho(n: int) -> LaurentPoly:
    return divide_exact(SL2, (q - 1) * q) * ((q - 1) ** n - 2**n) * (q**n - q)


def _free_irr(n: int) -> LaurentPoly:
    return (
        2**n * q**2
        - HALF * SL2 * ((q + 1) ** (n - 1) + (q - 1) ** (n - 1))
        - (2**n * q + (q - 1) ** n * q**n - (q - 1) ** n * q - 2**n) * (q + 1)
        - 2**n
        + SL2**n
    )


def free_box(n: int) -> LaurentPoly:
    return (
        HALF * (q + 1) ** (n - 1) * q
        + HALF * (q - 1) ** (n - 1) * q
        - (q - 1) ** (n - 1) * q ** (n - 1)
        + SL2 ** (n - 1)
    )


# -- closed surfaces --------------------------------------------------------


def _surface_varrho(g: int) -> LaurentPoly:
    return divide_exact(SL2, (q - 1) * q) * ((q - 1) ** (2 * g) - 2 ** (2 * g)) * (q ** (2 * g - 1) - q)


def _surface_total(g: int) -> LaurentPoly:
    k = 2 * g - 1
    return (
        2**k * (q - 1) ** k * (q + 1) * q**k
        + 2**k * (q + 1) ** k * (q - 1) * q**k
        + HALF * (q + 1) ** k * (q - 1) ** 2 * q**k
        + HALF * (q - 1) ** k * (q + 1) * (q - 3) * q**k
        + (q + q**k) * (q**2 - 1) ** k
    )


def printed_surface_reducible(g: int) -> LaurentPoly:
    """The reducible-locus class for closed surfaces, as printed.

    Its last term reads ``-2^{2g}(q^2 - 1)``; the four reducible strata
    actually sum to the same expression with ``+2^{2g}(q^2 - 1)q^{2g-1}``.
    Kept for reference only; never used to build other classes.
    """
    return (
        (q + 1) * (q - 1) ** (2 * g) * (q ** (2 * g - 1) - q)
        + SL2 * HALF * ((q - 1) ** (2 * g - 1) + (q + 1) ** (2 * g - 1))
        - 2 ** (2 * g) * (q**2 - 1)
    )


def surface_box(g: int) -> LaurentPoly:
    m = 2 * g - 2
    return (
        HALF * ((2 ** (2 * g) + 2 * (q - 1) ** m + q - 1) * q**m + q**2 + 2 * (q - 1) ** m + q) * (q + 1) ** m
        + HALF * ((2 ** (2 * g) - 1) * (q - 1) ** m - (q - 1) ** m * q - 2 ** (2 * g + 1)) * q**m
        + HALF * (q - 1) ** (2 * g - 1) * q
    )


# -- free groups with J+ punctures -----------------------------------------


def _fp_upsilon(n: int, s: int) -> LaurentPoly:
    return 2**n * (q**2 - 1) * q**n * (q - 1) ** (s - 1)


def _fp_varrho(n: int, s: int) -> LaurentPoly:
    return divide_exact(SL2, (q - 1) * q) * ((q - 1) ** n - 2**n) * q**n * (q - 1) ** s


def _fp_irr(n: int, s: int) -> LaurentPoly:
    return (q - 1) ** n * (q - 1) ** s * ((q**2 + q) ** n * (q + 1) ** s - (q + 1) * q**n)


def _fp_total(n: int, s: int) -> LaurentPoly:
    return SL2**n * (q**2 - 1) ** s


def free_parabolic_box(n: int, s: int) -> LaurentPoly:
    # (q^3 - q)^(n-1) written as a division so that n = 0 stays exact
    return 2**n * (q - 1) ** s * q ** (n - 1) + divide_exact(SL2**n * (q**2 - 1) ** s, SL2)


# -- surfaces with J+ punctures --------------------------------------------


def _sp_upsilon(g: int, s: int) -> LaurentPoly:
    return 2 ** (2 * g) * (q**2 - 1) * divide_exact(q ** (2 * g) * helper_plane_class("pi_s", s), q - 1)


def _sp_varrho(g: int, s: int) -> LaurentPoly:
    return divide_exact(SL2, (q - 1) * q) * ((q - 1) ** (2 * g) - 2 ** (2 * g)) * helper_plane_class("Pi_s", s, g)


def _sp_total(g: int, s: int) -> LaurentPoly:
    k = 2 * g + s - 1
    sign = -1 if s % 2 else 1
    return (
        (q**2 - 1) ** k * q ** (2 * g - 1)
        + HALF * (q - 1) ** k * q ** (2 * g - 1) * (q + 1) * (2 ** (2 * g) + q - 3)
        + sign * HALF * (q + 1) ** k * q ** (2 * g - 1) * (q - 1) * (2 ** (2 * g) + q - 1)
    )


def _sp_irr(g: int, s: int) -> LaurentPoly:
    sign = -1 if s % 2 else 1
    k = 2 * g + s - 1
    bracket = divide_exact((1 - q) ** s - 1, q) + 1
    last = divide_exact(
        (2 ** (2 * g) * q**2 + 2 ** (2 * g + 1) * q + 2 ** (2 * g) + 2 * (q + 1) ** (2 * g + s))
        * (q - 1) ** k
        * q ** (2 * g - 1),
        2 * (q + 1),
    )
    return (
        2 ** (2 * g - 1) * sign * (q + 1) ** k * (q - 1) * q ** (2 * g - 1)
        - 2 ** (2 * g) * sign * (q + 1) * q ** (2 * g) * bracket
        + HALF * sign * (q + 1) ** k * (q - 1) ** 2 * q ** (2 * g - 1)
        + (2 ** (2 * g) - (q - 1) ** (2 * g)) * (q - 1) ** s * (q + 1) * q ** (2 * g - 1)
        + HALF * (q - 1) ** k * (q + 1) * (q - 3) * q ** (2 * g - 1)
        + last
    )


def surface_parabolic_box(g: int, s: int) -> LaurentPoly:
    """Character-variety class for J+ punctures, exactly as printed.

    For odd ``s`` this disagrees with the sum of the printed irreducible and
    reducible quotient classes (the last term is missing a factor ``(-1)^s``);
    see :func:`diagnostics`.
    """
    m = 2 * g + s - 2
    sign = -1 if s % 2 else 1
    return (
        (q**2 - 1) ** m * q ** (2 * g - 2)
        + sign * 2 ** (2 * g) * (q - 1) * q ** (2 * g - 2) * (1 - (1 - q) ** (s - 1))
        + HALF * (q - 1) ** m * q ** (2 * g - 2) * (2 ** (2 * g) + q - 3)
        + HALF * (q + 1) ** m * q ** (2 * g - 2) * (2 ** (2 * g) + q - 1)
    )


# -- twisted surfaces -------------------------------------------------------


def twisted_representation(g: int, r: int) -> LaurentPoly:
    k = 2 * g + r - 1
    sign = 1 if (r + 1) % 2 == 0 else -1
    return (q - 1) ** k * (q + 1) * q ** (2 * g - 1) * ((q + 1) ** (2 * g + r - 2) + 2 ** (2 * g - 1) - 1) + (
        sign * 2 ** (2 * g - 1) * (q + 1) ** k * (q - 1) * q ** (2 * g - 1)
    )


def twisted_box(g: int, r: int) -> LaurentPoly:
    m = 2 * g + r - 2
    sign = 1 if (r - 1) % 2 == 0 else -1
    return sign * 2 ** (2 * g - 1) * (q + 1) ** m * q ** (2 * g - 2) + (q - 1) ** m * q ** (2 * g - 2) * (
        (q + 1) ** m + 2 ** (2 * g - 1) - 1
    )


# -- abelian ----------------------------------------------------------------


def _abelian_sl2_box(n: int) -> LaurentPoly:
    return HALF * ((q - 1) ** n + (q + 1) ** n)


def printed_abelian_gl2(n: int) -> LaurentPoly:
    """The abelian GL2 quotient class as printed; fails the orbit count (see diagnostics)."""
    return HALF * ((q - 1) ** (2 * n) + (q + 1) ** (2 * n))


def _abelian_gl2_derived(n: int) -> LaurentPoly:
    return z2_power(TORUS_PAIR_SWAP, n).plus


# -- dispatch ---------------------------------------------------------------


def _strata_table(k: Kernel) -> dict[StratumId, LaurentPoly]:
    kind, a, b = k
    if kind == "free":
        return {
            StratumId.IRR: _free_irr(a),
            StratumId.UPSILON_HAT: _free_upsilon(a),
            StratumId.DELTA_HAT: _free_delta(a),
            StratumId.IOTA: LaurentPoly.constant(2**a),
            StratumId.VARRHO: _free_varrho(a),
        }
    if kind == "surface":
        table = {
            StratumId.UPSILON_HAT: _free_upsilon(2 * a),
            StratumId.DELTA_HAT: _free_delta(2 * a),
            StratumId.IOTA: LaurentPoly.constant(2 ** (2 * a)),
            StratumId.VARRHO: _surface_varrho(a),
        }
        # No usable printed display for this one (see printed_surface_reducible).
        table[StratumId.IRR] = _surface_total(a) - sum(table.values(), ZERO)
        return table
    if kind == "free_parabolic":
        return {
            StratumId.IRR: _fp_irr(a, b),
            StratumId.UPSILON_HAT: _fp_upsilon(a, b),
            StratumId.DELTA_HAT: ZERO,
            StratumId.IOTA: ZERO,
            StratumId.VARRHO: _fp_varrho(a, b),
        }
    if kind == "surface_parabolic":
        return {
            StratumId.IRR: _sp_irr(a, b),
            StratumId.UPSILON_HAT: _sp_upsilon(a, b),
            StratumId.DELTA_HAT: ZERO,
            StratumId.IOTA: ZERO,
            StratumId.VARRHO: _sp_varrho(a, b),
        }
    if kind == "twisted":
        return {
            StratumId.IRR: twisted_representation(a, b),
            StratumId.UPSILON_HAT: ZERO,
            StratumId.DELTA_HAT: ZERO,
            StratumId.IOTA: ZERO,
            StratumId.VARRHO: ZERO,
        }
    if kind == "abelian_sl2":
        # Commuting tuples are reducible, and a matrix with distinct eigenvalues
        # only commutes with diagonal ones, so the non-split stratum is empty.
        return {
            StratumId.IRR: ZERO,
            StratumId.UPSILON_HAT: _free_upsilon(a),
            StratumId.DELTA_HAT: _free_delta(a),
            StratumId.IOTA: LaurentPoly.constant(2**a),
            StratumId.VARRHO: ZERO,
        }
    if kind == "point":
        return {s: (ONE if s is StratumId.IOTA else ZERO) for s in PRIMARY_STRATA}
    raise NotTabulatedError(f"not tabulated: strata of {kind}")


def stratum_class(spec: VarietySpec, stratum: StratumId | str) -> LaurentPoly:
    stratum = StratumId(stratum)
    table = _strata_table(kernel_of(spec))
    if stratum is StratumId.RED:
        value = sum((table[s] for s in REDUCIBLE_STRATA), ZERO)
    else:
        value = table[stratum]
    return _integral(value, f"stratum {stratum}")


def representation_variety_class(spec: VarietySpec) -> LaurentPoly:
    kind, a, b = k = kernel_of(spec)
    if kind == "free":
        value = SL2**a
    elif kind == "surface":
        value = _surface_total(a)
    elif kind == "free_parabolic":
        value = _fp_total(a, b)
    elif kind == "surface_parabolic":
        value = _sp_total(a, b)
    elif kind == "twisted":
        value = twisted_representation(a, b)
    elif kind in ("abelian_sl2", "point"):
        value = sum(_strata_table(k).values(), ZERO)
    else:
        raise NotTabulatedError(f"not tabulated: representation variety of {kind}")
    return _integral(value, "representation variety class")


def character_variety_class(spec: VarietySpec) -> LaurentPoly:
    """The closed-form class of the character variety."""
    kind, a, b = kernel_of(spec)
    if kind == "free":
        value = free_box(a)
    elif kind == "surface":
        value = surface_box(a)
    elif kind == "free_parabolic":
        value = free_parabolic_box(a, b)
    elif kind == "surface_parabolic":
        value = surface_parabolic_box(a, b)
    elif kind == "twisted":
        value = twisted_box(a, b)
    elif kind == "abelian_sl2":
        value = _abelian_sl2_box(a)
    elif kind == "abelian_gl2":
        value = _abelian_gl2_derived(a)
    else:
        value = ONE
    return _integral(value, "character variety class")


# -- motive assembly --------------------------------------------------------


def _node(label: str, value: LaurentPoly) -> MotiveExpr:
    """An atom, or the empty union when the class vanishes."""
    return Atom(label, value) if value else Disjoint(())


def _diagonal_core(n: int, label: str) -> CoreReplace:
    return CoreReplace(
        "reducible locus",
        Z2Quotient(z2_power(TORUS_INVERSION, n), label),
        "orbit closures of reducible tuples meet the diagonal tuples in one Weyl orbit",
    )


def assembly_motive(spec: VarietySpec) -> MotiveExpr:
    """Motive expression computing the character variety from the strata."""
    kind, a, b = k = kernel_of(spec)
    if kind == "point":
        return atom("point")
    if kind == "abelian_gl2":
        return CoreReplace(
            "commuting pairs",
            Z2Quotient(z2_power(TORUS_PAIR_SWAP, a), f"(C*)^{2 * a} mod swap"),
            "commuting tuples degenerate to diagonal ones, unique up to eigenvalue swap",
        )
    if kind == "abelian_sl2":
        return _diagonal_core(a, f"(C*)^{a} mod inversion")
    table = _strata_table(k)
    irr = PrincipalQuotient(_node("irreducible", table[StratumId.IRR]), atom("PGL2"))
    if kind == "free":
        return Disjoint((_diagonal_core(a, f"(C*)^{a} mod inversion"), irr))
    if kind == "surface":
        return Disjoint((_diagonal_core(2 * a, f"(C*)^{2 * a} mod inversion"), irr))
    if kind == "twisted":
        return irr
    # Parabolic J+ families: the reducible locus has closed orbits, so it is
    # divided stratum by stratum by the orbit type.
    reducible = Disjoint(
        (
            PrincipalQuotient(_node("upsilon-hat", table[StratumId.UPSILON_HAT]), atom("SL2_mod_StabJplus")),
            PrincipalQuotient(_node("varrho", table[StratumId.VARRHO]), atom("PGL2")),
        )
    )
    return Disjoint((reducible, irr))


def character_variety_via_strata(spec: VarietySpec) -> tuple[LaurentPoly, EvalTrace]:
    value, trace = evaluate_motive(assembly_motive(spec))
    return _integral(value, "assembled character variety class"), trace


def stratum_motive(spec: VarietySpec, stratum: StratumId | str) -> MotiveExpr:
    """Geometric description of a reducible stratum as fibrations and quotients.

    Independent of the transcribed closed forms: built from the normal forms
    of reducible tuples (sign choices, projectivised off-diagonal entries,
    diagonal entries modulo the Weyl group, and so on).
    """
    stratum = StratumId(stratum)
    kind, a, b = kernel_of(spec)
    if kind not in ("free", "surface", "free_parabolic", "surface_parabolic", "abelian_sl2"):
        raise NotTabulatedError(f"not tabulated: stratum motive for {kind}")
    if stratum not in REDUCIBLE_STRATA:
        raise NotTabulatedError(f"not tabulated: motive of stratum {stratum}")
    n = 2 * a if kind in ("surface", "surface_parabolic") else a  # generators not at punctures
    parabolic = kind in ("free_parabolic", "surface_parabolic")

    if stratum is StratumId.IOTA:
        return Disjoint(()) if parabolic else Atom("central tuples", LaurentPoly.constant(2**n))
    if stratum is StratumId.DELTA_HAT:
        if parabolic:
            return Disjoint(())
        off_centre = z2_power(TORUS_INVERSION, n) - EquivariantClass.trivial(2**n)
        return Z2Quotient(z2_product(SL2_MOD_TORUS_WEYL, off_centre), "(SL2/T x eigenvalues) mod Weyl")

    if stratum is StratumId.UPSILON_HAT:
        if kind == "surface_parabolic":
            offdiag: MotiveExpr = Fibration(Atom("C^2g", q**n), _node("pi_s", helper_plane_class("pi_s", b)))
        elif kind == "free_parabolic":
            offdiag = Atom("C^n x (C*)^s", q**n * (q - 1) ** b)
        else:
            offdiag = Atom("C^n minus origin", q**n - 1)
        projective = PrincipalQuotient(offdiag, atom("torus"))
        return Fibration(atom("SL2_mod_StabJplus"), Fibration(Atom("sign choices", LaurentPoly.constant(2**n)), projective))

    # VARRHO: PGL2 x (eigenvalues, off-diagonal entries) -> stratum, fiber C* x C
    if kind == "abelian_sl2":
        return Disjoint(())
    eigen = _node("non-central eigenvalues", (q - 1) ** n - 2**n)
    if kind == "free":
        off = _node("C^n minus a line", q**n - q)
    elif kind == "surface":
        off = _node("hyperplane minus a line", q ** (n - 1) - q)
    elif kind == "free_parabolic":
        off = Atom("C^n x (C*)^s", q**n * (q - 1) ** b)
    else:
        off = Atom("Pi_s", helper_plane_class("Pi_s", b, a))
    return PrincipalQuotient(Fibration(atom("PGL2"), Fibration(eigen, off)), Atom("C* x C", (q - 1) * q))


# -- diagnostics ------------------------------------------------------------


def diagnostics(spec: VarietySpec) -> list[str]:
    """Known caveats attached to a family's printed formulas."""
    kind, a, b = kernel_of(spec)
    notes: list[str] = []
    if kind == "twisted" and a == 1 and b == 0:
        notes.append(
            f"{SUSPECT_TWISTED}: the printed twisted formula gives 0, but {{[A,B] = -Id}} "
            "is a single free PGL2-orbit (class q^3 - q)"
        )
    if isinstance(spec, FreeParabolic) and spec.n == 0:
        notes.append("boundary parameter n=0: formulas evaluated as printed outside the stratified derivation")
    if kind == "abelian_gl2":
        notes.append(
            f"printed abelian-GL2 formula {printed_abelian_gl2(a)} disagrees with the Z/2 orbit count; "
            f"returning the derived form {_abelian_gl2_derived(a)}"
        )
    if kind == "surface_parabolic" and b % 2:
        assembled = divide_exact(_sp_irr(a, b), SL2) + divide_exact(_sp_upsilon(a, b), q**2 - 1)
        assembled = assembled + divide_exact(_sp_varrho(a, b), SL2)
        notes.append(
            f"printed surface-parabolic box disagrees with the stratum assembly for odd s "
            f"(assembled value: {assembled})"
        )
    return notes
