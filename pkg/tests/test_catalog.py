from __future__ import annotations

from itertools import permutations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from sl2motive import catalog
from sl2motive.catalog import (
    PRIMARY_STRATA,
    REDUCIBLE_STRATA,
    SUSPECT_TWISTED,
    NotTabulatedError,
    StratumId,
    character_variety_class,
    character_variety_via_strata,
    diagnostics,
    helper_plane_class,
    kernel_of,
    representation_variety_class,
    stratum_class,
    stratum_motive,
)
from sl2motive.families import (
    AbelianGL2,
    AbelianSL2,
    Free,
    FreeParabolic,
    PunctureClass,
    Surface,
    SurfaceParabolic,
    twisted,
)
from sl2motive.motive import evaluate_motive
from sl2motive.ring import ZERO, EquivariantClass, LaurentPoly, parse_poly, q, z2_power

JP, JM, MI = PunctureClass.JPLUS, PunctureClass.JMINUS, PunctureClass.MINUS_ID
SL2 = q**3 - q


def parabolic_specs():
    yield from (FreeParabolic(n, (JP,) * s) for n in range(1, 5) for s in range(1, 5))
    yield from (SurfaceParabolic(g, (JP,) * s) for g in range(1, 4) for s in range(1, 5))


def all_specs():
    yield from (Free(n) for n in range(1, 7))
    yield from (Surface(g) for g in range(1, 5))
    yield from parabolic_specs()


def test_free_n1_strata():
    values = {s: stratum_class(Free(1), s) for s in PRIMARY_STRATA}
    assert values == {
        StratumId.IOTA: LaurentPoly.constant(2),
        StratumId.UPSILON_HAT: 2 * (q**2 - 1),
        StratumId.DELTA_HAT: q**3 - 2 * q**2 - q,
        StratumId.VARRHO: ZERO,
        StratumId.IRR: ZERO,
    }


@pytest.mark.parametrize("n, s", [(n, s) for n in range(0, 4) for s in range(1, 4)])
def test_parabolic_has_no_split_or_central_part(n, s):
    assert stratum_class(FreeParabolic(n, (JP,) * s), "DeltaHat") == ZERO
    assert stratum_class(FreeParabolic(n, (JP,) * s), "Iota") == ZERO


def test_surface_parabolic_varrho_g1_s1():
    expected = (q + 1) * ((q - 1) ** 2 - 4) * q * (q - 1)
    assert stratum_class(SurfaceParabolic(1, (JP,)), "Varrho") == expected


def test_representation_examples():
    assert representation_variety_class(Free(2)) == SL2**2
    assert representation_variety_class(Surface(1)) == q * (q**2 - 1) * (q + 4)
    assert representation_variety_class(twisted(1, 1)) == (q - 1) ** 2 * (q + 1) * q * (q + 2) + 2 * q * (q + 1) ** 2 * (q - 1)
    assert representation_variety_class(SurfaceParabolic(1, (JP,))) == q * (q + 1) ** 2 * (q - 1) * (q - 3)


def test_character_examples():
    assert character_variety_class(Free(1)) == q
    assert character_variety_class(Free(2)) == q**3
    assert character_variety_class(Surface(1)) == q**2 + 1
    assert character_variety_class(Surface(1)) == z2_power(EquivariantClass(q, -1), 2).plus
    assert character_variety_class(FreeParabolic(1, (JP,))) == (q - 1) * (q + 3)
    for n in range(1, 7):
        assert character_variety_class(AbelianSL2(n)) == ((q - 1) ** n + (q + 1) ** n) / 2


def test_free_n2_assembly_trace():
    value, trace = character_variety_via_strata(Free(2))
    assert value == q**3
    rules = trace.rules()
    assert "core" in rules and "principal_quotient" in rules and "z2_quotient" in rules


@pytest.mark.parametrize("spec", list(all_specs()), ids=str)
def test_stratum_sum_identity(spec):
    total = sum((stratum_class(spec, s) for s in PRIMARY_STRATA), ZERO)
    assert total == representation_variety_class(spec)
    assert stratum_class(spec, "Red") == total - stratum_class(spec, "Irr")


@pytest.mark.parametrize("spec", list(all_specs()), ids=str)
def test_reducible_strata_match_geometric_motives(spec):
    for stratum in REDUCIBLE_STRATA:
        value, trace = evaluate_motive(stratum_motive(spec, stratum))
        assert value == stratum_class(spec, stratum), stratum


@pytest.mark.parametrize("spec", [s for s in all_specs() if not (isinstance(s, SurfaceParabolic) and s.s % 2)], ids=str)
def test_assembly_matches_closed_form(spec):
    assert character_variety_via_strata(spec)[0] == character_variety_class(spec)


@pytest.mark.parametrize("g, s", [(g, s) for g in range(1, 4) for s in (1, 3)])
def test_odd_puncture_surface_box_is_flagged(g, s):
    spec = SurfaceParabolic(g, (JP,) * s)
    assembled, _ = character_variety_via_strata(spec)
    notes = diagnostics(spec)
    assert assembled != character_variety_class(spec)
    assert any(f"assembled value: {assembled}" in n for n in notes)
    # the difference is exactly the sign of the last printed term
    m = 2 * g + s - 2
    last = (q + 1) ** m * q ** (2 * g - 2) * (2 ** (2 * g) + q - 1) / 2
    assert character_variety_class(spec) - assembled == 2 * last


def test_surface_parabolic_g1_s1_assembled_value():
    assembled, _ = character_variety_via_strata(SurfaceParabolic(1, (JP,)))
    assert assembled == q**2 - 2 * q - 3
    assert character_variety_class(SurfaceParabolic(1, (JP,))) == 2 * q**2 + 2 * q


def test_printed_surface_reducible_differs_from_strata_sum():
    for g in range(1, 5):
        red = stratum_class(Surface(g), "Red")
        printed = catalog.printed_surface_reducible(g)
        assert red - printed == 2 ** (2 * g) * (q**2 - 1) * (q ** (2 * g - 1) + 1)


def test_twisted_box_and_representation():
    for g in range(1, 4):
        for r in range(0, 4):
            rep = representation_variety_class(twisted(g, r))
            assert rep == SL2 * character_variety_class(twisted(g, r))
            assert character_variety_via_strata(twisted(g, r))[0] == character_variety_class(twisted(g, r))
    assert character_variety_class(twisted(1, 0)) == ZERO
    assert any(n.startswith(SUSPECT_TWISTED) for n in diagnostics(twisted(1, 0)))
    assert not any(n.startswith(SUSPECT_TWISTED) for n in diagnostics(twisted(1, 1)))


def test_abelian_gl2_derived_and_printed():
    for n in range(1, 6):
        derived = ((q - 1) ** (2 * n) + (q**2 - 1) ** n) / 2
        assert character_variety_class(AbelianGL2(n)) == derived
        assert catalog.printed_abelian_gl2(n) == ((q - 1) ** (2 * n) + (q + 1) ** (2 * n)) / 2
    assert character_variety_class(AbelianGL2(1)) == q**2 - q
    assert character_variety_via_strata(AbelianGL2(2))[0] == character_variety_class(AbelianGL2(2))
    assert diagnostics(AbelianGL2(1))
    with pytest.raises(NotTabulatedError, match="not tabulated"):
        stratum_class(AbelianGL2(1), "Irr")
    with pytest.raises(NotTabulatedError):
        representation_variety_class(AbelianGL2(1))


def test_abelian_sl2_strata():
    for n in range(1, 5):
        spec = AbelianSL2(n)
        assert stratum_class(spec, "Varrho") == ZERO and stratum_class(spec, "Irr") == ZERO
        assert character_variety_via_strata(spec)[0] == character_variety_class(spec)
    assert representation_variety_class(AbelianSL2(2)) == representation_variety_class(Surface(1))


def test_helper_plane_examples():
    assert helper_plane_class("pi_s", 1) == ZERO
    assert helper_plane_class("pi_s", 2) == q - 1
    assert helper_plane_class("Pi_s", 1, 1) == q * (q - 1)
    with pytest.raises(ValueError):
        helper_plane_class("pi_s", 0)
    with pytest.raises(ValueError):
        helper_plane_class("Pi_s", 2)
    with pytest.raises(ValueError):
        helper_plane_class("rho", 2)


@pytest.mark.parametrize("s", range(2, 9))
def test_helper_plane_recursions(s):
    assert helper_plane_class("pi_s", s) == (q - 1) ** (s - 1) - helper_plane_class("pi_s", s - 1)
    for g in range(1, 4):
        assert helper_plane_class("Pi_s", s, g) == q ** (2 * g) * (q - 1) ** (s - 1) - helper_plane_class("Pi_s", s - 1, g)


@pytest.mark.parametrize("spec", list(all_specs()) + [twisted(g, r) for g in (1, 2) for r in range(4)], ids=str)
def test_integrality(spec):
    values = [character_variety_class(spec), representation_variety_class(spec)]
    values += [stratum_class(spec, s) for s in PRIMARY_STRATA]
    for v in values:
        assert v.is_integral() and v.is_polynomial()


def test_jordan_normalisation():
    base = SurfaceParabolic(2, (JP, JP))
    for order in set(permutations((JP, JM, MI))):
        assert kernel_of(SurfaceParabolic(2, order)) == kernel_of(base)
        assert character_variety_class(SurfaceParabolic(2, order)) == character_variety_class(base)
    assert kernel_of(SurfaceParabolic(1, (MI, MI))) == kernel_of(Surface(1))
    assert kernel_of(SurfaceParabolic(1, (JM,))) == kernel_of(twisted(1, 1))
    assert kernel_of(FreeParabolic(2, (MI,))) == kernel_of(Free(2))
    assert kernel_of(FreeParabolic(2, (JM, JM, MI))) == kernel_of(FreeParabolic(2, (JP, JP)))
    assert kernel_of(FreeParabolic(0, (MI,))).kind == "point"
    assert character_variety_class(FreeParabolic(0, (MI,))) == 1


@given(st.integers(1, 3), st.lists(st.sampled_from(list(PunctureClass)), min_size=1, max_size=4), st.randoms())
def test_puncture_order_irrelevant(g, punctures, rnd):
    shuffled = list(punctures)
    rnd.shuffle(shuffled)
    a, b = SurfaceParabolic(g, tuple(punctures)), SurfaceParabolic(g, tuple(shuffled))
    assert character_variety_class(a) == character_variety_class(b)
    assert representation_variety_class(a) == representation_variety_class(b)


def test_free_parabolic_boundary_note():
    spec = FreeParabolic(0, (JP, JP))
    assert any("n=0" in n for n in diagnostics(spec))
    assert character_variety_class(spec) == 2 * q - 2


def test_stratum_motive_rejects_irreducible():
    with pytest.raises(NotTabulatedError):
        stratum_motive(Free(2), "Irr")
    with pytest.raises(NotTabulatedError):
        stratum_motive(twisted(1, 1), "Varrho")


def test_class_strings_round_trip():
    for spec in all_specs():
        value = character_variety_class(spec)
        assert parse_poly(str(value)) == value
