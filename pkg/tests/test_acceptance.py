"""One test per acceptance criterion; each records a PASS/FAIL line.

Tolerances are exact equality throughout; the wall-clock limits are part of
each criterion.
"""

from __future__ import annotations

import io
import random
import time
from fractions import Fraction

from hypothesis import given, settings

from sl2motive import catalog
from sl2motive.catalog import PRIMARY_STRATA, SUSPECT_TWISTED
from sl2motive.cli import run
from sl2motive.families import AbelianGL2, Free, FreeParabolic, Surface, SurfaceParabolic, format_spec, twisted
from sl2motive.ff_oracle import (
    classify_tuple,
    count_free,
    count_surface,
    count_z2_torus_quotient,
    enumerate_sl2,
    verify,
)
from sl2motive.ring import EquivariantClass, q, z2_power, z2_product

from .conftest import ACCEPTANCE_LINES
from .strategies import equivariant, polys

H = Fraction(1, 2)
JP = ("J+",)


def record(number: int, title: str, ok: bool, elapsed: float, detail: str = "") -> None:
    line = f"{'PASS' if ok else 'FAIL'} criterion {number:>2}: {title} ({elapsed:.2f}s)"
    if detail:
        line += f" -- {detail}"
    print(line)
    ACCEPTANCE_LINES.append(line)


# Closed forms typed out numerically, independent of the catalog's polynomial code.
def free_box(n, x):
    return H * (x + 1) ** (n - 1) * x + H * (x - 1) ** (n - 1) * x - (x - 1) ** (n - 1) * x ** (n - 1) + (x**3 - x) ** (n - 1)


def surface_box(g, x):
    m = 2 * g - 2
    return (
        H * ((2 ** (2 * g) + 2 * (x - 1) ** m + x - 1) * x**m + x**2 + 2 * (x - 1) ** m + x) * (x + 1) ** m
        + H * ((2 ** (2 * g) - 1) * (x - 1) ** m - (x - 1) ** m * x - 2 ** (2 * g + 1)) * x**m
        + H * (x - 1) ** (2 * g - 1) * x
    )


def free_parabolic_box(n, s, x):
    return 2**n * (x - 1) ** s * x ** (n - 1) + (x**3 - x) ** (n - 1) * (x**2 - 1) ** s


def surface_parabolic_box(g, s, x):
    m = 2 * g + s - 2
    return (
        (x**2 - 1) ** m * x ** (2 * g - 2)
        + (-1) ** s * 2 ** (2 * g) * (x - 1) * x ** (2 * g - 2) * (1 - (1 - x) ** (s - 1))
        + H * (x - 1) ** m * x ** (2 * g - 2) * (2 ** (2 * g) + x - 3)
        + H * (x + 1) ** m * x ** (2 * g - 2) * (2 ** (2 * g) + x - 1)
    )


def twisted_box(g, r, x):
    m = 2 * g + r - 2
    return (-1) ** ((r - 1) % 2) * 2 ** (2 * g - 1) * (x + 1) ** m * x ** (2 * g - 2) + (x - 1) ** m * x ** (2 * g - 2) * (
        (x + 1) ** m + 2 ** (2 * g - 1) - 1
    )


SAMPLES = [Fraction(k) for k in range(2, 64)]  # more points than any degree involved


def _same_polynomial(poly, fn) -> bool:
    return all(poly(x) == fn(x) for x in SAMPLES)


def test_criterion_01_boxed_formula_fidelity():
    t0 = time.perf_counter()
    bad = []
    cases = (
        [(Free(n), lambda x, n=n: free_box(n, Fraction(x))) for n in range(1, 7)]
        + [(Surface(g), lambda x, g=g: surface_box(g, x)) for g in range(1, 5)]
        + [(FreeParabolic(n, JP * s), lambda x, n=n, s=s: free_parabolic_box(n, s, x)) for n in range(1, 5) for s in range(1, 5)]
        + [(SurfaceParabolic(g, JP * s), lambda x, g=g, s=s: surface_parabolic_box(g, s, x)) for g in range(1, 4) for s in range(1, 5)]
        + [(twisted(g, r), lambda x, g=g, r=r: twisted_box(g, r, x)) for g in range(1, 4) for r in range(0, 4)]
    )
    for spec, fn in cases:
        if not _same_polynomial(catalog.character_variety_class(spec), fn):
            bad.append(format_spec(spec))
    elapsed = time.perf_counter() - t0
    ok = not bad and elapsed < 1.0
    record(1, "closed forms reproduce the printed formulas", ok, elapsed, ", ".join(bad))
    assert ok, bad


def test_criterion_02_assembly_equals_closed_form():
    t0 = time.perf_counter()
    specs = (
        [Free(n) for n in range(1, 7)]
        + [Surface(g) for g in range(1, 5)]
        + [FreeParabolic(n, JP * s) for n in range(1, 5) for s in range(1, 5)]
        + [SurfaceParabolic(g, JP * s) for g in range(1, 4) for s in range(1, 5)]
    )
    bad = []
    for spec in specs:
        assembled, _ = catalog.character_variety_via_strata(spec)
        if assembled != catalog.character_variety_class(spec):
            bad.append(format_spec(spec))
    elapsed = time.perf_counter() - t0
    ok = not bad and elapsed < 5.0
    record(2, "assembly from strata equals the closed form", ok, elapsed, f"{len(bad)} mismatches: {'; '.join(bad)}" if bad else "")
    assert ok, bad


def test_criterion_03_known_specializations():
    t0 = time.perf_counter()
    checks = [
        catalog.character_variety_class(Free(1)) == q,
        catalog.character_variety_class(Free(2)) == q**3,
        catalog.character_variety_class(Surface(1)) == q**2 + 1,
        catalog.character_variety_class(Surface(1)) == ((q - 1) ** 2 + (q + 1) ** 2) * H,
        catalog.character_variety_class(FreeParabolic(1, JP)) == (q - 1) * (q + 3),
        catalog.representation_variety_class(Surface(1)) == q * (q**2 - 1) * (q + 4),
    ]
    elapsed = time.perf_counter() - t0
    ok = all(checks) and elapsed < 1.0
    record(3, "known specializations", ok, elapsed)
    assert ok, checks


def test_criterion_04_stratum_sum_identity():
    t0 = time.perf_counter()
    specs = (
        [Free(n) for n in range(1, 7)]
        + [Surface(g) for g in range(1, 5)]
        + [FreeParabolic(n, JP * s) for n in range(1, 5) for s in range(1, 5)]
        + [SurfaceParabolic(g, JP * s) for g in range(1, 4) for s in range(1, 5)]
    )
    bad = []
    for spec in specs:
        total = sum((catalog.stratum_class(spec, s) for s in PRIMARY_STRATA), q * 0)
        if total != catalog.representation_variety_class(spec):
            bad.append(str(spec))
    elapsed = time.perf_counter() - t0
    ok = not bad and elapsed < 5.0
    record(4, "strata sum to the representation variety", ok, elapsed, ", ".join(bad))
    assert ok, bad


def test_criterion_05_oracle_free():
    t0 = time.perf_counter()
    bad = []
    reference = count_free(1, 3).counts
    ref_ok = [reference[k] for k in ("Iota", "UpsilonHat", "DeltaHat", "Varrho", "Irr")] == [2, 16, 6, 0, 0]
    for n, q0 in [(1, 3), (2, 3), (3, 3), (1, 5), (2, 5)]:
        report = count_free(n, q0)
        if not all(report.matches.values()) or report.total != (q0**3 - q0) ** n:
            bad.append(f"n={n} q={q0}: {report.counts} vs {report.expected}")
    elapsed = time.perf_counter() - t0
    ok = ref_ok and not bad and elapsed < 120
    record(5, "free-group stratum counts over F_3, F_5", ok, elapsed, "; ".join(bad))
    assert ok, (reference, bad)


def test_criterion_06_oracle_surface():
    t0 = time.perf_counter()
    totals = {q0: count_surface(1, q0).total for q0 in (3, 5)}
    elapsed = time.perf_counter() - t0
    ok = totals == {3: 168, 5: 1080} and elapsed < 120
    record(6, "genus-one surface totals", ok, elapsed, f"{totals}")
    assert ok, totals


def test_criterion_07_oracle_parabolic():
    t0 = time.perf_counter()
    formula = catalog.representation_variety_class(SurfaceParabolic(1, JP))
    r5 = count_surface(1, 5, JP)
    r3 = count_surface(1, 3, JP)
    elapsed = time.perf_counter() - t0
    ok = (
        r5.total == formula(5) == 5 * 36 * 4 * 2
        and r3.total == 0
        and formula(3) == 0
        and elapsed < 180
    )
    record(7, "one-puncture torus totals", ok, elapsed, f"q=5: {r5.total} vs {formula(5)}; q=3: {r3.total} vs {formula(3)}")
    assert ok


def test_criterion_08_torus_quotient_counts():
    t0 = time.perf_counter()
    bad = [
        (n, q0)
        for n in range(1, 5)
        for q0 in (3, 5, 7)
        if count_z2_torus_quotient("SL2-inversion", n, q0) != ((q0 - 1) ** n + (q0 + 1) ** n) // 2
    ]
    elapsed = time.perf_counter() - t0
    ok = not bad and elapsed < 60
    record(8, "torus modulo inversion point counts", ok, elapsed, f"{bad}" if bad else "")
    assert ok, bad


def test_criterion_09_documented_discrepancies():
    t0 = time.perf_counter()
    problems = []
    for q0 in (3, 5):
        r = verify(twisted(1, 0), q0)
        if r.total != q0**3 - q0 or r.expected["Irr"] != 0 or r.total_match:
            problems.append(f"twisted q={q0}")
        r = verify(AbelianGL2(1), q0)
        printed = ((q0 - 1) ** 2 + (q0 + 1) ** 2) // 2
        if r.counts["Quotient"] != q0 * q0 - q0 or r.expected["PrintedQuotient"] != printed or r.total_match:
            problems.append(f"abelian-gl2 q={q0}")
    for argv, needle in [
        (["verify", "twisted:g=1,r=0", "--q", "3"], SUSPECT_TWISTED),
        (["verify", "abelian-gl2:n=1", "--q", "3"], "printed abelian-GL2 formula"),
    ]:
        out, err = io.StringIO(), io.StringIO()
        code = run(argv, out, err)
        if code != 2 or needle not in err.getvalue():
            problems.append(f"{' '.join(argv)} exit {code}")
    elapsed = time.perf_counter() - t0
    ok = not problems
    record(9, "documented discrepancies are reported as mismatches", ok, elapsed, ", ".join(problems))
    assert ok, problems


def test_criterion_10_property_suites():
    t0 = time.perf_counter()

    @settings(max_examples=60, deadline=None)
    @given(polys, polys, polys)
    def ring_laws(a, b, c):
        assert (a + b) + c == a + (b + c) and (a * b) * c == a * (b * c)
        assert a * b == b * a and a * (b + c) == a * b + a * c

    @settings(max_examples=40, deadline=None)
    @given(equivariant)
    def powers(x):
        acc = x
        for n in range(1, 9):
            assert z2_power(x, n) == acc
            acc = z2_product(acc, x)

    ring_laws()
    powers()
    torus = EquivariantClass(q, -1)
    assert all(z2_power(torus, n).plus == ((q - 1) ** n + (q + 1) ** n) * H for n in range(1, 9))
    for s in range(2, 9):
        assert catalog.helper_plane_class("pi_s", s) == (q - 1) ** (s - 1) - catalog.helper_plane_class("pi_s", s - 1)
        for g in range(1, 4):
            prev = catalog.helper_plane_class("Pi_s", s - 1, g)
            assert catalog.helper_plane_class("Pi_s", s, g) == q ** (2 * g) * (q - 1) ** (s - 1) - prev
    for q0 in (3, 5, 7):
        rnd = random.Random(1000 + q0)
        group = enumerate_sl2(q0)
        for _ in range(100):
            p = rnd.choice(group)
            tup = [rnd.choice(group) for _ in range(rnd.randint(1, 3))]
            assert classify_tuple([m.conjugate(p, q0) for m in tup], q0) == classify_tuple(tup, q0)
    specs = (
        [Free(n) for n in range(1, 7)]
        + [Surface(g) for g in range(1, 5)]
        + [FreeParabolic(n, JP * s) for n in range(0, 5) for s in range(1, 5)]
        + [SurfaceParabolic(g, JP * s) for g in range(1, 4) for s in range(1, 5)]
        + [twisted(g, r) for g in range(1, 4) for r in range(0, 4)]
    )
    for spec in specs:
        values = [catalog.character_variety_class(spec), catalog.representation_variety_class(spec)]
        values += [catalog.stratum_class(spec, s) for s in PRIMARY_STRATA]
        assert all(v.is_integral() for v in values), spec
    elapsed = time.perf_counter() - t0
    ok = elapsed < 60
    record(10, "property suites", ok, elapsed)
    assert ok
