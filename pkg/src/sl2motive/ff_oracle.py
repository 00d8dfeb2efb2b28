"""Brute-force point counts over F_q, split by stratum, compared with the catalog.

Matrices are tuples ``(a, b, c, d)`` of residues mod ``q``.  For every element
of SL2(F_q) we precompute the set of lines of F_{q^2}^2 it preserves, as a
bitmask over the ``q^2 + 1`` points of the projective line; a tuple then has a
common eigenline exactly when the AND of its masks is nonzero.

Point ``i < q^2`` is ``[t : 1]`` with ``t = FieldElem.decode(i)``; point
``q^2`` is ``[1 : 0]``.
"""

from __future__ import annotations

import json
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Callable, Iterable, NamedTuple, Sequence

from . import catalog
from .catalog import PRIMARY_STRATA, NotTabulatedError, StratumId
from .families import (
    AbelianGL2,
    AbelianSL2,
    Free,
    FreeParabolic,
    PunctureClass,
    Surface,
    SurfaceParabolic,
    VarietySpec,
    format_spec,
    twisted,
)
from .fields import FieldElem, UnsupportedFieldError, check_field

__all__ = [
    "Mat2",
    "CountReport",
    "InstanceTooLargeError",
    "UnsupportedFieldError",
    "DEFAULT_BUDGET",
    "enumerate_sl2",
    "puncture_set",
    "common_eigenlines",
    "classify_tuple",
    "count_free",
    "count_surface",
    "count_twisted",
    "count_commuting",
    "count_z2_torus_quotient",
    "z2_orbits_direct",
    "verify",
    "identity",
]

DEFAULT_BUDGET = 20_000_000
CHAR3_NOTE = "characteristic 3: puncture counts here are consistency data only (trace -2 equals 1)"


class InstanceTooLargeError(RuntimeError):
    pass


class Mat2(NamedTuple):
    """A 2x2 matrix ``[[a, b], [c, d]]`` over F_q, entries reduced mod q."""

    a: int
    b: int
    c: int
    d: int

    @classmethod
    def of(cls, rows: Sequence[Sequence[int]], q: int) -> Mat2:
        (a, b), (c, d) = rows
        return cls(a % q, b % q, c % q, d % q)

    def det(self, q: int) -> int:
        return (self.a * self.d - self.b * self.c) % q

    def trace(self, q: int) -> int:
        return (self.a + self.d) % q

    def mul(self, other: Mat2, q: int) -> Mat2:
        return Mat2(*_mul(self, other, q))

    def inverse(self, q: int) -> Mat2:
        det = self.det(q)
        if det == 0:
            raise ZeroDivisionError("singular matrix")
        k = pow(det, -1, q)
        return Mat2(self.d * k % q, -self.b * k % q, -self.c * k % q, self.a * k % q)

    def conjugate(self, p: Mat2, q: int) -> Mat2:
        """``p * self * p^-1``."""
        return p.mul(self, q).mul(p.inverse(q), q)


def identity() -> Mat2:
    return Mat2(1, 0, 0, 1)


def _mul(x: tuple[int, ...], y: tuple[int, ...], q: int) -> tuple[int, int, int, int]:
    a, b, c, d = x
    e, f, g, h = y
    return ((a * e + b * g) % q, (a * f + b * h) % q, (c * e + d * g) % q, (c * f + d * h) % q)


def _inv1(x: tuple[int, ...], q: int) -> tuple[int, int, int, int]:
    a, b, c, d = x  # det 1
    return (d, -b % q, -c % q, a)


def _comm(x: tuple[int, ...], y: tuple[int, ...], q: int) -> tuple[int, int, int, int]:
    return _mul(_mul(x, y, q), _mul(_inv1(x, q), _inv1(y, q), q), q)


# -- eigenlines -------------------------------------------------------------


@lru_cache(maxsize=None)
def _points(q: int) -> tuple[tuple[int, int, int, int], ...]:
    """``(x, y, u, v)`` for each affine point ``t = x + y*w`` with ``t^2 = u + v*w``."""
    out = []
    for code in range(q * q):
        t = FieldElem.decode(code, q)
        t2 = t * t
        out.append((t.a, t.b, t2.a, t2.b))
    return tuple(out)


@lru_cache(maxsize=None)
def _mask_for(b: int, c: int, e: int, q: int) -> int:
    # [t:1] is preserved iff -c t^2 + (a - d) t + b = 0, with e = a - d.
    mask = 0
    for i, (x, y, u, v) in enumerate(_points(q)):
        if (-c * u + e * x + b) % q == 0 and (-c * v + e * y) % q == 0:
            mask |= 1 << i
    if c == 0:
        mask |= 1 << (q * q)
    return mask


def _eigenline_mask(m: tuple[int, ...], q: int) -> int:
    a, b, c, d = m
    return _mask_for(b % q, c % q, (a - d) % q, q)


class _Info(NamedTuple):
    mask: int
    central: bool
    sign_unipotent: bool  # trace is +2 or -2


@dataclass(frozen=True)
class _Table:
    q: int
    mats: tuple[tuple[int, int, int, int], ...]
    index: dict[tuple[int, int, int, int], int]
    info: tuple[_Info, ...]


@lru_cache(maxsize=None)
def _table(q: int) -> _Table:
    mats = tuple(
        (a, b, c, d) for a, b, c, d in product(range(q), repeat=4) if (a * d - b * c) % q == 1
    )
    info = []
    for m in mats:
        a, b, c, d = m
        central = b == 0 and c == 0 and a == d
        info.append(_Info(_eigenline_mask(m, q), central, (a + d) % q in (2 % q, -2 % q)))
    return _Table(q, mats, {m: i for i, m in enumerate(mats)}, tuple(info))


def enumerate_sl2(q: int) -> list[Mat2]:
    """All ``q^3 - q`` elements of SL2(F_q)."""
    check_field(q)
    return [Mat2(*m) for m in _table(q).mats]


def puncture_set(kind: PunctureClass | str, q: int) -> list[Mat2]:
    """Matrices in a Jordan-type class, cut out by trace and non-centrality."""
    check_field(q)
    return [Mat2(*_table(q).mats[i]) for i in _puncture_indices(PunctureClass(kind).value, q)]


@lru_cache(maxsize=None)
def _puncture_indices(kind: str, q: int) -> tuple[int, ...]:
    tab = _table(q)
    sign = {"J+": 1, "J-": -1, "-Id": -1}[kind]
    tr = 2 * sign % q
    scalar = (sign % q, 0, 0, sign % q)
    if kind == "-Id":
        return (tab.index[scalar],)
    return tuple(i for i, m in enumerate(tab.mats) if (m[0] + m[3]) % q == tr and m != scalar)


def _point(i: int, q: int) -> tuple[FieldElem, FieldElem]:
    if i == q * q:
        return (FieldElem(1, 0, q), FieldElem(0, 0, q))
    return (FieldElem.decode(i, q), FieldElem(1, 0, q))


def common_eigenlines(mats: Sequence[Mat2], q: int) -> set[tuple[FieldElem, FieldElem]]:
    """Points of P^1(F_{q^2}) fixed by every matrix, as normalised pairs ``(x, y)``."""
    if not mats:
        raise ValueError("need at least one matrix")
    mask = -1
    for m in mats:
        mask &= _eigenline_mask(m, q)
    return {_point(i, q) for i in range(q * q + 1) if mask >> i & 1}


def _stratum(mask: int, central: bool, sign_unipotent: bool) -> StratumId:
    if central:
        return StratumId.IOTA
    if mask == 0:
        return StratumId.IRR
    if mask & (mask - 1):
        return StratumId.DELTA_HAT
    return StratumId.UPSILON_HAT if sign_unipotent else StratumId.VARRHO


def classify_tuple(mats: Sequence[Mat2], q: int) -> StratumId:
    """The stratum of a tuple in SL2(F_q)^n, read off from its common eigenlines."""
    if not mats:
        raise ValueError("need at least one matrix")
    mask, central, unip = -1, True, True
    for m in mats:
        a, b, c, d = (x % q for x in m)
        mask &= _eigenline_mask((a, b, c, d), q)
        central = central and b == 0 and c == 0 and a == d
        unip = unip and (a + d) % q in (2 % q, -2 % q)
    return _stratum(mask, central, unip)


# -- enumeration jobs ---------------------------------------------------------


@dataclass(frozen=True)
class _Job:
    """A picklable enumeration task; workers rebuild the tables from ``q``."""

    kind: str  # "free" | "surface" | "commuting"
    q: int
    n: int  # free SL2 coordinates (for surfaces: 2g)
    punctures: tuple[str, ...] = ()
    negate: bool = False  # surfaces: relation equals -Id (central punctures folded in)


def _coordinate_sets(job: _Job) -> list[Sequence[int]]:
    full = range(len(_table(job.q).mats))
    sets: list[Sequence[int]] = [full] * job.n
    enumerated = job.punctures if job.kind == "free" else job.punctures[:-1]
    sets += [_puncture_indices(p, job.q) for p in enumerated]
    return sets


def _size(job: _Job) -> int:
    size = 1
    for s in _coordinate_sets(job):
        size *= len(s)
    return size


def _tally_free(job: _Job, first: Sequence[int]) -> Counter[str]:
    info = _table(job.q).info
    sets = _coordinate_sets(job)
    sets[0] = first
    tally: Counter[str] = Counter()
    last = len(sets) - 1

    def rec(k: int, mask: int, central: bool, unip: bool) -> None:
        for i in sets[k]:
            m, c, u = info[i]
            state = (mask & m, central and c, unip and u)
            if k == last:
                tally[_stratum(*state).value] += 1
            else:
                rec(k + 1, *state)

    rec(0, -1, True, True)
    return tally


def _tally_surface(job: _Job, first: Sequence[int]) -> Counter[str]:
    tab = _table(job.q)
    q, info, mats = job.q, tab.info, tab.mats
    ident = (1, 0, 0, 1)
    target = (q - 1, 0, 0, q - 1) if job.negate else ident
    sets = _coordinate_sets(job)
    sets[0] = first
    g = job.n // 2
    last_set = frozenset(_puncture_indices(job.punctures[-1], q)) if job.punctures else None
    tally: Counter[str] = Counter()

    def close(prod: tuple[int, ...], mask: int, central: bool, unip: bool) -> None:
        if last_set is None:
            if prod == target:
                tally[_stratum(mask, central, unip).value] += 1
            return
        j = tab.index[_mul(_inv1(prod, q), target, q)]
        if j in last_set:
            m, c, u = info[j]
            tally[_stratum(mask & m, central and c, unip and u).value] += 1

    def punct(k: int, prod: tuple[int, ...], mask: int, central: bool, unip: bool) -> None:
        if k == len(sets):
            close(prod, mask, central, unip)
            return
        for i in sets[k]:
            m, c, u = info[i]
            punct(k + 1, _mul(prod, mats[i], q), mask & m, central and c, unip and u)

    def pairs(h: int, prod: tuple[int, ...], mask: int, central: bool, unip: bool) -> None:
        if h == g:
            punct(2 * g, prod, mask, central, unip)
            return
        for i in sets[2 * h]:
            mi, ci, ui = info[i]
            x = mats[i]
            for j in sets[2 * h + 1]:
                mj, cj, uj = info[j]
                pairs(
                    h + 1,
                    _mul(prod, _comm(x, mats[j], q), q),
                    mask & mi & mj,
                    central and ci and cj,
                    unip and ui and uj,
                )

    pairs(0, ident, -1, True, True)
    return tally


def _tally_commuting(job: _Job, first: Sequence[int]) -> Counter[str]:
    tab = _table(job.q)
    q, info, mats = job.q, tab.info, tab.mats
    sets = _coordinate_sets(job)
    sets[0] = first
    tally: Counter[str] = Counter()

    def rec(k: int, chosen: list[tuple[int, ...]], mask: int, central: bool, unip: bool) -> None:
        if k == len(sets):
            tally[_stratum(mask, central, unip).value] += 1
            return
        for i in sets[k]:
            x = mats[i]
            if all(_mul(x, y, q) == _mul(y, x, q) for y in chosen):
                m, c, u = info[i]
                chosen.append(x)
                rec(k + 1, chosen, mask & m, central and c, unip and u)
                chosen.pop()

    rec(0, [], -1, True, True)
    return tally


_TALLIES: dict[str, Callable[[_Job, Sequence[int]], Counter[str]]] = {
    "free": _tally_free,
    "surface": _tally_surface,
    "commuting": _tally_commuting,
}


def _run_chunk(job: _Job, first: tuple[int, ...]) -> Counter[str]:
    return _TALLIES[job.kind](job, first)


def _run(job: _Job, workers: int, budget: int) -> Counter[str]:
    size = _size(job)
    if size > budget:
        raise InstanceTooLargeError(f"instance too large: {size} tuples to enumerate, budget {budget}")
    if not _coordinate_sets(job):
        raise ValueError("nothing to enumerate")
    outer = list(_coordinate_sets(job)[0])
    workers = max(1, min(workers, len(outer)))
    chunks = [tuple(outer[i::workers]) for i in range(workers)]
    total: Counter[str] = Counter()
    if workers == 1:
        total.update(_run_chunk(job, chunks[0]))
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for part in pool.map(_run_chunk, [job] * workers, chunks):
                total.update(part)
    return total


# -- reports ------------------------------------------------------------------


@dataclass
class CountReport:
    """Finite-field counts next to the catalog's prediction at the same ``q``.

    ``counts`` holds one entry per stratum of the enumerated tuples, and may
    carry extra quotient entries (``"Quotient"``, ``"PrintedQuotient"``) that
    are not part of ``total``.
    """

    spec: VarietySpec
    q: int
    counts: dict[str, int]
    expected: dict[str, Fraction]
    total: int
    elapsed: float = 0.0
    diagnostics: list[str] = field(default_factory=list)

    @property
    def matches(self) -> dict[str, bool]:
        return {k: self.counts[k] == self.expected[k] for k in self.expected}

    @property
    def total_match(self) -> bool:
        return all(self.matches.values())

    @property
    def elapsed_ms(self) -> float:
        return self.elapsed * 1000.0

    def to_dict(self) -> dict[str, object]:
        return {
            "spec": format_spec(self.spec),
            "q": self.q,
            "counts": dict(self.counts),
            "expected": {k: str(v) for k, v in self.expected.items()},
            "matches": self.matches,
            "total_match": self.total_match,
            "total": self.total,
            "elapsed_ms": round(self.elapsed_ms, 3),
            "diagnostics": list(self.diagnostics),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def _stratum_report(
    spec: VarietySpec, q: int, tally: Counter[str], started: float, strata: Iterable[StratumId] = PRIMARY_STRATA
) -> CountReport:
    strata = list(strata)
    counts = {s.value: tally.get(s.value, 0) for s in strata}
    expected = {s.value: catalog.stratum_class(spec, s)(q) for s in strata}
    report = CountReport(spec, q, counts, expected, sum(tally.values()), diagnostics=catalog.diagnostics(spec))
    if q == 3 and isinstance(spec, (FreeParabolic, SurfaceParabolic)):
        report.diagnostics.append(CHAR3_NOTE)
    report.elapsed = time.perf_counter() - started
    return report


def _finish(report: CountReport) -> CountReport:
    for key, ok in report.matches.items():
        if not ok:
            report.diagnostics.append(
                f"mismatch in {key}: counted {report.counts[key]}, expected {report.expected[key]}"
            )
    return report


def count_free(
    n: int,
    q: int,
    punctures: Sequence[PunctureClass | str] | None = None,
    *,
    workers: int = 1,
    budget: int = DEFAULT_BUDGET,
) -> CountReport:
    """Stratum counts of ``SL2(F_q)^n`` times the prescribed puncture sets."""
    check_field(q)
    started = time.perf_counter()
    keys = tuple(PunctureClass(p).value for p in punctures or ())
    spec: VarietySpec = FreeParabolic(n, keys) if keys else Free(n)
    tally = _run(_Job("free", q, n, keys), workers, budget)
    return _finish(_stratum_report(spec, q, tally, started))


def count_surface(
    g: int,
    q: int,
    punctures: Sequence[PunctureClass | str] | None = None,
    *,
    workers: int = 1,
    budget: int = DEFAULT_BUDGET,
) -> CountReport:
    """Stratum counts of tuples satisfying ``prod [A_i, B_i] * prod C_j = Id``.

    All coordinates but the last puncture are enumerated; the last one is
    solved for and checked against its class.
    """
    check_field(q)
    started = time.perf_counter()
    keys = tuple(PunctureClass(p).value for p in punctures or ())
    spec: VarietySpec = SurfaceParabolic(g, keys) if keys else Surface(g)
    # -Id is central: it changes neither the eigenlines nor the stratum, only the sign of the relation.
    moving = tuple(k for k in keys if k != PunctureClass.MINUS_ID.value)
    negate = (len(keys) - len(moving)) % 2 == 1
    tally = _run(_Job("surface", q, 2 * g, moving, negate), workers, budget)
    return _finish(_stratum_report(spec, q, tally, started))


def count_twisted(g: int, r: int, q: int, *, workers: int = 1, budget: int = DEFAULT_BUDGET) -> CountReport:
    """Counts for ``prod [A_i, B_i] * C_1 ... C_r = -Id`` with each ``C_j`` in J+."""
    spec = twisted(g, r)
    return count_surface(g, q, spec.punctures, workers=workers, budget=budget)


def count_commuting(n: int, q: int, *, workers: int = 1, budget: int = DEFAULT_BUDGET) -> CountReport:
    """Stratum counts of pairwise commuting ``n``-tuples in SL2(F_q)."""
    check_field(q)
    started = time.perf_counter()
    tally = _run(_Job("commuting", q, n), workers, budget)
    return _finish(_stratum_report(AbelianSL2(n), q, tally, started))


# -- Z/2 quotients of tori ----------------------------------------------------


def _torus_setup(variant: str, q: int) -> tuple[list[tuple[FieldElem, ...]], Callable]:
    units = [x for x in (FieldElem.decode(c, q) for c in range(q * q)) if not x.is_zero()]
    if variant == "SL2-inversion":
        return [(x,) for x in units], lambda p: (p[0].inverse(),)
    if variant == "GL2-swap":
        return [(x, y) for x in units for y in units], lambda p: (p[1], p[0])
    raise ValueError(f"unknown torus variant {variant!r} (use 'SL2-inversion' or 'GL2-swap')")


def _frob(p: tuple[FieldElem, ...]) -> tuple[FieldElem, ...]:
    return tuple(x.frobenius() for x in p)


def count_z2_torus_quotient(variant: str, n: int, q: int) -> int:
    """F_q-points of ``T^n / (Z/2)`` by Burnside: half of (fixed + twisted-fixed) points.

    ``T`` is ``G_m`` with inversion (``SL2-inversion``) or ``G_m^2`` with the
    factor swap (``GL2-swap``); Z/2 acts diagonally on the ``n`` factors.
    Both point sets are products of per-factor solution sets over F_{q^2}.
    """
    check_field(q)
    if n < 1 or n > 4:
        raise ValueError("n must be between 1 and 4")
    points, sigma = _torus_setup(variant, q)
    fixed = sum(1 for p in points if _frob(p) == p)
    twisted_fixed = sum(1 for p in points if _frob(p) == sigma(p))
    total = fixed**n + twisted_fixed**n
    assert total % 2 == 0
    return total // 2


def z2_orbits_direct(variant: str, n: int, q: int) -> int:
    """The same count by listing Frobenius-stable orbits ``{x, sigma(x)}`` explicitly."""
    check_field(q)
    points, sigma = _torus_setup(variant, q)
    orbits = set()
    for tup in product(points, repeat=n):
        ftup = tuple(_frob(p) for p in tup)
        stup = tuple(sigma(p) for p in tup)
        if ftup == tup or ftup == stup:
            orbits.add(frozenset((tup, stup)))
    return len(orbits)


# -- dispatch -----------------------------------------------------------------


def _quotient_report(spec: VarietySpec, q: int, started: float) -> CountReport:
    if isinstance(spec, AbelianSL2):
        report = count_commuting(spec.n, q)
        count = count_z2_torus_quotient("SL2-inversion", spec.n, q)
        report.counts["Quotient"] = count
        report.expected["Quotient"] = catalog.character_variety_class(spec)(q)
    else:
        assert isinstance(spec, AbelianGL2)
        count = count_z2_torus_quotient("GL2-swap", spec.n, q)
        report = CountReport(
            spec,
            q,
            {"Quotient": count, "PrintedQuotient": count},
            {
                "Quotient": catalog.character_variety_class(spec)(q),
                "PrintedQuotient": catalog.printed_abelian_gl2(spec.n)(q),
            },
            total=count,
            diagnostics=catalog.diagnostics(spec),
        )
    report.elapsed = time.perf_counter() - started
    return _finish(report)


def _char2_report(spec: Free, q: int, budget: int, started: float) -> CountReport:
    mats = [m for m in product(range(2), repeat=4) if (m[0] * m[3] - m[1] * m[2]) % 2 == 1]
    size = len(mats) ** spec.n
    if size > budget:
        raise InstanceTooLargeError(f"instance too large: {size} tuples to enumerate, budget {budget}")
    count = sum(1 for _ in product(mats, repeat=spec.n))
    report = CountReport(
        spec,
        q,
        {"Total": count},
        {"Total": catalog.representation_variety_class(spec)(q)},
        total=count,
        diagnostics=["characteristic 2: strata degenerate, only the whole-variety count is compared"],
    )
    report.elapsed = time.perf_counter() - started
    return _finish(report)


def verify(
    spec: VarietySpec,
    q: int,
    *,
    workers: int = 1,
    budget: int = DEFAULT_BUDGET,
    allow_char2: bool = False,
) -> CountReport:
    """Count points of ``spec`` over F_q and compare with the catalog."""
    started = time.perf_counter()
    if q == 2 and allow_char2:
        if not isinstance(spec, Free):
            raise UnsupportedFieldError("unsupported field: q=2 is only allowed for free whole-variety counts")
        return _char2_report(spec, q, budget, started)
    check_field(q)
    match spec:
        case Free(n):
            return count_free(n, q, workers=workers, budget=budget)
        case FreeParabolic(n, punctures):
            return count_free(n, q, punctures, workers=workers, budget=budget)
        case Surface(g):
            return count_surface(g, q, workers=workers, budget=budget)
        case SurfaceParabolic(g, punctures):
            return count_surface(g, q, punctures, workers=workers, budget=budget)
        case AbelianSL2() | AbelianGL2():
            return _quotient_report(spec, q, started)
    raise NotTabulatedError(f"no counter for {spec!r}")

