"""Expression trees of variety-building operations and their evaluation to classes.

Each node kind evaluates by one rule:

* ``Disjoint``          -- sum over a decomposition into locally closed strata
* ``Fibration``         -- product of fiber and base (trivial monodromy)
* ``PrincipalQuotient`` -- exact division by the class of a free group action
* ``Z2Quotient``        -- the invariant part ``[X]^+`` of a Z/2-equivariant class
* ``CoreReplace``       -- the quotient is computed on a core instead
* ``Atom``              -- a pinned constant

Only classes are represented, never varieties: any two pseudo-quotients of the
same action have the same class, so a quotient node has a single value.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Union

from .ring import (
    EquivariantClass,
    InexactDivisionError,
    LaurentPoly,
    ONE,
    ZERO,
    divide_exact,
    parse_poly,
    q,
)

__all__ = [
    "Atom",
    "Disjoint",
    "Fibration",
    "PrincipalQuotient",
    "Z2Quotient",
    "CoreReplace",
    "MotiveExpr",
    "TraceEntry",
    "EvalTrace",
    "MotiveEvaluationError",
    "ATOMS",
    "RULE_ANCHORS",
    "atom",
    "evaluate_motive",
    "z2_quotient_class",
    "validate",
    "node_count",
    "to_json",
    "from_json",
    "trace_to_json",
]


@dataclass(frozen=True)
class Atom:
    label: str
    value: LaurentPoly

    def __post_init__(self) -> None:
        object.__setattr__(self, "value", LaurentPoly.coerce(self.value))
        if self.value.is_zero():
            raise ValueError(f"atom {self.label!r} has zero class; use an empty Disjoint instead")


@dataclass(frozen=True)
class Disjoint:
    parts: tuple[MotiveExpr, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "parts", tuple(self.parts))


@dataclass(frozen=True)
class Fibration:
    fiber: MotiveExpr
    base: MotiveExpr


@dataclass(frozen=True)
class PrincipalQuotient:
    total: MotiveExpr
    group: MotiveExpr


@dataclass(frozen=True)
class Z2Quotient:
    arg: EquivariantClass
    label: str = ""


@dataclass(frozen=True)
class CoreReplace:
    original_label: str
    core: MotiveExpr
    justification: str = ""


MotiveExpr = Union[Atom, Disjoint, Fibration, PrincipalQuotient, Z2Quotient, CoreReplace]

RULE_ANCHORS: dict[str, str] = {
    "atom": "pinned constant class",
    "disjoint": "additivity over a decomposition into invariant strata",
    "fibration": "multiplicativity of a fiber bundle with trivial monodromy",
    "principal_quotient": "division by the group class for a free closed action",
    "z2_quotient": "invariant part of a Z/2-equivariant class",
    "core": "quotient computed on a core subvariety",
}

ATOMS: dict[str, LaurentPoly] = {
    "point": ONE,
    "affine_line": q,
    "torus": q - 1,
    "SL2": q**3 - q,
    "PGL2": q**3 - q,
    "SL2_mod_StabJplus": q**2 - 1,
    "SL2_mod_StabDlambda": q**2 + q,
    "class_Jplus": q**2 - 1,
}


def atom(name: str) -> Atom:
    """An :class:`Atom` for one of the pinned constants in :data:`ATOMS`."""
    return Atom(name, ATOMS[name])


class MotiveEvaluationError(ArithmeticError):
    def __init__(self, node_id: str, message: str) -> None:
        super().__init__(f"node {node_id}: {message}")
        self.node_id = node_id


@dataclass(frozen=True)
class TraceEntry:
    node_id: str
    rule: str
    anchor: str
    value: LaurentPoly
    note: str = ""


@dataclass
class EvalTrace:
    entries: list[TraceEntry] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def rules(self) -> list[str]:
        return [e.rule for e in self.entries]

    @property
    def result(self) -> LaurentPoly:
        return self.entries[-1].value


def _children(e: MotiveExpr) -> tuple[MotiveExpr, ...]:
    match e:
        case Disjoint(parts):
            return parts
        case Fibration(fiber, base):
            return (fiber, base)
        case PrincipalQuotient(total, group):
            return (total, group)
        case CoreReplace(_, core, _):
            return (core,)
    return ()


def node_count(e: MotiveExpr) -> int:
    return 1 + sum(node_count(c) for c in _children(e))


def _eval(e: MotiveExpr, node_id: str, trace: EvalTrace) -> LaurentPoly:
    kids = [_eval(c, f"{node_id}.{i}", trace) for i, c in enumerate(_children(e))]
    note = ""
    match e:
        case Atom(label, value):
            rule, value, note = "atom", value, label
        case Disjoint():
            rule, value = "disjoint", sum(kids, ZERO)
        case Fibration():
            rule, value = "fibration", kids[0] * kids[1]
        case PrincipalQuotient():
            rule = "principal_quotient"
            try:
                value = divide_exact(kids[0], kids[1])
            except (InexactDivisionError, ZeroDivisionError) as exc:
                raise MotiveEvaluationError(node_id, f"inexact division: {exc}") from None
        case Z2Quotient(arg, label):
            rule, value, note = "z2_quotient", arg.plus, label
        case CoreReplace(original_label, _, justification):
            rule, value = "core", kids[0]
            note = f"{original_label}: {justification}" if justification else original_label
        case _:
            raise TypeError(f"not a motive expression: {e!r}")
    trace.entries.append(TraceEntry(node_id, rule, RULE_ANCHORS[rule], value, note))
    return value


def evaluate_motive(e: MotiveExpr) -> tuple[LaurentPoly, EvalTrace]:
    """Evaluate ``e`` bottom-up; the trace lists nodes in post-order, root last."""
    trace = EvalTrace()
    value = _eval(e, "0", trace)
    return value, trace


def z2_quotient_class(x: EquivariantClass) -> LaurentPoly:
    return x.plus


def validate(e: MotiveExpr) -> list[str]:
    """Diagnostics for inexact quotients and for strata listed twice in a union."""
    diagnostics: list[str] = []

    def walk(node: MotiveExpr, node_id: str) -> LaurentPoly | None:
        kids = [walk(c, f"{node_id}.{i}") for i, c in enumerate(_children(node))]
        match node:
            case Atom(_, value):
                return value
            case Z2Quotient(arg, _):
                return arg.plus
            case Disjoint(parts):
                seen: dict[str, int] = {}
                for i, part in enumerate(parts):
                    if isinstance(part, Atom):
                        if part.label in seen:
                            diagnostics.append(
                                f"node {node_id}: parts {seen[part.label]} and {i} share atom label {part.label!r}"
                            )
                        else:
                            seen[part.label] = i
                return None if None in kids else sum(kids, ZERO)
            case Fibration():
                return None if None in kids else kids[0] * kids[1]
            case PrincipalQuotient():
                if None in kids:
                    return None
                try:
                    return divide_exact(kids[0], kids[1])
                except (InexactDivisionError, ZeroDivisionError):
                    diagnostics.append(f"node {node_id}: inexact division ({kids[0]}) / ({kids[1]})")
                    return None
            case CoreReplace():
                return kids[0]
        raise TypeError(f"not a motive expression: {node!r}")

    walk(e, "0")
    return diagnostics


# -- JSON -----------------------------------------------------------------


def _encode(e: MotiveExpr) -> dict[str, Any]:
    match e:
        case Atom(label, value):
            return {"kind": "atom", "label": label, "class": str(value)}
        case Disjoint(parts):
            return {"kind": "disjoint", "parts": [_encode(p) for p in parts]}
        case Fibration(fiber, base):
            return {"kind": "fibration", "fiber": _encode(fiber), "base": _encode(base)}
        case PrincipalQuotient(total, group):
            return {"kind": "principal_quotient", "total": _encode(total), "group": _encode(group)}
        case Z2Quotient(arg, label):
            return {"kind": "z2_quotient", "label": label, "plus": str(arg.plus), "minus": str(arg.minus)}
        case CoreReplace(original_label, core, justification):
            return {
                "kind": "core",
                "label": original_label,
                "core": _encode(core),
                "justification": justification,
            }
    raise TypeError(f"not a motive expression: {e!r}")


def _decode(d: dict[str, Any]) -> MotiveExpr:
    kind = d["kind"]
    if kind == "atom":
        return Atom(d["label"], parse_poly(d["class"]))
    if kind == "disjoint":
        return Disjoint(tuple(_decode(p) for p in d["parts"]))
    if kind == "fibration":
        return Fibration(_decode(d["fiber"]), _decode(d["base"]))
    if kind == "principal_quotient":
        return PrincipalQuotient(_decode(d["total"]), _decode(d["group"]))
    if kind == "z2_quotient":
        return Z2Quotient(EquivariantClass(parse_poly(d["plus"]), parse_poly(d["minus"])), d.get("label", ""))
    if kind == "core":
        return CoreReplace(d["label"], _decode(d["core"]), d.get("justification", ""))
    raise ValueError(f"unknown node kind {kind!r}")


def to_json(e: MotiveExpr) -> str:
    return json.dumps(_encode(e), sort_keys=True)


def from_json(text: str) -> MotiveExpr:
    return _decode(json.loads(text))


def trace_to_json(trace: EvalTrace) -> str:
    return json.dumps(
        [
            {"node": t.node_id, "rule": t.rule, "anchor": t.anchor, "value": str(t.value), "note": t.note}
            for t in trace.entries
        ]
    )
