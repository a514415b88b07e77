"""Bit-exact JSON serialization for quantales, functions, tables, scenarios.

Rationals travel as "num/den" strings so that files round-trip exactly.
Table entries are emitted in the canonical lexicographic order of the
function space; parsers are strict and raise StructuralError on malformed
input so the CLI can map it to the input-error exit code.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .counterexample import (Const, FnExpr, Join, Meet, Ramp, Res,
                             TailIndicator)
from .errors import StructuralError
from .monad import Variant
from .qfun import FiniteSet, QFunction
from .quantale import FiniteQuantale, TNorm, build_ordinal_sum
from .semifilter import SemifilterTable


def format_fraction(v: Fraction) -> str:
    return f"{v.numerator}/{v.denominator}"


def parse_fraction(s) -> Fraction:
    if isinstance(s, int):
        return Fraction(s)
    if not isinstance(s, str):
        raise StructuralError(f"expected a rational string, got {s!r}")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as e:
        raise StructuralError(f"malformed rational {s!r}: {e}") from None


def quantale_to_json(q) -> dict:
    if isinstance(q, TNorm):
        return {"type": "tnorm",
                "blocks": [{"lo": format_fraction(b.lo),
                            "hi": format_fraction(b.hi),
                            "kind": b.kind.value} for b in q.blocks]}
    if isinstance(q, FiniteQuantale):
        es = q.elements
        out = {"type": "finite",
               "carrier": [format_fraction(e) for e in es],
               "tensor": [[format_fraction(q._tensor[(x, y)]) for y in es] for x in es],
               "unit": format_fraction(q.unit)}
        if q._join is not None:
            out["join"] = [[format_fraction(q._join[(x, y)]) for y in es] for x in es]
        if q._meet is not None:
            out["meet"] = [[format_fraction(q._meet[(x, y)]) for y in es] for x in es]
        return out
    raise StructuralError(f"not a quantale: {q!r}")


def quantale_from_json(obj: dict):
    if not isinstance(obj, dict) or "type" not in obj:
        raise StructuralError("quantale definition needs a 'type' field")
    if obj["type"] == "tnorm":
        blocks = [(parse_fraction(b["lo"]), parse_fraction(b["hi"]), b["kind"])
                  for b in obj.get("blocks", [])]
        return build_ordinal_sum(blocks)
    if obj["type"] == "finite":
        try:
            carrier = [parse_fraction(e) for e in obj["carrier"]]
            tensor = [[parse_fraction(v) for v in row] for row in obj["tensor"]]
            unit = parse_fraction(obj["unit"])
        except KeyError as e:
            raise StructuralError(f"finite quantale definition missing {e}") from None
        join = obj.get("join")
        meet = obj.get("meet")
        if join is not None:
            join = [[parse_fraction(v) for v in row] for row in join]
        if meet is not None:
            meet = [[parse_fraction(v) for v in row] for row in meet]
        return FiniteQuantale(carrier, tensor, unit, join=join, meet=meet)
    raise StructuralError(f"unknown quantale type {obj['type']!r}")


def qfunction_to_json(f: QFunction) -> dict:
    return {"domain": list(f.domain.elements),
            "values": [format_fraction(v) for v in f.values]}


def qfunction_from_json(obj, domain: FiniteSet, carrier) -> QFunction:
    if isinstance(obj, dict):
        declared = obj.get("domain")
        if declared is not None and tuple(declared) != domain.elements:
            raise StructuralError(f"function domain {declared} does not match {domain}")
        values = obj["values"]
    else:
        values = obj
    return QFunction(domain, tuple(parse_fraction(v) for v in values), carrier)


def semifilter_to_json(t: SemifilterTable) -> dict:
    return {"domain": list(t.domain.elements),
            "carrier": quantale_to_json(t.carrier),
            "entries": [[qfunction_to_json(f), format_fraction(t(f))]
                        for f in t.functions()]}


def semifilter_from_json(obj: dict, domain: FiniteSet,
                         carrier: FiniteQuantale) -> SemifilterTable:
    entries = {}
    for fn_obj, val in obj["entries"]:
        fn = qfunction_from_json(fn_obj, domain, carrier)
        entries[fn.values] = parse_fraction(val)
    return SemifilterTable(domain, carrier, entries)


def expr_to_json(e: FnExpr) -> dict:
    if isinstance(e, Ramp):
        return {"kind": "ramp", "scale": format_fraction(e.scale)}
    if isinstance(e, TailIndicator):
        return {"kind": "indicator", "start": e.start}
    if isinstance(e, Const):
        return {"kind": "const", "value": format_fraction(e.value)}
    if isinstance(e, Join):
        return {"kind": "join", "left": expr_to_json(e.left),
                "right": expr_to_json(e.right)}
    if isinstance(e, Meet):
        return {"kind": "meet", "left": expr_to_json(e.left),
                "right": expr_to_json(e.right)}
    if isinstance(e, Res):
        return {"kind": "res", "const": format_fraction(e.const),
                "child": expr_to_json(e.child)}
    raise StructuralError(f"not an expression: {e!r}")


def expr_from_json(obj: dict) -> FnExpr:
    kind = obj.get("kind")
    if kind == "ramp":
        return Ramp(parse_fraction(obj["scale"]))
    if kind == "indicator":
        return TailIndicator(int(obj["start"]))
    if kind == "const":
        return Const(parse_fraction(obj["value"]))
    if kind == "join":
        return Join(expr_from_json(obj["left"]), expr_from_json(obj["right"]))
    if kind == "meet":
        return Meet(expr_from_json(obj["left"]), expr_from_json(obj["right"]))
    if kind == "res":
        return Res(parse_fraction(obj["const"]), expr_from_json(obj["child"]))
    raise StructuralError(f"unknown expression kind {kind!r}")


class ScenarioSpec:
    """A parsed law-suite scenario file.

    Holds the carrier, the variant, the three label sets, optional explicit
    maps (as tables or generating bases), seeds, budgets and an optional
    witness catalog for counterexample runs.
    """

    def __init__(self, obj: dict, base_dir: Path | None = None):
        if not isinstance(obj, dict):
            raise StructuralError("a scenario file must hold a JSON object")
        quantale = obj.get("quantale")
        if isinstance(quantale, str):
            path = (base_dir or Path(".")) / quantale
            quantale = json.loads(path.read_text())
        self.carrier = quantale_from_json(quantale)
        self.variant = Variant(obj.get("variant", "plain"))
        sets = obj.get("sets", {})
        self.x_set = FiniteSet(tuple(sets.get("X", ("x0", "x1"))))
        self.y_set = FiniteSet(tuple(sets.get("Y", ("y0", "y1"))))
        self.z_set = FiniteSet(tuple(sets.get("Z", ("z0", "z1"))))
        self.seed = int(obj.get("seed", 0))
        budgets = obj.get("budgets", {})
        self.scenarios = int(budgets.get("scenarios", 200))
        self.budget = budgets.get("budget")
        self.maps = obj.get("maps")
        wc = obj.get("witness_catalog")
        self.witness_catalog = [expr_from_json(e) for e in wc] if wc else None

    def explicit_maps(self):
        """Decode explicit f/g map values into tables, if present."""
        if not self.maps:
            return None
        out = {}
        for name, (src, dst) in (("f", (self.x_set, self.y_set)),
                                 ("g", (self.y_set, self.z_set))):
            raw = self.maps.get(name)
            if raw is None:
                return None
            decoded = {}
            for x in src:
                key = str(x)
                if key not in raw:
                    raise StructuralError(f"map {name} missing value at {key!r}")
                decoded[x] = self._decode_table(raw[key], dst)
            out[name] = decoded
        return out

    def _decode_table(self, obj: dict, domain: FiniteSet) -> SemifilterTable:
        from .prefilter import normalize_basis
        from .semifilter import semifilter_of
        if "entries" in obj:
            return semifilter_from_json(obj, domain, self.carrier)
        if "basis" in obj:
            fns = [qfunction_from_json(b, domain, self.carrier)
                   for b in obj["basis"]]
            return semifilter_of(normalize_basis(fns, domain, self.carrier))
        raise StructuralError("map value needs either 'entries' or 'basis'")


def load_json(path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise StructuralError(f"cannot read {path}: {e}") from None


def load_quantale(path):
    return quantale_from_json(load_json(path))


def load_scenario(path) -> ScenarioSpec:
    return ScenarioSpec(load_json(path), base_dir=Path(path).parent)


def render_text(report: dict, indent: int = 0) -> str:
    """Render the machine report as aligned text, one fact per line.

    The text and JSON forms carry the same information; nothing lives only
    in prose.
    """
    lines = []
    pad = "  " * indent
    for key, value in report.items():
        if isinstance(value, dict):
            lines.append(f"{pad}{key}:")
            lines.append(render_text(value, indent + 1))
        elif isinstance(value, list) and value and isinstance(value[0], dict):
            lines.append(f"{pad}{key}:")
            for i, item in enumerate(value):
                lines.append(f"{pad}  [{i}]")
                lines.append(render_text(item, indent + 2))
        else:
            lines.append(f"{pad}{key}: {value}")
    return "\n".join(x for x in lines if x)
