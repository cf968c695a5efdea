"""JSON round-trip for instances.

An instance file is ``{"schema_version", "kind", "name", "metadata",
"payload"}``.  Polynomials are strings in canonical form; vectors are lists
of them; tables nest lists; forms are lists of ``{"index", "value"}``
entries over strictly increasing frame indices.  Bundles appear as
``{"label", "rank", "dual"}`` and all of them share the payload ``chart``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Dict, List, Sequence

import jsonschema

from .anchored import Anchor, DullBracket, LinearConnection
from .bundles import Bundle, BundleMismatch, Chart, HomField, VForm, hom_bundle
from .courant import CourantData
from .exactpoly import ChartMismatch, Poly, PolyParseError
from .lie2core import Morphism, SplitLie2Data, pulled_bundle
from .matched import MatchedPairData, TwoRepData
from .report import SCHEMA_VERSION

__all__ = [
    "Instance", "LoadError", "KINDS", "instance_schema", "load_spec", "loads_spec",
    "dump_instance", "dumps_instance", "encode", "decode", "report_schema",
]

KINDS = ("split_lie2", "two_rep", "matched_pair", "courant", "morphism", "shift",
         "lie_algebroid")


class LoadError(ValueError):
    """Unreadable file, schema violation or malformed polynomial."""

    def __init__(self, message: str, path: str = "") -> None:
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


@dataclass
class Instance:
    kind: str
    name: str
    payload: Any
    metadata: Dict[str, Any] = field(default_factory=dict)


# schemas ---------------------------------------------------------------------

_POLY = {"type": "string"}
_DEFS = {
    "poly": _POLY,
    "vec": {"type": "array", "items": {"$ref": "#/$defs/poly"}},
    "matrix": {"type": "array", "items": {"$ref": "#/$defs/vec"}},
    "table": {"type": "array", "items": {"$ref": "#/$defs/matrix"}},
    "bundle": {
        "type": "object",
        "required": ["label", "rank"],
        "additionalProperties": False,
        "properties": {"label": {"type": "string"},
                       "rank": {"type": "integer", "minimum": 0},
                       "dual": {"type": "boolean"}},
    },
    "chart": {"type": "object", "required": ["dim"], "additionalProperties": False,
              "properties": {"dim": {"type": "integer", "minimum": 0}}},
    "form": {
        "type": "array",
        "items": {"type": "object", "required": ["index", "value"], "additionalProperties": False,
                  "properties": {"index": {"type": "array",
                                           "items": {"type": "integer", "minimum": 0}},
                                 "value": {"$ref": "#/$defs/vec"}}},
    },
    "algebroid": {
        "type": "object",
        "required": ["bundle", "anchor", "bracket"],
        "additionalProperties": False,
        "properties": {"bundle": {"$ref": "#/$defs/bundle"},
                       "anchor": {"$ref": "#/$defs/matrix"},
                       "bracket": {"$ref": "#/$defs/table"}},
    },
    "connection": {
        "type": "object", "required": ["module", "symbols"], "additionalProperties": False,
        "properties": {"module": {"$ref": "#/$defs/bundle"},
                       "symbols": {"$ref": "#/$defs/table"}},
    },
}


def _obj(required: Sequence[str], props: Dict[str, Any], optional: Dict[str, Any] | None = None):
    p = dict(props)
    p.update(optional or {})
    return {"type": "object", "required": list(required), "additionalProperties": False,
            "properties": p}


def _ref(name: str) -> Dict[str, str]:
    return {"$ref": f"#/$defs/{name}"}


_SPLIT = _obj(["chart", "Q", "B", "anchor", "l", "bracket", "nabla", "omega"], {
    "chart": _ref("chart"), "Q": _ref("bundle"), "B": _ref("bundle"), "anchor": _ref("matrix"),
    "l": _ref("matrix"), "bracket": _ref("table"), "nabla": _ref("table"), "omega": _ref("form")})

_PAYLOADS = {
    "lie_algebroid": _obj(["chart", "algebroid"], {"chart": _ref("chart"),
                                                   "algebroid": _ref("algebroid")},
                          {"representation": _ref("connection")}),
    "split_lie2": _SPLIT,
    "two_rep": _obj(["chart", "A", "E0", "E1", "partial", "nabla0", "nabla1", "R"], {
        "chart": _ref("chart"), "A": _ref("algebroid"), "E0": _ref("bundle"),
        "E1": _ref("bundle"), "partial": _ref("matrix"), "nabla0": _ref("table"),
        "nabla1": _ref("table"), "R": _ref("form")}),
    "matched_pair": _obj(["chart", "A", "B", "C", "partialA", "partialB", "nablaAB", "nablaAC",
                          "nablaBA", "nablaBC", "RA", "RB"], {
        "chart": _ref("chart"), "A": _ref("algebroid"), "B": _ref("algebroid"),
        "C": _ref("bundle"), "partialA": _ref("matrix"), "partialB": _ref("matrix"),
        "nablaAB": _ref("table"), "nablaAC": _ref("table"), "nablaBA": _ref("table"),
        "nablaBC": _ref("table"), "RA": _ref("form"), "RB": _ref("form")}),
    "courant": _obj(["chart", "E", "V", "anchor", "gram", "bracket", "rho_tilde"], {
        "chart": _ref("chart"), "E": _ref("bundle"), "V": _ref("bundle"),
        "anchor": _ref("matrix"), "gram": _ref("table"), "bracket": _ref("table"),
        "rho_tilde": _ref("table")}, {"metric_connection": _ref("table")}),
    "morphism": _obj(["source", "target", "mu0", "muQ", "muB", "mu12"], {
        "source": _SPLIT, "target": _SPLIT, "mu0": _ref("vec"), "muQ": _ref("matrix"),
        "muB": _ref("matrix"), "mu12": _ref("form")}),
    "shift": _obj(["instance", "phi"], {"instance": _SPLIT, "phi": _ref("form")}),
}


def instance_schema(kind: str | None = None) -> Dict[str, Any]:
    """JSON schema of an instance file, for one kind or for all of them."""
    kinds = [kind] if kind else list(KINDS)
    if kind is not None and kind not in KINDS:
        raise KeyError(kind)
    branches = []
    for k in kinds:
        branches.append({
            "if": {"properties": {"kind": {"const": k}}},
            "then": {"properties": {"payload": _PAYLOADS[k]}},
        })
    return {
        "$schema": "https://json-schema.org/draft/2020-12/schema",
        "title": f"l2a instance{'' if kind is None else ' (' + kind + ')'}",
        "type": "object",
        "required": ["schema_version", "kind", "name", "payload"],
        "additionalProperties": False,
        "properties": {
            "schema_version": {"const": SCHEMA_VERSION},
            "kind": {"enum": kinds},
            "name": {"type": "string"},
            "metadata": {"type": "object"},
            "payload": {"type": "object"},
        },
        "allOf": branches,
        "$defs": _DEFS,
    }


def report_schema() -> Dict[str, Any]:
    """JSON schema of the reports printed by the check commands."""
    return {
        "$schema": "https://json-schema.org/draft/2020-12/schema",
        "title": "l2a report",
        "type": "object",
        "required": ["schema_version", "check", "passed", "axioms", "violations"],
        "additionalProperties": False,
        "properties": {
            "schema_version": {"const": SCHEMA_VERSION},
            "check": {"type": "string"},
            "passed": {"type": "boolean"},
            "axioms": {"type": "array", "items": _obj(["axiom", "passed"], {
                "axiom": {"type": "string"}, "passed": {"type": "boolean"}})},
            "violations": {"type": "array", "items": _obj(["axiom", "witness", "residual"], {
                "axiom": {"type": "string"},
                "witness": {"type": "object", "additionalProperties": {"type": "integer"}},
                "residual": {"type": "string"}})},
            "timing": _obj(["seconds"], {"seconds": {"type": "number"}}),
        },
    }


_VALIDATOR = jsonschema.Draft202012Validator(instance_schema())


def _path(parts) -> str:
    out = "$"
    for p in parts:
        out += f"[{p}]" if isinstance(p, int) else f".{p}"
    return out


# encoding --------------------------------------------------------------------

def _bundle(b: Bundle) -> Dict[str, Any]:
    out: Dict[str, Any] = {"label": b.label, "rank": b.rank}
    if b.dual:
        out["dual"] = True
    return out


def _vec(v) -> List[str]:
    return [p.render() for p in v]


def _table(t) -> List[List[List[str]]]:
    return [[_vec(v) for v in row] for row in t]


def _form(F: VForm) -> List[Dict[str, Any]]:
    return [{"index": list(k), "value": _vec(v)} for k, v in F.entries.items()]


def _alg(a: DullBracket) -> Dict[str, Any]:
    if not a.skew:
        raise ValueError("only skew brackets are serialised as algebroids")
    return {"bundle": _bundle(a.bundle), "anchor": [_vec(r) for r in a.anchor.matrix],
            "bracket": _table(a.symbols)}


def _split(d: SplitLie2Data) -> Dict[str, Any]:
    return {"chart": {"dim": d.n}, "Q": _bundle(d.Q), "B": _bundle(d.B),
            "anchor": [_vec(r) for r in d.rho.matrix], "l": [_vec(r) for r in d.l.matrix],
            "bracket": _table(d.bracket.symbols), "nabla": _table(d.nabla.symbols),
            "omega": _form(d.omega)}


def encode(kind: str, payload: Any) -> Dict[str, Any]:
    """Payload object to its JSON form."""
    if kind == "lie_algebroid":
        if isinstance(payload, tuple):
            alg, rep = payload
        else:
            alg, rep = payload, None
        out = {"chart": {"dim": alg.bundle.dim}, "algebroid": _alg(alg)}
        if rep is not None:
            out["representation"] = {"module": _bundle(rep.module), "symbols": _table(rep.symbols)}
        return out
    if kind == "split_lie2":
        return _split(payload)
    if kind == "two_rep":
        t: TwoRepData = payload
        return {"chart": {"dim": t.E0.dim}, "A": _alg(t.algebroid), "E0": _bundle(t.E0),
                "E1": _bundle(t.E1), "partial": [_vec(r) for r in t.partial.matrix],
                "nabla0": _table(t.nabla0.symbols), "nabla1": _table(t.nabla1.symbols),
                "R": _form(t.R)}
    if kind == "matched_pair":
        m: MatchedPairData = payload
        return {"chart": {"dim": m.C.dim}, "A": _alg(m.A), "B": _alg(m.B), "C": _bundle(m.C),
                "partialA": [_vec(r) for r in m.partialA.matrix],
                "partialB": [_vec(r) for r in m.partialB.matrix],
                "nablaAB": _table(m.nablaAB.symbols), "nablaAC": _table(m.nablaAC.symbols),
                "nablaBA": _table(m.nablaBA.symbols), "nablaBC": _table(m.nablaBC.symbols),
                "RA": _form(m.RA), "RB": _form(m.RB)}
    if kind == "courant":
        if isinstance(payload, tuple):
            c, cn = payload
        else:
            c, cn = payload, None
        out = {"chart": {"dim": c.n}, "E": _bundle(c.E), "V": _bundle(c.V),
               "anchor": [_vec(r) for r in c.anchor.matrix], "gram": _table(c.gram),
               "bracket": _table(c.symbols), "rho_tilde": _table(c.rho_tilde.symbols)}
        if cn is not None:
            out["metric_connection"] = _table(cn.symbols)
        return out
    if kind == "morphism":
        src, dst, mo = payload
        return {"source": _split(src), "target": _split(dst), "mu0": _vec(mo.mu0),
                "muQ": [_vec(r) for r in mo.muQ.matrix], "muB": [_vec(r) for r in mo.muB.matrix],
                "mu12": _form(mo.mu12)}
    if kind == "shift":
        d, phi = payload
        return {"instance": _split(d), "phi": _form(phi)}
    raise KeyError(kind)


def dumps_instance(inst: Instance) -> str:
    doc = {"schema_version": SCHEMA_VERSION, "kind": inst.kind, "name": inst.name,
           "metadata": inst.metadata, "payload": encode(inst.kind, inst.payload)}
    return json.dumps(doc, indent=1, sort_keys=True, ensure_ascii=False) + "\n"


def dump_instance(inst: Instance, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_instance(inst))


# decoding --------------------------------------------------------------------

class _Reader:
    def __init__(self, n: int) -> None:
        self.n = n
        self.chart = Chart(n)

    def poly(self, s: str, path: str) -> Poly:
        try:
            return Poly.parse(s, self.n)
        except PolyParseError as exc:
            raise LoadError(f"malformed polynomial: {exc}", path) from None

    def vec(self, v, path: str):
        return tuple(self.poly(s, f"{path}[{i}]") for i, s in enumerate(v))

    def matrix(self, m, path: str):
        return tuple(self.vec(r, f"{path}[{i}]") for i, r in enumerate(m))

    def table(self, t, path: str):
        return tuple(tuple(self.vec(v, f"{path}[{i}][{j}]") for j, v in enumerate(row))
                     for i, row in enumerate(t))

    def bundle(self, b) -> Bundle:
        return Bundle(b["label"], b["rank"], self.chart, b.get("dual", False))

    def form(self, entries, arity: int, arg: Bundle, value: Bundle, path: str) -> VForm:
        out = {}
        for i, e in enumerate(entries):
            idx = tuple(e["index"])
            if idx in out:
                raise LoadError(f"duplicate index {list(idx)}", f"{path}[{i}]")
            out[idx] = self.vec(e["value"], f"{path}[{i}].value")
        try:
            return VForm(arity, arg, value, out)
        except (ValueError, BundleMismatch) as exc:
            raise LoadError(str(exc), path) from None

    def alg(self, a, path: str) -> DullBracket:
        B = self.bundle(a["bundle"])
        anc = Anchor(B, self.matrix(a["anchor"], f"{path}.anchor"))
        return DullBracket(anc, self.table(a["bracket"], f"{path}.bracket"), skew=True)

    def split(self, p, path: str) -> SplitLie2Data:
        Q, B = self.bundle(p["Q"]), self.bundle(p["B"])
        anc = Anchor(Q, self.matrix(p["anchor"], f"{path}.anchor"))
        l = HomField(B.dual_bundle(), Q, self.matrix(p["l"], f"{path}.l"))
        br = DullBracket(anc, self.table(p["bracket"], f"{path}.bracket"), skew=True)
        nb = LinearConnection(anc, B, self.table(p["nabla"], f"{path}.nabla"))
        om = self.form(p["omega"], 3, Q, B.dual_bundle(), f"{path}.omega")
        return SplitLie2Data(Q, B, anc, l, br, nb, om)


def _chart_of(p, path: str) -> int:
    return p["chart"]["dim"]


def decode(kind: str, p: Dict[str, Any], path: str = "$.payload") -> Any:
    """JSON payload to the module record; shape errors become :class:`LoadError`."""
    try:
        return _decode(kind, p, path)
    except (BundleMismatch, ChartMismatch) as exc:
        raise LoadError(str(exc), path) from None
    except ValueError as exc:
        if isinstance(exc, LoadError):
            raise
        raise LoadError(str(exc), path) from None


def _decode(kind: str, p: Dict[str, Any], path: str) -> Any:
    if kind == "split_lie2":
        return _Reader(_chart_of(p, path)).split(p, path)
    if kind == "shift":
        d = decode("split_lie2", p["instance"], f"{path}.instance")
        rd = _Reader(d.n)
        return d, rd.form(p["phi"], 2, d.Q, d.B.dual_bundle(), f"{path}.phi")
    rd = _Reader(_chart_of(p, path) if "chart" in p else 0)
    if kind == "lie_algebroid":
        a = rd.alg(p["algebroid"], f"{path}.algebroid")
        rep = p.get("representation")
        if rep is None:
            return a
        mod = rd.bundle(rep["module"])
        return a, LinearConnection(a.anchor, mod, rd.table(rep["symbols"],
                                                            f"{path}.representation.symbols"))
    if kind == "two_rep":
        a = rd.alg(p["A"], f"{path}.A")
        E0, E1 = rd.bundle(p["E0"]), rd.bundle(p["E1"])
        R = rd.form(p["R"], 2, a.bundle, hom_bundle(E1, E0), f"{path}.R")
        return TwoRepData(a, E0, E1, HomField(E0, E1, rd.matrix(p["partial"], f"{path}.partial")),
                          LinearConnection(a.anchor, E0, rd.table(p["nabla0"], f"{path}.nabla0")),
                          LinearConnection(a.anchor, E1, rd.table(p["nabla1"], f"{path}.nabla1")),
                          R)
    if kind == "matched_pair":
        A, B = rd.alg(p["A"], f"{path}.A"), rd.alg(p["B"], f"{path}.B")
        C = rd.bundle(p["C"])
        Ab, Bb = A.bundle, B.bundle
        return MatchedPairData(
            A, B, C,
            HomField(C, Ab, rd.matrix(p["partialA"], f"{path}.partialA")),
            HomField(C, Bb, rd.matrix(p["partialB"], f"{path}.partialB")),
            LinearConnection(A.anchor, Bb, rd.table(p["nablaAB"], f"{path}.nablaAB")),
            LinearConnection(A.anchor, C, rd.table(p["nablaAC"], f"{path}.nablaAC")),
            LinearConnection(B.anchor, Ab, rd.table(p["nablaBA"], f"{path}.nablaBA")),
            LinearConnection(B.anchor, C, rd.table(p["nablaBC"], f"{path}.nablaBC")),
            rd.form(p["RA"], 2, Ab, hom_bundle(Bb, C), f"{path}.RA"),
            rd.form(p["RB"], 2, Bb, hom_bundle(Ab, C), f"{path}.RB"),
        )
    if kind == "courant":
        E, V = rd.bundle(p["E"]), rd.bundle(p["V"])
        anc = Anchor(E, rd.matrix(p["anchor"], f"{path}.anchor"))
        rt = LinearConnection(anc, V, rd.table(p["rho_tilde"], f"{path}.rho_tilde"))
        c = CourantData(E, V, anc, rd.table(p["gram"], f"{path}.gram"),
                        rd.table(p["bracket"], f"{path}.bracket"), rt)
        mc = p.get("metric_connection")
        if mc is None:
            return c
        from .courant import tangent_algebroid
        T = tangent_algebroid(E.chart)
        return c, LinearConnection(T.anchor, E, rd.table(mc, f"{path}.metric_connection"))
    if kind == "morphism":
        src = decode("split_lie2", p["source"], f"{path}.source")
        dst = decode("split_lie2", p["target"], f"{path}.target")
        rd = _Reader(src.n)
        mu0 = rd.vec(p["mu0"], f"{path}.mu0")
        muQ = HomField(src.Q, pulled_bundle(dst.Q, src.chart), rd.matrix(p["muQ"], f"{path}.muQ"))
        Bd1, Bd2 = src.B.dual_bundle(), pulled_bundle(dst.B.dual_bundle(), src.chart)
        muB = HomField(Bd1, Bd2, rd.matrix(p["muB"], f"{path}.muB"))
        mu12 = rd.form(p["mu12"], 2, src.Q, Bd2, f"{path}.mu12")
        return src, dst, Morphism(src.n, dst.n, mu0, muQ, muB, mu12)
    raise LoadError(f"unknown kind {kind!r}", "$.kind")


def loads_spec(text: str, source: str = "<string>") -> Instance:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise LoadError(f"{source}: invalid JSON: {exc}") from None
    errors = sorted(_VALIDATOR.iter_errors(doc), key=lambda e: (list(map(str, e.absolute_path)),
                                                                e.message))
    if errors:
        e = errors[0]
        raise LoadError(f"schema violation: {e.message}", _path(e.absolute_path))
    payload = decode(doc["kind"], doc["payload"])
    return Instance(doc["kind"], doc["name"], payload, doc.get("metadata", {}))


def load_spec(path: str) -> Instance:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise LoadError(f"cannot read {path}: {exc.strerror}") from None
    return loads_spec(text, path)
