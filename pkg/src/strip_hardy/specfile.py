"""JSON spec files for symbols.

Schema (every top-level section is optional)::

    {
      "phase": {"re": 1.0, "im": 0.0},
      "blaschke": {"zeros": [{"re": 0.0, "im": -1.5707963267948966, "mult": 1}],
                   "infinite_tail": false},
      "singular": {"a0": 0.0, "a_inf": 0.0, "atoms": [{"s": 1.0, "w": 0.5}]},
      "outer": {"kind": "constant", "params": {"c": 1.0}, "admissible": true},
      "square_root": false
    }

With ``square_root`` true the document describes ``h`` and the symbol is
``f = h^2``.  Syntax errors and invariant violations both raise
:class:`SpecParseError` carrying line, column and byte offset.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from json.decoder import scanstring
from pathlib import Path

from .errors import SpecParseError, StripHardyError
from .symbols import BlaschkeData, BlaschkeZero, OuterData, SingularData, SymbolSpec

_WS = " \t\n\r"
_SECTIONS = {
    "": {"phase", "blaschke", "singular", "outer", "square_root"},
    "phase": {"re", "im"},
    "blaschke": {"zeros", "infinite_tail"},
    "zero": {"re", "im", "mult"},
    "singular": {"a0", "a_inf", "atoms"},
    "atom": {"s", "w"},
    "outer": {"kind", "params", "admissible"},
}


@dataclass(frozen=True)
class LoadedSpec:
    """A parsed spec file.

    ``spec`` is what the document describes (``h`` when ``square_root``).
    """

    spec: SymbolSpec
    square_root: bool = False
    source: str = "<string>"


def _skip(text: str, i: int) -> int:
    while i < len(text) and text[i] in _WS:
        i += 1
    return i


def _positions(text: str) -> dict:
    """Start offset of every value, keyed by its path of keys and indices."""
    out: dict = {}
    decoder = json.JSONDecoder()

    def value(i, path):
        i = _skip(text, i)
        out[path] = i
        if text[i] == "{":
            i = _skip(text, i + 1)
            if text[i] == "}":
                return i + 1
            while True:
                key, i = scanstring(text, _skip(text, i) + 1)
                i = _skip(text, i) + 1          # the colon
                i = _skip(text, value(i, path + (key,)))
                if text[i] == "}":
                    return i + 1
                i += 1
        if text[i] == "[":
            i = _skip(text, i + 1)
            if text[i] == "]":
                return i + 1
            k = 0
            while True:
                i = _skip(text, value(i, path + (k,)))
                k += 1
                if text[i] == "]":
                    return i + 1
                i += 1
        _, end = decoder.raw_decode(text, i)
        return end

    value(0, ())
    return out


class _Reader:
    def __init__(self, text: str):
        self.text = text
        self.pos = _positions(text)

    def fail(self, message: str, path: tuple):
        # fall back to the nearest located ancestor
        while path not in self.pos and path:
            path = path[:-1]
        i = self.pos.get(path, 0)
        line = self.text.count("\n", 0, i) + 1
        col = i - (self.text.rfind("\n", 0, i) + 1) + 1
        raise SpecParseError(message, line, col, len(self.text[:i].encode("utf-8")))

    def obj(self, node, path, section):
        if not isinstance(node, dict):
            self.fail(f"'{'.'.join(map(str, path)) or 'document'}' must be an object", path)
        for key in node:
            if key not in _SECTIONS[section]:
                self.fail(f"unknown key {key!r}", path + (key,))
        return node

    def number(self, node, key, path, default=None):
        if key not in node:
            if default is None:
                self.fail(f"missing key {key!r}", path)
            return default
        val = node[key]
        if isinstance(val, bool) or not isinstance(val, (int, float)):
            self.fail(f"{key!r} must be a number", path + (key,))
        return float(val)

    def flag(self, node, key, path, default=False):
        val = node.get(key, default)
        if not isinstance(val, bool):
            self.fail(f"{key!r} must be true or false", path + (key,))
        return val

    def items(self, node, key, path):
        val = node.get(key, [])
        if not isinstance(val, list):
            self.fail(f"{key!r} must be a list", path + (key,))
        return val

    def guard(self, fn, path):
        try:
            return fn()
        except StripHardyError as exc:
            self.fail(str(exc), path)


def parse_spec_text(text: str, source: str = "<string>") -> LoadedSpec:
    """Parse a JSON document into a :class:`LoadedSpec`.

    Raises
    ------
    SpecParseError
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecParseError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno,
                             len(text[:exc.pos].encode("utf-8"))) from None
    r = _Reader(text)
    r.obj(doc, (), "")

    ph = r.obj(doc.get("phase", {}), ("phase",), "phase")
    phase = complex(r.number(ph, "re", ("phase",), 1.0), r.number(ph, "im", ("phase",), 0.0))

    bl = r.obj(doc.get("blaschke", {}), ("blaschke",), "blaschke")
    zeros = []
    for k, z in enumerate(r.items(bl, "zeros", ("blaschke",))):
        p = ("blaschke", "zeros", k)
        r.obj(z, p, "zero")
        mult = z.get("mult", 1)
        if isinstance(mult, bool) or not isinstance(mult, int) or mult < 1:
            r.fail("'mult' must be a positive integer", p + ("mult",))
        alpha = complex(r.number(z, "re", p), r.number(z, "im", p))
        zeros.append(r.guard(lambda: BlaschkeZero(alpha, mult), p))
    infinite = r.flag(bl, "infinite_tail", ("blaschke",))
    blaschke = r.guard(lambda: BlaschkeData(tuple(zeros), infinite), ("blaschke",))

    sg = r.obj(doc.get("singular", {}), ("singular",), "singular")
    atoms = []
    for k, a in enumerate(r.items(sg, "atoms", ("singular",))):
        p = ("singular", "atoms", k)
        r.obj(a, p, "atom")
        atoms.append((r.number(a, "s", p), r.number(a, "w", p)))
    singular = r.guard(lambda: SingularData(r.number(sg, "a0", ("singular",), 0.0),
                                            r.number(sg, "a_inf", ("singular",), 0.0),
                                            tuple(atoms)), ("singular",))

    ou = r.obj(doc.get("outer", {}), ("outer",), "outer")
    kind = ou.get("kind", "constant")
    if not isinstance(kind, str):
        r.fail("'kind' must be a string", ("outer", "kind"))
    params = ou.get("params", {})
    if not isinstance(params, dict):
        r.fail("'params' must be an object", ("outer", "params"))
    admissible = r.flag(ou, "admissible", ("outer",), True)
    outer = r.guard(lambda: OuterData(kind, params, admissible), ("outer",))

    spec = r.guard(lambda: SymbolSpec(phase, blaschke, singular, outer), ("phase",))
    return LoadedSpec(spec, r.flag(doc, "square_root", ()), source)


def load_spec(path) -> LoadedSpec:
    """Read and parse a spec file (UTF-8)."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except UnicodeDecodeError as exc:
        raise SpecParseError(f"{path}: not UTF-8 text", offset=exc.start) from None
    return parse_spec_text(text, str(path))


def spec_to_dict(spec: SymbolSpec, square_root: bool = False) -> dict:
    """Inverse of :func:`parse_spec_text` up to float formatting."""
    return {
        "phase": {"re": spec.phase.real, "im": spec.phase.imag},
        "blaschke": {"zeros": [{"re": z.alpha.real, "im": z.alpha.imag, "mult": z.multiplicity}
                               for z in spec.blaschke.zeros],
                     "infinite_tail": spec.blaschke.declared_infinite},
        "singular": {"a0": spec.singular.a0, "a_inf": spec.singular.a_inf,
                     "atoms": [{"s": s, "w": w} for s, w in spec.singular.finite_atoms]},
        "outer": {"kind": spec.outer.kind,
                  "params": {k: list(v) if isinstance(v, tuple) else v
                             for k, v in spec.outer.params.items()},
                  "admissible": spec.outer.admissible},
        "square_root": square_root,
    }
