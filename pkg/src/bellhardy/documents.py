"""JSON documents for boxes, functionals, correlation tables and certificates.

Every rational travels as a string ``"p/q"`` or ``"p"``; floats are never
accepted.  Entries are written one per line in a fixed order, so identical
objects serialize to identical bytes::

    {
      "kind": "box",
      "n": 2,
      "entries": [
        {"s": "00", "a": "00", "value": "1/2"},
        ...
      ],
      "metadata": {}
    }
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .bellpoly import Certificate, DeterministicStrategy
from .boxspace import (
    Box,
    CorrelationTable,
    EventTable,
    SubsetTable,
    check_parties,
    coerce_word,
    lex_words,
    to_bitstring,
)
from .errors import BellError, DimensionError
from .functional import BellFunctional, CorrelationFunctional

KINDS = ("box", "functional", "correlations", "certificate")
_RATIONAL = re.compile(r"^([+-]?\d+)(?:/([+-]?\d+))?$")

ENTRY_KEYS = {
    "box": ("s", "a"),
    "functional": ("s", "a"),
    "correlations": ("c", "s"),
}


class DocumentError(BellError, ValueError):
    """Malformed document; carries the offending line and field when known."""

    def __init__(self, message: str, line: int | None = None, field_path: str | None = None,
                 source: str = "<input>"):
        self.line = line
        self.field_path = field_path
        self.source = source
        where = source
        if line is not None:
            where += f":{line}"
        if field_path:
            where += f" [{field_path}]"
        super().__init__(f"{where}: {message}")


@dataclass
class Document:
    kind: str
    n: int
    entries: list[dict[str, str]]
    metadata: dict[str, Any] = field(default_factory=dict)


def format_rational(value: Fraction) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def parse_rational(text, strict: bool = False) -> Fraction:
    """Read ``"p/q"`` or ``"p"``.  Strict mode rejects unreduced forms and negative denominators."""
    if isinstance(text, bool):
        raise ValueError(f"not a rational: {text!r}")
    if isinstance(text, int):
        if strict:
            raise ValueError(f"rational must be a string, got the number {text}")
        return Fraction(text)
    if not isinstance(text, str):
        raise ValueError(f"not a rational: {text!r}")
    m = _RATIONAL.match(text.strip())
    if not m:
        raise ValueError(f"not a rational of the form p/q: {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise ValueError(f"zero denominator in {text!r}")
    value = Fraction(num, den)
    if strict and (text.strip() != format_rational(value)):
        raise ValueError(f"{text!r} is not in lowest terms with a positive denominator "
                         f"(expected {format_rational(value)!r})")
    return value


# --------------------------------------------------------------------------
# Serialization


def dumps(doc: Document) -> str:
    lines = ["{", f'  "kind": {json.dumps(doc.kind)},', f'  "n": {doc.n},']
    if doc.entries:
        lines.append('  "entries": [')
        body = [json.dumps(e, separators=(", ", ": ")) for e in doc.entries]
        lines.extend(f"    {row}," for row in body[:-1])
        lines.append(f"    {body[-1]}")
        lines.append("  ],")
    else:
        lines.append('  "entries": [],')
    lines.append(f'  "metadata": {json.dumps(doc.metadata, sort_keys=True)}')
    lines.append("}")
    return "\n".join(lines) + "\n"


def _table_entries(table: EventTable) -> list[dict[str, str]]:
    n = table.n
    return [
        {"s": to_bitstring(s, n), "a": to_bitstring(a, n), "value": format_rational(v)}
        for s, a, v in table.items()
    ]


def to_document(obj, metadata: dict | None = None) -> Document:
    meta = dict(metadata or {})
    if isinstance(obj, Box):
        return Document("box", obj.n, _table_entries(obj), meta)
    if isinstance(obj, BellFunctional):
        return Document("functional", obj.n, _table_entries(obj), meta)
    if isinstance(obj, SubsetTable):
        n = obj.n
        meta.setdefault("chart", "functional" if isinstance(obj, CorrelationFunctional) else "box")
        entries = [
            {"c": to_bitstring(c, n), "s": to_bitstring(s, n), "value": format_rational(obj[(c, s)])}
            for c, s in obj
        ]
        return Document("correlations", n, entries, meta)
    if isinstance(obj, Certificate):
        meta["verdict"] = obj.verdict
        if obj.reason:
            meta["reason"] = obj.reason
        if obj.local:
            order = {w: i for i, w in enumerate(lex_words(obj.n))}
            items = sorted(obj.weights.items(), key=lambda kv: (order[kv[0].a.bits], order[kv[0].b.bits]))
            entries = [{"a": str(d.a), "b": str(d.b), "value": format_rational(w)} for d, w in items]
        else:
            meta["value"] = format_rational(obj.value)
            entries = _table_entries(obj.separator)
        return Document("certificate", obj.n, entries, meta)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


# --------------------------------------------------------------------------
# Parsing


def _entry_lines(text: str) -> list[int]:
    """Line numbers (1-based) of each entry object inside the entries array."""
    lines = []
    depth_in = False
    for i, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not depth_in:
            if stripped.startswith('"entries"'):
                depth_in = True
                if stripped.rstrip(",").endswith("[]"):
                    break
                if "{" in stripped.split("[", 1)[-1]:
                    lines.append(i)
            continue
        if stripped.startswith("{"):
            lines.append(i)
        elif stripped.startswith("]"):
            break
    return lines


def loads(text: str, source: str = "<input>") -> Document:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"invalid JSON: {exc.msg}", line=exc.lineno, source=source) from None
    if not isinstance(raw, dict):
        raise DocumentError("top level must be an object", line=1, source=source)
    for key in ("kind", "n", "entries"):
        if key not in raw:
            raise DocumentError(f"missing field {key!r}", field_path=key, source=source)
    kind, n, entries = raw["kind"], raw["n"], raw["entries"]
    if kind not in KINDS:
        raise DocumentError(f"unknown kind {kind!r}; expected one of {', '.join(KINDS)}",
                            field_path="kind", source=source)
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise DocumentError(f"n must be a positive integer, got {n!r}", field_path="n", source=source)
    if not isinstance(entries, list):
        raise DocumentError("entries must be a list", field_path="entries", source=source)
    metadata = raw.get("metadata", {})
    if not isinstance(metadata, dict):
        raise DocumentError("metadata must be an object", field_path="metadata", source=source)
    line_of = _entry_lines(text)
    for i, e in enumerate(entries):
        if not isinstance(e, dict):
            raise DocumentError("entry must be an object", line=_nth(line_of, i),
                                field_path=f"entries[{i}]", source=source)
    return Document(kind, n, entries, metadata)


def _nth(lines: list[int], i: int) -> int | None:
    return lines[i] if i < len(lines) else None


def from_document(doc: Document, strict: bool = False, limit: int | None = None,
                  text: str | None = None, source: str = "<input>"):
    """Rebuild the in-memory object a document describes."""
    line_of = _entry_lines(text) if text is not None else []
    try:
        check_parties(doc.n, limit)
    except DimensionError as exc:
        raise DocumentError(str(exc), field_path="n", source=source) from None
    n = doc.n

    def fail(msg: str, i: int, fld: str):
        raise DocumentError(msg, line=_nth(line_of, i), field_path=f"entries[{i}].{fld}", source=source)

    def word(e: dict, key: str, i: int) -> int:
        if key not in e:
            fail(f"missing field {key!r}", i, key)
        if not isinstance(e[key], str):
            fail(f"bitstring expected, got {e[key]!r}", i, key)
        try:
            return coerce_word(e[key], n)
        except DimensionError as exc:
            fail(str(exc), i, key)

    def value(e: dict, i: int) -> Fraction:
        if "value" not in e:
            fail("missing field 'value'", i, "value")
        try:
            return parse_rational(e["value"], strict=strict)
        except ValueError as exc:
            fail(str(exc), i, "value")

    if doc.kind in ("box", "functional") or (doc.kind == "certificate" and doc.metadata.get("verdict") == "nonlocal"):
        table: dict[int, Fraction] = {}
        for i, e in enumerate(doc.entries):
            s, a = word(e, "s", i), word(e, "a", i)
            idx = (s << n) | a
            if idx in table:
                fail("duplicate entry", i, "s")
            table[idx] = value(e, i)
        size = 1 << (2 * n)
        if strict and len(table) != size:
            raise DocumentError(f"strict mode requires all {size} entries, found {len(table)}",
                                field_path="entries", source=source)
        vals = [table.get(i, Fraction(0)) for i in range(size)]
        if doc.kind == "box":
            box = Box(n, vals, check=False)
            problem = box.defect()
            if problem:
                raise DocumentError(f"not a valid box: {problem}", field_path="entries", source=source)
            return box
        functional = BellFunctional(n, vals)
        if doc.kind == "functional":
            return functional
        return Certificate("nonlocal", n, separator=functional,
                           value=_meta_rational(doc, "value", strict, source),
                           reason=str(doc.metadata.get("reason", "")))

    if doc.kind == "correlations":
        data: dict[tuple[int, int], Fraction] = {}
        for i, e in enumerate(doc.entries):
            c, s = word(e, "c", i), word(e, "s", i)
            if s & ~c:
                fail(f"setting {e['s']} is not inside {e['c']}", i, "s")
            if (c, s) in data:
                fail("duplicate entry", i, "c")
            data[(c, s)] = value(e, i)
        cls = CorrelationFunctional if doc.metadata.get("chart") == "functional" else CorrelationTable
        try:
            return cls(n, data)
        except BellError as exc:
            raise DocumentError(str(exc), field_path="entries", source=source) from None

    # local certificate
    if doc.metadata.get("verdict") != "local":
        raise DocumentError("certificate needs metadata.verdict 'local' or 'nonlocal'",
                            field_path="metadata.verdict", source=source)
    weights = {}
    for i, e in enumerate(doc.entries):
        a, b = word(e, "a", i), word(e, "b", i)
        d = DeterministicStrategy.of(a, b, n)
        if d in weights:
            fail("duplicate strategy", i, "a")
        weights[d] = value(e, i)
    return Certificate("local", n, weights=weights, reason=str(doc.metadata.get("reason", "")))


def _meta_rational(doc: Document, key: str, strict: bool, source: str) -> Fraction | None:
    if key not in doc.metadata:
        return None
    try:
        return parse_rational(doc.metadata[key], strict=strict)
    except ValueError as exc:
        raise DocumentError(str(exc), field_path=f"metadata.{key}", source=source) from None


def serialize(obj, metadata: dict | None = None) -> str:
    return dumps(to_document(obj, metadata))


def parse(text: str, strict: bool = False, limit: int | None = None, source: str = "<input>"):
    return from_document(loads(text, source), strict=strict, limit=limit, text=text, source=source)
