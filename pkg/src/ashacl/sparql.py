"""The handful of SPARQL operators and functions that constraint evaluation relies on."""

from __future__ import annotations

import datetime as _dt
import enum
import re
import struct
from decimal import Decimal

from .terms import XSD_NS, IRI, Literal, Term


class Tristate(enum.Enum):
    TRUE = "true"
    FALSE = "false"
    ERROR = "error"

    @classmethod
    def of(cls, b: bool) -> Tristate:
        return cls.TRUE if b else cls.FALSE


INTEGER_TYPES = frozenset(XSD_NS + t for t in (
    "integer", "nonPositiveInteger", "negativeInteger", "long", "int", "short", "byte",
    "nonNegativeInteger", "unsignedLong", "unsignedInt", "unsignedShort", "unsignedByte",
    "positiveInteger",
))
DECIMAL = XSD_NS + "decimal"
FLOAT = XSD_NS + "float"
DOUBLE = XSD_NS + "double"
STRING = XSD_NS + "string"
BOOLEAN = XSD_NS + "boolean"
DATETIME = XSD_NS + "dateTime"

NUMERIC_TYPES = INTEGER_TYPES | {DECIMAL, FLOAT, DOUBLE}
COMPARABLE_TYPES = NUMERIC_TYPES | {STRING, BOOLEAN, DATETIME}

_INT_RE = re.compile(r"[+-]?[0-9]+\Z")
_DEC_RE = re.compile(r"[+-]?(?:[0-9]+(?:\.[0-9]*)?|\.[0-9]+)\Z")
_DBL_RE = re.compile(r"(?:[+-]?(?:[0-9]+(?:\.[0-9]*)?|\.[0-9]+)(?:[eE][+-]?[0-9]+)?|[+-]?INF|NaN)\Z")
_DT_RE = re.compile(
    r"(-?[0-9]{4,})-([0-9]{2})-([0-9]{2})T([0-9]{2}):([0-9]{2}):([0-9]{2})(\.[0-9]+)?"
    r"(Z|[+-][0-9]{2}:[0-9]{2})?\Z"
)


def _numeric(lit: Literal) -> tuple[str, object] | None:
    lex = lit.lexical.strip()
    if lit.datatype in INTEGER_TYPES:
        return ("exact", Decimal(lex)) if _INT_RE.match(lex) else None
    if lit.datatype == DECIMAL:
        return ("exact", Decimal(lex)) if _DEC_RE.match(lex) else None
    if lit.datatype in (FLOAT, DOUBLE):
        if not _DBL_RE.match(lex):
            return None
        x = float(lex.replace("INF", "inf"))
        if lit.datatype == FLOAT:
            x = struct.unpack("f", struct.pack("f", x))[0] if abs(x) < 3.5e38 or x != x else x
        return ("float", x)
    return None


def _datetime_seconds(lex: str) -> Decimal | None:
    """Seconds on a UTC timeline; values without a timezone are read as UTC."""
    m = _DT_RE.match(lex.strip())
    if not m:
        return None
    year, month, day, hour, minute, sec = (int(x) for x in m.group(1, 2, 3, 4, 5, 6))
    extra_day = 0
    if hour == 24:
        if minute or sec or (m.group(7) and Decimal(m.group(7)) != 0):
            return None
        hour, extra_day = 0, 1
    try:
        ordinal = _dt.date(year, month, day).toordinal()
    except ValueError:
        return None
    if minute > 59 or sec > 59:
        return None
    total = Decimal((ordinal + extra_day) * 86400 + hour * 3600 + minute * 60 + sec)
    if m.group(7):
        total += Decimal("0" + m.group(7))
    tz = m.group(8)
    if tz and tz != "Z":
        sign = -1 if tz[0] == "-" else 1
        hh, mm = int(tz[1:3]), int(tz[4:6])
        if hh > 14 or mm > 59:
            return None
        total -= sign * (hh * 3600 + mm * 60)
    return total


def _boolean(lex: str) -> bool | None:
    lex = lex.strip()
    if lex in ("true", "1"):
        return True
    if lex in ("false", "0"):
        return False
    return None


def comparison_key(t: Term) -> tuple[str, object] | None:
    """(family, value) for a term usable with SPARQL ordering operators, else None."""
    if not isinstance(t, Literal) or t.lang is not None:
        return None
    if t.datatype in NUMERIC_TYPES:
        return _numeric(t)
    if t.datatype == STRING:
        return ("string", t.lexical)
    if t.datatype == BOOLEAN:
        b = _boolean(t.lexical)
        return None if b is None else ("boolean", b)
    if t.datatype == DATETIME:
        s = _datetime_seconds(t.lexical)
        return None if s is None else ("dateTime", s)
    return None


def comparable(t: Term) -> bool:
    return comparison_key(t) is not None


_OPS = {
    "<": lambda a, b: a < b,
    "<=": lambda a, b: a <= b,
    ">": lambda a, b: a > b,
    ">=": lambda a, b: a >= b,
}


def sparql_compare(op: str, a: Term, b: Term) -> Tristate:
    """``a op b`` under SPARQL operator mapping; type errors become ERROR."""
    fn = _OPS[op]
    ka, kb = comparison_key(a), comparison_key(b)
    if ka is None or kb is None:
        return Tristate.ERROR
    fa, va = ka
    fb, vb = kb
    numeric = {"exact", "float"}
    if fa in numeric and fb in numeric:
        if fa == "float" or fb == "float":
            va, vb = float(va), float(vb)
        return Tristate.of(fn(va, vb))
    if fa != fb:
        return Tristate.ERROR
    return Tristate.of(fn(va, vb))


def sparql_str(t: Term) -> str:
    if isinstance(t, IRI):
        return t.value
    if isinstance(t, Literal):
        return t.lexical
    raise TypeError(f"str() is not defined on blank node {t}")


_FLAG_BITS = {"i": re.IGNORECASE, "s": re.DOTALL, "m": re.MULTILINE, "x": re.VERBOSE}


def regex_match(s: str, pattern: str, flags: str = "") -> Tristate:
    """SPARQL REGEX on Python's engine.

    Only constructs shared with XPath regular expressions are meaningful;
    Python-only syntax such as backreferences or lookaround is not rejected.
    ``$`` matches only at the very end, as in XPath.
    """
    bits = 0
    for ch in flags:
        if ch not in _FLAG_BITS:
            return Tristate.ERROR
        bits |= _FLAG_BITS[ch]
    if not bits & re.MULTILINE:
        pattern = _anchor_dollar(pattern)
    try:
        rx = re.compile(pattern, bits)
    except (re.error, OverflowError):
        return Tristate.ERROR
    return Tristate.of(rx.search(s) is not None)


def _anchor_dollar(pattern: str) -> str:
    # Python's "$" also matches before a final newline; XPath's does not.
    out = []
    i = 0
    in_class = False
    while i < len(pattern):
        ch = pattern[i]
        if ch == "\\" and i + 1 < len(pattern):
            out.append(pattern[i:i + 2])
            i += 2
            continue
        if ch == "[":
            in_class = True
        elif ch == "]":
            in_class = False
        if ch == "$" and not in_class:
            out.append(r"\Z")
        else:
            out.append(ch)
        i += 1
    return "".join(out)


def str_starts(s: str, prefix: str) -> bool:
    return s.startswith(prefix)


def lang_matches(tag: str, lang_range: str) -> bool:
    """Basic filtering as in RFC 4647, case-insensitive."""
    if lang_range == "*":
        return tag != ""
    tag, lang_range = tag.lower(), lang_range.lower()
    return tag == lang_range or tag.startswith(lang_range + "-")

