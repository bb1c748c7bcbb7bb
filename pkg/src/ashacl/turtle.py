"""Turtle-subset and N-Triples parsing and serialization.

The Turtle reader covers ``@prefix``/``@base``, prefixed names, ``a``,
predicate-object and object lists, blank node labels, ``[...]`` property
lists, ``(...)`` collections, typed and language-tagged strings and the
integer/decimal/double/boolean shorthands.  SPARQL-style ``PREFIX`` is not
accepted.  Relative IRIs are resolved by plain concatenation with the base.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

from .graph import FIRST, NIL, REST, TYPE, Graph
from .terms import (
    PREFIXES,
    XSD_BOOLEAN,
    XSD_DECIMAL,
    XSD_DOUBLE,
    XSD_INTEGER,
    XSD_STRING,
    BNode,
    IRI,
    Literal,
    Term,
    escape_string,
)


@dataclass(frozen=True)
class ParseDiagnostic:
    line: int
    column: int
    message: str
    severity: str = "error"

    def __str__(self) -> str:
        return f"{self.line}:{self.column}: {self.message}"


class ParseError(ValueError):
    def __init__(self, diagnostic: ParseDiagnostic):
        super().__init__(str(diagnostic))
        self.diagnostic = diagnostic


_SCHEME = re.compile(r"[A-Za-z][A-Za-z0-9+.\-]*:")
_LANGTAG = re.compile(r"[A-Za-z]+(?:-[A-Za-z0-9]+)*")
_NUMBER = re.compile(
    r"[+-]?(?:(?P<dbl>(?:[0-9]+\.[0-9]*|\.[0-9]+|[0-9]+)[eE][+-]?[0-9]+)"
    r"|(?P<dec>[0-9]*\.[0-9]+)|(?P<int>[0-9]+))"
)
_ECHAR = {"t": "\t", "b": "\b", "n": "\n", "r": "\r", "f": "\f", '"': '"', "'": "'", "\\": "\\"}
_LOCAL_ESCAPABLE = set("_~.-!$&'()*+,;=/?#@%")
_DELIMS = set(" \t\r\n<>\"'()[]{},;#")


def _name_char(ch: str) -> bool:
    return ch.isalnum() or ch in "_-·" or ord(ch) >= 0x300 and ch.isidentifier()


class _Parser:
    def __init__(self, text: str, ntriples: bool, base: str | None):
        self.text = text
        self.pos = 0
        self.ntriples = ntriples
        self.base = base
        self.prefixes: dict[str, str] = {}
        self.graph = Graph()
        self.labels: dict[str, BNode] = {}

    # error reporting

    def fail(self, message: str, pos: int | None = None):
        pos = self.pos if pos is None else pos
        line = self.text.count("\n", 0, pos) + 1
        col = pos - (self.text.rfind("\n", 0, pos) + 1) + 1
        raise ParseError(ParseDiagnostic(line, col, message))

    # lexing helpers

    def skip_ws(self) -> None:
        text = self.text
        while self.pos < len(text):
            ch = text[self.pos]
            if ch in " \t\r\n":
                self.pos += 1
            elif ch == "#":
                nl = text.find("\n", self.pos)
                self.pos = len(text) if nl < 0 else nl + 1
            else:
                break

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str) -> None:
        if self.peek() != ch:
            got = self.text[self.pos] if self.pos < len(self.text) else "end of input"
            self.fail(f"expected {ch!r}, found {got!r}")
        self.pos += 1

    def at_keyword(self, word: str) -> bool:
        end = self.pos + len(word)
        if self.text.startswith(word, self.pos):
            return end >= len(self.text) or self.text[end] in _DELIMS or self.text[end] == "."
        return False

    # grammar

    def document(self) -> Graph:
        while self.peek():
            if self.peek() == "@":
                self.directive()
            else:
                self.triples()
                self.expect(".")
        return self.graph

    def directive(self) -> None:
        start = self.pos
        if self.ntriples:
            self.fail("directives are not allowed in N-Triples")
        if self.text.startswith("@prefix", self.pos):
            self.pos += len("@prefix")
            self.skip_ws()
            m = re.compile(r"([^\W\d_](?:[\w.\-]*[\w\-])?)?:").match(self.text, self.pos)
            if not m:
                self.fail("expected prefix name")
            self.pos = m.end()
            self.skip_ws()
            if self.peek() != "<":
                self.fail("expected IRI after prefix name")
            self.prefixes[m.group(1) or ""] = self.iriref().value
        elif self.text.startswith("@base", self.pos):
            self.pos += len("@base")
            if self.peek() != "<":
                self.fail("expected IRI after @base")
            self.base = self.iriref().value
        else:
            self.fail("unknown directive", start)
        self.expect(".")

    def triples(self) -> None:
        ch = self.peek()
        if ch == "[":
            subj = self.blank_property_list()
            if self.peek() != ".":
                self.predicate_object_list(subj)
            return
        if ch == "(":
            subj = self.collection()
        else:
            subj = self.subject()
        self.predicate_object_list(subj)

    def subject(self) -> Term:
        ch = self.peek()
        if ch == "<":
            return self.iriref()
        if ch == "_":
            return self.blank_label()
        if ch and not self.ntriples and (ch == ":" or ch.isalpha()):
            return self.pname()
        self.fail("expected subject")

    def predicate_object_list(self, subj: Term) -> None:
        while True:
            pred = self.verb()
            self.object_list(subj, pred)
            if self.ntriples or self.peek() != ";":
                return
            while self.peek() == ";":
                self.pos += 1
            if self.peek() in (".", "]", ""):
                return

    def verb(self) -> IRI:
        ch = self.peek()
        if ch == "a" and not self.ntriples and self.at_keyword("a"):
            self.pos += 1
            return TYPE
        if ch == "<":
            return self.iriref()
        if ch and not self.ntriples and (ch == ":" or ch.isalpha()):
            return self.pname()
        self.fail("expected predicate")

    def object_list(self, subj: Term, pred: IRI) -> None:
        while True:
            start = self.pos
            obj = self.object()
            try:
                self.graph.add(subj, pred, obj)
            except ValueError as exc:
                self.fail(str(exc), start)
            if self.ntriples or self.peek() != ",":
                return
            self.pos += 1

    def object(self) -> Term:
        ch = self.peek()
        if ch == "<":
            return self.iriref()
        if ch == "_":
            return self.blank_label()
        if ch in ('"', "'"):
            return self.literal()
        if self.ntriples:
            self.fail("expected object")
        if ch == "[":
            return self.blank_property_list()
        if ch == "(":
            return self.collection()
        if ch in "+-." or ch.isdigit():
            return self.number()
        if self.at_keyword("true") or self.at_keyword("false"):
            word = "true" if self.text.startswith("true", self.pos) else "false"
            self.pos += len(word)
            return Literal(word, XSD_BOOLEAN)
        if ch == ":" or ch.isalpha():
            return self.pname()
        self.fail("expected object")

    def blank_property_list(self) -> BNode:
        self.expect("[")
        node = self.graph.fresh_blank()
        if self.peek() != "]":
            self.predicate_object_list(node)
        self.expect("]")
        return node

    def collection(self) -> Term:
        self.expect("(")
        items: list[Term] = []
        while self.peek() != ")":
            if not self.peek():
                self.fail("unterminated collection")
            items.append(self.object())
        self.pos += 1
        if not items:
            return NIL
        cells = [self.graph.fresh_blank() for _ in items]
        for i, (cell, item) in enumerate(zip(cells, items)):
            self.graph.add(cell, FIRST, item)
            self.graph.add(cell, REST, cells[i + 1] if i + 1 < len(cells) else NIL)
        return cells[0]

    # terminals

    def iriref(self) -> IRI:
        start = self.pos
        self.expect("<")
        out = []
        text = self.text
        while True:
            if self.pos >= len(text):
                self.fail("unterminated IRI", start)
            ch = text[self.pos]
            if ch == ">":
                self.pos += 1
                break
            if ch == "\\":
                nxt = text[self.pos + 1:self.pos + 2]
                if nxt in ("u", "U"):
                    out.append(self.unicode_escape())
                    continue
                if nxt == "#":
                    # prefix declarations copied out of LaTeX carry "\#"
                    out.append("#")
                    self.pos += 2
                    continue
                self.fail("invalid escape in IRI")
            if ord(ch) <= 0x20 or ch in '<"{}|^`':
                self.fail(f"invalid character {ch!r} in IRI")
            out.append(ch)
            self.pos += 1
        value = "".join(out)
        if not _SCHEME.match(value):
            if self.ntriples:
                self.fail("relative IRI in N-Triples", start)
            if self.base is not None:
                value = self.base + value
        return IRI(value)

    def unicode_escape(self) -> str:
        kind = self.text[self.pos + 1]
        width = 4 if kind == "u" else 8
        digits = self.text[self.pos + 2:self.pos + 2 + width]
        if len(digits) != width or not all(c in "0123456789abcdefABCDEF" for c in digits):
            self.fail("malformed unicode escape")
        cp = int(digits, 16)
        if cp > 0x10FFFF or 0xD800 <= cp <= 0xDFFF:
            self.fail("escape is not a Unicode scalar value")
        self.pos += 2 + width
        return chr(cp)

    def pname(self) -> IRI:
        start = self.pos
        text = self.text
        m = re.compile(r"([^\W\d_](?:[\w.\-]*[\w\-])?)?:").match(text, self.pos)
        if not m:
            self.fail("expected prefixed name")
        prefix = m.group(1) or ""
        if prefix not in self.prefixes:
            self.fail(f"undeclared prefix {prefix!r}", start)
        self.pos = m.end()
        local = []
        raw_dots = 0
        while self.pos < len(text):
            ch = text[self.pos]
            if ch == "\\" and text[self.pos + 1:self.pos + 2] in _LOCAL_ESCAPABLE:
                local.append(text[self.pos + 1])
                raw_dots = 0
                self.pos += 2
            elif ch == "%" and re.match(r"%[0-9A-Fa-f]{2}", text[self.pos:self.pos + 3]):
                local.append(text[self.pos:self.pos + 3])
                raw_dots = 0
                self.pos += 3
            elif _name_char(ch) or ch == ":" or (ch == "." and local):
                local.append(ch)
                raw_dots = raw_dots + 1 if ch == "." else 0
                self.pos += 1
            else:
                break
        # a local name never ends in an unescaped dot
        if raw_dots:
            del local[-raw_dots:]
            self.pos -= raw_dots
        return IRI(self.prefixes[prefix] + "".join(local))

    def blank_label(self) -> BNode:
        start = self.pos
        if not self.text.startswith("_:", self.pos):
            self.fail("expected blank node label")
        self.pos += 2
        m = re.compile(r"[\w](?:[\w.\-]*[\w\-])?").match(self.text, self.pos)
        if not m:
            self.fail("empty blank node label", start)
        self.pos = m.end()
        label = m.group(0)
        node = self.labels.get(label)
        if node is None:
            node = self.labels[label] = self.graph.fresh_blank()
        return node

    def literal(self) -> Literal:
        lexical = self.string()
        text = self.text
        if text.startswith("@", self.pos):
            m = _LANGTAG.match(text, self.pos + 1)
            if not m:
                self.fail("malformed language tag")
            self.pos = m.end()
            return Literal(lexical, lang=m.group(0))
        if text.startswith("^^", self.pos):
            self.pos += 2
            if text.startswith("<", self.pos):
                dt = self.iriref()
            elif self.ntriples:
                self.fail("datatype must be an IRI reference")
            else:
                dt = self.pname()
            if dt.value.endswith("#langString") and dt.value.startswith("http://www.w3.org/1999/02/22-rdf-syntax-ns"):
                self.fail("rdf:langString requires a language tag")
            return Literal(lexical, dt.value)
        return Literal(lexical, XSD_STRING)

    def string(self) -> str:
        start = self.pos
        text = self.text
        quote = text[self.pos]
        long = text.startswith(quote * 3, self.pos)
        if long and self.ntriples:
            self.fail("long strings are not allowed in N-Triples")
        if self.ntriples and quote == "'":
            self.fail("single-quoted strings are not allowed in N-Triples")
        delim = quote * 3 if long else quote
        self.pos += len(delim)
        out = []
        while True:
            if self.pos >= len(text):
                self.fail("unterminated string", start)
            if text.startswith(delim, self.pos):
                self.pos += len(delim)
                return "".join(out)
            ch = text[self.pos]
            if ch == "\\":
                nxt = text[self.pos + 1:self.pos + 2]
                if nxt in ("u", "U"):
                    out.append(self.unicode_escape())
                    continue
                if nxt in _ECHAR:
                    out.append(_ECHAR[nxt])
                    self.pos += 2
                    continue
                self.fail("invalid string escape")
            if not long and ch in "\r\n":
                self.fail("newline in short string")
            out.append(ch)
            self.pos += 1

    def number(self) -> Literal:
        m = _NUMBER.match(self.text, self.pos)
        if not m:
            self.fail("expected a number")
        self.pos = m.end()
        if m.group("dbl"):
            return Literal(m.group(0), XSD_DOUBLE)
        if m.group("dec"):
            return Literal(m.group(0), XSD_DECIMAL)
        return Literal(m.group(0), XSD_INTEGER)


def parse(source: str, format: str = "turtle", base: str | None = None) -> Graph:
    """Parse a document into a new Graph; raises ParseError on the first defect."""
    if format not in ("turtle", "ntriples"):
        raise ValueError(f"unknown format {format!r}")
    return _Parser(source, format == "ntriples", base).document()


def guess_format(path: str | Path) -> str:
    return "ntriples" if str(path).endswith(".nt") else "turtle"


def parse_file(path: str | Path, format: str | None = None) -> Graph:
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    return parse(text, format or guess_format(path))


def parse_term(text: str) -> Term:
    """One term in N-Triples syntax (``<iri>``, ``_:b`` or a literal)."""
    p = _Parser(text.strip(), True, None)
    ch = p.peek()
    if ch == "<":
        term = p.iriref()
    elif ch == "_":
        term = p.blank_label()
    elif ch == '"':
        term = p.literal()
    else:
        p.fail("expected an N-Triples term")
    if p.peek():
        p.fail("trailing input after term")
    return term


_SAFE_LOCAL = re.compile(r"[A-Za-z_][A-Za-z0-9_\-]*\Z")


class _Writer:
    def __init__(self, turtle: bool):
        self.turtle = turtle
        self.labels: dict[BNode, str] = {}
        self.used_prefixes: set[str] = set()

    def iri(self, value: str) -> str:
        if self.turtle:
            for prefix, ns in PREFIXES.items():
                if value.startswith(ns) and _SAFE_LOCAL.match(value[len(ns):]):
                    self.used_prefixes.add(prefix)
                    return prefix + ":" + value[len(ns):]
        return IRI(value).n3()

    def term(self, t: Term) -> str:
        if isinstance(t, IRI):
            return self.iri(t.value)
        if isinstance(t, BNode):
            if t not in self.labels:
                self.labels[t] = "b%d" % len(self.labels)
            return "_:" + self.labels[t]
        quoted = '"' + escape_string(t.lexical) + '"'
        if t.lang is not None:
            return quoted + "@" + t.lang
        if t.datatype == XSD_STRING:
            return quoted
        return quoted + "^^" + self.iri(t.datatype)


def serialize(g: Graph, format: str = "turtle") -> str:
    """Deterministic serialization, triples sorted in term order."""
    if format not in ("turtle", "ntriples"):
        raise ValueError(f"unknown format {format!r}")
    triples = g.sorted_triples()
    if not triples:
        return ""
    if format == "ntriples":
        w = _Writer(turtle=False)
        return "".join(f"{w.term(s)} {w.term(p)} {w.term(o)} .\n" for s, p, o in triples)
    w = _Writer(turtle=True)
    lines: list[str] = []
    current = None
    for s, p, o in triples:
        if s != current:
            if current is not None:
                lines[-1] += " ."
                lines.append("")
            current = s
            lines.append(f"{w.term(s)} {w.term(p)} {w.term(o)}")
        else:
            lines[-1] += " ;"
            lines.append(f"    {w.term(p)} {w.term(o)}")
    lines[-1] += " ."
    header = [f"@prefix {pfx}: <{PREFIXES[pfx]}> ." for pfx in PREFIXES if pfx in w.used_prefixes]
    if header:
        header.append("")
    return "\n".join(header + lines) + "\n"
