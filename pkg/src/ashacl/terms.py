"""RDF terms and the namespaces used throughout the processor."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

XSD_NS = "http://www.w3.org/2001/XMLSchema#"
RDF_NS = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
RDFS_NS = "http://www.w3.org/2000/01/rdf-schema#"
OWL_NS = "http://www.w3.org/2002/07/owl#"
SH_NS = "http://example.org/ns/shacl#"

PREFIXES = {
    "rdf": RDF_NS,
    "rdfs": RDFS_NS,
    "xsd": XSD_NS,
    "owl": OWL_NS,
    "sh": SH_NS,
}


@dataclass(frozen=True, slots=True)
class IRI:
    value: str

    def __str__(self) -> str:
        return self.value

    def n3(self) -> str:
        return "<" + _escape_iri(self.value) + ">"


@dataclass(frozen=True, slots=True)
class BNode:
    id: str

    def __str__(self) -> str:
        return "_:" + self.id

    def n3(self) -> str:
        return "_:" + self.id


@dataclass(frozen=True, slots=True, init=False)
class Literal:
    lexical: str
    datatype: str
    lang: str | None

    def __init__(self, lexical: str, datatype: str | None = None, lang: str | None = None):
        if lang is not None:
            if datatype not in (None, RDF_NS + "langString"):
                raise ValueError("a language-tagged literal must have datatype rdf:langString")
            lang = lang.lower()
            datatype = RDF_NS + "langString"
        elif datatype is None:
            datatype = XSD_NS + "string"
        elif datatype == RDF_NS + "langString":
            raise ValueError("rdf:langString literal requires a language tag")
        object.__setattr__(self, "lexical", lexical)
        object.__setattr__(self, "datatype", datatype)
        object.__setattr__(self, "lang", lang)

    def __str__(self) -> str:
        return self.lexical

    def n3(self) -> str:
        quoted = '"' + escape_string(self.lexical) + '"'
        if self.lang is not None:
            return quoted + "@" + self.lang
        if self.datatype == XSD_NS + "string":
            return quoted
        return quoted + "^^" + IRI(self.datatype).n3()


Term = Union[IRI, BNode, Literal]


class Namespace(str):
    """String subclass whose attribute and item access mint IRIs."""

    def __getattr__(self, name: str) -> IRI:
        if name.startswith("__"):
            raise AttributeError(name)
        return IRI(str(self) + name)

    def __getitem__(self, name: str) -> IRI:  # type: ignore[override]
        return IRI(str(self) + name)


XSD = Namespace(XSD_NS)
RDF = Namespace(RDF_NS)
RDFS = Namespace(RDFS_NS)
OWL = Namespace(OWL_NS)
SH = Namespace(SH_NS)

XSD_STRING = XSD_NS + "string"
XSD_BOOLEAN = XSD_NS + "boolean"
XSD_INTEGER = XSD_NS + "integer"
XSD_DECIMAL = XSD_NS + "decimal"
XSD_DOUBLE = XSD_NS + "double"
RDF_LANGSTRING = RDF_NS + "langString"

TRUE = Literal("true", XSD_BOOLEAN)
FALSE = Literal("false", XSD_BOOLEAN)


def is_iri(t: object) -> bool:
    return isinstance(t, IRI)


def is_blank(t: object) -> bool:
    return isinstance(t, BNode)


def is_literal(t: object) -> bool:
    return isinstance(t, Literal)


def is_lang_string(t: object) -> bool:
    return isinstance(t, Literal) and t.lang is not None


def is_xsd_string(t: object) -> bool:
    return isinstance(t, Literal) and t.datatype == XSD_STRING


def boolean_value(t: Term) -> bool | None:
    """Literal value of an xsd:boolean literal, None when not a valid boolean."""
    if isinstance(t, Literal) and t.datatype == XSD_BOOLEAN:
        lex = t.lexical.strip()
        if lex in ("true", "1"):
            return True
        if lex in ("false", "0"):
            return False
    return None


def integer_value(t: Term) -> int | None:
    """Literal value of an xsd:integer literal, None when ill-typed."""
    if isinstance(t, Literal) and t.datatype == XSD_INTEGER:
        lex = t.lexical.strip()
        body = lex[1:] if lex[:1] in "+-" else lex
        if body.isascii() and body.isdigit():
            return int(lex)
    return None


def term_key(t: Term) -> tuple:
    """Total order used for deterministic output: IRIs, then blanks, then literals.

    Blank ids compare shortlex so that allocator ids ``g9`` < ``g10``.
    """
    if isinstance(t, IRI):
        return (0, t.value)
    if isinstance(t, BNode):
        return (1, len(t.id), t.id)
    return (2, t.lexical, t.datatype, t.lang or "")


def triple_key(t: tuple[Term, Term, Term]) -> tuple:
    return (term_key(t[0]), term_key(t[1]), term_key(t[2]))


_STRING_ESCAPES = {
    "\\": "\\\\",
    '"': '\\"',
    "\n": "\\n",
    "\r": "\\r",
    "\t": "\\t",
    "\b": "\\b",
    "\f": "\\f",
}


def escape_string(s: str) -> str:
    out = []
    for ch in s:
        if ch in _STRING_ESCAPES:
            out.append(_STRING_ESCAPES[ch])
        elif ord(ch) < 0x20 or ord(ch) == 0x7F:
            out.append("\\u%04X" % ord(ch))
        else:
            out.append(ch)
    return "".join(out)


def _escape_iri(s: str) -> str:
    out = []
    for ch in s:
        if ord(ch) <= 0x20 or ch in '<>"{}|^`\\':
            cp = ord(ch)
            out.append("\\u%04X" % cp if cp <= 0xFFFF else "\\U%08X" % cp)
        else:
            out.append(ch)
    return "".join(out)
