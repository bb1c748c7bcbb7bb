"""ASHACL: validate RDF data graphs against shapes graphs."""

from .components import Constraint, ViolationRecord, eval_constraint, registry
from .engine import (
    ResultsStructure,
    ValidationFailure,
    Validator,
    build_report,
    combine,
    conforms,
    validate_graph,
    validate_results_graph,
    validate_shape,
    validate_term,
)
from .graph import Graph, graph_union, is_instance, isomorphic, list_members, values
from .paths import IllFormedPath, compile_path, encode_path, eval_path, path_equivalent
from .shapes import Shape, check_shape, explicit_shapes, is_recursive, shapes_closure
from .terms import OWL, RDF, RDFS, SH, XSD, BNode, IRI, Literal
from .turtle import ParseError, parse, parse_file, serialize

__all__ = [
    "BNode", "IRI", "Literal", "RDF", "RDFS", "OWL", "SH", "XSD",
    "Graph", "values", "list_members", "is_instance", "graph_union", "isomorphic",
    "parse", "parse_file", "serialize", "ParseError",
    "compile_path", "eval_path", "encode_path", "path_equivalent", "IllFormedPath",
    "Shape", "explicit_shapes", "shapes_closure", "check_shape", "is_recursive",
    "registry", "Constraint", "ViolationRecord", "eval_constraint",
    "Validator", "ResultsStructure", "ValidationFailure", "validate_graph", "validate_shape",
    "validate_term", "conforms", "combine", "build_report", "validate_results_graph",
]
