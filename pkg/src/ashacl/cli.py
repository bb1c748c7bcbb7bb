"""Command-line processor: validate a data graph against a shapes graph."""

from __future__ import annotations

import argparse
import logging
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import TextIO
from urllib.parse import unquote, urlparse

from .engine import (
    DEFAULT_MAX_RESULTS,
    ValidationFailure,
    Validator,
    build_report,
    validate_results_graph,
)
from .graph import Graph, graph_union
from .terms import OWL, SH, IRI, Term
from .turtle import ParseError, parse_file, parse_term, serialize

EXIT_CONFORMS = 0
EXIT_NOT_CONFORMS = 1
EXIT_FAILURE = 2
EXIT_USAGE = 3


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    data_path: Path
    shapes_path: Path | None = None
    mode: str = "report"  # report | conforms
    out_format: str = "turtle"
    out_path: Path | None = None
    focus_shape: IRI | None = None
    focus_node: Term | None = None
    resolve_imports: bool = False
    shapes_from_data: bool = False
    import_root: Path | None = None
    import_prefix: str | None = None
    max_results: int = DEFAULT_MAX_RESULTS
    self_check: bool = False


class Resolver:
    """Maps import IRIs to local files under a root directory; never touches the network."""

    def __init__(self, root: Path, prefix: str | None = None):
        self.root = root
        self.prefix = prefix

    def path_for(self, iri: str) -> Path:
        if iri.startswith("file:"):
            return Path(unquote(urlparse(iri).path))
        if self.prefix and iri.startswith(self.prefix):
            return self.root / unquote(iri[len(self.prefix):])
        parsed = urlparse(iri)
        rel = parsed.path if parsed.scheme else iri
        return self.root / unquote(rel.lstrip("/"))


def _load(path: Path) -> Graph:
    try:
        return parse_file(path)
    except FileNotFoundError:
        raise UsageError(f"{path}: no such file") from None
    except IsADirectoryError:
        raise UsageError(f"{path}: is a directory") from None
    except ParseError as exc:
        raise UsageError(f"{path}:{exc.diagnostic}") from None
    except UnicodeDecodeError as exc:
        raise UsageError(f"{path}: not UTF-8 ({exc.reason})") from None


def merge_locations(graph: Graph, locations: list[Term], resolver: Resolver, seen: set[Path]) -> Graph:
    for loc in locations:
        if not isinstance(loc, IRI):
            continue
        path = resolver.path_for(loc.value).resolve()
        if path in seen:
            continue
        seen.add(path)
        graph = graph_union([graph, _load(path)], merge=True)
    return graph


def with_imports(graph: Graph, resolver: Resolver, seen: set[Path]) -> Graph:
    """Merge owl:imports targets until no new location appears."""
    while True:
        pending = sorted({o for _, o in graph.subject_objects(OWL.imports)
                          if isinstance(o, IRI) and resolver.path_for(o.value).resolve() not in seen},
                         key=lambda t: t.value)
        if not pending:
            return graph
        graph = merge_locations(graph, pending, resolver, seen)


def run(cfg: RunConfig, stdout: TextIO | None = None, stderr: TextIO | None = None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        return _run(cfg, stdout, stderr)
    except UsageError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_USAGE
    except ValidationFailure as exc:
        print(f"failure: {exc.code}: {exc.detail}", file=stderr)
        for d in exc.diagnostics:
            print(f"  {d}", file=stderr)
        return EXIT_FAILURE


def _run(cfg: RunConfig, stdout: TextIO, stderr: TextIO) -> int:
    if cfg.focus_node is not None and cfg.focus_shape is None:
        raise UsageError("--node requires --shape")
    if cfg.shapes_path is None and not cfg.shapes_from_data:
        raise UsageError("--shapes is required unless --shapes-from-data is given")
    inputs = [cfg.data_path] + ([cfg.shapes_path] if cfg.shapes_path else [])
    if cfg.out_path is not None and any(cfg.out_path.resolve() == p.resolve() for p in inputs):
        raise UsageError("refusing to overwrite an input file")

    root = cfg.import_root or Path(os.environ.get("ASHACL_IMPORT_ROOT") or (cfg.shapes_path or cfg.data_path).parent)
    resolver = Resolver(root, cfg.import_prefix or os.environ.get("ASHACL_IMPORT_PREFIX"))

    data = _load(cfg.data_path)
    shapes = _load(cfg.shapes_path) if cfg.shapes_path else Graph()
    shapes_seen = {cfg.shapes_path.resolve()} if cfg.shapes_path else set()
    if cfg.resolve_imports:
        data = with_imports(data, resolver, {cfg.data_path.resolve()})
    if cfg.shapes_from_data:
        locations = sorted({o for _, o in data.subject_objects(SH.shapesGraph)}, key=str)
        shapes = merge_locations(shapes, locations, resolver, shapes_seen)
    if cfg.resolve_imports:
        shapes = with_imports(shapes, resolver, shapes_seen)

    validator = Validator(data, shapes, max_results=cfg.max_results)
    if cfg.focus_node is not None:
        results = validator.validate_term(cfg.focus_node, cfg.focus_shape)
    elif cfg.focus_shape is not None:
        results = validator.validate_shape(cfg.focus_shape)
    else:
        results = validator.validate_graph()

    code = EXIT_CONFORMS if results.conforms else EXIT_NOT_CONFORMS
    if cfg.mode == "conforms":
        print("true" if results.conforms else "false", file=stdout)
        return code

    report = build_report(results)
    if cfg.self_check:
        problems = validate_results_graph(report)
        if problems:
            for p in problems:
                print(f"self-check: {p}", file=stderr)
            return EXIT_FAILURE
    text = serialize(report, cfg.out_format)
    if cfg.out_path is not None:
        cfg.out_path.write_text(text, encoding="utf-8")
    else:
        stdout.write(text)
    return code


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def _iri_arg(text: str) -> IRI:
    text = text.strip()
    if text.startswith("<") and text.endswith(">"):
        text = text[1:-1]
    if not text or any(c in text for c in ' <>"'):
        raise argparse.ArgumentTypeError(f"not an IRI: {text!r}")
    return IRI(text)


def _term_arg(text: str) -> Term:
    stripped = text.strip()
    if stripped[:1] in ('<', '"', "_"):
        try:
            return parse_term(stripped)
        except ParseError as exc:
            raise argparse.ArgumentTypeError(f"bad term {text!r}: {exc}") from None
    return _iri_arg(stripped)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ashacl", description="Validate an RDF data graph against a shapes graph.")
    p.add_argument("--data", required=True, type=Path, metavar="PATH", help="data graph (.ttl or .nt)")
    p.add_argument("--shapes", type=Path, metavar="PATH", help="shapes graph (.ttl or .nt)")
    p.add_argument("--conforms", action="store_true", help="print true/false instead of a report")
    p.add_argument("--out", type=Path, metavar="PATH", help="write the report here instead of stdout")
    p.add_argument("--format", choices=("turtle", "ntriples"), default="turtle", help="report syntax")
    p.add_argument("--shape", type=_iri_arg, metavar="IRI", help="validate against this shape only")
    p.add_argument("--node", type=_term_arg, metavar="TERM",
                   help="focus node, an IRI or an N-Triples literal; requires --shape")
    p.add_argument("--imports", action="store_true", help="merge owl:imports targets from local files")
    p.add_argument("--shapes-from-data", action="store_true",
                   help="merge graphs named by sh:shapesGraph in the data graph into the shapes graph")
    p.add_argument("--import-root", type=Path, metavar="DIR",
                   help="directory import locations resolve under (default: $ASHACL_IMPORT_ROOT, "
                        "else the shapes file's directory)")
    p.add_argument("--import-prefix", metavar="IRI", help="IRI prefix stripped from import locations")
    p.add_argument("--max-results", type=int, default=DEFAULT_MAX_RESULTS, metavar="N")
    p.add_argument("--self-check", action="store_true", help="audit the report before writing it")
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    cfg = RunConfig(
        data_path=args.data,
        shapes_path=args.shapes,
        mode="conforms" if args.conforms else "report",
        out_format=args.format,
        out_path=args.out,
        focus_shape=args.shape,
        focus_node=args.node,
        resolve_imports=args.imports,
        shapes_from_data=args.shapes_from_data,
        import_root=args.import_root,
        import_prefix=args.import_prefix,
        max_results=args.max_results,
        self_check=args.self_check,
    )
    return run(cfg)
