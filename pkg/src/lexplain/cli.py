"""``lexplain`` command line.

Exit status: 0 success, 1 usage error, 2 data or format error.  Diagnostics
go to stderr; data goes to stdout or ``--output``.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import logging
import sys
from pathlib import Path

from . import __version__
from .config import Config, ConfigError, load_config
from .corpus import MAGIC, CorpusError, load_index, read_vertical
from .cql import CQLSyntaxError, find_matches, parse_query
from .evaluate import (EvaluationError, aggregate_indicators, aggregate_quality, build_report,
                       coverage_rate, detect_indicators, format_report, read_annotations)
from .explain import TemplateError, compose, parse_structured, render_structured, render_text
from .grammar import GrammarError, bundled_grammar_path, read_grammar, validate_against
from .sketches import CountingError, build_sketches
from .thesaurus import Thesaurus

log = logging.getLogger("lexplain")

DATA_ERRORS = (CorpusError, GrammarError, CQLSyntaxError, TemplateError, ConfigError,
               EvaluationError, CountingError, OSError, UnicodeDecodeError, json.JSONDecodeError,
               KeyError, ValueError)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _load_corpus(path, cfg: Config):
    with open(path, "rb") as fh:
        head = fh.read(len(MAGIC))
    if head == MAGIC:
        return load_index(path)
    return read_vertical(path, cfg.pos_map)


def _load_grammar(path):
    return read_grammar(path if path else bundled_grammar_path())


def _head(args):
    if args.pos not in ("N", "J", "V", "A", "other"):
        raise UsageError(f"unknown POS {args.pos!r}")
    return (args.head, args.pos)


@contextlib.contextmanager
def _output(args):
    if getattr(args, "output", None):
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            yield fh
    else:
        yield sys.stdout


def _sketch_index(args, cfg):
    corpus = _load_corpus(args.corpus, cfg)
    grammar = _load_grammar(args.grammar)
    index = build_sketches(corpus, grammar, cfg.min_pair_freq, cfg.score_mode, jobs=args.jobs)
    return corpus, grammar, index


def cmd_version(args, cfg):
    print(f"lexplain {__version__}")


def cmd_config(args, cfg):
    with _output(args) as out:
        out.write(cfg.dump())


def cmd_ingest(args, cfg):
    corpus = read_vertical(args.input, cfg.pos_map)
    out = args.output or str(Path(args.input).with_suffix(".idx"))
    corpus.save(out)
    log.info("%d tokens, %d sentences -> %s", len(corpus), len(corpus.sentences), out)


def cmd_grammar_check(args, cfg):
    grammar = _load_grammar(args.grammar)
    warnings = validate_against(grammar, _load_corpus(args.corpus, cfg)) if args.corpus else []
    with _output(args) as out:
        out.write(f"{len(grammar.relations)} relations\n")
        for w in warnings:
            out.write(f"warning: {w}\n")


def cmd_cql(args, cfg):
    corpus = _load_corpus(args.corpus, cfg)
    query = parse_query(args.query)
    with _output(args) as out:
        for m in find_matches(query, corpus):
            b1, b2 = m.bindings.get(1, ""), m.bindings.get(2, "")
            out.write(f"{m.start}\t{m.end}\t{b1}\t{b2}\n")


def cmd_sketch(args, cfg):
    _, grammar, index = _sketch_index(args, cfg)
    head = _head(args)
    relations = [args.relation] if args.relation else [
        r.name for r in grammar.relations if r.head_pos == head[1]]
    rows = []
    for rel in relations:
        try:
            rows += [(rel, t) for t in index.word_sketch(head, rel, args.limit)]
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    with _output(args) as out:
        for rel, t in rows:
            out.write(f"{rel}\t{t.collocate[0]}\t{t.pair_freq}\t{t.score:.4f}\n")


def cmd_thesaurus(args, cfg):
    _, _, index = _sketch_index(args, cfg)
    head = _head(args)
    try:
        results = Thesaurus.for_index(index).similar(head, args.limit)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    with _output(args) as out:
        for r in results:
            out.write(f"{r.neighbor[0]}\t{r.similarity:.4f}\n")


def _render(expl, fmt):
    return render_structured(expl) if fmt == "json" else render_text(expl)


def _explain_one(head, index, thes, cfg):
    if head[1] not in cfg.templates:
        raise UsageError(f"no explanation schema for POS {head[1]!r}")
    return compose(head, index, thes, cfg.template_for(head[1]),
                   relation_top_k=cfg.relation_top_k, thesaurus_top_k=cfg.thesaurus_top_k)


def read_headlist(path) -> list[tuple[str, str]]:
    heads = []
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise EvaluationError(f"{path} line {lineno}: expected 'lemma POS'")
        heads.append((parts[0], parts[1]))
    return heads


def output_name(head, fmt) -> str:
    lemma = head[0].replace("/", "_").replace("\\", "_")
    return f"{lemma}.{head[1]}.{'json' if fmt == 'json' else 'txt'}"


def cmd_explain(args, cfg):
    if bool(args.headlist) == bool(args.head):
        raise UsageError("give either --head/--pos or --headlist")
    if args.headlist and not args.outdir:
        raise UsageError("--headlist needs --outdir")
    if args.head and not args.pos:
        raise UsageError("--head needs --pos")
    _, _, index = _sketch_index(args, cfg)
    thes = Thesaurus.for_index(index)
    if args.head:
        expl = _explain_one(_head(args), index, thes, cfg)
        with _output(args) as out:
            out.write(_render(expl, args.format))
        return
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    heads = read_headlist(args.headlist)
    for head in heads:
        expl = _explain_one(head, index, thes, cfg)
        (outdir / output_name(head, args.format)).write_text(
            _render(expl, args.format), encoding="utf-8", newline="\n")
    log.info("wrote %d explanations to %s", len(heads), outdir)


def cmd_evaluate(args, cfg):
    corpus = _load_corpus(args.corpus, cfg)
    files = sorted(Path(args.explanations).glob("*.json"))
    if not files:
        raise EvaluationError(f"no JSON explanations in {args.explanations}")
    expls = [parse_structured(f.read_text(encoding="utf-8")) for f in files]
    records = []
    if args.annotations:
        with open(args.annotations, encoding="utf-8", newline="") as fh:
            records = read_annotations(fh)
    by_head = {(r.headword, r.pos): r for r in records}
    sets = [detect_indicators(e, corpus, cfg.infrequency_threshold,
                              by_head.get(e.headword), args.lang) for e in expls]
    indicators = aggregate_indicators(sets, f"Indicators {args.lang}".strip())
    quality = aggregate_quality(records, f"Quality {args.lang}".strip()) if records else None
    coverage = coverage_rate(expls)
    if args.output:
        report = build_report(indicators, quality, coverage, len(expls))
        Path(args.output).write_text(json.dumps(report, indent=2) + "\n", encoding="utf-8")
    sys.stdout.write(format_report(indicators, quality, coverage))


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", help="configuration file (key = value)")
    common.add_argument("--jobs", type=int, default=1, help="worker threads for sketch building")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = _Parser(prog="lexplain", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("version", parents=[common], help="print the version")
    p.set_defaults(func=cmd_version)

    p = sub.add_parser("config", parents=[common], help="print the effective configuration")
    p.add_argument("--output")
    p.set_defaults(func=cmd_config)

    p = sub.add_parser("ingest", parents=[common], help="index a vertical corpus")
    p.add_argument("--input", required=True)
    p.add_argument("--output", help="index path (default: input with an .idx suffix)")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("grammar-check", parents=[common], help="parse and validate a sketch grammar")
    p.add_argument("--grammar")
    p.add_argument("--corpus")
    p.add_argument("--output")
    p.set_defaults(func=cmd_grammar_check)

    p = sub.add_parser("cql", parents=[common], help="print matches of a CQL query")
    p.add_argument("--corpus", required=True)
    p.add_argument("--query", required=True)
    p.add_argument("--output")
    p.set_defaults(func=cmd_cql)

    for name, func, limit in (("sketch", cmd_sketch, 3), ("thesaurus", cmd_thesaurus, 10)):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("--corpus", required=True)
        p.add_argument("--grammar")
        p.add_argument("--head", required=True)
        p.add_argument("--pos", required=True)
        p.add_argument("--limit", type=int, default=limit)
        p.add_argument("--output")
        if name == "sketch":
            p.add_argument("--relation")
        p.set_defaults(func=func)

    p = sub.add_parser("explain", parents=[common], help="compose explanations")
    p.add_argument("--corpus", required=True)
    p.add_argument("--grammar")
    p.add_argument("--head")
    p.add_argument("--pos")
    p.add_argument("--headlist")
    p.add_argument("--outdir")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--output")
    p.set_defaults(func=cmd_explain)

    p = sub.add_parser("evaluate", parents=[common], help="indicator and quality reports")
    p.add_argument("--corpus", required=True)
    p.add_argument("--explanations", required=True, help="directory of JSON explanations")
    p.add_argument("--annotations", help="annotation TSV")
    p.add_argument("--lang", default="")
    p.add_argument("--output", help="write the JSON report here")
    p.set_defaults(func=cmd_evaluate)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not getattr(args, "func", None):
            parser.print_usage(sys.stderr)
            raise UsageError("missing subcommand")
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                            format="lexplain: %(message)s", stream=sys.stderr)
        if args.jobs < 1:
            raise UsageError("--jobs must be >= 1")
        cfg = load_config(args.config) if args.config else Config()
        args.func(args, cfg)
    except UsageError as exc:
        print(f"lexplain: {exc}", file=sys.stderr)
        return 1
    except DATA_ERRORS as exc:
        print(f"lexplain: {exc}", file=sys.stderr)
        return 2
    finally:
        sys.stdout.flush()
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
