"""``spner`` command line.

Exit status: 0 on success, 1 on usage errors, 2 on data errors.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Iterable, Iterator, Sequence

from .corpus import (
    UtteranceRecord,
    compute_stats,
    filter_entities,
    format_stats,
    parse_record,
    read_manifest,
    read_tsv,
    write_manifest,
    write_tsv,
)
from .errors import DataError
from .errorsim import ErrorModel, corpus_vocabulary, simulate_records
from .markup import (
    LENIENT,
    STRICT,
    check_inline,
    parse_inline,
    read_column_document,
    render_inline,
    write_column_document,
)
from .metrics import CVER_UNITS, format_report, score_corpus
from .normalize import normalize_text, read_profile
from .schema import read_schema

log = logging.getLogger("spner")

FORMATS = ("jsonl", "tsv", "columns")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _common_flags() -> argparse.ArgumentParser:
    # SUPPRESS defaults let the flags appear before or after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--schema", default=argparse.SUPPRESS, help="schema file or 'wojood' (default)")
    common.add_argument("--profile", default=argparse.SUPPRESS, help="normalization profile file, 'default' or 'none'")
    common.add_argument("--quiet", action="store_true", default=argparse.SUPPRESS, help="suppress progress notes")
    common.add_argument("--format", choices=("text", "structured"), default=argparse.SUPPRESS, help="output style")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_flags()
    parser = _Parser(prog="spner", description="Speech NER evaluation toolkit.", parents=[common])
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)

    p = sub.add_parser("evaluate", parents=[common], help="score hypotheses against references")
    p.add_argument("--ref", required=True, type=Path)
    p.add_argument("--hyp", required=True, type=Path)
    p.add_argument("--report", type=Path, help="write the report here instead of stdout")
    p.add_argument("--cver-unit", choices=CVER_UNITS, default="token")
    p.add_argument("--per-tag", action="store_true", help="include the per-tag table in text output")
    p.add_argument("--jobs", type=int, default=1)

    p = sub.add_parser("stats", parents=[common], help="corpus statistics")
    p.add_argument("--manifest", required=True, type=Path)
    p.add_argument("--bio", action="store_true", help="count B-/I- tag tokens instead of entities")

    p = sub.add_parser("filter", parents=[common], help="keep utterances that contain entities")
    p.add_argument("--in", dest="input", required=True, type=Path)
    p.add_argument("--out", required=True, type=Path)
    p.add_argument("--invert", action="store_true", help="keep the entity-free utterances instead")

    p = sub.add_parser("validate", parents=[common], help="report BIO violations")
    p.add_argument("--manifest", required=True, type=Path)

    p = sub.add_parser("normalize", parents=[common], help="normalize text lines")
    p.add_argument("--in", dest="input", type=Path, help="input file (default: stdin)")
    p.add_argument("--out", type=Path, help="output file (default: stdout)")

    p = sub.add_parser("convert", parents=[common], help="convert between jsonl, tsv and column format")
    p.add_argument("--in", dest="input", required=True, type=Path)
    p.add_argument("--out", required=True, type=Path)
    p.add_argument("--from", dest="src_format", choices=FORMATS)
    p.add_argument("--to", dest="dst_format", choices=FORMATS)

    p = sub.add_parser("simulate", parents=[common], help="inject synthetic ASR errors")
    p.add_argument("--in", dest="input", required=True, type=Path)
    p.add_argument("--out", required=True, type=Path)
    p.add_argument("--p-sub", type=float, default=0.0)
    p.add_argument("--p-del", type=float, default=0.0)
    p.add_argument("--p-ins", type=float, default=0.0)
    p.add_argument("--tag-noise", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--vocab", default="from-corpus", help="word list file or 'from-corpus'")
    return parser


def _guess_format(path: Path, given: str | None) -> str:
    if given:
        return given
    suffix = path.suffix.lower()
    if suffix == ".tsv":
        return "tsv"
    if suffix in (".conll", ".columns", ".bio", ".txt"):
        return "columns"
    return "jsonl"


def _records(path: Path, fmt: str | None = None, schema=None) -> Iterator[UtteranceRecord]:
    fmt = _guess_format(path, fmt)
    if fmt == "tsv":
        return read_tsv(path)
    if fmt == "columns":
        return _column_records(path, schema)
    return read_manifest(path)


def _column_records(path: Path, schema) -> Iterator[UtteranceRecord]:
    with path.open(encoding="utf-8", newline=None) as fh:
        try:
            for n, (utt_id, t) in enumerate(read_column_document(fh, schema), 1):
                yield UtteranceRecord(utt_id or str(n), render_inline(t))
        except DataError as exc:
            raise exc.locate(path=path)


def _write(path: Path | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        path.write_text(text, encoding="utf-8", newline="\n")


def cmd_evaluate(args, schema, profile) -> int:
    hyps = {}
    repaired = 0
    for rec in _records(args.hyp):
        # duplicates are rejected by the reader
        issues = []
        try:
            hyps[rec.id] = parse_inline(rec.text, schema, LENIENT, issues)
        except DataError as exc:
            raise exc.locate(path=args.hyp, utt_id=rec.id)
        repaired += bool(issues)
    ref_ids = set()

    def pairs():
        for rec in _records(args.ref):
            ref_ids.add(rec.id)
            ref = parse_record(rec, schema, STRICT)
            yield rec.id, ref, hyps.get(rec.id)

    try:
        report = score_corpus(pairs(), profile, cver_unit=args.cver_unit, jobs=max(1, args.jobs))
    except DataError as exc:
        raise exc.locate(path=args.ref)
    extra = len(set(hyps) - ref_ids)
    log.info("scored %d utterances", report.utterance_count)
    if report.missing:
        log.warning("%d reference utterances have no hypothesis (scored as empty)", len(report.missing))
    if extra:
        log.warning("%d hypotheses have no reference and were ignored", extra)
    if repaired:
        log.info("%d hypotheses needed BIO repairs", repaired)
    _write(args.report, format_report(report, args.format or "text", per_tag=args.per_tag))
    return 0


def cmd_stats(args, schema, profile) -> int:
    stats = compute_stats(_records(args.manifest), schema)
    sys.stdout.write(format_stats(stats, schema, args.format or "text", bio=args.bio))
    return 0


def cmd_filter(args, schema, profile) -> int:
    n = write_manifest(filter_entities(_records(args.input), schema, invert=args.invert), args.out)
    log.info("kept %d utterances", n)
    return 0


def cmd_validate(args, schema, profile) -> int:
    bad = 0
    for rec in _records(args.manifest):
        try:
            issues = [str(i) for i in check_inline(rec.text, schema)]
        except DataError as exc:
            issues = [f"{type(exc).__name__}: {exc.message}"]
        for issue in issues:
            print(f"{args.manifest}: id={rec.id}: {issue}")
        bad += bool(issues)
    if bad:
        log.warning("%d utterances violate BIO markup", bad)
        return 2
    log.info("no BIO violations")
    return 0


def cmd_normalize(args, schema, profile) -> int:
    if args.input is None:
        lines: Iterable[str] = sys.stdin
    else:
        lines = args.input.read_text(encoding="utf-8").splitlines()
    out = "".join(normalize_text(line, profile) + "\n" for line in lines)
    _write(args.out, out)
    return 0


def cmd_convert(args, schema, profile) -> int:
    src = _guess_format(args.input, args.src_format)
    dst = _guess_format(args.out, args.dst_format)
    records = _records(args.input, src, schema)
    if dst == "jsonl":
        n = write_manifest(records, args.out)
    elif dst == "tsv":
        n = write_tsv(records, args.out)
    else:
        n = 0
        with args.out.open("w", encoding="utf-8", newline="\n") as fh:
            for rec in records:
                fh.writelines(write_column_document([(rec.id, parse_record(rec, schema))]))
                n += 1
    log.info("converted %d utterances (%s -> %s)", n, src, dst)
    return 0


def cmd_simulate(args, schema, profile) -> int:
    if args.vocab == "from-corpus":
        vocab = corpus_vocabulary(_records(args.input), schema)
    else:
        vocab = [w for w in Path(args.vocab).read_text(encoding="utf-8").split()]
    try:
        model = ErrorModel(args.p_sub, args.p_del, args.p_ins, args.tag_noise, tuple(vocab), args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    n = write_manifest(simulate_records(_records(args.input), model, schema), args.out)
    log.info("simulated %d utterances", n)
    return 0


COMMANDS = {
    "evaluate": cmd_evaluate,
    "stats": cmd_stats,
    "filter": cmd_filter,
    "validate": cmd_validate,
    "normalize": cmd_normalize,
    "convert": cmd_convert,
    "simulate": cmd_simulate,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    if not argv:
        parser.print_usage(sys.stderr)
        return 1
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(exc, file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    if args.command is None:
        parser.print_usage(sys.stderr)
        return 1
    for name in ("schema", "profile", "format"):
        if not hasattr(args, name):
            setattr(args, name, None)
    logging.basicConfig(
        level=logging.WARNING if getattr(args, "quiet", False) else logging.INFO,
        format="spner: %(message)s",
        stream=sys.stderr,
        force=True,
    )
    try:
        schema = read_schema(args.schema)
        profile = read_profile(args.profile)
        return COMMANDS[args.command](args, schema, profile)
    except UsageError as exc:
        print(f"spner: error: {exc}", file=sys.stderr)
        return 1
    except DataError as exc:
        print(f"spner: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"spner: error: {exc.filename}: {exc.strerror}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
