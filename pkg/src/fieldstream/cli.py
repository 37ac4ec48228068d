"""Command-line front end for running data-prep pipelines over files.

Every subcommand is a thin composition of library operations; the only
logic here is argument parsing and file I/O. JSON Lines is the
interchange format, with tensors embedded in the cache encoding.

Exit codes: 0 success, 1 usage error, 2 data error (bad input files,
unreadable paths, malformed rows). Data errors name the offending file
and, where known, the line.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys

from .cache import from_jsonable, to_jsonable
from .combinators import apply, shard, sliding_window
from .errors import FieldstreamError, RaggedRow
from .mlprep import datasplit, stratify_sample, summary
from .sources import csvsource, get_datastream, jsonstream

__all__ = ["run_cli", "main"]


def _write_jsonl(records, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for r in records:
            obj = {name: to_jsonable(v) for name, v in r.to_dict().items()}
            fh.write(json.dumps(obj, ensure_ascii=False) + "\n")


def _csv_cell(value) -> str:
    if isinstance(value, str):
        return value
    return json.dumps(to_jsonable(value), ensure_ascii=False)


def _write_csv(records, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        header: list[str] | None = None
        for r in records:
            if header is None:
                header = r.field_names()
                writer.writerow(header)
            names = r.field_names()
            if set(names) != set(header):
                raise RaggedRow(f"record fields {names} do not match header {header}")
            writer.writerow([_csv_cell(r.get_field(n)) for n in header])


def _cmd_convert(ns) -> int:
    src_ext = os.path.splitext(ns.in_path)[1].lower()
    dst_ext = os.path.splitext(ns.out_path)[1].lower()
    if src_ext == ".csv" and dst_ext == ".jsonl":
        _write_jsonl(csvsource(ns.in_path), ns.out_path)
    elif src_ext == ".jsonl" and dst_ext == ".csv":
        _write_csv(jsonstream(ns.in_path), ns.out_path)
    else:
        print(f"convert: unsupported conversion {src_ext or '?'} -> {dst_ext or '?'}", file=sys.stderr)
        return 1
    return 0


def _cmd_summary(ns) -> int:
    stream = get_datastream(ns.dir, ext=ns.ext) | summary(sink=sys.stdout)
    for _ in stream:
        pass
    return 0


def _cmd_split(ns) -> int:
    if os.path.exists(ns.out_path):
        os.unlink(ns.out_path)  # recompute from the given seed, not reload
    stream = get_datastream(ns.dir, ext=ns.ext) | datasplit(ns.test, seed=ns.seed, split_file=ns.out_path)
    for _ in stream:
        pass
    return 0


def _cmd_stratify(ns) -> int:
    _write_jsonl(jsonstream(ns.in_path) | stratify_sample(class_field=ns.class_field), ns.out_path)
    return 0


def _cmd_shard(ns) -> int:
    _write_jsonl(jsonstream(ns.in_path) | shard(ns.k, ns.n), ns.out_path)
    return 0


def _cmd_window(ns) -> int:
    fields = [f.strip() for f in ns.fields.split(",") if f.strip()]
    stream = jsonstream(ns.in_path)
    for name in fields:
        stream = stream | apply(name, name, from_jsonable)
    _write_jsonl(stream | sliding_window(fields, ns.size), ns.out_path)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fieldstream",
        description="Run record-stream data-prep pipelines over CSV/JSONL/file-tree inputs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("convert", help="convert csv <-> jsonl, chosen by file extension")
    p.add_argument("--in", dest="in_path", required=True)
    p.add_argument("--out", dest="out_path", required=True)
    p.set_defaults(handler=_cmd_convert)

    p = sub.add_parser("summary", help="per-class counts for a class-directory tree")
    p.add_argument("--dir", required=True)
    p.add_argument("--ext", default=None)
    p.set_defaults(handler=_cmd_summary)

    p = sub.add_parser("split", help="draw a seeded train/test split and save it as JSON")
    p.add_argument("--dir", required=True)
    p.add_argument("--test", type=float, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", dest="out_path", required=True)
    p.add_argument("--ext", default=None)
    p.set_defaults(handler=_cmd_split)

    p = sub.add_parser("stratify", help="downsample a jsonl stream to equal class counts")
    p.add_argument("--in", dest="in_path", required=True)
    p.add_argument("--class-field", dest="class_field", default=None)
    p.add_argument("--out", dest="out_path", required=True)
    p.set_defaults(handler=_cmd_stratify)

    p = sub.add_parser("shard", help="keep every n-th record with remainder k")
    p.add_argument("--in", dest="in_path", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--out", dest="out_path", required=True)
    p.set_defaults(handler=_cmd_shard)

    p = sub.add_parser("window", help="stack fields over a sliding window (tensors as cache encoding)")
    p.add_argument("--in", dest="in_path", required=True)
    p.add_argument("--fields", required=True)
    p.add_argument("--size", type=int, required=True)
    p.add_argument("--out", dest="out_path", required=True)
    p.set_defaults(handler=_cmd_window)

    return parser


def run_cli(argv) -> int:
    """Dispatch one CLI invocation; returns the process exit code."""
    parser = _build_parser()
    try:
        ns = parser.parse_args(list(argv))
    except SystemExit as e:
        return 0 if e.code in (0, None) else 1
    try:
        return ns.handler(ns)
    except (FieldstreamError, OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run_cli(sys.argv[1:]))
