"""Stream producers: file trees, class directories, CSV and JSON files.

All file enumeration is sorted lexicographically so two runs over the
same tree produce byte-identical streams. CSV follows the minimal RFC
4180 dialect (comma, double quotes, doubled-quote escaping, UTF-8).
JSON input is either one top-level array of objects or JSON Lines,
detected by the first non-whitespace character.
"""

from __future__ import annotations

import csv
import json
import os
from collections.abc import Mapping

from .errors import NotAnObject, ParseError, RaggedRow, UnknownClass
from .record import Record
from .stream import Datastream

__all__ = ["get_files", "get_datastream", "csvsource", "jsonstream"]


def _walk_files(root: str) -> list[str]:
    paths = []
    for dirpath, _dirnames, filenames in os.walk(root):
        for fn in filenames:
            full = os.path.join(dirpath, fn)
            if os.path.isfile(full):
                paths.append(full)
    paths.sort()
    return paths


def _matches_ext(path: str, ext: str | None) -> bool:
    return ext is None or path.lower().endswith(ext.lower())


def get_files(directory, ext: str | None = None) -> Datastream:
    """Stream of file paths under a directory, recursive and sorted.

    Paths keep the directory prefix as given. ``ext`` filters by a
    case-insensitive suffix, e.g. ``".jpg"``.
    """
    directory = os.fspath(directory)
    if not os.path.isdir(directory):
        raise NotADirectoryError(f"not a directory: {directory}")

    def gen():
        for path in _walk_files(directory):
            if _matches_ext(path, ext):
                yield path

    return Datastream(gen())


def get_datastream(data_dir, ext: str | None = None, classes: Mapping[str, int] | None = None) -> Datastream:
    """Classification source: one record per file in per-class subdirectories.

    Immediate subdirectories of ``data_dir`` are the class names. Each
    matching file yields a record with fields ``filename``,
    ``class_no`` and ``class_name``. Without ``classes`` the names are
    sorted and numbered from 0; with ``classes`` the given name ->
    number mapping is used and a file in an unlisted subdirectory
    raises UnknownClass.
    """
    data_dir = os.fspath(data_dir)
    if not os.path.isdir(data_dir):
        raise NotADirectoryError(f"not a directory: {data_dir}")
    subdirs = sorted(
        entry.name for entry in os.scandir(data_dir) if entry.is_dir()
    )
    if classes is None:
        mapping: Mapping[str, int] = {name: i for i, name in enumerate(subdirs)}
    else:
        mapping = dict(classes)

    def gen():
        for name in subdirs:
            listed = name in mapping
            for path in _walk_files(os.path.join(data_dir, name)):
                if not _matches_ext(path, ext):
                    continue
                if not listed:
                    raise UnknownClass(f"directory {name!r} is not in the class mapping")
                yield Record(filename=path, class_no=mapping[name], class_name=name)

    return Datastream(gen())


def csvsource(path) -> Datastream:
    """Stream of records from a CSV file; the header names the fields.

    Every cell stays text, no type inference. A row whose cell count
    differs from the header's raises RaggedRow at that row.
    """
    path = os.fspath(path)

    def gen():
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            try:
                header = next(reader)
            except StopIteration:
                raise ParseError(f"{path}: empty file, expected a header row") from None
            if not header:
                raise ParseError(f"{path}: blank header row")
            for row in reader:
                if len(row) != len(header):
                    raise RaggedRow(
                        f"{path}:{reader.line_num}: row has {len(row)} cells, header has {len(header)}"
                    )
                yield Record.from_values(dict(zip(header, row)))

    return Datastream(gen())


def jsonstream(path) -> Datastream:
    """Stream of records from a JSON array of objects or a JSON Lines file.

    Scalars, arrays and nested objects map to the corresponding field
    values; everything is eager. An element that is not an object
    raises NotAnObject.
    """
    path = os.fspath(path)

    def record_of(obj, where: str) -> Record:
        if not isinstance(obj, dict):
            raise NotAnObject(f"{where}: element is {type(obj).__name__}, not an object")
        return Record.from_values(obj)

    def gen():
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
        stripped = text.lstrip()
        if stripped.startswith("["):
            try:
                data = json.loads(text)
            except json.JSONDecodeError as e:
                raise ParseError(f"{path}:{e.lineno}:{e.colno}: {e.msg}") from None
            for i, obj in enumerate(data):
                yield record_of(obj, f"{path}[{i}]")
        else:
            for lineno, line in enumerate(text.splitlines(), start=1):
                if not line.strip():
                    continue
                try:
                    obj = json.loads(line)
                except json.JSONDecodeError as e:
                    raise ParseError(f"{path}:{lineno}:{e.colno}: {e.msg}") from None
                yield record_of(obj, f"{path}:{lineno}")

    return Datastream(gen())
