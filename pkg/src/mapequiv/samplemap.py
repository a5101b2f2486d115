"""Sampled vector-valued maps: the data model, dataset ingestion, base points.

A SampleMap is a finite family of vectors in F^n indexed by keys (s, t) with
an optional family label s.  A family of maps sharing one transformation is
just a single map on composite keys, so there is no separate code path for
families anywhere downstream.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from functools import total_ordering
from pathlib import Path
from typing import Mapping, Sequence

from .errors import (
    BaseSelectionError,
    DatasetError,
    DuplicateKeyError,
    UnknownKeyError,
)
from .fields import FieldSpec, Scalar
from .matrix import Matrix, rank_profile, solve_in_column_space


@total_ordering
@dataclass(frozen=True)
class SampleKey:
    """A sample index (s, t); s is the optional family label."""

    t: str
    s: str | None = None

    def sort_key(self) -> tuple:
        # absent s sorts before any present s
        return (0, "", self.t) if self.s is None else (1, self.s, self.t)

    def __lt__(self, other: "SampleKey") -> bool:
        return self.sort_key() < other.sort_key()

    def label(self) -> str:
        """Display form; also the CLI grammar for --base/--anchor."""
        return self.t if self.s is None else f"{self.s}:{self.t}"

    @classmethod
    def from_label(cls, text: str) -> "SampleKey":
        """Inverse of label(): "t" or "s:t" (first colon splits)."""
        s, sep, t = text.partition(":")
        return cls(t=t, s=s) if sep else cls(t=text)

    def to_json(self) -> dict:
        return {"t": self.t} if self.s is None else {"s": self.s, "t": self.t}


class SampleMap:
    """An immutable map from sample keys to vectors in F^n, keys in sorted order."""

    __slots__ = ("field", "n", "samples")
    __hash__ = None

    def __init__(self, field: FieldSpec, n: int, samples: Mapping[SampleKey, Sequence[Scalar]]):
        if n < 1:
            raise DatasetError(f"dimension must be at least 1, got {n}")
        if not samples:
            raise DatasetError("a map needs at least one sample")
        ordered = {}
        for key in sorted(samples, key=SampleKey.sort_key):
            vec = tuple(samples[key])
            if len(vec) != n:
                raise DatasetError(
                    f"sample {key.label()!r} has {len(vec)} entries, expected {n}")
            ordered[key] = vec
        self.field = field
        self.n = n
        self.samples = ordered

    def keys(self) -> tuple[SampleKey, ...]:
        return tuple(self.samples)

    def vector(self, key: SampleKey) -> tuple:
        try:
            return self.samples[key]
        except KeyError:
            raise UnknownKeyError(f"no sample with key {key.label()!r}") from None

    def matrix(self) -> Matrix:
        """The n x m matrix whose columns are the samples in key order."""
        return Matrix.from_columns(self.field, list(self.samples.values()), nrows=self.n)

    def rank(self) -> int:
        """Dimension of the span of all sample vectors."""
        return rank_profile(self.matrix()).rank

    def transformed(self, g: Matrix, translation: Sequence[Scalar] | None = None) -> "SampleMap":
        """The map key -> g*vector (+ translation)."""
        f = self.field
        out = {}
        for key, vec in self.samples.items():
            image = g.apply(vec)
            if translation is not None:
                image = tuple(f.add(x, b) for x, b in zip(image, translation))
            out[key] = image
        return SampleMap(f, self.n, out)

    def differenced(self, anchor: SampleKey) -> "SampleMap":
        """The map key -> vector(key) - vector(anchor)."""
        f = self.field
        base = self.vector(anchor)
        return SampleMap(
            f, self.n,
            {key: tuple(f.sub(x, b) for x, b in zip(vec, base))
             for key, vec in self.samples.items()})

    def to_json(self) -> dict:
        """Canonical dataset-file form with scalars as interchange text."""
        f = self.field
        records = []
        for key, vec in self.samples.items():
            rec = key.to_json()
            rec["value"] = [f.format(x) for x in vec]
            records.append(rec)
        return {"field": f.to_json(), "n": self.n, "samples": records}

    def __eq__(self, other) -> bool:
        if not isinstance(other, SampleMap):
            return NotImplemented
        if self.field != other.field or self.n != other.n:
            return False
        if self.keys() != other.keys():
            return False
        f = self.field
        return all(
            all(f.eq(a, b) for a, b in zip(self.samples[key], other.samples[key]))
            for key in self.samples)

    def __repr__(self) -> str:
        return f"SampleMap({len(self.samples)} samples in F^{self.n}, {self.field.describe()})"


@dataclass(frozen=True)
class BasePoints:
    """An ordered list of keys whose vectors form a basis of the map's span."""

    keys: tuple[SampleKey, ...]
    base_matrix: Matrix


def select_base_points(smap: SampleMap, keys: Sequence[SampleKey] | None = None) -> BasePoints:
    """Base points of a map: greedy in key order, or a validated explicit list.

    The greedy scan adds a key iff its vector is independent of those already
    chosen, which yields exactly rank(map) keys.  An explicit list must be
    independent and span the map, else BaseSelectionError.
    """
    field, n = smap.field, smap.n
    if keys is None:
        chosen: list[SampleKey] = []
        cols: list[tuple] = []
        basis = Matrix.from_columns(field, [], nrows=n)
        for key, vec in smap.samples.items():
            if solve_in_column_space(basis, vec) is None:
                chosen.append(key)
                cols.append(vec)
                basis = Matrix.from_columns(field, cols, nrows=n)
        return BasePoints(tuple(chosen), basis)

    seen = set()
    for key in keys:
        if key in seen:
            raise BaseSelectionError(f"base key {key.label()!r} listed twice")
        seen.add(key)
    cols = [smap.vector(key) for key in keys]
    basis = Matrix.from_columns(field, cols, nrows=n)
    if rank_profile(basis).rank != len(keys):
        raise BaseSelectionError("base key vectors are dependent")
    for key, vec in smap.samples.items():
        if solve_in_column_space(basis, vec) is None:
            raise BaseSelectionError(
                f"base does not span the map: sample {key.label()!r} is outside")
    return BasePoints(tuple(keys), basis)


# -- dataset ingestion ---------------------------------------------------------


def parse_dataset_json(source) -> SampleMap:
    """Build a SampleMap from dataset JSON (text or an already-parsed object)."""
    if isinstance(source, (str, bytes)):
        try:
            obj = json.loads(source)
        except json.JSONDecodeError as e:
            raise DatasetError(f"invalid JSON: {e}") from None
    else:
        obj = source
    if not isinstance(obj, dict):
        raise DatasetError("dataset must be a JSON object")
    missing = {"field", "n", "samples"} - set(obj)
    if missing:
        raise DatasetError(f"dataset is missing keys: {', '.join(sorted(missing))}")
    field = FieldSpec.from_json(obj["field"])
    n = obj["n"]
    if not isinstance(n, int) or isinstance(n, bool):
        raise DatasetError(f"n must be an integer, got {n!r}")
    records = obj["samples"]
    if not isinstance(records, list):
        raise DatasetError("samples must be a list")
    samples: dict[SampleKey, tuple] = {}
    for rec in records:
        if not isinstance(rec, dict) or "t" not in rec or "value" not in rec:
            raise DatasetError(f"bad sample record {rec!r}")
        s = rec.get("s")
        if s is not None and not isinstance(s, str):
            raise DatasetError(f"sample label s must be a string, got {s!r}")
        if not isinstance(rec["t"], str):
            raise DatasetError(f"sample label t must be a string, got {rec['t']!r}")
        key = SampleKey(t=rec["t"], s=s)
        if key in samples:
            raise DuplicateKeyError(f"duplicate sample key {key.label()!r}")
        value = rec["value"]
        if not isinstance(value, list) or not all(isinstance(x, str) for x in value):
            raise DatasetError(
                f"sample {key.label()!r}: value must be a list of scalar strings")
        samples[key] = tuple(field.parse(x) for x in value)
    return SampleMap(field, n, samples)


def parse_dataset_csv(text: str, field: FieldSpec, n: int) -> SampleMap:
    """Build a SampleMap from CSV with header s,t,x1,...,xN (s optional)."""
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise DatasetError("empty CSV") from None
    header = [h.strip() for h in header]
    if not header:
        raise DatasetError("empty CSV header")
    has_s = header[0] == "s"
    if not has_s and header[0] != "t":
        raise DatasetError(f"CSV header must start with 's' or 't', got {header[0]!r}")
    value_cols = len(header) - (2 if has_s else 1)
    if value_cols != n:
        raise DatasetError(f"CSV has {value_cols} value columns, --dim says {n}")
    samples: dict[SampleKey, tuple] = {}
    for lineno, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != len(header):
            raise DatasetError(f"CSV line {lineno}: expected {len(header)} cells, got {len(row)}")
        if has_s:
            key = SampleKey(t=row[1].strip(), s=row[0].strip())
            values = row[2:]
        else:
            key = SampleKey(t=row[0].strip())
            values = row[1:]
        if key in samples:
            raise DuplicateKeyError(f"duplicate sample key {key.label()!r}")
        samples[key] = tuple(field.parse(x) for x in values)
    return SampleMap(field, n, samples)


def load_dataset(path, field: FieldSpec | None = None, dim: int | None = None) -> SampleMap:
    """Load a dataset file, JSON or CSV by extension (content sniff as fallback)."""
    path = Path(path)
    text = path.read_text()
    suffix = path.suffix.lower()
    is_json = suffix == ".json" or (suffix != ".csv" and text.lstrip()[:1] == "{")
    if is_json:
        return parse_dataset_json(text)
    if field is None or dim is None:
        raise DatasetError("CSV input needs --field and --dim")
    return parse_dataset_csv(text, field, dim)
