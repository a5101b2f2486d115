"""Invariant signatures: computation, comparison, canonical reconstruction.

The signature of a map relative to base points stores, for every sample key,
the coordinate vector of that sample in the base-point basis.  Two maps on
the same key set are GL-equivalent exactly when their signatures agree, and
a canonical representative can be rebuilt from the signature alone by
placing the coordinates in the first k components and zeros below.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    DimensionMismatchError,
    FieldMismatchError,
    NotInSpanError,
    UnsupportedGroupError,
)
from .fields import FieldSpec, Scalar
from .groups import GL, SL, GroupSpec
from .samplemap import BasePoints, SampleKey, SampleMap
from .matrix import solve_in_column_space


@dataclass(frozen=True)
class Signature:
    """Per-sample coordinates in the base-point basis; a complete GL-invariant."""

    field: FieldSpec
    k: int
    base_keys: tuple[SampleKey, ...]
    coords: dict[SampleKey, tuple[Scalar, ...]]


def compute_signature(smap: SampleMap, base: BasePoints) -> Signature:
    """Solve every sample against the base matrix; base keys come out as e_i."""
    coords = {}
    for key, vec in smap.samples.items():
        alpha = solve_in_column_space(base.base_matrix, vec)
        if alpha is None:
            raise NotInSpanError(
                f"sample {key.label()!r} is outside the span of the base points")
        coords[key] = alpha
    return Signature(smap.field, len(base.keys), base.keys, coords)


def signatures_equal(a: Signature, b: Signature) -> bool:
    """Exact table comparison (epsilon-aware over the approx field)."""
    if a.field != b.field:
        raise FieldMismatchError(
            f"cannot compare signatures over {a.field.describe()} and {b.field.describe()}")
    if a.k != b.k or a.base_keys != b.base_keys:
        return False
    if a.coords.keys() != b.coords.keys():
        return False
    f = a.field
    return all(
        all(f.eq(x, y) for x, y in zip(a.coords[key], b.coords[key]))
        for key in a.coords)


def reconstruct_canonical(sig: Signature, n: int, group: GroupSpec) -> SampleMap:
    """The canonical map with this signature: coordinates on top, zeros below.

    Its base matrix at the signature's base keys is [I_k; 0].  For GL any
    k <= n is allowed; for SL the construction needs k = n (the base matrix
    is then I_n, which has determinant 1); other groups are rejected.
    """
    k = sig.k
    if k > n:
        raise DimensionMismatchError(f"signature arity {k} exceeds dimension {n}")
    if group.kind == SL:
        if k != n:
            raise UnsupportedGroupError(
                f"SL reconstruction needs full rank: k={k} < n={n}")
    elif group.kind != GL:
        raise UnsupportedGroupError(
            f"no canonical construction for group {group.name!r}")
    zero = sig.field.zero()
    pad = (zero,) * (n - k)
    samples = {key: alpha + pad for key, alpha in sig.coords.items()}
    return SampleMap(sig.field, n, samples)


def signature_to_json(sig: Signature) -> dict:
    """Stable serialization: base keys in order, coords in key order."""
    f = sig.field
    coords = []
    for key, alpha in sig.coords.items():
        rec = key.to_json()
        rec["alpha"] = [f.format(x) for x in alpha]
        coords.append(rec)
    return {
        "k": sig.k,
        "base": [key.to_json() for key in sig.base_keys],
        "coords": coords,
    }


def signature_from_json(obj: dict, field: FieldSpec) -> Signature:
    base_keys = tuple(SampleKey(t=rec["t"], s=rec.get("s")) for rec in obj["base"])
    coords = {}
    for rec in obj["coords"]:
        key = SampleKey(t=rec["t"], s=rec.get("s"))
        coords[key] = tuple(field.parse(x) for x in rec["alpha"])
    return Signature(field, obj["k"], base_keys, coords)
