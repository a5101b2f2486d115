"""Brute-force ground truth over small prime fields.

enumerate_group lists every element of GL/SL(n, p) (or every (g, b) pair of
the affine extension) by decoding row-major base-p integers and filtering on
the determinant, with no cleverness anywhere: the oracle must stay dumb to
stay trustworthy.  brute_force_equivalent applies the definition of
equivalence literally against that enumeration.
"""

from __future__ import annotations

from typing import Iterator

from .errors import (
    DimensionMismatchError,
    FieldMismatchError,
    KeySetMismatchError,
    TooLargeError,
    UnsupportedGroupError,
)
from .fields import PRIME, FieldSpec
from .groups import AFFINE, GL, SL, GroupSpec
from .matrix import Matrix, determinant
from .samplemap import SampleMap

ENUMERATION_GUARD = 10**7


def _decode(idx: int, p: int, length: int) -> list[int]:
    """Base-p digits of idx, most significant first."""
    digits = [0] * length
    for pos in range(length - 1, -1, -1):
        idx, digits[pos] = divmod(idx, p)
    return digits


def _linear_elements(kind: str, n: int, p: int) -> Iterator[Matrix]:
    field = FieldSpec.prime(p)
    total = p ** (n * n)
    one = field.one()
    for idx in range(total):
        digits = _decode(idx, p, n * n)
        m = Matrix(field, [digits[i * n:(i + 1) * n] for i in range(n)], ncols=n)
        det = determinant(m)
        if det == 0:
            continue
        if kind == SL and det != one:
            continue
        yield m


def enumerate_group(group: GroupSpec, n: int, p: int):
    """All elements of GL/SL(n, p), or all (g, translation) pairs if affine.

    Deterministic order: matrices by their entry tuple read row-major as a
    base-p integer; affine pairs iterate translations innermost, also in
    base-p order.  Guarded by p^(n^2) <= 10^7.
    """
    if p ** (n * n) > ENUMERATION_GUARD:
        raise TooLargeError(
            f"enumerating {p}^{n * n} candidate matrices exceeds the guard")
    linear = group.linear_part()
    if linear.kind not in (GL, SL):
        raise UnsupportedGroupError("oracle enumeration covers GL, SL, and their affine extensions")
    if group.kind == AFFINE:
        field = FieldSpec.prime(p)
        translations = [tuple(_decode(idx, p, n)) for idx in range(p ** n)]
        return ((g, b) for g in _linear_elements(linear.kind, n, p) for b in translations)
    return _linear_elements(linear.kind, n, p)


def brute_force_equivalent(u: SampleMap, v: SampleMap, group: GroupSpec) -> bool:
    """Exhaustive orbit search: does any enumerated element map u onto v?"""
    if u.field != v.field:
        raise FieldMismatchError("maps live over different fields")
    if u.field.kind != PRIME:
        raise FieldMismatchError("the brute-force oracle only runs over prime fields")
    if u.n != v.n:
        raise DimensionMismatchError(f"maps live in F^{u.n} and F^{v.n}")
    if u.keys() != v.keys():
        raise KeySetMismatchError("maps are indexed by different key sets")
    keys = u.keys()
    targets = [v.vector(key) for key in keys]
    sources = [u.vector(key) for key in keys]
    p = u.field.p
    if group.kind == AFFINE:
        for g, b in enumerate_group(group, u.n, p):
            if all(
                tuple((x + t) % p for x, t in zip(g.apply(vec), b)) == tgt
                for vec, tgt in zip(sources, targets)):
                return True
        return False
    for g in enumerate_group(group, u.n, p):
        if all(g.apply(vec) == tgt for vec, tgt in zip(sources, targets)):
            return True
    return False
