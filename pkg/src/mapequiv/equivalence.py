"""Pairwise equivalence decisions with explicit witnesses.

decide() answers whether some group element g (plus a translation in the
affine case) maps every sample of u onto the corresponding sample of v, and
when the answer is yes it returns such a g.  GL works at any rank; SL at
full rank compares base determinants and below full rank reduces to the GL
decision with a determinant-normalized witness; custom subgroups are only
decidable at full rank, where the witness is unique.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import (
    ClassFunctionMismatchError,
    CustomGroupNeedsFullRankError,
    DimensionMismatchError,
    FieldMismatchError,
    KeySetMismatchError,
    NotInSpanError,
    UnsupportedGroupError,
)
from .fields import Scalar
from .groups import AFFINE, CUSTOM, GL, SL, GroupSpec
from .matrix import Matrix, determinant, invert_matrix, rank_profile, solve_in_column_space
from .samplemap import BasePoints, SampleKey, SampleMap, select_base_points
from .signature import compute_signature, signatures_equal

REASON_EQUIVALENT = "EQUIVALENT"
REASON_RANK_MISMATCH = "RANK_MISMATCH"
REASON_BASE_DEPENDENT_IN_V = "BASE_DEPENDENT_IN_V"
REASON_OUTSIDE_SPAN_IN_V = "OUTSIDE_SPAN_IN_V"
REASON_SIGNATURE_MISMATCH = "SIGNATURE_MISMATCH"
REASON_GROUP_CONDITION_FAILED = "GROUP_CONDITION_FAILED"


@dataclass(frozen=True)
class Witness:
    """A group element realizing an equivalence, plus a translation if affine."""

    g: Matrix
    translation: Optional[tuple[Scalar, ...]] = None


@dataclass(frozen=True)
class Decision:
    equivalent: bool
    witness: Optional[Witness]
    reason: str
    group: GroupSpec


def _check_pair(u: SampleMap, v: SampleMap) -> None:
    if u.n != v.n:
        raise DimensionMismatchError(f"maps live in F^{u.n} and F^{v.n}")
    if u.field != v.field:
        raise FieldMismatchError(
            f"maps live over {u.field.describe()} and {v.field.describe()}")
    if u.keys() != v.keys():
        raise KeySetMismatchError("maps are indexed by different key sets")


def _failure(reason: str, group: GroupSpec) -> Decision:
    return Decision(False, None, reason, group)


def _signature_stage(u, v, base_u, group):
    """Shared GL-style validation; returns (failure decision | None, base_v)."""
    k = len(base_u.keys)
    if v.rank() != k:
        return _failure(REASON_RANK_MISMATCH, group), None
    base_matrix_v = Matrix.from_columns(v.field, [v.vector(key) for key in base_u.keys], nrows=v.n)
    if rank_profile(base_matrix_v).rank != k:
        return _failure(REASON_BASE_DEPENDENT_IN_V, group), None
    base_v = BasePoints(base_u.keys, base_matrix_v)
    try:
        sig_v = compute_signature(v, base_v)
    except NotInSpanError:
        # unreachable over exact fields once rank and independence hold,
        # but approx mode can be inconsistent
        return _failure(REASON_OUTSIDE_SPAN_IN_V, group), None
    sig_u = compute_signature(u, base_u)
    if not signatures_equal(sig_u, sig_v):
        return _failure(REASON_SIGNATURE_MISMATCH, group), None
    return None, base_v


def decide_gl(u: SampleMap, v: SampleMap,
              base_keys: Sequence[SampleKey] | None = None) -> Decision:
    """GL(n, F)-equivalence via signature comparison at u's base points."""
    _check_pair(u, v)
    group = GroupSpec.gl()
    base_u = select_base_points(u, base_keys)
    failure, _ = _signature_stage(u, v, base_u, group)
    if failure is not None:
        return failure
    g = build_witness(u, v, base_u)
    return Decision(True, Witness(g), REASON_EQUIVALENT, group)


def decide_subgroup(u: SampleMap, v: SampleMap, group: GroupSpec,
                    base_keys: Sequence[SampleKey] | None = None) -> Decision:
    """Equivalence under SL or a custom subgroup (custom needs full rank)."""
    if group.kind == GL:
        return decide_gl(u, v, base_keys)
    if group.kind == AFFINE:
        raise UnsupportedGroupError("use decide_affine for affine groups")
    _check_pair(u, v)
    base_u = select_base_points(u, base_keys)
    k, n = len(base_u.keys), u.n
    if group.kind == CUSTOM and k != n:
        raise CustomGroupNeedsFullRankError(
            f"custom subgroup decisions need k = n, got rank {k} in F^{n}")
    failure, base_v = _signature_stage(u, v, base_u, group)
    if failure is not None:
        return failure
    if k < n:
        # SL below full rank reduces to the GL decision; one completion
        # column absorbs the determinant
        g = build_witness(u, v, base_u, force_det_one=True)
        return Decision(True, Witness(g), REASON_EQUIVALENT, group)
    f = u.field
    mat_u, mat_v = base_u.base_matrix, base_v.base_matrix
    if group.kind == SL:
        ok = f.eq(determinant(mat_u), determinant(mat_v))
    else:
        g = mat_v @ invert_matrix(mat_u)
        ok = bool(group.membership(g))
        if group.class_fns is not None:
            fn_ok = all(f.eq(fn(mat_u), fn(mat_v)) for fn in group.class_fns)
            if fn_ok != ok:
                raise ClassFunctionMismatchError(
                    "class functions disagree with the membership predicate on this pair")
    if not ok:
        return _failure(REASON_GROUP_CONDITION_FAILED, group)
    g = build_witness(u, v, base_u)
    return Decision(True, Witness(g), REASON_EQUIVALENT, group)


def decide_affine(u: SampleMap, v: SampleMap, inner: GroupSpec,
                  anchor: SampleKey | None = None,
                  base_keys: Sequence[SampleKey] | None = None) -> Decision:
    """Equivalence under translations composed with the inner group.

    Differencing against a fixed anchor sample removes the translation; the
    pair is affine-equivalent iff the difference maps are inner-equivalent,
    and the translation is recovered from the witness at the anchor.  An
    explicit base refers to base points of the difference maps.
    """
    if inner.kind == AFFINE:
        raise UnsupportedGroupError("affine groups do not nest")
    _check_pair(u, v)
    group = GroupSpec.affine(inner)
    keys = u.keys()
    anchor = anchor if anchor is not None else min(keys, key=SampleKey.sort_key)
    du = u.differenced(anchor)
    dv = v.differenced(anchor)
    inner_decision = decide_subgroup(du, dv, inner, base_keys)
    if not inner_decision.equivalent:
        return _failure(inner_decision.reason, group)
    f = u.field
    g = inner_decision.witness.g
    translation = tuple(
        f.sub(x, y) for x, y in zip(v.vector(anchor), g.apply(u.vector(anchor))))
    return Decision(True, Witness(g, translation), REASON_EQUIVALENT, group)


def decide(u: SampleMap, v: SampleMap, group: GroupSpec,
           base_keys: Sequence[SampleKey] | None = None,
           anchor: SampleKey | None = None) -> Decision:
    """Dispatch on the group kind."""
    if group.kind == AFFINE:
        return decide_affine(u, v, group.inner, anchor=anchor, base_keys=base_keys)
    if anchor is not None:
        raise UnsupportedGroupError("--anchor only applies to affine groups")
    if group.kind == GL:
        return decide_gl(u, v, base_keys)
    return decide_subgroup(u, v, group, base_keys)


def _complete_to_invertible(field, cols: list[tuple], n: int) -> Matrix:
    """Greedily append standard basis vectors until the columns span F^n."""
    cols = list(cols)
    one, zero = field.one(), field.zero()
    for i in range(n):
        if len(cols) == n:
            break
        basis = Matrix.from_columns(field, cols, nrows=n)
        e = tuple(one if j == i else zero for j in range(n))
        if solve_in_column_space(basis, e) is None:
            cols.append(e)
    if len(cols) != n:
        raise AssertionError("basis completion failed; this is a bug")
    return Matrix.from_columns(field, cols, nrows=n)


def build_witness(u: SampleMap, v: SampleMap, base: BasePoints,
                  force_det_one: bool = False) -> Matrix:
    """An explicit g with g*u = v, given that the signatures already agree.

    Both base column lists are completed to invertible n x n matrices with
    the same greedy standard-basis recipe, and g = V_ext * U_ext^{-1}.  With
    force_det_one the last completion column of V_ext is rescaled so that
    det(g) = 1 (only valid below full rank, where such a column exists).
    """
    f, n = u.field, u.n
    u_ext = _complete_to_invertible(f, [base.base_matrix.column(j) for j in range(base.base_matrix.ncols)], n)
    v_ext = _complete_to_invertible(f, [v.vector(key) for key in base.keys], n)
    if force_det_one:
        d = f.div(determinant(v_ext), determinant(u_ext))
        if not f.eq(d, f.one()):
            if len(base.keys) >= n:
                raise AssertionError("cannot normalize determinant at full rank")
            v_ext = v_ext.with_scaled_column(n - 1, f.invert(d))
    g = v_ext @ invert_matrix(u_ext)
    for key in u.keys():
        image = g.apply(u.vector(key))
        if not all(f.eq(a, b) for a, b in zip(image, v.vector(key))):
            raise AssertionError("constructed witness does not map u to v; this is a bug")
    return g


def verify_witness(u: SampleMap, v: SampleMap, decision: Decision) -> bool:
    """Re-check a decision's witness from scratch: mapping and membership."""
    if not decision.equivalent or decision.witness is None:
        return False
    w = decision.witness
    f = u.field
    if decision.group.is_affine:
        if w.translation is None:
            return False
        for key in u.keys():
            image = w.g.apply(u.vector(key))
            image = tuple(f.add(x, b) for x, b in zip(image, w.translation))
            if not all(f.eq(a, b) for a, b in zip(image, v.vector(key))):
                return False
    else:
        if w.translation is not None:
            return False
        for key in u.keys():
            image = w.g.apply(u.vector(key))
            if not all(f.eq(a, b) for a, b in zip(image, v.vector(key))):
                return False
    return decision.group.contains(w.g)


def decision_to_json(decision: Decision) -> dict:
    """The machine report: {"equivalent", "reason", "witness"}."""
    witness = None
    if decision.witness is not None:
        f = decision.witness.g.field
        witness = {
            "g": [[f.format(x) for x in row] for row in decision.witness.g.data],
            "translation": (
                [f.format(x) for x in decision.witness.translation]
                if decision.witness.translation is not None else None),
        }
    return {"equivalent": decision.equivalent, "reason": decision.reason, "witness": witness}
