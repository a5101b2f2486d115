"""Group descriptions: GL, SL, custom subgroups, and affine extensions."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

from .errors import UnsupportedGroupError
from .fields import Scalar
from .matrix import Matrix, determinant

GL = "gl"
SL = "sl"
CUSTOM = "custom"
AFFINE = "affine"


@dataclass(frozen=True)
class GroupSpec:
    """Which subgroup of GL(n, F) acts, possibly extended by translations.

    Custom subgroups carry a membership predicate and optionally a list of
    class functions f_p with the contract: f_p(g1) = f_p(g2) for all p iff
    g2 * g1^{-1} is in the group (for SL that single function is det).
    """

    kind: str
    membership: Optional[Callable[[Matrix], bool]] = None
    class_fns: Optional[tuple[Callable[[Matrix], Scalar], ...]] = None
    inner: Optional["GroupSpec"] = None

    @classmethod
    def gl(cls) -> "GroupSpec":
        return cls(GL)

    @classmethod
    def sl(cls) -> "GroupSpec":
        return cls(SL)

    @classmethod
    def custom(cls, membership, class_fns=None) -> "GroupSpec":
        return cls(CUSTOM, membership=membership,
                   class_fns=tuple(class_fns) if class_fns else None)

    @classmethod
    def affine(cls, inner: "GroupSpec") -> "GroupSpec":
        if inner.kind == AFFINE:
            raise UnsupportedGroupError("affine groups do not nest")
        return cls(AFFINE, inner=inner)

    @classmethod
    def from_name(cls, name: str) -> "GroupSpec":
        try:
            return {
                "gl": cls.gl(),
                "sl": cls.sl(),
                "aff-gl": cls.affine(cls.gl()),
                "aff-sl": cls.affine(cls.sl()),
            }[name]
        except KeyError:
            raise UnsupportedGroupError(f"unknown group {name!r}") from None

    @property
    def name(self) -> str:
        if self.kind == AFFINE:
            return f"aff-{self.inner.name}"
        return self.kind

    @property
    def is_affine(self) -> bool:
        return self.kind == AFFINE

    def linear_part(self) -> "GroupSpec":
        return self.inner if self.kind == AFFINE else self

    def contains(self, g: Matrix) -> bool:
        """Membership of the linear part (translations are unconstrained)."""
        part = self.linear_part()
        f = g.field
        if part.kind == GL:
            return not f.is_zero(determinant(g))
        if part.kind == SL:
            return f.eq(determinant(g), f.one())
        return bool(part.membership(g))
