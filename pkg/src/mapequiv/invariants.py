"""Generators of the invariant function field, evaluated and independence-checked.

For GL the invariant field is generated by the base-basis coordinates of the
non-base samples; for SL at full rank the determinant of the base matrix is
appended.  Algebraic independence of the generator system is certified by an
exact Jacobian rank computation at a random rational point: the derivatives
are propagated through the minor-inverse formula with dual numbers (value +
derivative pairs of Fractions), so no floating error enters, and full rank
at one generic point over the rationals certifies independence.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .errors import (
    InvalidFieldError,
    MapequivError,
    RetriesExhaustedError,
    UnsupportedGroupError,
)
from .fields import FieldSpec, Scalar
from .groups import GL, SL, GroupSpec
from .matrix import Matrix, determinant, rank_profile, solve_in_column_space
from .samplemap import SampleMap, select_base_points
from .signature import compute_signature


def evaluate_generators(smap: SampleMap, group: GroupSpec,
                        base_keys=None) -> list[tuple[str, Scalar]]:
    """Labeled generator values at a concrete map.

    GL: the coordinates of every non-base sample in the base-point basis,
    labeled alpha[key][i] with i starting at 1 (base samples contribute the
    constant e_i and are omitted).  SL at full rank additionally yields
    det_base; below full rank the SL list coincides with the GL list.
    """
    if not smap.field.is_exact:
        raise InvalidFieldError("generator evaluation needs an exact field")
    if group.kind not in (GL, SL):
        raise UnsupportedGroupError(
            f"no generator system for group {group.name!r}")
    base = select_base_points(smap, base_keys)
    sig = compute_signature(smap, base)
    base_set = set(base.keys)
    out = []
    for key in smap.keys():
        if key in base_set:
            continue
        for i, value in enumerate(sig.coords[key], start=1):
            out.append((f"alpha[{key.label()}][{i}]", value))
    if group.kind == SL and len(base.keys) == smap.n:
        out.append(("det_base", determinant(base.base_matrix)))
    return out


class _DualField:
    """Dual-number arithmetic over the rationals for exact derivatives.

    Elements are (value, derivative) pairs of Fractions; mul and invert apply
    the product and quotient rules.  The zero test looks only at the value
    part, which is exactly what elimination pivoting needs.
    """

    kind = "dual"

    def zero(self):
        return (Fraction(0), Fraction(0))

    def one(self):
        return (Fraction(1), Fraction(0))

    def add(self, a, b):
        return (a[0] + b[0], a[1] + b[1])

    def sub(self, a, b):
        return (a[0] - b[0], a[1] - b[1])

    def neg(self, a):
        return (-a[0], -a[1])

    def mul(self, a, b):
        return (a[0] * b[0], a[0] * b[1] + a[1] * b[0])

    def invert(self, a):
        return (1 / a[0], -a[1] / (a[0] * a[0]))

    def div(self, a, b):
        return self.mul(a, self.invert(b))

    def is_zero(self, a) -> bool:
        return a[0] == 0

    def eq(self, a, b) -> bool:
        return a == b

    def format(self, a) -> str:
        return f"{a[0]}+{a[1]}e"

    def describe(self) -> str:
        return "dual"

    def __eq__(self, other) -> bool:
        return isinstance(other, _DualField)

    def __hash__(self) -> int:
        return hash(_DualField)


def generator_count(n: int, k: int, m: int, group: GroupSpec) -> int:
    return k * (m - k) + (1 if group.kind == SL and k == n else 0)


def _generator_derivatives(point, n, k, m, with_det, direction):
    """Derivatives of all generators along one coordinate direction.

    point is a list of m coordinate lists; the first k vectors are the base.
    The generators are evaluated through the top-k minor formula, so only
    the first k rows of each vector enter.
    """
    df = _DualField()
    j0, i0 = divmod(direction, n)

    def dual(j, i):
        return (point[j][i], Fraction(1 if (j == j0 and i == i0) else 0))

    top_minor = Matrix(df, [[dual(j, i) for j in range(k)] for i in range(k)], ncols=k)
    derivs = []
    for j in range(k, m):
        target = [dual(j, i) for i in range(k)]
        alpha = solve_in_column_space(top_minor, target)
        derivs.extend(x[1] for x in alpha)
    if with_det:
        full = Matrix(df, [[dual(j, i) for j in range(k)] for i in range(n)], ncols=k)
        derivs.append(determinant(full)[1])
    return derivs


def check_algebraic_independence(n: int, k: int, m: int, group: GroupSpec,
                                 seed: int, max_retries: int = 100) -> bool:
    """Certify algebraic independence of the generator system for shape (n, k, m).

    Draws a random rational point with small coordinates until the needed
    base minor is invertible, then returns True iff the exact Jacobian of
    the generator map has full rank there.  Only defined over the rationals
    (an infinite field); SL adds the determinant generator at k = n.
    """
    if group.kind not in (GL, SL):
        raise UnsupportedGroupError(f"no generator system for group {group.name!r}")
    if not (0 <= k <= n and k <= m):
        raise MapequivError(f"invalid shape: need 0 <= k <= n and k <= m, got {(n, k, m)}")
    with_det = group.kind == SL and k == n
    count = generator_count(n, k, m, group)
    if count == 0:
        return True
    rational = FieldSpec.rational()
    rng = random.Random(seed)
    for _ in range(max_retries):
        point = [[Fraction(rng.randint(-20, 20), rng.randint(1, 7)) for _ in range(n)]
                 for _ in range(m)]
        top = Matrix(rational, [[point[j][i] for j in range(k)] for i in range(k)], ncols=k)
        if not rational.is_zero(determinant(top)):
            break
    else:
        raise RetriesExhaustedError(
            f"no point with invertible base minor after {max_retries} draws")
    columns = [_generator_derivatives(point, n, k, m, with_det, d) for d in range(n * m)]
    jacobian = Matrix(rational, [[col[r] for col in columns] for r in range(count)],
                      ncols=n * m)
    return rank_profile(jacobian).rank == count
