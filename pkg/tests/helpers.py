"""Shared builders and independent oracles for the test suite.

The oracles here (permutation-expansion determinant, adjugate inverse,
exhaustive minor rank) deliberately avoid the production elimination code so
that the two routes stay independent.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from mapequiv import Matrix, SampleKey, SampleMap


def scal(field, x):
    """Coerce an int or scalar-text into a field value."""
    if isinstance(x, str):
        return field.parse(x)
    if isinstance(x, int):
        return field.from_int(x)
    return x


def vec(field, xs):
    return tuple(scal(field, x) for x in xs)


def mat(field, rows):
    return Matrix(field, [[scal(field, x) for x in row] for row in rows],
                  ncols=len(rows[0]) if rows else 0)


def key(name) -> SampleKey:
    if isinstance(name, tuple):
        return SampleKey(t=name[1], s=name[0])
    return SampleKey(t=name)


def sample_map(field, n, data) -> SampleMap:
    """Build a map from {t: vector} or {(s, t): vector} with int/text entries."""
    return SampleMap(field, n, {key(name): vec(field, xs) for name, xs in data.items()})


def random_scalar(field, rng, span=5):
    if field.kind == "prime":
        return rng.randrange(field.p)
    if field.kind == "approx":
        return rng.uniform(-span, span)
    return Fraction(rng.randint(-span, span), rng.randint(1, 3))


def random_matrix(field, rng, nrows, ncols, span=5):
    return Matrix(field, [[random_scalar(field, rng, span) for _ in range(ncols)]
                          for _ in range(nrows)], ncols=ncols)


def random_invertible(field, rng, n, span=5):
    from mapequiv import determinant
    while True:
        g = random_matrix(field, rng, n, n, span)
        if not field.is_zero(determinant(g)):
            return g


def random_special_linear(field, rng, n, span=5):
    """Random determinant-1 element: scale one column of an invertible draw."""
    from mapequiv import determinant
    g = random_invertible(field, rng, n, span)
    return g.with_scaled_column(0, field.invert(determinant(g)))


def random_map_of_rank(field, rng, n, nkeys, rank, span=3) -> SampleMap:
    """A random map on keys t0..t{nkeys-1} whose span has exactly that rank."""
    assert 0 <= rank <= min(n, nkeys)
    names = [f"t{i}" for i in range(nkeys)]
    if rank == 0:
        zero = field.zero()
        return SampleMap(field, n, {key(nm): (zero,) * n for nm in names})
    basis = random_matrix(field, rng, n, rank, span)
    while exhaustive_rank(basis) != rank:
        basis = random_matrix(field, rng, n, rank, span)
    while True:
        coords = random_matrix(field, rng, rank, nkeys, span)
        if exhaustive_rank(coords) == rank:
            break
    cols = (basis @ coords)
    return SampleMap(field, n, {key(nm): cols.column(j) for j, nm in enumerate(names)})


# -- independent oracles -------------------------------------------------------


def perm_determinant(m: Matrix):
    """Determinant by permutation expansion (no elimination)."""
    assert m.nrows == m.ncols
    f, n = m.field, m.nrows
    total = f.zero()
    for perm in itertools.permutations(range(n)):
        inversions = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = f.one()
        for i in range(n):
            term = f.mul(term, m.data[i][perm[i]])
        total = f.add(total, term) if inversions % 2 == 0 else f.sub(total, term)
    return total


def adjugate_inverse(m: Matrix) -> Matrix:
    """Inverse via cofactors; independent of Gauss-Jordan."""
    f, n = m.field, m.nrows
    det = perm_determinant(m)
    assert not f.is_zero(det)
    det_inv = f.invert(det)
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            minor = Matrix(f, [[m.data[r][c] for c in range(n) if c != i]
                               for r in range(n) if r != j],
                           ncols=n - 1)
            cof = perm_determinant(minor)
            if (i + j) % 2 == 1:
                cof = f.neg(cof)
            row.append(f.mul(cof, det_inv))
        out.append(row)
    return Matrix(f, out, ncols=n)


def exhaustive_rank(m: Matrix) -> int:
    """Rank as the largest r with some nonzero r x r minor (checked exhaustively)."""
    f = m.field
    for r in range(min(m.nrows, m.ncols), 0, -1):
        for rows in itertools.combinations(range(m.nrows), r):
            for cols in itertools.combinations(range(m.ncols), r):
                sub = Matrix(f, [[m.data[i][j] for j in cols] for i in rows], ncols=r)
                if not f.is_zero(perm_determinant(sub)):
                    return r
    return 0
