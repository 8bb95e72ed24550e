"""Exact integer matrix algebra: Smith normal form, kernels, lattices.

Everything here works on arbitrary-precision integers; there is no
floating point anywhere.  The convention for presented modules is
"rows are relations": a matrix ``A`` with ``g`` columns presents the
module ``Z^g / rowspace(A)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import gcd
from typing import Sequence

from .numtheory import xgcd


@dataclass(frozen=True)
class Mat:
    """An integer matrix with explicit shape (zero rows/cols allowed)."""

    rows: int
    cols: int
    data: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0:
            raise ValueError("negative matrix dimension")
        if len(self.data) != self.rows or any(len(r) != self.cols for r in self.data):
            raise ValueError("matrix shape mismatch")

    def __getitem__(self, rc: tuple[int, int]) -> int:
        return self.data[rc[0]][rc[1]]

    def row(self, i: int) -> tuple[int, ...]:
        return self.data[i]

    def col(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self.data)

    def tolists(self) -> list[list[int]]:
        return [list(r) for r in self.data]

    def diagonal(self) -> tuple[int, ...]:
        return tuple(self.data[i][i] for i in range(min(self.rows, self.cols)))


def mat(entries: Sequence[Sequence[int]], cols: int | None = None) -> Mat:
    """Build a Mat from nested sequences; ``cols`` disambiguates zero rows."""
    data = tuple(tuple(int(x) for x in row) for row in entries)
    if data:
        c = len(data[0])
    elif cols is not None:
        c = cols
    else:
        c = 0
    return Mat(len(data), c, data)


def identity(n: int) -> Mat:
    return Mat(n, n, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))


def zeros(r: int, c: int) -> Mat:
    return Mat(r, c, tuple(tuple(0 for _ in range(c)) for _ in range(r)))


def transpose(a: Mat) -> Mat:
    return Mat(a.cols, a.rows, tuple(tuple(a.data[i][j] for i in range(a.rows)) for j in range(a.cols)))


def mat_mul(a: Mat, b: Mat) -> Mat:
    if a.cols != b.rows:
        raise ValueError(f"cannot multiply {a.rows}x{a.cols} by {b.rows}x{b.cols}")
    bt = list(zip(*b.data)) if b.data else [()] * b.cols
    out = tuple(
        tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a.data
    )
    if not a.data:
        return Mat(0, b.cols, ())
    return Mat(a.rows, b.cols, out)


def mat_sub(a: Mat, b: Mat) -> Mat:
    if (a.rows, a.cols) != (b.rows, b.cols):
        raise ValueError("shape mismatch")
    return Mat(a.rows, a.cols, tuple(
        tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a.data, b.data)
    ))


def hstack(a: Mat, b: Mat) -> Mat:
    if a.rows != b.rows:
        raise ValueError("row count mismatch")
    return Mat(a.rows, a.cols + b.cols, tuple(ra + rb for ra, rb in zip(a.data, b.data)))


def vstack(a: Mat, b: Mat) -> Mat:
    if a.cols != b.cols:
        raise ValueError("column count mismatch")
    return Mat(a.rows + b.rows, a.cols, a.data + b.data)


def det(a: Mat) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    if a.rows != a.cols:
        raise ValueError("determinant of a nonsquare matrix")
    n = a.rows
    if n == 0:
        return 1
    m = [list(r) for r in a.data]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def naive_det(a: Mat) -> int:
    """Determinant by cofactor expansion; independent slow reference."""
    if a.rows != a.cols:
        raise ValueError("determinant of a nonsquare matrix")

    def go(rows: list[tuple[int, ...]], cols: tuple[int, ...]) -> int:
        if not cols:
            return 1
        total = 0
        first, rest = rows[0], rows[1:]
        for k, j in enumerate(cols):
            if first[j] == 0:
                continue
            sub = tuple(c for c in cols if c != j)
            total += (-1) ** k * first[j] * go(rest, sub)
        return total

    return go(list(a.data), tuple(range(a.cols)))


def minor_gcd(a: Mat, k: int) -> int:
    """gcd of all k x k minors (0 if all vanish); naive reference oracle."""
    if k == 0:
        return 1
    g = 0
    for ris in combinations(range(a.rows), k):
        for cjs in combinations(range(a.cols), k):
            sub = mat([[a.data[i][j] for j in cjs] for i in ris])
            g = gcd(g, naive_det(sub))
            if g == 1:
                return 1
    return g


@dataclass(frozen=True)
class SNFResult:
    """Diagonalization U * A * V = D with unimodular U, V.

    Diagonal entries are nonnegative and each divides the next; zeros
    trail.
    """

    D: Mat
    U: Mat
    V: Mat


def snf(a: Mat) -> SNFResult:
    """Smith normal form with transforms.

    Classical elimination: pivot on the entry of minimal absolute value,
    clear its row and column with exact division or a 2x2 Bezout
    combination, and only advance once the pivot divides the whole
    remaining block.
    """
    m, n = a.rows, a.cols
    D = [list(r) for r in a.data]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i: int, j: int) -> None:
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i: int, j: int) -> None:
        for r in D:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]

    def addmul_row(i: int, j: int, c: int) -> None:
        Di, Dj = D[i], D[j]
        for k in range(n):
            Di[k] += c * Dj[k]
        Ui, Uj = U[i], U[j]
        for k in range(m):
            Ui[k] += c * Uj[k]

    def addmul_col(i: int, j: int, c: int) -> None:
        for r in D:
            r[i] += c * r[j]
        for r in V:
            r[i] += c * r[j]

    def combine_rows(i: int, j: int, w: int, x: int, y: int, z: int) -> None:
        # (row_i, row_j) <- (w*row_i + x*row_j, y*row_i + z*row_j), wz - xy = +-1
        for M in (D, U):
            Ri, Rj = M[i], M[j]
            for k in range(len(Ri)):
                p, q = Ri[k], Rj[k]
                Ri[k] = w * p + x * q
                Rj[k] = y * p + z * q

    def combine_cols(i: int, j: int, w: int, x: int, y: int, z: int) -> None:
        for M in (D, V):
            for r in M:
                p, q = r[i], r[j]
                r[i] = w * p + x * q
                r[j] = y * p + z * q

    t = 0
    while t < m and t < n:
        piv = None
        best = None
        for i in range(t, m):
            for j in range(t, n):
                v = D[i][j]
                if v != 0 and (best is None or abs(v) < best):
                    piv, best = (i, j), abs(v)
        if piv is None:
            break
        swap_rows(t, piv[0])
        swap_cols(t, piv[1])
        while True:
            for i in range(t + 1, m):
                v = D[i][t]
                if v == 0:
                    continue
                p = D[t][t]
                if v % p == 0:
                    addmul_row(i, t, -(v // p))
                else:
                    g, x, y = xgcd(p, v)
                    combine_rows(t, i, x, y, -(v // g), p // g)
            for j in range(t + 1, n):
                v = D[t][j]
                if v == 0:
                    continue
                p = D[t][t]
                if v % p == 0:
                    addmul_col(j, t, -(v // p))
                else:
                    g, x, y = xgcd(p, v)
                    combine_cols(t, j, x, y, -(v // g), p // g)
            if any(D[i][t] != 0 for i in range(t + 1, m)):
                continue
            if any(D[t][j] != 0 for j in range(t + 1, n)):
                continue
            p = D[t][t]
            offender = None
            for i in range(t + 1, m):
                if any(D[i][j] % p != 0 for j in range(t + 1, n)):
                    offender = i
                    break
            if offender is None:
                break
            addmul_row(t, offender, 1)
        t += 1

    for i in range(min(m, n)):
        if D[i][i] < 0:
            for k in range(n):
                D[i][k] = -D[i][k]
            for k in range(m):
                U[i][k] = -U[i][k]

    return SNFResult(mat(D, cols=n), mat(U, cols=m), mat(V, cols=n))


def snf_diagonal(a: Mat) -> tuple[int, ...]:
    """Nonzero diagonal entries of the Smith form of ``a``."""
    d = snf(a).D
    return tuple(x for x in d.diagonal() if x != 0)


def integer_kernel(a: Mat) -> Mat:
    """A basis (as columns) of the lattice ``{x : a @ x = 0}``."""
    res = snf(a)
    r = len([x for x in res.D.diagonal() if x != 0])
    basis_cols = [res.V.col(j) for j in range(r, a.cols)]
    return Mat(a.cols, len(basis_cols), tuple(
        tuple(col[i] for col in basis_cols) for i in range(a.cols)
    ))


def solve_integer(a: Mat, v: Sequence[int]) -> list[int] | None:
    """One integer solution x of ``a @ x = v``, or None if there is none."""
    if len(v) != a.rows:
        raise ValueError("dimension mismatch")
    res = snf(a)
    uv = [sum(res.U.data[i][k] * v[k] for k in range(a.rows)) for i in range(a.rows)]
    diag = res.D.diagonal()
    y = [0] * a.cols
    for i in range(a.rows):
        d = diag[i] if i < len(diag) else 0
        if d == 0:
            if uv[i] != 0:
                return None
        else:
            if uv[i] % d != 0:
                return None
            if i < a.cols:
                y[i] = uv[i] // d
    return [sum(res.V.data[i][k] * y[k] for k in range(a.cols)) for i in range(a.cols)]


def lattice_contains(basis: Mat, v: Sequence[int]) -> bool:
    """Whether v lies in the lattice generated by the columns of ``basis``."""
    return solve_integer(basis, v) is not None


def presentation_to_structure(a: Mat) -> tuple[int, tuple[int, ...]]:
    """Decompose ``Z^cols / rowspace(a)``.

    Returns ``(rank, invariant_factors)`` with the invariant factors in
    containment-chain order (largest first, each divisible by the next).

    >>> presentation_to_structure(mat([[2, 0], [0, 3]]))
    (0, (6,))
    >>> presentation_to_structure(mat([[4, 0], [0, 0]]))
    (1, (4,))
    """
    nonzero = snf_diagonal(a)
    rank = a.cols - len(nonzero)
    torsion = tuple(d for d in reversed(nonzero) if d != 1)
    return rank, torsion


def cokernel_is_zero(f: Mat, target_relations: Mat | None = None) -> bool:
    """Is the induced map onto ``Z^g / rowspace(target_relations)`` surjective?

    ``f`` has one column per source generator and one row per target
    generator.  Surjectivity holds iff the columns of ``f`` together with
    the target relations generate all of ``Z^g``.

    >>> cokernel_is_zero(mat([[2, 3]]))
    True
    >>> cokernel_is_zero(mat([[2]]))
    False
    """
    g = f.rows
    rel = target_relations if target_relations is not None else zeros(0, g)
    if rel.cols != g:
        raise ValueError("relation width does not match target generators")
    stacked = hstack(f, transpose(rel))
    diag = snf_diagonal(stacked)
    return len(diag) == g and all(d == 1 for d in diag)


def map_is_welldefined(f: Mat, source_relations: Mat, target_relations: Mat) -> bool:
    """Does ``f`` send every source relation into the target relation lattice?"""
    if source_relations.cols != f.cols:
        raise ValueError("relation width does not match source generators")
    basis = transpose(target_relations)
    for rel in source_relations.data:
        image = [sum(f.data[i][j] * rel[j] for j in range(f.cols)) for i in range(f.rows)]
        if basis.cols == 0:
            if any(x != 0 for x in image):
                return False
        elif not lattice_contains(basis, image):
            return False
    return True


def kernel_is_zero(f: Mat, source_relations: Mat, target_relations: Mat) -> bool:
    """Is the induced map between presented modules injective?

    Injectivity means the full preimage of the target relation lattice is
    contained in the source relation lattice.  The preimage lattice is
    the projection of the integer kernel of ``[f | -B]`` where B spans
    the target relations.
    """
    b = transpose(target_relations)
    neg_b = Mat(b.rows, b.cols, tuple(tuple(-x for x in r) for r in b.data))
    ker = integer_kernel(hstack(f, neg_b))
    src_basis = transpose(source_relations)
    for j in range(ker.cols):
        v = [ker.data[i][j] for i in range(f.cols)]
        if all(x == 0 for x in v):
            continue
        if src_basis.cols == 0:
            return False
        if not lattice_contains(src_basis, v):
            return False
    return True


def random_unimodular(n: int, rng, steps: int = 12) -> Mat:
    """A pseudorandom determinant +-1 matrix built from elementary moves."""
    m = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(steps):
        i = rng.randrange(n)
        j = rng.randrange(n)
        if i == j:
            continue
        c = rng.randint(-3, 3)
        for k in range(n):
            m[i][k] += c * m[j][k]
    if rng.random() < 0.5 and n >= 2:
        m[0], m[1] = m[1], m[0]
    return mat(m, cols=n)
