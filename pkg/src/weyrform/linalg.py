"""Dense exact matrices over Q or GF(p) and the elimination kernels on them.

All elimination routines pivot on the first nonzero entry in column order,
so kernels, inverses and every witness built from them are reproducible.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .exceptions import FieldMismatchError, ShapeError, SingularMatrixError
from .fields import QQ, Field, as_field


class Matrix:
    """Immutable rectangular matrix over a single exact field.

    Entries are raw canonical field values (see :mod:`weyrform.fields`).
    ``Matrix([[0, 1], [0, 0]])`` builds a rational matrix; pass
    ``field=Field.prime(5)`` (or ``"prime:5"``) for GF(5).
    """

    __slots__ = ("field", "rows", "nrows", "ncols", "_hash")

    def __init__(self, rows: Iterable[Sequence], field: Field | str | None = None,
                 ncols: int | None = None, _raw: bool = False):
        field = as_field(field)
        if _raw:
            data = tuple(tuple(r) for r in rows)
        else:
            elem = field.element
            data = tuple(tuple(elem(x) for x in r) for r in rows)
        if data:
            width = len(data[0])
            if any(len(r) != width for r in data):
                raise ShapeError("ragged rows")
            if ncols is not None and ncols != width:
                raise ShapeError(f"expected {ncols} columns, got {width}")
        else:
            width = ncols or 0
        self.field = field
        self.rows = data
        self.nrows = len(data)
        self.ncols = width
        self._hash = None

    @classmethod
    def _wrap(cls, rows, field: Field, ncols: int) -> Matrix:
        return cls(rows, field, ncols=ncols, _raw=True)

    # -- constructors -----------------------------------------------------

    @classmethod
    def zeros(cls, nrows: int, ncols: int, field: Field | str | None = None) -> Matrix:
        field = as_field(field)
        z = field.zero
        return cls._wrap([[z] * ncols for _ in range(nrows)], field, ncols)

    @classmethod
    def identity(cls, n: int, field: Field | str | None = None) -> Matrix:
        field = as_field(field)
        z, o = field.zero, field.one
        return cls._wrap([[o if i == j else z for j in range(n)] for i in range(n)], field, n)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], nrows: int,
                     field: Field | str | None = None) -> Matrix:
        field = as_field(field)
        cols = [[field.element(x) for x in c] for c in columns]
        if any(len(c) != nrows for c in cols):
            raise ShapeError("column length mismatch")
        return cls._wrap([[c[i] for c in cols] for i in range(nrows)], field, len(cols))

    @classmethod
    def from_entries(cls, nrows: int, ncols: int, entries: dict,
                     field: Field | str | None = None) -> Matrix:
        """Sparse constructor: ``entries`` maps ``(i, j)`` to a value."""
        field = as_field(field)
        z = field.zero
        data = [[z] * ncols for _ in range(nrows)]
        for (i, j), v in entries.items():
            data[i][j] = field.element(v)
        return cls._wrap(data, field, ncols)

    # -- basic protocol ---------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    @property
    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def __getitem__(self, idx):
        i, j = idx
        return self.rows[i][j]

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return (self.field == other.field and self.shape == other.shape
                and self.rows == other.rows)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.field, self.shape, self.rows))
        return self._hash

    def __repr__(self):
        body = "; ".join(" ".join(self.field.format(x) for x in r) for r in self.rows)
        return f"Matrix[{self.nrows}x{self.ncols}, {self.field}]({body})"

    def to_lists(self) -> list[list]:
        return [list(r) for r in self.rows]

    def to_strings(self) -> list[list[str]]:
        fmt = self.field.format
        return [[fmt(x) for x in r] for r in self.rows]

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.rows)

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self.rows)

    @property
    def T(self) -> Matrix:
        cols = [tuple(r[j] for r in self.rows) for j in range(self.ncols)]
        return Matrix._wrap(cols, self.field, self.nrows)

    def submatrix(self, r0: int, r1: int, c0: int, c1: int) -> Matrix:
        """Rows ``r0:r1`` and columns ``c0:c1``."""
        return Matrix._wrap([r[c0:c1] for r in self.rows[r0:r1]], self.field, c1 - c0)

    def support(self) -> set[tuple[int, int]]:
        return {(i, j) for i, r in enumerate(self.rows) for j, x in enumerate(r) if x}

    # -- arithmetic -------------------------------------------------------

    def _check_same(self, other: Matrix):
        if not isinstance(other, Matrix):
            raise TypeError(f"expected Matrix, got {type(other).__name__}")
        if self.field != other.field:
            raise FieldMismatchError(f"{self.field} vs {other.field}")

    def __add__(self, other: Matrix) -> Matrix:
        self._check_same(other)
        if self.shape != other.shape:
            raise ShapeError(f"cannot add {self.shape} and {other.shape}")
        red = self.field.reduce
        return Matrix._wrap([[red(a + b) for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)],
                            self.field, self.ncols)

    def __sub__(self, other: Matrix) -> Matrix:
        self._check_same(other)
        if self.shape != other.shape:
            raise ShapeError(f"cannot subtract {self.shape} and {other.shape}")
        red = self.field.reduce
        return Matrix._wrap([[red(a - b) for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)],
                            self.field, self.ncols)

    def __neg__(self) -> Matrix:
        red = self.field.reduce
        return Matrix._wrap([[red(-a) for a in r] for r in self.rows], self.field, self.ncols)

    def scale(self, c) -> Matrix:
        c = self.field.element(c)
        red = self.field.reduce
        return Matrix._wrap([[red(c * a) for a in r] for r in self.rows], self.field, self.ncols)

    def __matmul__(self, other: Matrix) -> Matrix:
        return mat_mul(self, other)

    def __pow__(self, e: int) -> Matrix:
        return matrix_power(self, e)


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    """Exact product; zero entries of ``a`` are skipped."""
    a._check_same(b)
    if a.ncols != b.nrows:
        raise ShapeError(f"cannot multiply {a.shape} by {b.shape}")
    field = a.field
    n = b.ncols
    brows = b.rows
    out = []
    for row in a.rows:
        acc = [0] * n
        for k, x in enumerate(row):
            if x:
                for j, y in enumerate(brows[k]):
                    if y:
                        acc[j] += x * y
        out.append([field.reduce(v) for v in acc])
    return Matrix._wrap(out, field, n)


def matrix_power(a: Matrix, e: int) -> Matrix:
    if not a.is_square:
        raise ShapeError("power of a non-square matrix")
    if e < 0:
        return matrix_power(invert(a), -e)
    result = Matrix.identity(a.nrows, a.field)
    base = a
    while e:
        if e & 1:
            result = result @ base
        e >>= 1
        if e:
            base = base @ base
    return result


def vstack(*blocks: Matrix) -> Matrix:
    field = blocks[0].field
    ncols = blocks[0].ncols
    rows = []
    for m in blocks:
        blocks[0]._check_same(m)
        if m.ncols != ncols:
            raise ShapeError("vstack column mismatch")
        rows.extend(m.rows)
    return Matrix._wrap(rows, field, ncols)


def block_diag(*blocks: Matrix, field: Field | None = None) -> Matrix:
    field = blocks[0].field if blocks else as_field(field)
    n = sum(m.nrows for m in blocks)
    c = sum(m.ncols for m in blocks)
    data = [[field.zero] * c for _ in range(n)]
    r0 = c0 = 0
    for m in blocks:
        if m.field != field:
            raise FieldMismatchError("block_diag over mixed fields")
        for i, row in enumerate(m.rows):
            data[r0 + i][c0:c0 + m.ncols] = row
        r0 += m.nrows
        c0 += m.ncols
    return Matrix._wrap(data, field, c)


def jordan_block(k: int, field: Field | str | None = None, eigenvalue=0) -> Matrix:
    """``J_k(eigenvalue)``: ones on the first superdiagonal."""
    field = as_field(field)
    lam = field.element(eigenvalue)
    return Matrix._wrap([[lam if i == j else (field.one if j == i + 1 else field.zero)
                          for j in range(k)] for i in range(k)], field, k)


def permutation_matrix(perm: Sequence[int], field: Field | str | None = None) -> Matrix:
    """``P`` with ``P[:, w] = e[perm[w]]``, so ``(P^-1 A P)[a, b] = A[perm[a], perm[b]]``."""
    field = as_field(field)
    n = len(perm)
    data = [[field.zero] * n for _ in range(n)]
    for w, src in enumerate(perm):
        data[src][w] = field.one
    return Matrix._wrap(data, field, n)


def permute_similar(a: Matrix, perm: Sequence[int]) -> Matrix:
    """``P^-1 a P`` for ``P = permutation_matrix(perm)``, without multiplying."""
    rows = a.rows
    return Matrix._wrap([[rows[i][j] for j in perm] for i in perm], a.field, len(perm))


# -- elimination ----------------------------------------------------------

def rref(a: Matrix) -> tuple[list[list], list[int]]:
    """Reduced row echelon form (as mutable rows) and the pivot columns."""
    field = a.field
    red, inv = field.reduce, field.inv
    m = a.to_lists()
    pivots = []
    r = 0
    for c in range(a.ncols):
        if r == a.nrows:
            break
        p = next((i for i in range(r, a.nrows) if m[i][c]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        s = inv(m[r][c])
        prow = [red(x * s) for x in m[r]]
        m[r] = prow
        for i in range(a.nrows):
            if i != r:
                f = m[i][c]
                if f:
                    m[i] = [red(x - f * y) if y else x for x, y in zip(m[i], prow)]
        pivots.append(c)
        r += 1
    return m, pivots


def rank(a: Matrix) -> int:
    return len(rref(a)[1])


def kernel_basis(a: Matrix) -> list[tuple]:
    """Basis of the right null space, one vector per free column.

    Vectors are tuples of raw entries; the list is empty iff ``a`` is
    injective.
    """
    field = a.field
    m, pivots = rref(a)
    pivot_set = set(pivots)
    basis = []
    for f in range(a.ncols):
        if f in pivot_set:
            continue
        v = [field.zero] * a.ncols
        v[f] = field.one
        for row, c in zip(m, pivots):
            if row[f]:
                v[c] = field.reduce(-row[f])
        basis.append(tuple(v))
    return basis


def nullity(a: Matrix) -> int:
    return a.ncols - rank(a)


def invert(a: Matrix) -> Matrix:
    if not a.is_square:
        raise ShapeError(f"cannot invert a {a.shape} matrix")
    n = a.nrows
    field = a.field
    red, inv = field.reduce, field.inv
    m = [list(r) + [field.one if i == j else field.zero for j in range(n)]
         for i, r in enumerate(a.rows)]
    for c in range(n):
        p = next((i for i in range(c, n) if m[i][c]), None)
        if p is None:
            raise SingularMatrixError("matrix is singular")
        m[c], m[p] = m[p], m[c]
        s = inv(m[c][c])
        prow = [red(x * s) for x in m[c]]
        m[c] = prow
        for i in range(n):
            if i != c:
                f = m[i][c]
                if f:
                    m[i] = [red(x - f * y) if y else x for x, y in zip(m[i], prow)]
    return Matrix._wrap([r[n:] for r in m], field, n)


def is_invertible(a: Matrix) -> bool:
    return a.is_square and rank(a) == a.nrows


def conjugate(m: Matrix, s: Matrix, s_inv: Matrix | None = None) -> Matrix:
    """``s^-1 m s``; pass a precomputed ``s_inv`` to skip the inversion."""
    if not (m.is_square and s.is_square and m.nrows == s.nrows):
        raise ShapeError(f"cannot conjugate {m.shape} by {s.shape}")
    if s_inv is None:
        s_inv = invert(s)
    return s_inv @ m @ s


def is_nilpotent(m: Matrix) -> bool:
    if not m.is_square:
        raise ShapeError("nilpotency of a non-square matrix")
    return matrix_power(m, m.nrows).is_zero()


# -- sparse elimination ---------------------------------------------------

class SparseEchelon:
    """Incrementally maintained reduced echelon basis of sparse vectors.

    Vectors are ``{index: value}`` dicts with nonzero raw field values.
    Every stored row has leading coefficient one and no entry in any other
    row's pivot column, so a single pass reduces a new vector.
    """

    def __init__(self, field: Field = QQ):
        self.field = field
        self.pivots: dict[int, dict] = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, vec: dict) -> dict:
        red = self.field.reduce
        v = dict(vec)
        for c in [c for c in v if c in self.pivots]:
            f = v.get(c)
            if not f:
                continue
            for j, y in self.pivots[c].items():
                x = red(v.get(j, 0) - f * y)
                if x:
                    v[j] = x
                else:
                    v.pop(j, None)
        return v

    def add(self, vec: dict) -> bool:
        """Insert ``vec``; return False if it was already in the span."""
        v = self.reduce(vec)
        if not v:
            return False
        field = self.field
        red = field.reduce
        c = min(v)
        s = field.inv(v[c])
        row = {j: red(x * s) for j, x in v.items()}
        for other in self.pivots.values():
            f = other.get(c)
            if f:
                for j, y in row.items():
                    x = red(other.get(j, 0) - f * y)
                    if x:
                        other[j] = x
                    else:
                        other.pop(j, None)
        self.pivots[c] = row
        return True

    def contains(self, vec: dict) -> bool:
        return not self.reduce(vec)

    def kernel(self, nvars: int) -> list[dict]:
        """Null space basis of the stored rows, one vector per free index."""
        field = self.field
        by_free: dict[int, list] = {}
        for c, row in self.pivots.items():
            for j, y in row.items():
                if j != c:
                    by_free.setdefault(j, []).append((c, y))
        basis = []
        for f in range(nvars):
            if f in self.pivots:
                continue
            v = {f: field.one}
            for c, y in by_free.get(f, ()):
                v[c] = field.reduce(-y)
            basis.append(v)
        return basis


def sparse_vector(values: Iterable) -> dict:
    return {i: x for i, x in enumerate(values) if x}


def sparse_rank(vectors: Iterable[dict], field: Field = QQ) -> int:
    ech = SparseEchelon(field)
    for v in vectors:
        ech.add(v)
    return ech.rank


def solve_homogeneous(rows: Iterable[dict], nvars: int, field: Field = QQ) -> list[dict]:
    """Basis of ``{x : row . x = 0 for every row}`` for sparse ``rows``."""
    ech = SparseEchelon(field)
    for r in rows:
        if r:
            ech.add(r)
    return ech.kernel(nvars)


def flatten(m: Matrix) -> dict:
    """Row-major sparse vector of the entries of ``m``."""
    n = m.ncols
    return {i * n + j: x for i, r in enumerate(m.rows) for j, x in enumerate(r) if x}


def unflatten(vec: dict, nrows: int, ncols: int, field: Field) -> Matrix:
    return Matrix.from_entries(nrows, ncols, {divmod(k, ncols): v for k, v in vec.items()}, field)


def same_span(first: Sequence[Matrix], second: Sequence[Matrix], field: Field) -> bool:
    """Exact span equality of two matrix families via three ranks."""
    a = [flatten(m) for m in first]
    b = [flatten(m) for m in second]
    ra = sparse_rank(a, field)
    rb = sparse_rank(b, field)
    return ra == rb == sparse_rank(a + b, field)


def apply(m: Matrix, v: Sequence) -> tuple:
    """Matrix-vector product on raw entry tuples."""
    if len(v) != m.ncols:
        raise ShapeError(f"cannot apply {m.shape} to a vector of length {len(v)}")
    red = m.field.reduce
    return tuple(red(sum(x * y for x, y in zip(row, v) if x and y)) for row in m.rows)
