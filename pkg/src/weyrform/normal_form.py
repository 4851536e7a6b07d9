"""Normal form of a commuting nilpotent pair with a one-dimensional common kernel.

:func:`reduce_pair` returns ``(W, B, S)`` with ``W`` the Weyr form of ``M``,
``S^-1 M S = W`` and ``S^-1 N S = B``, where ``B``

* has ``J_{r_alpha}(0)`` on every diagonal superblock,
* is nonzero in each ``B_{1,beta}`` (``beta >= 2``) only on the stairs of the
  commutant staircase, and
* repeats ``B_{1,beta}`` as upper-left corners down each superdiagonal.

Every transformation is a commutant element of ``W``, built from its first
superblock row with :func:`weyrform.commutant.assemble`.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .commutant import CommutantPattern, assemble, h_pattern, matches_pattern, superblock
from .exceptions import (FieldMismatchError, KernelDimensionError, NotCommutingError,
                         NotNilpotentError, ReductionError, ShapeError, StructureError)
from .linalg import Matrix, block_diag, conjugate, jordan_block, mat_mul, nullity, vstack
from .structure import (WeyrStructure, jordan_basis, nilpotency_powers, weyr_decomposition,
                        weyr_structure_of)


@dataclass(frozen=True)
class CommutingPair:
    m: Matrix
    n: Matrix

    def __post_init__(self):
        if self.m.field != self.n.field:
            raise FieldMismatchError(f"{self.m.field} vs {self.n.field}")
        if not self.m.is_square or self.m.shape != self.n.shape:
            raise ShapeError(f"pair must be square of equal size, got {self.m.shape}, {self.n.shape}")

    @property
    def field(self):
        return self.m.field

    @property
    def size(self) -> int:
        return self.m.nrows

    def validate(self) -> None:
        """Raise the specific :class:`PreconditionError` for a bad pair."""
        if mat_mul(self.m, self.n) != mat_mul(self.n, self.m):
            raise NotCommutingError("M and N do not commute")
        for name, x in (("M", self.m), ("N", self.n)):
            try:
                nilpotency_powers(x)
            except NotNilpotentError:
                raise NotNilpotentError(f"{name} is not nilpotent") from None


@dataclass(frozen=True)
class NormalFormResult:
    weyr: WeyrStructure
    W: Matrix
    B: Matrix
    S: Matrix
    pattern: CommutantPattern = dc_field(repr=False, compare=False)


@dataclass(frozen=True)
class StairProfile:
    """Stair positions and stored values of each ``B_{1,beta}``, ``beta >= 2``."""

    stairs: dict
    values: dict


@dataclass
class NormalFormReport:
    checks: dict = dc_field(default_factory=dict)
    details: dict = dc_field(default_factory=dict)

    CHECKS = ("weyr", "commute", "diagonal_blocks", "stairs", "angular", "kernel")

    @property
    def ok(self) -> bool:
        return all(self.checks.get(name, False) for name in self.CHECKS)

    @property
    def failures(self) -> list[str]:
        return [name for name in self.CHECKS if not self.checks.get(name, False)]

    def _set(self, name, passed, detail=""):
        self.checks[name] = bool(passed)
        if not passed and detail:
            self.details[name] = detail

    def to_dict(self) -> dict:
        return {"ok": self.ok, "checks": dict(self.checks), "details": dict(self.details)}


def common_kernel_dimension(pair: CommutingPair) -> int:
    return nullity(vstack(pair.m, pair.n))


# -- reduction stages -------------------------------------------------------

def _jordanize_diagonal_blocks(B: Matrix, p: CommutantPattern) -> Matrix:
    """First-row superblock ``S_11``: Jordan bases of each ``p_i x p_i`` diagonal block."""
    B11 = superblock(B, p.weyr, 1, 1)
    pieces = []
    start = 0
    for _, mult in p.segre.parts:
        block = B11.submatrix(start, start + mult, start, start + mult)
        try:
            basis, _ = jordan_basis(block)
        except NotNilpotentError:
            raise ReductionError("diagonal block of B_11 is not nilpotent") from None
        pieces.append(basis)
        start += mult
    return block_diag(*pieces, field=B.field)


def _normalize_superdiagonal(B11: Matrix) -> Matrix:
    """Upper triangular ``T`` with ``T^-1 B11 T = J_r(0)``.

    Row by row: scale ``b_{i,i+1}`` to one, then clear the rest of row ``i``
    with column operations; the inverse row operations only touch row
    ``i + 1`` to the right of its superdiagonal entry.
    """
    field = B11.field
    red, inv = field.reduce, field.inv
    r = B11.nrows
    U = B11.to_lists()
    T = Matrix.identity(r, field).to_lists()
    for i in range(r):
        if any(U[i][j] for j in range(i + 1)):
            raise ReductionError("B_11 is not strictly upper triangular after Jordanization")
    for i in range(r - 1):
        b = U[i][i + 1]
        if not b:
            raise ReductionError(
                f"vanishing superdiagonal entry b_{i + 1},{i + 2} of B_11; "
                "the common kernel cannot be one-dimensional")
        s = inv(b)
        for row in U:
            row[i + 1] = red(row[i + 1] * s)
        for row in T:
            row[i + 1] = red(row[i + 1] * s)
        U[i + 1] = [red(x * b) for x in U[i + 1]]
        for j in range(i + 2, r):
            c = U[i][j]
            if not c:
                continue
            for row in U:
                row[j] = red(row[j] - c * row[i + 1])
            for row in T:
                row[j] = red(row[j] - c * row[i + 1])
            U[i + 1] = [red(x + c * y) for x, y in zip(U[i + 1], U[j])]
    if Matrix._wrap(U, field, r) != jordan_block(r, field):
        raise ReductionError("B_11 did not reach J_r(0)")
    return Matrix._wrap(T, field, r)


def _sweep_generator(X: Matrix, mask) -> tuple[Matrix, Matrix]:
    """Generator ``G`` of ``S = I - G`` for one superdiagonal, and the reduced block.

    ``X`` is ``B_{1,beta+1}`` (``r_1 x c``); ``G`` shares its staircase. The
    map ``X -> X + G J_c - J_{r_1} G`` acts diagonal by diagonal: the
    ``(l+1)``-st lower diagonal of ``G`` only moves the ``l``-th lower
    diagonal of ``X`` and the ``(l-1)``-st upper diagonal of ``G`` only
    the ``l``-th upper diagonal.
    """
    field = X.field
    red = field.reduce
    r1, c = X.shape
    x = X.to_lists()
    g = [[field.zero] * c for _ in range(r1)]

    # lower diagonals, bottom-up, each walked from its top entry
    for ell in range(r1 - 1, -1, -1):
        glen = max(0, min(r1 - ell - 1, c))
        allowed = [mask[ell + 1 + s][s] for s in range(glen)]
        s = 0
        while s < glen:
            if not allowed[s]:
                s += 1
                continue
            start = s
            while s < glen and allowed[s]:
                s += 1
            # fragment g[start:s]; x-diagonal entries start..s-1 are cleared
            acc = field.zero
            for i in range(start, s):
                acc = red(acc + x[ell + i][i])
                x[ell + i][i] = field.zero
                g[ell + 1 + i][i] = acc
            # telescoped sum lands on the stair x[ell + s][s]; it drops out
            # when the fragment ends in the last column
            if s < c:
                x[ell + s][s] = red(x[ell + s][s] + acc)

    # upper diagonals, each zeroed by the diagonal of G just below it
    for ell in range(1, c):
        acc = field.zero
        for s in range(c - ell):
            acc = red(acc + x[s][s + ell])
            x[s][s + ell] = field.zero
            if not mask[s + 1][s + ell]:
                raise ReductionError("upper-diagonal generator entry outside the staircase")
            g[s + 1][s + ell] = acc

    return Matrix._wrap(g, field, c), Matrix._wrap(x, field, c)


def _superdiagonals_equal(A: Matrix, B: Matrix, w: WeyrStructure, upto: int) -> bool:
    """Whether superdiagonals ``0 .. upto - 1`` of ``A`` and ``B`` coincide."""
    for gamma in range(upto):
        for alpha in range(1, w.k - gamma + 1):
            if superblock(A, w, alpha, alpha + gamma) != superblock(B, w, alpha, alpha + gamma):
                return False
    return True


def reduce_pair(pair: CommutingPair) -> NormalFormResult:
    """Reduce ``(M, N)`` to its normal form ``(W, B)`` with a similarity witness."""
    pair.validate()
    dim = common_kernel_dimension(pair)
    if dim != 1:
        raise KernelDimensionError(dim)
    field = pair.field

    # Weyr form of M
    dec = weyr_decomposition(pair.m)
    w, W, S = dec.structure, dec.W, dec.S
    p = h_pattern(w.segre)
    B = conjugate(pair.n, S)
    if not matches_pattern(B, p):
        raise ReductionError("conjugated N does not follow the commutant staircase")

    # B_11: Jordanize the diagonal blocks, then normalize to J_{r_1}(0)
    for make_factor in (_jordanize_diagonal_blocks,
                        lambda B, p: _normalize_superdiagonal(superblock(B, p.weyr, 1, 1))):
        F = assemble(p, {1: make_factor(B, p)}, field)
        B = conjugate(B, F)
        S = mat_mul(S, F)
    for alpha in range(1, w.k + 1):
        if superblock(B, w, alpha, alpha) != jordan_block(w.r[alpha - 1], field):
            raise ReductionError(f"diagonal superblock {alpha} is not J_r(0)")

    # superdiagonal sweep
    identity = Matrix.identity(w.n, field)
    for beta in range(1, w.k):
        X = superblock(B, w, 1, beta + 1)
        G, target = _sweep_generator(X, p.entry_mask[beta])
        F = identity - assemble(p, {beta + 1: G}, field)
        B_next = conjugate(B, F)
        if superblock(B_next, w, 1, beta + 1) != target:
            raise ReductionError(f"sweep of superdiagonal {beta} missed its target")
        if not _superdiagonals_equal(B, B_next, w, beta):
            raise ReductionError(f"sweep of superdiagonal {beta} disturbed earlier superdiagonals")
        B = B_next
        S = mat_mul(S, F)

    if mat_mul(pair.m, S) != mat_mul(S, W) or mat_mul(pair.n, S) != mat_mul(S, B):
        raise ReductionError("accumulated witness does not intertwine")
    report = verify_normal_form(W, B)
    if not report.ok:
        raise ReductionError(f"reduced pair fails checks {report.failures}: {report.details}")
    return NormalFormResult(w, W, B, S, p)


# -- verification -------------------------------------------------------------

def verify_normal_form(W: Matrix, B: Matrix) -> NormalFormReport:
    """Evaluate the six normal-form conditions independently."""
    rep = NormalFormReport()
    if W.shape != B.shape or W.field != B.field or not W.is_square:
        for name in NormalFormReport.CHECKS:
            rep._set(name, False, "W and B must be square matrices of equal size over one field")
        return rep
    field = W.field
    w = weyr_structure_of(W)
    rep._set("weyr", w is not None, "W is not a nilpotent Weyr matrix")
    rep._set("commute", mat_mul(W, B) == mat_mul(B, W), "WB != BW")
    kernel = nullity(vstack(W, B))
    rep._set("kernel", kernel == 1, f"common kernel dimension {kernel}")
    if w is None:
        for name in ("diagonal_blocks", "stairs", "angular"):
            rep._set(name, False, "no Weyr structure to partition B")
        return rep

    bad = [a for a in range(1, w.k + 1)
           if superblock(B, w, a, a) != jordan_block(w.r[a - 1], field)]
    rep._set("diagonal_blocks", not bad, f"superblocks {bad} differ from J_r(0)")

    p = h_pattern(w.segre)
    off_stair = []
    for beta in range(2, w.k + 1):
        stairs = p.stairs(beta)
        blk = superblock(B, w, 1, beta)
        off_stair += [(beta, a, b) for a, b in blk.support() if (a, b) not in stairs]
    rep._set("stairs", not off_stair, f"nonzero entries off the stairs at (beta, row, col) {off_stair[:8]}")

    first = {beta: superblock(B, w, 1, beta) for beta in range(1, w.k + 1)}
    rep._set("angular", assemble(p, first, field) == B,
             "some superblock is not the upper-left corner of its first-row superblock")
    return rep


def stair_profile(result: NormalFormResult) -> StairProfile:
    p = result.pattern
    stairs, values = {}, {}
    for beta in range(2, result.weyr.k + 1):
        blk = superblock(result.B, result.weyr, 1, beta)
        stairs[beta] = p.stairs(beta)
        values[beta] = {pos: blk[pos] for pos in sorted(p.stairs(beta))}
    return StairProfile(stairs, values)


def equal_block_profile(result: NormalFormResult) -> list[tuple]:
    """Last rows of ``B_1, ..., B_{k-1}`` when all Jordan blocks of M are equal."""
    w = result.weyr
    if w.segre.t != 1:
        raise StructureError(f"equal block profile needs one block size, got {w.segre}")
    r = w.r[0]
    return [superblock(result.B, w, 1, beta).rows[r - 1] for beta in range(2, w.k + 1)]


__all__ = [
    "CommutingPair", "NormalFormReport", "NormalFormResult", "StairProfile",
    "common_kernel_dimension", "equal_block_profile", "reduce_pair", "stair_profile",
    "verify_normal_form",
]
