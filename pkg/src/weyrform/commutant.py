"""Matrices commuting with a nilpotent Weyr matrix.

A commuting matrix is block upper triangular with respect to the strips of
the Weyr matrix. Its first superblock row ``S_{1,beta}`` has a staircase
pattern read off the block-level flag grid ``H_beta``, and every superblock
``S_{1+l, beta+l}`` is the upper-left corner of ``S_{1,beta}``.

Superblock indices ``alpha`` and ``beta`` are 1-based throughout the public
API to match the usual block notation; internal tuples are 0-based, so
``pattern.entry_mask[beta - 1]`` is the mask of ``S_{1,beta}``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .exceptions import ShapeError, StructureError
from .fields import Field
from .linalg import Matrix, mat_mul
from .structure import SegreStructure, WeyrStructure, build_weyr_matrix, weyr_characteristic

FREE = "×"
ZERO = "0"


@dataclass(frozen=True)
class KMatrix:
    """Skew-symmetric size-difference matrix, ``K[i][j] = k_j - k_i``."""

    entries: tuple[tuple[int, ...], ...]

    def to_lists(self) -> list[list[int]]:
        return [list(r) for r in self.entries]

    def __str__(self):
        return "[" + ",".join("[" + ",".join(str(x) for x in r) + "]" for r in self.entries) + "]"


@dataclass(frozen=True)
class CommutantPattern:
    """Block-level and entry-level staircase patterns of a Weyr commutant.

    ``h_blocks[d]`` is the ``m_1 x m_{d+1}`` grid of ``H_{d+1}`` (True where
    the block is free), ``entry_mask[d]`` its ``r_1 x r_{d+1}`` expansion by
    the multiplicities, and ``stair_set[d]`` the allowed cells whose lower
    neighbour is forbidden or missing.
    """

    segre: SegreStructure
    weyr: WeyrStructure
    h_blocks: tuple[tuple[tuple[bool, ...], ...], ...]
    entry_mask: tuple[tuple[tuple[bool, ...], ...], ...]
    stair_set: tuple[frozenset, ...]

    def mask(self, beta: int):
        return self.entry_mask[beta - 1]

    def stairs(self, beta: int) -> frozenset:
        return self.stair_set[beta - 1]

    @property
    def n(self) -> int:
        return self.weyr.n


@dataclass(frozen=True)
class CommutantBasis:
    pattern: CommutantPattern
    basis: tuple[Matrix, ...]

    def __len__(self):
        return len(self.basis)


def k_matrix(j: SegreStructure) -> KMatrix:
    ks = j.sizes
    return KMatrix(tuple(tuple(kj - ki for kj in ks) for ki in ks))


def _block_index(mults: tuple[int, ...]) -> list[int]:
    """Map each entry index to the index of its multiplicity block."""
    return [i for i, p in enumerate(mults) for _ in range(p)]


def h_pattern(j: SegreStructure) -> CommutantPattern:
    w = weyr_characteristic(j)
    K = k_matrix(j).entries
    mults = j.multiplicities
    block_of = _block_index(mults)
    r1 = w.r[0] if w.k else 0
    h_blocks, masks, stairs = [], [], []
    for beta in range(1, w.k + 1):
        mb = w.m[beta - 1]
        h = tuple(tuple(K[i][jj] < beta for jj in range(mb)) for i in range(w.m[0]))
        rb = w.r[beta - 1]
        mask = tuple(tuple(h[block_of[a]][block_of[b]] for b in range(rb)) for a in range(r1))
        stair = frozenset((a, b) for a in range(r1) for b in range(rb)
                          if mask[a][b] and (a == r1 - 1 or not mask[a + 1][b]))
        h_blocks.append(h)
        masks.append(mask)
        stairs.append(stair)
    return CommutantPattern(j, w, tuple(h_blocks), tuple(masks), tuple(stairs))


def format_h_grid(p: CommutantPattern) -> str:
    """Text grid of ``H = [H_1 | ... | H_k]`` with ``×`` for free blocks."""
    lines = []
    for i in range(p.weyr.m[0] if p.weyr.k else 0):
        groups = [" ".join(FREE if flag else ZERO for flag in h[i]) for h in p.h_blocks]
        lines.append(" | ".join(groups))
    return "\n".join(lines)


def format_k_matrix(K: KMatrix) -> str:
    width = max((len(str(x)) for r in K.entries for x in r), default=1)
    return "\n".join(" ".join(str(x).rjust(width) for x in r) for r in K.entries)


def expand_superblock_layout(p: CommutantPattern) -> dict[tuple[int, int], tuple[tuple[bool, ...], ...]]:
    """Mask of every superblock ``(alpha, beta)``, keyed 1-based.

    Superblocks on or above the diagonal take the upper-left corner of the
    first-row mask with the same offset; those below are all forbidden.
    """
    r = p.weyr.r
    layout = {}
    for alpha in range(1, len(r) + 1):
        for beta in range(1, len(r) + 1):
            ra, rb = r[alpha - 1], r[beta - 1]
            if beta < alpha:
                layout[(alpha, beta)] = tuple((False,) * rb for _ in range(ra))
            else:
                src = p.entry_mask[beta - alpha]
                layout[(alpha, beta)] = tuple(tuple(src[a][:rb]) for a in range(ra))
    return layout


def full_mask(p: CommutantPattern) -> list[list[bool]]:
    """``n x n`` grid of positions that may be nonzero in a commuting matrix."""
    off = p.weyr.offsets
    n = p.n
    grid = [[False] * n for _ in range(n)]
    for (alpha, beta), mask in expand_superblock_layout(p).items():
        r0, c0 = off[alpha - 1], off[beta - 1]
        for a, row in enumerate(mask):
            for b, flag in enumerate(row):
                if flag:
                    grid[r0 + a][c0 + b] = True
    return grid


def free_positions(p: CommutantPattern) -> list[tuple[int, int, int]]:
    """Independent scalar positions ``(beta, a, b)`` of the first superblock row."""
    return [(beta, a, b)
            for beta, mask in enumerate(p.entry_mask, start=1)
            for a, row in enumerate(mask)
            for b, flag in enumerate(row) if flag]


def commutant_dimension(j: SegreStructure) -> int:
    """Classical count ``sum_{i,j} p_i p_j min(k_i, k_j)``."""
    return sum(pi * pj * min(ki, kj) for ki, pi in j.parts for kj, pj in j.parts)


def assemble(p: CommutantPattern, first_row: Mapping[int, Matrix], field: Field) -> Matrix:
    """Build the full matrix from its first superblock row.

    ``first_row[beta]`` is the ``r_1 x r_beta`` superblock ``S_{1,beta}``;
    missing keys are zero. Every ``S_{1+l, beta+l}`` is filled with the
    upper-left corner of ``S_{1,beta}``. The pattern itself is not enforced
    here; see :func:`matches_pattern`.
    """
    r = p.weyr.r
    off = p.weyr.offsets
    n = p.n
    data = [[field.zero] * n for _ in range(n)]
    for beta, block in first_row.items():
        if block.field != field:
            raise ShapeError("superblock over the wrong field")
        if block.shape != (r[0], r[beta - 1]):
            raise ShapeError(f"S_1{beta} must be {r[0]}x{r[beta - 1]}, got {block.shape}")
        for alpha in range(1, len(r) - beta + 2):
            b2 = alpha + beta - 1
            ra, rb = r[alpha - 1], r[b2 - 1]
            r0, c0 = off[alpha - 1], off[b2 - 1]
            for a in range(ra):
                data[r0 + a][c0:c0 + rb] = block.rows[a][:rb]
    return Matrix._wrap(data, field, n)


def superblock(S: Matrix, w: WeyrStructure, alpha: int, beta: int) -> Matrix:
    off = w.offsets
    return S.submatrix(off[alpha - 1], off[alpha], off[beta - 1], off[beta])


def commutant_basis(W: Matrix, p: CommutantPattern) -> CommutantBasis:
    """One commuting matrix per free position of the first superblock row."""
    if build_weyr_matrix(p.weyr, W.field) != W:
        raise StructureError("W is not the Weyr matrix of the pattern's structure")
    field = W.field
    r = p.weyr.r
    basis = []
    for beta, a, b in free_positions(p):
        block = Matrix.from_entries(r[0], r[beta - 1], {(a, b): 1}, field)
        basis.append(assemble(p, {beta: block}, field))
    return CommutantBasis(p, tuple(basis))


def is_commutant_member(S: Matrix, W: Matrix) -> bool:
    if S.shape != W.shape or not S.is_square:
        raise ShapeError(f"cannot compare {S.shape} with {W.shape}")
    return mat_mul(W, S) == mat_mul(S, W)


def matches_pattern(S: Matrix, p: CommutantPattern) -> bool:
    """Zero off the staircase and angular repeats of the first superblock row."""
    if S.shape != (p.n, p.n):
        raise ShapeError(f"expected {p.n}x{p.n}, got {S.shape}")
    mask = full_mask(p)
    for row, allowed in zip(S.rows, mask):
        if any(x and not ok for x, ok in zip(row, allowed)):
            return False
    r = p.weyr.r
    first = {beta: superblock(S, p.weyr, 1, beta) for beta in range(1, len(r) + 1)}
    return assemble(p, first, S.field) == S


__all__ = [
    "CommutantBasis", "CommutantPattern", "KMatrix", "assemble", "commutant_basis",
    "commutant_dimension", "expand_superblock_layout", "format_h_grid", "format_k_matrix",
    "free_positions", "full_mask", "h_pattern", "is_commutant_member", "k_matrix",
    "matches_pattern", "superblock",
]
