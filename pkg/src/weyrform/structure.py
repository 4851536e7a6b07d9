"""Segre and Weyr characteristics, Weyr matrices, and Weyr decompositions."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import NamedTuple, Sequence

from .exceptions import NotNilpotentError, ShapeError, StructureError
from .fields import Field, as_field
from .linalg import (Matrix, SparseEchelon, apply, block_diag, jordan_block,
                     kernel_basis, mat_mul, permute_similar, rank, sparse_vector)


@dataclass(frozen=True)
class SegreStructure:
    """Jordan data of a nilpotent matrix: ``p_i`` blocks of size ``k_i``.

    ``parts`` is a tuple of ``(k_i, p_i)`` with ``k_1 > k_2 > ... > 0``.
    The empty structure describes the 0x0 matrix.
    """

    parts: tuple[tuple[int, int], ...]

    def __post_init__(self):
        parts = tuple((int(k), int(p)) for k, p in self.parts)
        object.__setattr__(self, "parts", parts)
        for k, p in parts:
            if k < 1 or p < 1:
                raise StructureError(f"block sizes and multiplicities must be positive: {parts}")
        if any(a[0] <= b[0] for a, b in zip(parts, parts[1:])):
            raise StructureError(f"block sizes must be strictly decreasing: {parts}")

    @classmethod
    def from_lists(cls, sizes: Sequence[int], mults: Sequence[int] | None = None) -> SegreStructure:
        if mults is None:
            mults = [1] * len(sizes)
        if len(sizes) != len(mults):
            raise StructureError("k-list and p-list differ in length")
        return cls(tuple(zip(sizes, mults)))

    @classmethod
    def from_block_sizes(cls, sizes: Sequence[int]) -> SegreStructure:
        """Collapse an unordered multiset of Jordan block sizes."""
        counts: dict[int, int] = {}
        for s in sizes:
            counts[s] = counts.get(s, 0) + 1
        return cls(tuple(sorted(counts.items(), reverse=True)))

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(k for k, _ in self.parts)

    @property
    def multiplicities(self) -> tuple[int, ...]:
        return tuple(p for _, p in self.parts)

    @property
    def t(self) -> int:
        return len(self.parts)

    @property
    def dim(self) -> int:
        return sum(k * p for k, p in self.parts)

    def block_sizes(self) -> list[int]:
        return [k for k, p in self.parts for _ in range(p)]

    def __str__(self):
        return " + ".join(f"{p}x J{k}" for k, p in self.parts) or "empty"


@dataclass(frozen=True)
class WeyrStructure:
    """Weyr characteristic ``r`` with the derived ``m`` sequence.

    ``r[i]`` (0-based) counts Jordan blocks of size > i, and ``m[i]`` counts
    the *distinct* sizes among them. Build through :func:`weyr_characteristic`
    or :meth:`from_r`.
    """

    r: tuple[int, ...]
    m: tuple[int, ...]
    segre: SegreStructure = dc_field(compare=False)

    @classmethod
    def from_r(cls, r: Sequence[int]) -> WeyrStructure:
        r = tuple(int(x) for x in r)
        if any(x < 1 for x in r) or any(a < b for a, b in zip(r, r[1:])):
            raise StructureError(f"Weyr characteristic must be non-increasing and positive: {r}")
        # number of blocks of size exactly i is r_i - r_{i+1}
        parts = []
        for i in range(len(r), 0, -1):
            nxt = r[i] if i < len(r) else 0
            if r[i - 1] > nxt:
                parts.append((i, r[i - 1] - nxt))
        return weyr_characteristic(SegreStructure(tuple(parts)))

    @property
    def k(self) -> int:
        return len(self.r)

    @property
    def n(self) -> int:
        return sum(self.r)

    @property
    def offsets(self) -> tuple[int, ...]:
        """Start index of each strip, plus the total size at the end."""
        out = [0]
        for x in self.r:
            out.append(out[-1] + x)
        return tuple(out)


@dataclass(frozen=True)
class GeneralWeyrStructure:
    """Direct sum of shifted nilpotent Weyr blocks ``lambda_l I + W_l``."""

    blocks: tuple[tuple[object, WeyrStructure], ...]


def weyr_characteristic(j: SegreStructure) -> WeyrStructure:
    k = j.parts[0][0] if j.parts else 0
    r = tuple(sum(p for kk, p in j.parts if kk >= i) for i in range(1, k + 1))
    m = tuple(sum(1 for kk, _ in j.parts if kk >= i) for i in range(1, k + 1))
    return WeyrStructure(r, m, j)


def build_weyr_matrix(w: WeyrStructure, field: Field | str | None = None) -> Matrix:
    """Zero diagonal strips, ``[I; 0]`` of shape ``r_i x r_{i+1}`` above them."""
    field = as_field(field)
    off = w.offsets
    entries = {}
    for i in range(w.k - 1):
        for c in range(w.r[i + 1]):
            entries[(off[i] + c, off[i + 1] + c)] = 1
    return Matrix.from_entries(w.n, w.n, entries, field)


def jordan_matrix(j: SegreStructure, field: Field | str | None = None) -> Matrix:
    """The Jordan matrix with blocks ordered by decreasing size."""
    field = as_field(field)
    blocks = [jordan_block(k, field) for k in j.block_sizes()]
    return block_diag(*blocks, field=field)


def jordan_to_weyr_permutation(j: SegreStructure) -> tuple[int, ...]:
    """Index map collecting the first rows of all Jordan blocks, then the
    second rows, and so on.

    ``perm[w]`` is the Jordan-basis index placed at Weyr position ``w``, so
    ``permute_similar(jordan_matrix(j), perm) == build_weyr_matrix(...)``.
    """
    starts = []
    pos = 0
    sizes = j.block_sizes()
    for k in sizes:
        starts.append(pos)
        pos += k
    top = sizes[0] if sizes else 0
    return tuple(start + level
                 for level in range(top)
                 for start, k in zip(starts, sizes) if k > level)


def nilpotency_powers(m: Matrix) -> list[Matrix]:
    """``[I, m, m^2, ..., m^d]`` with ``m^d = 0``; raises if ``m^n != 0``."""
    if not m.is_square:
        raise ShapeError(f"expected a square matrix, got {m.shape}")
    powers = [Matrix.identity(m.nrows, m.field)]
    while not powers[-1].is_zero():
        if len(powers) > m.nrows:
            raise NotNilpotentError("matrix is not nilpotent")
        powers.append(mat_mul(powers[-1], m))
    return powers


def jordan_chains(m: Matrix) -> list[list[tuple]]:
    """Jordan chains of a nilpotent matrix, longest first.

    Each chain is ``[v, m v, m^2 v, ..., m^(d-1) v]`` with ``m^d v = 0``.
    Chain tops are picked greedily from kernel bases of the powers of ``m``,
    so the result is deterministic.
    """
    powers = nilpotency_powers(m)
    depth = len(powers) - 1
    kernels = [kernel_basis(p) for p in powers]
    chains: list[list[tuple]] = []
    for d in range(depth, 0, -1):
        span = SparseEchelon(m.field)
        for v in kernels[d - 1]:
            span.add(sparse_vector(v))
        for chain in chains:
            span.add(sparse_vector(chain[len(chain) - d]))
        for v in kernels[d]:
            if span.add(sparse_vector(v)):
                chain = [v]
                for _ in range(d - 1):
                    chain.append(apply(m, chain[-1]))
                chains.append(chain)
    return chains


def jordan_basis(m: Matrix) -> tuple[Matrix, list[int]]:
    """``(S, sizes)`` with ``S^-1 m S`` the Jordan matrix of those block sizes."""
    chains = jordan_chains(m)
    columns = [vec for chain in chains for vec in reversed(chain)]
    return Matrix.from_columns(columns, m.nrows, m.field), [len(c) for c in chains]


class WeyrDecomposition(NamedTuple):
    structure: WeyrStructure
    W: Matrix
    S: Matrix


def weyr_decomposition(m: Matrix) -> WeyrDecomposition:
    """Weyr canonical form of a nilpotent matrix with an explicit witness.

    The characteristic comes from rank differences of the powers of ``m``.
    The columns of ``S`` are the Jordan chain vectors regrouped by level:
    strip ``i`` holds ``m^(len - i) v`` for every chain of length >= i, so
    ``m S = S W`` column by column.
    """
    ranks = rank_profile(m)
    w = WeyrStructure.from_r([a - b for a, b in zip(ranks, ranks[1:])])
    chains = jordan_chains(m)
    if SegreStructure.from_block_sizes([len(c) for c in chains]) != w.segre:
        raise AssertionError("Jordan chains disagree with the rank profile")
    columns = [chain[len(chain) - level]
               for level in range(1, w.k + 1)
               for chain in chains if len(chain) >= level]
    S = Matrix.from_columns(columns, m.nrows, m.field)
    W = build_weyr_matrix(w, m.field)
    if mat_mul(m, S) != mat_mul(S, W):
        raise AssertionError("Weyr witness does not intertwine")
    return WeyrDecomposition(w, W, S)


def weyr_structure_of(W: Matrix) -> WeyrStructure | None:
    """The structure of ``W`` if it is literally a nilpotent Weyr matrix."""
    if not W.is_square:
        return None
    try:
        powers = nilpotency_powers(W)
    except NotNilpotentError:
        return None
    ranks = [rank(p) for p in powers]
    r = [a - b for a, b in zip(ranks, ranks[1:])]
    try:
        w = WeyrStructure.from_r(r)
    except StructureError:
        return None
    return w if build_weyr_matrix(w, W.field) == W else None


def build_general_weyr(g: GeneralWeyrStructure, field: Field | str | None = None) -> Matrix:
    field = as_field(field)
    eigenvalues = [field.element(lam) for lam, _ in g.blocks]
    if len(set(eigenvalues)) != len(eigenvalues):
        raise StructureError("eigenvalues of a general Weyr matrix must be distinct")
    pieces = []
    for lam, (_, w) in zip(eigenvalues, g.blocks):
        block = build_weyr_matrix(w, field)
        pieces.append(block + Matrix.identity(w.n, field).scale(lam))
    return block_diag(*pieces, field=field)


def rank_profile(m: Matrix) -> list[int]:
    """``[rank(m^0), rank(m^1), ...]`` down to the first zero power."""
    return [rank(p) for p in nilpotency_powers(m)]


__all__ = [
    "GeneralWeyrStructure", "SegreStructure", "WeyrDecomposition", "WeyrStructure",
    "build_general_weyr", "build_weyr_matrix", "jordan_basis", "jordan_chains",
    "jordan_matrix", "jordan_to_weyr_permutation", "nilpotency_powers", "permute_similar",
    "rank_profile", "weyr_characteristic", "weyr_decomposition", "weyr_structure_of",
]
