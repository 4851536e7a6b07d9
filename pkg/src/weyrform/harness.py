"""Random instances, brute-force oracles and property drivers.

Every generator is a pure function of its parameters and a 64-bit seed;
sub-seeds are derived by hashing so independent trials never share a stream.
"""

from __future__ import annotations

import hashlib
import json
import random
import time
from dataclasses import asdict, dataclass, field as dc_field
from typing import Iterator, NamedTuple

from .commutant import (assemble, commutant_basis, commutant_dimension, h_pattern,
                        matches_pattern)
from .exceptions import WeyrFormError
from .fields import Field, as_field
from .linalg import (Matrix, conjugate, invert, is_invertible, jordan_block, mat_mul, rank,
                     same_span, solve_homogeneous, unflatten)
from .normal_form import CommutingPair, reduce_pair, verify_normal_form
from .structure import (SegreStructure, build_weyr_matrix, jordan_matrix,
                        jordan_to_weyr_permutation, nilpotency_powers, permute_similar,
                        weyr_characteristic, weyr_decomposition)

SEED_BITS = 64
BRUTE_FORCE_MAX_DIM = 12
REDUCTION_MAX_DIM = 30


def derive_seed(seed: int, *labels) -> int:
    """Deterministic 64-bit sub-seed for ``(seed, labels...)``."""
    text = ":".join([str(int(seed))] + [str(x) for x in labels])
    return int.from_bytes(hashlib.blake2b(text.encode(), digest_size=8).digest(), "big")


def _rng(seed: int) -> random.Random:
    if not 0 <= int(seed) < 2**SEED_BITS:
        raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed}")
    return random.Random(int(seed))


def _draw(rng: random.Random, field: Field, bound: int, nonzero: bool = False):
    if field.is_rational:
        while True:
            v = rng.randint(-bound, bound)
            if v or not nonzero:
                return field.element(v)
    if nonzero:
        return rng.randrange(1, field.modulus)
    return rng.randrange(field.modulus)


# -- generators -------------------------------------------------------------

def random_segre(max_dim: int, seed: int) -> SegreStructure:
    """Random Jordan type of total dimension at most ``max_dim``."""
    if max_dim < 1:
        raise ValueError("max_dim must be at least 1")
    rng = _rng(seed)
    remaining = rng.randint(1, max_dim)
    cap = rng.randint(1, remaining)
    sizes = []
    while remaining:
        s = rng.randint(1, min(cap, remaining))
        sizes.append(s)
        remaining -= s
    return SegreStructure.from_block_sizes(sizes)


def random_equal_segre(max_k: int, max_r: int, seed: int) -> SegreStructure:
    """``r`` Jordan blocks of one common size ``k`` (a single Segre part)."""
    rng = _rng(seed)
    return SegreStructure(((rng.randint(1, max_k), rng.randint(1, max_r)),))


def random_multi_segre(max_dim: int, seed: int, min_parts: int = 2) -> SegreStructure:
    """Random Jordan type with at least ``min_parts`` distinct block sizes."""
    rng = _rng(seed)
    while True:
        j = random_segre(max_dim, rng.getrandbits(SEED_BITS))
        if j.t >= min_parts:
            return j


def random_normal_pair(j: SegreStructure, field: Field | str | None, seed: int,
                       nonzero: bool = False, bound: int = 3) -> tuple[Matrix, Matrix]:
    """A pair ``(W, B)`` already in normal form, stair values drawn at random.

    With ``nonzero=True`` every stair value is nonzero, so the support of
    ``B`` is the full normal-form pattern.
    """
    field = as_field(field)
    rng = _rng(seed)
    p = h_pattern(j)
    r = p.weyr.r
    first = {1: jordan_block(r[0], field)} if r else {}
    for beta in range(2, len(r) + 1):
        entries = {pos: _draw(rng, field, bound, nonzero) for pos in sorted(p.stairs(beta))}
        first[beta] = Matrix.from_entries(r[0], r[beta - 1], entries, field)
    return build_weyr_matrix(p.weyr, field), assemble(p, first, field)


def random_invertible(n: int, field: Field | str | None, seed: int, bound: int = 2) -> Matrix:
    """``P L D U`` with unit-triangular ``L``, ``U``, diagonal ``D`` and a permutation ``P``.

    Over Q the entries are integers and ``det`` is a product of values in
    ``{+-1, +-2}``, which keeps denominators of the inverse small.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    field = as_field(field)
    rng = _rng(seed)
    L = {(i, i): 1 for i in range(n)}
    U = {(i, i): 1 for i in range(n)}
    for i in range(n):
        for j in range(i):
            L[(i, j)] = _draw(rng, field, bound)
            U[(j, i)] = _draw(rng, field, bound)
    if field.is_rational:
        D = {(i, i): rng.choice((1, -1, 2, -2)) for i in range(n)}
    else:
        D = {(i, i): rng.randrange(1, field.modulus) for i in range(n)}
    perm = list(range(n))
    rng.shuffle(perm)
    P = {(perm[i], i): 1 for i in range(n)}
    mats = [Matrix.from_entries(n, n, e, field) for e in (P, L, D, U)]
    return mat_mul(mat_mul(mats[0], mats[1]), mat_mul(mats[2], mats[3]))


class GeneratedInstance(NamedTuple):
    pair: CommutingPair
    W: Matrix
    B: Matrix
    R: Matrix


def conjugated_normal_pair(j: SegreStructure, field: Field | str | None, seed: int,
                           nonzero: bool = False) -> GeneratedInstance:
    """Normal pair ``(W, B)`` hidden behind a random similarity ``R``.

    The returned pair is ``(R W R^-1, R B R^-1)``, so ``R^-1`` maps it back.
    """
    field = as_field(field)
    W, B = random_normal_pair(j, field, derive_seed(seed, "pair"), nonzero=nonzero)
    R = random_invertible(W.nrows, field, derive_seed(seed, "conj")) if W.nrows else W
    R_inv = invert(R)
    pair = CommutingPair(conjugate(W, R_inv, R), conjugate(B, R_inv, R))
    return GeneratedInstance(pair, W, B, R)


# -- oracles ----------------------------------------------------------------

def commutation_equations(A: Matrix, A2: Matrix | None = None) -> list[dict]:
    """Sparse rows of ``A X - X A2 = 0`` in the row-major entries of ``X``."""
    A2 = A if A2 is None else A2
    n = A.nrows
    red = A.field.reduce
    rows = []
    for i in range(n):
        for j in range(n):
            eq = {}
            for l in range(n):
                a = A.rows[i][l]
                if a:
                    eq[l * n + j] = eq.get(l * n + j, 0) + a
                b = A2.rows[l][j]
                if b:
                    eq[i * n + l] = eq.get(i * n + l, 0) - b
            eq = {k: red(v) for k, v in eq.items()}
            rows.append({k: v for k, v in eq.items() if v})
    return rows


def brute_force_commutant(W: Matrix) -> list[Matrix]:
    """Null space of ``X -> W X - X W`` by elimination on ``n^2`` unknowns."""
    n = W.nrows
    return [unflatten(v, n, n, W.field)
            for v in solve_homogeneous(commutation_equations(W), n * n, W.field)]


class SimilarityVerdict(NamedTuple):
    verdict: str  # "similar" | "no" | "inconclusive"
    witness: Matrix | None = None
    detail: str = ""


def _rank_obstruction(p1: CommutingPair, p2: CommutingPair) -> str:
    for name, a, b in (("M", p1.m, p2.m), ("N", p1.n, p2.n)):
        ra = [rank(x) for x in nilpotency_powers(a)]
        rb = [rank(x) for x in nilpotency_powers(b)]
        if ra != rb:
            return f"rank profiles of {name} differ: {ra} vs {rb}"
    return ""


def pairs_similar_oracle(p1: CommutingPair, p2: CommutingPair, trials: int = 20,
                         seed: int = 0) -> SimilarityVerdict:
    """Search the intertwiner space for ``S`` with ``S^-1 p1 S = p2``.

    Solves ``M X = X M'`` and ``N X = X N'`` exactly, then samples random
    combinations of the solution basis for an invertible one.
    """
    if p1.size != p2.size:
        return SimilarityVerdict("no", detail="sizes differ")
    field = p1.field
    n = p1.size
    if p1 == p2:
        return SimilarityVerdict("similar", Matrix.identity(n, field))
    rows = commutation_equations(p1.m, p2.m) + commutation_equations(p1.n, p2.n)
    basis = [unflatten(v, n, n, field) for v in solve_homogeneous(rows, n * n, field)]
    if not basis:
        return SimilarityVerdict("no", detail="intertwiner space is zero")
    rng = _rng(seed)
    for _ in range(trials):
        X = Matrix.zeros(n, n, field)
        for b in basis:
            X = X + b.scale(_draw(rng, field, 5))
        if is_invertible(X):
            if mat_mul(p1.m, X) == mat_mul(X, p2.m) and mat_mul(p1.n, X) == mat_mul(X, p2.n):
                return SimilarityVerdict("similar", X)
    obstruction = _rank_obstruction(p1, p2)
    if obstruction:
        return SimilarityVerdict("no", detail=obstruction)
    return SimilarityVerdict("inconclusive", detail=f"no invertible element in {trials} samples")


# -- reports ----------------------------------------------------------------

@dataclass
class TrialReport:
    """One trial, serialized as a single JSON line."""

    suite: str
    structure: list
    seed: int
    field: str
    outcome: str = "pass"  # "pass" | "fail"
    detail: str = ""
    findings: list = dc_field(default_factory=list)
    timings: dict = dc_field(default_factory=dict)

    @property
    def failed(self) -> bool:
        return self.outcome == "fail"

    def fail(self, detail: str) -> None:
        self.outcome = "fail"
        self.detail = (self.detail + "; " if self.detail else "") + detail

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, ensure_ascii=False)


def _grid(m: Matrix) -> list:
    return m.to_strings()


def _evidence(**mats: Matrix) -> str:
    """Offending matrices as compact JSON, appended to a failure detail."""
    return "matrices " + json.dumps({k: _grid(v) for k, v in mats.items()}, separators=(",", ":"))


def _timed(report: TrialReport, name: str):
    class _Timer:
        def __enter__(self):
            self.t0 = time.perf_counter()

        def __exit__(self, *exc):
            report.timings[name] = round(time.perf_counter() - self.t0, 6)
            return False
    return _Timer()


def uniqueness_probe(j: SegreStructure, field: Field | str | None, trials: int,
                     seed: int) -> TrialReport:
    """Reduce independent conjugates of one normal pair and compare outputs.

    A mismatch fails the report only when it contradicts the known
    uniqueness result (one block size, characteristic zero); otherwise it
    is recorded as a finding.
    """
    field = as_field(field)
    report = TrialReport("uniqueness", [list(x) for x in j.parts], seed, str(field))
    assert_unique = j.t == 1 and field.is_rational
    with _timed(report, "total"):
        for trial in range(trials):
            s = derive_seed(seed, "probe", trial)
            W, B = random_normal_pair(j, field, derive_seed(s, "pair"))
            outputs = []
            for side in ("left", "right"):
                R = random_invertible(W.nrows, field, derive_seed(s, side))
                R_inv = invert(R)
                pair = CommutingPair(conjugate(W, R_inv, R), conjugate(B, R_inv, R))
                try:
                    outputs.append(reduce_pair(pair).B)
                except WeyrFormError as exc:
                    report.fail(f"trial {trial}: {type(exc).__name__}: {exc}")
                    break
            if len(outputs) < 2:
                continue
            distinct = {o for o in outputs} | ({B} if assert_unique else set())
            if len(distinct) > 1:
                entry = {"trial": trial, "generated": _grid(B),
                         "reduced": [_grid(o) for o in outputs]}
                if assert_unique:
                    report.fail(f"trial {trial}: reductions differ at one block size over Q")
                report.findings.append(entry)
    return report


# -- property suites ----------------------------------------------------------

def check_commutant(j: SegreStructure, field: Field) -> list[str]:
    W = build_weyr_matrix(weyr_characteristic(j), field)
    p = h_pattern(j)
    basis = commutant_basis(W, p).basis
    brute = brute_force_commutant(W)
    problems = []
    expected = commutant_dimension(j)
    if not len(basis) == len(brute) == expected:
        problems.append(f"dimensions basis={len(basis)} brute={len(brute)} formula={expected}")
    if not same_span(basis, brute, field):
        problems.append("span(commutant_basis) != brute-force commutant")
    if not all(matches_pattern(x, p) for x in brute):
        problems.append("a brute-force commutant element breaks the staircase pattern")
    if not all(mat_mul(W, x) == mat_mul(x, W) for x in basis):
        problems.append("a basis element does not commute with W")
    if problems:
        problems.append(_evidence(W=W))
    return problems


def check_weyr(j: SegreStructure, field: Field, seed: int) -> list[str]:
    problems = []
    W = build_weyr_matrix(weyr_characteristic(j), field)
    if permute_similar(jordan_matrix(j, field), jordan_to_weyr_permutation(j)) != W:
        problems.append("permuted Jordan matrix differs from the Weyr matrix")
    R = random_invertible(W.nrows, field, seed)
    M = conjugate(W, invert(R), R)
    dec = weyr_decomposition(M)
    if dec.W != W:
        problems.append("decomposition of a conjugate returned a different W")
    if conjugate(M, dec.S) != dec.W:
        problems.append("decomposition witness does not verify")
    if problems:
        problems.append(_evidence(M=M, W=dec.W, S=dec.S))
    return problems


def check_reduction(j: SegreStructure, field: Field, seed: int,
                    corrupt: bool = False) -> list[str]:
    inst = conjugated_normal_pair(j, field, seed)
    res = reduce_pair(inst.pair)
    B = res.B
    if corrupt:
        # flip one entry of the top-right corner: breaks the stair or angular checks
        rows = B.to_lists()
        rows[0][-1] = field.reduce(rows[0][-1] + 1)
        B = Matrix._wrap(rows, field, B.ncols)
    problems = []
    S_inv = invert(res.S)
    if conjugate(inst.pair.m, res.S, S_inv) != res.W:
        problems.append("S^-1 M S != W")
    if conjugate(inst.pair.n, res.S, S_inv) != B:
        problems.append("S^-1 N S != B")
    report = verify_normal_form(res.W, B)
    if not report.ok:
        problems.append(f"verifier failed {report.failures}")
    if j.t == 1 and field.is_rational and B != inst.B:
        problems.append("reduced B differs from the generated normal form")
    if problems:
        problems.append(_evidence(M=inst.pair.m, N=inst.pair.n, W=res.W, B=B, S=res.S))
    return problems


def run_selftest(max_dim: int = 10, trials: int = 200, seed: int = 0,
                 field: Field | str | None = None,
                 inject_fault: bool = False) -> Iterator[TrialReport]:
    """Yield one report per trial, in trial order."""
    field = as_field(field)
    for trial in range(trials):
        s = derive_seed(seed, "selftest", trial)
        j = random_segre(max_dim, derive_seed(s, "segre"))
        report = TrialReport("selftest", [list(x) for x in j.parts], s, str(field))
        try:
            if j.dim <= BRUTE_FORCE_MAX_DIM:
                with _timed(report, "commutant"):
                    for msg in check_commutant(j, field):
                        report.fail(msg)
            with _timed(report, "weyr"):
                for msg in check_weyr(j, field, derive_seed(s, "weyr")):
                    report.fail(msg)
            if j.dim <= REDUCTION_MAX_DIM:
                with _timed(report, "reduce"):
                    corrupt = inject_fault and trial == 0
                    for msg in check_reduction(j, field, derive_seed(s, "reduce"), corrupt):
                        report.fail(msg)
        except WeyrFormError as exc:
            report.fail(f"{type(exc).__name__}: {exc}")
        yield report


__all__ = [
    "GeneratedInstance", "SimilarityVerdict", "TrialReport", "brute_force_commutant",
    "check_commutant", "check_reduction", "check_weyr", "commutation_equations",
    "conjugated_normal_pair", "derive_seed", "pairs_similar_oracle", "random_equal_segre",
    "random_invertible", "random_multi_segre", "random_normal_pair", "random_segre",
    "run_selftest", "uniqueness_probe",
]
