"""scikit-learn style wrappers around the exact algorithms.

``fit`` learns a similarity ``S``; ``transform`` conjugates any matrix by it
(``S^-1 X S``) and ``inverse_transform`` undoes that. Inputs may be
:class:`~weyrform.linalg.Matrix` objects, nested lists of ints, fractions or
strings, or integer/object numpy arrays; floats are rejected because the
results are exact.
"""

from __future__ import annotations

from fractions import Fraction

from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .exceptions import FieldMismatchError, ShapeError
from .fields import as_field
from .linalg import Matrix, conjugate, invert, mat_mul
from .normal_form import CommutingPair, reduce_pair, stair_profile, verify_normal_form
from .structure import weyr_decomposition


def check_matrix(X, field=None, *, square: bool = False, name: str = "X") -> Matrix:
    """Validate and convert ``X`` to an exact :class:`Matrix` over ``field``."""
    field = as_field(field)
    if isinstance(X, Matrix):
        if X.field != field:
            raise FieldMismatchError(f"{name} is over {X.field}, expected {field}")
        m = X
    else:
        if hasattr(X, "tolist"):
            dtype = getattr(X, "dtype", None)
            if dtype is not None and getattr(dtype, "kind", "O") in "fc":
                raise TypeError(f"{name} has floating dtype {dtype}; use integers or Fractions")
            X = X.tolist()
        try:
            rows = [list(r) for r in X]
        except TypeError:
            raise ShapeError(f"{name} must be two-dimensional") from None
        for r in rows:
            for x in r:
                if not isinstance(x, (int, str, Fraction)) and not hasattr(x, "denominator"):
                    raise TypeError(f"{name} has a non-exact entry {x!r}")
        m = Matrix(rows, field)
    if square and not m.is_square:
        raise ShapeError(f"{name} must be square, got {m.shape}")
    return m


def check_pair(M, N, field=None) -> CommutingPair:
    return CommutingPair(check_matrix(M, field, square=True, name="M"),
                         check_matrix(N, field, square=True, name="N"))


class _SimilarityTransformer(TransformerMixin, BaseEstimator):
    def transform(self, X):
        check_is_fitted(self, "S_")
        X = check_matrix(X, self.field, square=True)
        return conjugate(X, self.S_, self.S_inv_)

    def inverse_transform(self, X):
        check_is_fitted(self, "S_")
        X = check_matrix(X, self.field, square=True)
        return mat_mul(mat_mul(self.S_, X), self.S_inv_)


class WeyrCanonicalForm(_SimilarityTransformer):
    """Weyr canonical form of a nilpotent matrix.

    After ``fit(M)``: ``structure_`` (Weyr characteristic), ``W_`` and the
    witness ``S_`` with ``S_^-1 M S_ = W_``. ``fit_transform(M)`` is ``W_``.
    """

    def __init__(self, field="rational"):
        self.field = field

    def fit(self, X, y=None):
        M = check_matrix(X, self.field, square=True)
        dec = weyr_decomposition(M)
        self.structure_ = dec.structure
        self.W_ = dec.W
        self.S_ = dec.S
        self.S_inv_ = invert(dec.S)
        self.n_features_in_ = M.ncols
        return self


class PairNormalForm(_SimilarityTransformer):
    """Normal form ``(W, B)`` of a commuting nilpotent pair ``(M, N)``.

    ``fit(M, N)`` stores ``W_``, ``B_``, the witness ``S_``, the full
    ``result_`` and the ``stair_profile_`` of ``B_``. ``transform(N)`` then
    returns ``B_`` and ``transform(M)`` returns ``W_``.
    """

    def __init__(self, field="rational"):
        self.field = field

    def fit(self, X, y):
        pair = check_pair(X, y, self.field)
        res = reduce_pair(pair)
        self.result_ = res
        self.W_, self.B_, self.S_ = res.W, res.B, res.S
        self.S_inv_ = invert(res.S)
        self.stair_profile_ = stair_profile(res)
        self.n_features_in_ = pair.size
        return self

    def score(self, X, y) -> float:
        """1.0 if ``(X, y)`` conjugates into a valid normal form, else 0.0."""
        check_is_fitted(self, "S_")
        W = self.transform(X)
        B = self.transform(y)
        return float(verify_normal_form(W, B).ok)


__all__ = ["PairNormalForm", "WeyrCanonicalForm", "check_matrix", "check_pair"]
