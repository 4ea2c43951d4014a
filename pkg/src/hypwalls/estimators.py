"""Estimator-style wrappers and input validation.

The domain classes follow the scikit-learn conventions where they fit:
``fit`` builds the domain from a group, ``predict`` labels points
(1 inside, 0 on the boundary, -1 outside) and ``transform`` reduces points
into the domain.  Points are ``(n, 3)`` arrays of ``[Re z, Im z, r]``.
"""

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array, check_is_fitted

from .classify import classify_geometric, classify_trace
from .domains import (
    GroupSpec,
    bianchi_domain,
    bianchi_group_spec,
    build_domain,
    df_check,
    enumerate_group,
    faces,
    membership_array,
    reduce_point,
)
from .exceptions import DomainError
from .models import HalfSpacePoint, MoebiusMatrix

__all__ = [
    "check_matrix",
    "check_matrices",
    "check_points",
    "DirichletDomain",
    "BianchiDomain",
    "IsometryClassifier",
]


def check_matrix(g):
    """Coerce a MoebiusMatrix, a 2x2 array or four entries into a MoebiusMatrix."""
    if isinstance(g, MoebiusMatrix):
        return g
    arr = np.asarray(g, dtype=complex)
    if arr.shape == (4,):
        arr = arr.reshape(2, 2)
    if arr.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("matrix entries must be finite")
    return MoebiusMatrix.from_array(arr)


def check_matrices(X):
    if isinstance(X, MoebiusMatrix):
        return [X]
    if isinstance(X, np.ndarray) and X.ndim == 3:
        return [check_matrix(m) for m in X]
    return [check_matrix(m) for m in X]


def check_points(X):
    """Validate an ``(n, 3)`` array of upper half-space points; returns ``(z, r)``."""
    arr = check_array(X, dtype=float, ensure_2d=True)
    if arr.shape[1] != 3:
        raise ValueError(f"points need three columns [Re z, Im z, r], got {arr.shape[1]}")
    if np.any(arr[:, 2] <= 0):
        raise DomainError("every point needs r > 0")
    return arr[:, 0] + 1j * arr[:, 1], arr[:, 2]


class _DomainMixin:
    def predict(self, X):
        check_is_fitted(self, "domain_")
        z, r = check_points(X)
        return membership_array(z, r, self.domain_)

    def transform(self, X):
        """Reduce every point into the domain."""
        check_is_fitted(self, "domain_")
        z, r = check_points(X)
        out = np.empty((len(z), 3))
        for i, (zz, rr) in enumerate(zip(z, r)):
            Q, _ = reduce_point(HalfSpacePoint(zz, rr), self.domain_, self.spec_)
            out[i] = Q.as_tuple()
        return out

    def df_report(self):
        check_is_fitted(self, "faces_")
        return df_check(self.spec_, self.domain_, self.faces_, self.tol)

    def _fit_faces(self):
        seed = 0 if self.random_state is None else int(self.random_state)
        self.faces_ = faces(self.domain_, self.samples_per_wall, seed, self.threads)
        self.n_faces_ = len(self.faces_)


class DirichletDomain(_DomainMixin, BaseEstimator):
    """Dirichlet domain at ``j`` from words up to ``max_word_len`` in the generators.

    ``fit`` takes a GroupSpec or a list of matrices.
    """

    def __init__(self, max_word_len=3, norm_bound=30.0, samples_per_wall=200, tol=None,
                 random_state=0, threads=1):
        self.max_word_len = max_word_len
        self.norm_bound = norm_bound
        self.samples_per_wall = samples_per_wall
        self.tol = tol
        self.random_state = random_state
        self.threads = threads

    def fit(self, X, y=None):
        spec = X if isinstance(X, GroupSpec) else GroupSpec(check_matrices(X))
        if self.max_word_len < 1:
            raise ValueError("max_word_len must be at least 1")
        self.spec_ = spec
        self.elements_ = enumerate_group(spec, self.max_word_len, self.norm_bound)
        self.domain_ = build_domain(self.elements_, spec.stabilizer, tol=self.tol, fuchsian=spec.fuchsian)
        self._fit_faces()
        return self


class BianchiDomain(_DomainMixin, BaseEstimator):
    """Domain of the Bianchi group for squarefree ``d``; ``fit`` ignores its argument."""

    def __init__(self, d=1, norm_bound=20, samples_per_wall=200, tol=None, random_state=0, threads=1):
        self.d = d
        self.norm_bound = norm_bound
        self.samples_per_wall = samples_per_wall
        self.tol = tol
        self.random_state = random_state
        self.threads = threads

    def fit(self, X=None, y=None):
        from .bianchi import class_number, ideal_points, ring_ctx

        ctx = ring_ctx(self.d)
        self.spec_ = bianchi_group_spec(self.d)
        self.domain_ = bianchi_domain(self.d, self.norm_bound, self.tol)
        self.ideal_points_ = ideal_points(ctx)
        self.class_number_ = class_number(ctx)
        self._fit_faces()
        return self


class IsometryClassifier(BaseEstimator):
    """Label matrices as identity, elliptic, parabolic, hyperbolic or loxodromic.

    ``method`` is ``"trace"`` or ``"geometric"`` (by the walls of the powers).
    Stateless: ``fit`` only records the label set.
    """

    def __init__(self, method="trace", tol=None, max_power=64):
        self.method = method
        self.tol = tol
        self.max_power = max_power

    def fit(self, X=None, y=None):
        if self.method not in ("trace", "geometric"):
            raise ValueError("method must be 'trace' or 'geometric'")
        self.classes_ = np.array(["identity", "elliptic", "parabolic", "hyperbolic", "loxodromic"])
        return self

    def predict(self, X):
        check_is_fitted(self, "classes_")
        out = []
        for g in check_matrices(X):
            if self.method == "trace":
                out.append(classify_trace(g, self.tol).cls.value)
            else:
                out.append(classify_geometric(g, self.max_power, self.tol).cls.value)
        return np.array(out)
