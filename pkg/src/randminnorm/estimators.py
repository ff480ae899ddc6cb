"""scikit-learn compatible wrappers.

``A p = b`` with more unknowns than equations is a linear regression with
more features than samples: ``A`` is the design matrix ``X`` (``m`` samples,
``n`` features), ``b`` the target ``y``, and the minimal-norm solution is the
interpolating coefficient vector of smallest norm. The regressors below store
it in ``coef_`` and predict with ``X @ coef_``.

:class:`SRFTSketch` exposes the transform as a feature-space random
projection (each sample row ``x`` is mapped to ``T x``).

All estimators accept complex input, which ``sklearn.utils.check_array``
does not, so validation goes through :mod:`randminnorm._validation`.
"""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import as_complex_array, as_complex_vector, check_sampling
from .exceptions import DimensionError
from .lsq import LsqConfig, solve_ls
from .minnorm import ProblemInstance, SolverConfig, solve_classical, solve_randomized
from .rng import DEFAULT_SEED, RandomStream
from .srft import adjoint_to_columns, apply_to_columns, build_srft


def _check_X_for_predict(est, X):
    check_is_fitted(est, "coef_")
    X = as_complex_array(X, "X", ndim=2)
    if X.shape[1] != est.n_features_in_:
        raise DimensionError(f"X has {X.shape[1]} features, estimator was fitted with "
                             f"{est.n_features_in_}")
    return X


class _MinNormPredictMixin:
    def predict(self, X):
        """Return ``X @ coef_``."""
        X = _check_X_for_predict(self, X)
        return X @ self.coef_


class RandomizedMinNormRegressor(_MinNormPredictMixin, BaseEstimator):
    """Minimal-norm interpolation by the randomized sketch-and-project solver.

    Parameters
    ----------
    n_components : int or None, default=None
        Sketch size ``l``; ``None`` uses ``4 * n_samples``. Must satisfy
        ``n_samples < l < n_features``.
    alpha : float, default=4.0
    epsilon : float, default=1e-6
        Relative accuracy target for ``coef_``.
    sampling : {"without", "with"}, default="without"
    max_iter : int, default=300
    tol : float or None, default=None
        Explicit least-squares precision (overrides the one derived from
        ``epsilon``).
    random_state : int, default=DEFAULT_SEED

    Attributes
    ----------
    coef_ : ndarray of shape (n_features,)
    report_ : SolveReport
    n_features_in_ : int
    """

    def __init__(self, n_components=None, alpha=4.0, epsilon=1e-6, sampling="without",
                 max_iter=300, tol=None, random_state=DEFAULT_SEED):
        self.n_components = n_components
        self.alpha = alpha
        self.epsilon = epsilon
        self.sampling = sampling
        self.max_iter = max_iter
        self.tol = tol
        self.random_state = random_state

    def fit(self, X, y):
        inst = ProblemInstance(X, y)
        cfg = SolverConfig(l=self.n_components, alpha=self.alpha, epsilon=self.epsilon,
                           seed=self.random_state, sampling=self.sampling,
                           max_iterations=self.max_iter, lsq_tol=self.tol)
        self.report_ = solve_randomized(inst, cfg)
        self.coef_ = self.report_.x
        self.n_features_in_ = inst.n
        return self


class ClassicalMinNormRegressor(_MinNormPredictMixin, BaseEstimator):
    """Minimal-norm interpolation by pivoted Householder QR.

    Parameters
    ----------
    method : {"lapack", "householder"}, default="lapack"
    """

    def __init__(self, method="lapack"):
        self.method = method

    def fit(self, X, y):
        inst = ProblemInstance(X, y)
        self.coef_ = solve_classical(inst, method=self.method)
        self.n_features_in_ = inst.n
        return self


class SketchedLeastSquares(_MinNormPredictMixin, BaseEstimator):
    """Overdetermined least squares by sketch-preconditioned CGLS.

    Fits ``coef_`` minimizing ``||X @ coef_ - y||`` for tall ``X``
    (``n_samples > n_features``) to relative excess ``tol``.
    """

    def __init__(self, n_components=None, tol=1e-12, max_iter=300, sampling="without",
                 random_state=DEFAULT_SEED):
        self.n_components = n_components
        self.tol = tol
        self.max_iter = max_iter
        self.sampling = sampling
        self.random_state = random_state

    def fit(self, X, y):
        X = as_complex_array(X, "X", ndim=2)
        y = as_complex_vector(y, "y", length=X.shape[0])
        n, m = X.shape
        l = 4 * m if self.n_components is None else self.n_components
        l = min(l, n)
        cfg = LsqConfig(l=l, tau=self.tol, max_iterations=self.max_iter,
                        stream=RandomStream(self.random_state),
                        replace=check_sampling(self.sampling))
        sol = solve_ls(X, y, cfg)
        self.coef_ = sol.y
        self.n_iter_ = sol.iterations
        self.converged_ = sol.converged
        self.n_features_in_ = m
        return self


class SRFTSketch(TransformerMixin, BaseEstimator):
    """Random projection of samples by a subsampled randomized Fourier transform.

    ``transform`` maps each row ``x`` (length ``n_features``) to ``T x``
    (length ``n_components``); ``inverse_transform`` applies ``T^*``, which
    is an exact left inverse on the sketch when rows are sampled without
    replacement (``T T^* = I``).
    """

    def __init__(self, n_components=8, sampling="without", random_state=DEFAULT_SEED):
        self.n_components = n_components
        self.sampling = sampling
        self.random_state = random_state

    def fit(self, X, y=None):
        X = as_complex_array(X, "X", ndim=2)
        self.n_features_in_ = X.shape[1]
        self.operator_ = build_srft(self.n_components, X.shape[1],
                                    RandomStream(self.random_state),
                                    replace=check_sampling(self.sampling))
        return self

    def transform(self, X):
        check_is_fitted(self, "operator_")
        X = as_complex_array(X, "X", ndim=2)
        if X.shape[1] != self.n_features_in_:
            raise DimensionError(f"X has {X.shape[1]} features, expected {self.n_features_in_}")
        return np.ascontiguousarray(apply_to_columns(self.operator_, X.T).T)

    def inverse_transform(self, Y):
        check_is_fitted(self, "operator_")
        Y = as_complex_array(Y, "Y", ndim=2)
        return np.ascontiguousarray(adjoint_to_columns(self.operator_, Y.T).T)
