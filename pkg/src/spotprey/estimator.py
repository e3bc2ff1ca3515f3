"""scikit-learn compatible wrappers around the price transform and the simulator.

Both are transformers over a single price column, so they chain::

    >>> from sklearn.pipeline import make_pipeline
    >>> pipe = make_pipeline(SpotPriceNormalizer(fixed_price=0.154), PredatorPreySimulator())
    >>> pipe.fit_transform([[0.043], [0.5]]).shape
    (2, 2)
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .analysis import critical_price, fixed_point
from .engine import SimParams, simulate
from .pricing import transform_price


def _price_column(X, estimator) -> np.ndarray:
    X = check_array(X, dtype=np.float64, ensure_2d=True)
    if X.shape[1] != 1:
        raise ValueError(
            f"{type(estimator).__name__} expects a single price column, got {X.shape[1]} features"
        )
    return X[:, 0]


class SpotPriceNormalizer(TransformerMixin, BaseEstimator):
    """Divide spot prices by the on-demand price and clamp at 1.

    Parameters
    ----------
    fixed_price : float, default=0.154
        On-demand price of the instance type, in the same currency as ``X``.
    """

    def __init__(self, fixed_price=0.154):
        self.fixed_price = fixed_price

    def fit(self, X, y=None):
        _price_column(X, self)
        if not self.fixed_price > 0:
            raise ValueError(f"fixed_price must be positive, got {self.fixed_price!r}")
        self.n_features_in_ = 1
        return self

    def transform(self, X):
        check_is_fitted(self, "n_features_in_")
        col = _price_column(X, self)
        return np.array([[transform_price(v, self.fixed_price)] for v in col]).reshape(-1, 1)


class PredatorPreySimulator(TransformerMixin, BaseEstimator):
    """Run the demand/resource recurrence over a column of transformed prices.

    ``transform`` maps ``n`` prices (shape ``(n, 1)``, values in ``[0, 1]``) to
    the ``n`` post-step states, shape ``(n, 2)`` with columns demand, resource.
    The seed state is not part of the output so rows stay aligned with input.

    Attributes
    ----------
    params_ : SimParams
    critical_price_ : float
        Price at which demand and resource birth rates balance.
    """

    def __init__(self, k=5.0, a=3.0, b=3.0, alpha=0.8, beta=0.8, dt=1.0, d0=5.0, r0=5.0):
        self.k = k
        self.a = a
        self.b = b
        self.alpha = alpha
        self.beta = beta
        self.dt = dt
        self.d0 = d0
        self.r0 = r0

    def fit(self, X, y=None):
        _price_column(X, self)
        self.params_ = SimParams.from_flat(**self.get_params())
        self.critical_price_ = critical_price(self.params_.rates)
        self.n_features_in_ = 1
        return self

    def transform(self, X):
        check_is_fitted(self, "params_")
        col = _price_column(X, self)
        series = simulate(col.tolist(), self.params_)
        return np.array([[s.demand, s.resource] for s in series.states[1:]])

    def fixed_points(self, X):
        """Closed-form equilibrium ``(D*, R*)`` per price; ``R*`` is ``inf`` when unbounded."""
        check_is_fitted(self, "params_")
        out = []
        for p in _price_column(X, self):
            fp = fixed_point(float(p), self.params_)
            out.append([fp.demand_star, np.inf if fp.resource_star is None else fp.resource_star])
        return np.array(out)
