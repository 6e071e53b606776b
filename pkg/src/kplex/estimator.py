"""Scikit-learn style front end for the solvers."""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .controller import ControllerConfig
from .solver import solve
from .validation import check_graph, check_k


class MaxKPlex(BaseEstimator):
    """Find a large k-plex of a graph.

    ``fit`` runs one solver call on the graph ``X`` (anything accepted by
    :func:`check_graph`); ``fit_predict`` returns the 0/1 membership mask.

    Parameters
    ----------
    k : int, default=2
    algorithm : {'rle', 'rnd'}, default='rle'
        Learned (l, e, b) schedule or uniformly random triples.
    time_limit : float or None, default=10.0
    max_iter : int or None, default=None
    random_state : int or None, default=None
    prelearn_alpha : int, default=1
        Prelearning rounds; the published setting is 100.
    target : int or None, default=None
        Stop early once a k-plex of this size is found.

    Attributes
    ----------
    best_set_ : ndarray of int
        Sorted vertex ids of the best k-plex.
    best_size_ : int
    support_ : ndarray of bool
        Membership mask over the vertices.
    n_iter_ : int
    time_to_best_ : float
    result_ : SolverResult
    """

    def __init__(self, k=2, algorithm="rle", time_limit=10.0, max_iter=None, random_state=None,
                 prelearn_alpha=1, kappa=6, tau=2.0, epsilon=4000, n_prune=2375, target=None):
        self.k = k
        self.algorithm = algorithm
        self.time_limit = time_limit
        self.max_iter = max_iter
        self.random_state = random_state
        self.prelearn_alpha = prelearn_alpha
        self.kappa = kappa
        self.tau = tau
        self.epsilon = epsilon
        self.n_prune = n_prune
        self.target = target

    def _config(self) -> ControllerConfig:
        return ControllerConfig(kappa=self.kappa, alpha=self.prelearn_alpha, tau=self.tau,
                                epsilon=self.epsilon, n_prune=self.n_prune)

    def fit(self, X, y=None):
        graph = check_graph(X)
        k = check_k(self.k)
        if self.algorithm not in ("rle", "rnd"):
            raise ValueError(f"algorithm must be 'rle' or 'rnd', got {self.algorithm!r}")
        if self.time_limit is None and self.max_iter is None and self.target is None:
            raise ValueError("set time_limit, max_iter or target")
        seed = self.random_state
        if isinstance(seed, np.random.RandomState):
            seed = int(seed.randint(2**31 - 1))
        res = solve(graph, k, self.algorithm, time_limit=self.time_limit, max_iter=self.max_iter,
                    seed=seed, config=self._config(), target=self.target)
        self.result_ = res
        self.best_set_ = np.array(sorted(res.best_set), dtype=np.intp)
        self.best_size_ = res.best_size
        self.support_ = np.zeros(graph.n, dtype=bool)
        self.support_[self.best_set_] = True
        self.n_iter_ = res.iterations
        self.time_to_best_ = res.time_to_best
        self.n_vertices_ = graph.n
        return self

    def _check_fitted(self):
        if not hasattr(self, "support_"):
            raise NotFittedError("MaxKPlex is not fitted yet; call fit first")

    def predict(self, X=None):
        """Membership mask of the fitted graph (``X`` must be that graph or None)."""
        self._check_fitted()
        if X is not None and check_graph(X).n != self.n_vertices_:
            raise ValueError("predict only applies to the graph passed to fit")
        return self.support_.astype(int)

    def fit_predict(self, X, y=None):
        return self.fit(X).predict()
