"""Normal-error models with a point-null (spike-and-slab) prior.

Candidates are drawn from the prior components themselves (the slab for
moves off the null, the atom's own density for moves onto it, the variance
prior for variances), so prior and candidate densities cancel and

    w(state) = log-likelihood(state) + log p          on the null class,
    w(state) = log-likelihood(state) + log(1 - p)     off it.

Class suprema of ``w`` are therefore attained at the restricted and
unrestricted maximum likelihood estimates.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .core import ClassId, MixedState
from .coupler import CouplerModel
from .distributions import (
    LOG_2PI,
    AtomMixturePrior,
    InvGammaParams,
    NormalParams,
    invgamma_quantile_upper,
    normal_logpdf,
    normal_quantile,
)
from .replay import ContractError, DeviateRecipe, DeviateRecord

log = logging.getLogger(__name__)


class DegenerateDataError(ValueError):
    """Data give a zero variance estimate, so the likelihood ratio is unbounded."""


def _group_loglik(n: int, ybar: float, ss: float, mu, v):
    """Normal log-likelihood of a group from its size, mean and centered sum of squares."""
    d = ybar - mu
    return -0.5 * n * (LOG_2PI + np.log(v)) - (ss + n * d * d) / (2.0 * v)


def _summaries(y: np.ndarray) -> tuple[int, float, float]:
    ybar = float(np.mean(y))
    return y.size, ybar, float(np.sum((y - ybar) ** 2))


# ---------------------------------------------------------------------------
# Single mean


class SingleMeanModel(CouplerModel):
    """``y_j = mu + e_j``, ``e_j ~ N(0, v)``, spike-and-slab prior on ``mu``.

    ``variance`` is either a known positive float or an :class:`InvGammaParams`
    prior.  States are ``(mu,)`` for known variance and ``(mu, v)`` otherwise.
    """

    def __init__(self, data: Sequence[float], prior: AtomMixturePrior,
                 variance: Union[InvGammaParams, float]):
        y = np.asarray(data, dtype=float)
        if y.ndim != 1 or y.size < 1:
            raise ValueError("data must be a nonempty 1-d sequence")
        self.data = y
        self.prior = prior
        self.theta0 = float(prior.atom_location)
        self.n, self.ybar, self.ss = _summaries(y)
        self.mu_hat = self.ybar
        self.v_hat = self.ss / self.n
        self.v0_hat = float(np.mean((y - self.theta0) ** 2))

        if isinstance(variance, InvGammaParams):
            self.variance_prior: InvGammaParams | None = variance
            self.known_variance: float | None = None
            if self.v_hat <= 0.0 or self.v0_hat <= 0.0:
                raise DegenerateDataError(
                    "sample variance is zero; the unknown-variance model needs spread in the data"
                )
        else:
            v = float(variance)
            if not v > 0:
                raise ValueError("known variance must be positive")
            self.variance_prior = None
            self.known_variance = v
        self.atom_is_singleton = self.known_variance is not None
        self._log_p = math.log(prior.atom_weight)
        self._log_q = math.log1p(-prior.atom_weight)

    def __repr__(self) -> str:
        var = self.variance_prior if self.known_variance is None else self.known_variance
        return f"SingleMeanModel(n={self.n}, prior={self.prior}, variance={var})"

    # likelihood ------------------------------------------------------------
    def _loglik(self, mu, v):
        return _group_loglik(self.n, self.ybar, self.ss, mu, v)

    def _split(self, state: MixedState):
        if self.known_variance is None:
            mu, v = state.values
        else:
            (mu,), v = state.values, self.known_variance
        if not v > 0:
            raise ValueError("variance must be positive")
        return mu, v

    def log_likelihood(self, state: MixedState) -> float:
        """Sum of normal log densities of the data at the state's ``(mu, v)``."""
        mu, v = self._split(state)
        return float(np.sum(normal_logpdf(self.data, NormalParams(mu, v))))

    # coupler contract --------------------------------------------------------
    def recipe(self) -> DeviateRecipe:
        slab, vprior = self.prior.slab, self.variance_prior
        if vprior is None:
            return DeviateRecipe(1, lambda u: normal_quantile(u, slab), name="N")

        def transform(u):
            return np.column_stack([normal_quantile(u[:, 0], slab),
                                    invgamma_quantile_upper(u[:, 1], vprior)])

        return DeviateRecipe(2, transform, name="N,S")

    def candidate_for_class(self, cls: ClassId, record: DeviateRecord) -> MixedState:
        dev = record.candidate_deviates
        if len(dev) != self.deviates_per_step:
            raise ContractError(f"expected {self.deviates_per_step} deviates, got {len(dev)}")
        if self.known_variance is None:
            n_dev, s_dev = dev
            if cls == ClassId.I:
                return MixedState(False, (n_dev, s_dev))
            return MixedState(True, (self.theta0, s_dev))
        if cls == ClassId.I:
            return MixedState(False, (dev[0],))
        return MixedState(True, (self.theta0,))

    def _weights(self, atom: bool, mu: np.ndarray, v: np.ndarray) -> np.ndarray:
        return self._loglik(mu, v) + (self._log_p if atom else self._log_q)

    def log_weight(self, state: MixedState) -> float:
        mu, v = self._split(state)
        return float(self._weights(state.atom, np.array([mu], dtype=float), np.array([v], dtype=float))[0])

    def candidate_log_weights(self, deviates: np.ndarray) -> np.ndarray:
        deviates = np.asarray(deviates, dtype=float)
        m = deviates.shape[0]
        if self.known_variance is None:
            v = deviates[:, 1]
        else:
            v = np.full(m, self.known_variance)
        return np.vstack([
            self._weights(False, deviates[:, 0], v),
            self._weights(True, np.full(m, self.theta0), v),
        ])

    def mle(self, cls: ClassId) -> MixedState:
        """Class maximizer of the likelihood: restricted for I, unrestricted for II."""
        if self.known_variance is None:
            if cls == ClassId.I:
                return MixedState(True, (self.theta0, self.v0_hat))
            return MixedState(False, (self.mu_hat, self.v_hat))
        if cls == ClassId.I:
            return MixedState(True, (self.theta0,))
        return MixedState(False, (self.mu_hat,))

    def max_log_weight(self, cls: ClassId) -> float:
        return self.log_weight(self.mle(cls))


# ---------------------------------------------------------------------------
# Two samples


@dataclass(frozen=True)
class KnownVariances:
    v1: float
    v2: float

    def __post_init__(self):
        if not (self.v1 > 0 and self.v2 > 0):
            raise ValueError("known variances must be positive")


@dataclass(frozen=True)
class CommonVariance:
    prior: InvGammaParams


@dataclass(frozen=True)
class SeparateVariances:
    prior1: InvGammaParams
    prior2: InvGammaParams


VarianceCase = Union[KnownVariances, CommonVariance, SeparateVariances]


@dataclass(frozen=True)
class TwoSampleMLE:
    """Closed-form estimates: restricted ``(mu0, v0)`` under ``mu1 == mu2``, unrestricted ``(mu, v)``.

    ``v0``/``v`` are None for known variances, a float for a common
    variance and a pair for separate variances.
    """

    mu0: tuple[float, float]
    v0: object
    mu: tuple[float, float]
    v: object


class TwoSampleModel(CouplerModel):
    """Two normal samples with a prior mass on ``mu1 == mu2``.

    Prior on the means: ``p * delta(mu1 - mu2) * f1(mu1) + (1 - p) * f2(mu1, mu2)``
    with ``f1 = equal_slab`` and ``f2`` two independent copies of
    ``diff_slab``.  State layout: ``(mu1, mu2)``, ``(mu1, mu2, v)`` or
    ``(mu1, mu2, v1, v2)`` for the three variance cases.

    Deviates per step: the common-mean normal, the two separate-mean
    normals, then one inverse-gamma variate per unknown variance.
    """

    def __init__(self, y1: Sequence[float], y2: Sequence[float], atom_weight: float,
                 equal_slab: NormalParams, diff_slab: NormalParams, variance: VarianceCase):
        self.y1 = np.asarray(y1, dtype=float)
        self.y2 = np.asarray(y2, dtype=float)
        if self.y1.ndim != 1 or self.y2.ndim != 1 or self.y1.size < 1 or self.y2.size < 1:
            raise ValueError("each group needs at least one observation")
        if not 0.0 < atom_weight < 1.0:
            raise ValueError("atom weight must lie in (0, 1)")
        self.p = float(atom_weight)
        self.equal_slab = equal_slab
        self.diff_slab = diff_slab
        self.variance = variance
        self.n1, self.ybar1, self.ss1 = _summaries(self.y1)
        self.n2, self.ybar2, self.ss2 = _summaries(self.y2)
        self._log_p = math.log(self.p)
        self._log_q = math.log1p(-self.p)
        self.printed_mle = mle_two_sample(self)
        self._check_degenerate()
        self._restricted = self._restricted_maximizer()
        self._unrestricted = self._unrestricted_maximizer()

    def __repr__(self) -> str:
        return f"TwoSampleModel(n1={self.n1}, n2={self.n2}, p={self.p}, variance={self.variance})"

    @property
    def n_variances(self) -> int:
        return {KnownVariances: 0, CommonVariance: 1, SeparateVariances: 2}[type(self.variance)]

    def _check_degenerate(self):
        mle = self.printed_mle
        if isinstance(self.variance, CommonVariance) and not mle.v > 0:
            raise DegenerateDataError("pooled within-group variance is zero")
        if isinstance(self.variance, SeparateVariances) and not min(mle.v) > 0:
            raise DegenerateDataError("a group has zero sample variance")

    # likelihood ------------------------------------------------------------
    def _variances(self, values):
        """``(v1, v2)`` arrays/scalars from the trailing coordinates."""
        if isinstance(self.variance, KnownVariances):
            return self.variance.v1, self.variance.v2
        if isinstance(self.variance, CommonVariance):
            return values[2], values[2]
        return values[2], values[3]

    def _loglik(self, mu1, mu2, v1, v2):
        return (_group_loglik(self.n1, self.ybar1, self.ss1, mu1, v1)
                + _group_loglik(self.n2, self.ybar2, self.ss2, mu2, v2))

    def log_likelihood(self, state: MixedState) -> float:
        mu1, mu2 = state.values[:2]
        v1, v2 = self._variances(state.values)
        if not (v1 > 0 and v2 > 0):
            raise ValueError("variances must be positive")
        return float(np.sum(normal_logpdf(self.y1, NormalParams(mu1, v1)))
                     + np.sum(normal_logpdf(self.y2, NormalParams(mu2, v2))))

    # maximizers --------------------------------------------------------------
    def _unrestricted_maximizer(self) -> tuple[float, ...]:
        mle = self.printed_mle
        if isinstance(self.variance, KnownVariances):
            return mle.mu
        if isinstance(self.variance, CommonVariance):
            return (*mle.mu, mle.v)
        return (*mle.mu, *mle.v)

    def _restricted_maximizer(self) -> tuple[float, ...]:
        mle = self.printed_mle
        n1, n2 = self.n1, self.n2
        if isinstance(self.variance, CommonVariance):
            return (*mle.mu0, mle.v0)
        if isinstance(self.variance, KnownVariances):
            a, b = n1 / self.variance.v1, n2 / self.variance.v2
            m = (a * self.ybar1 + b * self.ybar2) / (a + b)
            exact = (m, m)
            printed = mle.mu0
        else:
            m = _common_mean_separate_variances(n1, self.ybar1, self.ss1 / n1,
                                                n2, self.ybar2, self.ss2 / n2)
            exact = (m, m, self.ss1 / n1 + (self.ybar1 - m) ** 2,
                     self.ss2 / n2 + (self.ybar2 - m) ** 2)
            printed = (*mle.mu0, *mle.v0)
        ll_exact = self._loglik_tuple(exact)
        ll_printed = self._loglik_tuple(printed)
        if ll_exact > ll_printed:
            log.info("closed-form restricted estimate %s is not the likelihood maximizer; "
                     "using %s (log-likelihood gap %.3g)", printed, exact, ll_exact - ll_printed)
            return exact
        return printed

    def _loglik_tuple(self, values) -> float:
        v1, v2 = self._variances(values)
        return float(self._loglik(values[0], values[1], v1, v2))

    def mle(self, cls: ClassId) -> MixedState:
        if cls == ClassId.I:
            return MixedState(True, tuple(float(x) for x in self._restricted))
        return MixedState(False, tuple(float(x) for x in self._unrestricted))

    def max_log_weight(self, cls: ClassId) -> float:
        return self.log_weight(self.mle(cls))

    # coupler contract --------------------------------------------------------
    def recipe(self) -> DeviateRecipe:
        eq, diff = self.equal_slab, self.diff_slab
        if isinstance(self.variance, CommonVariance):
            vpriors = [self.variance.prior]
        elif isinstance(self.variance, SeparateVariances):
            vpriors = [self.variance.prior1, self.variance.prior2]
        else:
            vpriors = []

        def transform(u):
            cols = [normal_quantile(u[:, 0], eq), normal_quantile(u[:, 1], diff),
                    normal_quantile(u[:, 2], diff)]
            cols += [invgamma_quantile_upper(u[:, 3 + i], vp) for i, vp in enumerate(vpriors)]
            return np.column_stack(cols)

        return DeviateRecipe(3 + len(vpriors), transform, name="Nc,N1,N2" + ",S" * len(vpriors))

    def candidate_for_class(self, cls: ClassId, record: DeviateRecord) -> MixedState:
        dev = record.candidate_deviates
        if len(dev) != 3 + self.n_variances:
            raise ContractError(f"expected {3 + self.n_variances} deviates, got {len(dev)}")
        tail = tuple(dev[3:])
        if cls == ClassId.I:
            return MixedState(False, (dev[1], dev[2], *tail))
        return MixedState(True, (dev[0], dev[0], *tail))

    def _weights(self, atom: bool, mu1, mu2, v1, v2) -> np.ndarray:
        return self._loglik(mu1, mu2, v1, v2) + (self._log_p if atom else self._log_q)

    def _variance_arrays(self, cols: list[np.ndarray], m: int):
        if isinstance(self.variance, KnownVariances):
            return np.full(m, self.variance.v1), np.full(m, self.variance.v2)
        if isinstance(self.variance, CommonVariance):
            return cols[0], cols[0]
        return cols[0], cols[1]

    def log_weight(self, state: MixedState) -> float:
        vals = [np.array([x], dtype=float) for x in state.values]
        v1, v2 = self._variance_arrays(vals[2:], 1)
        if not (v1[0] > 0 and v2[0] > 0):
            raise ValueError("variances must be positive")
        return float(self._weights(state.atom, vals[0], vals[1], v1, v2)[0])

    def candidate_log_weights(self, deviates: np.ndarray) -> np.ndarray:
        deviates = np.asarray(deviates, dtype=float)
        m = deviates.shape[0]
        v1, v2 = self._variance_arrays([deviates[:, 3 + i] for i in range(self.n_variances)], m)
        return np.vstack([
            self._weights(False, deviates[:, 1], deviates[:, 2], v1, v2),
            self._weights(True, deviates[:, 0], deviates[:, 0], v1, v2),
        ])


def mle_two_sample(model: TwoSampleModel) -> TwoSampleMLE:
    """Pooled-mean restricted and per-group unrestricted estimates in closed form."""
    y1, y2 = model.y1, model.y2
    n1, n2 = y1.size, y2.size
    pooled = float((np.sum(y1) + np.sum(y2)) / (n1 + n2))
    m1, m2 = float(np.mean(y1)), float(np.mean(y2))
    mu0, mu = (pooled, pooled), (m1, m2)
    if isinstance(model.variance, KnownVariances):
        return TwoSampleMLE(mu0, None, mu, None)
    if isinstance(model.variance, CommonVariance):
        v0 = float((np.sum((y1 - pooled) ** 2) + np.sum((y2 - pooled) ** 2)) / (n1 + n2))
        v = float((np.sum((y1 - m1) ** 2) + np.sum((y2 - m2) ** 2)) / (n1 + n2))
        return TwoSampleMLE(mu0, v0, mu, v)
    v0 = (float(np.mean((y1 - pooled) ** 2)), float(np.mean((y2 - pooled) ** 2)))
    v = (float(np.mean((y1 - m1) ** 2)), float(np.mean((y2 - m2) ** 2)))
    return TwoSampleMLE(mu0, v0, mu, v)


def _common_mean_separate_variances(n1, a, s1, n2, b, s2) -> float:
    """Maximizer over ``m`` of ``-n1/2 log(s1 + (a-m)^2) - n2/2 log(s2 + (b-m)^2)``.

    The stationarity condition is a cubic; the maximum lies between the two
    group means.
    """
    P = np.polynomial.Polynomial
    m = P([0.0, 1.0])
    cubic = n1 * (a - m) * ((m - b) ** 2 + s2) + n2 * (b - m) * ((m - a) ** 2 + s1)
    lo, hi = min(a, b), max(a, b)
    candidates = [lo, hi]
    for r in cubic.roots():
        if abs(r.imag) < 1e-9 * max(1.0, abs(r.real)) and lo <= r.real <= hi:
            candidates.append(float(r.real))

    def profile(x):
        return -0.5 * n1 * math.log(s1 + (a - x) ** 2) - 0.5 * n2 * math.log(s2 + (b - x) ** 2)

    return max(candidates, key=profile)
