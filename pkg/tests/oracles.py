"""Independent ground truth for posterior atom probabilities.

Nothing here touches the sampler: closed-form conjugate marginals and
adaptive quadrature (scipy.integrate.quad) of the marginal likelihoods.
Integrands are shifted by the log-likelihood at the MLE so they stay O(1).
"""

import math

import numpy as np
from scipy import integrate, special, stats


def _ig_logpdf(v, shape, rate):
    return shape * math.log(rate) - special.gammaln(shape) - (shape + 1) * math.log(v) - rate / v


def _norm_logpdf(x, mean, var):
    return -0.5 * math.log(2 * math.pi * var) - (x - mean) ** 2 / (2 * var)


def _loglik(y, mu, v):
    y = np.asarray(y, float)
    return float(-0.5 * y.size * math.log(2 * math.pi * v) - np.sum((y - mu) ** 2) / (2 * v))


def posterior_atom_prob(p, log_m0, log_m1):
    return 1.0 / (1.0 + (1 - p) / p * math.exp(log_m1 - log_m0))


def atom_prob_known_variance(y, p, slab_mean, slab_var, v, theta0=0.0):
    """Closed form: under the slab, ``y ~ N(slab_mean 1, v I + slab_var 1 1^T)``."""
    y = np.asarray(y, float)
    n = y.size
    log_m0 = float(np.sum(stats.norm.logpdf(y, theta0, math.sqrt(v))))
    cov = v * np.eye(n) + slab_var * np.ones((n, n))
    log_m1 = float(stats.multivariate_normal.logpdf(y, np.full(n, slab_mean), cov))
    return posterior_atom_prob(p, log_m0, log_m1)


def atom_prob_unknown_variance(y, p, slab_mean, slab_var, shape, rate, theta0=0.0):
    """``m0 = int f(y|theta0,v) IG(v) dv`` and ``m1`` as a double integral over (mu, v)."""
    y = np.asarray(y, float)
    mu_hat = float(y.mean())
    v_hat = float(np.mean((y - mu_hat) ** 2))
    shift = _loglik(y, mu_hat, v_hat)
    v0 = float(np.mean((y - theta0) ** 2))

    def f0(v):
        return math.exp(_loglik(y, theta0, v) - shift + _ig_logpdf(v, shape, rate))

    m0 = _quad_positive(f0, v0)

    def f1(mu, v):
        return math.exp(_loglik(y, mu, v) - shift + _ig_logpdf(v, shape, rate)
                        + _norm_logpdf(mu, slab_mean, slab_var))

    def inner(v):
        sd = math.sqrt(v / y.size)
        lo, hi = mu_hat - 40 * sd, mu_hat + 40 * sd
        return integrate.quad(f1, lo, hi, args=(v,), points=[mu_hat], epsabs=0, epsrel=1e-11, limit=200)[0]

    m1 = _quad_positive(inner, v_hat)
    return posterior_atom_prob(p, math.log(m0), math.log(m1))


def _quad_positive(f, scale):
    """Integral over (0, inf) split at multiples of a characteristic scale."""
    cuts = [0.0, scale / 4, scale, 4 * scale, 64 * scale]
    total = 0.0
    for a, b in zip(cuts[:-1], cuts[1:]):
        total += integrate.quad(f, a, b, epsabs=0, epsrel=1e-11, limit=200)[0]
    total += integrate.quad(f, cuts[-1], np.inf, epsabs=0, epsrel=1e-11, limit=200)[0]
    return total


def atom_prob_two_sample_common_variance(y1, y2, p, equal_var, diff_var, shape, rate):
    """Two samples, common unknown variance, prior ``p delta f1 + (1-p) f2``.

    ``m0 = int int L(m, m, v) N(m; 0, equal_var) IG(v) dm dv``;
    ``m1 = int IG(v) [int L1 N(mu1; 0, diff_var)] [int L2 N(mu2; 0, diff_var)] dv``.
    """
    y1, y2 = np.asarray(y1, float), np.asarray(y2, float)
    yy = np.concatenate([y1, y2])
    n = yy.size
    pooled = float(yy.mean())
    v_within = float((np.sum((y1 - y1.mean()) ** 2) + np.sum((y2 - y2.mean()) ** 2)) / n)
    shift = _loglik(y1, y1.mean(), v_within) + _loglik(y2, y2.mean(), v_within)

    def inner_mean(y, mean_center, var_prior, v, offset):
        sd = math.sqrt(v / y.size)
        lo, hi = mean_center - 40 * sd, mean_center + 40 * sd

        def g(m):
            return math.exp(_loglik(y, m, v) - offset + _norm_logpdf(m, 0.0, var_prior))

        return integrate.quad(g, lo, hi, points=[mean_center], epsabs=0, epsrel=1e-11, limit=200)[0]

    def f0(v):
        return math.exp(_ig_logpdf(v, shape, rate)) * inner_mean(yy, pooled, equal_var, v, shift)

    half = shift / 2

    def f1(v):
        a = inner_mean(y1, float(y1.mean()), diff_var, v, half)
        b = inner_mean(y2, float(y2.mean()), diff_var, v, half)
        return math.exp(_ig_logpdf(v, shape, rate)) * a * b

    m0 = _quad_positive(f0, v_within)
    m1 = _quad_positive(f1, v_within)
    return posterior_atom_prob(p, math.log(m0), math.log(m1))
