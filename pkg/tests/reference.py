"""Test-side reference simulations, independent of the jump-chain engine."""

import numpy as np

from classcoupler.core import ClassId, MixedState, accept_many
from classcoupler.models import SingleMeanModel, TwoSampleModel


def forward_many(model, store, starts, horizon):
    """Time-0 states of plain MH paths started from each of ``starts`` at ``-horizon``.

    All paths share the stored deviates; they are advanced together one
    step at a time through the model's scalar interface.
    """
    states = list(starts)
    cls = np.array([int(model.class_of(s)) for s in states])
    w = np.array([model.log_weight(s) for s in states])
    for j in range(horizon, 0, -1):
        rec = store.get_or_generate(j)
        cands = [model.candidate_for_class(ClassId(k), rec) for k in (0, 1)]
        wc = np.array([model.log_weight(c) for c in cands])
        moved = accept_many(wc[cls] - w, np.full(len(states), rec.accept_u))
        for i in np.flatnonzero(moved):
            states[i] = cands[cls[i]]
        w = np.where(moved, wc[cls], w)
        cls = np.where(moved, 1 - cls, cls)
    return states


def random_states(model, n, rng):
    """States of both classes, spread well beyond the posterior bulk."""
    out = []
    for i in range(n):
        atom = bool(i % 2)
        if isinstance(model, SingleMeanModel):
            mu = model.theta0 if atom else float(model.mu_hat + rng.normal(0, 3))
            if model.known_variance is None:
                out.append(MixedState(atom, (mu, float(model.v_hat * np.exp(rng.normal(0, 1.5))))))
            else:
                out.append(MixedState(atom, (mu,)))
        elif isinstance(model, TwoSampleModel):
            m1, m2 = (float(x) for x in rng.normal(0, 3, 2))
            if atom:
                m2 = m1
            vs = tuple(float(np.exp(rng.normal(0, 1.5))) for _ in range(model.n_variances))
            out.append(MixedState(atom, (m1, m2, *vs)))
        else:
            raise TypeError(type(model))
    return out
