from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from classcoupler.core import MixedState
from classcoupler.estimator import atom_probability, bct_summary, histogram, summarize

from conftest import CONJUGATE_TRUTH


def draws_with(n_atom, n_total):
    return [MixedState(i < n_atom, (0.0 if i < n_atom else 1.0,)) for i in range(n_total)]


def test_wald_interval_example():
    p, lo, hi = atom_probability(draws_with(86_907, 100_000))
    assert p == 0.86907
    assert lo == pytest.approx(0.86698, abs=5e-6)
    assert hi == pytest.approx(0.87116, abs=5e-6)


def test_half_width_closed_form():
    p, lo, hi = atom_probability(draws_with(200, 400))
    assert (hi - lo) / 2 == pytest.approx(0.049, rel=1e-12)


def test_all_at_atom():
    assert atom_probability(draws_with(10, 10)) == (1.0, 1.0, 1.0)


def test_empty_inputs():
    with pytest.raises(ValueError):
        atom_probability([])
    with pytest.raises(ValueError):
        bct_summary([])
    with pytest.raises(ValueError):
        histogram([], 3)
    with pytest.raises(ValueError):
        histogram([1.0], 0)


def test_bct_summary():
    assert bct_summary([6, 8223]) == (4114.5, 6, 8223)
    assert bct_summary([17]) == (17, 17, 17)


def test_bct_summary_exact():
    rng = np.random.default_rng(0)
    t = rng.integers(1, 10_000, size=100_001).tolist()
    mean, lo, hi = bct_summary(t)
    assert Fraction(sum(t), len(t)) == Fraction(mean).limit_denominator(len(t))
    assert (lo, hi) == (sorted(t)[0], sorted(t)[-1])


def test_histogram_cases():
    h = histogram([2.5] * 100, 10)
    assert max(h.counts) == 100 and h.total == 100
    h = histogram(np.arange(100) / 100, 10)
    assert h.counts == (10,) * 10
    x = np.random.default_rng(1).normal(size=12345)
    assert histogram(x, 37).total == 12345
    assert len(histogram(x, 37).edges) == 38


def test_summary_invariants():
    rng = np.random.default_rng(2)
    draws = [MixedState(bool(a), (float(m),)) for a, m in zip(rng.random(500) < 0.3, rng.normal(size=500))]
    bcts = rng.integers(3, 2000, size=500).tolist()
    s = summarize(draws, bcts, bins=20)
    assert s.ci_low <= s.atom_prob <= s.ci_high
    assert s.bct_min <= s.bct_mean <= s.bct_max
    assert all(h.total == 500 for h in s.histograms.values())
    d = s.to_dict()
    assert d["n_draws"] == 500 and d["ci"] == [s.ci_low, s.ci_high]


def test_ci_coverage(conjugate_run):
    atoms = np.array([d.atom for d in conjugate_run.draws])
    reps = atoms.reshape(500, 200)
    covered = 0
    for row in reps:
        _, lo, hi = atom_probability([MixedState(bool(a), ()) for a in row])
        covered += lo <= CONJUGATE_TRUTH <= hi
    assert 0.93 <= covered / 500 <= 0.97


@given(st.lists(st.booleans(), min_size=1, max_size=300))
def test_interval_brackets_estimate(flags):
    p, lo, hi = atom_probability([MixedState(f, ()) for f in flags])
    assert lo <= p <= hi
    assert p == sum(flags) / len(flags)


@given(st.lists(st.floats(-1e6, 1e6), min_size=1, max_size=200), st.integers(1, 40))
def test_histogram_conserves_counts(values, bins):
    assert histogram(values, bins).total == len(values)
