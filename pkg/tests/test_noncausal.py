"""Greedy information criteria and FCBF."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from unifsel.bayesnet import screened_networks, true_pc
from unifsel.infotheory import entropy
from unifsel.noncausal import KINDS, CriterionSpec, ScoreCache, fcbf, greedy_select, score_candidate
from helpers import dataset, exact_scale_dataset, net


def random_data(seed, n_feat=6, m=300):
    rng = np.random.default_rng(seed)
    c = rng.integers(0, 2, m)
    cols = []
    for j in range(n_feat):
        noise = rng.random(m) < 0.3 + 0.1 * (j % 3)
        cols.append(np.where(noise, rng.integers(0, 3, m), c + (j % 2)))
    return dataset(cols + [c], [4] * n_feat + [2])


def naive_terms(d):
    """Information terms straight from joint entropies (no shared code path with the cache)."""
    H = lambda *v: entropy(d, list(v))
    c = d.class_index

    def mi(a, b):
        return H(a) + H(b) - H(a, b)

    def cmi(a, b, z):
        return H(a, z) + H(b, z) - H(a, b, z) - H(z)

    return c, mi, cmi


def naive_score(d, x, s, kind, beta=None, gamma=None):
    c, mi, cmi = naive_terms(d)
    rel = mi(x, c)
    if not s:
        return rel
    red = [mi(x, f) for f in s]
    cred = [cmi(x, f, c) for f in s]
    if kind == "MIM":
        return rel
    if kind == "MIFS":
        out = rel - beta * sum(red)
        return out + (gamma * sum(cred) if gamma is not None else 0.0)
    if kind == "MRMR":
        return rel - sum(red) / len(s)
    if kind == "JMI":
        return rel - (sum(red) - sum(cred)) / len(s)
    if kind == "CIFE":
        return rel - sum(red) + sum(cred)
    if kind == "CMIM":
        return rel - max(r - q for r, q in zip(red, cred))
    inner = sum(mi(x, fi) + sum(cmi(x, fj, fi) for fj in s if fj != fi) for fi in s)
    return rel + sum(cred) - inner / len(s)


@pytest.mark.parametrize("kind", KINDS)
def test_empty_selection_scores_relevance(kind):
    d = random_data(0)
    c, mi, _ = naive_terms(d)
    for x in d.feature_indices:
        assert score_candidate(d, x, [], CriterionSpec(kind)) == pytest.approx(mi(x, c), abs=1e-12)


@pytest.mark.parametrize("kind", KINDS)
@settings(max_examples=10, deadline=None)
@given(seed=st.integers(0, 10 ** 6))
def test_scores_match_naive_evaluator(kind, seed):
    d = random_data(seed)
    spec = CriterionSpec(kind)
    cache = ScoreCache(d)
    for s in ([1], [1, 4], [0, 2, 5]):
        for x in d.feature_indices:
            if x in s:
                continue
            got = score_candidate(d, x, s, spec, cache)
            assert got == pytest.approx(naive_score(d, x, s, kind, spec.beta), abs=1e-10)


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 10 ** 6))
def test_reduction_lattice(seed):
    d = random_data(seed)
    cache = ScoreCache(d)
    for s in ([2], [2, 3], [0, 3, 5]):
        k = len(s)
        for x in (1, 4):
            mim = score_candidate(d, x, s, CriterionSpec("MIM"), cache)
            assert score_candidate(d, x, s, CriterionSpec("MIFS", beta=0.0), cache) == pytest.approx(mim, abs=1e-12)
            rel = score_candidate(d, x, [], CriterionSpec("MIM"), cache)
            red = sum(cache.red(x, f) for f in s)
            assert score_candidate(d, x, s, CriterionSpec("MIFS", beta=1.0), cache) == pytest.approx(rel - red, abs=1e-12)
            gen = CriterionSpec("MIFS", beta=1 / k, gamma_weight=1 / k)
            assert score_candidate(d, x, s, gen, cache) == pytest.approx(
                score_candidate(d, x, s, CriterionSpec("JMI"), cache), abs=1e-12)
            cife = CriterionSpec("MIFS", beta=1.0, gamma_weight=1.0)
            assert score_candidate(d, x, s, cife, cache) == pytest.approx(
                score_candidate(d, x, s, CriterionSpec("CIFE"), cache), abs=1e-12)


def test_criterion_spec_validation():
    assert CriterionSpec("mifs").beta == 1.0
    assert CriterionSpec("relaxmrmr").kind == "RELAX_MRMR"
    with pytest.raises(ValueError):
        CriterionSpec("MRMR", beta=0.5)
    with pytest.raises(ValueError):
        CriterionSpec("MIFS", beta=1.5)
    with pytest.raises(ValueError):
        CriterionSpec("DISR")


# ------------------------------------------------------------ greedy engine

@pytest.mark.parametrize("kind", KINDS)
def test_psi_one_picks_max_relevance(kind):
    d = random_data(5)
    cache = ScoreCache(d)
    best = max(d.feature_indices, key=lambda x: (cache.rel(x), -x))
    assert greedy_select(d, CriterionSpec(kind), 1).selected == [best]


def test_psi_range_is_checked():
    d = random_data(1)
    for psi in (0, len(d.feature_indices) + 1):
        with pytest.raises(ValueError, match="psi"):
            greedy_select(d, CriterionSpec("MIM"), psi)


def test_ties_go_to_lowest_index():
    c = np.array([0, 1] * 50)
    d = dataset([c, c, c, c])
    res = greedy_select(d, CriterionSpec("MIM"), 3)
    assert res.selected == [0, 1, 2]


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 10 ** 6), psi=st.integers(1, 5))
def test_mim_prefix_monotone(seed, psi):
    d = random_data(seed)
    a = greedy_select(d, CriterionSpec("MIM"), psi).selected
    b = greedy_select(d, CriterionSpec("MIM"), psi + 1).selected
    assert b[:psi] == a


@pytest.mark.parametrize("kind", KINDS)
def test_selection_result_invariants_and_determinism(kind):
    d = random_data(7)
    a = greedy_select(d, CriterionSpec(kind), 4)
    b = greedy_select(d, CriterionSpec(kind), 4)
    assert a.selected == b.selected and a.step_scores == b.step_scores
    assert len(set(a.selected)) == len(a.selected) == len(a.step_scores) == 4
    assert d.class_index not in a.selected


def test_cache_reuses_terms():
    d = random_data(2)
    cache = ScoreCache(d)
    greedy_select(d, CriterionSpec("RELAX_MRMR"), 4, cache)
    n = cache.evaluations
    greedy_select(d, CriterionSpec("RELAX_MRMR"), 4, cache)
    assert cache.evaluations == n
    # pair terms are stored once per unordered (x, fj) and conditioning index
    assert all(k[0] < k[1] for k in cache._pair)


@pytest.mark.parametrize("kind", KINDS)
def test_first_pick_lies_in_pc_on_screened_nets(kind):
    for _, bn, t in screened_networks(10, seed=500):
        d, _ = exact_scale_dataset(bn, t)
        first = greedy_select(d, CriterionSpec(kind), 1).selected[0]
        assert first in true_pc(bn, t)


# ------------------------------------------------------------ FCBF

def test_fcbf_independent_features_selected_none():
    rng = np.random.default_rng(0)
    m = 2000
    d = dataset([rng.integers(0, 2, m), rng.integers(0, 3, m), rng.integers(0, 2, m)])
    assert fcbf(d, alpha=1e-3).selected == []


def test_fcbf_removes_later_duplicate():
    rng = np.random.default_rng(1)
    c = rng.integers(0, 2, 500)
    x = np.where(rng.random(500) < 0.8, c, 1 - c)
    d = dataset([x, x, c])
    res = fcbf(d, alpha=0.05)
    assert res.selected == [0]


def test_fcbf_chain_keeps_the_direct_neighbour():
    # C -> A -> B with C as class: I(A;B) > I(B;C)
    bn = net(("C", [], [[0.5, 0.5]]), ("A", ["C"], [[0.85, 0.15], [0.2, 0.8]]),
             ("B", ["A"], [[0.8, 0.2], [0.25, 0.75]]))
    d, _ = exact_scale_dataset(bn, 0, scale=10 ** 5)
    assert fcbf(d, alpha=0.05).selected == [1]
    assert fcbf(d, delta=1e-4).selected == [1]


def test_fcbf_needs_exactly_one_threshold():
    d = random_data(0)
    with pytest.raises(ValueError):
        fcbf(d)
    with pytest.raises(ValueError):
        fcbf(d, alpha=0.05, delta=0.1)


def test_fcbf_sorted_by_relevance():
    d = random_data(3, m=2000)
    res = fcbf(d, delta=0.0)
    assert res.step_scores == sorted(res.step_scores, reverse=True)
    assert res.psi is None
