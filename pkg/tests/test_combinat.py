from itertools import combinations, permutations

import pytest
from hypothesis import given, strategies as st
from sympy.combinatorics import Permutation

from restricted_powers.combinat import (SetupConfig, compositions, hook_ssyt, perm_sign,
                                        restricted_exponents, sign_in, sign_shuffle, wedge_sign)
from restricted_powers.complexes import build_L_complex


@given(st.permutations(list(range(6))))
def test_perm_sign_matches_sympy(p):
    assert perm_sign(p) == Permutation(p).signature()


def test_sign_in():
    assert sign_in(1, (1, 3)) == 1
    assert sign_in(3, (1, 3)) == -1
    assert sign_in(5, (1, 3, 5)) == 1


def test_sign_shuffle_examples():
    assert sign_shuffle((2,), (1, 2, 3)) == -1
    assert sign_shuffle((2, 3), (1, 2, 3)) == 1
    assert sign_shuffle((1, 2), (1, 2)) == 1
    assert sign_shuffle((), (1, 2)) == 1


def _subsets(n):
    for k in range(n + 1):
        yield from combinations(range(1, n + 1), k)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_two_path_sign(n):
    # moving r into tau costs sgn(r in tau), up to the Koszul sign (-1)^|tau'|
    for sigma in _subsets(n):
        for j in range(len(sigma)):
            for tp in combinations(sigma, j):
                for r in sigma:
                    if r in tp:
                        continue
                    tau = tuple(sorted(tp + (r,)))
                    rest = tuple(s for s in sigma if s not in tp)
                    lhs = sign_in(r, tau) * sign_shuffle(tau, sigma)
                    rhs = sign_in(r, rest) * sign_shuffle(tp, sigma)
                    assert lhs == (-1) ** len(tp) * rhs


def test_wedge_sign_associative():
    n = 4
    for a in _subsets(n):
        for b in _subsets(n):
            for c in _subsets(n):
                s1, ab = wedge_sign(a, b)
                s2, bc = wedge_sign(b, c)
                left = s1 * wedge_sign(ab, c)[0] if s1 else 0
                right = s2 * wedge_sign(a, bc)[0] if s2 else 0
                assert left == right


def test_wedge_sign_graded_commutative():
    for a, b in permutations(list(_subsets(4)), 2):
        sa, _ = wedge_sign(a, b)
        sb, _ = wedge_sign(b, a)
        assert sa == (-1) ** (len(a) * len(b)) * sb


def test_restricted_exponents_figure():
    cfg = SetupConfig(3, 2, (2, 1, 1))
    assert set(restricted_exponents(cfg)) == {(2, 0, 0), (1, 1, 0), (1, 0, 1), (0, 1, 1)}


def test_compositions_descending_and_capped():
    got = list(compositions(2, 2, (1, 2)))
    assert got == [(1, 1), (0, 2)]


@pytest.mark.parametrize("n,d,w", [(3, 2, (2, 2, 2)), (3, 3, (3, 1, 1)), (3, 2, (1, 1, 1)),
                                   (4, 2, (2, 1, 1, 1)), (2, 3, (3, 3))])
def test_hook_tableaux_count_ranks(n, d, w):
    cfg = SetupConfig(n, d, w)
    ranks = build_L_complex(cfg).ranks()
    for k in range(1, len(ranks)):
        tabs = hook_ssyt(k - 1, d, cfg)
        assert len(tabs) == ranks[k]
        assert all(t.is_semistandard() for t in tabs)


@pytest.mark.parametrize("kw", [dict(n=0, d=1, w=()), dict(n=2, d=1, w=(1,)),
                                dict(n=2, d=3, w=(1, 1)), dict(n=2, d=1, w=(1, 1), e=(0, 1)),
                                dict(n=2, d=1, w=(-1, 2))])
def test_setup_config_rejects(kw):
    with pytest.raises(ValueError):
        SetupConfig(**kw)
