from fractions import Fraction
from itertools import product

import pytest

from pcsplab.minions import (
    AIP,
    BLP,
    BLP_AIP,
    PROJ,
    TRIVIAL,
    NotEnumerable,
    ProjEl,
    aip_element,
    blp_element,
    compose,
    cyclic_minion,
    cyclic_quotient,
    cyclic_shift,
    equal_mod_cyclic,
    equal_mod_wnu,
    find_special_polymorphism,
    identity_map,
    is_cyclic,
    is_homomorphism,
    is_wnu,
    pol_minion,
    wnu_minion,
    wnu_quotient,
)
from pcsplab.structures import enumerate_homomorphisms, power, signature, structure

F = Fraction
SIG_E = signature(("E", 2))


def fz(*xs):
    return frozenset(xs)


def test_aip_minor_warmup_identity():
    # (1,1,-1) under (1,2,2) collapses to the origin element (1,0)
    assert AIP.minor((1, 1, -1), (1, 2, 2), 2) == (1, 0)


def test_proj_minor():
    assert PROJ.minor(ProjEl(3, 2), (2, 1, 1), 2) == ProjEl(2, 1)


def test_cyclic_block_union_minor():
    C3 = cyclic_minion(3)
    got = C3.minor((fz(0), fz(1), fz(2)), (1, 1, 2), 2)
    assert got == (fz(0, 1), fz(2))


def test_identity_minor_is_noop():
    f = aip_element(2, -1, 0)
    assert AIP.minor(f, identity_map(3), 3) == f
    g = blp_element(F(1, 2), F(1, 2))
    assert BLP.minor(g, identity_map(2), 2) == g


def test_enumerate_proj():
    assert PROJ.enumerate(3) == [ProjEl(3, 1), ProjEl(3, 2), ProjEl(3, 3)]


def test_enumerate_cyclic_plain_and_quotient():
    assert len(cyclic_minion(2).enumerate(2)) == 4  # 2**2 block assignments
    assert len(cyclic_quotient(2).enumerate(2)) == 3  # swap pair collapses


def test_enumerate_poly_endomorphisms():
    A = structure(SIG_E, [0, 1], {"E": [(0, 1)]})
    M = pol_minion(A, A)
    endos = M.enumerate(1)
    assert len(endos) == len(enumerate_homomorphisms(power(A, 1), A))


def test_enumerate_rejects_linear_kinds():
    for M in (AIP, BLP, BLP_AIP):
        with pytest.raises(NotEnumerable):
            M.enumerate(2)


def test_is_cyclic_symmetric_blp():
    assert is_cyclic(BLP, blp_element(F(1, 3), F(1, 3), F(1, 3)))


def test_is_cyclic_quotient_diagonal():
    for p in (2, 3, 5):
        Cbar = cyclic_quotient(p)
        gamma = Cbar.canonical(tuple(fz(i) for i in range(p)))
        assert is_cyclic(Cbar, gamma)
        # in the plain minion the same blocks are not shift-invariant
        if p > 1:
            assert not is_cyclic(cyclic_minion(p), tuple(fz(i) for i in range(p)))


def test_projection_is_not_cyclic():
    assert not is_cyclic(PROJ, ProjEl(2, 1))


def test_is_wnu():
    assert is_wnu(BLP, blp_element(F(1, 4), F(1, 4), F(1, 2)) ) is False
    assert is_wnu(BLP, blp_element(F(1, 3), F(1, 3), F(1, 3)))
    assert not is_wnu(PROJ, ProjEl(3, 2))
    Wbar = wnu_quotient(3)
    omega = Wbar.canonical((fz(1), fz(2), fz(3)))
    assert is_wnu(Wbar, omega)


def test_equal_mod_cyclic_examples():
    assert equal_mod_cyclic((fz(0), fz(1)), (fz(1), fz(0)))
    assert not equal_mod_cyclic((fz(0, 1), fz()), (fz(), fz(0, 1)))
    g = (fz(0), fz(1, 2), fz())
    assert equal_mod_cyclic(g, g)


def test_equal_mod_wnu_examples():
    assert equal_mod_wnu((fz(1), fz(2, 3)), (fz(2), fz(1, 3)))
    assert not equal_mod_wnu((fz(1, 2), fz(3)), (fz(1), fz(2, 3)))
    g = (fz(1), fz(2), fz(3))
    assert equal_mod_wnu(g, g)


def test_equal_mod_wnu_guard():
    big = tuple(fz(i) if i <= 3 else fz() for i in range(1, 14))
    with pytest.raises(ValueError):
        equal_mod_wnu(big, big)


def _all_maps(n, m):
    return list(product(range(1, m + 1), repeat=n))


@pytest.mark.parametrize(
    "minion,arities",
    [
        (PROJ, (1, 2, 3, 4)),
        (cyclic_quotient(2), (1, 2, 3)),
        (cyclic_minion(3), (1, 2, 3)),
        (wnu_quotient(3), (1, 2, 3)),
        (TRIVIAL, (1, 2, 3, 4)),
    ],
)
def test_minor_functoriality(minion, arities):
    # (f^pi2)^pi1 == f^(pi1 o pi2), and the identity map fixes f
    for n in arities:
        for f in minion.enumerate(n):
            assert minion.equal(minion.minor(f, identity_map(n), n), f)
            for k in (1, 2, 3):
                for pi2 in _all_maps(n, k):
                    g = minion.minor(f, pi2, k)
                    for m in (1, 2):
                        for pi1 in _all_maps(k, m):
                            lhs = minion.minor(g, pi1, m)
                            rhs = minion.minor(f, compose(pi1, pi2), m)
                            assert minion.equal(lhs, rhs)


def test_aip_blp_minors_preserve_sum():
    import random

    rng = random.Random(0)
    for _ in range(50):
        n = rng.randint(1, 5)
        f = [rng.randint(-4, 4) for _ in range(n - 1)]
        f.append(1 - sum(f))
        f = tuple(f)
        m = rng.randint(1, 4)
        pi = tuple(rng.randint(1, m) for _ in range(n))
        assert sum(AIP.minor(f, pi, m)) == 1
        g = tuple(F(1, n) for _ in range(n))
        assert sum(BLP.minor(g, pi, m)) == 1


def test_blpaip_minor_preserves_zero_support():
    f = (F(1, 2), F(0), F(1, 2))
    g = (3, 0, -2)
    for pi in _all_maps(3, 2):
        nf, ng = BLP_AIP.minor((f, g), pi, 2)
        assert all(not (a == 0 and b != 0) for a, b in zip(nf, ng))
        BLP_AIP.validate((nf, ng))


def test_equal_mod_ops_are_congruences():
    C3 = cyclic_minion(3)
    els = C3.enumerate(2)
    for a in els:
        for b in els:
            if equal_mod_cyclic(a, b):
                for pi in _all_maps(2, 2):
                    assert equal_mod_cyclic(C3.minor(a, pi, 2), C3.minor(b, pi, 2))
    W3 = wnu_minion(3)
    els = W3.enumerate(2)
    for a in els:
        for b in els:
            if equal_mod_wnu(a, b):
                for pi in _all_maps(2, 3):
                    assert equal_mod_wnu(W3.minor(a, pi, 3), W3.minor(b, pi, 3))


def test_equivalences_are_equivalence_relations():
    W4 = wnu_minion(4)
    els = W4.enumerate(2)
    import random

    rng = random.Random(1)
    for _ in range(200):
        a, b, c = (rng.choice(els) for _ in range(3))
        assert equal_mod_wnu(a, a)
        if equal_mod_wnu(a, b):
            assert equal_mod_wnu(b, a)
        if equal_mod_wnu(a, b) and equal_mod_wnu(b, c):
            assert equal_mod_wnu(a, c)


def test_find_special_polymorphism_loop():
    A = structure(SIG_E, ["x"], {"E": [("x", "x")]})
    for n in (2, 3):
        assert find_special_polymorphism(A, A, "cyclic", n) is not None
        assert find_special_polymorphism(A, A, "wnu", n) is not None


def test_find_special_polymorphism_max_structure():
    # ({0,1}, {(0,1),(1,0),(1,1)}) has the componentwise max as binary cyclic
    A = structure(SIG_E, [0, 1], {"E": [(0, 1), (1, 0), (1, 1)]})
    h = find_special_polymorphism(A, A, "cyclic", 2)
    assert h is not None
    hd = h.as_dict()
    assert hd[(0, 1)] == hd[(1, 0)]


def test_find_special_polymorphism_3cycle_matches_exhaustive():
    A = structure(SIG_E, [0, 1, 2], {"E": [(0, 1), (1, 2), (2, 0)]})
    got = find_special_polymorphism(A, A, "cyclic", 2)
    # oracle: exhaustive scan over all homomorphisms from the square
    P = power(A, 2)
    shift_orbit = {v: (v[1], v[0]) for v in P.universe}
    exhaustive = [
        h
        for h in enumerate_homomorphisms(P, A)
        if all(h.as_dict()[v] == h.as_dict()[shift_orbit[v]] for v in P.universe)
    ]
    assert (got is not None) == (len(exhaustive) > 0)
    if got is not None:
        assert is_homomorphism(got)


def test_find_special_requires_template():
    A = structure(SIG_E, [0, 1, 2], {"E": [(0, 1), (1, 2), (2, 0)]})
    B = structure(SIG_E, ["a", "b"], {"E": [("a", "b"), ("b", "a")]})
    with pytest.raises(ValueError):
        find_special_polymorphism(A, B, "cyclic", 2)


def test_cyclic_shift_map():
    assert cyclic_shift(4) == (4, 1, 2, 3)
