import numpy as np
import pytest

import fixtures
from covlift.hybrid import (
    HybridGroup, bword, component_string, diagonal_product, embed_element,
    find_letter_lifts, layer_string, quotient, schreier_kernel,
    structure_string, subgroup_kernel, trivial_hybrid,
)
from covlift.modrep import natural_perm_module
from covlift.slp import Slp


def split_hybrid(H, rep):
    """Semidirect product of a fixture group with a module (zero tails)."""
    rws = H.rws
    mats = [rep.letter_matrix(l) for l in range(rws.nletters)]
    tails = np.zeros((len(rws.rules), rep.d), dtype=np.int64)
    return HybridGroup(rws, rep.p, rep.d, mats, tails)


def cyclic4():
    """C4 as the nonsplit extension of C2 by F2."""
    rws = fixtures.c2().rws
    tails = [[1] if l == (0, 0) else [0] for (l, r) in rws.rules]
    return HybridGroup(rws, 2, 1, [[[1]], [[1]]], tails)


def random_element(E, rng):
    nfs = E.factor.normal_forms()
    w = nfs[int(rng.integers(len(nfs)))]
    n = tuple(int(x) for x in rng.integers(0, E.p, size=E.d))
    return (w, n)


# ---------------------------------------------------------------------------
# basics


def test_bword():
    assert bword([2, 0, 1], 5) == (5, 5, 7)


def test_trivial_hybrid():
    E = trivial_hybrid(fixtures.s3().rws, 2)
    assert E.order == 6
    a = E.element((0,))
    assert E.mul(a, a) == E.identity()


def test_cyclic4():
    E = cyclic4()
    assert E.order == 4
    a = E.element((0,))
    assert E.mul(a, a) == ((), (1,))
    assert E.order_of(a) == 4
    assert E.inv(a) == ((0,), (1,))
    assert E.mul(a, E.inv(a)) == E.identity()


def test_group_axioms_random():
    H = fixtures.s3()
    E = split_hybrid(H, natural_perm_module(H, 2))
    rng = np.random.default_rng(3)
    ident = E.identity()
    for _ in range(40):
        g, h, k = (random_element(E, rng) for _ in range(3))
        assert E.mul(E.mul(g, h), k) == E.mul(g, E.mul(h, k))
        assert E.mul(g, E.inv(g)) == ident
        assert E.mul(ident, g) == g and E.mul(g, ident) == g


def test_split_mul_is_semidirect_formula():
    H = fixtures.s3()
    E = split_hybrid(H, natural_perm_module(H, 2))
    rng = np.random.default_rng(4)
    for _ in range(20):
        (w1, n1), (w2, n2) = random_element(E, rng), random_element(E, rng)
        w, n = E.mul((w1, n1), (w2, n2))
        assert w == E.factor.reduce(w1 + w2)
        expect = (np.array(n1) @ E.act(w2) + np.array(n2)) % 2
        assert n == tuple(int(x) for x in expect)


def test_pow_and_order_of():
    E = cyclic4()
    a = E.element((0,))
    assert E.pow(a, 4) == E.identity()
    assert E.pow(a, -1) == E.inv(a)
    assert E.order_of(((), (1,))) == 2


# ---------------------------------------------------------------------------
# combined rewriting system as a multiplication oracle


@pytest.mark.parametrize("make", [cyclic4,
                                  lambda: split_hybrid(
                                      fixtures.s3(),
                                      natural_perm_module(fixtures.s3(), 2))])
def test_combined_rws_matches_hybrid(make):
    E = make()
    rws = E.combined_rws()
    assert rws.order == E.order
    rng = np.random.default_rng(5)
    for _ in range(25):
        g, h = random_element(E, rng), random_element(E, rng)
        lhs = rws.reduce(E.to_combined_word(g) + E.to_combined_word(h))
        assert lhs == rws.reduce(E.to_combined_word(E.mul(g, h)))


def test_elements_enumeration():
    E = cyclic4()
    els = list(E.elements())
    assert len(els) == 4 == len(set(els))


# ---------------------------------------------------------------------------
# letter lifts and subgroup kernels


def test_find_letter_lifts_split():
    H = fixtures.s3()
    E = split_hybrid(H, natural_perm_module(H, 2))
    gens = [E.element((0,), (1, 0, 0)), E.element((2,), (0, 1, 0))]
    lifts = find_letter_lifts(E, gens)
    for l in range(E.factor.nletters):
        assert lifts[l][0] == E.factor.reduce((l,))


def test_subgroup_kernel_standard_lifts_split():
    H = fixtures.s3()
    E = split_hybrid(H, natural_perm_module(H, 2))
    gens = [E.element((0,)), E.element((2,))]
    K = subgroup_kernel(E, gens)
    assert K.dim == 0


def test_subgroup_kernel_full():
    E = cyclic4()
    K = subgroup_kernel(E, [E.element((0,))])
    assert K.dim == 1


def test_subgroup_kernel_matches_schreier_oracle():
    H = fixtures.s3()
    E = split_hybrid(H, natural_perm_module(H, 2))
    rng = np.random.default_rng(6)
    for _ in range(8):
        gens = [E.element((0,), rng.integers(0, 2, size=3)),
                E.element((2,), rng.integers(0, 2, size=3))]
        K = subgroup_kernel(E, gens)
        oracle = schreier_kernel(E, gens)
        assert K.dim == oracle.shape[0]
        assert np.array_equal(K.basis, oracle)


def test_subgroup_kernel_slp_trace():
    H = fixtures.s3()
    E = split_hybrid(H, natural_perm_module(H, 2))
    gens = [E.element((0,), (1, 1, 0)), E.element((2,), (0, 1, 1))]
    slp = Slp(len(gens))
    gen_nodes = [slp.gen(i) for i in range(len(gens))]
    K = subgroup_kernel(E, gens, slp=slp, gen_nodes=gen_nodes)
    assert K.dim == schreier_kernel(E, gens).shape[0]
    wanted = [node for _, node in K.raws]
    values = slp.evaluate(gens, E.mul, E.inv, E.identity(), wanted=wanted)
    for vec, node in K.raws:
        w, n = values[node]
        assert w == ()
        assert np.array_equal(np.array(n) % 2, vec)


# ---------------------------------------------------------------------------
# quotients and products


def test_quotient_by_invariant_subspace():
    H = fixtures.s3()
    E = split_hybrid(H, natural_perm_module(H, 2))
    Q, P = quotient(E, [[1, 1, 1]])
    assert Q.order == E.order // 2
    assert Q.combined_rws().order == Q.order
    # projection is a homomorphism on the kernel part
    g = E.element((), (1, 0, 0))
    h = E.element((2,), (0, 1, 0))
    gh = E.mul(g, h)
    qg = (g[0], tuple((np.array(g[1]) @ P) % 2))
    qh = (h[0], tuple((np.array(h[1]) @ P) % 2))
    assert Q.mul(qg, qh) == (gh[0], tuple((np.array(gh[1]) @ P) % 2))


def test_quotient_rejects_non_invariant():
    H = fixtures.s3()
    E = split_hybrid(H, natural_perm_module(H, 2))
    with pytest.raises(ValueError):
        quotient(E, [[1, 0, 0]])


def test_diagonal_product():
    assert diagonal_product([cyclic4(), cyclic4()]).order == 8
    H = fixtures.s3()
    E = split_hybrid(H, natural_perm_module(H, 2))
    D = diagonal_product([E, E])
    assert D.order == 6 * 2 ** 6
    # in a product of split components the embeddings are homomorphisms
    rng = np.random.default_rng(7)
    for _ in range(10):
        g, h = random_element(E, rng), random_element(E, rng)
        for which in (0, 1):
            a = embed_element([E, E], which, g)
            b = embed_element([E, E], which, h)
            assert D.mul(a, b) == embed_element([E, E], which, E.mul(g, h))


# ---------------------------------------------------------------------------
# structure strings


def test_structure_strings():
    assert component_string(2, 1, 1) == "2"
    assert component_string(2, 1, 4) == "2^4"
    assert component_string(2, 4, 1) == "2^4"
    assert component_string(3, 3, 6) == "3^(3x6)"
    assert layer_string([(2, 1, 1), (2, 4, 1)]) == "(2x2^4)"
    assert layer_string([(2, 1, 1)]) == "2"
    assert structure_string([[(2, 1, 1)], [(2, 1, 1), (2, 4, 1)]], "A5") \
        == "2.(2x2^4).A5"
    assert structure_string([], "A6") == "A6"
