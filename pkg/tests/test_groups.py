import numpy as np
import pytest

import fixtures
from covlift.groups import (
    CompletionFailure, FiniteGroupData, Presentation, commutator,
    eval_monoid, eval_word, free_to_monoid, knuth_bendix, parse_perm,
    parse_word, partition_rules, perm_closure, perm_identity, perm_inv,
    perm_mul, perm_order, perm_to_cycles, verify_epimorphism, word_inverse,
    word_mul, word_pow,
)


# ---------------------------------------------------------------------------
# words and parsing


def test_free_reduction():
    assert word_mul((1, -1)) == ()
    assert word_mul((1, 2), (-2, -1)) == ()
    assert word_pow((1,), 3) == (1, 1, 1)
    assert word_pow((1,), -2) == (-1, -1)
    assert word_inverse((1, -2)) == (2, -1)


def test_parse_word_syntax():
    names = ("a", "b")
    assert parse_word("a*b", names) == (1, 2)
    assert parse_word("ab", names) == (1, 2)
    assert parse_word("a^-1", names) == (-1,)
    assert parse_word("(a*b)^2", names) == (1, 2, 1, 2)
    assert parse_word("b^3", names) == (2, 2, 2)
    assert parse_word("[a,b]", names) == (-1, -2, 1, 2)
    assert parse_word("[a,[a,b]]", names) == commutator((1,), commutator((1,), (2,)))


def test_parse_word_errors():
    with pytest.raises(ValueError):
        parse_word("a*q", ("a",))
    with pytest.raises(ValueError):
        parse_word("(a", ("a",))
    with pytest.raises(ValueError):
        parse_word("a^", ("a",))


def test_parse_perm():
    assert parse_perm("(1,2)") == (1, 0)
    assert parse_perm("(1,2)(3,4)") == (1, 0, 3, 2)
    assert parse_perm("(1,3,5)") == (2, 1, 4, 3, 0)
    assert parse_perm("()", 3) == (0, 1, 2) or parse_perm("", 3) == (0, 1, 2)


def test_perm_ops():
    p = parse_perm("(1,2,3)")
    assert perm_order(p) == 3
    assert perm_mul(p, perm_inv(p)) == perm_identity(3)
    assert perm_to_cycles(p) == "(1,2,3)"
    # right action: first p then q
    q = parse_perm("(1,2)", 3)
    assert perm_mul(p, q)[0] == q[p[0]]


def test_eval_ab_in_a5():
    H = fixtures.a5()
    got = eval_word(H.images, (1, 2))
    assert got == parse_perm("(1,2,3,4,5)")


# ---------------------------------------------------------------------------
# completion


def test_c2_completion_rules():
    rws = fixtures.c2().rws
    # expected system: a^-1 -> a and a^2 -> empty
    assert sorted(rws.rules) == sorted([((1,), (0,)), ((0, 0), ())])
    assert [tuple(w) for w in rws.normal_forms()] == [(), (0,)]


def test_normal_form_counts():
    assert fixtures.s3().rws.order == 6
    assert fixtures.a5().rws.order == 60


def test_reduce_examples():
    rws = fixtures.c2().rws
    assert rws.reduce((0, 0)) == ()
    s3 = fixtures.s3().rws
    b = 2  # letter of the second generator
    assert s3.reduce((b, b, b, b)) == (b,)
    assert s3.reduce(()) == ()


def test_confluence_verified():
    for H in (fixtures.c2(), fixtures.s3(), fixtures.a5()):
        assert H.rws.is_confluent()


def test_normal_form_bijection():
    H = fixtures.s3()
    perms = {H.nf_to_perm[w] for w in H.rws.normal_forms()}
    assert len(perms) == 6


def test_reduce_is_homomorphism():
    H = fixtures.a5()
    rws = H.rws
    rng = np.random.default_rng(11)
    nfs = rws.normal_forms()
    for _ in range(30):
        w1 = tuple(rng.integers(0, rws.nletters, size=rng.integers(0, 8)))
        w2 = tuple(rng.integers(0, rws.nletters, size=rng.integers(0, 8)))
        assert rws.reduce(rws.reduce(w1) + rws.reduce(w2)) == rws.reduce(w1 + w2)
    assert len(nfs) == 60


def test_word_inverse_reduces_to_identity():
    rws = fixtures.s3().rws
    rng = np.random.default_rng(12)
    for _ in range(20):
        w = tuple(rng.integers(0, rws.nletters, size=rng.integers(0, 6)))
        assert rws.reduce(w + rws.word_inverse(w)) == ()


def test_completion_caps():
    pres = Presentation.parse(("a", "b"), ("a^2", "b^3", "(a*b)^7"))
    with pytest.raises(CompletionFailure):
        knuth_bendix(pres, max_rules=5)


# ---------------------------------------------------------------------------
# rule partition


def test_partition_c2():
    rws = fixtures.c2().rws
    rbar, rtilde = partition_rules(rws)
    assert [rws.rules[i] for i in rbar] == [((1,), (0,))]
    assert [rws.rules[i] for i in rtilde] == [((0, 0), ())]


def test_partition_s3():
    rws = fixtures.s3().rws
    rbar, rtilde = partition_rules(rws)
    assert len(rbar) + len(rtilde) == len(rws.rules)
    barset = {rws.rules[i] for i in rbar}
    # a has order 2: merge rule; b-inverses cancel mutually
    assert ((1,), (0,)) in barset
    assert ((2, 3), ()) in barset and ((3, 2), ()) in barset
    tset = {rws.rules[i] for i in rtilde}
    assert ((0, 0), ()) in tset
    assert any(l == (2, 2, 2) or l == (2, 2) for l, r in tset)  # b^3 or b^2->b^-1


# ---------------------------------------------------------------------------
# epimorphism verification


def test_verify_heineken_epimorphism():
    pres, images = fixtures.heineken()
    H = fixtures.a5()
    # express the images as words over nothing: images are raw permutations,
    # so check directly against a FiniteGroupData on those points
    ok, witness = verify_epimorphism(
        FiniteGroupData(Presentation.parse(("a", "b"), ("a^2", "b^3", "(a*b)^5")),
                        H.images),
        pres,
        # images of the Heineken generators written as words in H's gens
        _express(H, images))
    assert ok, witness


def _express(H, perms):
    """Write each permutation as a word in H's generators (brute force)."""
    out = []
    for target in perms:
        w = H.perm_to_nf[target]
        # convert monoid letters back to a signed word
        signed = tuple(l // 2 + 1 if l % 2 == 0 else -(l // 2 + 1) for l in w)
        assert eval_word(H.images, signed) == target
        out.append(signed)
    return out


def test_verify_rejects_non_surjective():
    H = fixtures.s3()
    pres = Presentation.parse(("x",), ())
    ok, witness = verify_epimorphism(H, pres, [()])
    assert not ok


def test_verify_rejects_failed_relator():
    # A5 presentation mapped onto S3 generators: (ab)^5 fails
    S3 = fixtures.s3()
    a5pres = Presentation.parse(("a", "b"), ("a^2", "b^3", "(a*b)^5"))
    ok, witness = verify_epimorphism(S3, a5pres, [(1,), (2,)])
    assert not ok
    assert witness[0] == "relator fails"


def test_heineken_3gen_consistent():
    pres2, im2 = fixtures.heineken()
    pres3, im3 = fixtures.heineken_3gen()
    assert pres2.rank == 2 and pres3.rank == 3
    ident = perm_identity(5)
    for rel in pres3.relators:
        assert eval_word(im3, rel) == ident
    # both image sets generate A5
    assert len(perm_closure(im2)) == 60
    assert len(perm_closure(im3)) == 60
