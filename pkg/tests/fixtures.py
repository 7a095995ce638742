"""Shared example groups used throughout the tests."""

from functools import lru_cache

from covlift.groups import (
    FiniteGroupData, Presentation, commutator, commutator_alt, eval_word,
    parse_perm, perm_identity, word_inverse, word_mul,
)


@lru_cache(maxsize=None)
def c2():
    pres = Presentation.parse(("a",), ("a^2",))
    return FiniteGroupData(pres, (parse_perm("(1,2)"),))


@lru_cache(maxsize=None)
def c3():
    pres = Presentation.parse(("a",), ("a^3",))
    return FiniteGroupData(pres, (parse_perm("(1,2,3)"),))


@lru_cache(maxsize=None)
def s3():
    pres = Presentation.parse(("a", "b"), ("a^2", "b^3", "(a*b)^2"))
    return FiniteGroupData(pres, (parse_perm("(1,2)"), parse_perm("(1,2,3)")))


@lru_cache(maxsize=None)
def a5():
    pres = Presentation.parse(("a", "b"), ("a^2", "b^3", "(a*b)^5"))
    return FiniteGroupData(pres, (parse_perm("(1,2)(3,4)", 5),
                                  parse_perm("(1,3,5)", 5)))


A6_A = "(4,5,6)"
A6_B = "(1,2,3,4)(5,6)"


@lru_cache(maxsize=None)
def a6():
    """A6 on the generator pair shared with the (3,4,15;2) group below."""
    pres = Presentation.parse(("a", "b"),
                              ("a^3", "b^4", "(a*b)^5", "[a,b]^2"))
    return FiniteGroupData(pres, (parse_perm(A6_A, 6), parse_perm(A6_B)))


@lru_cache(maxsize=None)
def triangle_34152():
    """The group <a,b | a^3, b^4, (ab)^15, [a,b]^2> with A6 images.

    The images were found by exhaustive search: the unique-up-to-symmetry
    pair of even permutations of orders (3, 4) whose product has order
    dividing 15, whose commutator has order dividing 2, and which
    generate the full alternating group on six points.
    """
    pres = Presentation.parse(("a", "b"),
                              ("a^3", "b^4", "(a*b)^15", "[a,b]^2"))
    return pres, (parse_perm(A6_A, 6), parse_perm(A6_B))


def heineken_relators(comm):
    """Two-generator form: c = [a,[a,b]] substituted into the other two
    defining relations [b,[b,c]] = a and [c,[c,a]] = b."""
    a, b = (1,), (2,)
    c = comm(a, comm(a, b))
    r1 = word_mul(comm(b, comm(b, c)), word_inverse(a))
    r2 = word_mul(comm(c, comm(c, a)), word_inverse(b))
    return (r1, r2)


def heineken_relators_3gen(comm):
    a, b, c = (1,), (2,), (3,)
    return (word_mul(comm(a, comm(a, b)), word_inverse(c)),
            word_mul(comm(b, comm(b, c)), word_inverse(a)),
            word_mul(comm(c, comm(c, a)), word_inverse(b)))


HEI_A = "(1,2,4,5,3)"
HEI_B = "(1,2,3,4,5)"


def _pick_convention(build_relators, images):
    """Try [x,y] = x^-1 y^-1 x y first, then the reversed convention."""
    for comm in (commutator, commutator_alt):
        rels = build_relators(comm)
        ident = perm_identity(len(images[0]))
        if all(eval_word(images, r) == ident for r in rels):
            return rels
    raise AssertionError("no commutator convention satisfies the images")


@lru_cache(maxsize=None)
def heineken():
    pa, pb = parse_perm(HEI_A), parse_perm(HEI_B)
    rels = _pick_convention(heineken_relators, (pa, pb))
    pres = Presentation(("a", "b"), rels)
    return pres, (pa, pb)


@lru_cache(maxsize=None)
def heineken_3gen():
    pa, pb = parse_perm(HEI_A), parse_perm(HEI_B)
    a, b = (1,), (2,)
    ident = perm_identity(len(pa))
    for comm in (commutator, commutator_alt):
        pc = eval_word((pa, pb), comm(a, comm(a, b)))
        rels = heineken_relators_3gen(comm)
        if all(eval_word((pa, pb, pc), r) == ident for r in rels):
            return Presentation(("a", "b", "c"), rels), (pa, pb, pc)
    raise AssertionError("no commutator convention satisfies the images")


@lru_cache(maxsize=None)
def free_group_words(pres_rank, relator_count=0):
    return Presentation(tuple("x%d" % i for i in range(pres_rank)), ())
