"""Free-group words, permutations, finite presentations, and shortlex
Knuth-Bendix completion.

Free-group words are tuples of signed generator indices: +(i+1) is the
i-th generator, -(i+1) its inverse.  Monoid words over a rewriting
system's alphabet are tuples of letter indices; generator i contributes
the pair of letters 2i (the generator) and 2i+1 (its formal inverse),
and extra unpaired letters may be appended later (kernel generators of
hybrid groups, which have no formal inverses).
"""

from collections import deque
from dataclasses import dataclass, field

# ---------------------------------------------------------------------------
# free-group words


def word_inverse(w):
    return tuple(-x for x in reversed(w))


def word_mul(*ws):
    """Concatenate and freely reduce."""
    out = []
    for w in ws:
        for x in w:
            if out and out[-1] == -x:
                out.pop()
            else:
                out.append(x)
    return tuple(out)


def word_pow(w, n):
    if n < 0:
        return word_pow(word_inverse(w), -n)
    out = ()
    for _ in range(n):
        out = word_mul(out, w)
    return out


def commutator(x, y):
    return word_mul(word_inverse(x), word_inverse(y), x, y)


def commutator_alt(x, y):
    return word_mul(x, y, word_inverse(x), word_inverse(y))


# ---------------------------------------------------------------------------
# permutations (0-based image tuples; right action: point^p = p[point])


def perm_identity(n):
    return tuple(range(n))


def perm_mul(p, q):
    """First apply p, then q."""
    return tuple(q[p[i]] for i in range(len(p)))


def perm_inv(p):
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


def perm_order(p):
    n = 1
    q = p
    ident = perm_identity(len(p))
    while q != ident:
        q = perm_mul(q, p)
        n += 1
    return n


def parse_perm(text, npoints=None):
    """Parse cycle notation like "(1,2)(3,4)" with 1-based points."""
    text = text.strip()
    cycles = []
    maxpt = npoints or 0
    i = 0
    while i < len(text):
        if text[i].isspace():
            i += 1
            continue
        if text[i] != "(":
            raise ValueError("expected '(' in %r" % text)
        j = text.index(")", i)
        pts = [int(t) for t in text[i + 1:j].split(",") if t.strip()]
        if any(t < 1 for t in pts):
            raise ValueError("points are 1-based")
        cycles.append(pts)
        maxpt = max([maxpt] + pts)
        i = j + 1
    images = list(range(maxpt))
    for cyc in cycles:
        for k, pt in enumerate(cyc):
            images[pt - 1] = cyc[(k + 1) % len(cyc)] - 1
    if sorted(images) != list(range(maxpt)):
        raise ValueError("cycles are not disjoint in %r" % text)
    return tuple(images)


def perm_to_cycles(p):
    """Inverse of parse_perm, for display."""
    seen = set()
    parts = []
    for i in range(len(p)):
        if i in seen or p[i] == i:
            continue
        cyc = [i]
        seen.add(i)
        j = p[i]
        while j != i:
            cyc.append(j)
            seen.add(j)
            j = p[j]
        parts.append("(" + ",".join(str(x + 1) for x in cyc) + ")")
    return "".join(parts) or "()"


# ---------------------------------------------------------------------------
# word syntax: names, *, ^-1, ^k, parentheses, commutator sugar [x,y]


class WordParser:
    def __init__(self, names, text):
        self.names = list(names)
        self.text = text
        self.pos = 0

    def error(self, msg):
        raise ValueError("%s at position %d in %r" % (msg, self.pos, self.text))

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def parse(self):
        w = self.parse_product()
        self.skip_ws()
        if self.pos != len(self.text):
            self.error("trailing input")
        return w

    def parse_product(self):
        out = ()
        first = True
        while True:
            c = self.peek()
            if c in ("", ")", "]", ","):
                break
            if c == "*":
                self.pos += 1
                c = self.peek()
            elif not first:
                # juxtaposition is allowed
                pass
            out = word_mul(out, self.parse_factor())
            first = False
        return out

    def parse_factor(self):
        c = self.peek()
        if c == "(":
            self.pos += 1
            base = self.parse_product()
            if self.peek() != ")":
                self.error("expected ')'")
            self.pos += 1
        elif c == "[":
            self.pos += 1
            x = self.parse_product()
            if self.peek() != ",":
                self.error("expected ',' in commutator")
            self.pos += 1
            y = self.parse_product()
            if self.peek() != "]":
                self.error("expected ']'")
            self.pos += 1
            base = commutator(x, y)
        else:
            base = self.parse_name()
        while self.peek() == "^":
            self.pos += 1
            exp = self.parse_int()
            base = word_pow(base, exp)
        return base

    def parse_name(self):
        self.skip_ws()
        # longest generator name matching at the current position
        best = None
        for i, name in enumerate(self.names):
            if (self.text.startswith(name, self.pos)
                    and (best is None or len(name) > len(self.names[best]))):
                best = i
        if best is None:
            self.error("unknown generator")
        self.pos += len(self.names[best])
        return (best + 1,)

    def parse_int(self):
        self.skip_ws()
        start = self.pos
        if self.peek() == "-":
            self.pos += 1
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start or self.text[start:self.pos] == "-":
            self.error("expected integer exponent")
        return int(self.text[start:self.pos])


def parse_word(text, names):
    return WordParser(names, text).parse()


# ---------------------------------------------------------------------------
# presentations


@dataclass(frozen=True)
class Presentation:
    generators: tuple
    relators: tuple

    @classmethod
    def parse(cls, generators, relator_texts):
        gens = tuple(generators)
        rels = tuple(parse_word(t, gens) for t in relator_texts)
        return cls(gens, rels)

    @property
    def rank(self):
        return len(self.generators)


def free_to_monoid(w):
    """Signed free word -> monoid word over the paired alphabet."""
    return tuple(2 * (x - 1) if x > 0 else 2 * (-x - 1) + 1 for x in w)


def monoid_to_free(w, npaired):
    out = []
    for l in w:
        if l >= npaired:
            raise ValueError("letter %d has no free-group preimage" % l)
        out.append(l // 2 + 1 if l % 2 == 0 else -(l // 2 + 1))
    return tuple(out)


# ---------------------------------------------------------------------------
# rewriting systems


def shortlex_less(a, b):
    return (len(a), a) < (len(b), b)


class Rws:
    """A confluent rewriting system over a monoid alphabet.

    Letters 0..2*npaired-1 come in (generator, formal inverse) pairs;
    letters beyond that are unpaired with a declared power relation
    (letter^power -> empty), used for kernel generators.
    """

    def __init__(self, nletters, npaired, rules, unpaired_power=None,
                 inverse_letters=None):
        self.nletters = nletters
        self.npaired = npaired
        self.rules = [(tuple(l), tuple(r)) for l, r in rules]
        self.unpaired_power = unpaired_power  # p for b^p = identity
        # explicit per-letter inverse words; needed when letter pairing is
        # only formal (an order-2 merge rule may hide a kernel correction)
        self.inverse_letters = inverse_letters
        self._lhs_map = {l: i for i, (l, r) in enumerate(self.rules)}
        self._lhs_lens = sorted({len(l) for l, _ in self.rules})
        self._order = None
        self._nf = None

    # -- reduction ----------------------------------------------------------

    def reduce(self, word, on_apply=None):
        """Leftmost reduction to normal form.

        on_apply(rule_index, right_context) is called at each rule
        application, where right_context is the part of the current word
        strictly to the right of the replaced occurrence.
        """
        out = []
        tail = list(word[::-1])
        lens = self._lhs_lens
        lhs_map = self._lhs_map
        while tail:
            out.append(tail.pop())
            for L in lens:
                if L > len(out):
                    break
                idx = lhs_map.get(tuple(out[-L:]))
                if idx is not None:
                    if on_apply is not None:
                        on_apply(idx, tuple(reversed(tail)))
                    del out[len(out) - L:]
                    tail.extend(reversed(self.rules[idx][1]))
                    break
        return tuple(out)

    def is_irreducible(self, word):
        for L in self._lhs_lens:
            for i in range(len(word) - L + 1):
                if word[i:i + L] in self._lhs_map:
                    return False
        return True

    def letter_inverse_word(self, l):
        """A word representing the inverse of a letter."""
        if self.inverse_letters is not None:
            return self.inverse_letters[l]
        if l < 2 * self.npaired:
            return (l + 1,) if l % 2 == 0 else (l - 1,)
        if not self.unpaired_power:
            raise ValueError("no inverse known for letter %d" % l)
        return (l,) * (self.unpaired_power - 1)

    def word_inverse(self, w):
        out = ()
        for l in reversed(w):
            out = out + self.letter_inverse_word(l)
        return self.reduce(out)

    # -- enumeration --------------------------------------------------------

    def normal_forms(self, cap=100000):
        """All irreducible words, shortlex order.  Finite or raises."""
        if self._nf is not None:
            return self._nf
        out = [()]
        frontier = [()]
        while frontier:
            new = []
            for w in frontier:
                for l in range(self.nletters):
                    wl = w + (l,)
                    # only suffixes ending at the new letter can match
                    ok = True
                    for L in self._lhs_lens:
                        if L <= len(wl) and wl[-L:] in self._lhs_map:
                            ok = False
                            break
                    if ok:
                        new.append(wl)
            out.extend(new)
            if len(out) > cap:
                raise RuntimeError("normal form enumeration exceeded cap %d" % cap)
            frontier = new
        self._nf = out
        return out

    @property
    def order(self):
        if self._order is None:
            self._order = len(self.normal_forms())
        return self._order

    # -- overlaps (for confluence checks and cohomology systems) -----------

    def overlaps(self):
        """Yield (i, j, k): suffix of lhs_i of length k == prefix of lhs_j.

        Covers proper prefix/suffix overlaps and end-containment; after
        inter-reduction no lhs is a factor of another, so these are all
        the critical pairs.  The overlap word is lhs_i + lhs_j[k:], and
        its two one-step descendants are rhs_i + lhs_j[k:] and
        lhs_i[:-k] + rhs_j.
        """
        for i, (l1, _) in enumerate(self.rules):
            for j, (l2, _) in enumerate(self.rules):
                for k in range(1, min(len(l1), len(l2)) + 1):
                    if k == len(l1) and k == len(l2):
                        continue  # identical or containment, excluded
                    if l1[-k:] == l2[:k]:
                        yield i, j, k

    def is_confluent(self):
        for i, j, k in self.overlaps():
            l1, r1 = self.rules[i]
            l2, r2 = self.rules[j]
            a = self.reduce(r1 + l2[k:])
            b = self.reduce(l1[:-k] + r2)
            if a != b:
                return False
        return True


class CompletionFailure(Exception):
    def __init__(self, reason, nrules):
        super().__init__("%s (rules so far: %d)" % (reason, nrules))
        self.reason = reason
        self.nrules = nrules


def _reduce_by(word, rules_map, lens):
    out = []
    tail = list(word[::-1])
    while tail:
        out.append(tail.pop())
        for L in lens:
            if L > len(out):
                break
            rhs = rules_map.get(tuple(out[-L:]))
            if rhs is not None:
                del out[len(out) - L:]
                tail.extend(reversed(rhs))
                break
    return tuple(out)


def complete(nletters, equations, max_rules=5000, max_lhs=50):
    """Knuth-Bendix completion over shortlex.  Returns the rule list."""
    rules = {}  # lhs -> rhs, inter-reduced invariant maintained lazily
    pending = deque(equations)

    def lens():
        return sorted({len(l) for l in rules})

    while pending:
        u, v = pending.popleft()
        L = lens()
        u = _reduce_by(u, rules, L)
        v = _reduce_by(v, rules, L)
        if u == v:
            continue
        if shortlex_less(u, v):
            l, r = v, u
        else:
            l, r = u, v
        if len(l) > max_lhs:
            raise CompletionFailure("left side exceeds length cap %d" % max_lhs,
                                    len(rules))
        # existing rules touched by the new rule go back on the queue
        for l2 in list(rules):
            if l2 == l:
                continue
            r2 = rules[l2]
            if _contains(l2, l) or _contains(r2, l):
                del rules[l2]
                pending.append((l2, r2))
        rules[l] = r
        if len(rules) > max_rules:
            raise CompletionFailure("rule cap %d exceeded" % max_rules, len(rules))
        # critical pairs of the new rule against everything (incl. itself)
        for l2, r2 in list(rules.items()):
            for a, b in (_overlap_pairs(l, r, l2, r2)
                         + _overlap_pairs(l2, r2, l, r)):
                pending.append((a, b))
    return sorted(rules.items(), key=lambda lr: (len(lr[0]), lr[0]))


def _contains(word, factor):
    n = len(factor)
    return any(word[i:i + n] == factor for i in range(len(word) - n + 1))


def _overlap_pairs(l1, r1, l2, r2):
    out = []
    for k in range(1, min(len(l1), len(l2)) + 1):
        if k == len(l1) and k == len(l2):
            continue
        if l1[-k:] == l2[:k]:
            out.append((r1 + l2[k:], l1[:-k] + r2))
    return out


def knuth_bendix(pres, max_rules=5000, max_lhs=50):
    """Complete a group presentation into a confluent Rws.

    The monoid alphabet has two letters per generator; free-cancellation
    equations are included, and an order-2 generator naturally yields
    the merge rule (inverse letter -> generator letter).
    """
    e = pres.rank
    eqs = []
    for i in range(e):
        g, gi = 2 * i, 2 * i + 1
        eqs.append(((g, gi), ()))
        eqs.append(((gi, g), ()))
    for rel in pres.relators:
        eqs.append((free_to_monoid(rel), ()))
    rules = complete(2 * e, eqs, max_rules=max_rules, max_lhs=max_lhs)
    rws = Rws(2 * e, e, rules)
    assert rws.is_confluent()
    return rws


def partition_rules(rws):
    """Split rule indices into (cancellation/inversion rules, the rest).

    The first class holds mutual-inverse cancellations x x' -> empty and
    single-letter inversion merges x' -> x for order-2 generators.
    """
    rbar, rtilde = [], []
    np2 = 2 * rws.npaired
    for idx, (l, r) in enumerate(rws.rules):
        bar = False
        if len(l) == 2 and r == () and l[0] < np2 and l[1] < np2:
            if l[0] // 2 == l[1] // 2 and l[0] != l[1]:
                bar = True
        if len(l) == 1 and len(r) == 1 and l[0] // 2 == r[0] // 2 and l[0] < np2:
            bar = True
        (rbar if bar else rtilde).append(idx)
    return rbar, rtilde


# ---------------------------------------------------------------------------
# finite group data


class FiniteGroupData:
    """A finite quotient: presentation + permutation images + rewriting."""

    def __init__(self, pres, images, max_rules=5000, max_lhs=50):
        self.pres = pres
        npoints = max(len(p) for p in images)
        self.images = tuple(tuple(p) + tuple(range(len(p), npoints))
                            for p in images)
        self.npoints = npoints
        for rel in pres.relators:
            if eval_word(self.images, rel) != perm_identity(npoints):
                raise ValueError("relator %r does not hold in the image" % (rel,))
        self.rws = knuth_bendix(pres, max_rules=max_rules, max_lhs=max_lhs)
        # letter -> permutation
        perms = []
        for i in range(pres.rank):
            perms.append(self.images[i])
            perms.append(perm_inv(self.images[i]))
        self.letter_perms = tuple(perms)
        self.order = self.rws.order
        closure = perm_closure(self.images)
        if len(closure) != self.order:
            raise ValueError("normal form count %d != permutation closure %d"
                             % (self.order, len(closure)))
        self.nf_to_perm = {}
        self.perm_to_nf = {}
        for w in self.rws.normal_forms():
            pm = eval_monoid(self.letter_perms, w)
            self.nf_to_perm[w] = pm
            self.perm_to_nf[pm] = w
        if len(self.perm_to_nf) != self.order:
            raise ValueError("normal forms do not biject with elements")

    def mul(self, w1, w2):
        return self.rws.reduce(w1 + w2)

    def inv(self, w):
        return self.rws.word_inverse(w)


def eval_word(images, w):
    """Evaluate a signed free word at permutation generator images."""
    n = len(images[0]) if images else 1
    out = perm_identity(n)
    for x in w:
        p = images[x - 1] if x > 0 else perm_inv(images[-x - 1])
        out = perm_mul(out, p)
    return out


def eval_monoid(letter_perms, w):
    n = len(letter_perms[0]) if letter_perms else 1
    out = perm_identity(n)
    for l in w:
        out = perm_mul(out, letter_perms[l])
    return out


def perm_closure(gens, cap=10 ** 7):
    gens = [tuple(g) for g in gens]
    n = len(gens[0])
    seen = {perm_identity(n)}
    frontier = [perm_identity(n)]
    while frontier:
        new = []
        for p in frontier:
            for g in gens:
                q = perm_mul(p, g)
                if q not in seen:
                    seen.add(q)
                    new.append(q)
        if len(seen) > cap:
            raise RuntimeError("closure cap exceeded")
        frontier = new
    return seen


def verify_epimorphism(H, gpres, image_words):
    """Check that mapping G's generators to words in H's generators is an
    epimorphism G -> H.  Returns (True, None) or (False, witness)."""
    if len(image_words) != gpres.rank:
        raise ValueError("need one image per generator")
    perms = [eval_word(H.images, w) for w in image_words]
    for rel in gpres.relators:
        if eval_word(perms, rel) != perm_identity(H.npoints):
            return False, ("relator fails", rel)
    sub = perm_closure(perms)
    if len(sub) != H.order:
        return False, ("images generate subgroup of order %d" % len(sub), None)
    return True, None
