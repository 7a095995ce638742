"""Hybrid groups: a finite factor given by a confluent rewriting system,
extended by an elementary-abelian normal subgroup N = F_p^d with a given
action and per-rule tail vectors.

Elements are pairs (a-word, n-vector) with the a-word in normal form.
Multiplication reduces the concatenated a-words while pushing rule tails
past their right context through the module action.
"""

import numpy as np

from .fields import Echelon, fp_array, fp_inv_matrix, fp_rank
from .groups import Rws


def bword(vec, first_letter):
    """Normal-form word of an N-vector: b_0^{v_0} b_1^{v_1} ..."""
    out = []
    for j, v in enumerate(vec):
        out.extend([first_letter + j] * int(v))
    return tuple(out)


class HybridGroup:
    def __init__(self, factor, p, d, action, tails, blocks=None):
        self.factor = factor          # Rws of the factor group
        self.p = p
        self.d = d                    # dimension of N over F_p
        self.action = [fp_array(M, p).reshape(d, d) for M in action]
        if len(self.action) != factor.nletters:
            raise ValueError("need one action matrix per factor letter")
        self.tails = fp_array(tails, p).reshape(len(factor.rules), d)
        self.blocks = blocks          # optional reporting metadata
        self._act_cache = {(): np.eye(d, dtype=np.int64)}
        self._combined = None

    # -- basics --------------------------------------------------------------

    @property
    def order(self):
        return self.factor.order * self.p ** self.d

    def identity(self):
        return ((), (0,) * self.d)

    def element(self, word, n=None):
        if n is None:
            n = (0,) * self.d
        return (self.factor.reduce(tuple(word)), tuple(int(x) % self.p for x in n))

    def act(self, word):
        """Action matrix of a factor word on N (suffix-memoized)."""
        word = tuple(word)
        M = self._act_cache.get(word)
        if M is not None:
            return M
        # find the longest cached suffix, then extend to the left
        k = len(word)
        while k > 0 and word[len(word) - k:] not in self._act_cache:
            k -= 1
        M = self._act_cache[word[len(word) - k:]]
        for i in range(len(word) - k - 1, -1, -1):
            M = (self.action[word[i]] @ M) % self.p
            self._act_cache[word[i:]] = M
        return M

    # -- arithmetic ----------------------------------------------------------

    def mul(self, g, h):
        (w1, n1), (w2, n2) = g, h
        if self.d == 0:
            return (self.factor.reduce(w1 + w2), ())
        n = (np.array(n1, dtype=np.int64) @ self.act(w2)
             + np.array(n2, dtype=np.int64)) % self.p

        def on_apply(idx, rc):
            t = self.tails[idx]
            if t.any():
                n_local[0] = (n_local[0] + t @ self.act(rc)) % self.p

        n_local = [n]
        w = self.factor.reduce(w1 + w2, on_apply)
        return (w, tuple(int(x) for x in n_local[0]))

    def inv(self, g):
        w, n = g
        winv = self.factor.word_inverse(w)
        aw, u = self.mul(g, (winv, (0,) * self.d))
        if aw != ():
            raise RuntimeError("inverse word does not cancel")
        return (winv, tuple((-int(x)) % self.p for x in u))

    def mul_many(self, *gs):
        out = self.identity()
        for g in gs:
            out = self.mul(out, g)
        return out

    def pow(self, g, k):
        if k < 0:
            return self.pow(self.inv(g), -k)
        out = self.identity()
        base = g
        while k:
            if k & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            k >>= 1
        return out

    def order_of(self, g, cap=None):
        cap = cap or self.order
        n = 1
        x = g
        ident = self.identity()
        while x != ident:
            x = self.mul(x, g)
            n += 1
            if n > cap:
                raise RuntimeError("order exceeds cap")
        return n

    def elements(self):
        from itertools import product
        for w in self.factor.normal_forms():
            for n in product(range(self.p), repeat=self.d):
                yield (w, n)

    # -- combined rewriting system --------------------------------------------

    def combined_rws(self):
        """One confluent rewriting system for the whole group.

        Alphabet: factor letters followed by d kernel letters.  Factor
        rules get their tails materialized as kernel words; kernel rules
        encode the elementary-abelian structure and the action.
        """
        if self._combined is not None:
            return self._combined
        L = self.factor.nletters
        rules = []
        for (l, r), t in zip(self.factor.rules, self.tails):
            rules.append((l, r + bword(t, L)))
        for j in range(self.d):
            rules.append(((L + j,) * self.p, ()))
            for i in range(j):
                rules.append(((L + j, L + i), (L + i, L + j)))
        for j in range(self.d):
            for a in range(L):
                rules.append(((L + j, a), (a,) + bword(self.action[a][j], L)))
        # exact inverse words: letter pairing in the factor may be formal
        # only (a merged order-2 letter can gain a kernel correction here)
        inverse_letters = []
        for l in range(L):
            w, m = self.inv(self.element((l,)))
            inverse_letters.append(w + bword(m, L))
        for j in range(self.d):
            inverse_letters.append(((L + j,) * (self.p - 1)))
        rws = Rws(L + self.d, self.factor.npaired, rules,
                  unpaired_power=self.p, inverse_letters=inverse_letters)
        rws._order = self.order  # known without enumerating normal forms
        if not rws.is_confluent():
            raise RuntimeError("combined rewriting system is not confluent")
        self._combined = rws
        return rws

    def to_combined_word(self, g):
        w, n = g
        return w + bword(n, self.factor.nletters)


def trivial_hybrid(rws, p):
    """A factor group viewed as a hybrid group with trivial N."""
    nrules = len(rws.rules)
    return HybridGroup(rws, p, 0,
                       [np.zeros((0, 0), dtype=np.int64)] * rws.nletters,
                       np.zeros((nrules, 0), dtype=np.int64))


# ---------------------------------------------------------------------------
# subgroups: letter lifts and kernel computation


def eval_letters(E, lifts, word, slp=None, lift_nodes=None):
    """Evaluate a factor word at per-letter lifts; optionally build the
    matching straight-line-program node."""
    out = E.identity()
    node = None
    for l in word:
        out = E.mul(out, lifts[l])
        if slp is not None:
            node = (lift_nodes[l] if node is None
                    else slp.mul(node, lift_nodes[l]))
    if slp is not None and node is None:
        node = slp.one()
    return (out, node) if slp is not None else out


def find_letter_lifts(E, gens, slp=None, gen_nodes=None, cap=200000):
    """For each factor letter, an element of <gens> whose a-part is the
    letter's normal form.  Breadth-first over the factor group; intended
    for small factors (oracles and initial rounds)."""
    targets = {E.factor.reduce((l,)): l for l in range(E.factor.nletters)}
    lifts = {}
    nodes = {}
    step = []
    for i, g in enumerate(gens):
        step.append((g, gen_nodes[i] if slp else None))
        step.append((E.inv(g), slp.inv(gen_nodes[i]) if slp else None))
    seen = {(): (E.identity(), slp.one() if slp else None)}
    frontier = [()]
    while frontier and len(lifts) < len(targets):
        new = []
        for w in frontier:
            el, nd = seen[w]
            for g, gn in step:
                el2 = E.mul(el, g)
                w2 = el2[0]
                if w2 not in seen:
                    nd2 = slp.mul(nd, gn) if slp else None
                    seen[w2] = (el2, nd2)
                    new.append(w2)
                    if w2 in targets:
                        letter = targets[w2]
                        if letter not in lifts:
                            lifts[letter] = el2
                            nodes[letter] = nd2
            if len(seen) > cap:
                raise RuntimeError("letter-lift search cap exceeded")
        frontier = new
    # letters whose normal form is shared (e.g. merged order-2 inverses)
    for l in range(E.factor.nletters):
        nf = E.factor.reduce((l,))
        if l not in lifts and nf in targets and targets[nf] in lifts:
            lifts[l] = lifts[targets[nf]]
            nodes[l] = nodes[targets[nf]]
    if len(lifts) < E.factor.nletters:
        missing = [l for l in range(E.factor.nletters) if l not in lifts]
        raise ValueError("generators do not cover the factor "
                         "(no lift for letters %s)" % missing)
    return (lifts, nodes) if slp else lifts


class KernelData:
    """Result of a subgroup-kernel computation.

    basis: echelonized basis of S ∩ N.
    raws: list of (vector, slp-node) spanning elements in the order they
          increased the rank (usable as a traced complement source).
    """

    def __init__(self, basis, raws):
        self.basis = basis
        self.raws = raws

    @property
    def dim(self):
        return self.basis.shape[0]


def subgroup_kernel(E, gens, lifts=None, slp=None, gen_nodes=None,
                    lift_nodes=None):
    """S ∩ N for S = <gens>, via relator evaluation at letter lifts.

    For every factor rule l -> r (with tail), the element
    ev(r)^{-1}·ev(l) lies in N; together with the correction elements
    ev(a-part(g))^{-1}·g for each generator, their module closure is
    exactly S ∩ N.
    """
    tracing = slp is not None
    if lifts is None:
        if tracing:
            lifts, lift_nodes = find_letter_lifts(E, gens, slp, gen_nodes)
        else:
            lifts = find_letter_lifts(E, gens)

    def ev(word):
        if tracing:
            return eval_letters(E, lifts, word, slp, lift_nodes)
        return eval_letters(E, lifts, word), None

    seeds = []
    for (l, r) in E.factor.rules:
        el, nl = ev(l)
        er, nr = ev(r)
        t = E.mul(E.inv(er), el)
        if t[0] != ():
            raise RuntimeError("rule evaluation has nontrivial a-part")
        node = slp.mul(slp.inv(nr), nl) if tracing else None
        seeds.append((t[1], node))
    for i, g in enumerate(gens):
        ew, nw = ev(g[0])
        t = E.mul(E.inv(ew), g)
        if t[0] != ():
            raise RuntimeError("corrector evaluation has nontrivial a-part")
        node = (slp.mul(slp.inv(nw), gen_nodes[i]) if tracing else None)
        seeds.append((t[1], node))

    acc = Echelon(E.d, E.p)
    raws = []
    frontier = []
    for vec, node in seeds:
        v = np.array(vec, dtype=np.int64) % E.p
        if acc.add(v):
            raws.append((v, node))
            frontier.append((v, node))
    while frontier:
        new = []
        for vec, node in frontier:
            for l in range(E.factor.nletters):
                w = (vec @ E.action[l]) % E.p
                if acc.add(w):
                    nd = None
                    if tracing:
                        sl = lift_nodes[l]
                        nd = slp.mul(slp.mul(slp.inv(sl), node), sl)
                    new.append((w, nd))
                    raws.append((w, nd))
        frontier = new
    return KernelData(acc.basis(), raws)


def schreier_kernel(E, gens):
    """Oracle for subgroup_kernel when the generators' images cover the
    factor: span of the Schreier-generator images over the normal-form
    transversal (t·g · (transversal rep of t·g))^{-1}."""
    nfs = E.factor.normal_forms()
    reps = {}
    # transversal element for each normal form, as an element of <gens>
    lifts = find_letter_lifts(E, gens)
    for w in nfs:
        el = E.identity()
        for l in w:
            el = E.mul(el, lifts[l])
        reps[w] = el
    acc = Echelon(E.d, E.p)
    for w in nfs:
        for g in gens:
            tg = E.mul(reps[w], g)
            corr = E.mul(tg, E.inv(reps[tg[0]]))
            assert corr[0] == ()
            acc.add(corr[1])
    return acc.basis()


# ---------------------------------------------------------------------------
# quotients and products


def quotient(E, U, complement=None):
    """Quotient of a hybrid group by an invariant subspace of N.

    Returns (new HybridGroup, projection matrix d x q).  When a
    complement basis is supplied its rows become the standard basis of
    the new N.
    """
    p = E.p
    U = np.atleast_2d(fp_array(U, p)).reshape(-1, E.d)
    k = U.shape[0]
    q = E.d - k
    # invariance check
    for l in range(E.factor.nletters):
        img = (U @ E.action[l]) % p if k else U
        if k and fp_rank(np.vstack([U, img]), p) != fp_rank(U, p):
            raise ValueError("subspace is not action-invariant")
    if complement is None:
        acc = Echelon(E.d, p)
        for row in U:
            acc.add(row)
        comp = []
        for i in range(E.d):
            e = np.zeros(E.d, dtype=np.int64)
            e[i] = 1
            if acc.add(e):
                comp.append(e)
        complement = np.array(comp, dtype=np.int64).reshape(q, E.d)
    else:
        complement = np.atleast_2d(fp_array(complement, p)).reshape(q, E.d)
    T = np.vstack([U, complement]) if k else complement
    if T.shape[0] != E.d or fp_rank(T, p) != E.d:
        raise ValueError("complement does not complete the subspace")
    P = fp_inv_matrix(T, p)[:, k:]
    action = [(complement @ M @ P) % p for M in E.action]
    tails = (E.tails @ P) % p
    return HybridGroup(E.factor, p, q, action, tails), P


def diagonal_product(components):
    """Combine hybrid groups over one common factor: N = direct sum."""
    components = list(components)
    if not components:
        raise ValueError("need at least one component")
    first = components[0]
    for E in components[1:]:
        if E.factor.rules != first.factor.rules or E.p != first.p:
            raise ValueError("components must share the factor and prime")
    if len(components) == 1:
        return first
    p = first.p
    d = sum(E.d for E in components)
    action = []
    for l in range(first.factor.nletters):
        M = np.zeros((d, d), dtype=np.int64)
        off = 0
        for E in components:
            M[off:off + E.d, off:off + E.d] = E.action[l]
            off += E.d
        action.append(M)
    tails = np.hstack([E.tails for E in components]) % p
    return HybridGroup(first.factor, p, d, action, tails)


def embed_element(components, which, g):
    """An element of one component, viewed in the diagonal product."""
    w, n = g
    parts = []
    for i, E in enumerate(components):
        parts.extend(n if i == which else (0,) * E.d)
    return (w, tuple(parts))


# ---------------------------------------------------------------------------
# structure strings


def component_string(p, dim, copies):
    if dim == 1:
        return str(p) if copies == 1 else "%d^%d" % (p, copies)
    if copies == 1:
        return "%d^%d" % (p, dim)
    return "%d^(%dx%d)" % (p, dim, copies)


def layer_string(components):
    parts = [component_string(p, d, n) for (p, d, n) in components]
    if len(parts) == 1:
        return parts[0]
    return "(" + "x".join(parts) + ")"


def structure_string(layers, factor_name):
    """Layers newest-leftmost; each layer a list of (p, dim, copies)."""
    pieces = [layer_string(layer) for layer in layers if layer]
    pieces.append(factor_name)
    return ".".join(pieces)
