"""Second cohomology through parametrized rewriting.

Each non-cancellation rule of a confluent base system receives a
symbolic tail of d variables over the module V.  Critical pairs of the
base rules yield linear confluence equations; their solution space X,
modulo the image of the coboundaries, computes H^2(base, V).  Elements
of X instantiate to hybrid-group extensions.
"""

from dataclasses import dataclass

import numpy as np

from .fields import Echelon, fp_array, fp_solve
from .groups import partition_rules
from .hybrid import HybridGroup


class ActionCache:
    """Suffix-memoized products of per-letter action matrices."""

    def __init__(self, p, mats):
        self.p = p
        self.mats = [fp_array(M, p) for M in mats]
        self.d = self.mats[0].shape[0] if self.mats else 0
        self._cache = {(): np.eye(self.d, dtype=np.int64)}

    def act(self, word):
        word = tuple(word)
        M = self._cache.get(word)
        if M is not None:
            return M
        k = len(word)
        while k > 0 and word[len(word) - k:] not in self._cache:
            k -= 1
        M = self._cache[word[len(word) - k:]]
        for i in range(len(word) - k - 1, -1, -1):
            M = (self.mats[word[i]] @ M) % self.p
            self._cache[word[i:]] = M
        return M


class ModuleOnBase:
    """A module for a rewriting-system group: one matrix per letter."""

    def __init__(self, p, letter_mats):
        self.p = p
        self.mats = [fp_array(M, p) for M in letter_mats]
        self.d = self.mats[0].shape[0] if self.mats else 0
        self._cache = ActionCache(p, self.mats)

    @classmethod
    def from_representation(cls, rep):
        return cls(rep.p, rep.letter_matrices())

    def inflate(self, extra_letters):
        """Extend to a larger alphabet whose new letters act trivially."""
        eye = np.eye(self.d, dtype=np.int64)
        return ModuleOnBase(self.p, self.mats + [eye] * extra_letters)

    def act(self, word):
        return self._cache.act(word)


def build_param_rws(base, module):
    """ParamRWS from any base with a confluent rewriting system.

    base: an Rws, a FiniteGroupData, or a HybridGroup (whose combined
    system becomes the base).  module: a Representation on the base
    generators or a ready ModuleOnBase; missing letters act trivially.
    """
    if isinstance(base, HybridGroup):
        rws = base.combined_rws()
    elif hasattr(base, "rws"):
        rws = base.rws
    else:
        rws = base
    if not isinstance(module, ModuleOnBase):
        module = ModuleOnBase.from_representation(module)
    if len(module.mats) < rws.nletters:
        module = module.inflate(rws.nletters - len(module.mats))
    if len(module.mats) != rws.nletters:
        raise ValueError("module has more letters than the base alphabet")
    return ParamRWS(rws, module)


@dataclass
class TailedWord:
    """Clean form: an irreducible a-word times b^(affine tail)."""
    word: tuple
    const: np.ndarray               # d-vector over F_p
    coef: dict                      # tilde-rule position -> d x d matrix

    def tail_at(self, prws, y):
        """Instantiate the affine tail at a variable assignment."""
        out = self.const.copy()
        for t, C in self.coef.items():
            out = (out + y[t * prws.d:(t + 1) * prws.d] @ C) % prws.p
        return out


class ParamRWS:
    """The parametrized rewriting system of a (base, module) pair."""

    def __init__(self, base, module):
        self.base = base
        self.module = module
        self.p = module.p
        self.d = module.d
        self.rbar, self.rtilde = partition_rules(base)
        self.block = {rule: t for t, rule in enumerate(self.rtilde)}
        self.nvars = len(self.rtilde) * self.d
        self._X = None
        self._h2 = None

    def act(self, word):
        return self.module.act(word)

    # -- clean reduction -----------------------------------------------------

    def clean_reduce(self, tokens, const=None, coef=None):
        """Reduce a mixed word to clean form.

        tokens: base letters (ints) or concrete module vectors
        (b-insertions).  Optional initial tail (const, coef) is extended
        in place.  Rule applications at u = x·l·y add their symbolic
        tail acted by the module matrix of the right context y.
        """
        p, d = self.p, self.d
        const = np.zeros(d, dtype=np.int64) if const is None else const.copy()
        coef = {} if coef is None else {t: C.copy() for t, C in coef.items()}
        letters = []
        inserts = []  # (position in `letters`, vector)
        for tok in tokens:
            if isinstance(tok, (int, np.integer)):
                letters.append(int(tok))
            else:
                inserts.append((len(letters), fp_array(tok, p)))
        # push concrete insertions past their raw right context
        for pos, vec in inserts:
            const = (const + vec @ self.act(tuple(letters[pos:]))) % p

        def on_apply(idx, rc):
            t = self.block.get(idx)
            if t is None:
                return
            A = self.act(rc)
            C = coef.get(t)
            coef[t] = A % p if C is None else (C + A) % p

        word = self.base.reduce(tuple(letters), on_apply)
        return TailedWord(word, const, coef)

    # -- confluence equations --------------------------------------------------

    def cocycle_space(self):
        """Echelonized basis of X: assignments making the system confluent."""
        if self._X is not None:
            return self._X
        p, d = self.p, self.d
        acc = Echelon(self.nvars, p)
        rules = self.base.rules
        for i, j, k in sorted(self.base.overlaps()):
            li, ri = rules[i]
            lj, rj = rules[j]
            suffix = lj[k:]
            # descendant A: rule i applied at the left of li + suffix
            coefA = {}
            tA = self.block.get(i)
            if tA is not None:
                coefA[tA] = self.act(suffix).copy()
            wa = self.clean_reduce(ri + suffix, coef=coefA)
            # descendant B: rule j applied at the right
            coefB = {}
            tB = self.block.get(j)
            if tB is not None:
                coefB[tB] = np.eye(d, dtype=np.int64)
            wb = self.clean_reduce(li[:-k] + rj, coef=coefB)
            if wa.word != wb.word:
                raise RuntimeError("base system is not confluent at overlap "
                                   "(%d, %d, %d)" % (i, j, k))
            if ((wa.const - wb.const) % p).any():
                raise RuntimeError("nonzero constant in a confluence equation")
            blocks = set(wa.coef) | set(wb.coef)
            if not blocks:
                continue
            diffs = {t: (wa.coef.get(t, 0) - wb.coef.get(t, 0)) % p
                     for t in blocks}
            for c in range(d):
                row = np.zeros(self.nvars, dtype=np.int64)
                for t, diff in diffs.items():
                    row[t * d:(t + 1) * d] = diff[:, c]
                if row.any():
                    acc.add(row)
        self._X = acc.nullspace()
        return self._X

    # -- coboundaries ----------------------------------------------------------

    def generator_letters(self):
        """Letters that carry a coboundary substitution: one per paired
        generator, plus every unpaired letter."""
        np2 = 2 * self.base.npaired
        return list(range(0, np2, 2)) + list(range(np2, self.base.nletters))

    def _substituted_tail(self, word, letter, vec):
        """Clean tail of the word after a_letter -> a_letter·b^vec (and the
        inverse-consistent substitution on the partner letter)."""
        p = self.p
        partner = letter + 1 if letter < 2 * self.base.npaired else None
        inv_vec = None
        if partner is not None:
            inv_vec = (-(vec @ self.act((partner,)))) % p
        const = np.zeros(self.d, dtype=np.int64)
        for pos, x in enumerate(word):
            if x == letter:
                ins = vec
            elif partner is not None and x == partner:
                ins = inv_vec
            else:
                continue
            const = (const + ins @ self.act(word[pos + 1:])) % p
        # reduce in the zero-instantiated system: rules carry no tails
        return TailedWord(self.base.reduce(word), const, {})

    def coboundary_space(self):
        """Echelonized basis of the coboundary image inside X."""
        p, d = self.p, self.d
        acc = Echelon(self.nvars, p)
        vectors = []
        for letter in self.generator_letters():
            for jj in range(d):
                e = np.zeros(d, dtype=np.int64)
                e[jj] = 1
                y = np.zeros(self.nvars, dtype=np.int64)
                for rule_idx in self.rtilde:
                    l, r = self.base.rules[rule_idx]
                    wl = self._substituted_tail(l, letter, e)
                    wr = self._substituted_tail(r, letter, e)
                    if wl.word != wr.word:
                        raise RuntimeError("substitution broke a rule")
                    if wl.coef or wr.coef:
                        raise RuntimeError("unexpected symbolic tail")
                    t = self.block[rule_idx]
                    y[t * d:(t + 1) * d] = (wl.const - wr.const) % p
                acc.add(y)
                vectors.append(y)
        self._cob_vectors = vectors
        return acc.basis()


def cocycle_space(prws):
    return prws.cocycle_space()


def coboundary_space(prws):
    return prws.coboundary_space()


@dataclass
class H2Basis:
    X: np.ndarray          # basis of the cocycle solution space
    B: np.ndarray          # basis of the coboundary image
    reps: list             # coset representatives of H^2

    @property
    def dim(self):
        return len(self.reps)


def h2_basis(prws):
    X = prws.cocycle_space()
    B = prws.coboundary_space()
    # every coboundary image must solve the confluence equations
    membership = Echelon(prws.nvars, prws.p)
    for row in X:
        membership.add(row)
    for row in B:
        if not membership.contains(row):
            raise RuntimeError("coboundary image escapes the cocycle space")
    acc = Echelon(prws.nvars, prws.p)
    for row in B:
        acc.add(row)
    reps = []
    for row in X:
        if acc.add(row):
            reps.append(row)
    return H2Basis(X, B, reps)


# ---------------------------------------------------------------------------
# extensions


def extension(prws, y, verify=True):
    """The hybrid group defined by instantiating the tails at y."""
    p, d = prws.p, prws.d
    y = fp_array(y, p).reshape(prws.nvars)
    membership = Echelon(prws.nvars, p)
    for row in prws.cocycle_space():
        membership.add(row)
    if not membership.contains(y):
        raise ValueError("assignment does not solve the confluence equations")
    tails = np.zeros((len(prws.base.rules), d), dtype=np.int64)
    for rule_idx, t in prws.block.items():
        tails[rule_idx] = y[t * d:(t + 1) * d]
    E = HybridGroup(prws.base, p, d, prws.module.mats, tails)
    if verify:
        E.combined_rws()  # raises if the instantiated system is not confluent
    return E


def has_complement(E):
    """Decide whether the factor lifts to a subgroup of E.

    Solves for per-generator corrections n in N such that the corrected
    letter lifts satisfy every factor rule exactly.  Returns the witness
    lift table, or None.
    """
    p, d = E.p, E.d
    base = E.factor
    if d == 0:
        return {l: () for l in range(base.nletters)}
    # one unknown correction per letter; cancellation and merge rules of
    # the factor impose the mutual-inverse / alias constraints themselves
    nunk = base.nletters * d
    lift_a, lift_const, lift_coef = {}, {}, {}
    for l in range(base.nletters):
        lift_a[l] = base.reduce((l,))
        lift_const[l] = np.zeros(d, dtype=np.int64)
        lift_coef[l] = {l: np.eye(d, dtype=np.int64)}

    def affine_eval(word):
        const = np.zeros(d, dtype=np.int64)
        coef = {}
        # action of the raw right context of each position
        suffix = np.eye(d, dtype=np.int64)
        suffixes = [None] * len(word)
        for i in range(len(word) - 1, -1, -1):
            suffixes[i] = suffix
            suffix = (E.act(lift_a[word[i]]) @ suffix) % p
        concat = ()
        for i, x in enumerate(word):
            S = suffixes[i]
            const = (const + lift_const[x] @ S) % p
            for b, C in lift_coef[x].items():
                cur = coef.get(b)
                coef[b] = (C @ S) % p if cur is None else (cur + C @ S) % p
            concat = concat + lift_a[x]

        def on_apply(idx, rc):
            nonlocal const
            t = E.tails[idx]
            if t.any():
                const = (const + t @ E.act(rc)) % p

        w = base.reduce(concat, on_apply)
        return w, const, coef

    rows = []
    rhs = []
    for l, r in base.rules:
        wl, cl, fl = affine_eval(l)
        wr, cr, fr = affine_eval(r)
        assert wl == wr
        for c in range(d):
            row = np.zeros(nunk, dtype=np.int64)
            for b in set(fl) | set(fr):
                diff = (fl.get(b, 0) - fr.get(b, 0)) % p
                if np.any(diff):
                    row[b * d:(b + 1) * d] = diff[:, c]
            rows.append(row)
            rhs.append((cr[c] - cl[c]) % p)
    x = fp_solve(np.array(rows, dtype=np.int64),
                 np.array(rhs, dtype=np.int64), p)
    if x is None:
        return None
    return {l: tuple(int(v) for v in x[l * d:(l + 1) * d])
            for l in range(base.nletters)}


# ---------------------------------------------------------------------------
# brute-force oracle


def cocycle_oracle(rws, module, max_order=60, max_dim=4):
    """dim H^2 from the raw 2-cocycle identity on element tables.

    Never touches the rewriting-based machinery above: variables are the
    values gamma(g, h) for nontrivial g, h; equations come from all
    triples; the coboundary image is subtracted.
    """
    p, d = module.p, module.d
    m = rws.order
    if m > max_order or d > max_dim:
        raise ValueError("oracle size cap exceeded")
    els = [w for w in rws.normal_forms() if w != ()]
    idx = {w: i for i, w in enumerate(els)}
    n = len(els)
    nv = n * n * d

    def var(g, h):
        return (idx[g] * n + idx[h]) * d

    acc = Echelon(nv, p)
    for g in els:
        for h in els:
            gh = rws.reduce(g + h)
            for k in els:
                hk = rws.reduce(h + k)
                Mk = module.act(k)
                for c in range(d):
                    row = np.zeros(nv, dtype=np.int64)
                    row[var(g, h):var(g, h) + d] = (row[var(g, h):var(g, h) + d]
                                                    + Mk[:, c]) % p
                    if gh != ():
                        row[var(gh, k) + c] = (row[var(gh, k) + c] + 1) % p
                    row[var(h, k) + c] = (row[var(h, k) + c] - 1) % p
                    if hk != ():
                        row[var(g, hk) + c] = (row[var(g, hk) + c] - 1) % p
                    acc.add(row)
    dim_z2 = nv - acc.rank

    accB = Echelon(nv, p)
    for x in els:
        for j in range(d):
            vec = np.zeros(nv, dtype=np.int64)
            for g in els:
                for h in els:
                    gh = rws.reduce(g + h)
                    if g == x:
                        Mh = module.act(h)
                        vec[var(g, h):var(g, h) + d] = (
                            vec[var(g, h):var(g, h) + d] + Mh[j]) % p
                    if h == x:
                        vec[var(g, h) + j] = (vec[var(g, h) + j] + 1) % p
                    if gh == x:
                        vec[var(g, h) + j] = (vec[var(g, h) + j] - 1) % p
            accB.add(vec)
    return dim_z2 - accB.rank
