"""Iterative lifting of an epimorphism G -> H along elementary-abelian
p-kernels.

Each round builds, for every simple module V of the round-0 base, the
universal cover of the current quotient with V-homogeneous kernel,
evaluates the relators of G in it, and chops the kernel down to the
largest part the relators allow.  The per-module lifts are combined
subdirectly; the resulting hybrid group is promoted to the base of the
next round via its combined rewriting system.

Letter lifts are maintained as straight-line programs in the images of
G's generators, so later rounds never search the (large) factor group.
"""

from dataclasses import dataclass, field

import numpy as np

from .cohom import ModuleOnBase, ParamRWS, extension, h2_basis
from .covers import block_diagonal_hybrid, planted_images
from .fields import Echelon, fp_solve
from .groups import free_to_monoid, verify_epimorphism
from .hybrid import HybridGroup, bword, diagonal_product, find_letter_lifts, \
    quotient, subgroup_kernel, trivial_hybrid
from .modrep import Representation, chop, classify_simples, cyclic_generator, \
    is_isomorphic
from .slp import Slp


def eval_images(E, images, word):
    """Image of a signed free word at generator images in a hybrid group."""
    out = E.identity()
    for x in word:
        g = images[x - 1] if x > 0 else E.inv(images[-x - 1])
        out = E.mul(out, g)
    return out


@dataclass
class ModulePrep:
    """Round-0 data for one simple module, reused every round."""
    entry: object
    Q: Representation      # module isomorphic to V^r
    z: np.ndarray          # cyclic generator of Q


@dataclass
class RoundRecord:
    round: int
    order: int
    layer: list            # [(p, dim, copies)] of the newly added kernel
    verdicts: dict         # entry index -> "lifts"/"unchanged"
    fixed_point: bool = False


class EpiState:
    """An epimorphism from G onto a growing tower of quotients."""

    def __init__(self, gpres, h0, image_words, p, seed=None, catalog=None):
        ok, witness = verify_epimorphism(h0, gpres, image_words)
        if not ok:
            raise ValueError("not an epimorphism: %s" % (witness,))
        self.gpres = gpres
        self.h0 = h0
        self.p = p
        self.e = gpres.rank
        self.base = h0.rws
        self.images = [h0.rws.reduce(free_to_monoid(w)) for w in image_words]
        self.catalog = catalog or classify_simples(h0, p)
        self.preps = []
        for entry in self.catalog:
            Q, z = cyclic_generator(h0, entry)
            self.preps.append(ModulePrep(entry, Q, z))
        self.round = 0
        self.history = [RoundRecord(0, h0.order, [], {})]
        # straight-line programs expressing every base letter in the images
        self.slp = Slp(self.e)
        self.gen_nodes = [self.slp.gen(j) for j in range(self.e)]
        E0 = trivial_hybrid(h0.rws, p)
        gens = [(w, ()) for w in self.images]
        _, nodes = find_letter_lifts(E0, gens, self.slp, self.gen_nodes)
        self.letter_nodes = nodes

    @property
    def order(self):
        return self.history[-1].order

    def letter_module(self, rep):
        """Per-letter matrices of a round-0 module on the current base:
        letters added by previous rounds (p-kernel letters) act trivially."""
        n0 = 2 * len(self.h0.images)
        eye = np.eye(rep.d, dtype=np.int64)
        return [rep.letter_matrix(l) if l < n0 else eye
                for l in range(self.base.nletters)]


# ---------------------------------------------------------------------------
# subgroup re-coordinatization


def subgroup_hybrid(D, lifts, kb):
    """The subgroup <lifts, kb-rows> of D as its own hybrid group.

    lifts[l] must project onto letter l of the factor; kb rows (a basis
    of the subgroup's kernel intersection) become the new coordinates.
    Returns (S, express) where express maps a D-element of the subgroup
    to its S-coordinates.
    """
    base = D.factor
    p = D.p
    kb = np.atleast_2d(np.array(kb, dtype=np.int64)).reshape(-1, D.d)
    kdim = kb.shape[0]
    kbT = kb.T

    def coords(v):
        v = np.array(v, dtype=np.int64) % p
        if kdim == 0:
            if v.any():
                raise RuntimeError("vector outside the subgroup kernel")
            return np.zeros(0, dtype=np.int64)
        x = fp_solve(kbT, v, p)
        if x is None:
            raise RuntimeError("vector outside the subgroup kernel")
        return x

    action = []
    for l in range(base.nletters):
        M = np.zeros((kdim, kdim), dtype=np.int64)
        for i in range(kdim):
            M[i] = coords((kb[i] @ D.action[l]) % p)
        action.append(M)

    def ev(word):
        out = D.identity()
        for x in word:
            out = D.mul(out, lifts[x])
        return out

    tails = np.zeros((len(base.rules), kdim), dtype=np.int64)
    for idx, (l, r) in enumerate(base.rules):
        t = D.mul(D.inv(ev(r)), ev(l))
        if t[0] != ():
            raise RuntimeError("letter lifts break a factor rule")
        tails[idx] = coords(t[1])
    S = HybridGroup(base, p, kdim, action, tails)

    def express(g):
        rest = D.mul(D.inv(ev(g[0])), g)
        if rest[0] != ():
            raise RuntimeError("element is not in clean subgroup form")
        return (g[0], tuple(int(x) for x in coords(rest[1])))

    return S, express


# ---------------------------------------------------------------------------
# one module, one round


@dataclass
class ModuleLift:
    quotient: HybridGroup  # over the current base, kernel = the new layer
    images: list           # generator images in the quotient
    new_nodes: list        # slp nodes for the quotient's kernel basis
    entry: object


def lift_by_module(state, prep):
    """Largest quotient of G extending the current one by a V-homogeneous
    kernel, or None when V contributes nothing."""
    p, e = state.p, state.e
    entry = prep.entry
    # the cover of the current quotient: split ambient times H^2 extensions
    Qmats = state.letter_module(prep.Q)
    ambient = block_diagonal_hybrid(state.base, p, Qmats, e, prep.Q.d)
    prws = ParamRWS(state.base, ModuleOnBase(p, state.letter_module(entry.rep)))
    parts = [ambient]
    for y in h2_basis(prws).reps:
        parts.append(extension(prws, y))
    D = diagonal_product(parts)
    pad = D.d - ambient.d
    images = [(g[0], g[1] + (0,) * pad)
              for g in planted_images(ambient, state.images, prep.z, e)]
    # letter lifts come from the maintained straight-line programs
    wanted = sorted(set(state.letter_nodes.values()))
    values = state.slp.evaluate(images, D.mul, D.inv, D.identity(),
                                wanted=wanted)
    lifts = {}
    for l, node in state.letter_nodes.items():
        lifts[l] = values[node]
        if lifts[l][0] != state.base.reduce((l,)):
            raise RuntimeError("letter lift drifted from its letter")
    K = subgroup_kernel(D, images, lifts=lifts, slp=state.slp,
                        gen_nodes=state.gen_nodes,
                        lift_nodes=state.letter_nodes)
    if K.dim == 0:
        return None
    kb = np.array([v for v, _ in K.raws], dtype=np.int64)
    S, express = subgroup_hybrid(D, lifts, kb)
    s_images = [express(g) for g in images]
    # relators of G must die: their kernel parts span the dead subspace U
    acc = Echelon(K.dim, p)
    for rel in state.gpres.relators:
        w, n = eval_images(S, s_images, rel)
        if w != ():
            raise RuntimeError("relator has nontrivial image in the factor")
        acc.add(np.array(n, dtype=np.int64))
    # normal closure: close under the letter actions
    frontier = list(acc.basis())
    while frontier:
        new = []
        for v in frontier:
            for l in range(state.base.nletters):
                u = (v @ S.action[l]) % p
                if acc.add(u):
                    new.append(u)
        frontier = new
    if acc.rank == K.dim:
        return None
    U = acc.basis()
    # traced complement: kernel coordinates are the raw vectors themselves
    sel = Echelon(K.dim, p)
    for row in U:
        sel.add(row)
    comp_rows, comp_nodes = [], []
    for j in range(K.dim):
        ej = np.zeros(K.dim, dtype=np.int64)
        ej[j] = 1
        if sel.add(ej):
            comp_rows.append(ej)
            comp_nodes.append(K.raws[j][1])
    if U.shape[0]:
        Qh, P = quotient(S, U, complement=np.array(comp_rows, dtype=np.int64))
        new_images = [(w, tuple(int(x) for x in (np.array(n) @ P) % p))
                      for (w, n) in s_images]
    else:
        Qh, new_images = S, s_images
    return ModuleLift(Qh, new_images, comp_nodes, entry)


# ---------------------------------------------------------------------------
# the semisimple step and iteration


def kernel_layer(state, E):
    """Decompose a quotient's kernel into catalog components for reporting."""
    if E.d == 0:
        return []
    full = Representation(state.p, list(E.action))
    counts = {}
    for f in chop(full):
        match = None
        for entry in state.catalog:
            target = Representation(state.p, state.letter_module(entry.rep))
            if target.d == f.d and is_isomorphic(target, f) is not None:
                match = entry
                break
        if match is None:
            raise RuntimeError("kernel factor not in the catalog")
        counts[match.index] = counts.get(match.index, 0) + 1
    return [(state.p, state.catalog[i].d, counts[i]) for i in sorted(counts)]


def semisimple_step(state, maxdim=8):
    """One round: the maximal lift with semisimple p-elementary kernel.

    Mutates the state (base, images, nodes, history) and returns the
    RoundRecord of the round; a fixed point leaves the quotient as is.
    """
    verdicts = {}
    results = []
    for prep in state.preps:
        if prep.entry.d > maxdim:
            verdicts[prep.entry.index] = "skipped"
            continue
        res = lift_by_module(state, prep)
        verdicts[prep.entry.index] = "lifts" if res else "unchanged"
        if res:
            results.append(res)
    state.round += 1
    if not results:
        rec = RoundRecord(state.round, state.order, [], verdicts,
                          fixed_point=True)
        state.history.append(rec)
        return rec

    if len(results) == 1:
        S, s_images = results[0].quotient, results[0].images
        new_nodes = results[0].new_nodes
    else:
        D = diagonal_product([r.quotient for r in results])
        images = []
        for j in range(state.e):
            n = sum((r.images[j][1] for r in results), ())
            images.append((results[0].images[j][0], n))
        standard = {l: ((state.base.reduce((l,))), (0,) * D.d)
                    for l in range(state.base.nletters)}
        K = subgroup_kernel(D, images, lifts=standard, slp=state.slp,
                            gen_nodes=state.gen_nodes,
                            lift_nodes=state.letter_nodes)
        kb = np.array([v for v, _ in K.raws], dtype=np.int64)
        S, express = subgroup_hybrid(D, standard, kb)
        s_images = [express(g) for g in images]
        new_nodes = [node for _, node in K.raws]
    # soundness: every relator evaluates to the identity
    for rel in state.gpres.relators:
        if eval_images(S, s_images, rel) != S.identity():
            raise RuntimeError("relator does not die in the new quotient")

    layer = kernel_layer(state, S)
    # promote: the whole hybrid becomes the next round's base
    L = state.base.nletters
    state.base = S.combined_rws()
    for j, node in enumerate(new_nodes):
        state.letter_nodes[L + j] = node
    state.images = [w + bword(n, L) for (w, n) in s_images]
    rec = RoundRecord(state.round, S.order, layer, verdicts)
    state.history.append(rec)
    return rec


def iterate(state, rounds, maxdim=8):
    """Run semisimple steps until a fixed point or the round budget."""
    records = []
    for _ in range(rounds):
        rec = semisimple_step(state, maxdim)
        records.append(rec)
        if rec.fixed_point:
            break
    return records


def structure_layers(state):
    """Layers of the current tower, newest leftmost."""
    return [rec.layer for rec in reversed(state.history) if rec.layer]


def presentation_invariance_check(variants, p, rounds, maxdim=8, seed=None):
    """Run the same lift from several presentations of one group; the
    per-round quotient orders must agree (the covers need not)."""
    towers = []
    for gpres, h0, image_words in variants:
        st = EpiState(gpres, h0, image_words, p)
        iterate(st, rounds, maxdim)
        towers.append([rec.order for rec in st.history])
    ok = all(t == towers[0] for t in towers[1:])
    return ok, towers
