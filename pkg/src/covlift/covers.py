"""Universal covers with elementary-abelian kernels.

Three constructions over a finite group H with a chosen rank e:

* wreath_p_cover — the full p-cover inside H wr C_p^|H|, kept small and
  used mainly as an oracle (its kernel is the whole relation module).
* split_cover — the semidirect ambient H x| (V^r)^e with one cyclic
  generator of V^r planted per free generator.
* cover_Ve — the split ambient times one nonsplit extension per basis
  element of H^2(H, V); the universal cover with V-homogeneous kernel.

Fox derivatives provide an independent description of the wreath
cover's kernel coordinates.
"""

from dataclasses import dataclass, field

import numpy as np

from .cohom import build_param_rws, extension, h2_basis
from .groups import free_to_monoid
from .hybrid import HybridGroup, diagonal_product, subgroup_kernel
from .modrep import SimpleEntry, cyclic_generator, regular_module


# ---------------------------------------------------------------------------
# group ring elements and Fox derivatives


class GroupRingElement:
    """Finitely supported F_p-combination of group elements (normal forms)."""

    def __init__(self, p, coeffs=None):
        self.p = p
        self.coeffs = {}
        if coeffs:
            for g, c in coeffs.items():
                self._add(g, c)

    def _add(self, g, c):
        c = (self.coeffs.get(g, 0) + c) % self.p
        if c:
            self.coeffs[g] = c
        else:
            self.coeffs.pop(g, None)

    def __add__(self, other):
        out = GroupRingElement(self.p, self.coeffs)
        for g, c in other.coeffs.items():
            out._add(g, c)
        return out

    def __neg__(self):
        return GroupRingElement(self.p, {g: -c for g, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def right_mul(self, H, h):
        """Multiply on the right by a group element (a monoid word)."""
        out = GroupRingElement(self.p)
        for g, c in self.coeffs.items():
            out._add(H.rws.reduce(g + h), c)
        return out

    def is_zero(self):
        return not self.coeffs

    def __eq__(self, other):
        return self.p == other.p and self.coeffs == other.coeffs

    def vector(self, order_index):
        """Coefficient vector over a normal-form -> position index."""
        v = np.zeros(len(order_index), dtype=np.int64)
        for g, c in self.coeffs.items():
            v[order_index[g]] = c
        return v


def evaluate_in(H, w):
    """Normal form of a signed free word in H."""
    return H.rws.reduce(free_to_monoid(w))


def fox_derivative(w, i, H, p):
    """The image of the free derivative of w by generator i in F_p[H].

    Occurrence formula: each positive occurrence w = a·x_i·b contributes
    the element b; each negative occurrence w = u·x_i^{-1}·v contributes
    -(x_i^{-1}·v).  This matches the recursion d(uv) = du·v + dv.
    """
    out = GroupRingElement(p)
    for pos, letter in enumerate(w):
        if letter == i + 1:
            out._add(evaluate_in(H, w[pos + 1:]), 1)
        elif letter == -(i + 1):
            out._add(evaluate_in(H, w[pos:]), -1)
    return out


# ---------------------------------------------------------------------------
# covers


@dataclass
class CoverResult:
    group: HybridGroup
    images: list                    # one hybrid element per free generator
    kernel: object                  # KernelData
    blocks: list = field(default_factory=list)   # (label, dim) metadata
    entry: SimpleEntry = None
    e: int = 0

    @property
    def order(self):
        return self.group.factor.order * self.group.p ** self.kernel.dim

    def eval_free(self, w):
        """Image of a signed free word under the cover epimorphism."""
        E = self.group
        out = E.identity()
        for x in w:
            g = self.images[x - 1] if x > 0 else E.inv(self.images[-x - 1])
            out = E.mul(out, g)
        return out


def default_image_words(rws, npaired_gens, e):
    """psi(x_j): the j-th base generator for j < rank, identity after."""
    words = []
    for j in range(e):
        words.append(rws.reduce((2 * j,)) if j < npaired_gens else ())
    return words


def block_diagonal_hybrid(base_rws, p, block_mats, e, block_dim):
    """Split hybrid with N = (block module)^e, diagonal action."""
    d = block_dim * e
    action = []
    for l in range(base_rws.nletters):
        M = np.zeros((d, d), dtype=np.int64)
        for j in range(e):
            M[j * block_dim:(j + 1) * block_dim,
              j * block_dim:(j + 1) * block_dim] = block_mats[l]
        action.append(M)
    tails = np.zeros((len(base_rws.rules), d), dtype=np.int64)
    return HybridGroup(base_rws, p, d, action, tails)


def planted_images(E, image_words, z, e):
    """Generator images: a-part psi(x_j), n-part z in block j."""
    bd = E.d // e
    out = []
    for j, w in enumerate(image_words):
        n = np.zeros(E.d, dtype=np.int64)
        n[j * bd:(j + 1) * bd] = z
        out.append(E.element(w, n))
    return out


def wreath_p_cover(H, p, e, cap=200):
    """The p-cover of H of rank e, built inside H acting on (F_pH)^e."""
    if H.order > cap:
        raise ValueError("group order %d exceeds wreath cap %d"
                         % (H.order, cap))
    R = regular_module(H, p)
    mats = [R.letter_matrix(l) for l in range(H.rws.nletters)]
    E = block_diagonal_hybrid(H.rws, p, mats, e, H.order)
    # the unit of the group algebra sits at the identity normal form
    z = np.zeros(H.order, dtype=np.int64)
    z[H.rws.normal_forms().index(())] = 1
    words = default_image_words(H.rws, H.pres.rank, e)
    images = planted_images(E, words, z, e)
    kernel = subgroup_kernel(E, images)
    expected = 1 + (e - 1) * H.order
    if kernel.dim != expected:
        raise RuntimeError("wreath kernel rank %d, expected %d"
                           % (kernel.dim, expected))
    return CoverResult(E, images, kernel,
                       blocks=[("regular", H.order)] * e, e=e)


def _resolve_entry(V, catalog):
    if isinstance(V, SimpleEntry):
        return V
    entry = catalog.find(V)
    if entry is None:
        raise ValueError("module is not in the catalog")
    return entry


def split_cover(H, V, e, catalog, image_words=None):
    """The split part of the (V, e)-cover: H x| (V^r)^e with kernel."""
    entry = _resolve_entry(V, catalog)
    Q, z = cyclic_generator(H, entry)
    mats = [Q.letter_matrix(l) for l in range(H.rws.nletters)]
    E = block_diagonal_hybrid(H.rws, Q.p, mats, e, Q.d)
    if image_words is None:
        image_words = default_image_words(H.rws, H.pres.rank, e)
    images = planted_images(E, image_words, z, e)
    kernel = subgroup_kernel(E, images)
    return CoverResult(E, images, kernel,
                       blocks=[("split", Q.d)] * e, entry=entry, e=e)


def cover_Ve(H, V, e, catalog, image_words=None):
    """The universal cover of H with V-homogeneous kernel and rank e."""
    entry = _resolve_entry(V, catalog)
    split = split_cover(H, entry, e, catalog, image_words)
    prws = build_param_rws(H, entry.rep)
    basis = h2_basis(prws)
    parts = [split.group]
    blocks = list(split.blocks)
    for y in basis.reps:
        parts.append(extension(prws, y))
        blocks.append(("nonsplit", entry.d))
    E = diagonal_product(parts)
    images = []
    pad = E.d - split.group.d
    for g in split.images:
        images.append((g[0], g[1] + (0,) * pad))
    kernel = subgroup_kernel(E, images)
    return CoverResult(E, images, kernel, blocks=blocks, entry=entry, e=e)
