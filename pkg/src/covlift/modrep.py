"""Modular representations over F_p: spinning, composition factors,
hom-spaces, simple-module classification, radicals, homogeneous
quotients, and cyclic generators of V^r.

Modules act on row vectors: v -> v @ M, and M(gh) = M(g) @ M(h).
"""

from dataclasses import dataclass

import numpy as np

from .fields import (
    DEFAULT_SEED, Echelon, fp_array, fp_inv_matrix, fp_kron, fp_nullspace,
    fp_rank, fp_rref, irreducibles_of_degree, minpoly, poly_factor,
)


class Representation:
    """A matrix representation of a finitely generated group over F_p."""

    def __init__(self, p, matrices, group=None):
        self.p = p
        self.mats = [fp_array(M, p) for M in matrices]
        self.d = self.mats[0].shape[0] if self.mats else 0
        for M in self.mats:
            if M.shape != (self.d, self.d):
                raise ValueError("generator matrices must be square, same size")
        self.group = group
        self._inv = None
        self._word_cache = {}

    @property
    def ngens(self):
        return len(self.mats)

    def inv_mats(self):
        if self._inv is None:
            self._inv = [fp_inv_matrix(M, self.p) for M in self.mats]
        return self._inv

    def letter_matrix(self, l):
        """Matrix of a monoid letter: 2i is generator i, 2i+1 its inverse."""
        return self.mats[l // 2] if l % 2 == 0 else self.inv_mats()[l // 2]

    def letter_matrices(self):
        out = []
        for i in range(self.ngens):
            out.append(self.mats[i])
            out.append(self.inv_mats()[i])
        return out

    def act_monoid(self, word):
        """Matrix of a monoid word (cached)."""
        word = tuple(word)
        M = self._word_cache.get(word)
        if M is None:
            M = np.eye(self.d, dtype=np.int64)
            for l in word:
                M = (M @ self.letter_matrix(l)) % self.p
            self._word_cache[word] = M
        return M

    def act_free(self, word):
        """Matrix of a signed free-group word."""
        M = np.eye(self.d, dtype=np.int64)
        for x in word:
            A = self.mats[x - 1] if x > 0 else self.inv_mats()[-x - 1]
            M = (M @ A) % self.p
        return M

    def check_relators(self, pres):
        ident = np.eye(self.d, dtype=np.int64)
        for rel in pres.relators:
            if not np.array_equal(self.act_free(rel), ident):
                return False
        return True


def trivial_module(p, ngens, group=None):
    return Representation(p, [np.ones((1, 1), dtype=np.int64)] * ngens, group)


def natural_perm_module(H, p):
    """Permutation module of the stored permutation images."""
    mats = []
    for g in H.images:
        M = np.zeros((len(g), len(g)), dtype=np.int64)
        for i, j in enumerate(g):
            M[i, j] = 1
        mats.append(M)
    return Representation(p, mats, H)


def tensor(r1, r2):
    if r1.p != r2.p or r1.ngens != r2.ngens:
        raise ValueError("incompatible representations")
    return Representation(r1.p, [fp_kron(A, B, r1.p)
                                 for A, B in zip(r1.mats, r2.mats)],
                          r1.group)


def direct_sum(r1, r2):
    if r1.p != r2.p or r1.ngens != r2.ngens:
        raise ValueError("incompatible representations")
    mats = []
    for A, B in zip(r1.mats, r2.mats):
        M = np.zeros((r1.d + r2.d, r1.d + r2.d), dtype=np.int64)
        M[:r1.d, :r1.d] = A
        M[r1.d:, r1.d:] = B
        mats.append(M)
    return Representation(r1.p, mats, r1.group)


# ---------------------------------------------------------------------------
# spinning and submodule machinery


def spin(rep, vectors, mats=None):
    """Echelonized basis of the smallest invariant subspace containing
    the given row vectors.  `mats` overrides the acting matrix list."""
    p = rep.p if hasattr(rep, "p") else rep
    if mats is None:
        mats = rep.mats
    d = mats[0].shape[0] if mats else len(vectors[0])
    acc = Echelon(d, p)
    frontier = []
    for v in np.atleast_2d(fp_array(vectors, p)).reshape(-1, d):
        if acc.add(v):
            frontier.append(v)
    while frontier:
        new = []
        for v in frontier:
            for M in mats:
                w = (v @ M) % p
                if acc.add(w):
                    new.append(w)
        frontier = new
    return acc.basis()


def is_invariant(rep, basis):
    basis = np.atleast_2d(fp_array(basis, rep.p))
    if basis.size == 0:
        return True
    r = fp_rank(basis, rep.p)
    for M in rep.mats:
        stacked = np.vstack([basis, (basis @ M) % rep.p])
        if fp_rank(stacked, rep.p) != r:
            return False
    return True


def _coords(T_inv, vecs, p, offset, count):
    """Coordinates of row vectors w.r.t. a basis-change T (rows = new basis):
    take columns [offset, offset+count) of v @ T^{-1}."""
    return (np.atleast_2d(vecs) @ T_inv)[:, offset:offset + count] % p


def sub_rep(rep, basis):
    """Representation on an invariant row-space, in the basis given."""
    p = rep.p
    basis = np.atleast_2d(fp_array(basis, p))
    k = basis.shape[0]
    # solve basis @ ? = basis @ M  row-wise: coords of images in `basis`
    mats = []
    for M in rep.mats:
        img = (basis @ M) % p
        # X with X @ basis = img  (X is k x k)
        X = np.zeros((k, k), dtype=np.int64)
        from .fields import fp_solve
        for i in range(k):
            x = fp_solve(basis.T, img[i], p)
            if x is None:
                raise ValueError("basis is not invariant")
            X[i] = x
        mats.append(X)
    return Representation(p, mats, rep.group)


def quotient_rep(rep, basis, complement=None):
    """Quotient by an invariant row-space.

    Returns (Representation of dim d-k, projection matrix P of shape d x (d-k))
    with quotient coordinates v @ P.  A specific complement basis (rows) may be
    supplied; its rows then map to the standard basis of the quotient.
    """
    p = rep.p
    basis = np.atleast_2d(fp_array(basis, p)).reshape(-1, rep.d)
    k = basis.shape[0]
    q = rep.d - k
    if complement is None:
        # greedily extend by standard basis vectors
        acc = Echelon(rep.d, p)
        for row in basis:
            acc.add(row)
        comp = []
        for i in range(rep.d):
            e = np.zeros(rep.d, dtype=np.int64)
            e[i] = 1
            if acc.add(e):
                comp.append(e)
        complement = np.array(comp, dtype=np.int64)
    else:
        complement = np.atleast_2d(fp_array(complement, p))
        if complement.shape[0] != q:
            raise ValueError("complement has wrong dimension")
        if fp_rank(np.vstack([basis, complement]) if k else complement, p) != rep.d:
            raise ValueError("complement does not complete the basis")
    T = np.vstack([basis, complement]) if k else complement
    T_inv = fp_inv_matrix(T, p)
    P = T_inv[:, k:] % p
    mats = [(complement @ M @ P) % p for M in rep.mats]
    return Representation(p, mats, rep.group), P


# ---------------------------------------------------------------------------
# irreducibility (Norton criterion) and chop


def _random_algebra_element(rep, rng):
    """Short random sum of random words in the generator matrices."""
    p, d = rep.p, rep.d
    letters = rep.letter_matrices()
    theta = np.zeros((d, d), dtype=np.int64)
    for _ in range(int(rng.integers(2, 5))):
        M = np.eye(d, dtype=np.int64)
        for _ in range(int(rng.integers(1, 4))):
            M = (M @ letters[int(rng.integers(0, len(letters)))]) % p
        c = int(rng.integers(1, p)) if p > 2 else 1
        theta = (theta + c * M) % p
    return theta


def find_submodule(rep, rng, tries=50):
    """Norton test: returns a proper nonzero invariant row-space basis,
    or None if the module is certified irreducible."""
    p, d = rep.p, rep.d
    if d <= 1:
        return None
    mats_t = [M.T % p for M in rep.mats]
    for _ in range(tries):
        theta = _random_algebra_element(rep, rng)
        mp = minpoly(theta, p)
        for f in sorted(set(poly_factor(mp, p))):
            nu = np.zeros((d, d), dtype=np.int64)
            power = np.eye(d, dtype=np.int64)
            for c in f:
                nu = (nu + c * power) % p
                power = (power @ theta) % p
            null = fp_nullspace(nu.T, p)  # v with v @ nu == 0
            if null.shape[0] == 0:
                continue
            for v in null:
                W = spin(rep, [v])
                if 0 < W.shape[0] < d:
                    return W
            if null.shape[0] != len(f) - 1:
                # nullity must equal deg f for the certificate; every null
                # vector spun full, so nothing found here — try elsewhere
                continue
            # dual check on the transposed module
            nullT = fp_nullspace(nu, p)  # w with w @ nu.T == 0
            w = nullT[0]
            Wp = spin(rep, [w], mats=mats_t)
            if Wp.shape[0] < d:
                # annihilator of W' is a proper nonzero submodule
                ann = fp_nullspace(Wp, p)  # here rows of Wp are equations
                assert 0 < ann.shape[0] < d
                assert is_invariant(rep, ann)
                return ann
            return None  # certified irreducible
    raise RuntimeError("irreducibility test exceeded retry cap")


def is_irreducible(rep, seed=DEFAULT_SEED):
    if rep.d == 0:
        return False
    rng = np.random.default_rng(seed)
    return find_submodule(rep, rng) is None


def chop(rep, seed=DEFAULT_SEED):
    """Composition factors with multiplicity (list of simple Representations)."""
    rng = np.random.default_rng(seed)
    out = []
    stack = [rep]
    while stack:
        cur = stack.pop()
        if cur.d == 0:
            continue
        W = find_submodule(cur, rng)
        if W is None:
            out.append(cur)
            continue
        stack.append(sub_rep(cur, W))
        stack.append(quotient_rep(cur, W)[0])
    out.sort(key=lambda r: r.d)
    return out


# ---------------------------------------------------------------------------
# hom spaces and isomorphism


def hom_space(r1, r2):
    """Echelonized basis of {X : M1 @ X = X @ M2 for every generator}.

    Returned as a list of d1 x d2 matrices (row-major vec convention).
    """
    if r1.p != r2.p or r1.ngens != r2.ngens:
        raise ValueError("incompatible representations")
    p = r1.p
    d1, d2 = r1.d, r2.d
    eye1 = np.eye(d1, dtype=np.int64)
    eye2 = np.eye(d2, dtype=np.int64)
    blocks = []
    for M1, M2 in zip(r1.mats, r2.mats):
        blocks.append((fp_kron(M1, eye2, p) - fp_kron(eye1, M2.T, p)) % p)
    if not blocks:
        blocks = [np.zeros((1, d1 * d2), dtype=np.int64)]
    sol = fp_nullspace(np.vstack(blocks), p)
    return [v.reshape(d1, d2) for v in sol]


def is_isomorphic(r1, r2, seed=DEFAULT_SEED, tries=200):
    """An invertible intertwiner, or None.  Complete for simple modules."""
    if r1.d != r2.d or r1.p != r2.p:
        return None
    basis = hom_space(r1, r2)
    if not basis:
        return None
    p = r1.p
    for X in basis:
        if fp_rank(X, p) == r1.d:
            return X
    rng = np.random.default_rng(seed)
    for _ in range(tries):
        coeffs = rng.integers(0, p, size=len(basis))
        X = sum(int(c) * B for c, B in zip(coeffs, basis)) % p
        if fp_rank(X, p) == r1.d:
            return X
    return None


# ---------------------------------------------------------------------------
# the catalog of simple modules


@dataclass
class SimpleEntry:
    rep: Representation
    k: int          # dimension of the endomorphism field over F_p
    r: int          # multiplicity: dim / k
    index: int

    @property
    def d(self):
        return self.rep.d


class SimpleCatalog:
    def __init__(self, entries):
        self.entries = entries

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def dims(self):
        return sorted(e.d for e in self.entries)

    def find(self, rep, seed=DEFAULT_SEED):
        for e in self.entries:
            if is_isomorphic(e.rep, rep, seed) is not None:
                return e
        return None


def classify_simples(H, p, seed=DEFAULT_SEED):
    """Catalog of simple modules reachable from the permutation module by
    tensor-and-chop closure.  The trivial module comes first."""
    simples = [trivial_module(p, len(H.images), H)]
    todo = chop(natural_perm_module(H, p), seed)
    processed = set()
    while True:
        for f in todo:
            if all(is_isomorphic(s, f, seed) is None for s in simples):
                simples.append(f)
        simples.sort(key=lambda r: r.d)
        todo = []
        for i in range(len(simples)):
            for j in range(i, len(simples)):
                pair = (id(simples[i]), id(simples[j]))
                if pair in processed:
                    continue
                processed.add(pair)
                for f in chop(tensor(simples[i], simples[j]), seed):
                    if all(is_isomorphic(s, f, seed) is None
                           for s in simples + todo):
                        todo.append(f)
        if not todo:
            break
    entries = []
    for idx, rep in enumerate(simples):
        k = len(hom_space(rep, rep))
        if rep.d % k:
            raise RuntimeError("endomorphism degree does not divide dim")
        entries.append(SimpleEntry(rep, k, rep.d // k, idx))
    return SimpleCatalog(entries)


# ---------------------------------------------------------------------------
# radical, homogeneous quotient, regular module


def radical(rep, catalog):
    """Intersection of the kernels of all maps onto simple modules."""
    p = rep.p
    eqs = []
    for entry in catalog:
        for phi in hom_space(rep, entry.rep):
            eqs.append(phi.T)  # rows of phi.T are the coordinate functionals
    if not eqs:
        return np.eye(rep.d, dtype=np.int64)
    A = np.vstack(eqs)  # (sum dims) x d; kernel vectors v: A @ v = 0
    return fp_nullspace(A, p)


def homogeneous_quotient(rep, V, complement=None):
    """Quotient of rep by the smallest submodule with V-homogeneous quotient.

    Returns (quotient Representation, projection matrix d x q).
    """
    p = rep.p
    homs = hom_space(rep, V)
    if not homs:
        zero = Representation(p, [np.zeros((0, 0), dtype=np.int64)] * rep.ngens,
                              rep.group)
        return zero, np.zeros((rep.d, 0), dtype=np.int64)
    A = np.vstack([phi.T for phi in homs])
    kernel = fp_nullspace(A, p)
    return quotient_rep(rep, kernel, complement)


def regular_module(H, p, cap=1000):
    """The group algebra as a module: g acts by right multiplication on the
    normal-form-indexed basis."""
    if H.order > cap:
        raise ValueError("group order %d exceeds regular-module cap %d"
                         % (H.order, cap))
    nfs = H.rws.normal_forms()
    index = {w: i for i, w in enumerate(nfs)}
    mats = []
    for g in range(len(H.images)):
        M = np.zeros((H.order, H.order), dtype=np.int64)
        for w, i in index.items():
            M[i, index[H.rws.reduce(w + (2 * g,))]] = 1
        mats.append(M)
    return Representation(p, mats, H)


# ---------------------------------------------------------------------------
# cyclic generators of V^r


def diagonal_power(V, r):
    """V^r with block-diagonal action."""
    p, d = V.p, V.d
    mats = []
    for M in V.mats:
        big = np.zeros((r * d, r * d), dtype=np.int64)
        for i in range(r):
            big[i * d:(i + 1) * d, i * d:(i + 1) * d] = M
        mats.append(big)
    return Representation(p, mats, V.group)


def cyclic_generator(H, entry, seed=DEFAULT_SEED, regular_cap=1000):
    """A generator z of a module isomorphic to V^r.

    Returns (rep, z) where rep is V-homogeneous of dimension r*d and
    spin(rep, z) is the whole space.  The main route projects the
    identity element of the group algebra; the alternate route picks
    block components through a splitting-field decomposition.
    """
    V, r = entry.rep, entry.r
    if H.order <= regular_cap:
        R = regular_module(H, V.p, cap=regular_cap)
        Q, P = homogeneous_quotient(R, V)
        if Q.d != r * V.d:
            raise RuntimeError("homogeneous quotient has unexpected dimension")
        ident = np.zeros(R.d, dtype=np.int64)
        ident[H.rws.normal_forms().index(())] = 1
        z = (ident @ P) % V.p
    else:
        Q, z = splitting_field_generator(entry, seed)
    W = spin(Q, [z])
    if W.shape[0] != Q.d:
        raise RuntimeError("cyclic generator certificate failed")
    return Q, z


def splitting_field_generator(entry, seed=DEFAULT_SEED):
    """Choose a generator of V^r through the endomorphism field.

    V extended to its endomorphism field splits as a sum of k pairwise
    non-isomorphic simples of dimension r; picking r standard basis
    vectors whose images under a projection onto one summand stay
    independent gives a block vector generating V^r.
    """
    from .fields import Field
    V, r, k = entry.rep, entry.r, entry.k
    p, d = V.p, V.d
    VR = diagonal_power(V, r)
    if k == 1:
        z = np.zeros(r * d, dtype=np.int64)
        # independent choices: i-th standard basis vector in block i
        for i in range(r):
            z[i * d + (i % d)] = 1
        if spin(VR, [z]).shape[0] == r * d:
            return VR, z
        # fall through to the generic construction below with k = 1
    F = Field.extension(p, k, seed)
    # blow-up: V over F_{p^k} as an F_p module of dim d*k with the extra
    # scalar generator J; its invariant subspaces are the F-submodules
    # multiplication by the field generator, acting on row vectors
    J_small = F.mult_matrix(F.gen() if k > 1 else 1).T % p
    J = np.kron(np.eye(d, dtype=np.int64), J_small) % p
    blown = [np.kron(M, np.eye(k, dtype=np.int64)) % p for M in V.mats]
    ext = Representation(p, blown + [J], V.group)
    factors = chop(ext, seed)
    # a simple summand over F: F_p-dimension r*k
    U = None
    rng = np.random.default_rng(seed)
    # find an invariant subspace that is a simple F-submodule
    sub = find_submodule(ext, rng) if len(factors) > 1 else None
    if sub is None:
        # ext is already simple over F (k == 1 and absolutely simple)
        basisU = np.eye(d * k, dtype=np.int64)
    else:
        # refine to a simple one by chopping the subspace
        basisU = sub
        while True:
            rep_sub = sub_rep(ext, basisU)
            inner = find_submodule(rep_sub, rng)
            if inner is None:
                break
            basisU = (inner @ basisU) % p
    # projection onto U: any nonzero F-linear module map ext -> U
    repU = sub_rep(ext, basisU)
    maps = hom_space(ext, repU)
    phi = next(X for X in maps if np.any(X))
    # embed the standard basis of V and greedily pick r of them whose
    # phi-images are F-independent (J-closed span grows by k each time)
    acc = Echelon(repU.d, p)
    chosen = []
    for j in range(d):
        e = np.zeros(d * k, dtype=np.int64)
        e[j * k] = 1
        img = (e @ phi) % p
        closed = spin(repU.p, [img], mats=[_restrict(J, basisU, p)])
        before = acc.rank
        for row in closed:
            acc.add(row)
        if acc.rank > before:
            chosen.append(j)
        if len(chosen) == r:
            break
    if len(chosen) < r:
        raise RuntimeError("failed to pick independent block components")
    z = np.zeros(r * d, dtype=np.int64)
    for blk, j in enumerate(chosen):
        z[blk * d + j] = 1
    return diagonal_power(V, r), z


def _restrict(M, basis, p):
    """Matrix of the action of M on the row space of `basis`."""
    from .fields import fp_solve
    img = (basis @ M) % p
    k = basis.shape[0]
    X = np.zeros((k, k), dtype=np.int64)
    for i in range(k):
        x = fp_solve(basis.T, img[i], p)
        if x is None:
            raise ValueError("row space not invariant")
        X[i] = x
    return X
