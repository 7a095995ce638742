"""Linear algebra over F_p and small extension fields F_{p^k}.

The fast path is plain numpy integer arrays reduced mod p; these back all
of the heavy machinery (module spinning, cohomology equation systems,
hybrid group arithmetic).  The FieldMatrix class wraps both the prime
field and extension fields behind one interface for the places where a
splitting field is genuinely needed.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

DEFAULT_SEED = 0x5EED


def is_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


# ---------------------------------------------------------------------------
# numpy helpers over F_p


def fp_array(data, p):
    return np.asarray(data, dtype=np.int64) % p


def fp_rref(A, p):
    """Reduced row echelon form of A mod p -> (R, rank, pivots)."""
    R = fp_array(A, p).copy()
    m, n = R.shape
    pivots = []
    r = 0
    for c in range(n):
        if r >= m:
            break
        nz = np.nonzero(R[r:, c])[0]
        if len(nz) == 0:
            continue
        i = r + nz[0]
        if i != r:
            R[[r, i]] = R[[i, r]]
        inv = pow(int(R[r, c]), -1, p)
        R[r] = (R[r] * inv) % p
        col = R[:, c].copy()
        col[r] = 0
        R = (R - np.outer(col, R[r])) % p
        pivots.append(c)
        r += 1
    return R, r, tuple(pivots)


def fp_rank(A, p):
    return fp_rref(A, p)[1]


def fp_nullspace(A, p):
    """Echelonized basis of the right nullspace of A, as rows."""
    R, rank, pivots = fp_rref(A, p)
    n = A.shape[1] if A.ndim == 2 else len(A)
    free = [c for c in range(n) if c not in pivots]
    basis = np.zeros((len(free), n), dtype=np.int64)
    for k, c in enumerate(free):
        basis[k, c] = 1
        for i, pc in enumerate(pivots):
            basis[k, pc] = (-R[i, c]) % p
    return basis


def fp_solve(A, b, p):
    """One solution x of A x = b over F_p, or None."""
    A = fp_array(A, p)
    b = fp_array(b, p).reshape(-1)
    if A.shape[0] != b.shape[0]:
        raise ValueError("dimension mismatch: %d rows vs b of length %d"
                         % (A.shape[0], b.shape[0]))
    aug = np.hstack([A, b[:, None]])
    R, rank, pivots = fp_rref(aug, p)
    if A.shape[1] in pivots:
        return None
    x = np.zeros(A.shape[1], dtype=np.int64)
    for i, c in enumerate(pivots):
        x[c] = R[i, -1]
    return x


def fp_inv_matrix(M, p):
    M = fp_array(M, p)
    n = M.shape[0]
    aug = np.hstack([M, np.eye(n, dtype=np.int64)])
    R, rank, pivots = fp_rref(aug, p)
    if pivots[:n] != tuple(range(n)):
        raise ValueError("matrix not invertible mod %d" % p)
    return R[:, n:]


def fp_kron(A, B, p):
    return np.kron(fp_array(A, p), fp_array(B, p)) % p


def fp_matmul(A, B, p):
    return (fp_array(A, p) @ fp_array(B, p)) % p


def fp_in_rowspace(rows, v, p):
    """Is v in the span of `rows`?  rows may be empty."""
    if len(rows) == 0:
        return not np.any(np.asarray(v) % p)
    M = np.vstack([rows, np.asarray(v).reshape(1, -1)])
    return fp_rank(M, p) == fp_rank(np.asarray(rows), p)


class Echelon:
    """Incremental row echelon over F_p; memory-friendly for big systems."""

    def __init__(self, ncols, p):
        self.ncols = ncols
        self.p = p
        self.rows = {}  # pivot column -> normalized row

    def reduce(self, v):
        p = self.p
        v = np.asarray(v, dtype=np.int64) % p
        for c, row in self.rows.items():
            if v[c]:
                v = (v - v[c] * row) % p
        return v

    def add(self, v):
        """Insert v; return True if it increased the rank."""
        v = self.reduce(v)
        nz = np.nonzero(v)[0]
        if len(nz) == 0:
            return False
        c = int(nz[0])
        v = (v * pow(int(v[c]), -1, self.p)) % self.p
        # keep rows fully reduced against each other
        for pc, row in self.rows.items():
            if row[c]:
                self.rows[pc] = (row - row[c] * v) % self.p
        self.rows[c] = v
        return True

    @property
    def rank(self):
        return len(self.rows)

    def basis(self):
        return np.array([self.rows[c] for c in sorted(self.rows)],
                        dtype=np.int64).reshape(len(self.rows), self.ncols)

    def contains(self, v):
        return not np.any(self.reduce(v))

    def nullspace(self):
        """Nullspace of the accumulated system (rows as equations)."""
        pivots = sorted(self.rows)
        free = [c for c in range(self.ncols) if c not in self.rows]
        basis = np.zeros((len(free), self.ncols), dtype=np.int64)
        for k, c in enumerate(free):
            basis[k, c] = 1
            for pc in pivots:
                basis[k, pc] = (-self.rows[pc][c]) % self.p
        return basis


# ---------------------------------------------------------------------------
# polynomials over F_p (dense little-endian coefficient tuples)


def poly_trim(c):
    c = tuple(c)
    while c and c[-1] == 0:
        c = c[:-1]
    return c


def poly_add(a, b, p):
    n = max(len(a), len(b))
    a = a + (0,) * (n - len(a))
    b = b + (0,) * (n - len(b))
    return poly_trim((x + y) % p for x, y in zip(a, b))


def poly_mul(a, b, p):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return poly_trim(out)


def poly_divmod(a, b, p):
    a = list(a)
    b = poly_trim(b)
    if not b:
        raise ZeroDivisionError
    inv = pow(b[-1], -1, p)
    q = [0] * max(0, len(a) - len(b) + 1)
    for i in range(len(a) - len(b), -1, -1):
        c = (a[i + len(b) - 1] * inv) % p
        if c:
            q[i] = c
            for j, y in enumerate(b):
                a[i + j] = (a[i + j] - c * y) % p
    return poly_trim(q), poly_trim(a)


def poly_mod(a, b, p):
    return poly_divmod(a, b, p)[1]


def poly_pow_mod(a, e, mod, p):
    out = (1,)
    a = poly_mod(a, mod, p)
    while e:
        if e & 1:
            out = poly_mod(poly_mul(out, a, p), mod, p)
        a = poly_mod(poly_mul(a, a, p), mod, p)
        e >>= 1
    return out


_ENUM_CAP = 500000


@lru_cache(maxsize=None)
def irreducibles_of_degree(p, deg):
    """All monic irreducible polynomials of given degree over F_p."""
    if p ** deg > _ENUM_CAP:
        raise ValueError("irreducible enumeration cap exceeded: %d^%d" % (p, deg))
    lower = []
    for d in range(1, deg // 2 + 1):
        lower.extend(irreducibles_of_degree(p, d))
    out = []
    for code in range(p ** deg):
        coeffs = []
        c = code
        for _ in range(deg):
            coeffs.append(c % p)
            c //= p
        poly = tuple(coeffs) + (1,)
        if deg > 1 and poly[0] == 0:
            continue
        if all(poly_mod(poly, q, p) for q in lower):
            out.append(poly)
    return tuple(out)


def poly_is_irreducible(poly, p):
    poly = poly_trim(poly)
    deg = len(poly) - 1
    if deg <= 0:
        return False
    if deg == 1:
        return True
    for d in range(1, deg // 2 + 1):
        for q in irreducibles_of_degree(p, d):
            if not poly_mod(poly, q, p):
                return False
    return True


def poly_factor(poly, p):
    """Irreducible factors with multiplicity, ascending degree."""
    poly = poly_trim(poly)
    if len(poly) < 2:
        return []
    # make monic
    inv = pow(poly[-1], -1, p)
    poly = tuple((c * inv) % p for c in poly)
    factors = []
    deg = 1
    while len(poly) > 1:
        if deg > len(poly) - 1:
            raise RuntimeError("factorization failed")  # pragma: no cover
        hit = False
        for q in irreducibles_of_degree(p, deg):
            quo, rem = poly_divmod(poly, q, p)
            if not rem:
                factors.append(q)
                poly = quo
                hit = True
                break
        if not hit:
            deg += 1
    return factors


def irreducible_poly(p, k, seed=DEFAULT_SEED, tries=200):
    """Monic irreducible of degree k over F_p; seeded search, then enumeration."""
    if k == 1:
        return (0, 1)
    rng = np.random.default_rng(seed)
    for _ in range(tries):
        coeffs = tuple(int(c) for c in rng.integers(0, p, size=k)) + (1,)
        if poly_is_irreducible(coeffs, p):
            return coeffs
    return irreducibles_of_degree(p, k)[0]


def minpoly(M, p):
    """Minimal polynomial of a square matrix over F_p (little-endian tuple)."""
    M = fp_array(M, p)
    n = M.shape[0]
    powers = [np.eye(n, dtype=np.int64).reshape(-1)]
    cur = np.eye(n, dtype=np.int64)
    while True:
        cur = (cur @ M) % p
        A = np.array(powers).T
        x = fp_solve(A, cur.reshape(-1), p)
        if x is not None:
            return tuple((-int(c)) % p for c in x) + (1,)
        powers.append(cur.reshape(-1).copy())


# ---------------------------------------------------------------------------
# field descriptors and scalars


@dataclass(frozen=True)
class Field:
    """Descriptor for F_p (k=1) or F_{p^k} with a fixed modulus polynomial."""
    p: int
    k: int = 1
    modulus: tuple = ()

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError("%d is not prime" % self.p)
        if self.k < 1:
            raise ValueError("extension degree must be >= 1")
        if self.k > 1:
            if len(self.modulus) != self.k + 1:
                raise ValueError("modulus degree mismatch")
            if not poly_is_irreducible(self.modulus, self.p):
                raise ValueError("modulus polynomial is reducible")

    @classmethod
    def prime(cls, p):
        return cls(p)

    @classmethod
    def extension(cls, p, k, seed=DEFAULT_SEED):
        if k == 1:
            return cls(p)
        return cls(p, k, irreducible_poly(p, k, seed))

    @property
    def order(self):
        return self.p ** self.k

    # scalar representation: int for k == 1, little-endian tuple otherwise
    def zero(self):
        return 0 if self.k == 1 else ()

    def one(self):
        return 1 if self.k == 1 else (1,)

    def embed(self, n):
        n = n % self.p
        if self.k == 1:
            return n
        return (n,) if n else ()

    def gen(self):
        """Residue of x, a generating scalar when k > 1."""
        if self.k == 1:
            raise ValueError("prime field has no extension generator")
        return (0, 1)

    def add(self, a, b):
        if self.k == 1:
            return (a + b) % self.p
        return poly_add(a, b, self.p)

    def neg(self, a):
        if self.k == 1:
            return (-a) % self.p
        return poly_trim((-c) % self.p for c in a)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if self.k == 1:
            return (a * b) % self.p
        return poly_mod(poly_mul(a, b, self.p), self.modulus, self.p)

    def inv(self, a):
        if self.k == 1:
            return pow(a, -1, self.p)
        if not a:
            raise ZeroDivisionError
        return poly_pow_mod(a, self.order - 2, self.modulus, self.p)

    def is_zero(self, a):
        return a == 0 if self.k == 1 else len(poly_trim(a)) == 0

    def mult_matrix(self, a):
        """k x k matrix over F_p of multiplication by a on basis 1, x, ..."""
        cols = []
        for i in range(self.k):
            prod = self.mul(a, (0,) * i + (1,))
            prod = tuple(prod) + (0,) * (self.k - len(prod))
            cols.append(prod)
        return np.array(cols, dtype=np.int64).T % self.p


@dataclass(frozen=True)
class FpScalar:
    value: int
    p: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError("%d is not prime" % self.p)
        object.__setattr__(self, "value", self.value % self.p)

    def _check(self, other):
        if self.p != other.p:
            raise ValueError("modulus mismatch")

    def __add__(self, other):
        self._check(other)
        return FpScalar(self.value + other.value, self.p)

    def __sub__(self, other):
        self._check(other)
        return FpScalar(self.value - other.value, self.p)

    def __mul__(self, other):
        self._check(other)
        return FpScalar(self.value * other.value, self.p)

    def inverse(self):
        return FpScalar(pow(self.value, -1, self.p), self.p)


@dataclass(frozen=True)
class ExtScalar:
    coeffs: tuple
    field: Field

    def __post_init__(self):
        object.__setattr__(self, "coeffs", poly_trim(
            c % self.field.p for c in self.coeffs))

    def _check(self, other):
        if self.field != other.field:
            raise ValueError("field mismatch")

    def __add__(self, other):
        self._check(other)
        return ExtScalar(self.field.add(self.coeffs, other.coeffs), self.field)

    def __sub__(self, other):
        self._check(other)
        return ExtScalar(self.field.sub(self.coeffs, other.coeffs), self.field)

    def __mul__(self, other):
        self._check(other)
        return ExtScalar(self.field.mul(self.coeffs, other.coeffs), self.field)

    def inverse(self):
        return ExtScalar(self.field.inv(self.coeffs), self.field)

    def is_zero(self):
        return not self.coeffs


# ---------------------------------------------------------------------------
# dense matrices over a Field


class FieldMatrix:
    """Dense matrix over F_p or F_{p^k}.

    Entries are stored as numpy ints for prime fields and as coefficient
    tuples otherwise.  Immutable by convention.
    """

    def __init__(self, field, rows, cols, data):
        self.field = field
        self.rows = rows
        self.cols = cols
        if field.k == 1:
            arr = fp_array(data, field.p).reshape(rows, cols)
            arr.setflags(write=False)
            self.data = arr
        else:
            flat = list(data)
            if len(flat) != rows * cols:
                raise ValueError("entry count mismatch")
            self.data = tuple(tuple(poly_trim(e) for e in flat[r * cols:(r + 1) * cols])
                              for r in range(rows))

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_rows(cls, field, rowdata):
        rowdata = list(rowdata)
        rows = len(rowdata)
        cols = len(rowdata[0]) if rows else 0
        flat = [e for row in rowdata for e in row]
        return cls(field, rows, cols, flat)

    @classmethod
    def from_array(cls, arr, p):
        arr = np.asarray(arr)
        return cls(Field(p), arr.shape[0], arr.shape[1], arr)

    @classmethod
    def identity(cls, field, n):
        one, zero = field.one(), field.zero()
        return cls(field, n, n, [one if i == j else zero
                                 for i in range(n) for j in range(n)])

    @classmethod
    def zeros(cls, field, rows, cols):
        z = field.zero()
        return cls(field, rows, cols, [z] * (rows * cols))

    # -- access -------------------------------------------------------------

    def __getitem__(self, rc):
        r, c = rc
        if self.field.k == 1:
            return int(self.data[r, c])
        return self.data[r][c]

    def row(self, r):
        if self.field.k == 1:
            return list(self.data[r])
        return list(self.data[r])

    def entries(self):
        for r in range(self.rows):
            for c in range(self.cols):
                yield self[r, c]

    def __eq__(self, other):
        if not isinstance(other, FieldMatrix):
            return NotImplemented
        if (self.field, self.rows, self.cols) != (other.field, other.rows, other.cols):
            return False
        if self.field.k == 1:
            return bool(np.array_equal(self.data, other.data))
        return self.data == other.data

    def __repr__(self):
        return "FieldMatrix(%dx%d over GF(%d^%d))" % (
            self.rows, self.cols, self.field.p, self.field.k)

    def _check_field(self, other):
        if self.field != other.field:
            raise ValueError("field mismatch")

    # -- arithmetic ---------------------------------------------------------

    def add(self, other):
        self._check_field(other)
        if self.field.k == 1:
            return FieldMatrix(self.field, self.rows, self.cols,
                               (self.data + other.data) % self.field.p)
        F = self.field
        flat = [F.add(a, b) for a, b in zip(self.entries(), other.entries())]
        return FieldMatrix(F, self.rows, self.cols, flat)

    def mul(self, other):
        self._check_field(other)
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        F = self.field
        if F.k == 1:
            return FieldMatrix(F, self.rows, other.cols,
                               (self.data @ other.data) % F.p)
        out = []
        for r in range(self.rows):
            for c in range(other.cols):
                acc = F.zero()
                for t in range(self.cols):
                    acc = F.add(acc, F.mul(self[r, t], other[t, c]))
                out.append(acc)
        return FieldMatrix(F, self.rows, other.cols, out)

    def scale(self, scalar):
        F = self.field
        return FieldMatrix(F, self.rows, self.cols,
                           [F.mul(scalar, e) for e in self.entries()])

    def transpose(self):
        F = self.field
        return FieldMatrix(F, self.cols, self.rows,
                           [self[r, c] for c in range(self.cols)
                            for r in range(self.rows)])

    def kron(self, other):
        self._check_field(other)
        F = self.field
        if F.k == 1:
            return FieldMatrix(F, self.rows * other.rows, self.cols * other.cols,
                               fp_kron(self.data, other.data, F.p))
        out = []
        for i in range(self.rows):
            for k in range(other.rows):
                for j in range(self.cols):
                    for l in range(other.cols):
                        out.append(F.mul(self[i, j], other[k, l]))
        return FieldMatrix(F, self.rows * other.rows, self.cols * other.cols, out)

    # -- elimination --------------------------------------------------------

    def rref(self):
        """-> (R, rank, pivots)."""
        F = self.field
        if F.k == 1:
            R, rank, pivots = fp_rref(self.data, F.p)
            return FieldMatrix(F, self.rows, self.cols, R), rank, pivots
        M = [list(row) for row in self.data]
        pivots = []
        r = 0
        for c in range(self.cols):
            if r >= self.rows:
                break
            pr = next((i for i in range(r, self.rows) if not F.is_zero(M[i][c])), None)
            if pr is None:
                continue
            M[r], M[pr] = M[pr], M[r]
            inv = F.inv(M[r][c])
            M[r] = [F.mul(inv, e) for e in M[r]]
            for i in range(self.rows):
                if i != r and not F.is_zero(M[i][c]):
                    f = M[i][c]
                    M[i] = [F.sub(a, F.mul(f, b)) for a, b in zip(M[i], M[r])]
            pivots.append(c)
            r += 1
        flat = [e for row in M for e in row]
        return FieldMatrix(F, self.rows, self.cols, flat), r, tuple(pivots)

    def rank(self):
        return self.rref()[1]

    def nullspace(self):
        """Echelonized basis of the right nullspace, as a FieldMatrix of rows."""
        F = self.field
        if F.k == 1:
            basis = fp_nullspace(self.data, F.p)
            return FieldMatrix(F, basis.shape[0], self.cols, basis)
        R, rank, pivots = self.rref()
        free = [c for c in range(self.cols) if c not in pivots]
        rows = []
        for c in free:
            v = [F.zero()] * self.cols
            v[c] = F.one()
            for i, pc in enumerate(pivots):
                v[pc] = F.neg(R[i, c])
            rows.append(v)
        if not rows:
            return FieldMatrix(F, 0, self.cols, [])
        return FieldMatrix.from_rows(F, rows)

    def solve(self, b):
        """One x with self @ x = b (b a sequence), or None."""
        F = self.field
        b = list(b)
        if len(b) != self.rows:
            raise ValueError("dimension mismatch: %d rows, b of length %d"
                             % (self.rows, len(b)))
        if F.k == 1:
            x = fp_solve(self.data, b, F.p)
            return None if x is None else list(int(v) for v in x)
        aug = FieldMatrix(F, self.rows, self.cols + 1,
                          [e for r in range(self.rows)
                           for e in list(self.data[r]) + [poly_trim(b[r])]])
        R, rank, pivots = aug.rref()
        if self.cols in pivots:
            return None
        x = [F.zero()] * self.cols
        for i, c in enumerate(pivots):
            x[c] = R[i, self.cols]
        return x

    # -- field extension ----------------------------------------------------

    def extend_scalars(self, k, seed=DEFAULT_SEED):
        """Embed a prime-field matrix into F_{p^k}."""
        if self.field.k != 1:
            raise ValueError("matrix is already over an extension field")
        if k == 1:
            return self
        F = Field.extension(self.field.p, k, seed)
        flat = [F.embed(int(e)) for e in self.data.reshape(-1)]
        return FieldMatrix(F, self.rows, self.cols, flat)

    def blowup(self):
        """Expand each F_{p^k} entry to its k x k F_p multiplication matrix."""
        F = self.field
        if F.k == 1:
            return self
        k = F.k
        out = np.zeros((self.rows * k, self.cols * k), dtype=np.int64)
        for r in range(self.rows):
            for c in range(self.cols):
                out[r * k:(r + 1) * k, c * k:(c + 1) * k] = F.mult_matrix(self[r, c])
        return FieldMatrix(Field(F.p), self.rows * k, self.cols * k, out)


def rref(M):
    return M.rref()


def nullspace(M):
    return M.nullspace()


def solve(A, b):
    return A.solve(b)


def kronecker(A, B):
    return A.kron(B)


def extend_scalars(M, k, seed=DEFAULT_SEED):
    return M.extend_scalars(k, seed)
