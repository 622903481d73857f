"""
'holonomy/rings/linalg.py': Exact matrices, nullspaces and fast polynomial products.

Rational nullspaces use fraction-free (Bareiss) elimination; prime-field
nullspaces use a reduced row echelon form computed with numpy int64 arithmetic
for primes below 2^31 and Python integers above.
"""
import logging
from typing import List, Optional, Sequence

import numpy as np
from sympy.polys.domains import QQ

from holonomy.exceptions import DomainMismatchError
from holonomy.rings.fields import characteristic, integer_content, to_domain, to_int

logger = logging.getLogger("holonomy.rings.linalg")

NUMPY_PRIME_LIMIT = 2 ** 31


class ExactMatrix:
    """Rectangular matrix over QQ or a prime field."""

    __slots__ = ("rows", "ncols", "domain")

    def __init__(self, rows: Sequence[Sequence], domain=QQ, ncols: Optional[int] = None):
        rows = [list(r) for r in rows]
        width = ncols if ncols is not None else (len(rows[0]) if rows else 0)
        if any(len(r) != width for r in rows):
            raise DomainMismatchError("[ExactMatrix] rows have different lengths")
        self.rows = [[to_domain(x, domain) for x in r] for r in rows]
        self.ncols = width
        self.domain = domain

    @property
    def shape(self):
        return len(self.rows), self.ncols

    def matvec(self, vector: Sequence) -> List:
        dom = self.domain
        vector = [to_domain(v, dom) for v in vector]
        out = []
        for row in self.rows:
            acc = dom.zero
            for a, b in zip(row, vector):
                if a and b:
                    acc += a * b
            out.append(acc)
        return out

    def nullspace(self) -> List[List]:
        return nullspace(self)

    def rank(self) -> int:
        return self.ncols - len(self.nullspace())


def _normalize_first(vector: List, domain) -> List:
    for x in vector:
        if x:
            inv = domain.one / x
            return [v * inv for v in vector]
    return vector


def _rational_nullspace(rows: List[List], ncols: int) -> List[List]:
    """Fraction-free elimination with leftmost-column, smallest-row pivoting."""
    work = []
    for row in rows:
        if not any(row):
            continue
        den, _ = integer_content(row)
        work.append([int(x.numerator) * (den // int(x.denominator)) for x in row])
    m = len(work)
    prev = 1
    r = 0
    pivots: List[int] = []
    for c in range(ncols):
        if r == m:
            break
        pivot = next((i for i in range(r, m) if work[i][c]), None)
        if pivot is None:
            continue
        work[r], work[pivot] = work[pivot], work[r]
        prow = work[r]
        pv = prow[c]
        for i in range(r + 1, m):
            row = work[i]
            a = row[c]
            if a:
                for j in range(c + 1, ncols):
                    row[j] = (pv * row[j] - a * prow[j]) // prev
            else:
                for j in range(c + 1, ncols):
                    if row[j]:
                        row[j] = (pv * row[j]) // prev
            row[c] = 0
        prev = pv
        pivots.append(c)
        r += 1
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    for f in free:
        x = [QQ(0)] * ncols
        x[f] = QQ(1)
        for i in range(len(pivots) - 1, -1, -1):
            c = pivots[i]
            row = work[i]
            acc = QQ(0)
            for j in range(c + 1, ncols):
                if row[j] and x[j]:
                    acc += row[j] * x[j]
            x[c] = -acc / row[c]
        basis.append(_normalize_first(x, QQ))
    return basis


def rref_mod_p(matrix: np.ndarray, p: int):
    """
    Reduced row echelon form modulo p.

    Args:
        matrix (np.ndarray): Integer matrix (any integer dtype).
        p (int): Prime modulus.

    Returns:
        Tuple of the reduced matrix and the list of pivot columns.
    """
    if p >= NUMPY_PRIME_LIMIT:
        return _rref_mod_p_python([[int(x) for x in row] for row in matrix], p)
    a = np.array(matrix, dtype=np.int64) % p
    m, n = a.shape
    r = 0
    pivots: List[int] = []
    for c in range(n):
        if r == m:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        inv = pow(int(a[r, c]), -1, p)
        a[r, c:] = (a[r, c:] * inv) % p
        f = a[:, c].copy()
        f[r] = 0
        rows = np.flatnonzero(f)
        if rows.size:
            a[rows, c:] = (a[rows, c:] - (f[rows, None] * a[r, c:]) % p) % p
        pivots.append(c)
        r += 1
    return a[:r], pivots


def _rref_mod_p_python(rows: List[List[int]], p: int):
    a = [[x % p for x in row] for row in rows]
    m = len(a)
    n = len(a[0]) if a else 0
    r = 0
    pivots: List[int] = []
    for c in range(n):
        if r == m:
            break
        pivot = next((i for i in range(r, m) if a[i][c]), None)
        if pivot is None:
            continue
        a[r], a[pivot] = a[pivot], a[r]
        inv = pow(a[r][c], -1, p)
        a[r] = [x * inv % p for x in a[r]]
        for i in range(m):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return a[:r], pivots


def nullspace_mod_p(matrix, p: int) -> List[List[int]]:
    """
    Right nullspace basis modulo p, each vector scaled so its first nonzero entry is 1.

    Args:
        matrix: Integer matrix (numpy array or nested lists) already reduced or not.
        p (int): Prime modulus.

    Returns:
        List[List[int]]: Basis vectors with entries in [0, p).
    """
    matrix = np.asarray(matrix, dtype=object if p >= NUMPY_PRIME_LIMIT else np.int64)
    n = matrix.shape[1]
    reduced, pivots = rref_mod_p(matrix, p)
    pivot_set = set(pivots)
    basis = []
    for f in (c for c in range(n) if c not in pivot_set):
        v = [0] * n
        v[f] = 1
        for i, c in enumerate(pivots):
            entry = int(reduced[i][f])
            if entry:
                v[c] = (-entry) % p
        first = next(x for x in v if x)
        inv = pow(first, -1, p)
        basis.append([x * inv % p for x in v])
    logger.debug(f"[nullspace_mod_p] {matrix.shape} mod {p}: rank {len(pivots)}, nullity {len(basis)}")
    return basis


def nullspace(matrix: ExactMatrix) -> List[List]:
    """
    Basis of the right nullspace of an exact matrix.

    Over QQ the elimination is fraction free; over F_p it is a plain RREF.
    Vectors are scaled so that their first nonzero entry is 1.
    """
    p = characteristic(matrix.domain)
    if p is None:
        return _rational_nullspace(matrix.rows, matrix.ncols)
    ints = [[to_int(x, matrix.domain) for x in row] for row in matrix.rows]
    if not ints:
        return [[matrix.domain(1 if i == j else 0) for i in range(matrix.ncols)] for j in range(matrix.ncols)]
    return [[matrix.domain(x) for x in v] for v in nullspace_mod_p(ints, p)]


def polymul_mod(a: np.ndarray, b: np.ndarray, p: int, n: int) -> np.ndarray:
    """
    First n coefficients of a*b modulo p using exact int64 convolutions.

    Operands are split into 16-bit limbs whenever a direct convolution could overflow.
    """
    a = np.asarray(a[:n], dtype=np.int64) % p
    b = np.asarray(b[:n], dtype=np.int64) % p
    if a.size == 0 or b.size == 0:
        return np.zeros(n, dtype=np.int64)
    length = min(a.size, b.size)
    if (p - 1) ** 2 * length < 2 ** 62:
        out = np.convolve(a, b)[:n] % p
    else:
        a1, a0 = a >> 16, a & 0xFFFF
        b1, b0 = b >> 16, b & 0xFFFF
        c2 = np.convolve(a1, b1)[:n] % p
        c1 = (np.convolve(a1, b0)[:n] + np.convolve(a0, b1)[:n]) % p
        c0 = np.convolve(a0, b0)[:n] % p
        s16 = (1 << 16) % p
        s32 = (1 << 32) % p
        out = ((c2 * s32) % p + (c1 * s16) % p + c0) % p
    if out.size < n:
        out = np.concatenate([out, np.zeros(n - out.size, dtype=np.int64)])
    return out


def kronecker_mul(a: Sequence[int], b: Sequence[int], n: int) -> List[int]:
    """
    First n coefficients of the product of two nonnegative integer polynomials
    by Kronecker substitution into one big integer.
    """
    a = list(a[:n])
    b = list(b[:n])
    if not a or not b:
        return [0] * n
    bound = max(max(a), 1) * max(max(b), 1) * min(len(a), len(b))
    width = (bound.bit_length() + 8) // 8
    pa = int.from_bytes(b"".join(x.to_bytes(width, "little") for x in a), "little")
    pb = int.from_bytes(b"".join(x.to_bytes(width, "little") for x in b), "little")
    raw = (pa * pb).to_bytes(width * (len(a) + len(b)), "little")
    out = [int.from_bytes(raw[i * width:(i + 1) * width], "little") for i in range(min(n, len(a) + len(b) - 1))]
    return out + [0] * (n - len(out))
