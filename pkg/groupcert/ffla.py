"""
Exact linear algebra over prime fields F_q and over Z/mZ.

Vectors in (F_q^n)^p carry their block length n so that permutations of
{1..p} act on them block-wise from the right:
    (v_1, ..., v_p)^s = (v_s(1), ..., v_s(p))
"""
import logging
from dataclasses import dataclass
from itertools import product
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
from sympy import factorint, isprime, mod_inverse

from .exceptions import NoSuchVectorError, ParameterError
from .perms import alternating_generators

logger = logging.getLogger(__name__)


def require_prime(q: int, label: str = 'q'):
    if not isinstance(q, (int, np.integer)) or not isprime(int(q)):
        raise ParameterError(f"{label}={q} is not prime")


class FqScalar(int):
    """Residue modulo a prime q."""

    def __new__(cls, value: int, q: int):
        obj = super().__new__(cls, int(value) % q)
        obj.q = q
        return obj

    def _coerce(self, other) -> int:
        if isinstance(other, FqScalar) and other.q != self.q:
            raise ParameterError(f"field mismatch: F_{self.q} vs F_{other.q}")
        return int(other)

    def __add__(self, other):
        return FqScalar(int(self) + self._coerce(other), self.q)

    __radd__ = __add__

    def __sub__(self, other):
        return FqScalar(int(self) - self._coerce(other), self.q)

    def __rsub__(self, other):
        return FqScalar(self._coerce(other) - int(self), self.q)

    def __mul__(self, other):
        return FqScalar(int(self) * self._coerce(other), self.q)

    __rmul__ = __mul__

    def __neg__(self):
        return FqScalar(-int(self), self.q)

    def inverse(self) -> 'FqScalar':
        if int(self) == 0:
            raise ParameterError("zero has no inverse")
        return FqScalar(mod_inverse(int(self), self.q), self.q)

    def __truediv__(self, other):
        return self * FqScalar(self._coerce(other), self.q).inverse()

    def __repr__(self):
        return f"{int(self)} (mod {self.q})"


@dataclass(frozen=True, order=True)
class FqVector:
    coords: Tuple[int, ...]
    q: int
    block: int = 0

    @classmethod
    def of(cls, coords: Iterable[int], q: int, block: int = 0) -> 'FqVector':
        coords = tuple(int(c) % q for c in coords)
        if block and len(coords) % block:
            raise ParameterError(f"length {len(coords)} is not a multiple of the block length {block}")
        return cls(coords, q, block)

    @classmethod
    def zero(cls, length: int, q: int, block: int = 0) -> 'FqVector':
        return cls((0,) * length, q, block)

    @classmethod
    def from_blocks(cls, blocks: Sequence[Sequence[int]], q: int) -> 'FqVector':
        n = len(blocks[0])
        if any(len(b) != n for b in blocks):
            raise ParameterError("blocks have different lengths")
        return cls.of([c for b in blocks for c in b], q, n)

    def __len__(self):
        return len(self.coords)

    def __getitem__(self, i: int) -> FqScalar:
        return FqScalar(self.coords[i], self.q)

    @property
    def array(self) -> np.ndarray:
        return np.array(self.coords, dtype=np.int64)

    @property
    def is_zero(self) -> bool:
        return not any(self.coords)

    def blocks(self) -> List[Tuple[int, ...]]:
        n = self.block or len(self.coords)
        return [self.coords[i:i + n] for i in range(0, len(self.coords), n)]

    def _check(self, other: 'FqVector'):
        if len(other) != len(self) or other.q != self.q:
            raise ParameterError(f"vector mismatch: {len(self)} over F_{self.q} vs {len(other)} over F_{other.q}")

    def __add__(self, other: 'FqVector') -> 'FqVector':
        self._check(other)
        return FqVector(tuple((a + b) % self.q for a, b in zip(self.coords, other.coords)), self.q, self.block)

    def __sub__(self, other: 'FqVector') -> 'FqVector':
        self._check(other)
        return FqVector(tuple((a - b) % self.q for a, b in zip(self.coords, other.coords)), self.q, self.block)

    def __neg__(self) -> 'FqVector':
        return FqVector(tuple(-a % self.q for a in self.coords), self.q, self.block)

    def scale(self, c: int) -> 'FqVector':
        return FqVector(tuple(a * int(c) % self.q for a in self.coords), self.q, self.block)

    def permute(self, sigma) -> 'FqVector':
        """Right action of a permutation of the blocks: block i of the result is block sigma(i)."""
        blocks = self.blocks()
        if len(sigma.images) != len(blocks):
            raise ParameterError(f"permutation of degree {len(sigma.images)} on {len(blocks)} blocks")
        return FqVector(tuple(c for i in sigma.images for c in blocks[i - 1]), self.q, self.block)

    def __str__(self):
        return '(' + ','.join(str(c) for c in self.coords) + ')'


def inner(v: FqVector, w: FqVector) -> FqScalar:
    """Standard form sum v_i w_i; on block vectors this is the sum of block-wise products."""
    v._check(w)
    return FqScalar(sum(a * b for a, b in zip(v.coords, w.coords)), v.q)


# ---------------- Matrices over F_q -----------------
def row_reduce(matrix, q: int) -> Tuple[np.ndarray, List[int]]:
    """Reduced row echelon form modulo a prime; returns the non-zero rows and pivot columns."""
    M = np.array(matrix, dtype=np.int64) % q
    if M.ndim != 2:
        raise ParameterError("row_reduce expects a 2-d matrix")
    rows, cols = M.shape
    pivots: List[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(M[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        M[[r, i]] = M[[i, r]]
        M[r] = M[r] * mod_inverse(int(M[r, c]), q) % q
        others = np.flatnonzero(M[:, c])
        others = others[others != r]
        if others.size:
            M[others] = (M[others] - np.outer(M[others, c], M[r])) % q
        pivots.append(c)
        r += 1
    return M[:r], pivots


def rank(matrix, q: int) -> int:
    return len(row_reduce(matrix, q)[1])


def nullspace(matrix, q: int) -> np.ndarray:
    """Basis (as rows) of {x : M x = 0}."""
    M = np.array(matrix, dtype=np.int64)
    cols = M.shape[1]
    R, pivots = row_reduce(M, q)
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for k, f in enumerate(free):
        basis[k, f] = 1
        for row, pc in enumerate(pivots):
            basis[k, pc] = -R[row, f] % q
    return basis


def matrix_inverse(matrix, q: int) -> np.ndarray:
    M = np.array(matrix, dtype=np.int64) % q
    size = M.shape[0]
    if M.shape != (size, size):
        raise ParameterError("only square matrices are invertible")
    R, pivots = row_reduce(np.hstack([M, np.eye(size, dtype=np.int64)]), q)
    if pivots[:size] != list(range(size)):
        raise ParameterError("matrix is singular")
    return R[:size, size:]


# ---------------- Linear algebra over Z/mZ -----------------
def _solvable_prime_power(A: np.ndarray, b: np.ndarray, p: int, e: int) -> bool:
    mod = p ** e
    A = A % mod
    b = b % mod
    rows, cols = A.shape
    diagonal: List[int] = []
    k = 0
    while k < min(rows, cols):
        sub = A[k:, k:]
        if not sub.any():
            break
        # smallest p-adic valuation left in the block
        s = 0
        while not (sub % p ** (s + 1)).any():
            s += 1
        i, j = (int(x) + k for x in np.argwhere(sub % p ** (s + 1))[0])
        A[[k, i]] = A[[i, k]]
        b[[k, i]] = b[[i, k]]
        A[:, [k, j]] = A[:, [j, k]]
        unit_inv = mod_inverse(int(A[k, k]) // p ** s, mod)
        factors = (A[k + 1:, k] // p ** s) * unit_inv % mod
        A[k + 1:] = (A[k + 1:] - np.outer(factors, A[k])) % mod
        b[k + 1:] = (b[k + 1:] - factors * b[k]) % mod
        # column operations do not touch b; only row k still has entries right of the pivot
        A[k, k + 1:] = 0
        diagonal.append(s)
        k += 1
    for i, s in enumerate(diagonal):
        if b[i] % p ** s:
            return False
    return not bool((b[k:] % mod).any())


def in_column_module(matrix, target, m: int) -> bool:
    """Whether A c = b has a solution c over Z/mZ (m need not be prime)."""
    A = np.array(matrix, dtype=np.int64)
    b = np.array(target, dtype=np.int64)
    if A.ndim != 2 or A.shape[0] != b.shape[0]:
        raise ParameterError(f"shape mismatch: {A.shape} against {b.shape}")
    if m == 1:
        return True
    return all(_solvable_prime_power(A.copy(), b.copy(), p, e) for p, e in factorint(m).items())


# ---------------- Subspaces -----------------
@dataclass(frozen=True)
class FqSubspace:
    """Subspace of F_q^dim stored by its reduced row echelon basis."""
    basis: Tuple[Tuple[int, ...], ...]
    dim: int
    q: int
    block: int = 0

    @classmethod
    def span(cls, vectors: Iterable, dim: int, q: int, block: int = 0) -> 'FqSubspace':
        rows = [v.coords if isinstance(v, FqVector) else tuple(v) for v in vectors]
        if not rows:
            return cls((), dim, q, block)
        if any(len(r) != dim for r in rows):
            raise ParameterError(f"spanning vectors must have length {dim}")
        R, _ = row_reduce(rows, q)
        return cls(tuple(tuple(int(c) for c in row) for row in R), dim, q, block)

    @classmethod
    def whole(cls, dim: int, q: int, block: int = 0) -> 'FqSubspace':
        return cls.span(np.eye(dim, dtype=np.int64), dim, q, block)

    @property
    def dimension(self) -> int:
        return len(self.basis)

    @property
    def matrix(self) -> np.ndarray:
        return np.array(self.basis, dtype=np.int64).reshape(len(self.basis), self.dim)

    def vectors(self) -> List[FqVector]:
        return [FqVector(row, self.q, self.block) for row in self.basis]

    def __contains__(self, v) -> bool:
        coords = v.coords if isinstance(v, FqVector) else tuple(v)
        if len(coords) != self.dim:
            return False
        if not self.basis:
            return not any(c % self.q for c in coords)
        return rank(np.vstack([self.matrix, np.array(coords, dtype=np.int64)]), self.q) == self.dimension

    def issubspace(self, other: 'FqSubspace') -> bool:
        return all(row in other for row in self.basis)

    def join(self, other: 'FqSubspace') -> 'FqSubspace':
        return FqSubspace.span(list(self.basis) + list(other.basis), self.dim, self.q, self.block)

    def combination(self, coefficients: Sequence[int]) -> FqVector:
        if not self.basis:
            return FqVector.zero(self.dim, self.q, self.block)
        coords = np.array(coefficients, dtype=np.int64) @ self.matrix % self.q
        return FqVector(tuple(int(c) for c in coords), self.q, self.block)

    def coordinates(self, v: FqVector) -> Tuple[int, ...]:
        """Coefficients of v in the echelon basis."""
        _, pivots = row_reduce(self.matrix, self.q)
        coeffs = tuple(v.coords[c] for c in pivots)
        if self.combination(coeffs) != v:
            raise ParameterError(f"{v} does not lie in the subspace")
        return coeffs

    def elements(self) -> List[FqVector]:
        """All q^dimension vectors, in lexicographic order of coefficients."""
        return [self.combination(c) for c in product(range(self.q), repeat=self.dimension)]


def orthogonal_complement(vectors: Union[FqSubspace, Iterable[FqVector]], ambient: FqSubspace) -> FqSubspace:
    """{v in ambient : <v, s> = 0 for every s}"""
    rows = list(vectors.basis) if isinstance(vectors, FqSubspace) else [v.coords for v in vectors]
    if not rows or not ambient.basis:
        return ambient
    S = np.array(rows, dtype=np.int64)
    if S.shape[1] != ambient.dim:
        raise ParameterError(f"vectors of length {S.shape[1]} in an ambient space of length {ambient.dim}")
    B = ambient.matrix
    coefficients = nullspace(S @ B.T % ambient.q, ambient.q)
    return FqSubspace.span(coefficients @ B % ambient.q, ambient.dim, ambient.q, ambient.block)


def is_nondegenerate(space: FqSubspace) -> bool:
    if not space.basis:
        return True
    B = space.matrix
    return rank(B @ B.T % space.q, space.q) == space.dimension


def sumzero_space(p: int, q: int, n: int) -> FqSubspace:
    """V_n: tuples (v_1, ..., v_p) of F_q^n with v_1 + ... + v_p = 0."""
    require_prime(p, 'p')
    require_prime(q, 'q')
    if p < 5:
        raise ParameterError(f"p={p} must be at least 5")
    if p == q:
        raise ParameterError("p and q must be distinct")
    if n < 1:
        raise ParameterError(f"n={n} must be positive")
    rows = []
    for i in range(p - 1):
        for j in range(n):
            row = [0] * (n * p)
            row[i * n + j] = 1
            row[(p - 1) * n + j] = q - 1
            rows.append(row)
    return FqSubspace.span(rows, n * p, q, n)


def _degree_and_ambient(vectors: Sequence[FqVector], p: int, ambient: Optional[FqSubspace]):
    if ambient is None:
        if not vectors:
            raise ParameterError("an ambient space is required when no vectors are given")
        v = vectors[0]
        ambient = sumzero_space(p, v.q, v.block or len(v) // p)
    return ambient


def ap_invariant_closure(vectors: Sequence[FqVector], p: int,
                         ambient: Optional[FqSubspace] = None) -> Tuple[FqSubspace, FqSubspace]:
    """
    Smallest A_p-invariant subspace U containing the vectors, and U^perp inside V_n.

    Closure under the two generators of A_p is closure under the whole group.
    """
    ambient = _degree_and_ambient(vectors, p, ambient)
    for v in vectors:
        if v not in ambient:
            raise ParameterError(f"{v} is not in the sum-zero space")
    gens = alternating_generators(p)
    closure = FqSubspace.span(vectors, ambient.dim, ambient.q, ambient.block)
    while True:
        images = [v.permute(s) for v in closure.vectors() for s in gens]
        grown = FqSubspace.span(list(closure.vectors()) + images, ambient.dim, ambient.q, ambient.block)
        if grown.dimension == closure.dimension:
            break
        closure = grown
    return closure, orthogonal_complement(closure, ambient)


def component_span(vectors: Sequence[FqVector], q: int, n: int) -> FqSubspace:
    """Span in F_q^n of every block of every vector."""
    return FqSubspace.span([b for v in vectors for b in v.blocks()], n, q)


def find_orbit_p_vector(vectors: Sequence[FqVector], p: int, q: int, n: int) -> FqVector:
    """
    A vector w = (u, ..., u, (1-p)u) of W = (vectors)^perp whose A_p-orbit has p elements.

    u is the first echelon basis vector of the orthogonal complement of the
    component span in F_q^n.
    """
    span = component_span(vectors, q, n)
    free = orthogonal_complement(span, FqSubspace.whole(n, q))
    if not free.basis:
        raise NoSuchVectorError(f"the block components of {len(vectors)} defining vectors span all of F_{q}^{n}")
    u = free.basis[0]
    last = tuple((1 - p) * c % q for c in u)
    w = FqVector.from_blocks([u] * (p - 1) + [last], q)
    logger.debug(f"orbit-{p} vector {w} from {len(vectors)} defining vectors")
    return w
