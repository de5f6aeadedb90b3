"""
Golay complementary sets from products of Butson Hadamard matrices and delay matrices.

    M(z) = H0 · D(z)^{N^π(0)} · H1 · D(z)^{N^π(1)} · ... · D(z)^{N^π(n-1)} · Hn

with D(z) = diag(1, z, ..., z^{N-1}). Every row and every column of M(z) is a
Golay set of size N and length N^n. Position m of a sequence is the
coefficient of z^m.
"""

import functools
import logging
import operator
from dataclasses import dataclass
from typing import Any, Dict, List, Sequence, Tuple

import numpy as np

from ..algebra.cyclotomic import CyclotomicInt, match_roots, reduce_counts
from ..errors import (
    ConstructionError,
    NonUnitCoefficientError,
    SpecInvariantError,
    UnsupportedAlphabetError,
)
from ..hadamard.butson import (
    ButsonMatrix,
    apply_equivalence,
    random_witness,
    representatives,
    verify_butson,
)

logger = logging.getLogger(__name__)

_INT64_SAFE = 2 ** 62


@dataclass(frozen=True)
class ConstructionSpec:
    """
    Full input of the construction.

    perm[t - 1] is the base-N digit position driven by the t-th delay factor,
    i.e. that factor is D(z)^{N^perm[t-1]} for t = 1..n.
    """

    q: int
    N: int
    n: int
    perm: Tuple[int, ...]
    hadamards: Tuple[ButsonMatrix, ...]

    def __post_init__(self):
        object.__setattr__(self, 'perm', tuple(int(p) for p in self.perm))
        object.__setattr__(self, 'hadamards', tuple(self.hadamards))

        if self.n < 0:
            raise SpecInvariantError(f"n must be non-negative, got {self.n}")
        if self.N < 2:
            raise SpecInvariantError(f"N must be at least 2, got {self.N}")
        if sorted(self.perm) != list(range(self.n)):
            raise SpecInvariantError(f"perm {self.perm} is not a permutation of 0..{self.n - 1}")
        if len(self.hadamards) != self.n + 1:
            raise SpecInvariantError(
                f"expected {self.n + 1} Hadamard matrices, got {len(self.hadamards)}"
            )
        for index, H in enumerate(self.hadamards):
            if not isinstance(H, ButsonMatrix):
                raise SpecInvariantError(f"matrix {index} is not a validated ButsonMatrix")
            if H.q != self.q or H.size != self.N:
                raise SpecInvariantError(
                    f"matrix {index} is H({H.q}, {H.size}), expected H({self.q}, {self.N})"
                )
        if self.N & (self.N - 1):
            logger.warning("N = %d is not a power of 2; proceeding with the general digit construction", self.N)

    @property
    def L(self) -> int:
        return self.N ** self.n

    @property
    def delay_steps(self) -> Tuple[int, ...]:
        return tuple(self.N ** self.perm[t] for t in range(self.n))

    def to_dict(self) -> Dict[str, Any]:
        return {
            'q': self.q,
            'N': self.N,
            'n': self.n,
            'perm': list(self.perm),
            'hadamards': [H.to_dict() for H in self.hadamards],
        }


@dataclass(frozen=True, eq=False)
class UnitCoeffPolyMatrix:
    """
    N x N polynomial matrix whose coefficients are all single q-th roots.

    coeffs[i, j, m] is the exponent of the coefficient of z^m in entry (i, j).
    """

    q: int
    coeffs: np.ndarray

    def __post_init__(self):
        arr = np.array(self.coeffs, dtype=np.int64)
        if arr.ndim != 3 or arr.shape[0] != arr.shape[1] or arr.shape[2] == 0:
            raise ConstructionError(f"expected an (N, N, L) exponent array, got shape {arr.shape}")
        if arr.min() < 0 or arr.max() >= self.q:
            raise ConstructionError(f"exponents must lie in [0, {self.q})")
        arr.setflags(write=False)
        object.__setattr__(self, 'coeffs', arr)

    @property
    def N(self) -> int:
        return self.coeffs.shape[0]

    @property
    def L(self) -> int:
        return self.coeffs.shape[2]

    def entry(self, i: int, j: int) -> np.ndarray:
        return self.coeffs[i, j]

    def row(self, i: int) -> np.ndarray:
        return self.coeffs[i]

    def column(self, j: int) -> np.ndarray:
        return self.coeffs[:, j]

    def coefficient(self, m: int) -> np.ndarray:
        return self.coeffs[:, :, m]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, UnitCoeffPolyMatrix):
            return NotImplemented
        return self.q == other.q and np.array_equal(self.coeffs, other.coeffs)

    def to_dict(self) -> Dict[str, Any]:
        return {'q': self.q, 'N': self.N, 'L': self.L, 'matrix': self.coeffs.tolist()}


@dataclass(frozen=True)
class DigitDecomposition:
    """Base-N digits of m, least significant first: m = Σ digits[k]·N^k."""

    m: int
    N: int
    digits: Tuple[int, ...]

    @classmethod
    def of(cls, m: int, N: int, n: int) -> 'DigitDecomposition':
        if not 0 <= m < N ** n or (n == 0 and m != 0):
            raise ConstructionError(f"m = {m} outside [0, {N ** n})")
        digits = []
        rest = m
        for _ in range(n):
            rest, digit = divmod(rest, N)
            digits.append(digit)
        return cls(m=m, N=N, digits=tuple(digits))

    @property
    def value(self) -> int:
        return sum(d * self.N ** k for k, d in enumerate(self.digits))

    def bit_pairs(self) -> Tuple[Tuple[int, int], ...]:
        """For N = 4: (δ_{2k}(m), δ_{2k+1}(m)) for every digit position k."""
        if self.N != 4:
            raise ConstructionError("bit pairs are defined for N = 4 only")
        return tuple((d & 1, d >> 1) for d in self.digits)


def _one_hot_counts(H: np.ndarray, q: int) -> np.ndarray:
    return np.eye(q, dtype=np.int64)[H][:, :, None, :]


def apply_delay_hadamard(counts: np.ndarray, step: int, H: np.ndarray) -> np.ndarray:
    """
    Right-multiply a polynomial matrix by D(z)^step · H.

    Args:
        counts: Raw root counts [N, N, length, q] of the running product
        step: Power applied to the delay matrix
        H: Exponent array of the Hadamard factor

    Returns:
        Root counts of the product, length + (N - 1)·step coefficients long
    """
    N, _, length, q = counts.shape
    result = np.zeros((N, N, length + (N - 1) * step, q), dtype=np.int64)
    for a in range(N):
        source = counts[:, a]
        start = a * step
        for b in range(N):
            # multiplying by ζ^h moves the count of ζ^e to ζ^{e+h}
            result[:, b, start:start + length, :] += np.roll(source, int(H[a, b]), axis=-1)
    return result


def product_counts(spec: ConstructionSpec) -> np.ndarray:
    """Raw root counts [N, N, L, q] of the full polynomial-matrix product."""
    if spec.N ** (spec.n + 1) >= _INT64_SAFE:
        raise OverflowError(f"coefficient sums up to {spec.N}^{spec.n + 1} exceed the int64 path")
    counts = _one_hot_counts(spec.hadamards[0].array, spec.q)
    for t in range(1, spec.n + 1):
        counts = apply_delay_hadamard(counts, spec.N ** spec.perm[t - 1], spec.hadamards[t].array)
    return counts


def construct(spec: ConstructionSpec) -> UnitCoeffPolyMatrix:
    """
    Multiply out the construction and collapse coefficients to root exponents.

    The product is carried as exact root counts; every final coefficient is
    reduced modulo Φ_q and must equal a single q-th root, and every entry
    must have degree N^n - 1.

    Returns:
        The polynomial matrix in exponent form
    """
    counts = product_counts(spec)
    if counts.shape[2] != spec.L:
        raise ConstructionError(f"product has {counts.shape[2]} coefficients, expected {spec.L}")

    canonical = reduce_counts(counts, spec.q)
    exps = match_roots(canonical, spec.q)

    bad = np.argwhere(exps < 0)
    if bad.size:
        i, j, m = (int(v) for v in bad[0])
        value = CyclotomicInt(spec.q, tuple(int(c) for c in canonical[i, j, m]))
        raise NonUnitCoefficientError((i, j), m, value)

    logger.debug("constructed %dx%d matrix of length-%d sequences over q=%d", spec.N, spec.N, spec.L, spec.q)
    return UnitCoeffPolyMatrix(q=spec.q, coeffs=exps)


def selection_path(spec: ConstructionSpec, m: int) -> Tuple[int, ...]:
    """Indices j_1..j_n picked by the selector matrices for the power z^m."""
    digits = DigitDecomposition.of(m, spec.N, spec.n).digits
    return tuple(digits[spec.perm[t - 1]] for t in range(1, spec.n + 1))


def selector_matrices(spec: ConstructionSpec, m: int) -> List[np.ndarray]:
    """The 0/1 diagonal selectors A_1..A_n; each holds a single 1."""
    selectors = []
    for j in selection_path(spec, m):
        A = np.zeros((spec.N, spec.N), dtype=np.int64)
        A[j, j] = 1
        selectors.append(A)
    return selectors


def coefficient_direct(spec: ConstructionSpec, m: int) -> np.ndarray:
    """
    Coefficient matrix of z^m without forming the polynomial product.

    Entry (r, s) is the exponent sum along r -> j_1 -> ... -> j_n -> s:
    H0[r][j_1] + H1[j_1][j_2] + ... + Hn[j_n][s] mod q.

    Args:
        spec: Construction input
        m: Power of z, 0 <= m < N^n

    Returns:
        N x N exponent array
    """
    path = selection_path(spec, m)
    mats = [H.array for H in spec.hadamards]
    if spec.n == 0:
        return mats[0] % spec.q

    inner = sum(int(mats[t][path[t - 1], path[t]]) for t in range(1, spec.n))
    total = mats[0][:, path[0]][:, None] + inner + mats[spec.n][path[-1]][None, :]
    return total % spec.q


def _as_matrix(value: Any) -> List[List[Any]]:
    if isinstance(value, (int, np.integer, CyclotomicInt)):
        return [[int(value) if isinstance(value, np.integer) else value]]
    rows = [list(row) for row in value]
    return [[int(v) if isinstance(v, np.integer) else v for v in row] for row in rows]


def _matmul(a: List[List[Any]], b: List[List[Any]]) -> List[List[Any]]:
    return [
        [functools.reduce(operator.add, (a[i][k] * b[k][j] for k in range(len(b))))
         for j in range(len(b[0]))]
        for i in range(len(a))
    ]


def _matadd(a: List[List[Any]], b: List[List[Any]]) -> List[List[Any]]:
    return [[x + y for x, y in zip(row_a, row_b)] for row_a, row_b in zip(a, b)]


def lemma3_expansion_check(fs: Sequence[Sequence[Any]], ordering: Sequence[int]) -> bool:
    """
    Check the product-of-sums / sum-of-products identity for matrix Boolean functions.

    F_k(x0, x1) takes the values fs[k][0..3] at (0,0), (1,0), (0,1), (1,1).
    The left side is the ordered product over t of Σ F_{π(t)}; the right side
    sums, over every m in [0, 4^n), the ordered product of
    F_{π(t)}(δ_{2π(t)}(m), δ_{2π(t)+1}(m)). Both sides use the same factor order.

    Args:
        fs: n quadruples of square matrices (ints or CyclotomicInt entries) or scalars
        ordering: Permutation π of 0..n-1

    Returns:
        True iff both sides are exactly equal
    """
    n = len(fs)
    if n < 1:
        raise ConstructionError("at least one quadruple is required")
    if sorted(ordering) != list(range(n)):
        raise ConstructionError(f"ordering {tuple(ordering)} is not a permutation of 0..{n - 1}")

    quads = []
    dim = None
    for quad in fs:
        if len(quad) != 4:
            raise ConstructionError("every F_k needs exactly four matrices")
        mats = [_as_matrix(M) for M in quad]
        for M in mats:
            if any(len(row) != len(M) for row in M):
                raise ConstructionError("matrices must be square")
            if dim is None:
                dim = len(M)
            elif len(M) != dim:
                raise ConstructionError(f"dimension mismatch: {len(M)} vs {dim}")
        quads.append(mats)

    sums = [functools.reduce(_matadd, quad) for quad in quads]
    left = functools.reduce(_matmul, (sums[k] for k in ordering))

    right = None
    for m in range(4 ** n):
        factors = []
        for k in ordering:
            x0 = (m >> (2 * k)) & 1
            x1 = (m >> (2 * k + 1)) & 1
            factors.append(quads[k][x0 + 2 * x1])
        term = functools.reduce(_matmul, factors)
        right = term if right is None else _matadd(right, term)

    return left == right


def example8_pair_generator(q: int,
                            n: int,
                            phases: Sequence[int],
                            perm: Sequence[int]) -> ConstructionSpec:
    """
    N = 2 spec whose first row is a q-ary Golay pair.

    Factor t is [[1, θ^c], [-θ^{-c}, 1]] with c = phases[t], i.e. exponent
    array [[0, c], [(q/2 - c) mod q, 0]].

    Args:
        q: Even alphabet size
        n: Number of delay factors
        phases: n + 1 exponents c_0..c_n in [0, q)
        perm: Permutation of 0..n-1

    Returns:
        Validated ConstructionSpec
    """
    if q % 2:
        raise UnsupportedAlphabetError(f"-1 is not a {q}-th root of unity; q must be even")
    if len(phases) != n + 1:
        raise SpecInvariantError(f"expected {n + 1} phases, got {len(phases)}")
    if any(not 0 <= c < q for c in phases):
        raise SpecInvariantError(f"phases {tuple(phases)} outside [0, {q})")

    matrices = [verify_butson([[0, c], [(q // 2 - c) % q, 0]], q) for c in phases]
    return ConstructionSpec(q=q, N=2, n=n, perm=tuple(perm), hadamards=tuple(matrices))


def random_construction_spec(q: int, N: int, n: int, rng: np.random.Generator) -> ConstructionSpec:
    """Spec whose matrices are random equivalence transforms of built-in representatives."""
    reps = representatives(q, N)
    matrices = []
    for _ in range(n + 1):
        base = reps[int(rng.integers(len(reps)))]
        matrices.append(apply_equivalence(base, random_witness(N, q, rng)))
    perm = tuple(int(p) for p in rng.permutation(n))
    return ConstructionSpec(q=q, N=N, n=n, perm=perm, hadamards=tuple(matrices))
