"""
Butson-type Hadamard matrices H(q, N): validation, built-in representatives,
the equivalence relation H1 = D1·P1·H2·P2·D2 and an exhaustive equivalence search.

Matrices are stored as exponent arrays: entry (i, j) stands for ζ_q^{exps[i][j]}.
"""

import itertools
import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from tqdm import tqdm

from ..algebra.cyclotomic import CyclotomicInt
from ..errors import (
    BadShapeError,
    ExponentOutOfRangeError,
    HadamardError,
    NotEquivalentError,
    NotUnitaryError,
    SearchSpaceTooLargeError,
    UnsupportedError,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ButsonMatrix:
    """
    A validated Butson-type (q, N) Hadamard matrix.

    Instances are produced by verify_butson (and the functions built on it),
    which guarantee H·H† = N·I exactly.
    """

    q: int
    exps: Tuple[Tuple[int, ...], ...]

    @property
    def size(self) -> int:
        return len(self.exps)

    @property
    def array(self) -> np.ndarray:
        return np.array(self.exps, dtype=np.int64)

    def transpose(self) -> 'ButsonMatrix':
        return verify_butson(self.array.T, self.q)

    def to_dict(self) -> Dict[str, Any]:
        return {'q': self.q, 'N': self.size, 'exps': [list(row) for row in self.exps]}

    def __str__(self) -> str:
        width = len(str(self.q - 1))
        return '\n'.join(' '.join(f'{e:>{width}}' for e in row) for row in self.exps)


@dataclass(frozen=True)
class EquivalenceWitness:
    """
    Factors of H1 = D1·P1·H2·P2·D2 in exponent form.

    row_perm follows the convention that result row i is row row_perm[i] of H2;
    col_perm likewise sources result column j from column col_perm[j].
    """

    row_phases: Tuple[int, ...]
    col_phases: Tuple[int, ...]
    row_perm: Tuple[int, ...]
    col_perm: Tuple[int, ...]

    @classmethod
    def identity(cls, N: int) -> 'EquivalenceWitness':
        zeros = (0,) * N
        order = tuple(range(N))
        return cls(zeros, zeros, order, order)

    def validate(self, N: int, q: int):
        for name, perm in (('row_perm', self.row_perm), ('col_perm', self.col_perm)):
            if sorted(perm) != list(range(N)):
                raise HadamardError(f"{name} {perm} is not a permutation of 0..{N - 1}")
        for name, phases in (('row_phases', self.row_phases), ('col_phases', self.col_phases)):
            if len(phases) != N:
                raise HadamardError(f"{name} has {len(phases)} entries, expected {N}")
            if any(not 0 <= p < q for p in phases):
                raise HadamardError(f"{name} {phases} outside [0, {q})")

    def to_dict(self) -> Dict[str, List[int]]:
        return {
            'D1': list(self.row_phases),
            'P1': list(self.row_perm),
            'P2': list(self.col_perm),
            'D2': list(self.col_phases),
        }


def verify_butson(exps: Any, q: int) -> ButsonMatrix:
    """
    Validate an exponent array as a Butson-type (q, N) Hadamard matrix.

    Every off-diagonal row inner product is evaluated in Z[ζ_q] and must be
    exactly zero.

    Args:
        exps: Square array-like of integers in [0, q)
        q: Alphabet size

    Returns:
        The validated ButsonMatrix
    """
    if not isinstance(q, (int, np.integer)) or q < 2:
        raise HadamardError(f"alphabet size q must be an integer >= 2, got {q}")
    q = int(q)

    try:
        raw = np.asarray(exps)
    except ValueError as e:
        raise BadShapeError(f"exponent array is not rectangular: {e}")

    if raw.ndim != 2 or raw.shape[0] != raw.shape[1] or raw.shape[0] == 0:
        raise BadShapeError(f"expected a non-empty square array, got shape {raw.shape}")
    if raw.dtype == np.bool_ or not (np.issubdtype(raw.dtype, np.integer) or np.issubdtype(raw.dtype, np.floating)):
        raise BadShapeError(f"exponents must be integers, got dtype {raw.dtype}")
    if np.issubdtype(raw.dtype, np.floating) and not np.all(np.mod(raw, 1) == 0):
        raise ExponentOutOfRangeError("exponents must be integers, found a fractional entry")
    arr = raw.astype(np.int64)

    if arr.min() < 0 or arr.max() >= q:
        raise ExponentOutOfRangeError(f"exponents must lie in [0, {q}), found {arr.min()}..{arr.max()}")

    N = arr.shape[0]
    for i in range(N):
        for j in range(i + 1, N):
            counts = np.bincount((arr[i] - arr[j]) % q, minlength=q)
            inner = CyclotomicInt.from_counts(counts, q)
            if not inner.is_zero():
                raise NotUnitaryError((i, j), inner)

    return ButsonMatrix(q=q, exps=tuple(tuple(int(e) for e in row) for row in arr))


def _is_power_of_two(value: int) -> bool:
    return value >= 1 and value & (value - 1) == 0


def sylvester_exponents(N: int) -> np.ndarray:
    """Binary Sylvester matrix of order N = 2^k: entry (i, j) is popcount(i & j) mod 2."""
    if not _is_power_of_two(N):
        raise UnsupportedError(f"Sylvester matrices need N a power of 2, got {N}")
    idx = np.arange(N)
    overlap = idx[:, None] & idx[None, :]
    return np.array([[bin(int(v)).count('1') % 2 for v in row] for row in overlap], dtype=np.int64)


def fourier_exponents(N: int) -> np.ndarray:
    idx = np.arange(N)
    return (idx[:, None] * idx[None, :]) % N


def representatives(q: int, N: int) -> List[ButsonMatrix]:
    """
    Built-in dephased representatives of H(q, N).

    The binary Sylvester family (re-encoded over q when q is even) comes first,
    followed by the Fourier matrix of order N when N divides q. For (2, 4) this
    is the single binary class; for (4, 4) it is the two inequivalent classes.

    Args:
        q: Alphabet size
        N: Matrix order

    Returns:
        List of validated matrices, without duplicates
    """
    if q < 2 or N < 2:
        raise UnsupportedError(f"no representative for H({q}, {N})")

    candidates = []
    if q % 2 == 0 and _is_power_of_two(N):
        candidates.append(sylvester_exponents(N) * (q // 2))
    if q % N == 0:
        candidates.append(fourier_exponents(N) * (q // N))

    unique = []
    for candidate in candidates:
        if not any(np.array_equal(candidate, seen) for seen in unique):
            unique.append(candidate)

    if not unique:
        raise UnsupportedError(f"no built-in representative for H({q}, {N})")

    return [verify_butson(exps, q) for exps in unique]


def apply_equivalence(H: ButsonMatrix, witness: EquivalenceWitness) -> ButsonMatrix:
    """
    Compute D1·P1·H·P2·D2 for the factors held in witness.

    Returns:
        The transformed matrix, re-validated as Butson
    """
    N = H.size
    if len(witness.row_perm) != N:
        raise HadamardError(f"witness is for order {len(witness.row_perm)}, matrix has order {N}")
    witness.validate(N, H.q)

    arr = H.array
    permuted = arr[np.ix_(list(witness.row_perm), list(witness.col_perm))]
    result = (np.array(witness.row_phases)[:, None] + permuted + np.array(witness.col_phases)[None, :]) % H.q
    return verify_butson(result, H.q)


def dephase(H: ButsonMatrix) -> Tuple[ButsonMatrix, EquivalenceWitness]:
    """
    Bring H to dephased form: first row and first column all exponent 0.

    Returns:
        (dephased matrix, witness with identity permutations)
    """
    arr = H.array
    q = H.q
    col_phases = (-arr[0]) % q
    row_phases = (-(arr[:, 0] + col_phases[0])) % q
    order = tuple(range(H.size))
    witness = EquivalenceWitness(
        row_phases=tuple(int(p) for p in row_phases),
        col_phases=tuple(int(p) for p in col_phases),
        row_perm=order,
        col_perm=order,
    )
    return apply_equivalence(H, witness), witness


def random_witness(N: int, q: int, rng: np.random.Generator) -> EquivalenceWitness:
    return EquivalenceWitness(
        row_phases=tuple(int(p) for p in rng.integers(0, q, N)),
        col_phases=tuple(int(p) for p in rng.integers(0, q, N)),
        row_perm=tuple(int(p) for p in rng.permutation(N)),
        col_perm=tuple(int(p) for p in rng.permutation(N)),
    )


def are_equivalent(H1: ButsonMatrix,
                   H2: ButsonMatrix,
                   max_size: int = 5,
                   max_alphabet: int = 8,
                   progress: bool = False) -> EquivalenceWitness:
    """
    Exhaustively search for a witness with H1 = D1·P1·H2·P2·D2.

    Row and column permutations and the column phases D2 are enumerated in
    lexicographic order; for each candidate the row phases D1 are solved for
    and accepted only if they are consistent across every column. The first
    hit is therefore the lexicographically smallest (P1, P2, D2).

    Args:
        H1: Target matrix
        H2: Source matrix
        max_size: Largest order the search accepts
        max_alphabet: Largest alphabet the search accepts
        progress: Show a progress bar over row permutations

    Returns:
        A verified witness mapping H2 onto H1

    Raises:
        NotEquivalentError: after all N!·N!·q^N candidates fail
    """
    if H1.q != H2.q or H1.size != H2.size:
        raise HadamardError(
            f"cannot compare H({H1.q}, {H1.size}) with H({H2.q}, {H2.size})"
        )
    q, N = H1.q, H1.size
    if N > max_size or q > max_alphabet:
        raise SearchSpaceTooLargeError(
            f"exhaustive search limited to N <= {max_size}, q <= {max_alphabet}; got N={N}, q={q}"
        )

    target = H1.array
    source = H2.array
    phase_grid = np.array(list(itertools.product(range(q), repeat=N)), dtype=np.int64)
    perms = list(itertools.permutations(range(N)))

    checked = 0
    for row_perm in tqdm(perms, disable=not progress, desc="equivalence search", leave=False):
        rows = source[list(row_perm)]
        for col_perm in perms:
            # target - permuted source must equal D1[i] + D2[j]
            offset = (target - rows[:, list(col_perm)]) % q
            row_phase_candidates = (offset[None, :, :] - phase_grid[:, None, :]) % q
            consistent = np.all(row_phase_candidates == row_phase_candidates[:, :, :1], axis=(1, 2))
            hits = np.flatnonzero(consistent)
            if hits.size:
                checked += int(hits[0]) + 1
                witness = EquivalenceWitness(
                    row_phases=tuple(int(p) for p in row_phase_candidates[hits[0], :, 0]),
                    col_phases=tuple(int(p) for p in phase_grid[hits[0]]),
                    row_perm=tuple(row_perm),
                    col_perm=tuple(col_perm),
                )
                if apply_equivalence(H2, witness) != H1:
                    raise HadamardError("equivalence witness failed verification")
                logger.debug("witness found after %d candidates: %s", checked, witness)
                return witness
            checked += len(phase_grid)

    logger.info("no equivalence witness among %d candidates", checked)
    raise NotEquivalentError(
        f"matrices are not equivalent ({checked} candidates exhausted)",
        candidates_checked=checked,
    )


def is_dephased(H: ButsonMatrix) -> bool:
    arr = H.array
    return not arr[0].any() and not arr[:, 0].any()


def hadamard_from_rows(rows: Sequence[str], q: int) -> ButsonMatrix:
    """Parse compact digit rows such as ['0000', '0123'] (alphabets up to 10)."""
    return verify_butson([[int(ch) for ch in row] for row in rows], q)
