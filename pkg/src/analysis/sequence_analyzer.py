"""
Sequence-level analysis: aperiodic correlations, the exact Golay-set test,
PMEPR on an oversampled unit-circle grid and generalized Boolean functions.

Correlation direction: C(u) = Σ_i a_{i+u}·conj(a_i). The product
A(z)·conj(B)(z^-1) is carried as a Laurent polynomial whose index t stands
for the power t - (L_b - 1).
"""

import itertools
import logging
import re
from dataclasses import dataclass
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from ..algebra.cyclotomic import CyclotomicInt, reduce_counts
from ..construction.paraunitary import UnitCoeffPolyMatrix
from ..errors import (
    AnalysisError,
    DataFormatError,
    InvalidParameterError,
    NotComplementaryError,
)

logger = logging.getLogger(__name__)

MIN_OVERSAMPLE = 4
MAX_PAIR_SCAN_LENGTH = 10


def _exponent(value: Any) -> int:
    if isinstance(value, (bool, np.bool_)):
        raise AnalysisError(f"exponent {value!r} is not an integer")
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)) and float(value).is_integer():
        return int(value)
    raise AnalysisError(f"exponent {value!r} is not an integer")


@dataclass(frozen=True)
class QarySequence:
    q: int
    exps: Tuple[int, ...]

    def __post_init__(self):
        if isinstance(self.q, bool) or not isinstance(self.q, (int, np.integer)) or self.q < 2:
            raise AnalysisError(f"alphabet size q must be an integer >= 2, got {self.q!r}")
        exps = tuple(_exponent(e) for e in self.exps)
        if not exps:
            raise AnalysisError("a sequence needs at least one element")
        if any(not 0 <= e < self.q for e in exps):
            raise AnalysisError(f"sequence exponents must lie in [0, {self.q})")
        object.__setattr__(self, 'exps', exps)

    @property
    def L(self) -> int:
        return len(self.exps)

    @property
    def array(self) -> np.ndarray:
        return np.array(self.exps, dtype=np.int64)

    def to_complex(self) -> np.ndarray:
        return np.exp(2j * np.pi * self.array / self.q)

    def reversed(self) -> 'QarySequence':
        return QarySequence(self.q, self.exps[::-1])

    def to_text(self) -> str:
        return f"q={self.q} L={self.L}\n" + ' '.join(str(e) for e in self.exps)

    @classmethod
    def from_text(cls, text: str) -> 'QarySequence':
        lines = [line.strip() for line in text.strip().splitlines() if line.strip()]
        header = re.fullmatch(r'q=(\d+)\s+L=(\d+)', lines[0]) if lines else None
        if header is None or len(lines) != 2:
            raise DataFormatError("sequence text must be 'q=<int> L=<int>' followed by one line of exponents")
        q, length = int(header.group(1)), int(header.group(2))
        try:
            exps = tuple(int(tok) for tok in lines[1].split())
        except ValueError as e:
            raise DataFormatError(f"bad exponent line: {e}")
        if len(exps) != length:
            raise DataFormatError(f"header announces L={length}, found {len(exps)} exponents")
        return cls(q, exps)


@dataclass(frozen=True)
class GolaySet:
    """N sequences of common length whose autocorrelations cancel at every nonzero shift.

    Only golay_check creates these, so holding one means the property was checked exactly.
    """

    q: int
    sequences: Tuple[QarySequence, ...]

    @property
    def N(self) -> int:
        return len(self.sequences)

    @property
    def L(self) -> int:
        return self.sequences[0].L

    def rows(self) -> List[List[int]]:
        return [list(s.exps) for s in self.sequences]


def _popcount(value: int) -> int:
    return bin(value).count('1')


@dataclass(frozen=True)
class GeneralizedBooleanFunction:
    """
    Z_q-valued multilinear polynomial in v binary variables.

    terms holds (mask, coefficient) pairs in ascending mask order; bit i of a
    mask selects variable x_i. x_0 is the most significant bit of the
    position index, so f(m) reads x_i = bit (v - 1 - i) of m.
    """

    q: int
    v: int
    terms: Tuple[Tuple[int, int], ...]

    def __post_init__(self):
        cleaned = {}
        for mask, coeff in self.terms:
            if not 0 <= mask < 2 ** self.v:
                raise AnalysisError(f"monomial mask {mask} uses variables beyond x_{self.v - 1}")
            coeff = (cleaned.get(mask, 0) + int(coeff)) % self.q
            cleaned[mask] = coeff
        object.__setattr__(self, 'terms', tuple(sorted((m, c) for m, c in cleaned.items() if c)))

    @property
    def constant(self) -> int:
        return dict(self.terms).get(0, 0)

    @property
    def degree(self) -> int:
        return max((_popcount(mask) for mask, _ in self.terms), default=0)

    def coefficient(self, mask: int) -> int:
        return dict(self.terms).get(mask, 0)

    def evaluate(self, m: int) -> int:
        point = 0
        for i in range(self.v):
            if (m >> (self.v - 1 - i)) & 1:
                point |= 1 << i
        return sum(c for mask, c in self.terms if mask & point == mask) % self.q

    def evaluate_all(self) -> np.ndarray:
        """Values at every m in [0, 2^v) as an exponent array."""
        positions = np.arange(2 ** self.v)
        points = _positions_to_masks(positions, self.v)
        values = np.zeros(2 ** self.v, dtype=np.int64)
        for mask, coeff in self.terms:
            values += coeff * ((points & mask) == mask)
        return values % self.q

    def to_text(self, compact: bool = False) -> str:
        """Render as 'c*x_i*x_j + ... + c', ordered by degree then variable indices."""
        sep = '' if compact else '*'
        monomials = sorted(
            ((mask, c) for mask, c in self.terms if mask),
            key=lambda item: (_popcount(item[0]), _variables(item[0])),
        )
        parts = []
        for mask, coeff in monomials:
            body = sep.join(f'x_{i}' for i in _variables(mask))
            parts.append(body if coeff == 1 else f'{coeff}{sep}{body}')
        if not parts:
            return f'+ {self.constant}'
        text = ' + '.join(parts)
        if self.constant:
            text += f' + {self.constant}'
        return text

    def to_dict(self) -> Dict[str, Any]:
        return {
            'q': self.q,
            'v': self.v,
            'degree': self.degree,
            'terms': [
                {'mask': mask, 'variables': list(_variables(mask)), 'coeff': coeff}
                for mask, coeff in self.terms
            ],
            'text': self.to_text(),
        }


def _variables(mask: int) -> Tuple[int, ...]:
    return tuple(i for i in range(mask.bit_length()) if (mask >> i) & 1)


def _positions_to_masks(positions: np.ndarray, v: int) -> np.ndarray:
    """Bit reversal within v bits: position index -> variable mask."""
    masks = np.zeros_like(positions)
    for i in range(v):
        masks |= ((positions >> (v - 1 - i)) & 1) << i
    return masks


_TERM_RE = re.compile(r'^(\d*)\*?((?:\*?x_\d+)*)$')


def parse_anf(text: str, q: int, v: Optional[int] = None) -> GeneralizedBooleanFunction:
    """
    Parse an ANF listing such as '3x_0 + 2*x_1*x_3 + 1'.

    Both the compact and the '*'-separated spellings are accepted; repeated
    monomials are summed mod q.
    """
    terms: Dict[int, int] = {}
    highest = -1
    for raw in text.replace(' ', '').split('+'):
        if not raw:
            continue
        match = _TERM_RE.match(raw)
        if match is None:
            raise DataFormatError(f"cannot parse ANF term '{raw}'")
        coeff_text, monomial = match.groups()
        indices = [int(i) for i in re.findall(r'x_(\d+)', monomial)]
        if not coeff_text and not indices:
            raise DataFormatError(f"cannot parse ANF term '{raw}'")
        coeff = int(coeff_text) if coeff_text else 1
        mask = 0
        for i in indices:
            mask |= 1 << i
            highest = max(highest, i)
        terms[mask] = terms.get(mask, 0) + coeff

    if v is None:
        v = highest + 1
    elif highest >= v:
        raise DataFormatError(f"term uses x_{highest} but only {v} variables are declared")
    return GeneralizedBooleanFunction(q, max(v, 0), tuple(terms.items()))


def _check_family(sequences: Sequence[QarySequence]) -> Tuple[int, int]:
    if not sequences:
        raise AnalysisError("at least one sequence is required")
    q, length = sequences[0].q, sequences[0].L
    for seq in sequences[1:]:
        if seq.q != q:
            raise AnalysisError(f"mixed alphabets {q} and {seq.q}")
        if seq.L != length:
            raise AnalysisError(f"mixed lengths {length} and {seq.L}")
    return q, length


def _correlation_counts(a: np.ndarray, b: np.ndarray, q: int) -> np.ndarray:
    """
    Raw root counts of A(z)·conj(B)(z^-1), shape (len(a) + len(b) - 1, q).

    Row t holds the coefficient of z^{t - (len(b) - 1)}.
    """
    eye = np.eye(q, dtype=np.int64)
    one_hot_a = eye[a].T
    one_hot_b = eye[b].T
    counts = np.zeros((len(a) + len(b) - 1, q), dtype=np.int64)
    for e1 in np.unique(a):
        for e2 in np.unique(b):
            counts[:, (e1 - e2) % q] += np.convolve(one_hot_a[e1], one_hot_b[e2][::-1])
    return counts


def autocorrelation(a: QarySequence, u: int) -> CyclotomicInt:
    """
    Aperiodic autocorrelation C(u) = Σ_i a_{i+u}·conj(a_i), exactly.

    Args:
        a: Sequence
        u: Shift, 0 <= u < L

    Returns:
        C(u) in Z[ζ_q]
    """
    if not 0 <= u < a.L:
        raise InvalidParameterError(f"shift {u} outside [0, {a.L})")
    exps = a.array
    counts = np.bincount((exps[u:] - exps[:a.L - u]) % a.q, minlength=a.q)
    return CyclotomicInt.from_counts(counts, a.q)


def cross_correlation(a: QarySequence, b: QarySequence) -> List[CyclotomicInt]:
    """Coefficients of A(z)·conj(B)(z^-1); entry t is the power t - (L_b - 1)."""
    if a.q != b.q:
        raise AnalysisError(f"mixed alphabets {a.q} and {b.q}")
    canonical = reduce_counts(_correlation_counts(a.array, b.array, a.q), a.q)
    return [CyclotomicInt(a.q, tuple(int(c) for c in row)) for row in canonical]


def golay_check(sequences: Sequence[QarySequence]) -> GolaySet:
    """
    Exact test of Σ_i A_i(z)·conj(A_i)(z^-1) = L·N.

    The Laurent product is formed for every sequence, summed and reduced
    mod Φ_q; all nonzero powers must vanish.

    Returns:
        The validated GolaySet

    Raises:
        NotComplementaryError: at the first shift u >= 1 whose sum is nonzero
    """
    q, length = _check_family(sequences)
    total = sum(_correlation_counts(s.array, s.array, q) for s in sequences)
    canonical = reduce_counts(total, q)

    for u in range(1, length):
        row = canonical[length - 1 + u]
        if row.any():
            value = CyclotomicInt(q, tuple(int(c) for c in row))
            logger.debug("family of %d sequences fails at shift %d with %s", len(sequences), u, value)
            raise NotComplementaryError(u, value)

    return GolaySet(q=q, sequences=tuple(sequences))


def is_complementary_by_shifts(sequences: Sequence[QarySequence]) -> bool:
    """Shift-by-shift test: Σ_i C_i(u) == 0 for every 1 <= u < L."""
    q, length = _check_family(sequences)
    for u in range(1, length):
        total = CyclotomicInt.zero(q)
        for seq in sequences:
            total = total + autocorrelation(seq, u)
        if not total.is_zero():
            return False
    return True


def _matrix_sequences(vectors: np.ndarray, q: int) -> List[QarySequence]:
    return [QarySequence(q, tuple(int(e) for e in vec)) for vec in vectors]


def extract_sets(M: UnitCoeffPolyMatrix) -> Dict[str, List[GolaySet]]:
    """
    Every row and every column of M as a Golay set.

    Returns:
        {'rows': N sets, 'columns': N sets}
    """
    rows = [golay_check(_matrix_sequences(M.row(i), M.q)) for i in range(M.N)]
    columns = [golay_check(_matrix_sequences(M.column(j), M.q)) for j in range(M.N)]
    return {'rows': rows, 'columns': columns}


def paraunitary_check(M: UnitCoeffPolyMatrix) -> bool:
    """
    Exact check of M(z)·M†(z^-1) = N·L·I.

    Entry (i, j) is Σ_k M_ik(z)·conj(M_jk)(z^-1); off-diagonal entries must
    vanish and diagonal entries must be the constant N·L.
    """
    q, N, L = M.q, M.N, M.L
    expected = CyclotomicInt.from_integer(N * L, q).coeffs
    centre = L - 1
    for i in range(N):
        for j in range(N):
            counts = sum(_correlation_counts(M.entry(i, k), M.entry(j, k), q) for k in range(N))
            canonical = reduce_counts(counts, q)
            target = np.zeros_like(canonical)
            if i == j:
                target[centre] = expected
            if not np.array_equal(canonical, target):
                logger.debug("paraunitary check fails at entry (%d, %d)", i, j)
                return False
    return True


def pmepr_profile(a: QarySequence, oversample: int = 64) -> Tuple[float, int]:
    """
    Oversampled PMEPR with the grid index where it peaks.

    |A(z)|^2 / L is evaluated at z = exp(2πi·j/(K·L)) for j < K·L. The result
    lower-bounds the supremum over the circle and approaches it as K grows.

    Args:
        a: Sequence
        oversample: K, at least 4

    Returns:
        (maximum, smallest grid index attaining it)
    """
    if oversample < MIN_OVERSAMPLE:
        raise InvalidParameterError(f"oversample factor must be >= {MIN_OVERSAMPLE}, got {oversample}")
    if a.L == 1:
        return 1.0, 0
    size = oversample * a.L
    values = np.fft.ifft(a.to_complex(), size) * size
    power = np.abs(values) ** 2 / a.L
    index = int(np.argmax(power))
    return float(power[index]), index


def pmepr(a: QarySequence, oversample: int = 64) -> float:
    return pmepr_profile(a, oversample)[0]


def anf(a: QarySequence, reverse: bool = False) -> GeneralizedBooleanFunction:
    """
    Algebraic normal form of the exponent function m -> exps[m] over Z_q.

    Published listings, the quaternary order-4 one included, number positions
    from the highest power of z, so they are reproduced with reverse=True.

    Args:
        a: Sequence of length 2^v
        reverse: Read the sequence from its last position backwards

    Returns:
        The unique multilinear function reproducing the exponents
    """
    length = a.L
    if length & (length - 1):
        raise InvalidParameterError(f"ANF needs a power-of-2 length, got {length}")
    v = length.bit_length() - 1

    exps = a.array[::-1] if reverse else a.array
    values = np.zeros(length, dtype=np.int64)
    values[_positions_to_masks(np.arange(length), v)] = exps

    masks = np.arange(length)
    for i in range(v):
        upper = masks[(masks >> i) & 1 == 1]
        values[upper] = (values[upper] - values[upper ^ (1 << i)]) % a.q

    return GeneralizedBooleanFunction(a.q, v, tuple((int(m), int(c)) for m, c in enumerate(values) if c))


def degree(f: GeneralizedBooleanFunction) -> int:
    return f.degree


def standard_golay_sequences(q: int, m: int) -> List[Tuple[int, ...]]:
    """
    All standard q-ary Golay sequences of length 2^m.

    f(x) = (q/2)·Σ_k x_{π(k)}x_{π(k+1)} + Σ_k c_k·x_k + c over every
    permutation π, linear part c_k and constant c.
    """
    if q % 2:
        raise InvalidParameterError(f"standard sequences need an even alphabet, got q={q}")
    if m < 1:
        raise InvalidParameterError(f"m must be positive, got {m}")

    positions = np.arange(2 ** m)
    points = np.stack([(positions >> (m - 1 - i)) & 1 for i in range(m)], axis=1)
    linear = np.array(list(itertools.product(range(q), repeat=m)), dtype=np.int64)
    linear_values = linear @ points.T

    found = set()
    for perm in itertools.permutations(range(m)):
        if perm[0] > perm[-1]:
            continue
        quadratic = np.zeros(2 ** m, dtype=np.int64)
        for k in range(m - 1):
            quadratic += points[:, perm[k]] * points[:, perm[k + 1]]
        quadratic *= q // 2
        for c in range(q):
            for row in (quadratic + linear_values + c) % q:
                found.add(tuple(int(e) for e in row))
    return sorted(found)


def binary_golay_pair_members(length: int) -> List[Tuple[int, ...]]:
    """
    Every binary sequence of the given length that belongs to some Golay pair.

    Exhaustive scan of all 2^L x 2^L pairs; sequences are returned as
    exponent tuples (0 for +1, 1 for -1).
    """
    if not 1 <= length <= MAX_PAIR_SCAN_LENGTH:
        raise InvalidParameterError(f"pair scan supports lengths 1..{MAX_PAIR_SCAN_LENGTH}, got {length}")

    codes = np.arange(2 ** length)
    exps = np.stack([(codes >> (length - 1 - i)) & 1 for i in range(length)], axis=1)
    signs = 1 - 2 * exps
    autocorr = np.stack(
        [(signs[:, u:] * signs[:, :length - u]).sum(axis=1) for u in range(1, length)], axis=1
    ) if length > 1 else np.zeros((len(codes), 0), dtype=np.int64)

    paired = np.zeros(len(codes), dtype=bool)
    for start in range(0, len(codes), 256):
        block = autocorr[start:start + 256]
        complementary = np.all(block[:, None, :] + autocorr[None, :, :] == 0, axis=-1)
        paired[start:start + 256] = complementary.any(axis=1)

    members = [tuple(int(e) for e in exps[idx]) for idx in np.flatnonzero(paired)]
    logger.debug("%d binary sequences of length %d belong to a Golay pair", len(members), length)
    return members


def sequences_from_rows(rows: Iterable[Iterable[int]], q: int) -> List[QarySequence]:
    return [QarySequence(q, tuple(row)) for row in rows]
