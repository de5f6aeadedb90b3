"""
Exact arithmetic in Z[ζ_q], the integer combinations of q-th roots of unity.

Values are stored as their residue modulo the q-th cyclotomic polynomial Φ_q,
which makes the representation canonical for every q: two values are equal
iff their coefficient vectors are equal, and zero tests are exact.
"""

import cmath
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, List, Sequence, Tuple, Union

import numpy as np

from ..errors import CyclotomicError

logger = logging.getLogger(__name__)

# bulk numpy paths refuse to run when an intermediate could exceed this
_INT64_SAFE = 2 ** 62


def _poly_mul(a: Sequence[int], b: Sequence[int]) -> Tuple[int, ...]:
    result = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            result[i + j] += ai * bj
    return tuple(result)


def _poly_divmod_monic(num: Sequence[int], den: Sequence[int]) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    """Integer long division by a monic polynomial (coefficients low to high)."""
    if den[-1] != 1:
        raise CyclotomicError("divisor must be monic")
    rem = list(num)
    deg_den = len(den) - 1
    if len(rem) - 1 < deg_den:
        return (0,), tuple(rem)
    quot = [0] * (len(rem) - deg_den)
    for shift in range(len(rem) - 1 - deg_den, -1, -1):
        coeff = rem[shift + deg_den]
        quot[shift] = coeff
        if coeff:
            for k, dk in enumerate(den):
                rem[shift + k] -= coeff * dk
    return tuple(quot), tuple(rem[:deg_den]) if deg_den else (0,)


def _divisors(q: int) -> List[int]:
    return [d for d in range(1, q + 1) if q % d == 0]


@dataclass(frozen=True)
class CyclotomicPoly:
    q: int
    coeffs: Tuple[int, ...]  # ascending powers, monic

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __str__(self) -> str:
        terms = []
        for power in range(self.degree, -1, -1):
            c = self.coeffs[power]
            if c == 0:
                continue
            sign = '-' if c < 0 else '+'
            magnitude = abs(c)
            if power == 0:
                body = str(magnitude)
            else:
                monomial = 'x' if power == 1 else f'x^{power}'
                body = monomial if magnitude == 1 else f'{magnitude}*{monomial}'
            terms.append((sign, body))
        if not terms:
            return '0'
        first_sign, first_body = terms[0]
        text = ('-' if first_sign == '-' else '') + first_body
        for sign, body in terms[1:]:
            text += f' {sign} {body}'
        return text


@lru_cache(maxsize=None)
def cyclotomic_polynomial(q: int) -> CyclotomicPoly:
    """
    Compute Φ_q by exact division of x^q - 1 by Φ_d for every proper divisor d.

    Args:
        q: Positive integer order

    Returns:
        Monic integer polynomial of degree φ(q)
    """
    if not isinstance(q, (int, np.integer)) or q < 1:
        raise CyclotomicError(f"cyclotomic polynomial needs q >= 1, got {q}")
    q = int(q)

    numerator = tuple([-1] + [0] * (q - 1) + [1])
    denominator: Tuple[int, ...] = (1,)
    for d in _divisors(q)[:-1]:
        denominator = _poly_mul(denominator, cyclotomic_polynomial(d).coeffs)

    quotient, remainder = _poly_divmod_monic(numerator, denominator)
    if any(remainder):
        raise CyclotomicError(f"inexact division while building Φ_{q}")
    return CyclotomicPoly(q=q, coeffs=quotient)


def euler_phi(q: int) -> int:
    return cyclotomic_polynomial(q).degree


def _check_modulus(q: int):
    if not isinstance(q, (int, np.integer)) or q < 2:
        raise CyclotomicError(f"alphabet size q must be an integer >= 2, got {q}")


@lru_cache(maxsize=None)
def _reduction_table(q: int) -> Tuple[Tuple[int, ...], ...]:
    """Row e holds the canonical coefficients of x^e mod Φ_q, for 0 <= e < q."""
    phi = cyclotomic_polynomial(q)
    deg = phi.degree
    rows = []
    current = [1] + [0] * (deg - 1)
    for _ in range(q):
        rows.append(tuple(current))
        shifted = [0] + current
        top = shifted[deg]
        if top:
            for k in range(deg + 1):
                shifted[k] -= top * phi.coeffs[k]
        current = shifted[:deg]
    return tuple(rows)


@lru_cache(maxsize=None)
def reduction_matrix(q: int) -> np.ndarray:
    """Integer matrix R of shape (q, φ(q)); counts @ R reduces root counts to canonical form."""
    _check_modulus(q)
    matrix = np.array(_reduction_table(q), dtype=np.int64)
    matrix.setflags(write=False)
    return matrix


@dataclass(frozen=True)
class CyclotomicInt:
    """Element of Z[ζ_q] as its canonical residue modulo Φ_q."""

    q: int
    coeffs: Tuple[int, ...]

    def __post_init__(self):
        _check_modulus(self.q)
        if len(self.coeffs) != euler_phi(self.q):
            raise CyclotomicError(
                f"expected {euler_phi(self.q)} coefficients for q={self.q}, got {len(self.coeffs)}"
            )

    @classmethod
    def zero(cls, q: int) -> 'CyclotomicInt':
        _check_modulus(q)
        return cls(q, (0,) * euler_phi(q))

    @classmethod
    def from_integer(cls, value: int, q: int) -> 'CyclotomicInt':
        _check_modulus(q)
        return cls(q, (int(value),) + (0,) * (euler_phi(q) - 1))

    @classmethod
    def from_root(cls, e: int, q: int) -> 'CyclotomicInt':
        _check_modulus(q)
        if not 0 <= e < q:
            raise CyclotomicError(f"root exponent {e} outside [0, {q})")
        return cls(q, _reduction_table(q)[int(e)])

    @classmethod
    def from_counts(cls, counts: Iterable[int], q: int) -> 'CyclotomicInt':
        """Reduce Σ counts[e]·ζ^e, a raw length-q exponent-count vector."""
        _check_modulus(q)
        counts = [int(c) for c in counts]
        if len(counts) != q:
            raise CyclotomicError(f"expected {q} root counts, got {len(counts)}")
        table = _reduction_table(q)
        result = [0] * euler_phi(q)
        for e, c in enumerate(counts):
            if c:
                for k, r in enumerate(table[e]):
                    result[k] += c * r
        return cls(q, tuple(result))

    def _coerce(self, other: Union[int, 'CyclotomicInt']) -> 'CyclotomicInt':
        if isinstance(other, (int, np.integer)):
            return self.from_integer(int(other), self.q)
        if isinstance(other, CyclotomicInt):
            if other.q != self.q:
                raise CyclotomicError(f"mismatched moduli {self.q} and {other.q}")
            return other
        raise TypeError(f"cannot combine CyclotomicInt with {type(other).__name__}")

    def __add__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return CyclotomicInt(self.q, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __radd__(self, other):
        return self + other

    def __neg__(self) -> 'CyclotomicInt':
        return CyclotomicInt(self.q, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        # x^q = 1 modulo Φ_q, so fold the raw product into root counts first
        counts = [0] * self.q
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                counts[(i + j) % self.q] += a * b
        return self.from_counts(counts, self.q)

    def __rmul__(self, other):
        return self * other

    def conjugate(self) -> 'CyclotomicInt':
        counts = [0] * self.q
        for k, c in enumerate(self.coeffs):
            counts[(-k) % self.q] += c
        return self.from_counts(counts, self.q)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def to_complex(self) -> complex:
        total = 0j
        for k, c in enumerate(self.coeffs):
            if c:
                total += c * cmath.exp(2j * cmath.pi * k / self.q)
        return total

    def __str__(self) -> str:
        terms = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            root = '' if k == 0 else ('ζ' if k == 1 else f'ζ^{k}')
            if not root:
                terms.append(str(c))
            elif c == 1:
                terms.append(root)
            elif c == -1:
                terms.append(f'-{root}')
            else:
                terms.append(f'{c}*{root}')
        if not terms:
            return '0'
        return ' + '.join(terms).replace('+ -', '- ')


# Module-level spellings of the ring operations

def from_root(e: int, q: int) -> CyclotomicInt:
    return CyclotomicInt.from_root(e, q)


def add(a: CyclotomicInt, b: CyclotomicInt) -> CyclotomicInt:
    return a + b


def mul(a: CyclotomicInt, b: CyclotomicInt) -> CyclotomicInt:
    return a * b


def negate(a: CyclotomicInt) -> CyclotomicInt:
    return -a


def conjugate(a: CyclotomicInt) -> CyclotomicInt:
    return a.conjugate()


def is_zero(a: CyclotomicInt) -> bool:
    return a.is_zero()


def to_complex(a: CyclotomicInt) -> complex:
    return a.to_complex()


def reduce_counts(counts: np.ndarray, q: int) -> np.ndarray:
    """
    Reduce an array of raw root counts (last axis of length q) to canonical form.

    Args:
        counts: Integer array [..., q]; entry e counts occurrences of ζ^e
        q: Alphabet size

    Returns:
        Integer array [..., φ(q)] of canonical coefficients
    """
    matrix = reduction_matrix(q)
    counts = np.asarray(counts)
    if counts.shape[-1] != q:
        raise CyclotomicError(f"last axis must have length {q}, got {counts.shape[-1]}")
    if counts.size:
        bound = int(np.abs(counts).max()) * q * int(np.abs(matrix).max())
        if bound >= _INT64_SAFE:
            raise OverflowError(f"root counts up to {bound} do not fit the int64 reduction path")
    return counts.astype(np.int64) @ matrix


def match_roots(canonical: np.ndarray, q: int) -> np.ndarray:
    """
    Identify canonical values that are single roots of unity.

    Args:
        canonical: Integer array [..., φ(q)]
        q: Alphabet size

    Returns:
        Integer array [...] holding e where the value equals ζ^e, and -1 elsewhere
    """
    matrix = reduction_matrix(q)
    hits = np.all(canonical[..., None, :] == matrix, axis=-1)
    exponents = np.argmax(hits, axis=-1)
    return np.where(hits.any(axis=-1), exponents, -1)
