"""Arithmetic in F_q for an odd prime q: residues, Legendre symbols,
additive characters and quadratic Gauss sums.

Everything downstream works with plain ``int`` residues for speed;
:class:`FieldElement` is the checked, immutable wrapper used at API
boundaries and in tests.
"""

from __future__ import annotations

import cmath
import itertools
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

MAX_Q = 101


def is_odd_prime(q) -> bool:
    if not isinstance(q, (int, np.integer)) or q < 3 or q % 2 == 0:
        return False
    return all(q % p for p in range(3, int(q**0.5) + 1, 2))


def check_modulus(q: int) -> int:
    if not is_odd_prime(q):
        raise ValueError(f"q must be an odd prime, got {q!r}")
    if q > MAX_Q:
        raise ValueError(f"q={q} exceeds the supported range 3 <= q <= {MAX_Q}")
    return int(q)


def half(q: int) -> int:
    """The field element 1/2, i.e. (q+1)/2."""
    return (q + 1) // 2


def inv(a: int, q: int) -> int:
    a %= q
    if a == 0:
        raise ZeroDivisionError(f"0 has no inverse mod {q}")
    return pow(a, q - 2, q)


@dataclass(frozen=True)
class FieldElement:
    value: int
    modulus: int

    def __post_init__(self):
        object.__setattr__(self, "value", int(self.value) % self.modulus)

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.modulus != self.modulus:
                raise ValueError("field elements live in different fields")
            return other.value
        return int(other)

    def __add__(self, other):
        return FieldElement(self.value + self._coerce(other), self.modulus)

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElement(self.value - self._coerce(other), self.modulus)

    def __rsub__(self, other):
        return FieldElement(self._coerce(other) - self.value, self.modulus)

    def __mul__(self, other):
        return FieldElement(self.value * self._coerce(other), self.modulus)

    __rmul__ = __mul__

    def __neg__(self):
        return FieldElement(-self.value, self.modulus)

    def inverse(self) -> FieldElement:
        return FieldElement(inv(self.value, self.modulus), self.modulus)

    def __truediv__(self, other):
        return self * FieldElement(self._coerce(other), self.modulus).inverse()

    def __int__(self):
        return self.value

    def __index__(self):
        return self.value

    def __repr__(self):
        return f"{self.value} (mod {self.modulus})"


def _residue(a) -> tuple[int, int | None]:
    if isinstance(a, FieldElement):
        return a.value, a.modulus
    return int(a), None


def legendre(a, q: int | None = None) -> int:
    """Legendre symbol of a nonzero residue: +1 for squares, -1 otherwise."""
    a, mod = _residue(a)
    q = q if q is not None else mod
    if q is None:
        raise TypeError("modulus required for a bare integer")
    a %= q
    if a == 0:
        raise ValueError("Legendre symbol of 0 is not defined here")
    return 1 if pow(a, (q - 1) // 2, q) == 1 else -1


@lru_cache(maxsize=None)
def legendre_table(q: int) -> np.ndarray:
    """Array t with t[a] = Legendre(a) for a != 0 and t[0] = 0."""
    t = np.zeros(q, dtype=np.int64)
    t[(np.arange(1, q) ** 2) % q] = 1
    t[1:][t[1:] == 0] = -1
    return t


@lru_cache(maxsize=None)
def find_nonsquare(q: int) -> int:
    """Smallest quadratic non-residue mod q."""
    for e in range(2, q):
        if legendre(e, q) == -1:
            return e
    raise ValueError(f"no non-square mod {q}")


@lru_cache(maxsize=None)
def _sqrt_table(q: int) -> dict[int, int]:
    roots = {}
    for y in range(q):
        roots.setdefault(y * y % q, y)
    return roots


def sqrt_mod(a: int, q: int) -> int:
    """Some square root of a square residue (the smallest one)."""
    try:
        return _sqrt_table(q)[a % q]
    except KeyError:
        raise ValueError(f"{a} is not a square mod {q}") from None


@dataclass(frozen=True)
class AdditiveCharacter:
    """psi_a(z) = exp(2 pi i a z / q)."""

    q: int
    a: int = 1
    table: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "a", int(self.a) % self.q)
        if self.a == 0:
            raise ValueError("additive character parameter must be nonzero")
        z = np.arange(self.q)
        tab = np.exp(2j * np.pi * ((self.a * z) % self.q) / self.q)
        tab.setflags(write=False)
        object.__setattr__(self, "table", tab)

    def __call__(self, z):
        """Evaluate at a residue or an integer array of residues."""
        if isinstance(z, np.ndarray):
            return self.table[z % self.q]
        z, _ = _residue(z)
        return self.table[z % self.q]

    def twist(self, b: int) -> AdditiveCharacter:
        """The character z -> psi(b z)."""
        return AdditiveCharacter(self.q, self.a * b)


def gauss_sum(psi: AdditiveCharacter) -> complex:
    """gamma(psi) = sum_z psi(z^2 / 2)."""
    q = psi.q
    z = np.arange(q)
    return complex(psi(half(q) * z * z % q).sum())


def form_gauss_sum(B, psi: AdditiveCharacter) -> complex:
    """gamma(B, psi) = sum_y psi(-B(y, y) / 2) for a nondegenerate symmetric B.

    ``B`` is a nonzero scalar (one variable) or a symmetric integer matrix.
    """
    q = psi.q
    B = np.atleast_2d(np.asarray(B, dtype=np.int64)) % q
    n = B.shape[0]
    ys = np.array(list(itertools.product(range(q), repeat=n)), dtype=np.int64)
    quad = np.einsum("ij,jk,ik->i", ys, B, ys) % q
    return complex(psi((-half(q) * quad) % q).sum())


@lru_cache(maxsize=None)
def _scaled_gauss_table(q: int, a: int) -> np.ndarray:
    """t[m] = sum_z psi_a(m z^2), with t[0] = q."""
    z = np.arange(q)
    psi = AdditiveCharacter(q, a)
    out = np.array([psi((m * z * z) % q).sum() for m in range(q)])
    out.setflags(write=False)
    return out


def quadratic_sum(M, psi: AdditiveCharacter) -> np.ndarray:
    """sum_u psi(u^T M u) over F_q^k for a stack of symmetric k x k
    matrices (k = 1, 2), by completing the square."""
    q = psi.q
    M = np.asarray(M, dtype=np.int64) % q
    single = M.ndim == 2
    M = M[None] if single else M
    t = _scaled_gauss_table(q, psi.a)
    if M.shape[1] == 1:
        out = t[M[:, 0, 0]]
    else:
        m11, m12, m22 = M[:, 0, 0], M[:, 0, 1], M[:, 1, 1]
        det = (m11 * m22 - m12 * m12) % q
        pivot = np.where(m11 != 0, m11, m22)
        pinv = np.array([pow(int(p), q - 2, q) if p else 0 for p in pivot], dtype=np.int64)
        out = np.where(
            pivot != 0,
            t[pivot] * t[(det * pinv) % q],
            np.where(m12 != 0, q, q * q),
        )
    return out[0] if single else out


def root_of_unity(k: int, m: int) -> complex:
    return cmath.exp(2j * cmath.pi * (k % m) / m)
