"""SL_2(F_q) as explicit 2x2 matrices.

Elements are stored as the four residues (a, b, c, d) of the matrix
``[[a, b], [c, d]]``.  Bulk work (brute-force commutator counts) uses
integer arrays of shape ``(N, 4)`` with the same column order.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .field import find_nonsquare, inv, legendre, legendre_table, sqrt_mod

KINDS = (
    "Id",
    "NegId",
    "UnipPlus",
    "UnipMinus",
    "NegUnipPlus",
    "NegUnipMinus",
    "Hyperbolic",
    "Elliptic",
)


@dataclass(frozen=True)
class GroupElement:
    a: int
    b: int
    c: int
    d: int
    q: int

    def __post_init__(self):
        q = self.q
        for name in "abcd":
            object.__setattr__(self, name, int(getattr(self, name)) % q)
        if (self.a * self.d - self.b * self.c) % q != 1:
            raise ValueError(f"determinant of {self.entries} is not 1 mod {q}")

    @classmethod
    def identity(cls, q: int) -> GroupElement:
        return cls(1, 0, 0, 1, q)

    @classmethod
    def from_matrix(cls, m, q: int) -> GroupElement:
        (a, b), (c, d) = np.asarray(m).tolist()
        return cls(a, b, c, d, q)

    @property
    def entries(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    def matrix(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]], dtype=np.int64)

    def __mul__(self, other: GroupElement) -> GroupElement:
        if other.q != self.q:
            raise ValueError("elements of different groups")
        a, b, c, d = self.entries
        e, f, g, h = other.entries
        return GroupElement(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h, self.q)

    def __neg__(self) -> GroupElement:
        return GroupElement(-self.a, -self.b, -self.c, -self.d, self.q)

    def inverse(self) -> GroupElement:
        return GroupElement(self.d, -self.b, -self.c, self.a, self.q)

    def trace(self) -> int:
        return (self.a + self.d) % self.q

    def apply(self, v) -> tuple[int, int]:
        x, y = v
        return ((self.a * x + self.b * y) % self.q, (self.c * x + self.d * y) % self.q)

    def conjugate(self, h: GroupElement) -> GroupElement:
        """h g h^-1."""
        return h * self * h.inverse()

    def __repr__(self):
        return f"[[{self.a}, {self.b}], [{self.c}, {self.d}]] mod {self.q}"


def unipotent(s: int, q: int) -> GroupElement:
    return GroupElement(1, s, 0, 1, q)


def torus(a: int, q: int) -> GroupElement:
    return GroupElement(a, 0, 0, inv(a, q), q)


def weyl_element(c: int, q: int) -> GroupElement:
    """w_c = [[0, -1/c], [c, 0]]."""
    return GroupElement(0, -inv(c, q), c, 0, q)


def commutator(x: GroupElement, y: GroupElement) -> GroupElement:
    return x * y * x.inverse() * y.inverse()


def enumerate_group(q: int) -> list[GroupElement]:
    return [GroupElement(*row, q) for row in group_array(q).tolist()]


@lru_cache(maxsize=None)
def group_array(q: int) -> np.ndarray:
    """All q(q^2-1) elements as an (N, 4) array of (a, b, c, d), sorted."""
    a, b, c, d = np.meshgrid(*(np.arange(q),) * 4, indexing="ij")
    mask = (a * d - b * c) % q == 1
    out = np.stack([a[mask], b[mask], c[mask], d[mask]], axis=1).astype(np.int64)
    out.setflags(write=False)
    return out


def element_keys(arr: np.ndarray, q: int) -> np.ndarray:
    """Injective integer key of each row, for table lookups."""
    return ((arr[..., 0] * q + arr[..., 1]) * q + arr[..., 2]) * q + arr[..., 3]


def mul_arrays(x: np.ndarray, y: np.ndarray, q: int) -> np.ndarray:
    a, b, c, d = (x[..., i] for i in range(4))
    e, f, g, h = (y[..., i] for i in range(4))
    return np.stack([a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h], axis=-1) % q


def inv_arrays(x: np.ndarray, q: int) -> np.ndarray:
    return np.stack([x[..., 3], -x[..., 1], -x[..., 2], x[..., 0]], axis=-1) % q


# -- conjugacy classes ------------------------------------------------------


@dataclass(frozen=True, order=True)
class ConjClassLabel:
    kind: str
    params: tuple[int, ...] = ()

    def __str__(self):
        if self.params:
            return f"{self.kind}({','.join(map(str, self.params))})"
        return self.kind


@dataclass(frozen=True)
class ClassInfo:
    label: ConjClassLabel
    rep: GroupElement
    size: int


def _representative(label: ConjClassLabel, q: int) -> GroupElement:
    eps = find_nonsquare(q)
    kind = label.kind
    if kind == "Id":
        return GroupElement.identity(q)
    if kind == "NegId":
        return -GroupElement.identity(q)
    if kind in ("UnipPlus", "UnipMinus"):
        return unipotent(1 if kind == "UnipPlus" else eps, q)
    if kind in ("NegUnipPlus", "NegUnipMinus"):
        return GroupElement(-1, 1 if kind == "NegUnipPlus" else eps, 0, -1, q)
    if kind == "Hyperbolic":
        return torus(label.params[0], q)
    if kind == "Elliptic":
        x, y = label.params
        return GroupElement(x, eps * y, y, x, q)
    raise ValueError(f"unknown class kind {kind!r}")


def _class_size(kind: str, q: int) -> int:
    return {
        "Id": 1,
        "NegId": 1,
        "UnipPlus": (q * q - 1) // 2,
        "UnipMinus": (q * q - 1) // 2,
        "NegUnipPlus": (q * q - 1) // 2,
        "NegUnipMinus": (q * q - 1) // 2,
        "Hyperbolic": q * (q + 1),
        "Elliptic": q * (q - 1),
    }[kind]


@lru_cache(maxsize=None)
def class_labels(q: int) -> tuple[ConjClassLabel, ...]:
    """The q+4 labels in the standard order: I, -I, the four (+-)unipotent
    classes, hyperbolic classes by a, elliptic classes by (x, y)."""
    eps = find_nonsquare(q)
    labels = [ConjClassLabel(k) for k in KINDS[:6]]
    for a in range(2, q - 1):
        if a < inv(a, q):
            labels.append(ConjClassLabel("Hyperbolic", (a,)))
    for x in range(q):
        for y in range(1, (q - 1) // 2 + 1):
            if (x * x - eps * y * y) % q == 1:
                labels.append(ConjClassLabel("Elliptic", (x, y)))
    return tuple(labels)


@lru_cache(maxsize=None)
def enumerate_classes(q: int) -> tuple[ClassInfo, ...]:
    return tuple(
        ClassInfo(lab, _representative(lab, q), _class_size(lab.kind, q)) for lab in class_labels(q)
    )


def _unipotent_sign(b: int, c: int, q: int) -> int:
    """Square class of the invariant of g = s*I + N, N nilpotent nonzero.

    For v with Nv != 0, det[Nv | v] is, up to squares, the upper-right
    entry t of the standard form [[s, t], [0, s]].  Only b, c of g enter.
    """
    if c % q:
        return legendre(-c, q)
    return legendre(b, q)


def classify(g: GroupElement) -> ConjClassLabel:
    q = g.q
    a, b, c, d = g.entries
    t = g.trace()
    for s, base in ((1, "Id"), (q - 1, "NegId")):
        if t == (2 * s) % q:
            if b == 0 and c == 0:
                return ConjClassLabel(base)
            sign = _unipotent_sign(b, c, q)
            prefix = "" if s == 1 else "Neg"
            return ConjClassLabel(prefix + ("UnipPlus" if sign == 1 else "UnipMinus"))
    disc = (t * t - 4) % q
    if legendre(disc, q) == 1:
        r = sqrt_mod(disc, q)
        lam = (t + r) * inv(2, q) % q
        return ConjClassLabel("Hyperbolic", (min(lam, inv(lam, q)),))
    eps = find_nonsquare(q)
    x = t * inv(2, q) % q
    y = sqrt_mod((x * x - 1) * inv(eps, q), q)
    return ConjClassLabel("Elliptic", (x, min(y, q - y)))


@lru_cache(maxsize=None)
def _label_index(q: int) -> dict[ConjClassLabel, int]:
    return {lab: i for i, lab in enumerate(class_labels(q))}


def class_index(g: GroupElement) -> int:
    return _label_index(g.q)[classify(g)]


@lru_cache(maxsize=None)
def _trace_table(q: int) -> np.ndarray:
    """Class index for each trace t != +-2 (classes there are trace-determined)."""
    idx = _label_index(q)
    table = np.full(q, -1, dtype=np.int64)
    for t in range(q):
        if t in (2 % q, (q - 2) % q):
            continue
        # any element with trace t will do: [[0, -1], [1, t]]
        table[t] = idx[classify(GroupElement(0, -1, 1, t, q))]
    return table


def class_index_array(arr: np.ndarray, q: int) -> np.ndarray:
    """Vectorised :func:`classify`, returning indices into the standard order."""
    a, b, c, d = (arr[..., i] for i in range(4))
    t = (a + d) % q
    out = _trace_table(q)[t]
    leg = legendre_table(q)
    for s, base in ((1, 0), (q - 1, 1)):
        sel = t == (2 * s) % q
        if not sel.any():
            continue
        bb, cc = b[sel], c[sel]
        central = (bb == 0) & (cc == 0)
        sign = np.where(cc != 0, leg[(-cc) % q], leg[bb])
        # Id/NegId at 0/1; UnipPlus/Minus at 2/3; NegUnipPlus/Minus at 4/5
        unip = np.where(sign == 1, 2 + 2 * base, 3 + 2 * base)
        out[sel] = np.where(central, base, unip)
    return out


def conjugacy_partition_bruteforce(q: int) -> list[list[int]]:
    """Orbits of G acting on itself by conjugation, as lists of row indices
    into :func:`group_array`.  Independent of :func:`classify`."""
    G = group_array(q)
    keys = element_keys(G, q)
    lookup = {int(k): i for i, k in enumerate(keys)}
    Ginv = inv_arrays(G, q)
    seen = np.zeros(len(G), dtype=bool)
    orbits = []
    for i in range(len(G)):
        if seen[i]:
            continue
        conj = mul_arrays(mul_arrays(G, G[i], q), Ginv, q)
        members = sorted({lookup[int(k)] for k in element_keys(conj, q)})
        seen[members] = True
        orbits.append(members)
    return orbits


def fixed_lines(g: GroupElement) -> int:
    """Number of lines of F_q^2 mapped to themselves by g."""
    q = g.q
    lines = [(1, y) for y in range(q)] + [(0, 1)]
    count = 0
    for x, y in lines:
        u, v = g.apply((x, y))
        if (u * y - v * x) % q == 0:
            count += 1
    return count
