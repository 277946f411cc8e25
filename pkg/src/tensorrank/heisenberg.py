"""The Heisenberg group H = W x F_q, its representation pi_psi, the Weyl
transform, and orbit counting for linear actions on finite sets.

Model: pi_psi acts on functions on the Lagrangian Y (last n coordinates
of W) through right translation in the induced space.  Writing
w = (x, y), the operator is

    (pi(x, y, z) f)(y') = psi(z - x.y' - x.y / 2) f(y' + y).

Operators are plain complex numpy arrays indexed by the points of Y in
lexicographic order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .field import AdditiveCharacter, half

MAX_HALF_DIM = 2


def max_norm(m: np.ndarray) -> float:
    return float(np.max(np.abs(m))) if m.size else 0.0


def is_unitary(m: np.ndarray, tol: float = 1e-9) -> bool:
    eye = np.eye(m.shape[0])
    return max_norm(m @ m.conj().T - eye) < tol


def lagrangian_points(n: int, q: int) -> np.ndarray:
    """All of F_q^n as rows, in the order used to index operators."""
    return np.array(list(itertools.product(range(q), repeat=n)), dtype=np.int64).reshape(-1, n)


def point_index(y, q: int) -> int:
    idx = 0
    for c in y:
        idx = idx * q + int(c) % q
    return idx


def point_indices(ys: np.ndarray, q: int) -> np.ndarray:
    """Vectorised :func:`point_index` over the rows of ys."""
    idx = np.zeros(ys.shape[0], dtype=np.int64)
    for j in range(ys.shape[1]):
        idx = idx * q + ys[:, j] % q
    return idx


@dataclass(frozen=True)
class SymplecticSpace:
    n: int
    q: int

    def __post_init__(self):
        if not 1 <= self.n <= MAX_HALF_DIM:
            raise ValueError(f"only n = 1, 2 are supported, got n={self.n}")

    @property
    def dim(self) -> int:
        return 2 * self.n

    @cached_property
    def J(self) -> np.ndarray:
        n = self.n
        J = np.zeros((2 * n, 2 * n), dtype=np.int64)
        J[:n, n:] = np.eye(n, dtype=np.int64)
        J[n:, :n] = -np.eye(n, dtype=np.int64)
        return J

    def form(self, w, w2) -> int:
        return int(np.asarray(w) @ self.J @ np.asarray(w2)) % self.q

    @cached_property
    def points(self) -> np.ndarray:
        return lagrangian_points(self.dim, self.q)

    def is_symplectic(self, g) -> bool:
        g = np.asarray(g, dtype=np.int64)
        return bool(np.all((g.T @ self.J @ g - self.J) % self.q == 0))


@dataclass(frozen=True)
class HeisenbergElement:
    w: tuple[int, ...]
    z: int


def h_mul(space: SymplecticSpace, h1: HeisenbergElement, h2: HeisenbergElement) -> HeisenbergElement:
    """(w, z)(w', z') = (w + w', z + z' + <w, w'>/2)."""
    if len(h1.w) != space.dim or len(h2.w) != space.dim:
        raise ValueError("element does not belong to this Heisenberg group")
    q = space.q
    w = tuple((a + b) % q for a, b in zip(h1.w, h2.w))
    z = (h1.z + h2.z + half(q) * space.form(h1.w, h2.w)) % q
    return HeisenbergElement(w, z)


def h_act(g, h: HeisenbergElement, q: int) -> HeisenbergElement:
    """Symplectic action g.(w, z) = (gw, z)."""
    w = tuple(int(v) for v in (np.asarray(g, dtype=np.int64) @ np.asarray(h.w)) % q)
    return HeisenbergElement(w, h.z)


class HeisenbergRep:
    """pi_psi on functions on Y, of dimension q^n."""

    def __init__(self, space: SymplecticSpace, psi: AdditiveCharacter):
        if psi.q != space.q:
            raise ValueError("character and space over different fields")
        self.space = space
        self.psi = psi
        self.ys = lagrangian_points(space.n, space.q)
        self.dim = space.q**space.n

    def __call__(self, h) -> np.ndarray:
        if not isinstance(h, HeisenbergElement):
            w, z = h
            h = HeisenbergElement(tuple(w), z)
        n, q = self.space.n, self.space.q
        if len(h.w) != 2 * n:
            raise ValueError("dimension mismatch")
        x = np.asarray(h.w[:n], dtype=np.int64)
        y = np.asarray(h.w[n:], dtype=np.int64)
        phase = (h.z - self.ys @ x - half(q) * int(x @ y)) % q
        cols = point_indices(self.ys + y, q)
        m = np.zeros((self.dim, self.dim), dtype=complex)
        m[np.arange(self.dim), cols] = self.psi(phase)
        return m


def build_pi(space: SymplecticSpace, psi: AdditiveCharacter) -> HeisenbergRep:
    return HeisenbergRep(space, psi)


def weyl_transform(T: np.ndarray, pi: HeisenbergRep) -> np.ndarray:
    """W(T)(w) = trace(T pi(-w, 0)) / q^n, one value per point of W."""
    if T.shape != (pi.dim, pi.dim):
        raise ValueError(f"operator of shape {T.shape} does not act on a space of dim {pi.dim}")
    q = pi.space.q
    out = np.empty(len(pi.space.points), dtype=complex)
    for i, w in enumerate(pi.space.points):
        out[i] = np.trace(T @ pi((tuple((-w) % q), 0))) / pi.dim
    return out


def inverse_weyl_transform(f: np.ndarray, pi: HeisenbergRep) -> np.ndarray:
    """T = sum_w f(w) pi(w, 0)."""
    T = np.zeros((pi.dim, pi.dim), dtype=complex)
    for val, w in zip(f, pi.space.points):
        if val != 0:
            T += val * pi((tuple(w), 0))
    return T


# -- orbit counting ---------------------------------------------------------


class UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))
        self.rank = [0] * n

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x, y):
        x, y = self.find(x), self.find(y)
        if x == y:
            return False
        if self.rank[x] < self.rank[y]:
            x, y = y, x
        elif self.rank[x] == self.rank[y]:
            self.rank[x] += 1
        self.parent[y] = x
        return True

    def components(self):
        return len({self.find(x) for x in range(len(self.parent))})


def linear_action(q: int):
    """Action of an integer matrix on row vectors of F_q^m, vectorised."""

    def act(g, pts):
        return (pts @ np.asarray(g, dtype=np.int64).T) % q

    return act


def orbit_count(generators, points: np.ndarray, q: int, action=None) -> int:
    """Number of orbits of the group generated by ``generators`` on a finite
    set of points, by union-find over generator images.  The generated
    group itself is never enumerated.

    ``points`` is an (N, m) integer array closed under the action; the
    default action is matrix multiplication mod q.
    """
    act = action or linear_action(q)
    pts = np.asarray(points, dtype=np.int64)
    index = {tuple(p): i for i, p in enumerate(pts.tolist())}
    uf = UnionFind(len(pts))
    for g in generators:
        images = act(g, pts)
        for i, img in enumerate(images.tolist()):
            uf.union(i, index[tuple(img)])
    return uf.components()


def sl2_generators(q: int) -> list[np.ndarray]:
    """u(1) and w = [[0, -1], [1, 0]] generate SL_2(F_q) for prime q."""
    return [np.array([[1, 1], [0, 1]]), np.array([[0, -1], [1, 0]])]


def diagonal_generators(q: int, copies: int = 2) -> list[np.ndarray]:
    """SL_2 generators acting diagonally on V^copies (vectors (v1, v2, ...))."""
    return [np.kron(np.eye(copies, dtype=np.int64), g) for g in sl2_generators(q)]


def diagonal_orbit_families(q: int) -> dict[str, int]:
    """Orbit census of SL_2 acting diagonally on V x V, split into the
    families: pairs with <u, v> = a != 0; proportional nonzero pairs u = b v;
    and the three orbits {(0, v)}, {(v, 0)}, {(0, 0)}."""
    pts = lagrangian_points(4, q)
    u, v = pts[:, :2], pts[:, 2:]
    pairing = (u[:, 0] * v[:, 1] - u[:, 1] * v[:, 0]) % q
    u_zero = ~u.any(axis=1)
    v_zero = ~v.any(axis=1)
    gens = diagonal_generators(q)
    families = {}
    sel = pairing != 0
    families["pairing"] = orbit_count(gens, pts[sel], q)
    sel = (pairing == 0) & ~u_zero & ~v_zero
    families["proportional"] = orbit_count(gens, pts[sel], q)
    sel = u_zero | v_zero
    families["degenerate"] = orbit_count(gens, pts[sel], q)
    return families


def heisenberg_norm(pi: HeisenbergRep) -> float:
    """(chi_pi, chi_pi)_H over all q^(2n+1) elements; 1 iff irreducible."""
    q = pi.space.q
    total = 0.0
    for w in pi.space.points.tolist():
        for z in range(q):
            total += abs(np.trace(pi((tuple(w), z)))) ** 2
    return total / q ** (2 * pi.space.n + 1)


def weyl_intertwining_residual(pi: HeisenbergRep, op: np.ndarray, g, T: np.ndarray) -> float:
    """|| W(op T op^-1)(w) - W(T)(g^-1 w) || for a symplectic g with
    Egorov operator op."""
    q = pi.space.q
    g = np.asarray(g, dtype=np.int64)
    lhs = weyl_transform(op @ T @ op.conj().T, pi)
    base = weyl_transform(T, pi)
    # g^-1 w for every point w, as an index into the point list
    det = int(round(np.linalg.det(g)))
    adj = np.round(np.linalg.inv(g) * det).astype(np.int64)
    ginv = (adj * pow(det % q, q - 2, q)) % q
    idx = point_indices((pi.space.points @ ginv.T) % q, q)
    return float(np.max(np.abs(lhs - base[idx])))
