"""The oscillator (Weil) representation of SL_2(F_q) in the Schroedinger
model, built from generator formulas along a fixed Bruhat word.

The same machinery realises the SL_2 action on L^2(U) for a quadratic
space (U, Q): with Gram matrix Q the generators map to

    u(b)      -> A-type operator with symmetric form b*Q
    w         -> B-type operator with kernel form b*Q
    diag(.)   -> C-type operator with C = c*I

so Q = [[1]] is omega_psi itself and a 2x2 Q gives the SL_2 side of the
(O(U), SL_2) dual pair.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .field import (
    AdditiveCharacter,
    find_nonsquare,
    form_gauss_sum,
    gauss_sum,
    half,
    inv,
    legendre,
    quadratic_sum,
)
from .group import GroupElement, classify, enumerate_classes, group_array
from .heisenberg import lagrangian_points, point_indices


def _as_matrix(p, n: int, q: int) -> np.ndarray:
    p = np.asarray(p, dtype=np.int64)
    if p.ndim == 0:
        p = p * np.eye(n, dtype=np.int64)
    if p.shape != (n, n):
        raise ValueError(f"parameter of shape {p.shape} for n={n}")
    return p % q


def _det_mod(m: np.ndarray, q: int) -> int:
    if m.shape == (1, 1):
        return int(m[0, 0]) % q
    return int(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]) % q


def _inv_mod(m: np.ndarray, q: int) -> np.ndarray:
    if m.shape == (1, 1):
        return np.array([[inv(int(m[0, 0]), q)]], dtype=np.int64)
    di = inv(_det_mod(m, q), q)
    return (di * np.array([[m[1, 1], -m[0, 1]], [-m[1, 0], m[0, 0]]], dtype=np.int64)) % q


def _inv_stack(hs: np.ndarray, q: int) -> np.ndarray:
    if hs.shape[1] == 1:
        return np.array([_inv_mod(h, q) for h in hs]).reshape(hs.shape)
    det = (hs[:, 0, 0] * hs[:, 1, 1] - hs[:, 0, 1] * hs[:, 1, 0]) % q
    di = np.array([inv(int(x), q) for x in det], dtype=np.int64)
    adj = np.stack(
        [np.stack([hs[:, 1, 1], -hs[:, 0, 1]], -1), np.stack([-hs[:, 1, 0], hs[:, 0, 0]], -1)], 1
    )
    return (di[:, None, None] * adj) % q


def gen_op(kind: str, param, psi: AdditiveCharacter, n: int = 1) -> np.ndarray:
    """Schroedinger-model operator of a generator.

    ``kind`` is 'A' for [[I, A], [0, I]], 'B' for [[0, B], [-B^-1, 0]] and
    'C' for [[C^-T, 0], [0, C]]; ``param`` is a scalar (n = 1, or a multiple
    of the identity) or an n x n integer matrix.
    """
    q = psi.q
    M = _as_matrix(param, n, q)
    ys = lagrangian_points(n, q)
    dim = len(ys)
    if kind == "A":
        quad = np.einsum("ij,jk,ik->i", ys, M, ys) % q
        return np.diag(psi(half(q) * quad % q))
    if kind == "B":
        if _det_mod(M, q) == 0:
            raise ValueError("B-type generator needs an invertible parameter")
        kernel = (ys @ M @ ys.T) % q
        return psi(kernel) / form_gauss_sum(M, psi)
    if kind == "C":
        det = _det_mod(M, q)
        if det == 0:
            raise ValueError("C-type generator needs an invertible parameter")
        cols = point_indices((ys @ _inv_mod(M, q).T) % q, q)
        m = np.zeros((dim, dim), dtype=complex)
        m[np.arange(dim), cols] = legendre(det, q)
        return m
    raise ValueError(f"unknown generator kind {kind!r}")


def generator_element(kind: str, param: int, q: int) -> GroupElement:
    """The SL_2 matrix of a one-variable generator."""
    if kind == "A":
        return GroupElement(1, param, 0, 1, q)
    if kind == "B":
        return GroupElement(0, param, -inv(param, q), 0, q)
    if kind == "C":
        return GroupElement(inv(param, q), 0, 0, param, q)
    raise ValueError(f"unknown generator kind {kind!r}")


def bruhat_factor(g: GroupElement) -> list[tuple[str, int]]:
    """A word in the generators whose product is g.

    c != 0:  g = u(a/c) w_c u(d/c), with w_c = [[0, -1/c], [c, 0]] the
             B-generator of parameter -1/c;
    c == 0:  g = diag(a, 1/a) u(b/a), diag(a, 1/a) being C(1/a).
    Trivial factors are dropped, so the identity gives the empty word.
    """
    q = g.q
    a, b, c, d = g.entries
    if c:
        ci = inv(c, q)
        word = [("A", a * ci % q), ("B", -ci % q), ("A", d * ci % q)]
    else:
        ai = inv(a, q)
        word = [("C", ai), ("A", b * ai % q)]
    return [(k, p) for k, p in word if not (k == "A" and p == 0) and not (k == "C" and p == 1)]


def word_product(word, q: int) -> GroupElement:
    g = GroupElement.identity(q)
    for kind, p in word:
        g = g * generator_element(kind, p, q)
    return g


def embed_sl2(g: GroupElement, gram) -> np.ndarray:
    """Image of g in Sp(U (x) V) in standard symplectic coordinates.

    With W = U e1 + U e2 and X-coordinates rescaled by Q, the form becomes
    the standard one and g acts by the block matrix [[a I, b Q], [c Q^-1, d I]].
    """
    q = g.q
    Q = np.atleast_2d(np.asarray(gram, dtype=np.int64)) % q
    k = Q.shape[0]
    eye = np.eye(k, dtype=np.int64)
    top = np.hstack([g.a * eye, g.b * Q])
    bottom = np.hstack([g.c * _inv_mod(Q, q), g.d * eye])
    return np.vstack([top, bottom]) % q


class OscillatorRep:
    """SL_2(F_q) acting on L^2(F_q^k) through a quadratic form Q.

    With the default Q = [[1]] this is omega_psi on functions on the line;
    pass ``psi = AdditiveCharacter(q, eps)`` for the other oscillator class.
    Operators are built once per element and cached.
    """

    def __init__(self, psi: AdditiveCharacter, gram=None):
        self.psi = psi
        self.q = q = psi.q
        gram = [[1]] if gram is None else gram
        self.gram = np.atleast_2d(np.asarray(gram, dtype=np.int64)) % q
        self.k = self.gram.shape[0]
        if _det_mod(self.gram, q) == 0 or np.any((self.gram - self.gram.T) % q):
            raise ValueError("Gram matrix must be symmetric and nondegenerate")
        self.dim = q**self.k
        self._cache: dict[tuple, np.ndarray] = {}
        self._gen_cache: dict[tuple, np.ndarray] = {}
        self._gammas: dict[int, complex] = {}
        self._us = lagrangian_points(self.k, q)
        self._beta = np.einsum("ij,jk,ik->i", self._us, self.gram, self._us) % q

    def generator(self, kind: str, p: int) -> np.ndarray:
        key = (kind, p)
        if key not in self._gen_cache:
            if kind == "C":
                param = p * np.eye(self.k, dtype=np.int64)
            else:
                param = p * self.gram
            self._gen_cache[key] = gen_op(kind, param, self.psi, self.k)
        return self._gen_cache[key]

    def word_operator(self, word) -> np.ndarray:
        m = np.eye(self.dim, dtype=complex)
        for kind, p in word:
            m = m @ self.generator(kind, p)
        return m

    def __call__(self, g: GroupElement) -> np.ndarray:
        key = g.entries
        if key not in self._cache:
            self._cache[key] = self.word_operator(bruhat_factor(g))
        return self._cache[key]

    def character(self, g: GroupElement) -> complex:
        return complex(np.trace(self(g)))

    def _gamma(self, ci: int) -> complex:
        if ci not in self._gammas:
            self._gammas[ci] = form_gauss_sum(-ci * self.gram % self.q, self.psi)
        return self._gammas[ci]

    def trace_with(self, g: GroupElement, h=None) -> complex:
        """trace(P_h omega(g)) without forming operators, where P_h is the
        permutation f -> f(h^-1 .) for h in GL(U) (default: identity)."""
        hs = None if h is None else np.asarray(h, dtype=np.int64)[None]
        return complex(self.traces_with(g, hs)[0])

    def traces_with(self, g: GroupElement, hs=None) -> np.ndarray:
        """Vectorised :meth:`trace_with` over a stack of k x k matrices hs.

        Uses the closed kernels of the Bruhat word: for c != 0

            omega(g)[y1, y2] = psi(a/c Q(y1)/2 - y1.Q.y2 / c + d/c Q(y2)/2) / gamma_c

        so the trace is a Gauss sum of the binary form u -> psi-argument at
        (h^-1 u, u);
        and for c == 0, omega(g) sends f to Leg(a)^k psi(t Q(a y)/2) f(a y)
        with t = b/a.
        """
        q, Q, k = self.q, self.gram, self.k
        us, beta = self._us, self._beta
        if hs is None:
            hs = np.eye(k, dtype=np.int64)[None]
        hs = np.asarray(hs, dtype=np.int64) % q
        a, b, c, d = g.entries
        if c:
            # the summand is psi(u^T M_h u), a Gauss sum of a binary form
            ci = inv(c, q)
            hinv = _inv_stack(hs, q)
            A = np.einsum("hji,jk->hik", hinv, Q)  # h^-T Q
            pulled = np.einsum("hij,hjk->hik", A, hinv)  # h^-T Q h^-1
            sym = half(q) * (A + np.swapaxes(A, 1, 2))
            M = (half(q) * ci * (a * pulled + d * Q[None]) - ci * sym) % q
            return quadratic_sum(M, self.psi) / self._gamma(ci)
        t = b * inv(a, q) % q
        hu = np.einsum("hij,nj->hni", hs, us) % q
        fixed = np.all((hu - a * us[None]) % q == 0, axis=2)
        vals = np.where(fixed, self.psi(half(q) * t * beta % q)[None, :], 0)
        return legendre(a, q) ** k * vals.sum(axis=1)


def omega(g: GroupElement, psi: AdditiveCharacter) -> np.ndarray:
    return OscillatorRep(psi)(g)


@dataclass
class ComponentPair:
    """omega = omega_1 + omega_sgn, split by the action of -I."""

    rep: OscillatorRep
    proj_even: np.ndarray
    proj_odd: np.ndarray
    dim_even: int
    dim_odd: int

    def char_even(self, g: GroupElement) -> complex:
        return complex(np.trace(self.proj_even @ self.rep(g)))

    def char_odd(self, g: GroupElement) -> complex:
        return complex(np.trace(self.proj_odd @ self.rep(g)))


def split_components(rep: OscillatorRep) -> ComponentPair:
    if rep.k != 1:
        raise ValueError("component split is defined for the one-variable model")
    minus = rep(-GroupElement.identity(rep.q))
    eye = np.eye(rep.dim)
    p_even = (eye + minus) / 2
    p_odd = (eye - minus) / 2
    return ComponentPair(
        rep,
        p_even,
        p_odd,
        int(round(np.trace(p_even).real)),
        int(round(np.trace(p_odd).real)),
    )


def component_dims(q: int) -> tuple[int, int]:
    """(dim omega_1, dim omega_sgn) for n = 1."""
    if q % 4 == 1:
        return (q + 1) // 2, (q - 1) // 2
    return (q - 1) // 2, (q + 1) // 2


def char_omega_closed(g: GroupElement, sign: int, psi: AdditiveCharacter) -> complex:
    """Closed-form character of omega_{psi,+} (sign=+1) or omega_{psi,-}
    (sign=-1, i.e. psi twisted by a non-square) at g != I."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    q = g.q
    label = classify(g)
    if label.kind == "Id":
        raise ValueError("closed form is stated for g != I; the value at I is the dimension")
    if label.kind == "UnipPlus":
        return sign * gauss_sum(psi)
    if label.kind == "UnipMinus":
        return -sign * gauss_sum(psi)
    det = ((g.a - 1) * (g.d - 1) - g.b * g.c) % q
    return complex(legendre(-det, q))


def oscillator_pair(q: int, a: int = 1) -> tuple[OscillatorRep, OscillatorRep]:
    """(omega_{psi+}, omega_{psi-}) for psi = psi_a."""
    eps = find_nonsquare(q)
    return OscillatorRep(AdditiveCharacter(q, a)), OscillatorRep(AdditiveCharacter(q, a * eps))


@dataclass
class OscillatorPairReport:
    q: int
    a: int
    square: bool
    matches_plus: bool
    matches_minus: bool
    max_diff_plus: float
    differing_classes: list

    @property
    def ok(self) -> bool:
        return self.matches_plus == self.square and self.matches_minus != self.square


def verify_oscillator_pair(q: int, a: int, base: int = 1, tol: float = 1e-9) -> OscillatorPairReport:
    """Compare the class function of omega_{psi_a} with omega_psi and
    omega_{psi_eps}, psi = psi_base.  Isomorphic exactly when a/base is a square."""
    eps = find_nonsquare(q)
    reps = [c.rep for c in enumerate_classes(q)]
    w_a = OscillatorRep(AdditiveCharacter(q, a))
    w_p = OscillatorRep(AdditiveCharacter(q, base))
    w_m = OscillatorRep(AdditiveCharacter(q, base * eps))
    ca = np.array([w_a.character(g) for g in reps])
    cp = np.array([w_p.character(g) for g in reps])
    cm = np.array([w_m.character(g) for g in reps])
    dp, dm = np.abs(ca - cp), np.abs(ca - cm)
    return OscillatorPairReport(
        q=q,
        a=a % q,
        square=legendre(a * base, q) == 1,
        matches_plus=bool(dp.max() < tol),
        matches_minus=bool(dm.max() < tol),
        max_diff_plus=float(dp.max()),
        differing_classes=[str(c.label) for c, x in zip(enumerate_classes(q), dp) if x >= tol],
    )


def homomorphism_residual(rep: OscillatorRep, pairs=None) -> float:
    """max ||omega(g) omega(h) - omega(gh)|| over all pairs (default) or the
    given (g, h) pairs."""
    if pairs is not None:
        return max(float(np.max(np.abs(rep(g) @ rep(h) - rep(g * h)))) for g, h in pairs)
    q = rep.q
    G = group_array(q)
    elems = [GroupElement(*row, q) for row in G.tolist()]
    ops = np.stack([rep(g) for g in elems])
    index = {g.entries: i for i, g in enumerate(elems)}
    worst = 0.0
    for g, og in zip(elems, ops):
        prod_idx = [index[(g * h).entries] for h in elems]
        lhs = np.einsum("ij,njk->nik", og, ops)
        worst = max(worst, float(np.max(np.abs(lhs - ops[prod_idx]))))
    return worst


def generator_elements(q: int) -> list[GroupElement]:
    """Every one-variable generator A(b), B(b), C(c) with nonzero parameter."""
    out = []
    for p in range(1, q):
        out += [generator_element(kind, p, q) for kind in "ABC"]
    return out


def egorov_residual(rep: OscillatorRep, elements=None) -> float:
    """max ||omega(g) pi(w, 0) omega(g)^-1 - pi(g.w, 0)|| over g (default:
    all generators) and all w, with g acting on W through embed_sl2."""
    from .heisenberg import HeisenbergRep, SymplecticSpace

    q, k = rep.q, rep.k
    pi = HeisenbergRep(SymplecticSpace(k, q), rep.psi)
    elements = generator_elements(q) if elements is None else elements
    ws = lagrangian_points(2 * k, q)
    pis = {tuple(w): pi((tuple(w), 0)) for w in ws.tolist()}
    worst = 0.0
    for g in elements:
        E = embed_sl2(g, rep.gram)
        Og = rep(g)
        Oinv = Og.conj().T
        for w, P in pis.items():
            gw = tuple(int(x) for x in (E @ np.array(w)) % q)
            worst = max(worst, float(np.max(np.abs(Og @ P @ Oinv - pis[gw]))))
    return worst


def factorization_residual(rep: OscillatorRep, samples: int = 200, seed: int = 0) -> float:
    """omega(g) against the product over a second word: g = x . (x^-1 g)
    with x a random element, both factors taken along their own Bruhat words."""
    rng = np.random.default_rng(seed)
    G = group_array(rep.q)
    worst = 0.0
    for _ in range(samples):
        g = GroupElement(*G[rng.integers(len(G))], rep.q)
        x = GroupElement(*G[rng.integers(len(G))], rep.q)
        word = bruhat_factor(x) + bruhat_factor(x.inverse() * g)
        worst = max(worst, float(np.max(np.abs(rep.word_operator(word) - rep(g)))))
    return worst


def intertwining_number(rep: OscillatorRep) -> float:
    """(chi_omega, chi_omega)_G, class-size weighted."""
    classes = enumerate_classes(rep.q)
    sizes = np.array([c.size for c in classes], dtype=float)
    chi = np.array([rep.trace_with(c.rep) for c in classes])
    return float(sizes @ np.abs(chi) ** 2 / sizes.sum())
