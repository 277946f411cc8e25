"""Quadratic spaces of dimension <= 2, their orthogonal groups, the
(O(U), SL_2) dual pair on L^2(U), and assembly of the character table of
SL_2(F_q) from the resulting isotypic decompositions.

Class functions are numpy vectors indexed by the standard class order
of :func:`tensorrank.group.class_labels`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .field import AdditiveCharacter, find_nonsquare, legendre, root_of_unity
from .group import GroupElement, enumerate_classes, fixed_lines
from .heisenberg import lagrangian_points, point_indices
from .oscillator import OscillatorRep, _inv_mod

TAGS = ("0", "1+", "1-", "2+", "2-")


class IntegrityError(RuntimeError):
    """Two constructions that must agree did not."""


@dataclass(frozen=True)
class QuadraticSpace:
    tag: str
    q: int

    def __post_init__(self):
        if self.tag not in TAGS:
            raise ValueError(f"unknown quadratic space {self.tag!r}")

    @property
    def k(self) -> int:
        return int(self.tag[0])

    @cached_property
    def gram(self) -> np.ndarray:
        q, eps = self.q, find_nonsquare(self.q)
        return {
            "0": np.zeros((0, 0), dtype=np.int64),
            "1+": np.array([[1]]),
            "1-": np.array([[eps]]),
            "2+": np.array([[1, 0], [0, q - 1]]),
            "2-": np.array([[1, 0], [0, (-eps) % q]]),
        }[self.tag].astype(np.int64)

    def beta(self, u, v=None) -> int:
        v = u if v is None else v
        return int(np.asarray(u) @ self.gram @ np.asarray(v)) % self.q

    def isotropic_lines(self) -> int:
        pts = lagrangian_points(self.k, self.q)[1:]
        iso = pts[np.einsum("ij,jk,ik->i", pts, self.gram, pts) % self.q == 0]
        return len(iso) // (self.q - 1)


def _mat_key(m) -> tuple[int, ...]:
    return tuple(int(x) for x in np.asarray(m).ravel())


@dataclass
class OrthogonalGroupData:
    """O(U) for a quadratic space, with SO = <s0> cyclic and a fixed
    reflection r; every element is s0^j or s0^j r."""

    space: QuadraticSpace
    elements: np.ndarray  # (m, k, k)
    dets: np.ndarray
    so_generator: np.ndarray
    reflection: np.ndarray
    exponent: np.ndarray  # j with h = s0^j r^refl
    is_reflection: np.ndarray

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def so_order(self) -> int:
        return int(np.sum(~self.is_reflection))

    def index(self, m) -> int:
        return self._index[_mat_key(np.asarray(m) % self.space.q)]

    @cached_property
    def _index(self) -> dict:
        return {_mat_key(h): i for i, h in enumerate(self.elements)}


def build_orthogonal(space: QuadraticSpace) -> OrthogonalGroupData:
    """All isometries of (U, beta), found by testing candidate columns
    against the Gram matrix."""
    q, Q, k = space.q, space.gram, space.k
    if k == 0:
        raise ValueError("the zero space has the trivial orthogonal group only")
    pts = lagrangian_points(k, q)
    if k == 1:
        elems = np.array([[[1]], [[q - 1]]], dtype=np.int64)
    else:
        norms = np.einsum("ij,jk,ik->i", pts, Q, pts) % q
        c1 = pts[norms == Q[0, 0]]
        c2 = pts[norms == Q[1, 1]]
        pair = (c1 @ Q @ c2.T) % q == Q[0, 1]
        i, j = np.nonzero(pair)
        elems = np.stack([c1[i], c2[j]], axis=2)  # columns are images of e1, e2
        ok = np.all((np.einsum("nji,jk,nkl->nil", elems, Q, elems) - Q) % q == 0, axis=(1, 2))
        elems = elems[ok]
        elems = elems[np.lexsort(elems.reshape(len(elems), -1).T[::-1])]
    dets = np.array([int(round(np.linalg.det(h))) % q for h in elems])
    rot = elems[dets == 1]
    m = len(rot)

    def mul(x, y):
        return (x @ y) % q

    eye = np.eye(k, dtype=np.int64)
    gen = None
    for s in rot:
        p, order = s.copy(), 1
        while not np.array_equal(p, eye):
            p, order = mul(p, s), order + 1
        if order == m:
            gen = s
            break
    if gen is None:
        raise IntegrityError("SO is not cyclic")
    refl = elems[dets == q - 1][0]
    if not np.array_equal(mul(refl, refl), eye):
        raise IntegrityError("chosen reflection is not an involution")
    powers = {}
    p = eye.copy()
    for jj in range(m):
        powers[_mat_key(p)] = jj
        p = mul(p, gen)
    exponent = np.empty(len(elems), dtype=np.int64)
    is_refl = dets == q - 1
    for n, h in enumerate(elems):
        base = mul(h, refl) if is_refl[n] else h
        exponent[n] = powers[_mat_key(base)]
    return OrthogonalGroupData(space, elems, dets, gen, refl, exponent, is_refl)


@dataclass
class OrthIrrep:
    label: str
    dim: int
    values: np.ndarray  # character value per element of the group


def orth_irreps(group: OrthogonalGroupData) -> list[OrthIrrep]:
    """1, sgn, the two characters tau+- extending the order-two character
    of SO (value +-1 on the chosen r), and tau_k = Ind(lambda_k) for
    lambda_k != lambda_k^-1, with character 2 cos(2 pi k j / m) on s0^j."""
    m = group.so_order
    j, refl = group.exponent, group.is_reflection
    ones = np.ones(group.order, dtype=complex)
    sgn = np.where(refl, -1.0, 1.0).astype(complex)
    if group.space.k == 1:
        return [OrthIrrep("1", 1, ones), OrthIrrep("sgn", 1, sgn)]
    half_char = (-1.0) ** j
    out = [
        OrthIrrep("1", 1, ones),
        OrthIrrep("sgn", 1, sgn),
        OrthIrrep("tau+", 1, (half_char * np.where(refl, 1.0, 1.0)).astype(complex)),
        OrthIrrep("tau-", 1, (half_char * np.where(refl, -1.0, 1.0)).astype(complex)),
    ]
    for kk in range(1, m // 2):
        vals = np.array([2 * root_of_unity(kk * jj, m).real for jj in j], dtype=complex)
        out.append(OrthIrrep(f"tau_{kk}", 2, np.where(refl, 0, vals)))
    return out


def orth_inner(group: OrthogonalGroupData, x: np.ndarray, y: np.ndarray) -> complex:
    return complex(np.sum(x * np.conj(y)) / group.order)


# -- the dual pair on L^2(U) ------------------------------------------------


def permutation_operator(h: np.ndarray, q: int) -> np.ndarray:
    """f -> f(h^-1 .) on functions on F_q^k."""
    k = h.shape[0]
    us = lagrangian_points(k, q)
    cols = point_indices((us @ _inv_mod(h, q).T) % q, q)
    m = np.zeros((len(us), len(us)))
    m[np.arange(len(us)), cols] = 1.0
    return m


@dataclass
class RestrictedActions:
    space: QuadraticSpace
    group: OrthogonalGroupData
    rep: OscillatorRep  # the SL_2 side on L^2(U)

    def o_operator(self, i: int) -> np.ndarray:
        if self.space.k == 1:
            # O_1 = {+-1} sits in Sp as +-I; its operator is omega(+-I)
            g = GroupElement.identity(self.space.q)
            return self.rep(g if i == 0 else -g)
        return permutation_operator(self.group.elements[i], self.space.q)

    def g_operator(self, g: GroupElement) -> np.ndarray:
        return self.rep(g)

    def joint_trace(self, g: GroupElement) -> np.ndarray:
        """trace(O(h) G(g)) for every h in the orthogonal group."""
        if self.space.k == 1:
            return np.array([self.rep.trace_with(g), self.rep.trace_with(-g)])
        return self.rep.traces_with(_off_diagonal(g), self.group.elements)


def _off_diagonal(g: GroupElement) -> GroupElement:
    """A conjugate with c != 0 when g is not central; the O-operators
    commute with G, so joint traces only depend on the class of g.  The
    c != 0 branch of the trace formula needs no sum over U."""
    if g.c or (g.b == 0 and g.a == g.d):
        return g
    low = GroupElement(1, 0, 1, 1, g.q)
    return g.conjugate(low)


def build_restricted_actions(space: QuadraticSpace, psi: AdditiveCharacter) -> RestrictedActions:
    """O(U) acts on L^2(U) by permutations (k = 2) or through omega(-I)
    (k = 1); SL_2 acts through the generator images of the dual-pair
    embedding, which is the oscillator model attached to the Gram matrix."""
    if space.q != psi.q:
        raise ValueError("space and character over different fields")
    return RestrictedActions(space, build_orthogonal(space), OscillatorRep(psi, space.gram))


def class_sizes(q: int) -> np.ndarray:
    return np.array([c.size for c in enumerate_classes(q)], dtype=float)


def class_inner(q: int, x: np.ndarray, y: np.ndarray) -> complex:
    """Class-size-weighted inner product (x, y)_G."""
    sizes = class_sizes(q)
    return complex(np.sum(sizes * x * np.conj(y)) / sizes.sum())


@dataclass
class ThetaRecord:
    tau: str
    tau_dim: int
    character: np.ndarray  # per class
    dim: int
    norm: float  # (chi, chi)_G

    @property
    def appears(self) -> bool:
        return self.dim > 0

    @property
    def irreducible(self) -> bool:
        return abs(self.norm - 1) < 1e-6


@dataclass
class DecompositionReport:
    tag: str
    q: int
    reflection: tuple[int, ...]
    thetas: list[ThetaRecord]
    joint: np.ndarray  # (|O|, classes) traces
    residual: float
    distinct: bool

    def theta(self, tau: str) -> ThetaRecord:
        for t in self.thetas:
            if t.tau == tau:
                return t
        raise KeyError(tau)

    def dimension_check(self) -> int:
        """sum over tau of dim(tau) dim(Theta(tau)); must equal q^k."""
        return sum(t.tau_dim * t.dim for t in self.thetas)


def eta_decompose(space: QuadraticSpace, psi: AdditiveCharacter) -> DecompositionReport:
    """Isotypic decomposition of L^2(U) under O(U) x SL_2, as characters.

    chi_Theta(tau)(g) = (1/#O) sum_h conj(chi_tau(h)) trace(O(h) G(g)).
    """
    acts = build_restricted_actions(space, psi)
    grp = acts.group
    q = space.q
    classes = enumerate_classes(q)
    joint = np.stack([acts.joint_trace(c.rep) for c in classes], axis=1)
    irreps = orth_irreps(grp)
    thetas = []
    for tau in irreps:
        chi = np.conj(tau.values) @ joint / grp.order
        dim = int(round(chi[0].real))
        norm = class_inner(q, chi, chi).real
        thetas.append(ThetaRecord(tau.label, tau.dim, chi, dim, norm))
    recon = np.array([t.values for t in irreps]).T @ np.array([t.character for t in thetas])
    residual = float(np.max(np.abs(recon - joint)))
    # Theta(1) of the split plane is reducible and contains Theta(sgn)
    present = [t for t in thetas if t.appears and t.irreducible]
    distinct = all(
        abs(class_inner(q, x.character, y.character)) < 1e-6
        for i, x in enumerate(present)
        for y in present[i + 1 :]
    )
    return DecompositionReport(
        space.tag, q, _mat_key(grp.reflection), thetas, joint, residual, distinct
    )


def steinberg_char(g: GroupElement) -> int:
    return fixed_lines(g) - 1


# -- character table --------------------------------------------------------


@dataclass
class IrrepRecord:
    id: str
    rank: int
    dim: int
    values: np.ndarray
    sources: list[str] = field(default_factory=list)
    order: int = 0

    @property
    def sort_key(self):
        return (self.rank, self.dim, self.id)


@dataclass
class CharacterTable:
    q: int
    psi_a: int
    records: list[IrrepRecord]
    decompositions: dict[str, DecompositionReport]

    @property
    def classes(self):
        return enumerate_classes(self.q)

    @property
    def sizes(self) -> np.ndarray:
        return class_sizes(self.q)

    @property
    def values(self) -> np.ndarray:
        return np.array([r.values for r in self.records])

    @property
    def dims(self) -> np.ndarray:
        return np.array([r.dim for r in self.records])

    def inner(self, x: np.ndarray, y: np.ndarray) -> complex:
        return class_inner(self.q, x, y)

    def gram(self) -> np.ndarray:
        v = self.values
        return (v * self.sizes) @ v.conj().T / self.sizes.sum()

    def by_rank(self, rank: int) -> list[IrrepRecord]:
        return [r for r in self.records if r.rank == rank]

    def get(self, rid: str) -> IrrepRecord:
        for r in self.records:
            if r.id == rid:
                return r
        raise KeyError(rid)

    def decompose(self, chi: np.ndarray) -> np.ndarray:
        """Multiplicities of each irrep in a class function."""
        return np.array([self.inner(chi, r.values) for r in self.records])

    def rank1(self) -> dict[str, np.ndarray]:
        """chi_{++}, chi_{+-}, chi_{-+}, chi_{--}: the components of
        omega_{psi+-} of dimension (q+1)/2 (second sign +) and (q-1)/2."""
        out = {}
        for r in self.by_rank(1):
            sign = r.id[len("omega")]
            out[sign + ("+" if r.dim == (self.q + 1) // 2 else "-")] = r.values
        return out


def _merge(records: list[IrrepRecord], cand: IrrepRecord, tol=1e-7, near=1e-3) -> bool:
    """Merge cand into an equal existing row; returns True when merged."""
    for r in records:
        diff = float(np.max(np.abs(r.values - cand.values)))
        if diff < tol:
            r.sources.extend(cand.sources)
            return True
        if diff < near:
            raise IntegrityError(f"{cand.id} nearly equals {r.id} (max diff {diff:.2e})")
    return False


def assemble_chartable(q: int, a: int = 1) -> CharacterTable:
    """All q+4 irreducible characters with their tensor ranks.

    Rank 0: the trivial character.  Rank 1: the four components of the
    two oscillator representations (the O_1+- decompositions).  Rank 2: the
    irreducible Theta(tau) of the O_2+- decompositions that are not already
    present.  Theta(1) for O_2+ is 1 + St and is checked, not added.
    """
    psi = AdditiveCharacter(q, a)
    ncls = q + 4
    records: list[IrrepRecord] = []
    counter = iter(range(10**6))

    def add(rid, rank, chi, source):
        cand = IrrepRecord(rid, rank, int(round(chi[0].real)), chi, [source], next(counter))
        if not _merge(records, cand):
            records.append(cand)

    add("1", 0, np.ones(ncls, dtype=complex), "Theta(0,1)")
    decomps = {}
    for tag in ("1+", "1-", "2-", "2+"):
        rep = eta_decompose(QuadraticSpace(tag, q), psi)
        decomps[tag] = rep
        for t in rep.thetas:
            if not t.appears:
                continue
            source = f"Theta({tag},{t.tau})"
            if tag[0] == "1":
                add(f"omega{tag[1]}[{t.tau}]", 1, t.character, source)
            elif tag == "2-" and t.tau == "1":
                add("St", 2, t.character, source)
            elif t.irreducible:
                add(f"eta({tag},{t.tau})", 2, t.character, source)
            elif not (tag == "2+" and t.tau == "1"):
                raise IntegrityError(f"{source} is reducible")
    st = next(r for r in records if r.id == "St")
    theta1 = decomps["2+"].theta("1").character
    if np.max(np.abs(theta1 - 1 - st.values)) > 1e-7:
        raise IntegrityError("Theta(2+,1) differs from 1 + St")
    if len(records) != ncls:
        raise IntegrityError(f"assembled {len(records)} irreducible characters, expected {ncls}")
    records.sort(key=lambda r: r.sort_key)
    return CharacterTable(q, a % q, records, decomps)


# -- checks -----------------------------------------------------------------


@dataclass
class F2Report:
    products: dict[tuple[str, str], dict[str, int]]
    covered_rank2: set
    uncovered_rank2: set
    integral: bool
    rank2_in_rank1: bool

    @property
    def ok(self) -> bool:
        return self.integral and not self.uncovered_rank2 and not self.rank2_in_rank1


def verify_F2(table: CharacterTable, tol: float = 1e-6) -> F2Report:
    """Decompose all products of two rank-one characters and check that
    every rank-two irrep shows up in at least one of them."""
    r1 = table.by_rank(1)
    rank2 = {r.id for r in table.by_rank(2)}
    products = {}
    covered = set()
    integral = True
    for i, x in enumerate(r1):
        for y in r1[i:]:
            mult = table.decompose(x.values * y.values)
            rounded = np.round(mult.real).astype(int)
            if np.max(np.abs(mult - rounded)) > tol or np.any(rounded < 0):
                integral = False
            if int(rounded @ table.dims) != x.dim * y.dim:
                integral = False
            entry = {r.id: int(m) for r, m in zip(table.records, rounded) if m}
            products[(x.id, y.id)] = entry
            covered |= rank2 & set(entry)
    in_rank1 = any(
        abs(table.inner(x.values, r.values)) > tol for x in r1 for r in table.by_rank(2)
    )
    return F2Report(products, covered, rank2 - covered, integral, in_rank1)


@dataclass
class InvariantSplitReport:
    fourier_plus: float  # ||F f+ - f+||
    fourier_minus: float  # ||F f- + f-||
    g_invariance: float
    invariant_dim: int
    fourier_involution: float
    fourier_commutes_g: float
    scaling_fixes: float

    def ok(self, tol: float = 1e-7) -> bool:
        res = max(
            self.fourier_plus,
            self.fourier_minus,
            self.g_invariance,
            self.fourier_involution,
            self.fourier_commutes_g,
            self.scaling_fixes,
        )
        return res < tol and self.invariant_dim == 2


def symplectic_fourier(psi: AdditiveCharacter) -> np.ndarray:
    """F[f](v) = (1/q) sum_v' psi(<v, v'>) f(v') on functions on V = F_q^2."""
    q = psi.q
    vs = lagrangian_points(2, q)
    pairing = (np.outer(vs[:, 0], vs[:, 1]) - np.outer(vs[:, 1], vs[:, 0])) % q
    return psi(pairing) / q


def invariant_split_check(q: int, a: int = 1) -> InvariantSplitReport:
    """The O_2+ realisation on L^2(V): SL_2 by permutations, SO_2+ by
    scalings, the reflection by the symplectic Fourier transform."""
    psi = AdditiveCharacter(q, a)
    F = symplectic_fourier(psi)
    n = q * q
    delta = np.zeros(n)
    delta[0] = 1.0
    one = np.ones(n)
    f_plus, f_minus = delta + one / q, delta - one / q
    gens = [np.array([[1, 1], [0, 1]]), np.array([[0, q - 1], [1, 0]])]
    perms = [permutation_operator(g, q) for g in gens]
    inv_res = max(
        float(np.max(np.abs(P @ f - f))) for P in perms for f in (f_plus, f_minus)
    )
    stacked = np.vstack([P - np.eye(n) for P in perms])
    invariant_dim = n - int(np.linalg.matrix_rank(stacked))
    commute = max(float(np.max(np.abs(F @ P - P @ F))) for P in perms)
    scal = max(
        float(np.max(np.abs(permutation_operator(s * np.eye(2, dtype=np.int64), q) @ f - f)))
        for s in range(1, q)
        for f in (f_plus, f_minus)
    )
    return InvariantSplitReport(
        fourier_plus=float(np.max(np.abs(F @ f_plus - f_plus))),
        fourier_minus=float(np.max(np.abs(F @ f_minus + f_minus))),
        g_invariance=inv_res,
        invariant_dim=invariant_dim,
        fourier_involution=float(np.max(np.abs(F @ F - np.eye(n)))),
        fourier_commutes_g=commute,
        scaling_fixes=scal,
    )


def restriction_identity(q: int, a: int = 1) -> dict[str, float]:
    """max |trace G(g) - chi_{omega+}(g) chi_{omega+-}(g)| over classes for
    each plane, with the tensor factor chosen by q mod 4."""
    psi = AdditiveCharacter(q, a)
    eps = find_nonsquare(q)
    plus = OscillatorRep(psi)
    minus = OscillatorRep(AdditiveCharacter(q, a * eps))
    out = {}
    for tag in ("2+", "2-"):
        rep = OscillatorRep(psi, QuadraticSpace(tag, q).gram)
        same = (tag == "2+") == (q % 4 == 1)
        other = plus if same else minus
        out[tag] = max(
            abs(rep.trace_with(c.rep) - plus.trace_with(c.rep) * other.trace_with(c.rep))
            for c in enumerate_classes(q)
        )
    return out


def legendre_det(h: np.ndarray, q: int) -> int:
    return legendre(int(round(np.linalg.det(h))) % q, q)
