"""Command-line front end.  Every subcommand writes one CSV table.

    tensorrank chartable --q 7 --out table.csv
    tensorrank verify --q 5

Exit codes: 0 ok, 1 integrity error (or a failed check), 2 usage error,
3 brute-force cap exceeded without --force-brute.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import dualpair, field, group, harmonic, heisenberg, oscillator
from .dualpair import IntegrityError, QuadraticSpace
from .field import AdditiveCharacter
from .harmonic import BRUTE_CAP, CapExceeded

COMMANDS = ("classes", "chartable", "ratios", "eta", "commutator", "bounds", "verify", "orbits")
ZERO = 5e-13


@dataclass(frozen=True)
class RunConfig:
    command: str
    q: int
    psi_a: int = 1
    tol: float = 1e-9
    out: Path | None = None
    force_brute: bool = False
    brute: str = "auto"

    def wants_brute(self) -> bool:
        if self.brute == "off":
            return False
        if self.brute == "auto":
            return self.q <= BRUTE_CAP or self.force_brute
        if self.q > BRUTE_CAP and not self.force_brute:
            raise CapExceeded(f"q={self.q} is above the brute-force cap {BRUTE_CAP}; use --force-brute")
        return True


class UsageError(ValueError):
    pass


def fmt_real(x: float) -> str:
    x = float(x)
    if math.isinf(x):
        return "inf"
    if abs(x) < ZERO:
        x = 0.0
    return format(x, ".12g")


def fmt_complex(z: complex) -> str:
    re, im = z.real, z.imag
    re = 0.0 if abs(re) < ZERO else re
    im = 0.0 if abs(im) < ZERO else im
    return f"{re:.12g}{im:+.12g}i"


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


# -- tables -------------------------------------------------------------------


def classes_csv(cfg: RunConfig) -> str:
    rows = []
    for i, c in enumerate(group.enumerate_classes(cfg.q)):
        rows.append([i, str(c.label), c.label.kind, *c.rep.entries, c.size])
    return _csv(["index", "class", "kind", "a", "b", "c", "d", "size"], rows)


def chartable_csv(cfg: RunConfig, table=None) -> str:
    table = table or dualpair.assemble_chartable(cfg.q, cfg.psi_a)
    labels = [str(c.label) for c in table.classes]
    rows = [[r.id, r.rank, r.dim, *(fmt_complex(v) for v in r.values)] for r in table.records]
    return _csv(["id", "rank", "dim", *labels], rows)


def character_ratios(table, tol: float = 1e-9) -> np.ndarray:
    """-log_{sqrt q} |chi(g) / dim| per (irrep, class); inf where chi = 0."""
    ratio = np.abs(table.values) / table.dims[:, None]
    with np.errstate(divide="ignore"):
        out = -np.log(ratio) / np.log(math.sqrt(table.q))
    return np.where(ratio < tol, np.inf, out)


def ratios_csv(cfg: RunConfig, table=None) -> str:
    table = table or dualpair.assemble_chartable(cfg.q, cfg.psi_a)
    vals = character_ratios(table, cfg.tol)
    rows = []
    for r, row in zip(table.records, vals):
        for c, v in zip(table.classes, row):
            rows.append([r.id, r.rank, r.dim, str(c.label), fmt_real(v)])
    return _csv(["irrep", "rank", "dim", "class", "neg_log_sqrtq_ratio"], rows)


def eta_csv(cfg: RunConfig) -> str:
    psi = AdditiveCharacter(cfg.q, cfg.psi_a)
    labels = [str(c.label) for c in group.enumerate_classes(cfg.q)]
    rows = []
    for tag in ("2+", "2-"):
        rep = dualpair.eta_decompose(QuadraticSpace(tag, cfg.q), psi)
        refl = " ".join(map(str, rep.reflection))
        for t in rep.thetas:
            rows.append(
                [
                    tag,
                    t.tau,
                    t.tau_dim,
                    t.dim,
                    fmt_real(t.norm),
                    int(t.appears),
                    int(t.irreducible),
                    refl,
                    fmt_real(rep.residual),
                    *(fmt_complex(v) for v in t.character),
                ]
            )
    header = ["space", "tau", "tau_dim", "theta_dim", "norm", "appears", "irreducible", "reflection", "residual"]
    return _csv(header + labels, rows)


def commutator_csv(cfg: RunConfig, table=None) -> str:
    table = table or dualpair.assemble_chartable(cfg.q, cfg.psi_a)
    rep = harmonic.commutator_report(cfg.q, table, brute=cfg.wants_brute(), force=True)
    return harmonic.report_csv(rep)


def orbits_csv(cfg: RunConfig) -> str:
    q = cfg.q
    pts = heisenberg.lagrangian_points(2, q)
    rows = [
        ["Sp(W) on W", heisenberg.orbit_count(heisenberg.sl2_generators(q), pts, q), 2],
        ["trivial group on W", heisenberg.orbit_count([np.eye(2, dtype=np.int64)], pts, q), q * q],
    ]
    if q <= ORBIT_CAP:
        fam = heisenberg.diagonal_orbit_families(q)
        rows.append(["diagonal SL2 on VxV", sum(fam.values()), 2 * q + 1])
        rows.append(["  pairing <u,v> != 0", fam["pairing"], q - 1])
        rows.append(["  proportional nonzero", fam["proportional"], q - 1])
        rows.append(["  one or both zero", fam["degenerate"], 3])
    psi = AdditiveCharacter(q, cfg.psi_a)
    rows.append(["(chi_omega, chi_omega)_G", fmt_real(oscillator.intertwining_number(oscillator.OscillatorRep(psi))), 2])
    rows.append(["(chi_{U(x)V}, chi_{U(x)V})_G 2+", fmt_real(_uv_norm(q, psi, "2+")), 2 * q + 1])
    rows.append(["(chi_{U(x)V}, chi_{U(x)V})_G 2-", fmt_real(_uv_norm(q, psi, "2-")), 2 * q + 1])
    return _csv(["action", "orbits", "expected"], rows)


ORBIT_CAP = 31


def _uv_norm(q, psi, tag) -> float:
    rep = oscillator.OscillatorRep(psi, QuadraticSpace(tag, q).gram)
    classes = group.enumerate_classes(q)
    sizes = np.array([c.size for c in classes], dtype=float)
    chi = np.array([rep.trace_with(dualpair._off_diagonal(c.rep)) for c in classes])
    return float(sizes @ np.abs(chi) ** 2 / sizes.sum())


# -- checks ---------------------------------------------------------------------


@dataclass
class Check:
    name: str
    ok: bool
    detail: str = ""


def bounds_checks(cfg: RunConfig, table=None) -> list[Check]:
    table = table or dualpair.assemble_chartable(cfg.q, cfg.psi_a)
    rep = harmonic.commutator_report(cfg.q, table)
    q = cfg.q
    out = [Check("S1 exact on positive unipotents", rep.s1_unipotent_residual() < 1e-9,
                 f"residual {rep.s1_unipotent_residual():.2e}")]
    nc = rep.noncentral
    b1, b2 = rep.bounds_hold(cfg.tol)
    out.append(Check("S1 bound", b1, f"min slack {rep.s1_slack[nc].min():.3e} bound {harmonic.s1_bound(q):.6g}"))
    out.append(Check("S2 bound", b2, f"min slack {rep.s2_slack[nc].min():.3e} bound {harmonic.s2_bound(q):.6g}"))
    out.append(Check("N = 1 + S1 + S2", rep.partition_residual() < 1e-12, f"{rep.partition_residual():.2e}"))
    row = harmonic.uniformity_report([q], {q: table})[0]
    out.append(Check("q max|N-1| within constant", row.ok, f"{row.constant:.6g} <= {row.bound:.6g}"))
    return out


def _max(x) -> float:
    return float(np.max(np.abs(x))) if np.size(x) else 0.0


def verify_checks(cfg: RunConfig) -> list[Check]:
    """Every module invariant in scope at this q."""
    q, tol = cfg.q, 1e-7
    psi = AdditiveCharacter(q, cfg.psi_a)
    out: list[Check] = []
    add = lambda name, ok, detail="": out.append(Check(name, bool(ok), detail))  # noqa: E731

    # field
    lt = field.legendre_table(q)
    nz = np.arange(1, q)
    add("legendre multiplicative", np.all(lt[np.outer(nz, nz) % q] == np.outer(lt[nz], lt[nz])))
    add("|gauss_sum| = sqrt q", abs(abs(field.gauss_sum(psi)) - math.sqrt(q)) < 1e-9)
    add("character sum vanishes", abs(psi(np.arange(q)).sum()) < 1e-12 * q)

    # group
    classes = group.enumerate_classes(q)
    sizes = [c.size for c in classes]
    add("q+4 classes", len(classes) == q + 4, str(len(classes)))
    add("class sizes sum to |G|", sum(sizes) == q * (q * q - 1))
    add("class reps classify to themselves", all(group.classify(c.rep) == c.label for c in classes))
    G = group.group_array(q)
    idx = group.class_index_array(G, q)
    add("label fibers match class sizes", np.array_equal(np.bincount(idx, minlength=q + 4), sizes))
    if q <= BRUTE_CAP:
        parts = group.conjugacy_partition_bruteforce(q)
        agree = len(parts) == q + 4 and all(len(set(idx[p])) == 1 for p in parts)
        add("brute-force conjugacy partition", agree, f"{len(parts)} orbits")

    # heisenberg
    if q <= 13:
        pi = heisenberg.HeisenbergRep(heisenberg.SymplecticSpace(1, q), psi)
        add("pi irreducible", abs(heisenberg.heisenberg_norm(pi) - 1) < 1e-8)
    pts = heisenberg.lagrangian_points(2, q)
    add("orbits of Sp(W) on W", heisenberg.orbit_count(heisenberg.sl2_generators(q), pts, q) == 2)

    # oscillator
    rep = oscillator.OscillatorRep(psi)
    if q <= 7:
        add("omega homomorphism (exhaustive)", oscillator.homomorphism_residual(rep) < tol)
    else:
        rng = np.random.default_rng(0)
        pick = lambda: group.GroupElement(*G[rng.integers(len(G))], q)  # noqa: E731
        pairs = [(pick(), pick()) for _ in range(10_000 if q <= 31 else 2_000)]
        add("omega homomorphism (sampled)", oscillator.homomorphism_residual(rep, pairs) < tol)
    if q <= 13:
        add("Egorov identity", oscillator.egorov_residual(rep) < tol)
        T = np.random.default_rng(1).normal(size=(q, q)) + 0j
        w = max(
            heisenberg.weyl_intertwining_residual(pi, rep(g), oscillator.embed_sl2(g, [[1]]), T)
            for g in oscillator.generator_elements(q)
        )
        add("Weyl transform intertwines", w < 1e-7, f"{w:.2e}")
    add("factorization independence", oscillator.factorization_residual(rep, samples=50) < tol)
    plus, minus = oscillator.oscillator_pair(q, cfg.psi_a)
    worst = 0.0
    for c in classes[1:]:
        for r, s in ((plus, 1), (minus, -1)):
            worst = max(worst, abs(r.trace_with(c.rep) - oscillator.char_omega_closed(c.rep, s, psi)))
    add("omega trace = closed form", worst < tol, f"{worst:.2e}")
    comp = oscillator.split_components(rep)
    add("component dims", (comp.dim_even, comp.dim_odd) == oscillator.component_dims(q))
    ipn = oscillator.intertwining_number(rep)
    add("(chi_omega, chi_omega) = 2 = #(W/Sp)", abs(ipn - 2) < 1e-8, fmt_real(ipn))
    eps = field.find_nonsquare(q)
    rep_sq = oscillator.verify_oscillator_pair(q, 4 * cfg.psi_a, base=cfg.psi_a)
    rep_ns = oscillator.verify_oscillator_pair(q, eps * cfg.psi_a, base=cfg.psi_a)
    add("oscillator class depends on square class", rep_sq.ok and rep_ns.ok)

    # dual pair
    for tag in ("2+", "2-"):
        sp = QuadraticSpace(tag, q)
        add(f"{tag} isotropic lines", sp.isotropic_lines() == (2 if tag == "2+" else 0))
        grp = dualpair.build_orthogonal(sp)
        m = q - 1 if tag == "2+" else q + 1
        add(f"#O_{tag}", grp.order == 2 * m and grp.so_order == m)
        r, s0 = grp.reflection, grp.so_generator
        rsr = (r @ s0 @ r) % q
        s_inv = oscillator._inv_mod(s0, q)
        add(f"O_{tag} r^2 = I, r s r = s^-1", np.array_equal((r @ r) % q, np.eye(2)) and np.array_equal(rsr, s_inv))
        irr = dualpair.orth_irreps(grp)
        expected = (q + 5) // 2 if tag == "2+" else (q + 7) // 2
        gram = np.array([[dualpair.orth_inner(grp, x.values, y.values) for y in irr] for x in irr])
        add(f"O_{tag} irreps", len(irr) == expected and _max(gram - np.eye(len(irr))) < 1e-9)
        if q <= 7:
            acts = dualpair.build_restricted_actions(sp, psi)
            gens = [oscillator.generator_element(k, 1, q) for k in "ABC"] + [group.GroupElement(2, 0, 0, field.inv(2, q), q)]
            comm = max(
                _max(acts.o_operator(i) @ acts.g_operator(g) - acts.g_operator(g) @ acts.o_operator(i))
                for i in range(grp.order) for g in gens
            )
            add(f"O_{tag} commutes with G", comm < tol, f"{comm:.2e}")
        dec = dualpair.eta_decompose(sp, psi)
        add(f"{tag} reconstruction", dec.residual < 1e-6, f"{dec.residual:.2e}")
        add(f"{tag} sum dim(tau) dim(Theta) = q^2", dec.dimension_check() == q * q)
        appear = {t.tau for t in dec.thetas if t.appears}
        want = {t.tau for t in dec.thetas} - ({"sgn"} if tag == "2-" else set())
        add(f"{tag} appearing tau", appear == want, ",".join(sorted(appear)))
        add(f"{tag} irreducible Theta pairwise distinct", dec.distinct)
    res = dualpair.restriction_identity(q, cfg.psi_a)
    add("restriction = product of oscillator characters", max(res.values()) < tol)

    # character table
    table = dualpair.assemble_chartable(q, cfg.psi_a)
    add("q+4 irreducible characters", len(table.records) == q + 4)
    add("sum dim^2 = |G|", int(np.sum(table.dims**2)) == q * (q * q - 1))
    add("row orthonormality", _max(table.gram() - np.eye(q + 4)) < tol)
    col = (table.values.conj().T @ table.values).real
    add("column orthogonality", _max(col - np.diag(q * (q * q - 1) / table.sizes)) < 1e-6)
    add("first column = dims", _max(table.values[:, 0] - table.dims) < tol)
    census = [len(table.by_rank(k)) for k in (0, 1, 2)]
    add("rank census (1, 4, q-1)", census == [1, 4, q - 1], str(census))
    st = table.get("St").values
    fixed = np.array([group.fixed_lines(c.rep) - 1 for c in classes])
    add("Theta(1) of 2- = Steinberg", _max(st - fixed) < tol)
    d2p = table.decompositions["2+"]
    add("Theta(sgn) of 2+ = 1", _max(d2p.theta("sgn").character - 1) < tol)
    split = {r.dim: r for r in table.by_rank(1)}
    ok = True
    for tag in ("2+", "2-"):
        for tau in ("tau+", "tau-"):
            chi = table.decompositions[tag].theta(tau).character
            ok &= any(_max(chi - r.values) < tol for r in table.by_rank(1))
    add("Theta(tau+-) are rank-one components", ok and len(split) == 2)
    f2 = dualpair.verify_F2(table)
    add("F^2 covers every rank-two irrep", f2.ok, f"{len(f2.covered_rank2)} covered")
    if q <= 13:
        add("invariant split", dualpair.invariant_split_check(q, cfg.psi_a).ok())
    if q <= ORBIT_CAP:
        fam = heisenberg.diagonal_orbit_families(q)
        n_uv = _uv_norm(q, psi, "2+")
        add(
            "diagonal orbits = 2q+1 = (chi_UV, chi_UV)",
            sum(fam.values()) == 2 * q + 1 and abs(n_uv - (2 * q + 1)) < 1e-6
            and (fam["pairing"], fam["proportional"], fam["degenerate"]) == (q - 1, q - 1, 3),
        )

    # commutator map
    crep = harmonic.commutator_report(q, table, brute=cfg.wants_brute(), force=True)
    add("N(I) = q+4", abs(crep.frobenius[0] - (q + 4)) < 1e-9)
    add("sum_g N(g) = |G|", abs(crep.total_mass() - q * (q * q - 1)) < 1e-6)
    if crep.brute is not None:
        add("brute force = Frobenius", crep.oracle_residual() < 1e-6, f"{crep.oracle_residual():.2e}")
    out.extend(bounds_checks(cfg, table))
    ids = harmonic.identity_suite(q, table)
    for name in ("X++-", "X_q-1", "X_2-_2+_St", "X2-"):
        bad = [c.cls for c in ids.corrected if c.name == name and not c.ok]
        add(f"identity {name}", not bad, ";".join(bad))
    return out


def checks_csv(checks: list[Check]) -> str:
    return _csv(["check", "status", "detail"], [[c.name, "pass" if c.ok else "fail", c.detail] for c in checks])


# -- entry point ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tensorrank", description="Character theory of SL_2(F_q) via oscillator representations.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--q", type=int, required=True, help="odd prime, 3 <= q <= 101")
    p.add_argument("--psi-a", type=int, default=1, help="additive character parameter (nonzero mod q)")
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--out", type=Path, default=None, help="output file or directory (default: $TENSOR_RANK_OUT, else stdout)")
    p.add_argument("--force-brute", action="store_true", help=f"allow brute-force fiber counts above q={BRUTE_CAP}")
    p.add_argument("--brute", choices=("auto", "on", "off"), default="auto", help="brute-force oracle column for commutator/verify")
    return p


def parse_config(argv) -> RunConfig:
    args = build_parser().parse_args(argv)
    try:
        q = field.check_modulus(args.q)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.psi_a % q == 0:
        raise UsageError("--psi-a must be nonzero mod q")
    if not 0 < args.tol <= 1e-3:
        raise UsageError("--tol must lie in (0, 1e-3]")
    out = args.out
    if out is None and os.environ.get("TENSOR_RANK_OUT"):
        out = Path(os.environ["TENSOR_RANK_OUT"])
    return RunConfig(args.command, q, args.psi_a % q, args.tol, out, args.force_brute, args.brute)


def produce(cfg: RunConfig) -> tuple[str, int]:
    """(csv text, exit code) for a validated configuration."""
    if cfg.command in ("verify", "bounds"):
        checks = verify_checks(cfg) if cfg.command == "verify" else bounds_checks(cfg)
        return checks_csv(checks), 0 if all(c.ok for c in checks) else 1
    maker = {
        "classes": classes_csv,
        "chartable": chartable_csv,
        "ratios": ratios_csv,
        "eta": eta_csv,
        "commutator": commutator_csv,
        "orbits": orbits_csv,
    }[cfg.command]
    return maker(cfg), 0


def _write(cfg: RunConfig, text: str) -> None:
    if cfg.out is None:
        sys.stdout.write(text)
        return
    path = cfg.out
    if path.is_dir() or (not path.suffix and not path.exists()):
        path.mkdir(parents=True, exist_ok=True)
        path = path / f"{cfg.command}_q{cfg.q}.csv"
    path.write_text(text, encoding="utf-8")


def run(argv=None) -> int:
    try:
        cfg = parse_config(argv)
    except SystemExit as exc:  # argparse usage errors
        return int(exc.code or 0)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    try:
        text, code = produce(cfg)
    except CapExceeded as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return 3
    except IntegrityError as exc:
        print(f"integrity error: {exc}", file=sys.stderr)
        return 1
    _write(cfg, text)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
