"""Batch verifier: runs the check suites over a list of N and writes a report.

Usage::

    bqiso-verify --n 3,4 --suite all --json report.json
    bqiso-verify diff old.json new.json
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable, Optional

from . import braided, frt, ncalg, poisson
from .scalars import q
from .tensor import TensorOp, compose, dump, right_symmetrize

SUITES = ("frt", "poisson", "lorentz", "quantum", "obstructions")
MUTATIONS = ("sigma_q", "minus_w", "b_identity")
N_RANGE = (2, 8)
LORENTZ_N = 4

# check id -> formula the check establishes (also printed by --list-checks)
ANCHORS = {
    "frt.spectral_reconstruction": "W^ = q P+ - q^-1 P- + q^(1-N) P0",
    "frt.projector_ranks": "rank P+, P-, P0 = N(N+1)/2-1, N(N-1)/2, 1",
    "frt.r_hat_involutive": "R^ = I - 2 P-, R^ R^ = I",
    "frt.ybe_w": "W12 W13 W23 = W23 W13 W12",
    "frt.reality_w": "W star(W) = I",
    "frt.metric_compat": "W13 W23 eta12 = eta12",
    "frt.sigma": "P- (W^ + sigma I) = 0 at sigma = q^-1",
    "poisson.cybe": "[[w, w]] = 0 for w = dW/dq at q = 1",
    "poisson.nu_extraction": "s = nu s~ with s~ the Killing element",
    "poisson.killing_identity": "s~ - P s~ = I - P",
    "poisson.drinfeld_rr_ss": "[[r, r]] = -[[s, s]], [[r+s, r+s]] = 0",
    "poisson.omega_formula": "Omega = [s~12, s~13] equals its eight-term index form",
    "poisson.omega_sym3": "Omega x1 x2 x3 = 0",
    "poisson.jacobi_r_plus_s": "Jacobi identity on G x G for w = r + s",
    "poisson.jacobi_r_only": "w = r breaks Jacobi on (x,h,h) and (x,x,h) by the closed-form tensors",
    "poisson.braiding": "(s - Ps) x1 h2 x'2 + h2 {x1,x'2} + h1 {x'1,x2} = 0 solved by nu",
    "poisson.dilation": "bracket homogeneous under x -> lambda x",
    "poisson.comultiplication": "Delta h = h h', Delta x = x + h x' is Poisson",
    "poisson.projection": "G -> H projection is Poisson",
    "lorentz.metric_preserved": "M_i, L_i in so(1,3)",
    "lorentz.killing_match": "s~ = M.M - L.L",
    "lorentz.rotation_sign": "[M1, M2] = sign M3",
    "lorentz.i_s_antisym": "P (i s~) = -(i s~)",
    "lorentz.braiding_s_tilde": "braiding equation solvable for s = nu s~",
    "lorentz.braiding_i_s_tilde": "braiding equation unsolvable for s = nu (i s~)",
    "lorentz.i_omega": "[i s~12, s~13] x1 x2 x3",
    "quantum.matrix_lemma": "P-12 (W^'12 + sigma I) = 0",
    "quantum.sigma_unique": "sigma = q^-1 is the only candidate +-q^k",
    "quantum.x_dimension": "dim of degree-d x-polynomials = binom(N+d-1, d)",
    "quantum.h_dimension": "dim of degree-2 h-polynomials = binom(N^2+1, 2)",
    "quantum.h_dimension_w_form": "W h1 h2 = h2 h1 W degree-2 dimension",
    "quantum.delta.rtt": "Delta preserves R h1 h2 = h2 h1 R",
    "quantum.delta.rtt_w": "Delta preserves W h1 h2 = h2 h1 W",
    "quantum.delta.xh": "Delta preserves x2 h1 = W' h1 x2",
    "quantum.delta.xx": "Delta preserves P- x1 x2 = 0",
    "quantum.delta.metric": "Delta preserves h1 h2 eta = eta and eta' h1 h2 = eta'",
    "quantum.delta_brute": "Delta preservation by plain linear algebra in the square",
    "quantum.inclusion": "square relations restricted to h, x equal the single-copy ones",
    "quantum.reality_propagation": "star-closed x h relations iff W' star(W') = I",
    "quantum.involutivity": "x2 h1 = R h1 x2 iff h2 x1 = R x1 h2 for involutive R^",
    "quantum.involutivity_what": "the same equivalence fails for W^",
    "quantum.consistency": "R12 W'13 W'23 = W'23 W'13 R12, W'12 W'13 R23 = R23 W'13 W'12",
    "quantum.mutation.sigma_q": "sigma := q breaks Delta on P- x1 x2 = 0",
    "quantum.mutation.minus_w": "W' := -W at sigma = q^-1 breaks Delta on P- x1 x2 = 0",
    "quantum.mutation.b_identity": "B := I breaks Delta on P- x1 x2 = 0",
    "quantum.mutation.q_one": "q = 1, sigma = 1 preserves every relation",
    "quantum.minus_w_resolved": "W' = -W with its own sigma: Delta and classical limit",
    "quantum.w_inverse_branch": "W'^ ~ W^-1 with sigma = q",
    "obstruction.r_ybe": "W' = R forces R12 R13 R23 = R23 R13 R12, hence q = 1",
    "obstruction.ordering_identities": "ordering identities with W' = R",
}


@dataclass
class CheckRecord:
    check: str
    anchor: str
    N: int
    status: str  # pass | fail | recorded
    defect_summary: str = ""
    inputs: dict = field(default_factory=dict)
    wall_time: Optional[float] = None

    def as_json(self, timings: bool) -> dict:
        out = asdict(self)
        if not timings:
            out.pop("wall_time")
        return out


@dataclass
class RunConfig:
    n_list: list
    suites: tuple = SUITES
    degree_max: int = 4
    mutate: Optional[str] = None
    timings: bool = False

    def validate(self) -> None:
        lo, hi = N_RANGE
        bad = [n for n in self.n_list if not lo <= n <= hi]
        if bad:
            raise ValueError(f"N must lie in [{lo}, {hi}]: {bad}")
        if not 1 <= self.degree_max <= ncalg.DEGREE_CAP:
            raise ValueError(f"degree-max must lie in [1, {ncalg.DEGREE_CAP}]")
        unknown = set(self.suites) - set(SUITES)
        if unknown:
            raise ValueError(f"unknown suites: {sorted(unknown)}")
        if self.mutate is not None and self.mutate not in MUTATIONS:
            raise ValueError(f"unknown mutation {self.mutate!r}")


def _short(text: str, limit: int = 240) -> str:
    text = " ".join(str(text).split())
    return text if len(text) <= limit else text[: limit - 3] + "..."


def _op_summary(op: TensorOp) -> str:
    if op.is_zero():
        return ""
    idx, v = next(op.entries())
    return _short(f"{op.nnz()} nonzero entries, first {idx}: {v.to_text()}")


class Runner:
    """Collects records; every check body returns ``(status, summary)``."""

    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        self.records: list[CheckRecord] = []
        self._data: dict = {}
        self._classical: dict = {}

    def data(self, n: int) -> frt.SoQData:
        if n not in self._data:
            self._data[n] = frt.build(n)
        return self._data[n]

    def classical(self, n: int):
        if n not in self._classical:
            self._classical[n] = frt.classical_limit(self.data(n))
        return self._classical[n]

    def run_check(self, check: str, n: int, body: Callable, **inputs) -> None:
        start = time.perf_counter()
        try:
            status, summary = body()
            if isinstance(status, bool):
                status = "pass" if status else "fail"
        except Exception as exc:  # a crashing check is a failed check, not a crashed run
            status, summary = "fail", f"{type(exc).__name__}: {exc}"
        elapsed = round(time.perf_counter() - start, 3)
        self.records.append(CheckRecord(check, ANCHORS[check], n, status, _short(summary),
                                        dict(sorted(inputs.items())), elapsed))

    def run(self) -> list[CheckRecord]:
        self.cfg.validate()
        for suite in SUITES:
            if suite not in self.cfg.suites:
                continue
            if suite == "lorentz":
                if self.cfg.n_list:
                    lorentz_suite(self)
                continue
            for n in self.cfg.n_list:
                SUITE_FUNCS[suite](self, n)
        return self.records


# ---------------------------------------------------------------------------
# Suites


def frt_suite(rt: Runner, n: int) -> None:
    d = rt.data(n)

    def ranks():
        got, want = d.ranks(), frt.expected_ranks(n)
        return got == want, "" if got == want else f"got {got}, want {want}"

    def involutive():
        defect = compose(d.r_hat, d.r_hat) - TensorOp.identity(n, 2)
        return defect.is_zero(), _op_summary(defect)

    def sigma():
        s = frt.check_spectral_condition(d)
        return s == q(-1), "" if s == q(-1) else f"sigma = {s}"

    rt.run_check("frt.spectral_reconstruction", n,
                 lambda: _zero(frt.spectral_reconstruction_defect(d)))
    rt.run_check("frt.projector_ranks", n, ranks)
    rt.run_check("frt.r_hat_involutive", n, involutive)
    rt.run_check("frt.ybe_w", n, lambda: _zero(frt.ybe_defect(d.w_mat)))
    rt.run_check("frt.reality_w", n, lambda: _zero(frt.check_reality(d)[1]))
    rt.run_check("frt.metric_compat", n, lambda: _zero(frt.check_metric_compat(d)[1]))
    rt.run_check("frt.sigma", n, sigma)


def _zero(op: TensorOp):
    return op.is_zero(), _op_summary(op)


def poisson_suite(rt: Runner, n: int) -> None:
    cl = rt.classical(n)
    spec = poisson.spec_from_classical(cl, "r+s")

    def nu():
        return cl.nu is not None, f"nu = {cl.nu}" if cl.nu is not None else "s is not a multiple of s~"

    def drinfeld():
        rr, ss = poisson.drinfeld_bracket(cl.r), poisson.drinfeld_bracket(cl.s)
        total = poisson.drinfeld_bracket(cl.r + cl.s)
        ok = (rr + ss).is_zero() and total.is_zero()
        return ok, _op_summary(rr + ss) or _op_summary(total)

    def omega_formula():
        diff = poisson.omega(cl.eta) - poisson.omega_closed_form(cl.eta)
        return _zero(diff)

    def omega_sym():
        return _zero(right_symmetrize(poisson.omega(cl.eta)))

    def jacobi_rs():
        rep = poisson.check_jacobi_all_generators(spec)
        summary = (f"{rep.triples} triples, {rep.identically_zero} identically zero, "
                   f"{len(rep.zero_on_group)} zero on the group")
        if rep.failures:
            summary = f"{len(rep.failures)} failing, first {rep.failures[0][1]}: {rep.failures[0][2]}"
        return rep.ok, summary

    def jacobi_r():
        if poisson.drinfeld_bracket(cl.r).is_zero():
            return "recorded", "r is triangular, so w = r is a Poisson structure here"
        rep = poisson.check_jacobi_all_generators(poisson.spec_from_classical(cl, "r"))
        shapes = sorted(rep.failing_shapes())
        # (x,h,h) and (x,x,h), sorted as h < x; primed copies mirror them
        want = {"h,h,x", "h,x,x"}
        allowed = want | {"h',h',x'", "h',x',x'"}
        ok = want <= set(shapes) <= allowed and not rep.closed_form_mismatches
        summary = (f"failing shapes {shapes}; closed forms {rep.closed_form_checked} checked, "
                   f"{len(rep.closed_form_mismatches)} mismatched")
        return ok, summary

    def braiding():
        br = poisson.check_braiding_equation(spec)
        ok = br.solvable and bool(br.nu_matches)
        return ok, f"solvable={br.solvable} nu={br.nu_solution} spec nu={br.nu_spec} {br.residual}"

    def comult():
        rep = poisson.check_comultiplication_poisson(spec)
        if rep.failures:
            return False, f"{rep.failures[0][0]}: {rep.failures[0][1]}"
        return True, f"{rep.pairs} pairs, {len(rep.zero_on_group)} zero on the group"

    rt.run_check("poisson.cybe", n, lambda: _zero(cl.cybe_defect))
    rt.run_check("poisson.nu_extraction", n, nu)
    rt.run_check("poisson.killing_identity", n, lambda: _zero(poisson.killing_defect(cl.eta)))
    rt.run_check("poisson.drinfeld_rr_ss", n, drinfeld)
    rt.run_check("poisson.omega_formula", n, omega_formula)
    rt.run_check("poisson.omega_sym3", n, omega_sym)
    rt.run_check("poisson.jacobi_r_plus_s", n, jacobi_rs, coupler="r+s")
    rt.run_check("poisson.jacobi_r_only", n, jacobi_r, coupler="r")
    rt.run_check("poisson.braiding", n, braiding)
    rt.run_check("poisson.dilation", n, lambda: (poisson.check_dilation_grading(spec), ""))
    rt.run_check("poisson.comultiplication", n, comult)
    rt.run_check("poisson.projection", n, lambda: (poisson.projection_is_poisson(spec), ""))


def lorentz_braiding(s_sym: TensorOp) -> poisson.BraidingReport:
    n = LORENTZ_N
    spec = poisson.PoissonSpec(n, TensorOp.zero(n, 2), s_sym=s_sym,
                               eta_classical=poisson.lorentz_eta(), basis="diagonal")
    return poisson.check_braiding_equation(spec)


def lorentz_suite(rt: Runner) -> None:
    n = LORENTZ_N
    eta = poisson.lorentz_eta()
    ts = poisson.lorentz_tensors()
    swap = TensorOp.swap(n)

    def preserved():
        ms, ls = poisson.lorentz_generators()
        return all(poisson.preserves_metric(x, eta) for x in ms + ls), ""

    def sign():
        return "recorded", f"[M1, M2] = {poisson.rotation_sign():+d} M3"

    def braid_s():
        br = lorentz_braiding(ts["s_tilde"])
        return br.solvable, f"nu = {br.nu_solution} {br.residual}"

    def braid_is():
        br = lorentz_braiding(ts["i_s_tilde"])
        return not br.solvable, "unsolvable" if not br.solvable else f"solved with nu = {br.nu_solution}"

    def i_omega():
        t = poisson.i_omega_symmetric_part(eta, ts["i_s_tilde"])
        return "recorded", "zero" if t.is_zero() else f"nonzero, {t.nnz()} entries"

    rt.run_check("lorentz.metric_preserved", n, preserved, basis="diagonal")
    rt.run_check("lorentz.killing_match", n,
                 lambda: _zero(ts["s_tilde"] - poisson.killing_element(eta)), basis="diagonal")
    rt.run_check("lorentz.rotation_sign", n, sign, basis="diagonal")
    rt.run_check("lorentz.i_s_antisym", n,
                 lambda: _zero(compose(swap, ts["i_s_tilde"]) + ts["i_s_tilde"]), basis="diagonal")
    rt.run_check("lorentz.braiding_s_tilde", n, braid_s, basis="diagonal")
    rt.run_check("lorentz.braiding_i_s_tilde", n, braid_is, basis="diagonal")
    rt.run_check("lorentz.i_omega", n, i_omega, basis="diagonal")


_MUTATION_ARGS = {
    "sigma_q": dict(sigma=q(1)),
    "minus_w": dict(w_prime_choice="minus_W", sigma=q(-1)),
    "b_identity": dict(sigma=1),
}


def _delta_summary(rep: braided.DeltaReport) -> str:
    bad = [f for f in rep.families.values() if not f.ok]
    if not bad:
        return ", ".join(f"{f.family}:{f.relations}" for f in rep.families.values())
    f = bad[0]
    return f"{f.family}: {f.failures}/{f.relations} fail, residual {f.residual}"


def _mutation_fails(d: frt.SoQData, name: str):
    spec = braided.assemble(d, **_MUTATION_ARGS[name])
    rep = braided.check_delta_preserves(spec, families=("xx",))
    return not rep.ok, _delta_summary(rep)


def quantum_suite(rt: Runner, n: int) -> None:
    d = rt.data(n)
    mut = rt.cfg.mutate
    spec = braided.assemble(d, **_MUTATION_ARGS[mut]) if mut else braided.assemble(d)
    tag = {"mutation": mut} if mut else {}
    delta: dict = {}

    def lemma():
        ok, defect, agree = braided.check_matrix_lemma(spec)
        return ok and agree, _op_summary(defect)

    def unique():
        found = braided.scan_sigma(d)
        return found == [q(-1)], "candidates " + ", ".join(str(s) for s in found)

    def x_dim():
        xa = braided.x_algebra(d)
        got = [ncalg.graded_dimension(xa, {"x": k}) for k in range(1, rt.cfg.degree_max + 1)]
        want = [math.comb(n + k - 1, k) for k in range(1, rt.cfg.degree_max + 1)]
        return got == want, f"got {got}, want {want}"

    def h_dim(form):
        def body():
            got = ncalg.graded_dimension(braided.h_algebra(d, form), {"h": 2})
            want = math.comb(n * n + 1, 2)
            if form == "W":
                return "recorded", f"{got} (commutative count {want})"
            return got == want, f"got {got}, want {want}"
        return body

    def family(names):
        def body():
            if "rep" not in delta:
                delta["rep"] = braided.check_delta_preserves(spec)
            fams = [delta["rep"].families[k] for k in names]
            bad = [f for f in fams if not f.ok]
            if bad:
                return False, f"{bad[0].failures}/{bad[0].relations} fail, residual {bad[0].residual}"
            return True, f"{sum(f.relations for f in fams)} relations"
        return body

    def brute():
        rep = braided.check_delta_preserves(spec, route="brute")
        return rep.ok, _delta_summary(rep)

    def involutive():
        res = braided.involutivity_equivalence(d)
        return res["involutive"] and res["same_span"], str(res)

    def involutive_what():
        res = braided.involutivity_equivalence(d, d.what)
        return not res["same_span"], str(res)

    def reality():
        res = braided.reality_propagation(spec)
        return res["star_closed"] and res["reality"], str(res)

    def consistency():
        ids = braided.consistency_identities(spec.w_prime, d.r_mat)
        bad = [k for k, v in ids.items() if not v.is_zero()]
        return not bad, "; ".join(bad)

    def q_one():
        spec1 = braided.assemble(d, q_value=1)
        rep = braided.check_delta_preserves(spec1)
        return rep.ok, f"sigma = {spec1.sigma}; " + _delta_summary(rep)

    def recorded_branch(choice, **kw):
        def body():
            sp = braided.assemble(d, w_prime_choice=choice, **kw)
            rep = braided.check_delta_preserves(sp)
            flag = "limit ok" if sp.classical_limit_ok else "no classical limit"
            return "recorded", (f"sigma = {sp.sigma}; Delta {'preserved' if rep.ok else 'broken'}; "
                                f"{flag}; " + _delta_summary(rep))
        return body

    rt.run_check("quantum.matrix_lemma", n, lemma, sigma=spec.sigma.to_text(), **tag)
    rt.run_check("quantum.sigma_unique", n, unique)
    rt.run_check("quantum.x_dimension", n, x_dim, degree_max=rt.cfg.degree_max)
    if n <= 3:
        rt.run_check("quantum.h_dimension", n, h_dim("R"), form="R")
        rt.run_check("quantum.h_dimension_w_form", n, h_dim("W"), form="W")
    rt.run_check("quantum.delta.rtt", n, family(["rtt"]), **tag)
    rt.run_check("quantum.delta.rtt_w", n, family(["rtt_w"]), **tag)
    rt.run_check("quantum.delta.xh", n, family(["xh"]), **tag)
    rt.run_check("quantum.delta.xx", n, family(["xx"]), **tag)
    rt.run_check("quantum.delta.metric", n, family(["metric", "metric'"]), **tag)
    if n == 2:
        rt.run_check("quantum.delta_brute", n, brute, **tag)
    rt.run_check("quantum.inclusion", n, lambda: (braided.inclusion_preserved(spec), ""))
    rt.run_check("quantum.reality_propagation", n, reality)
    rt.run_check("quantum.involutivity", n, involutive)
    rt.run_check("quantum.involutivity_what", n, involutive_what)
    rt.run_check("quantum.consistency", n, consistency)
    for name in MUTATIONS:
        rt.run_check(f"quantum.mutation.{name}", n, lambda name=name: _mutation_fails(d, name))
    rt.run_check("quantum.mutation.q_one", n, q_one)
    if n <= 4:
        rt.run_check("quantum.minus_w_resolved", n, recorded_branch("minus_W"))
        rt.run_check("quantum.w_inverse_branch", n, recorded_branch("W_inverse"))


def obstruction_suite(rt: Runner, n: int) -> None:
    d = rt.data(n)

    def ybe():
        rep = braided.obstruction_unbraided(d)
        summary = f"defect nnz {rep.nnz}, zero at q=1: {rep.defect_at_one_zero}"
        if n == 2:
            # so(2) is abelian and its R satisfies Yang-Baxter identically
            return "recorded", summary
        return rep.confirmed, summary

    def ordering():
        rep = braided.obstruction_unbraided(d)
        broken = [k for k, ok in rep.identities.items() if not ok]
        if n == 2:
            return "recorded", f"broken: {broken}"
        return bool(broken), f"broken: {broken}"

    rt.run_check("obstruction.r_ybe", n, ybe)
    rt.run_check("obstruction.ordering_identities", n, ordering)


SUITE_FUNCS = {"frt": frt_suite, "poisson": poisson_suite, "quantum": quantum_suite,
               "obstructions": obstruction_suite}


# ---------------------------------------------------------------------------
# Output


def run(cfg: RunConfig) -> list[CheckRecord]:
    return Runner(cfg).run()


def report_json(records: list[CheckRecord], timings: bool = False) -> str:
    return json.dumps([r.as_json(timings) for r in records], indent=2, sort_keys=True) + "\n"


def report_text(records: list[CheckRecord], timings: bool = False) -> str:
    width = max([len(r.check) for r in records] + [5])
    lines = [f"{'check':<{width}}  {'N':>2}  {'status':<8}  {'time' if timings else ''}".rstrip()]
    for r in records:
        t = f"{r.wall_time:8.3f}s  " if timings else ""
        lines.append(f"{r.check:<{width}}  {r.N:>2}  {r.status:<8}  {t}{r.defect_summary}".rstrip())
    return "\n".join(lines) + "\n"


def failed(records) -> list:
    return [r for r in records if (r["status"] if isinstance(r, dict) else r.status) == "fail"]


def diff_reports(a: list, b: list) -> str:
    """Status changes between two JSON reports, keyed by (check, N)."""
    ka = {(r["check"], r["N"]): r["status"] for r in a}
    kb = {(r["check"], r["N"]): r["status"] for r in b}
    lines = []
    for key in sorted(ka.keys() & kb.keys()):
        if ka[key] != kb[key]:
            lines.append(f"{key[0]} N={key[1]}: {ka[key]} -> {kb[key]}")
    only_a, only_b = sorted(ka.keys() - kb.keys()), sorted(kb.keys() - ka.keys())
    if only_a or only_b:
        lines.append(f"check sets differ: {len(only_a)} only in first, {len(only_b)} only in second")
        lines += [f"  - {c} N={n}" for c, n in only_a]
        lines += [f"  + {c} N={n}" for c, n in only_b]
    return "\n".join(lines) + ("\n" if lines else "")


def _vec_dump(v) -> str:
    lines = []
    for k in sorted(v.data):
        idx = f"{k} 0" if v.side == "vec" else f"0 {k}"
        lines.append(f"{v.legs} {v.n} | {idx} | {v.data[k].to_text()}")
    return "\n".join(lines) + "\n"


def dump_tensors(directory: Path, n_list: list) -> None:
    directory.mkdir(parents=True, exist_ok=True)
    for n in n_list:
        d = frt.build(n)
        ops = {"W": d.w_mat, "W_hat": d.what, "R_hat": d.r_hat, "P_plus": d.p_plus,
               "P_minus": d.p_minus, "P_zero": d.p_zero}
        for name, op in ops.items():
            (directory / f"N{n}_{name}.txt").write_text(dump(op))
        (directory / f"N{n}_eta.txt").write_text(_vec_dump(d.eta))
        (directory / f"N{n}_eta_prime.txt").write_text(_vec_dump(d.eta_prime))
        (directory / f"N{n}_header.json").write_text(json.dumps(d.header(), sort_keys=True) + "\n")


def _parse_n(text: str) -> list:
    return [int(t) for t in text.split(",") if t.strip()]


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bqiso-verify", description=__doc__.splitlines()[0])
    p.add_argument("--n", type=_parse_n, default=[3], help="comma-separated N values")
    p.add_argument("--suite", default="all", help="all or a comma-separated subset of " + ",".join(SUITES))
    p.add_argument("--degree-max", type=int, default=4)
    p.add_argument("--json", type=Path, help="write the JSON report here")
    p.add_argument("--format", choices=("json", "text"), default="text", help="stdout format")
    p.add_argument("--dump-tensors", type=Path, metavar="DIR")
    p.add_argument("--mutate", choices=MUTATIONS, help="run the quantum suite on a mutated structure")
    p.add_argument("--timings", action="store_true", help="include wall times (breaks byte-stability)")
    p.add_argument("--list-checks", action="store_true")
    return p


def diff_main(argv: list) -> int:
    p = argparse.ArgumentParser(prog="bqiso-verify diff")
    p.add_argument("first", type=Path)
    p.add_argument("second", type=Path)
    args = p.parse_args(argv)
    a, b = (json.loads(path.read_text()) for path in (args.first, args.second))
    sys.stdout.write(diff_reports(a, b))
    return 0


def main(argv: Optional[list] = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    if argv[:1] == ["diff"]:
        return diff_main(argv[1:])
    args = build_parser().parse_args(argv)
    if args.list_checks:
        for k, v in ANCHORS.items():
            print(f"{k:<34} {v}")
        return 0
    suites = SUITES if args.suite == "all" else tuple(s.strip() for s in args.suite.split(","))
    cfg = RunConfig(args.n, suites, args.degree_max, args.mutate, args.timings)
    try:
        cfg.validate()
    except ValueError as exc:
        print(f"bqiso-verify: {exc}", file=sys.stderr)
        return 2
    if args.dump_tensors:
        dump_tensors(args.dump_tensors, cfg.n_list)
    records = run(cfg)
    js = report_json(records, cfg.timings)
    if args.json:
        args.json.write_text(js)
    sys.stdout.write(js if args.format == "json" else report_text(records, cfg.timings))
    return 1 if failed(records) else 0


if __name__ == "__main__":
    sys.exit(main())
