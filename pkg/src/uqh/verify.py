"""Verification suites: named groups of checks run for one r, collected in a report."""

from __future__ import annotations

import os
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import decomp, mtrace, quiver, ribbon
from .modules import (
    Character,
    Weight,
    check_module_axioms,
    dual,
    module_from_json,
    module_to_json,
    onedim_C,
    projective_P,
    qint_X,
    shifted,
    simple_S,
    tensor,
    typical_V,
)
from .scalar import make_field
from .structure import casimir, casimir_alt, chebyshev_identity_check, nilpotent_x

__all__ = ["Check", "VerificationReport", "SUITES", "run_suite", "run_all", "SUITE_NAMES"]


@dataclass
class Check:
    id: str
    status: str
    detail: str = ""
    elapsed_ms: float = 0.0

    def to_json(self, timings=False):
        out = {"check-id": self.id, "status": self.status, "detail": self.detail}
        if timings:
            out["elapsed-ms"] = round(self.elapsed_ms, 1)
        return out


@dataclass
class VerificationReport:
    suite: str
    r: int
    backend: str = "exact"
    checks: list = field(default_factory=list)

    @property
    def overall(self) -> str:
        return "fail" if any(c.status == "fail" for c in self.checks) else "pass"

    def failed(self) -> list:
        return [c for c in self.checks if c.status == "fail"]

    def get(self, prefix: str) -> list:
        return [c for c in self.checks if c.id.startswith(prefix)]

    def to_json(self, timings=False):
        return {
            "suite": self.suite,
            "r": self.r,
            "backend": self.backend,
            "checks": [c.to_json(timings) for c in self.checks],
            "overall": self.overall,
        }


class _Runner:
    def __init__(self, report):
        self.report = report

    def check(self, cid, fn):
        t0 = time.perf_counter()
        try:
            res = fn()
        except Exception as exc:  # a crashing check is a failing check
            res = (False, f"{type(exc).__name__}: {exc}")
        ok, detail = res if isinstance(res, tuple) else (res, "")
        status = "skipped" if ok is None else ("pass" if ok else "fail")
        self.report.checks.append(Check(cid, status, str(detail), (time.perf_counter() - t0) * 1000))

    def skip(self, cid, why):
        self.report.checks.append(Check(cid, "skipped", why))


def _alphas(rng, n):
    """Generic weights away from the integers."""
    out = []
    while len(out) < n:
        a = complex(rng.uniform(-3, 3), rng.uniform(-0.5, 0.5))
        if abs(a - round(a.real)) > 0.05:
            out.append(a)
    return out


def _constructors(r):
    ctx = make_field(r)
    mods = [simple_S(ctx, n) for n in range(r)]
    mods += [projective_P(ctx, i) for i in range(r)]
    mods += [typical_V(ctx, k * r) for k in (-1, 0, 1)]
    mods += [onedim_C(ctx, k) for k in (-1, 0, 1, 2)]
    mods += [shifted(projective_P(ctx, 0), 1), shifted(simple_S(ctx, r - 1), -1)]
    mods += [dual(projective_P(ctx, i)) for i in range(r)]
    mods += [tensor(simple_S(ctx, 1 % r), projective_P(ctx, 0)), tensor(projective_P(ctx, 0), typical_V(ctx, 0))]
    return mods


# -- suites --------------------------------------------------------------------------------


def suite_axioms(run, r, rng, tol):
    for V in _constructors(r):
        run.check(f"axioms:{V.label}", lambda V=V: (all(check_module_axioms(V).values()), ""))
    for k, a in enumerate(_alphas(rng, 5)):
        V = typical_V(make_field(r), a, tol=tol)
        run.check(f"axioms:V_alpha[{k}]", lambda V=V, a=a: (all(check_module_axioms(V).values()), f"alpha={a:.6f}"))
    ctx = make_field(r)
    for i in range(r - 1):
        P = projective_P(ctx, i)
        alt = qint_X(i + 1).scale(2) + (Character.monomial(r) + Character.monomial(-r)) * qint_X(r - i - 1)
        run.check(f"character:P_{i}", lambda P=P, alt=alt: (P.character() == alt == decomp.label_character(("P", i, 0), r), ""))
    run.check("roundtrip:json", lambda: _roundtrip(r))


def _roundtrip(r):
    import json

    for V in _constructors(r):
        s = json.dumps(module_to_json(V), sort_keys=True)
        W = module_from_json(json.loads(s))
        if json.dumps(module_to_json(W), sort_keys=True) != s:
            return False, V.label
    return True, ""


def suite_casimir(run, r, rng, tol):
    ctx = make_field(r)
    mods = [simple_S(ctx, n) for n in range(r)] + [projective_P(ctx, i) for i in range(r)]
    mods += [typical_V(ctx, k * r) for k in (-1, 1)]
    mods += [tensor(simple_S(ctx, 1 % r), projective_P(ctx, 0)), tensor(simple_S(ctx, r - 1), simple_S(ctx, r - 1))]
    mods += [tensor(projective_P(ctx, 0), typical_V(ctx, r))]
    for V in mods:
        run.check(f"chebyshev:{V.label}", lambda V=V: chebyshev_identity_check(V))
        run.check(f"casimir-forms:{V.label}", lambda V=V: V.backend.equal(casimir(V), casimir_alt(V)))
    for k, a in enumerate(_alphas(rng, 20)):
        V = typical_V(ctx, a, tol=1e-8)
        run.check(f"chebyshev:V_alpha[{k}]", lambda V=V, a=a: (chebyshev_identity_check(V), f"alpha={a:.6f}"))


def suite_ribbon(run, r, rng, tol):
    ctx = make_field(r)
    if r > 5:
        run.skip("ribbon:pairs", "full pair sweep is run for r <= 5")
    pool = [simple_S(ctx, n) for n in range(r)] + [projective_P(ctx, i) for i in range(r)]
    pool += [onedim_C(ctx, 1), onedim_C(ctx, -1)]
    for V in pool:
        run.check(f"zigzag:{V.label}", lambda V=V: all(ribbon.zigzag_checks(V).values()))
        run.check(f"compat:{V.label}", lambda V=V: all(ribbon.ribbon_compat_checks(V).values()))
    if r <= 5:
        for V in pool:
            for W in pool:
                run.check(f"ribbon-identity:{V.label},{W.label}", lambda V=V, W=W: ribbon.ribbon_identity_check(V, W))
    small = [simple_S(ctx, 1 % r), onedim_C(ctx, 1), projective_P(ctx, 0)]
    for a in small:
        for b in small:
            for c in small:
                if sum(m.dim > 2 for m in (a, b, c)) > 1 and r > 3:
                    continue
                run.check(
                    f"yang-baxter:{a.label},{b.label},{c.label}",
                    lambda a=a, b=b, c=c: ribbon.yang_baxter_check(a, b, c),
                )
    for j in range(r - 1):
        P = projective_P(ctx, j)
        conv = ribbon.twist_convention(P)
        run.check(f"twist-stated:P_{j}", lambda P=P, conv=conv: (P.backend.equal(ribbon.twist(P).matrix, ribbon.twist_closed_form_P(P)), f"detector={conv}"))
        run.check(f"twist-rescaled:P_{j}", lambda P=P: P.backend.equal(ribbon.twist(P).matrix, ribbon.twist_closed_form_rescaled(P)))


def _is_scalar_id(B, M, s, tol=1e-8):
    if B.exact:
        return B.equal(M, M.identity_like() * s)
    return np.allclose(np.asarray(M), np.eye(M.shape[0]) * complex(s), atol=tol)


def _endo_equal(P, f, a, b):
    B = P.backend
    return B.equal(f, P.eye() * a + nilpotent_x(P) * b)


def suite_hopf(run, r, rng, tol):
    ctx = make_field(r)
    for i in range(r - 1):
        for j in range(r - 1):
            Si, Sj = simple_S(ctx, i), simple_S(ctx, j)
            run.check(f"phi-SS:{i},{j}", lambda Si=Si, Sj=Sj, i=i, j=j: _is_scalar_id(Sj.backend, ribbon.open_hopf(Si, Sj), ribbon.hopf_SS(ctx, i, j)))
    alphas = _alphas(rng, 3)
    for k, a in enumerate(alphas):
        V = typical_V(ctx, a)
        for i in range(r - 1):
            S = simple_S(ctx, i, "numeric")
            run.check(f"phi-SV:{i},alpha[{k}]", lambda S=S, V=V, i=i, a=a: _is_scalar_id(V.backend, ribbon.open_hopf(S, V), ribbon.hopf_SV(r, i, a)))
        for i in range(r - 1):
            P = projective_P(ctx, i, "numeric")
            run.check(f"phi-PV:{i},alpha[{k}]", lambda P=P, V=V, i=i, a=a: _is_scalar_id(V.backend, ribbon.open_hopf(P, V), ribbon.hopf_PV(r, i, a)))
        b = alphas[(k + 1) % len(alphas)]
        W = typical_V(ctx, Weight.symbol("β"), values={"β": b})
        run.check(f"phi-VV:beta={b:.4f},alpha[{k}]", lambda W=W, V=V, a=a, b=b: _is_scalar_id(V.backend, ribbon.open_hopf(W, V), ribbon.hopf_VV(r, b, a)))
    V0 = typical_V(ctx, 0)
    for j in range(r - 1):
        P = projective_P(ctx, j)
        for i in range(r - 1):
            f = ribbon.open_hopf(simple_S(ctx, i), P)
            for tag, resc in (("stated", False), ("rescaled", True)):
                a, b = ribbon.hopf_SP(ctx, i, j, resc)
                run.check(f"phi-SP-{tag}:{i},{j}", lambda P=P, f=f, a=a, b=b: _endo_equal(P, f, a, b))
        f = ribbon.open_hopf(V0, P)
        for tag, resc in (("stated", False), ("rescaled", True)):
            a, b = ribbon.hopf_V0P(ctx, j, resc)
            run.check(f"phi-V0P-{tag}:{j}", lambda P=P, f=f, a=a, b=b: _endo_equal(P, f, a, b))
        for i in range(r - 1):
            f = ribbon.open_hopf(projective_P(ctx, i), P)
            for tag, resc in (("stated", False), ("rescaled", True)):
                a, b = ribbon.hopf_PP(ctx, i, j, resc)
                run.check(f"phi-PP-{tag}:{i},{j}", lambda P=P, f=f, a=a, b=b: _endo_equal(P, f, a, b))
        run.check(
            f"phi-routes:P_{j}",
            lambda P=P: P.backend.equal(ribbon.open_hopf(simple_S(ctx, 1 % r), P), ribbon.open_hopf_ptr(simple_S(ctx, 1 % r), P)),
        )


def suite_mtrace(run, r, rng, tol):
    ctx = make_field(r)
    tc = mtrace.TraceContext(r)
    alphas = _alphas(rng, 100)

    def forms():
        worst = max(abs(p - q) / max(1.0, abs(p)) for p, q in (mtrace.mdim_typical_forms(a, r) for a in alphas))
        return worst <= 1e-9, f"max relative gap {worst:.2e}"

    run.check("mdim-typical:forms", forms)
    run.check("mdim-typical:V_0", lambda: mtrace.mdim_typical(0, r) == ctx((-1) ** (r - 1)))
    for j in range(r - 1):
        run.check(f"mdim-P:{j}", lambda j=j: (mtrace.mtrace(projective_P(ctx, j), projective_P(ctx, j).eye(), tc) == mtrace.mdim_P(j, r), ""))
        run.check(f"mdim-P-via-V0:{j}", lambda j=j: _via_V0_identity(j, r, tc))
        run.check(f"consistency-chain:{j}", lambda j=j: mtrace.consistency_chain(j, r, tc))
        via = mtrace.x_trace_via_V0(j, r, tc)
        run.check(f"x-trace-stated:{j}", lambda via=via, j=j: (via == mtrace.x_trace_stated(j, r, tc), f"computed={via!r}"))
        run.check(f"x-trace-engine:{j}", lambda via=via, j=j: via == mtrace.x_trace(j, r, tc))
        run.check(f"twist-trace:{j}", lambda j=j: mtrace.twist_trace_check(j, r, tc)["pass"])
    for i in range(r):
        P = projective_P(ctx, i)

        def phicom(P=P):
            rep = mtrace.phicom_check(P, tc)
            return rep["pass"], f"with d(V0)=(-1)^(r-1): {rep['pass']}; with extra factor r: {rep['pass_with_factor_r']}"

        run.check(f"phicom:P_{i}", phicom)
    lam = 3
    tc3 = mtrace.TraceContext(r, tc.normalization * lam)
    run.check(
        "rescaling",
        lambda: all(
            mtrace.mtrace(M, f, tc3) == mtrace.mtrace(M, f, tc) * lam
            for M, f in ((projective_P(ctx, 0), nilpotent_x(projective_P(ctx, 0))), (typical_V(ctx, 0), typical_V(ctx, 0).eye()))
        ),
    )
    # at least 100 sampled morphisms per axiom in total when r <= 4
    samples = -(-100 // (2 * r)) if r <= 4 else 2
    cyc_samples = -(-100 // (2 * (r - 1))) if r <= 4 else 2
    for i in range(r):
        U = projective_P(ctx, i)
        for W in (simple_S(ctx, 1 % r), onedim_C(ctx, -1)):
            run.check(f"trace-axiom:{U.label},{W.label}", lambda U=U, W=W: _axiom(U, W, samples, rng.randrange(10**6), tc))
        run.check(f"pairing:{U.label},{U.label}", lambda U=U: _pairing(U, U, tc))
        if i < r - 1:
            run.check(f"pairing:{U.label},S_{i}", lambda U=U, i=i: _pairing(U, simple_S(ctx, i), tc))
    for i in range(r - 1):
        A = tensor(simple_S(ctx, 1 % r), projective_P(ctx, i))
        Bm = tensor(projective_P(ctx, i), simple_S(ctx, 1 % r))
        run.check(f"cyclicity:{A.label},{Bm.label}", lambda A=A, Bm=Bm: _cyc(A, Bm, cyc_samples, rng.randrange(10**6), tc))
        M = tensor(typical_V(ctx, 0), simple_S(ctx, r - i - 1))
        run.check(f"cyclicity:P_{i},{M.label}", lambda M=M, i=i: _cyc(projective_P(ctx, i), M, cyc_samples, rng.randrange(10**6), tc))


def _via_V0_identity(j, r, tc):
    from .decomp import hom_from, hom_to
    from .ribbon import ptr_right

    ctx = make_field(r)
    V0, S = typical_V(ctx, 0), simple_S(ctx, r - j - 1)
    M = tensor(V0, S)
    P = projective_P(ctx, j)
    inj, g, m = mtrace._pick_pair(M.backend, hom_from(("P", j, 0), M, P), hom_to(M, ("P", j, 0), P), None)
    proj = M.backend.inverse(m) @ g
    val = mtrace.mdim_typical(0, r, tc) * ptr_right(inj @ proj, V0, S)[0, 0]
    return val == mtrace.mdim_P(j, r, tc), f"{val!r}"


def _axiom(U, W, samples, seed, tc):
    rep = mtrace.trace_axiom_checks(U, W, samples, seed, tc)
    return rep["right"] and rep["left"], f"samples={samples} failures={rep['failures']}"


def _pairing(P, V, tc):
    rep = mtrace.pairing_rank(P, V, tc)
    return rep["full"], f"rank={rep['rank']} dims={rep['dims']}"


def _cyc(V, U, samples, seed, tc):
    rep = mtrace.cyclicity_checks(V, U, samples, seed, tc)
    return rep["pass"], f"samples={rep['samples']} failures={rep['failures']}"


def suite_tables(run, r, rng, tol):
    for which in decomp.TABLES:
        def one(which=which):
            entries = decomp.verify_tables(r, which)
            bad = [e["id"] for e in entries if e["status"] != "pass"]
            oracle = all(e.get("oracle", True) for e in entries)
            return not bad, f"{len(entries)} cases, oracle agrees: {oracle}" + (f", failing: {bad}" if bad else "")

        run.check(f"table:{which}", one)
    for k, (a, b) in enumerate(zip(_alphas(rng, 10), _alphas(rng, 10))):
        def typ(a=a, b=b):
            rep = decomp.typical_tensor_rule(r, a, b)
            return rep["character"] and rep["casimir_spectrum"], f"alpha={a:.4f} beta={b:.4f}"

        if r <= 5:
            run.check(f"typical-rule[{k}]", typ)


def suite_quiver(run, r, rng, tol):
    run.check("quiver:A-relations", lambda: _algebra_ok(quiver.algebra_A()))
    run.check("quiver:B-relations", lambda: _algebra_ok(quiver.algebra_B()))
    for i, ok in quiver.composition_checks(r).items():
        run.check(f"quiver:compositions:{i}", lambda ok=ok: (all(ok.values()), str(ok)))
    rep = quiver.compare_endsigma(r)
    for parity, entry in rep.items():
        run.check(
            f"quiver:endsigma:{parity}",
            lambda entry=entry: (entry["pass"] and entry["associative"], f"found={entry['found']} expected={entry['expected']}"),
        )
    for z in (2, 1, -1):
        for key, entry in quiver.graded_trace_report(r, z).items():
            run.check(f"quiver:trace:{key}:z={z}", lambda entry=entry: (entry["pass"], f"got={entry['got']}"))


def _algebra_ok(alg):
    return alg.check_associative() and alg.check_unit() and alg.check_grading()


SUITES = {
    "axioms": suite_axioms,
    "casimir": suite_casimir,
    "ribbon": suite_ribbon,
    "hopf": suite_hopf,
    "mtrace": suite_mtrace,
    "tensor-tables": suite_tables,
    "quiver": suite_quiver,
}
SUITE_NAMES = tuple(SUITES) + ("all",)


def run_suite(name: str, r: int, seed: int = 0, tol: float = 1e-9) -> VerificationReport:
    """Run one named suite at one r; the RNG is seeded per (suite, r, seed)."""
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}")
    report = VerificationReport(name, r)
    rng = random.Random(f"{name}:{r}:{seed}")
    SUITES[name](_Runner(report), r, rng, tol)
    return report


def _job(args):
    return run_suite(*args)


def run_all(rs, seed: int = 0, tol: float = 1e-9, suites=None) -> list:
    """Every suite at every r in rs; parallel across jobs when UQH_NUM_THREADS > 1."""
    jobs = [(s, r, seed, tol) for r in rs for s in (suites or SUITES)]
    workers = int(os.environ.get("UQH_NUM_THREADS", "1") or 1)
    if workers <= 1:
        return [_job(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_job, jobs))
