"""Acceptance criteria, one test each, with runtime budgets.

Every test prints a single PASS/FAIL line straight to the terminal, even
under output capture, so ``pytest tests/test_acceptance.py`` gives a
per-criterion summary.
"""

from __future__ import annotations

import os
import subprocess
import sys
import time

import pytest

from helpers import (random_dorfman, random_dull_bracket, random_metric_connection,
                     random_sections)
from l2a.anchored import LinearConnection, _dorfman_curv_vec, dualize_pair, jacobiator_vec
from l2a.bundles import Chart, basis, vdot
from l2a.catalog import (MUTANT_KS, mutant_matched_pair, sl2_matched_pair, so3, string_type,
                         zero_matched_pair, zero_split)
from l2a.courant import (adjoint_lie2, basic_curvature, basic_curvature_expanded, check_courant,
                         drinfeld_double, fat_courant, fat_identification, standard_courant,
                         tangent_algebroid, transport_courant)
from l2a.generate import SPLIT_TABLES, gen_instance, random_phi
from l2a.lie2core import (check_morphism, check_split_lie2, identity_morphism,
                          qfield_square_check, shift_splitting)
from l2a.matched import (bicrossproduct, check_matched_pair, dual_two_rep, embed_two_rep,
                         extract_matched_pair)
from l2a.rng import XorShift64Star
from test_courant import _abelian_dual

PAIRED = {1: "i", 2: "ii", 3: "ii", 4: "iv", 5: "iii", 6: "iii", 7: "v"}
HERE = os.path.dirname(os.path.abspath(__file__))


@pytest.fixture
def verdict(pytestconfig):
    capman = pytestconfig.pluginmanager.getplugin("capturemanager")

    def _say(number: int, ok: bool, elapsed: float, detail: str) -> None:
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'} ({elapsed:.2f}s) {detail}"
        with capman.global_and_fixture_disabled():
            print("\n" + line, flush=True)
    return _say


def _split_instances():
    """Valid generator outputs and single-table mutants, ranks ≤ 4, dim ≤ 2."""
    out = []
    for seed in range(10):
        dim = seed % 3
        rank = 1 if dim == 0 else 1 + seed % 2
        for kind in ("semidirect", "rep_lie2", "bicross"):
            out.append((f"{kind}-{seed}", gen_instance(kind, seed, dim=dim, rank=rank).payload))
        d, phi = gen_instance("shift", seed, dim=dim, rank=rank).payload
        out.append((f"shift-{seed}", shift_splitting(d, phi)))
    for seed in range(6):
        for table in SPLIT_TABLES:
            inst = gen_instance("semidirect", seed, dim=1 + seed % 2, rank=2, mutate=table)
            out.append((f"mut-{table}-{seed}", inst.payload))
    return out


def test_criterion_1_oracle_equivalence(verdict):
    t0 = time.perf_counter()
    cases = _split_instances()
    mismatches, failing = [], 0
    for name, d in cases:
        assert d.Q.rank <= 4 and d.B.rank <= 4 and d.chart.dim <= 2, name
        r1, r2 = check_split_lie2(d), qfield_square_check(d)
        if r1.passed != r2.passed or set(r1.failed_axioms()) != set(r2.failed_axioms()):
            mismatches.append((name, r1.failed_axioms(), r2.failed_axioms()))
        failing += not r1.passed
    elapsed = time.perf_counter() - t0
    ok = len(cases) >= 50 and not mismatches and failing > 0 and elapsed < 60
    verdict(1, ok, elapsed, f"{len(cases)} instances, {failing} failing, "
            f"{len(mismatches)} mismatches")
    assert not mismatches, mismatches
    assert len(cases) >= 50 and failing > 0
    assert elapsed < 60


def _matched_pairs():
    pairs = [("sl2", sl2_matched_pair()), ("zero", zero_matched_pair())]
    for seed in range(22):
        t = gen_instance("two_rep", seed, dim=seed % 3, rank=1 + seed % 2).payload
        if seed % 2:
            t = dual_two_rep(t)
        pairs.append((f"embedded-{seed}", embed_two_rep(t)))
    return pairs


def test_criterion_2_bicrossproduct(verdict):
    t0 = time.perf_counter()
    bad = []
    pairs = _matched_pairs()
    for name, m in pairs:
        d = bicrossproduct(m)
        rep = check_split_lie2(d)
        back = extract_matched_pair(d, m.A.bundle.rank,
                                    labels=(m.A.bundle.label, m.B.bundle.label),
                                    c_label=m.C.label,
                                    duals=(m.A.bundle.dual, m.B.bundle.dual, m.C.dual))
        if not (check_matched_pair(m).passed and rep.passed and not rep.violations and back == m):
            bad.append(name)
    elapsed = time.perf_counter() - t0
    ok = not bad and len(pairs) >= 22 and elapsed < 30
    verdict(2, ok, elapsed, f"{len(pairs)} matched pairs, failures: {bad}")
    assert not bad and len(pairs) >= 22
    assert elapsed < 30


def test_criterion_3_mutation_correspondence(verdict):
    t0 = time.perf_counter()
    seen = {}
    for k in MUTANT_KS:
        base, mut, _table = mutant_matched_pair(k)
        d = bicrossproduct(mut)
        seen[k] = (check_matched_pair(base).passed, check_matched_pair(mut).failed_axioms(),
                   check_split_lie2(d).failed_axioms(), qfield_square_check(d).failed_axioms())
    want = {k: (True, [f"M{k}"], [PAIRED[k]], [PAIRED[k]]) for k in MUTANT_KS}
    elapsed = time.perf_counter() - t0
    ok = seen == want
    verdict(3, ok, elapsed, " ".join(f"M{k}->{seen[k][2]}" for k in MUTANT_KS))
    assert seen == want


def _shift_cases(count: int):
    cases = [string_type(), zero_split(1, 2, 1)]
    seed = 0
    while len(cases) < count:
        cases.append(gen_instance("semidirect", seed, dim=seed % 3, rank=1 + seed % 2).payload)
        seed += 1
    rng = XorShift64Star(2024)
    out = []
    for d in cases:
        out.append((d, random_phi(rng, d, 1)))
    # one failing instance so that verdict preservation is not vacuous
    out.append((gen_instance("semidirect", 1, rank=2, mutate="omega").payload, None))
    return out


def test_criterion_4_change_of_splitting(verdict):
    t0 = time.perf_counter()
    bad, n = [], 0
    rng = XorShift64Star(7)
    for i, (d, phi) in enumerate(_shift_cases(22)):
        phi = phi if phi is not None else random_phi(rng, d, 1)
        n += 1
        ds = shift_splitting(d, phi)
        if check_split_lie2(ds).passed != check_split_lie2(d).passed:
            bad.append((i, "verdict"))
        if shift_splitting(ds, -phi) != d:
            bad.append((i, "round trip"))
        if check_split_lie2(d).passed and not check_morphism(ds, d, identity_morphism(d, phi)).passed:
            bad.append((i, "morphism"))
    elapsed = time.perf_counter() - t0
    ok = not bad and n >= 20
    verdict(4, ok, elapsed, f"{n} (instance, phi) pairs, failures: {bad}")
    assert not bad and n >= 20


def test_criterion_5_fat_courant(verdict):
    t0 = time.perf_counter()
    base = {}
    for name, d in (("zero", zero_split(1, 2, 1)), ("string", string_type())):
        rep = check_courant(fat_courant(d))
        base[name] = rep.passed and not rep.violations and \
            {"CA1", "CA2", "CA3", "CA4"} <= set(rep.axioms)
    bad, n = [], 0
    for i, (d, phi) in enumerate(_shift_cases(12)[:12]):
        n += 1
        psi, psi_inv = fat_identification(d, phi), fat_identification(d, phi, inverse=True)
        if transport_courant(fat_courant(d), psi, psi_inv) != fat_courant(shift_splitting(d, phi)):
            bad.append(i)
    elapsed = time.perf_counter() - t0
    ok = all(base.values()) and not bad and n >= 10
    verdict(5, ok, elapsed, f"base {base}, {n} shifted instances, mismatches {bad}")
    assert all(base.values()), base
    assert not bad and n >= 10


def test_criterion_6_courant_instances(verdict):
    t0 = time.perf_counter()
    cases = {"standard_r1": standard_courant(Chart(1)), "standard_r2": standard_courant(Chart(2)),
             "drinfeld_so3": drinfeld_double(so3("g"), _abelian_dual())}
    result = {}
    for i, (name, c) in enumerate(cases.items()):
        rep = check_courant(c, samples=100, seed=i + 1, max_deg=2)
        result[name] = rep.passed and "roytenberg_lie" in rep.axioms
    elapsed = time.perf_counter() - t0
    ok = all(result.values()) and elapsed < 120
    verdict(6, ok, elapsed, f"{result}, 100 random triples each")
    assert all(result.values()), result
    assert elapsed < 120


def test_criterion_7_adjoint(verdict):
    t0 = time.perf_counter()
    c = standard_courant(Chart(1))
    triv = LinearConnection.zero(tangent_algebroid(Chart(1)).anchor, c.E)
    adj_ok = check_split_lie2(adjoint_lie2(c, triv)).passed
    bad, checked = [], 0
    conns = [(1, c, triv)] + [(n, *random_metric_connection(s, n)) for s, n in
                              ((1, 1), (2, 1), (3, 2), (4, 2))]
    for n, cc, cn in conns:
        r = cc.E.rank
        for i in range(r):
            for j in range(r):
                for a in range(n):
                    e1, e2, X = basis(n, r, i), basis(n, r, j), basis(n, n, a)
                    checked += 1
                    if basic_curvature(cc, cn, e1, e2, X) != basic_curvature_expanded(cc, cn, e1,
                                                                                      e2, X):
                        bad.append((n, i, j, a))
    elapsed = time.perf_counter() - t0
    ok = adj_ok and not bad
    verdict(7, ok, elapsed, f"adjoint passes: {adj_ok}, {checked} frame tuples, "
            f"{len(bad)} mismatches")
    assert adj_ok and not bad


def test_criterion_8_duality_identities(verdict):
    t0 = time.perf_counter()
    rt_bad = []
    for seed in range(50):
        b = random_dull_bracket(seed, n=1 + seed % 2, extra=2, skew=bool(seed % 2))
        d = random_dorfman(seed, n=1 + seed % 2)
        if dualize_pair(dualize_pair(b)) != b or dualize_pair(dualize_pair(d)) != d:
            rt_bad.append(seed)
    jac_bad, non_jacobi, nontrivial = [], 0, 0
    for seed in range(50):
        n = 1 + seed % 2
        db = random_dull_bracket(1000 + seed, n=n, extra=2)
        dc = dualize_pair(db)
        q1, q2, q3, tau = random_sections(2000 + seed, n, n + 2, 4, deg=1)
        jac = jacobiator_vec(db, q1, q2, q3)
        lhs = vdot(tau, jac, n)
        rhs = vdot(_dorfman_curv_vec(dc, db, q1, q2, tau), q3, n)
        non_jacobi += any(not p.is_zero() for p in jac)
        nontrivial += not lhs.is_zero()
        if lhs != rhs:
            jac_bad.append(seed)
    elapsed = time.perf_counter() - t0
    ok = not rt_bad and not jac_bad and non_jacobi > 0
    verdict(8, ok, elapsed, f"50 round trips ({len(rt_bad)} bad), 50 identity checks "
            f"({len(jac_bad)} bad, {non_jacobi} non-Jacobi, {nontrivial} nonzero sides)")
    assert not rt_bad and not jac_bad
    assert non_jacobi > 0 and nontrivial > 0


_TRANSCRIPT = """
import sys, tempfile
sys.path.insert(0, {here!r})
from helpers import catalog_transcript
with tempfile.TemporaryDirectory() as d:
    sys.stdout.write(catalog_transcript(d))
"""


def test_criterion_9_determinism(verdict):
    t0 = time.perf_counter()
    outs = []
    for hash_seed in ("1", "2"):
        env = dict(os.environ, PYTHONHASHSEED=hash_seed)
        proc = subprocess.run([sys.executable, "-c", _TRANSCRIPT.format(here=HERE)], env=env,
                              capture_output=True, check=True)
        outs.append(proc.stdout)
    elapsed = time.perf_counter() - t0
    runs = outs[0].count(b"\n## ") + outs[0].startswith(b"## ")
    ok = outs[0] == outs[1] and runs > 0
    verdict(9, ok, elapsed, f"{runs} catalog command runs, {len(outs[0])} bytes, "
            f"identical: {outs[0] == outs[1]}")
    assert outs[0] == outs[1] and runs > 0
