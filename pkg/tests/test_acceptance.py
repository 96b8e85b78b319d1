"""Acceptance suite: every exit criterion at its stated tolerance.

All checks are exact (zero-residual polynomial identities); the stated
runtime ceilings are asserted alongside.  One summary line prints per
criterion.
"""

import json
import time

from toda2 import cli
from toda2.registry import REGISTRY, RunConfig, run_checks
from toda2.reports import DEGENERATE, PASS


def _run(ids, **cfg):
    t0 = time.perf_counter()
    reports = run_checks(ids, RunConfig(**cfg))
    elapsed = time.perf_counter() - t0
    return reports, elapsed


def _assert_all_pass(no, label, ids, limit, **cfg):
    reports, elapsed = _run(ids, **cfg)
    bad = [r for r in reports if r.status not in (PASS, DEGENERATE)]
    ok = not bad and elapsed < limit
    print(f"ACCEPTANCE {no:2d} [{'PASS' if ok else 'FAIL'}] {label} "
          f"({elapsed:.1f}s < {limit}s)")
    assert not bad, [(r.id, r.witness) for r in bad]
    assert all(r.residual_terms == 0 for r in reports)
    assert elapsed < limit
    return reports


def test_criterion_01_exchange_structure_suite():
    _assert_all_pass(1, "exchange structure suite",
                     ["AD", "B", "C", "DGCG_general", "dual_general"], limit=10)


def test_criterion_02_monodromy_quadratic_algebra():
    reports = _assert_all_pass(2, "monodromy quadratic algebra at N=3",
                               ["ATT_TTD"], limit=60)
    assert reports[0].params == {"N": 3}


def test_criterion_03_yang_baxter_and_rll():
    _assert_all_pass(3, "Yang-Baxter and ultralocal RLL",
                     ["YBE_twisted", "RLL_ultralocal"], limit=10)


def test_criterion_04_ultralocalisation_chain():
    _assert_all_pass(4, "ultralocalisation chain with twist identity at N=1..3",
                     ["gauge_l", "gauge_G", "scriptL_assembly", "trace_identity",
                      "entrywise_conjugation", "taut"], limit=120)


def test_criterion_05_commuting_charges():
    _assert_all_pass(5, "transfer traces and charges commute",
                     ["tau_commute", "tloc_commute", "commute"], limit=300)


def test_criterion_06_charge_formulas():
    _assert_all_pass(6, "closed charge formulas and deformed traces",
                     ["H1_qToda", "H1_Toda2", "H2_Toda2",
                      "trq_match1", "trq_match2"], limit=60)


def test_criterion_07_quantum_realisation():
    _assert_all_pass(7, "quantum doublet realisation on a 6-site chain",
                     ["exchange_xi", "W_algebra_q", "QP_relations",
                      "W1_monomial"], limit=60)


def test_criterion_08_classical_bracket_suites():
    _assert_all_pass(8, "classical bracket algebras and realisations",
                     ["w1w1", "w1w2", "w2w2", "virlat", "qq", "qp", "pp",
                      "exlat_from_darboux", "qp_from_rep", "jacobi"], limit=60)


def test_criterion_09_classical_integrability():
    reports, elapsed = _run(["poissonL_explicit", "poissonL_dform",
                             "poissonL_degenerate", "involution", "pN_equals_trT"])
    by_id = {r.id: r for r in reports}
    ok = (by_id["poissonL_explicit"].status == PASS
          and by_id["poissonL_dform"].status == PASS
          and by_id["poissonL_degenerate"].status == DEGENERATE
          and by_id["involution"].status == PASS
          and by_id["pN_equals_trT"].status == PASS)
    print(f"ACCEPTANCE  9 [{'PASS' if ok else 'FAIL'}] classical integrability "
          f"({elapsed:.1f}s)")
    assert ok
    assert all(r.residual_terms == 0 for r in reports)


def test_criterion_10_stochastic_suite():
    _assert_all_pass(10, "oscillator specialisation and stochastic structure",
                     ["qosc_algebra", "Lqosc_match", "column_eigen", "Omega_H1"],
                     limit=60, sites=2, trunc=6)


def test_criterion_11_mutation_sensitivity():
    ids = [cid for cid in REGISTRY if cid.startswith("mutation_")]
    assert len(ids) >= 5  # at least one corrupted probe per suite
    reports, elapsed = _run(ids)
    ok = all(r.status == PASS for r in reports)
    caught = all("corruption detected" in r.witness for r in reports)
    print(f"ACCEPTANCE 11 [{'PASS' if ok and caught else 'FAIL'}] mutation "
          f"sensitivity across suites ({elapsed:.1f}s)")
    assert ok and caught
    # each probe carries the nonzero witness of the corrupted residual
    assert all(r.residual_terms > 0 for r in reports)


def test_criterion_12_deterministic_reports(tmp_path):
    p1, p2 = tmp_path / "run1.json", tmp_path / "run2.json"
    t0 = time.perf_counter()
    assert cli.main(["verify", "all", "--json", str(p1)]) == 0
    assert cli.main(["verify", "all", "--json", str(p2)]) == 0
    elapsed = time.perf_counter() - t0
    identical = p1.read_bytes() == p2.read_bytes()
    rows = json.loads(p1.read_text())
    ok = identical and len(rows) == len(REGISTRY)
    print(f"ACCEPTANCE 12 [{'PASS' if ok else 'FAIL'}] byte-identical full "
          f"reports ({elapsed:.1f}s)")
    assert identical
    assert [r["id"] for r in rows] == sorted(REGISTRY)
