from fractions import Fraction

import pytest

from toda2.ring import Scalar, ScalarFraction
from toda2.stoch import (FockVector, build_state, check_stoch, fock_act, osc_a,
                         osc_astar, sign_probe, stochastic_hamiltonian,
                         weyl_act)
from toda2.weyl import Lattice


def spow(k):
    return Scalar.var("s", k)


def test_lowering_kills_the_vacuum():
    v0 = build_state("vk", 6, k=0)
    assert fock_act("a", 1, v0).is_zero()


def test_number_operator_eigenvalue():
    v2 = build_state("vk", 6, k=2)
    assert (fock_act("qD", 1, v2) - v2.scale(spow(-8))).is_zero()


def test_lowering_coefficient():
    v1 = build_state("vk", 6, k=1)
    v0 = build_state("vk", 6, k=0)
    got = fock_act("a", 1, v1)
    assert (got - v0.scale(Scalar.const(1) - spow(-4))).is_zero()


def test_raising_overflow_is_recorded():
    vK = build_state("vk", 4, k=4)
    up = fock_act("astar", 1, vK)
    assert up.support_levels() == {(5,)}
    assert up.boundary_part().support_levels() == {(5,)}


def test_geometric_state_coefficients():
    om = build_state("omega", 3)
    assert om.coefficient((0,)) == ScalarFraction(Scalar.const(1))
    assert om.coefficient((1,)) == ScalarFraction(spow(-4), Scalar.const(1) - spow(-4))
    den2 = (Scalar.const(1) - spow(-4)) * (Scalar.const(1) - spow(-8))
    assert om.coefficient((2,)) == ScalarFraction(spow(-8), den2)
    om0 = build_state("omega", 0)
    assert (om0 - build_state("vk", 0, k=0)).is_zero()


def test_geometric_state_eigen_recurrence():
    K = 6
    om = build_state("omega", K)
    diff = fock_act("a", 1, om) - om.scale(spow(-4))
    assert diff.support_levels() == {(K,)}


@pytest.mark.parametrize("cid", ["qosc_algebra", "Lqosc_match", "column_eigen",
                                 "omega_identity", "Omega_H1", "zero_column_sum",
                                 "realisation_consistency"])
def test_stochastic_suites(cid):
    rep = check_stoch(cid, K=6, N=2)
    assert rep.status == "pass", (cid, rep.witness)


def test_mutated_eigenvalue_fails():
    rep = check_stoch("column_eigen", mutate=True)
    assert rep.status == "fail" and rep.witness


def test_small_truncation_rejected():
    with pytest.raises(ValueError):
        check_stoch("omega_identity", K=2)


def test_hamiltonian_action_matches_sitewise_composition():
    # v . (a_1 a*_2) applied through the Weyl form equals the two-step action
    K = 5
    lat = Lattice(2, True)
    v = FockVector.basis((2, 3), K)
    one_step = fock_act("astar", 2, fock_act("a", 1, v))
    w = weyl_act(v, osc_a(lat, 1) * osc_astar(lat, 2))
    assert (one_step - w).is_zero()


def test_tensor_state_coefficients_factorise():
    K = 4
    om = build_state("omega", K)
    Om = build_state("Omega", K, N=2)
    for k1 in range(K + 1):
        for k2 in range(K + 1):
            assert Om.coefficient((k1, k2)) == om.coefficient((k1,)) * om.coefficient((k2,))


def test_sign_probe_reports_counts():
    counts = sign_probe(N=2, K=3)
    assert set(counts) == {"positive", "negative", "zero"}
    assert sum(counts.values()) > 0


def test_defect_confined_to_boundary_levels():
    K, N = 6, 2
    Om = build_state("Omega", K, N=N)
    H = stochastic_hamiltonian(Lattice(N, True))
    diff = weyl_act(Om, H) - Om.scale(Scalar.const(N))
    assert diff.interior_part().is_zero()
    assert all(any(x >= K for x in lv) for lv in diff.support_levels())
