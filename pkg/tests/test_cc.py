from math import comb

import pytest

from conftest import ALL, WORKED, cc_texts, load, named_terms, proportional, syzygy_texts
from pdecc import cc
from pdecc.parser import load_system
from pdecc.system import PreconditionError, pp_procedure, prolong

# conventional Psi labels for Example 2.1, by generator expression
PSI_NAMES = {
    "Phi1_3 - Phi4_1": "Psi1",
    "Phi2_3 - Phi4_2 - Phi5_1": "Psi2",
    "Phi3_3 - Phi5_2": "Psi3",
    "Phi1_22 - Phi2_12 + Phi3_11": "Psi4",
}


@pytest.fixture(scope="module")
def gens21(ex21):
    return cc.generating_cc(ex21)


@pytest.fixture(scope="module")
def gens22(ex22):
    return cc.generating_cc(ex22)


@pytest.fixture(scope="module")
def gens23(ex23):
    return cc.generating_cc(ex23)


# dimensions ----------------------------------------------------------------------

def test_cc_dims_example_2_2(ex22):
    assert [cc.cc_dims(ex22, r)["dim_Q"] for r in (3, 4, 5)] == [1, 5, 13]


def test_cc_at_order_macaulay(mac):
    got = cc.cc_at_order(mac, 2)
    assert len(got) == 1
    assert proportional(named_terms(got[0].rhs, mac.sources), {"v_13": 1, "v_2": -1, "u_33": -1})


def test_cc_at_order_example_2_1(ex21):
    got = cc.cc_at_order(ex21, 1)
    assert len(got) == 3
    assert all(g.order == 1 for g in got)


def test_cc_at_order_homogeneous_is_empty():
    sys = load_system("vars x1 x2 x3\nunknown y\neq: y_33 = 0\neq: y_13 - y_2 = 0\n")
    assert all(cc.cc_at_order(sys, r) == [] for r in range(4))


# generators ----------------------------------------------------------------------

def test_generators_example_2_1(gens21):
    assert gens21.complete
    assert gens21.by_order() == {1: 3, 2: 1}
    assert set(cc_texts(gens21)) == set(PSI_NAMES)


def test_new_generators_example_2_1(ex21, gens21):
    known = [g for g in gens21.generators if g.order == 1]
    new = cc.new_generators(ex21, 1, known)
    assert len(new) == 1
    want = {"Phi1_22": 1, "Phi3_11": 1, "Phi2_12": -1}
    assert proportional(named_terms(new[0].rhs, ex21.sources), want)


def test_generators_example_2_2(ex22, gens22):
    assert gens22.complete
    assert gens22.orders() == [3, 4]
    x2 = ex22.K.var(1)
    want = {"u_233": 1, "v_122": -1, "u_12": -x2, "u_1": -2}
    assert proportional(named_terms(gens22.generators[0].rhs, ex22.sources), want)
    assert not cc.in_prolongation_span(ex22, gens22.generators[:1], gens22.generators[1].rhs)


def test_generators_example_2_3_gap(ex23, gens23):
    assert gens23.complete
    assert gens23.orders() == [3, 6]
    assert gens23.by_order() == {3: 1, 6: 1}
    A = gens23.generators[:1]
    assert cc.new_generators(ex23, 3, A) == []
    assert cc.new_generators(ex23, 4, A) == []
    # every order-5 candidate reduces into the prolongations of A
    assert gens23.reduced_candidates[5] > 0
    for g in cc.cc_at_order(ex23, 5):
        assert cc.in_prolongation_span(ex23, A, g.rhs)
    assert len(cc.new_generators(ex23, 5, A)) == 1


def test_generators_macaulay(mac):
    gens = cc.generating_cc(mac)
    assert gens.orders() == [2]
    assert cc_texts(gens) == ["u_33 - v_13 + v_2"]


def test_identity_rows_on_fixtures():
    for name in WORKED:
        assert cc.generating_cc(load(name)).identities == 0


@pytest.mark.parametrize("name", ALL)
def test_emitted_cc_substitute_to_zero(name):
    sys = load(name)
    gens = cc.generating_cc(sys)
    assert all(cc.verify_cc(sys, g.rhs) for g in gens.generators)


def test_substitution_detects_non_cc(ex22):
    x = {cc.SourceJet(0, (0, 0, 0)): ex22.K.one}
    assert not cc.verify_cc(ex22, x)


# syzygies ------------------------------------------------------------------------

def test_syzygy_example_2_1(gens21):
    rels, sub = cc.syzygies(gens21)
    assert len(rels) == 1
    names = [PSI_NAMES[t] for t in cc_texts(gens21)]
    want = {"Psi1_22": 1, "Psi3_11": 1, "Psi2_12": -1, "Psi4_3": -1}
    assert proportional(named_terms(rels[0].coefficients, names), want)
    assert cc.verify_syzygy(gens21, rels[0])


def test_syzygy_example_2_2(ex22, gens22):
    rels, sub = cc.syzygies(gens22)
    assert syzygy_texts(rels, sub) == ["Psi1_33 - Psi2_2 - x2*Psi1_1"]
    assert all(cc.verify_syzygy(gens22, r) for r in rels)


def test_syzygy_example_2_3(ex23, gens23):
    rels, sub = cc.syzygies(gens23)
    assert syzygy_texts(rels, sub) == ["Psi1_3333 - Psi2_2 - 2*x2*Psi1_133 + x2^2*Psi1_11"]
    assert all(cc.verify_syzygy(gens23, r) for r in rels)


@pytest.mark.parametrize("name", ALL)
def test_emitted_syzygies_substitute_to_zero(name):
    gens = cc.generating_cc(load(name))
    rels, _ = cc.syzygies(gens)
    assert all(cc.verify_syzygy(gens, r) for r in rels)


# resolutions ---------------------------------------------------------------------

def test_resolution_example_2_3(ex23):
    res = cc.resolution(ex23)
    assert res.complete
    assert (res.ranks, res.orders) == ([1, 2, 2, 1], [2, 6, 4])
    assert res.euler_characteristic == 0 == res.differential_rank


def test_resolution_example_2_1(ex21):
    res = cc.resolution(ex21)
    assert res.ranks == [2, 5, 4, 1]
    assert res.euler_characteristic == 0 == res.differential_rank


def test_resolution_macaulay(mac):
    res = cc.resolution(mac)
    assert res.ranks == [1, 2, 1]
    assert res.euler_characteristic == 0


def test_resolution_free_system():
    res = cc.resolution(load_system("vars x1 x2\nunknown y\noption order 1\n"))
    assert res.ranks == [1, 0]
    assert res.euler_characteristic == 1 == res.differential_rank


@pytest.mark.parametrize("name", ALL)
def test_euler_equals_differential_rank(name):
    res = cc.resolution(load(name), 6)
    if res.complete and res.differential_rank is not None:
        assert res.euler_characteristic == res.differential_rank


def test_generator_count_differs_from_source_excess(ex22, gens22):
    assert len(gens22.generators) == 2
    assert len(ex22.sources) - ex22.m == 1


# diagram dimensions --------------------------------------------------------------

def test_connecting_sequence_macaulay(mac):
    seq = cc.connecting_sequence_dims(mac, 1)
    assert seq == (6, 16, 12, 3, 1, 0)
    assert cc.alternating_sum(seq) == 0


@pytest.mark.parametrize("name", WORKED)
def test_connecting_sequence_exact(name):
    sys = load(name)
    for r in range(4):
        assert cc.alternating_sum(cc.connecting_sequence_dims(sys, r)) == 0


def test_exact_sequences_example_2_3(ex23):
    assert cc.exact_sequence_dims(ex23, 3) == (17, 56, 40, 1)
    assert cc.exact_sequence_dims(ex23, 4) == (18, 84, 70, 4)
    assert cc.exact_sequence_dims(ex23, 6) == (18, 165, 168, 21)
    for r in (3, 4, 6):
        assert cc.alternating_sum(cc.exact_sequence_dims(ex23, r)) == 0


@pytest.mark.parametrize("name", WORKED)
@pytest.mark.parametrize("relative", ["cc", "generators"])
def test_cohomology_additivity(name, relative):
    sys = load(name)
    for r in range(4):
        h = cc.jet_cohomology_dims(sys, r, relative)
        assert h["H_S"] == h["H_R"] + h["H_J"]


@pytest.mark.parametrize("name", WORKED)
def test_containment(name):
    sys = load(name)
    gens = cc.generating_cc(sys)
    new_levels = {g.level for g in gens.generators}
    for r in range(4):
        ok, strict = cc.containment_holds(sys, r)
        assert ok
        assert strict == (sys.q + r + 1 in new_levels)


def test_jet_cohomology_example_2_2(ex22):
    assert cc.jet_cohomology_dims(ex22, 3)["H_J"] == 1


def test_jet_cohomology_example_2_1(ex21):
    from pdecc.symbol import spencer_cohomology_dim
    assert cc.jet_cohomology_dims(ex21, 1)["H_S"] == 1 == spencer_cohomology_dim(ex21, 0, 2)


def test_jet_cohomology_macaulay(mac):
    for r in (0, 1):
        h = cc.jet_cohomology_dims(mac, r + 1, "generators")
        assert h["H_J"] == 0
        assert h["H_S"] == h["H_R"] != 0


def test_long_run_dims(ex22, ex23, mac):
    assert [d for _, d in cc.long_run_dims(mac, 0, 4)] == [8, 12, 16, 20, 24]
    assert [d for _, d in cc.long_run_dims(ex22, 2, 5)] == [15, 17, 19, 21]
    assert [d for _, d in cc.long_run_dims(ex23, 4, 6)] == [18, 18, 18]


def test_sequence_dims_example_2_1(ex21):
    seqs = cc.sequence_dims(prolong(ex21, 1))
    assert seqs == {"spencer": [3, 9, 9, 3], "trivial": [20, 40, 30, 8],
                    "janet": [17, 31, 21, 5]}
    # the Spencer sequence starts at C_0 = dim R_2 = 3; the other two at dim E = 2
    assert seqs["spencer"][0] == 3
    assert cc.alternating_sum(seqs["spencer"]) == 0
    assert cc.alternating_sum([2] + seqs["trivial"]) == 0
    assert cc.alternating_sum([2] + seqs["janet"]) == 0


def test_sequence_dims_finite_type(ex23):
    R = pp_procedure(ex23).final
    assert R.q == 3 and R.tower().dim_R(3) == 6 and R.tower().dim_g(4) == 0
    seqs = cc.sequence_dims(R)
    assert seqs["spencer"] == [comb(3, r) * 6 for r in range(4)]


def test_sequence_dims_precondition(ex21, mac):
    with pytest.raises(PreconditionError, match="fi_test"):
        cc.sequence_dims(mac)
    with pytest.raises(PreconditionError, match="is_involutive"):
        cc.sequence_dims(ex21)
