import itertools
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from singleton_lab import qstate as qs
from singleton_lab import verify as vf
from singleton_lab.errors import (
    BadBlockSizes,
    NotCorrectable,
    ParityMismatch,
    StateNotPure,
    TooManyErasures,
)
from singleton_lab.stabilizer import knill_laflamme_check, load_corpus, purified_code_state

CORPUS = load_corpus()
TOL = 1e-9


def entangled_with_y():
    """X1, X2 qubits each maximally entangled with half of a 4-level Y."""
    amps = np.zeros(16)
    for a, b in itertools.product(range(2), repeat=2):
        amps[(a * 2 + b) * 4 + 2 * a + b] = 0.5
    return qs.TensorState(amps, (("X1", 2), ("X2", 2), ("Y", 4)))


def test_lemma1_examples():
    r = vf.check_lemma1(qs.bell_state(2, ("X1", "X2")), 2, 1)
    assert r.lhs == pytest.approx(0, abs=TOL) and r.rhs == pytest.approx(2, abs=TOL)
    r = vf.check_lemma1(qs.ghz_state(3), 2, 1)
    assert r.lhs == pytest.approx(1, abs=TOL) and r.rhs == pytest.approx(2, abs=TOL)
    r = vf.check_lemma1(qs.product_state([2, 3, 2]), 3, 2)
    assert r.margin == pytest.approx(0, abs=TOL)


def test_bad_block_sizes():
    psi = qs.ghz_state(3)
    for m, mu in [(2, 2), (4, 1), (2, 0)]:
        with pytest.raises(BadBlockSizes):
            vf.check_lemma1(psi, m, mu)


def test_lemma2_with_trivial_y_reduces_to_lemma1():
    rho = qs.random_density([2, 2, 3], 2, seed=4)
    lifted = qs.DensityMatrix(rho.matrix, rho.systems + (("Y", 1),))
    a = vf.check_lemma1(rho, 3, 2)
    b = vf.check_lemma2(lifted, 3, 2, "Y")
    assert (a.lhs, a.rhs) == pytest.approx((b.lhs, b.rhs), abs=1e-12)


def test_lemma2_equality_with_negative_entropies():
    r = vf.check_lemma2(entangled_with_y(), 2, 1, "Y")
    assert r.lhs == pytest.approx(-2, abs=TOL)
    assert r.rhs == pytest.approx(-2, abs=TOL)


def test_lemma2_random_four_party():
    for seed in range(200):
        rho = qs.random_density([2, 2, 2, 2], 2, seed=seed, labels=["X1", "X2", "X3", "Y"])
        for m, mu in [(2, 1), (3, 1), (3, 2)]:
            assert vf.check_lemma2(rho, m, mu, "Y").margin >= -TOL


def test_fuzz_is_deterministic_and_clean():
    a = vf.fuzz("1", 60, seed=11)
    b = vf.fuzz("1", 60, seed=11)
    assert a.ok and a.worst_margin == b.worst_margin and a.trials == 60
    assert vf.fuzz("2", 60, seed=3).ok
    assert vf.fuzz("ssa", 60, seed=3).ok


def test_fuzz_zero_trials():
    r = vf.fuzz("2", 0)
    assert r.trials == 0 and r.violations == [] and r.to_dict()["worst_margin"] is None


def test_fuzz_unknown_lemma():
    with pytest.raises(ValueError):
        vf.fuzz("3", 1)


def test_fuzz_records_reproducible_violations():
    # threshold +100 bits: every trial counts as a violation
    report = vf.fuzz("1", 5, seed=2, tol=-100.0)
    assert len(report.violations) == 5 and not report.ok
    v = report.violations[0]
    dims, blocks, check = vf.fuzz_trial("1", v.seed)
    assert dims == v.dims and blocks == v.blocks and check.margin == v.margin


def test_fuzz_respects_dimension_budget():
    for seed in range(50):
        dims, _, _ = vf.fuzz_trial("2", seed, dim_budget=64)
        assert np.prod(dims) <= 64


# --- decoupling --------------------------------------------------------------------

def test_decoupling_five_qubit():
    psi = purified_code_state(CORPUS["five_qubit"].code)
    r = vf.check_decoupling(psi, 3)
    assert r.correctable and len(r.partitions) == 10
    assert r.s_ref == pytest.approx(1, abs=TOL)
    for p in r.partitions:
        assert p.mutual_information < 1e-10
        assert p.s_erased == pytest.approx(2, abs=TOL)
        assert p.s_decoder == pytest.approx(3, abs=TOL)
        assert p.s_ref_erased == pytest.approx(r.s_ref + p.s_erased, abs=TOL)
    assert r.sigma_bar == pytest.approx(1, abs=TOL)
    assert r.sigma_bar_bar == pytest.approx(1, abs=TOL)
    assert not vf.check_decoupling(psi, 4).correctable


def test_decoupling_product_state_with_trivial_reference():
    psi = qs.TensorState(np.eye(1, 8).reshape(-1), (("R", 1), ("X1", 2), ("X2", 2), ("X3", 2)))
    for d in range(1, 5):
        assert vf.check_decoupling(psi, d).correctable


def test_decoupling_requires_pure_state():
    rho = qs.random_density([2, 2, 2], 2, seed=0, labels=["R", "X1", "X2"])
    with pytest.raises(StateNotPure):
        vf.check_decoupling(rho, 2)
    pure_dm = qs.ghz_state(3).relabel({"X1": "R", "X2": "X1", "X3": "X2"}).density()
    assert vf.check_decoupling(pure_dm, 2) is not None


def test_decoupling_with_receiver_half():
    from singleton_lab.propagate import theorem5_execute

    wit = theorem5_execute(CORPUS["five_qubit"].code, 1, 3)
    r = vf.check_decoupling(wit.state, 3, bin_labels=wit.bin_labels)
    assert r.n == 4 and r.correctable and len(r.partitions) == 6


def test_entropic_singleton_examples():
    rep = vf.check_entropic_singleton(purified_code_state(CORPUS["five_qubit"].code), 3)
    assert rep.tight and rep.qmds_tight and rep.s_ref == pytest.approx(1)
    assert rep.max_marginal_distance < 1e-8
    rep = vf.check_entropic_singleton(purified_code_state(CORPUS["four_two_two"].code), 2)
    assert rep.tight and rep.s_ref == pytest.approx(2) and rep.sigma_bar == pytest.approx(1)
    rep = vf.check_entropic_singleton(purified_code_state(CORPUS["z_one"].code), 2)
    assert rep.satisfied and rep.s_ref == 0 and not rep.qmds_tight


def test_entropic_singleton_needs_correctability():
    with pytest.raises(NotCorrectable):
        vf.check_entropic_singleton(purified_code_state(CORPUS["five_qubit"].code), 4)


@pytest.mark.parametrize("name", list(CORPUS))
def test_singleton_holds_on_every_correctable_corpus_state(name):
    code = CORPUS[name].code
    psi = purified_code_state(code)
    for d in range(1, min(code.n, 4) + 2):
        if not vf.check_decoupling(psi, d).correctable:
            continue
        rep = vf.check_entropic_singleton(psi, d)
        assert rep.slack >= -TOL
        assert rep.chain - rep.s_ref >= -TOL
        if rep.qmds_tight:
            assert rep.max_marginal_distance <= 1e-8
            assert knill_laflamme_check(code, d).pure


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**31), st.sampled_from([(2, 2, 2), (2, 2, 2, 2), (3, 3, 3)]), st.integers(1, 3))
def test_singleton_on_random_correctable_states(seed, dims, d):
    # random states are almost never correctable beyond d = 1; the check must
    # either certify the bound or refuse
    psi = qs.random_pure_state((2,) + dims, seed, labels=["R"] + [f"X{i + 1}" for i in range(len(dims))])
    if d > len(dims) + 1:
        return
    if vf.check_decoupling(psi, d).correctable:
        assert vf.check_entropic_singleton(psi, d).slack >= -TOL
    else:
        with pytest.raises(NotCorrectable):
            vf.check_entropic_singleton(psi, d)


# --- protocol bookkeeping ------------------------------------------------------------

def test_densecoding_three_two():
    rep = vf.protocol_campaign("densecoding", 2, 3, 2)
    assert rep.ok and rep.patterns == 3 and rep.runs == 16 * 3
    assert rep.k == 2 and rep.c == 5


def test_densecoding_three_three():
    rep = vf.protocol_campaign("densecoding", 2, 3, 3)
    assert rep.ok and rep.k == 1 and rep.c == 4


def test_densecoding_transcript():
    t = vf.simulate_densecoding_mds(2, 3, 2, (1, 3), (0,))
    assert t.fidelity == 1.0 and t.message_out == (1, 3)
    assert len(t.steps) == 5 and t.to_dict()["c"] == "5"
    with pytest.raises(TooManyErasures):
        vf.simulate_densecoding_mds(2, 3, 2, (1, 3), (0, 1))


def test_mds_point_examples():
    rep = vf.protocol_campaign("mdspoint", 5, 4, 3)
    assert rep.ok and rep.k == rep.c == 1 and rep.patterns == 6
    t = vf.simulate_mds_point(5, 4, 3)
    assert t.point == (F(1, 4), F(1, 4)) and t.in_region
    t = vf.simulate_mds_point(7, 6, 5)
    assert t.point == (F(1, 6), F(1, 6)) and t.in_region
    with pytest.raises(ParityMismatch):
        vf.simulate_mds_point(7, 6, 4)


def test_mds_point_lands_on_mds_vertex():
    from singleton_lab.bounds import rate_region

    for q, n, d in [(5, 4, 3), (7, 6, 5), (7, 7, 6), (8, 8, 7)]:
        t = vf.simulate_mds_point(q, n, d)
        assert t.point == rate_region(F(d - 1, n)).points["MDS"]
