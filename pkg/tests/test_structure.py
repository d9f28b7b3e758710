import mpmath
import pytest

from dioph import best_approx as ba
from dioph.errors import DegeneratePlane, DomainError, ParamError
from dioph.geometry import SubspaceL, ThetaMatrix
from dioph.structure import (
    HOLDS,
    NOT_APPLICABLE,
    VIOLATED,
    dimension_diagnostics,
    find_abc_pairs,
    find_runs,
    lemma3_check,
    lemma3_constant,
    lemma3_subintervals,
    lemma4_deltas,
    lemma5_constant,
    lemma5_report,
    lemma5_summary,
    lemma6_report,
    lemma6_threshold,
    li_screen,
    verify_f_monotonicity,
)

from conftest import hand_sequence, modular_rank, random_matrix

E = [tuple(1 if i == j else 0 for i in range(5)) for j in range(5)]


def add(*vs):
    return tuple(map(sum, zip(*vs)))


def test_lemma3_constant():
    C3, a, b = lemma3_constant()
    assert abs(C3 - mpmath.mpf("8.0701")) < 1e-3
    assert abs(a - mpmath.mpf("0.49566")) < 1e-4
    assert abs(a * a + b * b - 1) < 1e-12
    assert abs(C3 - 12 / mpmath.sqrt(mpmath.sqrt(52) - 5)) < 1e-12


def test_runs_examples():
    seq = hand_sequence([(1, 0, 0, 0), (0, 1, 0, 0), (1, 1, 0, 0), (0, 0, 1, 0)])
    runs = find_runs(seq)
    assert [(r.start_nu, r.end_k) for r in runs] == [(1, 3)]
    assert runs[0].lattice_det == 1
    seq = hand_sequence([E[0][:4], E[1][:4], E[2][:4], E[3][:4], (1, 1, 1, 1)])
    assert find_runs(seq) == []


def test_runs_are_maximal_and_planar():
    seq = ba.enumerate_spherical(random_matrix(2, 12), 3000)
    for run in find_runs(seq):
        basis = [run.basis[0].z, run.basis[1].z]
        for nu in range(run.start_nu, run.end_k + 1):
            assert modular_rank(basis + [seq.records[nu - 1].z]) == 2
        for nu in (run.start_nu - 1, run.end_k + 1):
            if 1 <= nu <= len(seq):
                assert modular_rank(basis + [seq.records[nu - 1].z]) == 3


def test_lemma3_hand_and_short_run():
    seq = hand_sequence([(1, 0, 0, 0), (0, 1, 0, 0), (1, 1, 0, 0), (0, 0, 1, 0)],
                        zetas=["0.5", "0.4", "0.3", "0.2"])
    run = find_runs(seq)[0]
    rep = lemma3_check(run, seq)
    # k = nu + 2: zeta_1 Z_2 against C3 zeta_2 Z_3
    C3, _, _ = lemma3_constant()
    assert rep.lhs == mpmath.mpf("0.5") * 1
    assert abs(rep.rhs - C3 * mpmath.mpf("0.4") * mpmath.sqrt(2)) < 1e-12
    assert rep.verdict == HOLDS and (rep.lhs <= rep.rhs)


def test_lemma3_on_computed_sequences(remark4_matrix):
    seqs = [ba.enumerate_spherical(random_matrix(n, s), 10**4) for n, s in ((1, 40), (2, 41), (3, 42))]
    seqs.append(ba.enumerate_spherical(remark4_matrix, 10**4))
    for seq in seqs:
        for run in find_runs(seq):
            for rep in lemma3_subintervals(run, seq):
                assert rep.verdict == HOLDS
                assert (rep.verdict == HOLDS) == (rep.lhs <= rep.rhs)


def test_lemma4_examples():
    seq = hand_sequence([(1, 0, 0), (0, 1, 0), (1, 1, 1), (2, 2, 1)])
    reps = lemma4_deltas(seq)
    assert [r.verdict for r in reps] == [HOLDS, HOLDS, VIOLATED]
    assert reps[0].rhs == 1 and reps[2].rhs == 0
    assert "from index 4" in reps[0].notes[1]


def test_abc_pairs():
    e1, e2, e3, e4 = (E[j][:4] for j in range(4))
    zs = [e3, e1, e2, add(e1, e2), e4, (0, 1, 1, 1)]
    seq = hand_sequence(zs)
    pairs = find_abc_pairs(seq)
    assert [(p.nu, p.k) for p in pairs] == [(2, 4)]
    p = pairs[0]
    r = [v.z for v in seq.records]
    assert modular_rank([r[p.nu - 2], r[p.nu - 1], r[p.nu]]) == 3
    assert modular_rank([r[p.k - 2], r[p.k - 1], r[p.k]]) == 3
    assert modular_rank([r[p.nu - 2], r[p.nu - 1], r[p.k - 1], r[p.k]]) == 4
    flat = hand_sequence([(1, 0, 0, 0), (0, 1, 0, 0), (1, 1, 0, 0), (1, 2, 0, 0), (2, 3, 0, 0)])
    assert find_abc_pairs(flat) == []


def test_abc_pairs_on_random_sequences_reverified():
    seq = ba.enumerate_spherical(random_matrix(3, 50), 10**4)
    for p in find_abc_pairs(seq, min_run=2):
        r = [v.z for v in seq.records]
        assert modular_rank([r[p.nu - 2], r[p.nu - 1], r[p.nu]]) == 3
        assert modular_rank([r[p.k - 2], r[p.k - 1], r[p.k]]) == 3
        assert modular_rank([r[p.nu - 2], r[p.nu - 1], r[p.k - 1], r[p.k]]) == 4


def test_lemma5_arithmetic():
    assert lemma5_constant(10, 100, 10**5, 2) == 10
    assert abs(lemma5_constant(10, 100, 10**5, mpmath.mpf(1.5)) - mpmath.mpf("316.2278")) < 1e-3
    e1, e2, e3, e4 = (E[j][:4] for j in range(4))
    seq = hand_sequence([e3, e1, e2, add(e1, e2), e4, (0, 1, 1, 1)])
    pair = find_abc_pairs(seq)[0]
    rep = lemma5_report(pair, seq, 2)
    assert rep.verdict == NOT_APPLICABLE
    assert lemma5_summary([rep])["count"] == 1
    with pytest.raises(DomainError):
        lemma5_report(pair, seq, 1)


def test_lemma6():
    assert lemma6_threshold(100, 3, mpmath.mpf(0.5)) == 1000
    e1, e2, e3, e4 = (E[j][:4] for j in range(4))
    seq = hand_sequence([e1, e2, add(e1, e2), (0, 0, 10, 1), e3])
    reps = lemma6_report(seq, 3, mpmath.mpf(0.5))
    assert reps[0].verdict == NOT_APPLICABLE
    # Z_3 = sqrt 2, threshold 2^(3/4) <= sqrt(101)
    assert reps[1].verdict == HOLDS
    # Z_4 = sqrt 101, threshold 101^(3/4) > 1
    assert reps[2].verdict == VIOLATED
    for r in reps[1:]:
        assert (r.verdict == HOLDS) == (r.lhs <= r.rhs)
    with pytest.raises(DomainError):
        lemma6_report(seq, 2, 0.1)
    with pytest.raises(ParamError):
        lemma6_report(seq, 3, 0)


def test_dimension_diagnostics_examples(remark4_matrix):
    seq = hand_sequence([E[j] for j in range(5)])
    assert dimension_diagnostics(seq, 1)["tail_rank"] == 5
    seq = ba.enumerate_spherical(remark4_matrix, 10**4)
    d = dimension_diagnostics(seq)
    assert d["tail_rank"] == 2
    with pytest.raises(ParamError):
        dimension_diagnostics(seq, 0)


def test_li_screen():
    assert li_screen(random_matrix(2, 3)) is not None
    th = ThetaMatrix.from_values([["ratio:1/2", "ratio:1/3"]], check_poss=False)
    assert li_screen(th) is None


def test_f_monotonicity_cases():
    zero1 = ThetaMatrix.from_values([["0", "0"]], check_poss=False)
    L = SubspaceL(zero1)
    rep = verify_f_monotonicity(L, ((1, 0, 0), (0, 1, 0)), samples=50)
    assert rep["case"] == "plane_in_L" and rep["last"] == 0 and rep["ok"]
    rep = verify_f_monotonicity(L, ((1, 0, 0), (0, 0, 1)), samples=50)
    assert rep["case"] == "meets_L_in_line" and rep["constant"] and rep["ok"]
    zero2 = ThetaMatrix.from_values([["0", "0"], ["0", "0"]], check_poss=False)
    with pytest.raises(DegeneratePlane):
        verify_f_monotonicity(SubspaceL(zero2), ((0, 0, 1, 0), (0, 0, 0, 1)))
    th = random_matrix(2, 13)
    rep = verify_f_monotonicity(SubspaceL(th), ((3, -1, 2, 0), (1, 4, 0, -2)), samples=1000)
    assert rep["case"] == "transversal" and rep["monotone"] and rep["ok"]
    assert rep["closed_form_gap"] < 1e-50


def test_distance_homogeneity_in_run_plane(remark4_matrix):
    seq = ba.enumerate_spherical(remark4_matrix, 10**3)
    L = SubspaceL(remark4_matrix)
    z = seq.records[-1].z
    d = L.distance(z)
    for c in (2, -3, 7):
        with remark4_matrix.precision.workprec():
            assert abs(L.distance([c * a for a in z]) - abs(c) * d) <= 1e-60
