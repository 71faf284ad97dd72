import itertools

import pytest

from starcodes.binary_codes import BinaryCode, extended_hamming, is_extended_perfect, translate
from starcodes.exact_cover import ExactCoverInstance, extend, residual, restrict, solve
from starcodes.pipeline import (
    CodeReport,
    ConditionTwo,
    full_instance,
    odd_words,
    orbit_representatives,
    prepare_code,
    run_code,
    s1_ground,
    s2_ground,
    s3_ground,
    search8,
    search_representative,
    stage_instance,
)
from starcodes.ternary_codes import check_condition2, combine, min_distance, verify_params

H8 = extended_hamming(3)


@pytest.fixture(scope="module")
def unpruned_n8():
    inst = full_instance(H8)
    bare = ExactCoverInstance(inst.ground, inst.candidates, inst.covers)
    return solve(bare).solutions


@pytest.fixture(scope="module")
def pruned_n8():
    return solve(full_instance(H8)).solutions


def test_every_cover_has_size_n():
    inst = full_instance(H8)
    assert len(inst.candidates) == 128
    assert all(len(c) == 8 for c in inst.covers)


def test_unpruned_solutions_are_odd_extended_perfect_codes(unpruned_n8):
    assert len(unpruned_n8) == 240
    for sol in unpruned_n8:
        assert is_extended_perfect(BinaryCode(8, frozenset(sol))).reason == "odd"


def test_condition2_matches_distance_five_on_all_pairs(unpruned_n8, pruned_n8):
    valid = set()
    for sol in unpruned_n8:
        c1 = BinaryCode(8, frozenset(sol))
        ok, _ = check_condition2(H8, c1)
        assert ok == (min_distance(combine(H8, c1)) >= 5)
        if ok:
            valid.add(sol)
    # pruning keeps exactly the valid completions
    assert valid == set(pruned_n8)
    assert valid


def test_conflict_pairs_agree_with_pairwise_predicate():
    prune = ConditionTwo(H8)
    cands = odd_words(8)
    fast = set(prune.conflict_pairs(cands))
    slow = {(i, j) for i, j in itertools.combinations(range(len(cands)), 2)
            if prune.excludes(cands[i], cands[j])}
    assert fast == slow


def test_partner_is_unique_neighbour():
    prune = ConditionTwo(H8)
    for y in odd_words(8):
        x, star = prune.partner(y)
        assert x in H8 and x ^ y == 1 << star


@pytest.mark.parametrize("m", [3, 4])
def test_s1_stage_has_n_solutions(m):
    c0 = extended_hamming(m)
    inst = restrict(full_instance(c0), s1_ground(c0.n))
    sols = solve(inst).solutions
    assert sorted(sols, key=min) == [frozenset({1 << i}) for i in range(c0.n)]


@pytest.mark.parametrize("star", [0, 3])
def test_stage_ground_sets(star):
    e = 1 << star
    s2, s3 = s2_ground(16, star), s3_ground(16, star)
    assert set(s2) < set(s3)
    assert all((x ^ e).bit_count() == 3 and (x & 1) != (e & 1) for x in s2)
    assert len(s2) == 105 and len(s3) == 560


@pytest.mark.parametrize("m,star", [(3, 0), (3, 5), (4, 0)])
def test_implicit_stage_instance_equals_residual_restriction(m, star):
    c0 = extended_hamming(m)
    n, e = c0.n, 1 << star
    prune = ConditionTwo(c0)
    full = full_instance(c0)
    for ground in (s2_ground(n, star), s3_ground(n, star)):
        explicit = restrict(residual(full, [e]), ground)
        implicit = stage_instance(c0, [e], ground, prune)
        assert set(explicit.ground) == set(implicit.ground)
        assert set(explicit.candidates) == set(implicit.candidates)
        for u in implicit.candidates:
            assert explicit.cover_of(u) == implicit.cover_of(u)


def test_staged_search_matches_direct_at_eight(pruned_n8):
    for star in range(8):
        staged = set(search_representative(H8, star, "s3").full_solutions)
        direct = set(extend(full_instance(H8), [1 << star]).solutions)
        assert staged == direct
        assert staged == {s for s in pruned_n8 if 1 << star in s}


def test_orbit_reduction_does_not_change_existence():
    with_red, _ = run_code(H8, 1, "s3", reduce=True)
    without, _ = run_code(H8, 1, "s3", reduce=False)
    assert with_red.orbit_reps == 1 and without.orbit_reps == 8
    assert (with_red.full_solutions > 0) == (without.full_solutions > 0)
    assert with_red.sym_order == without.sym_order == 1344


def test_orbit_representatives_for_length_sixteen():
    order, reps = orbit_representatives(extended_hamming(4))
    assert order == 322560 and reps == [0]


def test_prepare_code_normalises_and_rejects():
    c0, _, _ = prepare_code(translate(H8, 0b11))
    assert 0 in c0
    odd, _, _ = prepare_code(translate(H8, 1))
    assert 0 in odd and is_extended_perfect(odd).reason == "even"
    with pytest.raises(ValueError):
        prepare_code(BinaryCode(8, H8.words - {max(H8.words)}))


def test_budget_exhaustion_is_flagged():
    report, _ = run_code(H8, 7, "s2", budget=2)
    assert not report.exhausted and report.incomplete == [0]
    assert "incomplete=e1" in report.to_line()


def test_report_line_round_trip():
    report, _ = run_code(H8, 3, "s3")
    line = report.to_line(timing=False)
    assert line.split()[0] == "code_index=3"
    back = CodeReport.from_line(line)
    assert back.to_line(timing=False) == line
    keys = [tok.split("=")[0] for tok in line.split()]
    for key in ("code_index", "sym_order", "orbit_reps", "s2_solutions", "s3_solutions",
                "nodes", "exhausted", "seconds"):
        assert key in keys


def test_report_is_deterministic_apart_from_time():
    a, _ = run_code(H8, 1, "s3")
    b, _ = run_code(H8, 1, "s3")
    assert a.to_line(timing=False) == b.to_line(timing=False)


def test_search8_finds_a_certified_code():
    result = search8()
    assert verify_params(result.code, 8, 5, 7, 16)
    assert result.seconds < 60



def test_combined_distances_are_three_five_or_six(unpruned_n8):
    seen = {min_distance(combine(H8, BinaryCode(8, frozenset(sol)))) for sol in unpruned_n8}
    assert seen <= {3, 5, 6}
    assert 5 in seen
