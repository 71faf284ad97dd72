import itertools

import pytest

from oracles import steiner_ok
from starcodes.binary_codes import extended_hamming
from starcodes.designs import (
    read_solution,
    stage_restriction,
    steiner_check,
    steiner_from_solution,
    write_solution,
)
from starcodes.exact_cover import ExactCoverInstance, solve
from starcodes.pipeline import search_representative, stage_instance, s2_ground

FANO = [(0, 1, 2), (0, 3, 4), (0, 5, 6), (1, 3, 5), (1, 4, 6), (2, 3, 6), (2, 4, 5)]


def test_steiner_check_on_fano_plane():
    assert steiner_check(FANO, list(range(7)), 2)
    broken = steiner_check(FANO[:-1], list(range(7)), 2)
    assert not broken and "uncovered" in broken.reason


def test_steiner_check_detects_double_cover():
    verdict = steiner_check(FANO + [(0, 1, 3)], list(range(7)), 2)
    assert not verdict and "covered 2 times" in verdict.reason


@pytest.fixture(scope="module")
def outcome8():
    return search_representative(extended_hamming(3), 0, "s3")


def test_s2_solutions_at_eight_are_sts7(outcome8):
    assert outcome8.s2_solutions
    for sol in outcome8.s2_solutions:
        report = steiner_from_solution(sorted(sol), 0, 8)
        assert report and report.kind == "STS" and len(report.blocks) == 7
        assert steiner_ok(report.blocks, range(1, 8), 2)


def test_full_solutions_restrict_to_sqs8(outcome8):
    assert outcome8.full_solutions
    for sol in outcome8.full_solutions:
        part = stage_restriction(sorted(sol), 0, "s3")
        report = steiner_from_solution(part, 0, 8, "SQS")
        assert report and len(report.blocks) == 14
        assert steiner_ok(report.blocks, range(8), 3)


def test_s2_stage_at_sixteen_without_pruning_is_an_sts15():
    # C0 only enters through pruning, so the bare S2 instance is the STS(15) problem
    c0 = extended_hamming(4)
    inst = stage_instance(c0, [1], s2_ground(16, 0))
    bare = ExactCoverInstance(inst.ground, inst.candidates, inst.covers)
    sol = solve(bare, "first").solutions[0] | {1}
    report = steiner_from_solution(sorted(sol), 0, 16)
    assert report and report.kind == "STS" and len(report.blocks) == 35
    assert report.summary().startswith("STS(15) blocks=35 expected=35 pass")


def test_removed_word_is_reported(outcome8):
    sol = sorted(outcome8.s2_solutions[0])
    damaged = [w for w in sol if w != 1][1:] + [1]
    report = steiner_from_solution(damaged, 0, 8, "STS")
    assert not report
    assert any(p.startswith("uncovered") for p in report.problems)


def test_solution_file_round_trip(tmp_path, outcome8):
    words = sorted(outcome8.full_solutions[0])
    path = tmp_path / "sol.txt"
    write_solution(path, words, 8, 0)
    assert path.read_text().splitlines()[0] == "n=8 e=1"
    n, star, back = read_solution(path)
    assert (n, star, back) == (8, 0, words)


def test_block_count_formulas():
    for v in (7, 15):
        assert steiner_from_solution([], 0, v + 1, "STS").expected_blocks == v * (v - 1) // 6
    assert steiner_from_solution([], 0, 16, "SQS").expected_blocks == 140
    assert all(len(b) == 3 for b in itertools.islice(FANO, 3))
