import numpy as np
import pytest

from treeshift import (
    DeciderOptions,
    build_shift,
    decide_cs,
    dump_json,
    generate_binary,
    generate_path,
    kernel_obstruction,
    positivize_weights,
    reevaluate_obstruction,
    sylvester_space,
    unitary_search,
    verify_c_symmetry,
    word_trace_obstruction,
    word_value,
)
from conftest import random_complex


def path3_shift(lam1, lam2):
    return build_shift(generate_path(3), {"1": lam1, "2": lam2})


def test_options_doc_round_trip():
    opts = DeciderOptions(tol=1e-9, seed=3)
    doc = opts.to_doc()
    assert doc["tol"] == 1e-9
    assert doc["seed"] == 3
    assert set(doc) == {"tol", "rank_rtol", "max_word_len", "restarts", "seed", "max_iter"}


def test_kernel_obstruction_never_fires_on_shifts(y_shift, trunked_y_shift):
    # dim ker M^m always equals dim ker (M*)^m for a single matrix, so the
    # rank check can only trip on data where the two sides are inconsistent
    assert kernel_obstruction(y_shift.matrix) is None
    assert kernel_obstruction(trunked_y_shift.matrix) is None


def test_kernel_obstruction_zero_matrix():
    assert kernel_obstruction(np.zeros((3, 3), dtype=complex)) is None


def test_word_value_anchors():
    t = path3_shift(1.0, 2.0)
    word = ["T", "T", "T*", "T", "T*", "T*"]
    assert word_value(t.matrix, word) == pytest.approx(16.0, abs=1e-12)
    assert word_value(t.matrix, word[::-1]) == pytest.approx(4.0, abs=1e-12)


def test_word_value_matches_pure_python(rng):
    from oracles import complex_word_trace

    m = random_complex(rng, (4, 4))
    for word in (["T"], ["T", "T*"], ["T*", "T", "T", "T*"], ["T", "T*", "T*"]):
        fast = word_value(m, word)
        slow = complex_word_trace(m.tolist(), word)
        assert abs(fast - slow) <= 1e-10 * max(1.0, abs(slow))


def test_word_trace_obstruction_found():
    t = path3_shift(1.0, 2.0)
    witness = word_trace_obstruction(t.matrix)
    assert witness is not None
    assert witness["word"] == ["T", "T", "T*", "T", "T*", "T*"]
    trace = complex(*witness["trace"])
    trace_rev = complex(*witness["trace_reversed"])
    assert trace == pytest.approx(16.0, abs=1e-12)
    assert trace_rev == pytest.approx(4.0, abs=1e-12)
    assert witness["margin"] > witness["threshold"]


def test_word_trace_obstruction_absent_on_equal_weights():
    t = path3_shift(1.0, 1.0)
    assert word_trace_obstruction(t.matrix) is None


def test_word_trace_obstruction_zero_matrix():
    assert word_trace_obstruction(np.zeros((2, 2), dtype=complex)) is None


def test_word_trace_minimal_length():
    # the shortest separating word for the weighted path has six letters,
    # so capping the search below that must come back empty
    t = path3_shift(1.0, 2.0)
    assert word_trace_obstruction(t.matrix, max_len=5) is None


def test_sylvester_space_zero_operator():
    space = sylvester_space(np.zeros((2, 2), dtype=complex))
    assert len(space) == 3
    for i, a in enumerate(space):
        assert np.linalg.norm(a - a.T) <= 1e-12
        for j, b in enumerate(space):
            inner = np.vdot(a, b)
            assert abs(inner - (1.0 if i == j else 0.0)) <= 1e-10


def test_sylvester_space_path2():
    t = build_shift(generate_path(2), {"1": 1.0})
    space = sylvester_space(t.matrix)
    assert len(space) == 2
    for a in space:
        assert np.linalg.norm(t.matrix @ a - a @ t.matrix.T) <= 1e-10


def test_sylvester_space_members_solve_the_equation(y_shift):
    for a in sylvester_space(y_shift.matrix):
        assert np.linalg.norm(y_shift.matrix @ a - a @ y_shift.matrix.T) <= 1e-10
        assert np.linalg.norm(a - a.T) <= 1e-12


def test_unitary_search_identity_direction():
    n = 2
    space = [np.eye(n, dtype=complex) / np.sqrt(n)]
    found = unitary_search(space, seed=0)
    assert found is not None
    # the only unitaries in the span are unimodular multiples of I
    off = found - np.diag(np.diag(found))
    assert np.linalg.norm(off) <= 1e-8
    assert abs(abs(found[0, 0]) - 1.0) <= 1e-8
    assert abs(found[0, 0] - found[1, 1]) <= 1e-8


def test_unitary_search_finds_exchange():
    t = build_shift(generate_path(2), {"1": 1.0})
    space = sylvester_space(t.matrix)
    found = unitary_search(space, seed=0)
    assert found is not None
    assert np.linalg.norm(found @ found.conj().T - np.eye(2)) <= 1e-8
    assert np.linalg.norm(found - found.T) <= 1e-8
    assert np.linalg.norm(t.matrix @ found - found @ t.matrix.T) <= 1e-8


def test_unitary_search_empty_on_skew_space():
    # no unitary lies in the span of a rank-one symmetric projector direction
    e11 = np.zeros((2, 2), dtype=complex)
    e11[0, 0] = 1.0
    assert unitary_search([e11 * 0.0], seed=0) is None
    t = path3_shift(1.0, 2.0)
    assert unitary_search(sylvester_space(t.matrix), seed=0) is None


def test_decide_cs_branching_example(y_shift):
    verdict = decide_cs(y_shift)
    assert verdict.kind == "cs"
    assert verdict.certificate is not None
    assert verdict.residuals["intertwining"] <= 1e-10
    report = verify_c_symmetry(y_shift, verdict.certificate)
    assert report.passed


def test_decide_cs_trunked_branching_not_cs(trunked_y_shift):
    verdict = decide_cs(trunked_y_shift)
    assert verdict.kind == "not_cs"
    assert verdict.obstruction["kind"] == "word_trace"
    witness = verdict.obstruction["witness"]
    assert witness["word"] == ["T", "T", "T*", "T", "T*", "T*"]
    trace = complex(*witness["trace"])
    trace_rev = complex(*witness["trace_reversed"])
    assert trace == pytest.approx(5.0, abs=1e-12)
    assert trace_rev == pytest.approx(4.0, abs=1e-12)


def test_decide_cs_weighted_path_not_cs():
    verdict = decide_cs(path3_shift(1.0, 2.0))
    assert verdict.kind == "not_cs"
    assert verdict.obstruction["kind"] == "word_trace"


def test_decide_cs_equal_weight_path_cs():
    verdict = decide_cs(path3_shift(1.0, 1.0))
    assert verdict.kind == "cs"


def test_decide_cs_binary_equal_weights():
    tree = generate_binary(2)
    s = build_shift(tree, {v: 1.0 for v in tree.nonroot_vertices()})
    verdict = decide_cs(s)
    assert verdict.kind == "cs"
    assert verify_c_symmetry(s, verdict.certificate).passed


def test_decide_cs_one_by_one():
    verdict = decide_cs(np.zeros((1, 1), dtype=complex))
    assert verdict.kind == "cs"


def test_decide_cs_deterministic(trunked_y_shift, y_shift):
    for s in (trunked_y_shift, y_shift):
        first = dump_json(decide_cs(s).to_doc())
        second = dump_json(decide_cs(s).to_doc())
        assert first == second


def test_decide_cs_gauge_invariant(rng):
    tree = generate_path(4)
    weights = {
        v: complex(rng.standard_normal(), rng.standard_normal())
        for v in tree.nonroot_vertices()
    }
    s = build_shift(tree, weights)
    positive, _gauge = positivize_weights(tree, weights)
    s_pos = build_shift(tree, positive)
    assert decide_cs(s).kind == decide_cs(s_pos).kind


def test_verdict_doc_shape(y_shift):
    doc = decide_cs(y_shift).to_doc()
    assert set(doc) == {
        "verdict",
        "certificate",
        "obstruction",
        "residuals",
        "diagnostics",
        "seed",
        "options",
    }
    assert doc["verdict"] == "cs"
    assert doc["obstruction"] is None
    assert doc["certificate"]["basis"] == list(y_shift.basis)


def test_reevaluate_word_trace(trunked_y_shift):
    verdict = decide_cs(trunked_y_shift)
    ok, margin = reevaluate_obstruction(trunked_y_shift, verdict.obstruction)
    assert ok
    assert margin == pytest.approx(1.0, abs=1e-12)


def test_reevaluate_rejects_stale_witness(y_shift):
    stale = {
        "kind": "word_trace",
        "witness": {"word": ["T", "T", "T*", "T", "T*", "T*"]},
    }
    ok, margin = reevaluate_obstruction(y_shift, stale)
    assert not ok
    assert margin <= 1e-10


def test_reevaluate_kernel_kind(y_shift):
    fabricated = {"kind": "kernel_dim", "witness": {"power": 2}}
    ok, margin = reevaluate_obstruction(y_shift, fabricated)
    assert not ok
    assert margin == 0.0


def test_reevaluate_unknown_kind(y_shift):
    with pytest.raises(ValueError, match="unknown obstruction"):
        reevaluate_obstruction(y_shift, {"kind": "nonsense", "witness": {}})
