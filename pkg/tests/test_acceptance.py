"""Acceptance criteria, one test per criterion, all exact-value checks.

Run with ``pytest tests/test_acceptance.py -v -s`` to see one PASS/FAIL
line per criterion.
"""

import json
import time
from fractions import Fraction

import pytest

from ortholab import Scalar, Subspace, inner, join, outer, span, vec
from ortholab.classical import two_state_demo
from ortholab.cli import main as cli_main
from ortholab.dsl import (
    BooleanSetAlgebra,
    SubspaceLattice,
    check,
    eval_term,
    parse_statement,
)
from ortholab.lattice import (
    GAUSSIAN_RATIONAL,
    RATIONAL_REAL,
    distributes,
    find_nondistributive_witness,
    substream,
)
from ortholab.process import check_distributivity, evaluate_in, holds_surely, prob_of, run, spin_demo, hatch_demo
from ortholab.propositions import (
    ExpectationIn,
    InSubspace,
    Interval,
    evaluate,
    expectation,
    is_subspace_closed,
    spin_bound_witness,
)
from ortholab.spin import SPIN_Y, SPIN_Z, Y_DOWN, Y_UP

from lattice_laws import run_law_suite

HALF = Fraction(1, 2)


def _report(criterion: str, ok: bool, detail: str = ""):
    status = "PASS" if ok else "FAIL"
    suffix = f" ({detail})" if detail else ""
    print(f"{status} {criterion}{suffix}")
    assert ok, f"{criterion}{suffix}"


@pytest.fixture(scope="module")
def spin_run():
    stages, formulas = spin_demo()
    return formulas, run(stages)


@pytest.fixture(scope="module")
def hatch_run():
    stages, formulas = hatch_demo()
    return formulas, run(stages)


def test_criterion_01_common_stage_identity_before_measurement(spin_run):
    f, hs = spin_run
    left = f["p_i"] & (f["q_i"] | f["r_i"])
    right = (f["p_i"] & f["q_i"]) | (f["p_i"] & f["r_i"])
    verdict = check_distributivity(left, right, hs)
    ok = (
        holds_surely(left, hs) is False
        and holds_surely(right, hs) is False
        and verdict.left_false_in_all
        and verdict.right_false_in_all
    )
    _report("criterion 1: spin demo, both sides false at the preparation stage", ok)


def test_criterion_02_common_stage_identity_after_measurement(spin_run):
    f, hs = spin_run
    left = f["p_i"] & (f["q_o"] | f["r_o"])
    right = (f["p_i"] & f["q_o"]) | (f["p_i"] & f["r_o"])
    verdict = check_distributivity(left, right, hs)
    ok = (
        holds_surely(left, hs) is True
        and holds_surely(right, hs) is True
        and verdict.per_history_agree
    )
    _report("criterion 2: spin demo, both sides true with per-branch agreement", ok)


def test_criterion_03_born_value(spin_run):
    f, hs = spin_run
    value = prob_of(f["p_i"] & f["q_o"], hs)
    _report("criterion 3: prob(p_i & q_o) = 1/2 exactly", value == HALF, f"got {value}")


def test_criterion_04_expectation_facts(spin_run):
    f, hs = spin_run
    facts = (
        expectation(SPIN_Y, vec(1, 1)) == 0
        and expectation(SPIN_Y, Y_UP) == HALF
        and expectation(SPIN_Y, Y_DOWN) == -HALF
    )
    primed_or = ExpectationIn(SPIN_Y, (Interval.point(HALF),)) | ExpectationIn(
        SPIN_Y, (Interval.point(-HALF),)
    )
    disjunction_false = evaluate(primed_or, vec(1, 1)) is False
    surely_false = holds_surely(f["q'_i"] | f["r'_i"], hs) is False
    psi = vec(1, 1)
    rho = outer(psi, psi).scale(Scalar(1) / inner(psi, psi))
    trace_zero = (rho @ SPIN_Y).trace() == Scalar(0)
    ok = facts and disjunction_false and surely_false and trace_zero
    _report("criterion 4: y-spin expectation facts and trace form", ok)


def test_criterion_05_third_step(spin_run):
    f, hs = spin_run
    final_disjunction = holds_surely(f["p_f"] | f["q_f"], hs)
    footnote = all(
        evaluate_in(f["q_f"], h) == evaluate_in(f["q_o"], h) for h in hs
    )
    _report(
        "criterion 5: final-stage disjunction sure; q_f iff q_o per branch",
        final_disjunction and footnote,
    )


def test_criterion_06_hatch(hatch_run):
    g, hs = hatch_run
    probs = prob_of(g["q_o"], hs) == HALF and prob_of(g["r_o"], hs) == HALF
    sure = holds_surely(g["q_o"] | g["r_o"], hs)
    initial = (
        holds_surely(g["p_i"], hs)
        and holds_surely(~g["q_i"], hs)
        and holds_surely(~g["r_i"], hs)
    )
    mixed = check_distributivity(
        g["p_i"] & (g["q_o"] | g["r_o"]),
        (g["p_i"] & g["q_i"]) | (g["p_i"] & g["r_i"]),
        hs,
    )
    mismatch = (
        mixed.left_true_in_all
        and mixed.right_false_in_all
        and mixed.stage_mismatch
        and not mixed.satisfied
    )
    _report("criterion 6: hatch demo probabilities, certainties, mixed-stage flag", probs and sure and initial and mismatch)


def test_criterion_07_two_state_verdict():
    real = two_state_demo(RATIONAL_REAL)
    gauss = two_state_demo(GAUSSIAN_RATIONAL)
    ok = True
    for verdict in (real, gauss):
        ok &= verdict.left == verdict.balanced
        ok &= verdict.right == Subspace.zero(2)
        ok &= verdict.is_distributive is False
        ok &= verdict.pairwise_meets_zero
    ok &= (real.left, real.right, real.is_distributive) == (
        gauss.left,
        gauss.right,
        gauss.is_distributive,
    )
    _report("criterion 7: two-state lattice verdict, identical over both fields", bool(ok))


def test_criterion_08_ortholattice_law_suite():
    start = time.perf_counter()
    samples, violations = run_law_suite(pairs_per_dim=2000, triples_per_dim=1500, seed=0)
    witness = find_nondistributive_witness(2, trials=1000, seed=42)
    elapsed = time.perf_counter() - start
    ok = (
        samples >= 10_000
        and violations == []
        and witness is not None
        and not distributes(*witness)
        and elapsed < 30.0
    )
    _report(
        "criterion 8: law suite on >= 10^4 samples plus witness search",
        ok,
        f"{samples} samples, {len(violations)} violations, {elapsed:.1f}s",
    )


def test_criterion_09_borel_witnesses():
    # (a) the zero-expectation set is not closed under combination
    zero_z = ExpectationIn(SPIN_Z, (Interval.point(0),))
    x_up, x_down = vec(1, 1), vec(1, -1)
    combination = x_up + x_down  # proportional to z-up
    part_a = (
        evaluate(zero_z, x_up)
        and evaluate(zero_z, x_down)
        and expectation(SPIN_Z, combination) == HALF
        and is_subspace_closed(zero_z, [x_up, x_down]) is False
    )
    # (b) disjunction differs from the join
    x_axis, y_axis = span([vec(1, 0)], 2), span([vec(0, 1)], 2)
    union = InSubspace(x_axis) | InSubspace(y_axis)
    joined = InSubspace(join(x_axis, y_axis))
    probe = vec(1, 1)
    part_b = evaluate(union, probe) is False and evaluate(joined, probe) is True
    # (c) the spin bound, sampled
    y_up_ray, y_down_ray = span([Y_UP], 2), span([Y_DOWN], 2)
    checked = 0
    part_c = True
    trial = 0
    while checked < 10_000:
        rng = substream("bound-acceptance", trial)
        trial += 1
        psi = vec(
            Scalar(rng.randint(-3, 3), rng.randint(-3, 3)),
            Scalar(rng.randint(-3, 3), rng.randint(-3, 3)),
        )
        if psi.is_zero():
            continue
        checked += 1
        value = spin_bound_witness(psi)
        if not -HALF <= value <= HALF:
            part_c = False
            break
        if value == HALF and span([psi], 2) != y_up_ray:
            part_c = False
            break
        if value == -HALF and span([psi], 2) != y_down_ray:
            part_c = False
            break
    _report(
        "criterion 9: non-closed expectation set, union vs join, spin bound",
        part_a and part_b and part_c,
        f"{checked} states sampled",
    )


def test_criterion_10_dsl_baseline():
    boolean_ok = True
    for universe in (1, 2, 3, 4):
        for law in (
            "x & (y | z) = (x & y) | (x & z)",
            "!(x | y) = !x & !y",
            "!(x & y) = !x | !y",
            "x & (x | y) = x",
            "x | (x & y) = x",
        ):
            report = check(parse_statement(law), BooleanSetAlgebra(universe))
            boolean_ok &= report.holds and report.mode == "exhaustive"

    weaker = parse_statement("(x & y) | (x & z) <= x & (y | z)")
    weaker_report = check(weaker, SubspaceLattice(3), trials=1000, seed=0)

    distributive = parse_statement("x & (y | z) = (x & y) | (x & z)")
    lat2 = SubspaceLattice(2)
    cx_report = check(distributive, lat2, trials=1000, seed=0)
    self_verified = False
    if cx_report.counterexample is not None:
        cx = cx_report.counterexample
        self_verified = (
            eval_term(distributive.lhs, cx.assignment, lat2) == cx.lhs
            and eval_term(distributive.rhs, cx.assignment, lat2) == cx.rhs
            and cx.lhs != cx.rhs
        )
    ok = boolean_ok and weaker_report.holds and self_verified
    _report("criterion 10: exhaustive Boolean baseline, weaker law, self-verifying reports", ok)


def test_criterion_11_cli_determinism(capsys):
    invocations = (
        ["demo", "spin", "--format", "json"],
        ["demo", "hatch", "--format", "json", "--seed", "3"],
        ["demo", "two-state", "--format", "json"],
        [
            "check",
            "x & (y | z) = (x & y) | (x & z)",
            "--structure",
            "subspace",
            "--dim",
            "2",
            "--trials",
            "120",
            "--seed",
            "7",
            "--format",
            "json",
        ],
    )
    ok = True
    for argv in invocations:
        cli_main(list(argv))
        first = capsys.readouterr().out
        cli_main(list(argv))
        second = capsys.readouterr().out
        ok &= first == second and bool(first.strip())
        json.loads(first)  # must be valid JSON
    with capsys.disabled():
        _report("criterion 11: byte-identical JSON for identical argv and seed", bool(ok))
