"""Acceptance criteria 1-10, each run at its stated scale and time budget.

Every test prints one ``ACCEPTANCE C<n> PASS|FAIL`` line to the terminal
before asserting, so ``pytest -v`` output doubles as the acceptance report.
"""
from __future__ import annotations

import subprocess
import sys
import time
from fractions import Fraction

import pytest

from conftest import WORKED

from decswamp import level, selfcheck
from decswamp.flags import Subspace


def report(capsys, number, ok, detail):
    with capsys.disabled():
        print(f"\nACCEPTANCE C{number} {'PASS' if ok else 'FAIL'}: {detail}")


def timed(sweep, **kwargs):
    start = time.perf_counter()
    res = sweep(selfcheck.DEFAULT_SEED, **kwargs)
    return res, time.perf_counter() - start


def judge(capsys, number, res, elapsed, budget, extra_ok=True, extra=""):
    ok = res.ok and elapsed < budget and extra_ok
    detail = (f"{res.name}: {res.checked} checks, {len(res.failures)} failures, "
              f"{elapsed:.2f}s of {budget}s{extra}")
    report(capsys, number, ok, detail)
    assert res.ok, res.failures[:3]
    assert elapsed < budget
    assert extra_ok, extra


def test_c1_oracle_equivalence(capsys):
    res, elapsed = timed(selfcheck.sweep_mu_oracle, count=500)
    judge(capsys, 1, res, elapsed, 60, extra=f", induced route on {res.notes['induced_route']}")


def test_c2_gamma_roundtrip(capsys):
    res, elapsed = timed(selfcheck.sweep_gamma_roundtrip, count=1000)
    judge(capsys, 2, res, elapsed, 5)


def test_c3_estimates(capsys):
    res, elapsed = timed(selfcheck.sweep_estimates, count=500)
    judge(capsys, 3, res, elapsed, 30)


def test_c4_parabolic_equivalence(capsys):
    res, elapsed = timed(selfcheck.sweep_parabolic, count=200)
    judge(capsys, 4, res, elapsed, 60, extra=f", {res.notes['inadmissible_flagged']} inadmissible flagged")


def test_c5_level_suite(capsys):
    res, elapsed = timed(selfcheck.sweep_level, lemma_count=200, oracle_count=60)
    judge(capsys, 5, res, elapsed, 120)


def test_c6_omega_machinery(capsys):
    res, elapsed = timed(selfcheck.sweep_omega, count=200)
    dec = level.make_decomposition(2, (1, 2), [0], [[[0, 1]]], [[[1, 0]]],
                                   [[[1, 0], [0, 0]], [[0, 0], [0, 1]]])
    point = level.reconstruct_completed_hom(dec)
    f1_rank = len(Subspace.span(point.f[0], 2).basis)
    hand = f1_rank == 1 and point.f[1] == ((Fraction(1),),) and point.l == (0,)
    judge(capsys, 6, res, elapsed, 30, hand, f", boundary example {'matches' if hand else 'differs'}")


def test_c7_gieseker_comparison(capsys):
    res, elapsed = timed(selfcheck.sweep_gieseker, count=50)
    pairs = res.notes["critical_pairs"]
    judge(capsys, 7, res, elapsed, 60, pairs > 0, f", {pairs} critical pairs")


def test_c8_deformation(capsys):
    res, elapsed = timed(selfcheck.sweep_deformation, count=200)
    judge(capsys, 8, res, elapsed, 30)


def test_c9_slope_bound(capsys):
    res, elapsed = timed(selfcheck.sweep_slope_bound)
    semistable = res.notes["semistable_configs"]
    judge(capsys, 9, res, elapsed, 30, semistable > 0, f", {semistable} semistable configs")


CLI_RUNS = [
    (["selftest", "--seed", "0"], 0),
    (["stab", "--input", str(WORKED / "swamp_r2.json")], 0),
    (["walls", "--input", str(WORKED / "swamp_r2.json")], 0),
    (["df", "--input", str(WORKED / "df_r2.json")], 0),
    (["gieseker", "--input", str(WORKED / "split_r2.json"), "--n", "2"], 0),
    (["parabolic", "--input", str(WORKED / "parabolic_r2.json")], 0),
    (["level", "--input", str(WORKED / "level_r2.json")], 0),
    (["stab", "--input", str(WORKED / "swamp_r2.json"), "--json"], 0),
    (["stab", "--input", str(WORKED / "swamp_r2.json"), "--delta2", "-1"], 3),
    (["stab", "--input", str(WORKED / "absent.json")], 2),
]


def cli(argv):
    proc = subprocess.run([sys.executable, "-m", "decswamp", *argv], capture_output=True)
    return proc.returncode, proc.stdout, proc.stderr


def test_c10_cli_determinism(capsys):
    problems = []
    for argv, code in CLI_RUNS:
        first, second = cli(argv), cli(argv)
        if first != second:
            problems.append(f"{' '.join(argv[:1])}: outputs differ between runs")
        if first[0] != code:
            problems.append(f"{' '.join(argv)}: exit {first[0]}, expected {code}")
    ok = not problems
    report(capsys, 10, ok, f"{len(CLI_RUNS)} invocations run twice" + ("" if ok else "; " + "; ".join(problems)))
    assert ok, problems


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
