"""Acceptance criteria, each run at its stated size and time limit.

Each test prints one ``PASS``/``FAIL`` line.  Run the file directly with
``python3 tests/test_acceptance.py`` for the summary alone.
"""

from __future__ import annotations

import random
import sys
import time

import pytest

from mwkit import GF, QQ, suites

SEED = 20261016


def _criterion(number, title, limit, run, minimum_checks=1):
    t0 = time.perf_counter()
    res = run(random.Random(SEED + number))
    elapsed = time.perf_counter() - t0
    ok = res.ok and elapsed < limit and res.checks >= minimum_checks
    status = "PASS" if ok else "FAIL"
    line = f"{status} criterion {number:>2}: {title} ({res.checks} checks, {elapsed:.2f}s < {limit}s)"
    if res.failures:
        line += "\n    " + "\n    ".join(res.failures[:5])
    return ok, line, res, elapsed


def _report(capsys, outcome):
    ok, line, res, elapsed = outcome
    with capsys.disabled():
        print("\n" + line)
    return ok, res, elapsed


CRITERIA = {
    1: (
        "relations, eps, h over F3, F5, F9, Q (500 each)",
        10,
        lambda rng: suites.suite_relations(rng, trials=500, fields=[GF(3), GF(5), GF(9), QQ]),
        4 * 500,
    ),
    2: ("f(H(y)) = 2y and rank(H(a)) = 2 rank(a) (200 each)", 5, lambda rng: suites.suite_forgetful(rng, trials=200), 400),
    3: ("residue axioms over F3(t), F5(t) (500 each)", 10, lambda rng: suites.suite_residues(rng, trials=500), 1000),
    4: ("specialization (200 each)", 5, lambda rng: suites.suite_specialization(rng, trials=200), 200),
    5: ("trace, functional and geometric transfers for F9/F3, F25/F5", 10, lambda rng: suites.suite_transfers(rng), 1),
    6: ("degree lemma gives <-1>", 30, lambda rng: suites.suite_degree_lemma(rng), 4 * 3 + 2),
    7: (
        "P^1 reciprocity: 300 over F3(t), F5(t), 50 over Q(t)",
        60,
        lambda rng: suites.suite_reciprocity(rng, fields=[(GF(3), 300, 6), (GF(5), 300, 6), (QQ, 50, 3)]),
        650,
    ),
    8: (
        "contraction basis values and 100 reconstructions per field",
        10,
        lambda rng: suites.suite_contraction(rng, trials=300, fields=[GF(3), GF(5), QQ]),
        300,
    ),
    9: ("correspondence laws, trace composite, tensor functoriality (200 each)", 30, lambda rng: suites.suite_correspondences(rng, trials=200), 3 * 200 * 4),
    10: ("oracle equivalences for forms, W(F_q) and K^MW_2,3(F_q)", 60, lambda rng: suites.suite_oracles(rng), 1),
}


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number, capsys):
    title, limit, run, minimum = CRITERIA[number]
    ok, res, elapsed = _report(capsys, _criterion(number, title, limit, run, minimum))
    assert res.ok, res.failures
    assert res.checks >= minimum
    assert elapsed < limit, f"took {elapsed:.2f}s, limit {limit}s"


def test_degree_lemma_exact_values():
    # the computed pushforward is literally <-1> for every listed case
    from mwkit import MWElem, degree_lemma

    for F, top in [(GF(3), 4), (GF(5), 4), (GF(7), 4), (QQ, 2)]:
        for n in range(1, top + 1):
            assert degree_lemma(F, n).total == MWElem.angle(F, F.neg(F.one()))


def main() -> int:
    failed = 0
    for number in sorted(CRITERIA):
        title, limit, run, minimum = CRITERIA[number]
        ok, line, _, _ = _criterion(number, title, limit, run, minimum)
        print(line, flush=True)
        failed += not ok
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
