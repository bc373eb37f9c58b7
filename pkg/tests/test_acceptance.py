"""Acceptance criteria, each run at its stated tolerance and time budget.

Every test prints one ``PASS``/``FAIL`` line (visible in ``pytest -v`` output).
"""

import subprocess
import sys
import time

import pytest

from quasilee import reproduce as R

CRITERIA = [
    (1, "golden matrices byte-exact", R.check_matrices, 1.0),
    (2, "two-fold sumset counts, q in {17,19,23,25,29,49}", R.check_sumset_counts, 10.0),
    (3, "three-fold sumset covers Gamma, same q", R.check_covering3, 30.0),
    (4, "cubic codes: lemma + brute radii + dimension", R.check_cubic_codes, 120.0),
    (5, "norm-one q=13,25 and hyperbola q=17,23", R.check_norm_and_hyperbola, 120.0),
    (6, "z^(1+q) circle equals x^2-delta*y^2 circle", R.check_li_equals_norm, None),
    (7, "unit-sphere codes signed-permutation equivalent", R.check_equivalences, None),
    (8, "cubic curve factorization + Hasse-Weil window", R.check_aux_curve, None),
    (9, "spectral identities, Ramanujan/Weil bounds, dense oracle", R.check_spectral, 60.0),
    (10, "diameter 3 = sumset prediction <= Chung bound", R.check_diameter, 30.0),
    (11, "property suite (balls, randomized field, ball sizes)", R.check_properties, None),
]


def report(capsys, label, ok, seconds, detail):
    with capsys.disabled():
        print(f"\n[{'PASS' if ok else 'FAIL'}] {label} ({seconds:.2f} s)" + ("" if ok else f"\n{detail}"))


@pytest.mark.parametrize("num,title,check,budget", CRITERIA, ids=[f"criterion_{c[0]:02d}" for c in CRITERIA])
def test_criterion(capsys, num, title, check, budget):
    t0 = time.perf_counter()
    res = check()
    dt = time.perf_counter() - t0
    within = budget is None or dt < budget
    ok = res.passed and within
    detail = res.detail + ("" if within else f"\nexceeded time budget {budget} s")
    report(capsys, f"criterion {num}: {title}", ok, dt, detail)
    assert res.passed, res.detail
    assert within, f"took {dt:.1f} s, budget {budget} s"


def test_reproduce_command_end_to_end(capsys):
    t0 = time.perf_counter()
    proc = subprocess.run([sys.executable, "-m", "quasilee", "reproduce-paper"], capture_output=True, text=True)
    dt = time.perf_counter() - t0
    ok = proc.returncode == 0 and dt < 300
    report(capsys, "reproduce-paper exits 0 within 5 minutes", ok, dt, proc.stdout + proc.stderr)
    assert proc.returncode == 0, proc.stdout
    assert dt < 300
