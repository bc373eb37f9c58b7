"""Regenerate the published matrices and re-run every verification at desk scale.

Each check returns a :class:`CheckResult`; ``run_all`` is what
``quasilee reproduce-paper`` executes.
"""

from __future__ import annotations

import difflib
import math
import random
import time
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Callable

import numpy as np

from .code import LeeCode, build_parity_check, matrix_text
from .field import FieldParams, norm_by_power, TowerElement, trace_to_prime
from .generators import (
    FormClass,
    QuadraticForm,
    classify_form,
    cubic_set,
    equivalence_transform,
    hyperbola_set,
    li_norm_set,
    mat_inv,
    norm_one_set,
    quadratic_unit_set,
    target_form,
    transform_points,
)
from .spectral import bfs_distances, dense_spectrum, full_spectrum
from .verify import (
    Verdict,
    check_quasi_perfect,
    curve_point_stats,
    factor_check,
    layers,
    lee_ball_enumerated,
    signed_perm_equivalent,
    sphere2,
    upper3,
    verify_count_lemma,
)

GOLDEN_VERSION = "v1"


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0


def q25_field() -> FieldParams:
    """F_25 = F_5[sqrt 2] via x^2 - 2, with 3 + 4*sqrt(2) as primitive element."""
    return FieldParams.create(5, 2, modulus=[-2, 0, 1], primitive=[3, 4])


def cubic_field(q: int) -> FieldParams:
    if q == 25:
        return q25_field()
    for p in range(5, q + 1):
        k = round(math.log(q, p))
        if p**k == q:
            return FieldParams.create(p, k)
    raise ValueError(q)


GOLDEN = {
    "cubic_p17": lambda: cubic_set(FieldParams.create(17)),
    "cubic_p19": lambda: cubic_set(FieldParams.create(19)),
    "cubic_p23": lambda: cubic_set(FieldParams.create(23)),
    "cubic_q25": lambda: cubic_set(q25_field()),
    "hyperbola_p17": lambda: hyperbola_set(FieldParams.create(17)),
    "hyperbola_p23": lambda: hyperbola_set(FieldParams.create(23)),
}


def golden_dir(override: str | Path | None = None) -> Path:
    if override is not None:
        return Path(override)
    return Path(str(resources.files("quasilee") / "golden" / GOLDEN_VERSION))


def check_matrices(directory=None) -> CheckResult:
    d = golden_dir(directory)
    diffs = []
    for name, build in GOLDEN.items():
        got = matrix_text(build_parity_check(build().reps).matrix).encode()
        path = d / f"{name}.txt"
        want = path.read_bytes() if path.exists() else b""
        if got != want:
            diff = difflib.unified_diff(
                want.decode(errors="replace").splitlines(),
                got.decode().splitlines(),
                f"{path} (fixture)",
                f"{name} (regenerated)",
                lineterm="",
            )
            diffs.append("\n".join(diff))
    if diffs:
        return CheckResult("golden matrices", False, "\n".join(diffs))
    return CheckResult("golden matrices", True, f"{len(GOLDEN)} matrices byte-identical")


LEMMA_QS = (17, 19, 23, 25, 29, 49)


def check_sumset_counts() -> CheckResult:
    bad, sizes = [], []
    for q in LEMMA_QS:
        r = verify_count_lemma(cubic_field(q))
        sizes.append(f"q={q}:{r.h2_size}/{r.union2}")
        if not r.ok:
            bad.append(str(r))
    return CheckResult("two-fold sumset counts", not bad, "; ".join(bad or sizes))


def check_covering3() -> CheckResult:
    bad = []
    for q in LEMMA_QS:
        L = layers(cubic_set(cubic_field(q)), 3)
        if not L.cumulative[3].all():
            bad.append(f"q={q}: {int(L.cumulative[3].sum())} of {L.cumulative[3].size}")
    return CheckResult("three-fold covering", not bad, "; ".join(bad) or f"all of Gamma for q in {LEMMA_QS}")


def _full_check(H, n_expected, dim_expected) -> str | None:
    code = LeeCode.from_generator_set(H)
    rep = check_quasi_perfect(code, bruteforce=True)
    bf = rep.bruteforce
    problems = []
    if rep.verdict is not Verdict.QUASI_PERFECT2:
        problems.append(f"lemma verdict {rep.verdict.value}")
    if bf["packing_radius"] != 2 or bf["covering_radius"] != 3:
        problems.append(f"radii {bf}")
    if code.n != n_expected:
        problems.append(f"length {code.n} != {n_expected}")
    if code.dimension != dim_expected:
        problems.append(f"dimension {code.dimension} != {dim_expected}")
    return ", ".join(problems) or None


def check_cubic_codes() -> CheckResult:
    bad = []
    for q in (17, 19, 23, 25):
        F = cubic_field(q)
        n = (q - 1) // 2
        err = _full_check(cubic_set(F), n, n - 2 * F.k)
        if err:
            bad.append(f"q={q}: {err}")
    return CheckResult("cubic codes are 2-quasi-perfect", not bad, "; ".join(bad) or "q=17,19,23,25")


def check_norm_and_hyperbola() -> CheckResult:
    bad = []
    for q, F in ((13, FieldParams.create(13)), (25, FieldParams.create(5, 2))):
        n = (q + 1) // 2
        err = _full_check(norm_one_set(F), n, n - 2 * F.k)
        if err:
            bad.append(f"norm-one q={q}: {err}")
    for q in (17, 23):
        F = FieldParams.create(q)
        n = (q - 1) // 2
        err = _full_check(hyperbola_set(F), n, n - 2)
        if err:
            bad.append(f"hyperbola q={q}: {err}")
    return CheckResult(
        "norm-one and hyperbola codes", not bad, "; ".join(bad) or "norm-one q=13,25; hyperbola q=17,23"
    )


def check_li_equals_norm() -> CheckResult:
    bad = []
    for F in (FieldParams.create(13), FieldParams.create(17), FieldParams.create(5, 2)):
        if li_norm_set(F).points != norm_one_set(F).points:
            bad.append(f"q={F.q}")
    return CheckResult("z^(1+q) circle equals x^2-delta*y^2 circle", not bad, "; ".join(bad) or "q=13,17,25")


EQUIVALENCE_CASES = (
    (17, (1, 0, 1), FormClass.MINUS),
    (19, (1, 0, 1), FormClass.PLUS),
    (5, (1, 1, 1), FormClass.PLUS),
    (7, (1, 1, 1), FormClass.MINUS),
)


def check_equivalences() -> CheckResult:
    bad, notes = [], []
    for q, (a, b, c), target in EQUIVALENCE_CASES:
        F = FieldParams.create(q)
        Q = QuadraticForm.of(F, a, b, c)
        if classify_form(Q) is not target:
            bad.append(f"q={q}: classified {classify_form(Q).value}")
            continue
        A = equivalence_transform(Q, target)
        ref = norm_one_set(F) if target is FormClass.PLUS else hyperbola_set(F)
        EQ = quadratic_unit_set(Q)
        if transform_points(mat_inv(A), EQ.points) != ref.points:
            bad.append(f"q={q}: A^-1 E_Q != E_target")
            continue
        if quadratic_unit_set(target_form(F, target)).points != ref.points:
            bad.append(f"q={q}: E_Q(target) != reference set")
        sp = signed_perm_equivalent(LeeCode.from_generator_set(EQ), LeeCode.from_generator_set(ref), A)
        if sp is None:
            bad.append(f"q={q}: no signed permutation")
        else:
            notes.append(f"q={q} {target.value}: {sum(s < 0 for s in sp.signs)} sign flips")
    return CheckResult("unit-sphere code equivalences", not bad, "; ".join(bad or notes))


def check_aux_curve(samples: int = 200, seed: int = 2024) -> CheckResult:
    bad = []
    for F in (FieldParams.create(17), q25_field()):
        for a in F.elements():
            if not factor_check(a):
                bad.append(f"q={F.q}: factorization fails at a={a}")
    F = FieldParams.create(7, 2)
    rng = random.Random(seed)
    tried = 0
    while tried < samples:
        a = F.from_code(rng.randrange(F.q))
        b = F.from_code(rng.randrange(F.q))
        if b == a * a * a:
            continue
        tried += 1
        st = curve_point_stats(a, b, F, strict=False)
        if not st.in_window:
            bad.append(f"q=49 (a,b)=({a},{b}): {st.affine_count} points")
    return CheckResult(
        "cubic curve factorization and point counts",
        not bad,
        "; ".join(bad) or f"identity on q=17,25; {samples} curves at q=49 in window",
    )


def check_spectral() -> CheckResult:
    bad, notes = [], []

    def inv(H, label, bound):
        r = full_spectrum(H)
        N, d = r.N, r.degree
        if r.eigenvalues[0] != d:
            bad.append(f"{label}: trivial eigenvalue {r.eigenvalues[0]}")
        if abs(r.sum_eig) > 1e-6 * N:
            bad.append(f"{label}: sum {r.sum_eig}")
        if abs(r.sum_eig_sq - N * d) > 1e-6 * N * d:
            bad.append(f"{label}: sum of squares {r.sum_eig_sq}")
        if bound and not r.lambda_max <= 2 * math.sqrt(r.q) + 1e-9:
            bad.append(f"{label}: lambda_max {r.lambda_max:.12g} > 2 sqrt(q)")
        notes.append(f"{label} {r.lambda_max:.6f}")
        return r

    for F in (FieldParams.create(13), FieldParams.create(17), FieldParams.create(5, 2)):
        inv(li_norm_set(F), f"li q={F.q}", True)
    for F in (FieldParams.create(17), q25_field()):
        inv(cubic_set(F), f"cubic q={F.q}", True)
        inv(hyperbola_set(F), f"hyperbola q={F.q}", True)
    for q in (5, 7, 11, 13):
        F = FieldParams.create(q)
        for H in (cubic_set(F), hyperbola_set(F), norm_one_set(F)):
            r = full_spectrum(H)
            dev = float(np.abs(np.sort(r.eigenvalues) - dense_spectrum(H)).max())
            if dev > 1e-6:
                bad.append(f"{H.family.value} q={q}: dense deviation {dev}")
    return CheckResult("spectral identities and bounds", not bad, "; ".join(bad or notes))


def check_diameter() -> CheckResult:
    bad = []
    for q in (17, 19, 23, 25):
        H = cubic_set(cubic_field(q))
        r = full_spectrum(H)
        L = layers(H, 3)
        predicted = 3 if (L.cumulative[3].all() and not L.cumulative[2].all()) else None
        if r.bfs_diameter != 3 or predicted != 3 or r.chung < r.bfs_diameter:
            bad.append(f"q={q}: bfs={r.bfs_diameter} sumset={predicted} chung={r.chung}")
    return CheckResult("diameter 3 and Chung bound", not bad, "; ".join(bad) or "q=17,19,23,25")


def check_properties(cases: int = 10_000, seed: int = 7) -> CheckResult:
    bad = []
    # sumset balls against BFS balls
    fields = [FieldParams.create(q) for q in (5, 7, 11, 13, 17, 19, 23)] + [q25_field()]

    for F in fields:
        sets = [hyperbola_set(F), norm_one_set(F)]
        if F.p >= 5:
            sets.append(cubic_set(F))
        for H in sets:
            dist = bfs_distances(H)
            L = layers(H, 4)
            for i in range(5):
                if not np.array_equal(L.cumulative[i], (dist >= 0) & (dist <= i)):
                    bad.append(f"{H.family.value} q={F.q} radius {i}")
    # randomized field identities
    rng = random.Random(seed)
    pool = [FieldParams.create(17), q25_field(), FieldParams.create(7, 2), FieldParams.create(3, 3)]
    for i in range(cases):
        F = pool[i % len(pool)]
        a, b = F.from_code(rng.randrange(F.q)), F.from_code(rng.randrange(F.q))
        c = F.element(rng.randrange(F.p))
        ok = a * b == b * a and trace_to_prime(a + b) == (trace_to_prime(a) + trace_to_prime(b)) % F.p
        ok = ok and trace_to_prime(c * a) == int(c) * trace_to_prime(a) % F.p
        if not a.is_zero():
            ok = ok and a * a.inverse() == 1 and a ** (F.q - 1) == 1
        if not ok:
            bad.append(f"field identity failed at {a}, {b} in F_{F.q}")
            break
    for F in pool[:2]:
        d = F.nonsquare
        z = TowerElement(F.from_code(rng.randrange(F.q)), F.from_code(rng.randrange(F.q)), d)
        if z.x * z.x - d * z.y * z.y != norm_by_power(z):
            bad.append(f"norm mismatch in F_{F.q}")
    # Lee ball sizes
    for p in (5, 7, 11):
        for n in (1, 2, 3, 4, 5):
            if lee_ball_enumerated(n, p, 2) != sphere2(n):
                bad.append(f"radius-2 ball p={p} n={n}")
            if p >= 7 and lee_ball_enumerated(n, p, 3) != upper3(n):
                bad.append(f"radius-3 ball p={p} n={n}")
    return CheckResult("property suite", not bad, "; ".join(bad) or f"{cases} randomized field cases")


CHECKS: dict[str, list[Callable[[], CheckResult]]] = {
    "matrices": [check_matrices],
    "sumsets": [check_sumset_counts, check_covering3, check_aux_curve],
    "codes": [check_cubic_codes, check_norm_and_hyperbola],
    "equalities": [check_li_equals_norm, check_equivalences],
    "spectral": [check_spectral, check_diameter],
    "properties": [check_properties],
}


def run_all(only: list[str] | None = None, golden: str | Path | None = None) -> list[CheckResult]:
    groups = only or list(CHECKS)
    out = []
    for g in groups:
        for fn in CHECKS[g]:
            t0 = time.perf_counter()
            res = fn(golden) if fn is check_matrices else fn()
            res.seconds = time.perf_counter() - t0
            out.append(res)
    return out


def summary_table(results: list[CheckResult]) -> str:
    width = max(len(r.name) for r in results)
    lines = [f"{'check'.ljust(width)}  result  seconds"]
    for r in results:
        lines.append(f"{r.name.ljust(width)}  {'PASS' if r.passed else 'FAIL':6}  {r.seconds:7.2f}")
    return "\n".join(lines)
