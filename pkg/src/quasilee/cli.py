"""Command-line front end: ``quasilee {build,verify,spectrum,decode-demo,reproduce-paper,export}``.

Exit codes: 0 success, 1 verification mismatch, 2 invalid configuration,
3 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import random
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import kernels
from .code import (
    DEFAULT_CAP,
    LeeCode,
    build_coset_table,
    enumerate_layer,
    format_matrix,
    lee_weight,
    sparse_to_dense,
    syndrome_decode,
)
from .errors import CapExceeded, DegenerateSpectrum, QuasiLeeError, SpanningError
from .field import FieldParams, parse_polynomial
from .generators import Family, Ordering, QuadraticForm, build_generator_set
from .verify import Verdict, check_quasi_perfect, covering_radius_bruteforce, packing_radius_bruteforce, radii_verdict

EXIT_OK, EXIT_MISMATCH, EXIT_CONFIG, EXIT_CAP = 0, 1, 2, 3

log = logging.getLogger("quasilee")


class ConfigError(QuasiLeeError):
    pass


@dataclass
class RunConfig:
    command: str
    family: Family | None = None
    p: int | None = None
    k: int = 1
    modulus: str | None = None
    primitive: str | None = None
    delta: str | None = None
    form: str | None = None
    ordering: Ordering | None = None
    fmt: str = "text"
    out: str | None = None
    max_gamma: int = DEFAULT_CAP
    threads: int | None = None
    seed: int = 0
    quiet: bool = False

    @classmethod
    def from_args(cls, ns: argparse.Namespace) -> "RunConfig":
        cfg = cls(
            command=ns.command,
            family=Family(ns.family) if getattr(ns, "family", None) else None,
            p=getattr(ns, "p", None),
            k=getattr(ns, "k", 1),
            modulus=getattr(ns, "modulus", None),
            primitive=getattr(ns, "primitive", None),
            delta=getattr(ns, "delta", None),
            form=getattr(ns, "form", None),
            ordering=Ordering(ns.ordering) if getattr(ns, "ordering", None) else None,
            fmt=ns.format,
            out=ns.out,
            max_gamma=ns.max_gamma,
            threads=ns.threads,
            seed=ns.seed,
            quiet=ns.quiet,
        )
        cfg.validate()
        return cfg

    def validate(self):
        if self.family is None:
            return
        if self.p is None:
            raise ConfigError("--p is required")
        if self.form is not None and self.family is not Family.QUADRATIC_UNIT:
            raise ConfigError("--form only applies to --family quadratic")
        if self.family is Family.QUADRATIC_UNIT and self.form is None:
            raise ConfigError("--family quadratic needs --form a,b,c")
        if self.delta is not None and self.family not in (Family.NORM_ONE, Family.LI_NORM):
            raise ConfigError("--delta only applies to --family norm or li")
        if self.max_gamma < 1:
            raise ConfigError("--max-gamma must be positive")

    def field(self) -> FieldParams:
        p = self.p
        return FieldParams.create(
            p,
            self.k,
            modulus=parse_polynomial(self.modulus, p) if self.modulus else None,
            primitive=parse_polynomial(self.primitive, p) if self.primitive else None,
            delta=parse_polynomial(self.delta, p) if self.delta else None,
        )

    def generator_set(self):
        F = self.field()
        form = None
        if self.form is not None:
            parts = self.form.split(",")
            if len(parts) != 3:
                raise ConfigError(f"--form expects three comma-separated coefficients, got {self.form!r}")
            form = QuadraticForm.of(F, *(F.parse(s) for s in parts))
        delta = F.nonsquare if self.delta is not None else None
        return build_generator_set(self.family, F, delta=delta, form=form, ordering=self.ordering)

    def code(self) -> LeeCode:
        H = self.generator_set()
        code = LeeCode.from_generator_set(H)
        if code.pcm.gamma_size > self.max_gamma:
            raise CapExceeded(f"|Gamma| = {code.pcm.gamma_size} exceeds --max-gamma {self.max_gamma}")
        return code


# --------------------------------------------------------------------------
# output helpers


def _jsonable(o):
    if isinstance(o, Fraction):
        return str(o)
    if isinstance(o, np.integer):
        return int(o)
    if isinstance(o, np.floating):
        return float(o)
    if isinstance(o, np.ndarray):
        return o.tolist()
    if o == math.inf:
        return "inf"
    raise TypeError(type(o))


def to_json(obj) -> str:
    return json.dumps(obj, default=_jsonable, sort_keys=True) + "\n"


def _flat(d: dict, prefix="") -> list[tuple[str, object]]:
    rows = []
    for k, v in d.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict) and set(v) >= {"value", "provenance"}:
            rows.append((key, v["value"], v["provenance"]))
        elif isinstance(v, dict):
            rows.extend(_flat(v, key + "."))
        elif isinstance(v, list):
            rows.append((key, " ".join(str(x) for x in v), ""))
        else:
            rows.append((key, v, ""))
    return rows


def to_csv(d: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["key", "value", "provenance"])
    for row in _flat(d):
        w.writerow([row[0], _fmt_value(row[1]), row[2]])
    return buf.getvalue()


def to_text(d: dict) -> str:
    return "".join(f"{k}: {_fmt_value(v)}" + (f" ({p})" if p else "") + "\n" for k, v, p in _flat(d))


def _fmt_value(v):
    if isinstance(v, Fraction):
        return str(v)
    if v == math.inf:
        return "inf"
    return v


def render(d: dict, fmt: str) -> str:
    return {"json": to_json, "csv": to_csv, "text": to_text}[fmt](d)


def emit(cfg: RunConfig, text: str):
    if cfg.out:
        Path(cfg.out).write_text(text)
    if not cfg.quiet:
        sys.stdout.write(text)


# --------------------------------------------------------------------------
# commands


def cmd_build(cfg: RunConfig) -> int:
    code = cfg.code()
    k = code.params.k
    pcm_text = format_matrix(code.pcm.matrix, cfg.fmt, code.p, k)
    if cfg.out:
        base = Path(cfg.out)
        ext = {"text": "txt", "json": "json", "csv": "csv"}[cfg.fmt]
        base.with_name(base.name + f".pcm.{ext}").write_text(pcm_text)
        base.with_name(base.name + f".gen.{ext}").write_text(format_matrix(code.gen, cfg.fmt, code.p, k))
        base.with_name(base.name + ".meta.json").write_text(to_json(code.metadata()))
    if not cfg.quiet:
        sys.stdout.write(pcm_text)
    return EXIT_OK


def cmd_export(cfg: RunConfig, what: str) -> int:
    code = cfg.code()
    k = code.params.k
    if what == "pcm":
        text = format_matrix(code.pcm.matrix, cfg.fmt, code.p, k)
    elif what == "gen":
        text = format_matrix(code.gen, cfg.fmt, code.p, k)
    elif what == "generators":
        d = code.genset.to_dict()
        text = to_json(d) if cfg.fmt != "text" else "".join(f"{b}\n" for b in code.genset.reps)
    else:
        text = render(code.metadata(), cfg.fmt)
    emit(cfg, text)
    return EXIT_OK


def cmd_verify(cfg: RunConfig, level: str, expect: Verdict) -> int:
    code = cfg.code()
    d: dict = {"family": cfg.family.value, "level": level, "expect": expect.value}
    verdicts = []
    if level in ("lemma", "both"):
        rep = check_quasi_perfect(code, cap=cfg.max_gamma)
        d["lemma"] = rep.to_dict()
        verdicts.append(rep.verdict)
    if level in ("brute", "both"):
        pr = packing_radius_bruteforce(code, cfg.max_gamma)
        cr = covering_radius_bruteforce(code, cfg.max_gamma)
        v = radii_verdict(pr, cr)
        d["brute"] = {
            "packing_radius": {"value": pr, "provenance": "enumerated"},
            "covering_radius": {"value": cr, "provenance": "enumerated"},
            "verdict": v.value,
        }
        verdicts.append(v)
    agree = len(set(verdicts)) == 1
    d["agree"] = agree
    d["verdict"] = verdicts[0].value
    if cfg.p is not None and cfg.field().q < 14 and cfg.family is Family.CUBIC:
        d["note"] = "exploratory: q < 14, no expected verdict is asserted for this regime"
    ok = agree and verdicts[0] is expect
    d["result"] = "pass" if ok else "fail"
    emit(cfg, render(d, cfg.fmt))
    return EXIT_OK if ok else EXIT_MISMATCH


def cmd_spectrum(cfg: RunConfig, assert_weil: bool, assert_ramanujan: bool) -> int:
    from .spectral import full_spectrum

    H = cfg.generator_set()
    rep = full_spectrum(H, cfg.max_gamma)
    d = rep.to_dict()
    d["family"] = H.family.value
    ok = True
    if assert_weil:
        d["assert_weil"] = rep.within_weil
        ok &= rep.within_weil
    if assert_ramanujan:
        d["assert_ramanujan"] = rep.is_ramanujan
        ok &= rep.is_ramanujan
    if cfg.fmt == "csv":
        text = rep.to_csv()
    elif cfg.fmt == "json":
        text = to_json(d)
    else:
        hist = d.pop("histogram")
        text = to_text(d) + "".join(
            f"histogram [{b['lo']:.6f}, {b['hi']:.6f}): {b['count']}\n" for b in hist
        )
        text += f"bfs_diameter {d['bfs_diameter']['value']}\n"
    emit(cfg, text)
    return EXIT_OK if ok else EXIT_MISMATCH


def cmd_decode_demo(cfg: RunConfig, samples: int) -> int:
    code = cfg.code()
    p, n = code.p, code.n
    table = build_coset_table(code, cfg.max_gamma)
    rng = random.Random(cfg.seed)
    lines = [f"code: p={p} n={n} dimension={code.dimension} seed={cfg.seed}"]
    patterns = []
    for w in (0, 1, 2):
        _, pos, val = enumerate_layer(code.pcm, w)
        patterns.extend(sparse_to_dense(a, b, n) for a, b in zip(pos, val))
    total = corrected = 0
    for i in range(samples):
        coeffs = np.array([rng.randrange(p) for _ in range(code.dimension)], dtype=np.int64)
        c = coeffs @ code.gen % p if code.dimension else np.zeros(n, dtype=np.int64)
        good = 0
        for e in patterns:
            decoded, _ = syndrome_decode((c + e) % p, table)
            good += bool(np.array_equal(decoded, c))
        total += len(patterns)
        corrected += good
        lines.append(f"codeword {i}: {' '.join(map(str, c))}  corrected {good}/{len(patterns)}")
    lines.append(f"weight <= 2: corrected {corrected}/{total}")
    all_ok = corrected == total
    # exhaustive weight-3 scan around the zero codeword for a miscorrection
    witness = None
    if all_ok:
        _, pos, val = enumerate_layer(code.pcm, 3)
        for a, b in zip(pos, val):
            e = sparse_to_dense(a, b, n)
            decoded, guess = syndrome_decode(e, table)
            if decoded.any():
                witness = (e, guess, decoded)
                break
    if witness is None:
        lines.append("weight 3: no miscorrection found")
    else:
        e, guess, decoded = witness
        lines.append(f"weight-3 witness: error {' '.join(map(str, e))}")
        lines.append(f"  decoded as error {' '.join(map(str, guess))} (Lee weight {lee_weight(guess, p)})")
        lines.append(f"  giving wrong codeword {' '.join(map(str, decoded))}")
    lines.append("result: " + ("pass" if all_ok else "fail"))
    if cfg.fmt == "json":
        d = {"corrected": corrected, "total": total, "passed": all_ok}
        if witness is not None:
            d["witness"] = {"error": witness[0], "leader": witness[1], "codeword": witness[2]}
        text = to_json(d)
    else:
        text = "\n".join(lines) + "\n"
    emit(cfg, text)
    return EXIT_OK if all_ok else EXIT_MISMATCH


def cmd_reproduce(cfg: RunConfig, only: list[str] | None, golden: str | None) -> int:
    from .reproduce import run_all, summary_table

    results = run_all(only, golden)
    ok = all(r.passed for r in results)
    if cfg.fmt == "json":
        text = to_json(
            {"passed": ok, "checks": [{"name": r.name, "passed": r.passed, "detail": r.detail} for r in results]}
        )
    else:
        parts = [summary_table(results)]
        for r in results:
            if not r.passed:
                parts.append(f"\n[{r.name}]\n{r.detail}")
        parts.append("\nall checks passed" if ok else "\nsome checks FAILED")
        text = "\n".join(parts) + "\n"
    emit(cfg, text)
    return EXIT_OK if ok else EXIT_MISMATCH


# --------------------------------------------------------------------------
# argument parsing


def _common() -> argparse.ArgumentParser:
    c = argparse.ArgumentParser(add_help=False)
    c.add_argument("--format", choices=["text", "json", "csv"], default="text")
    c.add_argument("--out", metavar="PATH")
    c.add_argument("--threads", type=int, metavar="N", help="worker threads (default: all cores)")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--max-gamma", type=int, default=DEFAULT_CAP, help="cap on |Gamma| for enumerations")
    c.add_argument("--quiet", action="store_true")
    c.add_argument("-v", "--verbose", action="store_true")
    return c


def _code_args(sp: argparse.ArgumentParser):
    sp.add_argument("--family", required=True, choices=[f.value for f in Family])
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--k", type=int, default=1)
    sp.add_argument("--modulus", help='e.g. "x2-2" for x^2 - 2')
    sp.add_argument("--primitive", help='e.g. "3+4s" for 3 + 4*alpha')
    sp.add_argument("--delta", help="non-square used by the norm families")
    sp.add_argument("--form", help='coefficients "a,b,c" of a*x^2 + b*xy + c*y^2')
    sp.add_argument("--ordering", choices=[o.value for o in Ordering])


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    ap = argparse.ArgumentParser(prog="quasilee", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("build", parents=[common], help="print the parity-check matrix")
    _code_args(sp)

    sp = sub.add_parser("verify", parents=[common], help="check 2-quasi-perfectness")
    _code_args(sp)
    sp.add_argument("--level", choices=["lemma", "brute", "both"], default="lemma")
    sp.add_argument("--expect", choices=[v.value for v in Verdict], default=Verdict.QUASI_PERFECT2.value)

    sp = sub.add_parser("spectrum", parents=[common], help="Cayley graph spectrum and diameter")
    _code_args(sp)
    sp.add_argument("--assert-weil", action="store_true")
    sp.add_argument("--assert-ramanujan", action="store_true")

    sp = sub.add_parser("decode-demo", parents=[common], help="syndrome decoding demonstration")
    _code_args(sp)
    sp.add_argument("--samples", type=int, default=5)

    sp = sub.add_parser("reproduce-paper", parents=[common], help="regenerate golden matrices and rerun all checks")
    sp.add_argument("--only", action="append", choices=["matrices", "sumsets", "codes", "equalities", "spectral", "properties"])
    sp.add_argument("--golden-dir", metavar="DIR")

    sp = sub.add_parser("export", parents=[common], help="write pcm, generator matrix or metadata")
    _code_args(sp)
    sp.add_argument("--what", choices=["pcm", "gen", "generators", "meta"], default="pcm")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    ns = ap.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if ns.verbose else logging.WARNING, format="%(message)s")
    try:
        cfg = RunConfig.from_args(ns)
        kernels.set_threads(cfg.threads)
        if ns.command == "build":
            return cmd_build(cfg)
        if ns.command == "export":
            return cmd_export(cfg, ns.what)
        if ns.command == "verify":
            return cmd_verify(cfg, ns.level, Verdict(ns.expect))
        if ns.command == "spectrum":
            return cmd_spectrum(cfg, ns.assert_weil, ns.assert_ramanujan)
        if ns.command == "decode-demo":
            return cmd_decode_demo(cfg, ns.samples)
        return cmd_reproduce(cfg, ns.only, ns.golden_dir)
    except CapExceeded as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CAP
    except (SpanningError, DegenerateSpectrum) as e:
        print(f"verification failed: {e}", file=sys.stderr)
        return EXIT_MISMATCH
    except (QuasiLeeError, ValueError) as e:
        print(f"invalid configuration: {e}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
