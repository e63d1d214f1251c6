"""Command line front end.

    weylres build --type B2 --interval -1:4 --cone -o b2.json
    weylres betti b2.json --module d0 --oracle
    weylres free b2.json
    weylres chi b2.json
    weylres jump b2.json --random-lines 50 --seed 7
    weylres verify b2-jumping --k 1 --j 3
    weylres export b2.json --what resolution -o res.json

Exit codes: 0 ok, 2 usage, 3 oracle mismatch, 4 verification failure,
5 resource cap.
"""
from __future__ import annotations

import argparse
import json
import signal
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

from .arrangement import Arrangement, Hyperplane, boolean, cone, deformation, weyl
from .freeness_kit import (
    b2_chain, b2_h, b2_l, b2_split, b2_start, b2_start_exponents, b2_target, simply_laced_chain,
    yoshinaga_check,
)
from .groebner import BettiTable, ResourceCap, set_step_budget
from .lattice import characteristic_polynomial
from .logder import derivation_module, freeness, kernel_dimension, saito_check
from .rootsys import positive_roots
from .scalar_poly import QQ, Field, field_from_spec
from .sheaf import (
    ProjLine, candidate_lines, chern_from_betti, d0_resolution, jumping_scan, splitting_type,
    stability_check,
)

EXIT_OK, EXIT_USAGE, EXIT_ORACLE, EXIT_FAIL, EXIT_CAP = 0, 2, 3, 4, 5

K_RANGE = range(0, 3)
J_RANGE = range(2, 7)


class UsageError(Exception):
    pass


# output ---------------------------------------------------------------------------

def _emit(args, payload: dict, text: str) -> None:
    out = json.dumps(payload, indent=2, sort_keys=True) if args.format == "json" else text
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(out + "\n")
    else:
        print(out)


def _load(path: str) -> Arrangement:
    try:
        with open(path) as fh:
            A = Arrangement.loads(fh.read())
    except (OSError, ValueError, KeyError) as exc:
        raise UsageError(f"cannot read arrangement from {path}: {exc}")
    if not A.central:
        raise UsageError("input arrangement must be central (build with --cone)")
    return A


def _field(args) -> Field:
    try:
        fld = field_from_spec(args.field)
    except ValueError as exc:
        raise UsageError(str(exc))
    if fld is not QQ and fld.p is not None and not args.probabilistic:
        raise UsageError("--field fp:<p> requires --probabilistic")
    return fld


# build / betti / free / chi / jump / export -------------------------------------------------

def _interval(s: str) -> tuple[int, int]:
    try:
        a, b = (int(x) for x in s.split(":"))
    except ValueError:
        raise UsageError(f"interval must look like a:b, got {s!r}")
    if a > b:
        raise UsageError(f"empty interval {a}:{b}")
    return a, b


def cmd_build(args) -> int:
    if args.boolean:
        A = boolean(args.boolean)
    else:
        if not args.type:
            raise UsageError("build needs --type or --boolean")
        try:
            rs = positive_roots(args.type)
        except ValueError as exc:
            raise UsageError(str(exc))
        if args.interval:
            a, b = _interval(args.interval)
            A = deformation(rs, a, b)
        else:
            A = weyl(rs)
        if args.cone:
            A = cone(A)
    text = A.dumps()
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    print(f"{len(A)} hyperplanes in dimension {A.dim}", file=sys.stderr)
    return EXIT_OK


def _oracle(A: Arrangement, b: BettiTable, fld: Field) -> list:
    from .groebner import hilbert_from_betti
    top = max(d for _, d in b.data) + 2
    hf = hilbert_from_betti(b, A.dim, 0, top)
    return [(d, hf[d], kernel_dimension(A, d, fld)) for d in range(top + 1)
            if hf[d] != kernel_dimension(A, d, fld)]


def cmd_betti(args) -> int:
    A, fld = _load(args.input), _field(args)
    D = derivation_module(A, fld)
    rep = freeness(A, fld)
    b = D.betti(args.module)
    payload = {"module": args.module, "free": rep.free, "pd": b.pd, **b.to_json()}
    if rep.free:
        payload["exponents"] = list(rep.exponents)
    code = EXIT_OK
    if args.oracle:
        bad = _oracle(A, D.betti("d"), fld)
        payload["oracle"] = {"ok": not bad, "mismatches": bad}
        if bad:
            code = EXIT_ORACLE
    text = b.to_text()
    if rep.free:
        text = f"free, exp ({', '.join(map(str, rep.exponents))})\n" + text
    if args.oracle:
        text += "\noracle: " + ("agrees" if code == EXIT_OK else f"MISMATCH {payload['oracle']['mismatches']}")
    _emit(args, payload, text)
    return code


def cmd_free(args) -> int:
    A, fld = _load(args.input), _field(args)
    rep = freeness(A, fld)
    payload = {"free": rep.free, "pd": rep.pd,
               "exponents": list(rep.exponents) if rep.free else None}
    if rep.free:
        cert = saito_check(A, derivation_module(A, fld).generators, fld)
        payload["saito"] = {"ok": cert.ok, "scalar": str(cert.scalar)}
        text = f"free, exponents ({', '.join(map(str, rep.exponents))}); Saito scalar {cert.scalar}"
    else:
        text = f"not free, pd {rep.pd}"
    _emit(args, payload, text)
    return EXIT_OK


def cmd_chi(args) -> int:
    A = _load(args.input)
    cp = characteristic_polynomial(A)
    payload = {"chi": list(cp.coeffs), "chi0": list(cp.chi0) if cp.chi0 else None}
    _emit(args, payload, f"chi  = {list(cp.coeffs)}\nchi0 = {list(cp.chi0) if cp.chi0 else None}")
    return EXIT_OK


def cmd_jump(args) -> int:
    A, fld = _load(args.input), _field(args)
    if A.dim != 3:
        raise UsageError("jumping lines need an arrangement in three variables")
    res = d0_resolution(A, fld)
    if res.pd > 1:
        raise UsageError("D_0 has pd > 1; restriction to lines is not exact")
    scan = jumping_scan(res, candidate_lines(A, (), args.random_lines, args.seed),
                        args.max_order, args.seed)
    lines = [f"{r.line.to_str():<24} F-splitting {r.f_splitting} order {r.order}"
             for r in scan.reports if r.order > 0]
    text = "\n".join(lines + [f"max order {scan.observed_max} over {len(scan.reports)} lines"])
    _emit(args, scan.to_json(), text)
    return EXIT_FAIL if scan.violations else EXIT_OK


def cmd_export(args) -> int:
    A, fld = _load(args.input), _field(args)
    if args.what == "arrangement":
        payload = A.to_json()
    else:
        res = derivation_module(A, fld).resolution_d0()
        payload = {"arrangement": A.to_json(), "field": args.field,
                   "maps": [[[c.to_str() for c in v.coords] for v in stage] for stage in res.maps],
                   "modules": [list(m) for m in res.modules]}
    args.format = "json"
    _emit(args, payload, "")
    return EXIT_OK


# verification tasks -----------------------------------------------------------------

@dataclass
class TaskResult:
    task: str
    params: dict
    ok: bool
    evidence: dict = field(default_factory=dict)
    seconds: float = 0.0

    def to_json(self) -> dict:
        return {"task": self.task, "params": self.params, "pass": self.ok,
                "evidence": self.evidence, "seconds": round(self.seconds, 2)}


def _need(params, *names):
    for n in names:
        if params.get(n) is None:
            raise UsageError(f"task needs --{n}")


def _check_k(k):
    if k not in K_RANGE:
        raise UsageError(f"k must lie in {K_RANGE.start}..{K_RANGE.stop - 1}")


def _check_j(j, lo=2):
    if j not in J_RANGE or j < lo:
        raise UsageError(f"j must lie in {max(lo, J_RANGE.start)}..{J_RANGE.stop - 1}")


def task_chain(params, fld) -> tuple[bool, dict]:
    kind, k = params.get("type") or "A2", params["k"]
    if kind not in ("A2", "A3", "D4"):
        raise UsageError("ade-pd1 supports A2, A3 and D4")
    rep = simply_laced_chain(kind, k, fld)
    return rep.ok and rep.final_pd == 1, rep.to_json()


def task_a3(params, fld) -> tuple[bool, dict]:
    k = params["k"]
    A = cone(deformation(positive_roots("A3"), -k, k + 2))
    b = derivation_module(A, fld).betti("d0")
    want = BettiTable({(0, 4 * k + 7): 6, (1, 4 * k + 8): 3})
    return b == want, {"betti_d0": b.to_json(), "expected": want.to_json()}


def task_b2_betti(params, fld) -> tuple[bool, dict]:
    k, j = params["k"], params["j"]
    m, r = b2_split(j)
    steps = b2_chain(k, j, fld)
    b = steps[-1].direct
    lo, hi = 4 * k + 5 * m + 1 + 3 * r, 4 * k + 6 * m + 1 + 3 * r
    checks = {
        "pd": b.pd == 1,
        "beta0": b.total(0) == 2 * m + 1 + r,
        "beta1": b.total(1) == 2 * m + r - 1,
        "generator_range": min(b.degrees(0)) == lo and max(b.degrees(0)) == hi,
        "chain_predictions": all(s.match is not False for s in steps),
    }
    return all(checks.values()), {"checks": checks, "betti_d0": b.to_json(),
                                  "steps": [s.to_json() for s in steps]}


def task_b2_chern(params, fld) -> tuple[bool, dict]:
    k, j = params["k"], params["j"]
    m, r = b2_split(j)
    b = derivation_module(b2_target(k, j), fld).betti("d0")
    ch = chern_from_betti(b, 4 * k + 2 * j + 2)
    st = stability_check(b)
    want = "semistable-not-stable" if j == 2 else "stable"
    ok = ch.c1 == 0 and ch.c2 == 2 * m * m + 2 * m * r + r - 1 and st == want
    return ok, {"c1": ch.c1, "c2": ch.c2, "twist": ch.twist, "stability": st,
                "expected_c2": 2 * m * m + 2 * m * r + r - 1, "expected_stability": want}


def _jump_data(k, j, fld, seed, n_random):
    m, r = b2_split(j)
    A = b2_target(k, j)
    res = d0_resolution(A, fld)
    family = [x for u in range(m) for x in (b2_h(k, j, u), b2_l(k, j, u))]
    scan = jumping_scan(res, candidate_lines(A, family, n_random, seed), j - 1, seed)
    orders = {}
    for u in range(m):
        for tag, H in (("H", b2_h(k, j, u)), ("L", b2_l(k, j, u))):
            orders[f"{tag}_{u}"] = splitting_type(res, ProjLine.of(H.coeffs)).order
    top = sorted(L.hyperplane for L in scan.lines_of_order(j - 1))
    return A, scan, orders, top


def task_b2_jumping(params, fld) -> tuple[bool, dict]:
    k, j = params["k"], params["j"]
    m, r = b2_split(j)
    A, scan, orders, top = _jump_data(k, j, fld, params["seed"], params["random_lines"])
    want = sorted([b2_l(k, j, m - 1), b2_h(k, j, m - 1)])
    family_ok = all(orders[f"{t}_{u}"] == 2 * u + r + 1 for u in range(m) for t in "HL")
    ok = family_ok and not scan.violations and top == want
    return ok, {"family_orders": orders, "top_lines": [h.to_str(["x", "y", "z"]) for h in top],
                "expected_top": [h.to_str(["x", "y", "z"]) for h in want],
                "candidates": len(scan.reports), "violations": len(scan.violations),
                "seed": params["seed"]}


def task_b2_distinct(params, fld) -> tuple[bool, dict]:
    k, kp, j = params["k"], params["kprime"], params["j"]
    if k == kp:
        raise UsageError("b2-distinct needs k != kprime")
    tables, tops = [], []
    for kk in (k, kp):
        b = derivation_module(b2_target(kk, j), fld).betti("d0")
        tables.append(b.shifted(4 * kk + 2 * j + 2))
        tops.append(set(_jump_data(kk, j, fld, params["seed"], params["random_lines"])[3]))
    ok = tables[0] == tables[1] and not (tops[0] & tops[1])
    return ok, {"shifted_betti": [t.to_json() for t in tables],
                "top_lines": [[h.to_str(["x", "y", "z"]) for h in sorted(t)] for t in tops]}


def task_shi_catalan(params, fld) -> tuple[bool, dict]:
    k, j = params["k"], params["j"]
    B = b2_start(k, j)
    want = b2_start_exponents(k, j)
    rep = freeness(B, fld)
    saito = saito_check(B, derivation_module(B, fld).generators, fld)
    yosh = yoshinaga_check(B, Hyperplane((0, 0, 1)), fld)   # the cone line z = 0
    ok = (rep.exponents == want and saito.ok and yosh.ok and yosh.exponents_out == want
          and sum(want) == len(B))
    return ok, {"size": len(B), "exponents": list(rep.exponents) if rep.exponents else None,
                "expected": list(want), "saito_scalar": str(saito.scalar),
                "yoshinaga": yosh.to_json()}


TASKS: dict[str, tuple[Callable, tuple, int]] = {
    # name: (runner, required parameters, minimum j)
    "a2-pd1": (lambda p, f: task_chain({**p, "type": "A2"}, f), ("k",), 0),
    "a3-resolution": (task_a3, ("k",), 0),
    "ade-pd1": (task_chain, ("k",), 0),
    "b2-betti": (task_b2_betti, ("k", "j"), 2),
    "b2-chern": (task_b2_chern, ("k", "j"), 2),
    "b2-jumping": (task_b2_jumping, ("k", "j"), 3),
    "b2-distinct": (task_b2_distinct, ("k", "kprime", "j"), 3),
    "shi-catalan-free": (task_shi_catalan, ("k", "j"), 2),
}


def run_task(name: str, params: dict, fld: Field = QQ) -> TaskResult:
    if name not in TASKS:
        raise UsageError(f"unknown task {name!r}; choose from {', '.join(TASKS)}")
    runner, needed, jmin = TASKS[name]
    _need(params, *needed)
    _check_k(params["k"])
    if params.get("kprime") is not None:
        _check_k(params["kprime"])
    if "j" in needed:
        _check_j(params["j"], jmin)
    params = {"seed": 0, "random_lines": 50, **params}
    t0 = time.perf_counter()
    ok, ev = runner(params, fld)
    return TaskResult(name, params, ok, ev, time.perf_counter() - t0)


def _run_task_spec(spec):
    name, params, field_spec = spec
    return run_task(name, params, field_from_spec(field_spec))


def cmd_verify(args) -> int:
    fld = _field(args)
    params = {"k": args.k, "j": args.j, "kprime": args.kprime, "type": args.type,
              "seed": args.seed, "random_lines": args.random_lines}
    params = {k: v for k, v in params.items() if v is not None}
    for t in args.task:   # validate before spending time
        if t not in TASKS:
            raise UsageError(f"unknown task {t!r}; choose from {', '.join(TASKS)}")
    specs = [(t, params, args.field) for t in args.task]
    if args.jobs > 1 and len(specs) > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            results = list(pool.map(_run_task_spec, specs))
    else:
        results = [run_task(t, params, fld) for t in args.task]
    payload = {"field": args.field, "probabilistic": fld.p is not None,
               "results": [r.to_json() for r in results]}
    text = "\n".join(f"{'PASS' if r.ok else 'FAIL'} {r.task} {r.params} ({r.seconds:.1f}s)"
                     for r in results)
    _emit(args, payload, text)
    return EXIT_OK if all(r.ok for r in results) else EXIT_FAIL


# argument parsing -------------------------------------------------------------------

def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-o", "--output")
    common.add_argument("--format", choices=("json", "text"), default="text")
    common.add_argument("--field", default="q", help="q or fp:<p>")
    common.add_argument("--probabilistic", action="store_true",
                        help="acknowledge that fp:<p> results are modular")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--max-seconds", type=int, default=None)
    common.add_argument("--max-gb-steps", type=int, default=None)

    p = argparse.ArgumentParser(prog="weylres", description=__doc__.split("\n")[0])
    sub = p.add_subparsers(dest="verb", required=True)

    b = sub.add_parser("build", parents=[common])
    b.add_argument("--type", help="A<l>, B2 or D<l>")
    b.add_argument("--interval", help="a:b for the translates a <= alpha <= b")
    b.add_argument("--cone", action="store_true")
    b.add_argument("--boolean", type=int, help="coordinate arrangement in n variables")
    b.set_defaults(run=cmd_build)

    for name, fn in (("betti", cmd_betti), ("free", cmd_free), ("chi", cmd_chi),
                     ("jump", cmd_jump), ("export", cmd_export)):
        s = sub.add_parser(name, parents=[common])
        s.add_argument("input")
        s.set_defaults(run=fn)
        if name == "betti":
            s.add_argument("--module", choices=("d", "d0"), default="d0")
            s.add_argument("--oracle", action="store_true")
        if name == "jump":
            s.add_argument("--random-lines", type=int, default=50)
            s.add_argument("--max-order", type=int, default=None)
        if name == "export":
            s.add_argument("--what", choices=("arrangement", "resolution"), default="resolution")

    v = sub.add_parser("verify", parents=[common])
    v.add_argument("task", nargs="+", help=", ".join(TASKS))
    v.add_argument("--k", type=int)
    v.add_argument("--j", type=int)
    v.add_argument("--kprime", type=int)
    v.add_argument("--type")
    v.add_argument("--random-lines", type=int, default=50)
    v.add_argument("--jobs", type=int, default=1)
    v.set_defaults(run=cmd_verify)
    return p


def _fix_negative_values(argv: list[str]) -> list[str]:
    """Allow ``--interval -1:4`` (argparse would read -1:4 as an option)."""
    out, i = [], 0
    while i < len(argv):
        if argv[i] == "--interval" and i + 1 < len(argv):
            out.append(f"--interval={argv[i + 1]}")
            i += 2
            continue
        out.append(argv[i])
        i += 1
    return out


def _on_alarm(signum, frame):
    raise ResourceCap("time budget exceeded")


def main(argv: list[str] | None = None) -> int:
    argv = _fix_negative_values(list(sys.argv[1:] if argv is None else argv))
    try:
        args = _parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if args.max_gb_steps is not None:
        set_step_budget(args.max_gb_steps)
    if args.max_seconds:
        signal.signal(signal.SIGALRM, _on_alarm)
        signal.alarm(args.max_seconds)
    try:
        return args.run(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceCap as exc:
        print(f"truncated: {exc}", file=sys.stderr)
        return EXIT_CAP
    finally:
        if args.max_seconds:
            signal.alarm(0)
        set_step_budget(None)


if __name__ == "__main__":
    sys.exit(main())
