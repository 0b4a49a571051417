"""Command-line interface.

Exit codes: 0 success, 1 input or validation error, 2 verification or
search failure.
"""

from __future__ import annotations

import argparse
import logging
import random
import sys
from pathlib import Path
from typing import Sequence

from .codes import CodeError, StabilizerCode, load_code, validate
from .library import all_fixtures
from .metrics import code_distance, path_distance_profile
from .pauli import PauliError, format_pauli, parse_pauli
from .planner import ConstraintSet, RewirePlan, check_plan, constrained_path_search, load_plan, plan_rewire, save_plan
from .tableau import (SimulationError, cat_state_measure, enumerate_branches, error_weight_between, execute_plan,
                      extract_logical_action, format_transcript, logical_list, prepare_codespace,
                      random_stabilizer_state)

EXIT_OK, EXIT_INPUT, EXIT_FAIL = 0, 1, 2
MAX_BRANCH_STEPS = 12
FIXTURE_DIR = Path(__file__).parent / "fixtures"

log = logging.getLogger("stabrewire")


class InputError(Exception):
    pass


def _load_code(spec: str) -> StabilizerCode:
    """A code file path, or a fixture name such as ``steane`` / ``fixtures/steane``."""
    path = Path(spec)
    if path.is_file():
        return load_code(path)
    name = path.name[:-5] if path.name.endswith(".code") else path.name
    shipped = FIXTURE_DIR / f"{name}.code"
    if shipped.is_file():
        return load_code(shipped)
    fixtures = all_fixtures()
    if name in fixtures:
        return fixtures[name]
    raise InputError(f"no such code file or fixture: {spec}")


def _load_plan(spec: str) -> RewirePlan:
    path = Path(spec)
    if not path.is_file():
        raise InputError(f"no such plan file: {spec}")
    return load_plan(path)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# -- subcommands -----------------------------------------------------------------------

def cmd_validate(args) -> int:
    code = _load_code(args.code)
    rep = validate(code)
    print(f"code={code.label or Path(args.code).stem} n={code.n} k={code.k} generators={code.r}")
    if rep.ok:
        print("valid")
        return EXIT_OK
    for p in rep.problems:
        print(f"error: {p}")
    return EXIT_INPUT


def _pivots(text: str | None) -> list[int] | None:
    if not text:
        return None
    try:
        return [int(t) for t in text.replace(",", " ").split()]
    except ValueError as exc:
        raise InputError(f"bad pivot list {text!r}") from exc


def cmd_plan(args) -> int:
    src, tgt = _load_code(args.source), _load_code(args.target)
    for code in (src, tgt):
        rep = validate(code)
        if not rep.ok:
            raise InputError(f"{code.label or 'code'} is invalid: {rep.summary()}")
    plan = plan_rewire(src, tgt, _pivots(args.pivots))
    d = plan.decomposition
    print(f"a={d.a} b={d.b} c={d.c} N={len(plan.steps)}")
    for i, s in enumerate(plan.steps):
        print(f"step={i} measure={format_pauli(s.measure)} correct={format_pauli(s.correction)}")
    if plan.frame is not None:
        print(f"frame={format_pauli(plan.frame)}")
    if args.out:
        save_plan(plan, args.out)
    return EXIT_OK


def _same_group_signed(a: StabilizerCode, b: StabilizerCode) -> bool:
    from .planner import group_fingerprint
    return a.n == b.n and group_fingerprint(a.generators) == group_fingerprint(b.generators)


def cmd_simulate(args) -> int:
    plans = [_load_plan(p) for p in args.plan]
    for i, plan in enumerate(plans):
        probs = check_plan(plan, strict=False)
        if probs:
            raise InputError(f"plan {i}: " + "; ".join(probs))
    for a, b in zip(plans, plans[1:]):
        if not _same_group_signed(a.intermediate_codes[-1], b.intermediate_codes[0]):
            raise InputError("chained plans do not connect: a plan's final code differs from the next plan's start")
    first = plans[0].intermediate_codes[0]
    before = first
    if args.source:
        before = _load_code(args.source)
        if before.n != first.n or not _same_group_signed(before, first):
            raise InputError("--from code does not match the plan's initial code")
    last = plans[-1].intermediate_codes[-1]
    after = before if _same_group_signed(before, last) else last
    logs = logical_list(before)
    fixings = [parse_pauli(p, before.n) for p in args.fix_logical] if args.fix_logical else logs[before.k:]

    state = prepare_codespace(before, fixings, seed=args.seed)
    records, transported, fixed_t = [], list(logs), list(fixings)
    for plan in plans:
        res = execute_plan(state, plan, transported + fixed_t, index_offset=len(records))
        records += res.records
        transported, fixed_t = res.logicals[:len(logs)], res.logicals[len(logs):]
        state = res.state
    transcript = format_transcript(records, args.seed)
    _emit(transcript, args.out)

    ok = True
    for f, t in zip(fixings, fixed_t):
        val = state.expectation(t)
        print(f"fixed={format_pauli(f)} transported={format_pauli(t)} eigenvalue={val:+d}")
        ok &= val == 1
    print(f"final-codespace=ok steps={len(records)}")
    if args.branches:
        for plan in plans:
            if len(plan.steps) > MAX_BRANCH_STEPS:
                raise InputError(f"--branches is limited to plans of at most {MAX_BRANCH_STEPS} steps")
        summ = enumerate_branches(prepare_codespace(before, fixings, seed=args.seed), plans, fixings)
        print(f"branches={summ.branches} random-steps={summ.random_steps} "
              f"distinct-final-states={summ.distinct_final_states}")
        ok &= summ.distinct_final_states == 1 and all(v == 1 for v in summ.logical_eigenvalues)
    if args.round_trip or args.logical_action:
        action = extract_logical_action(before, after, transported)
        print("logical-action:")
        print(action.format())
        if args.round_trip:
            if after is not before:
                raise InputError("--round-trip needs the chain to end in the starting code")
            print(f"round-trip identity={str(action.is_identity()).lower()}")
            ok &= action.is_identity()
    print("verdict=" + ("ok" if ok else "FAILED"))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_distance(args) -> int:
    if args.plan:
        plan = _load_plan(args.plan)
        reports = path_distance_profile(plan, args.max_weight, args.jobs)
        for i, r in enumerate(reports):
            print(f"index={i} " + r.format())
        shown = [r.distance_text() for r in reports]
        print("profile=[" + ",".join(shown) + "]")
        return EXIT_OK
    if not args.code:
        raise InputError("distance needs a code file or --plan")
    code = _load_code(args.code)
    print(code_distance(code, args.max_weight).format())
    return EXIT_OK


def cmd_catcheck(args) -> int:
    code = _load_code(args.code)
    if not 0 <= args.generator < code.r:
        raise InputError(f"generator index {args.generator} out of range (code has {code.r})")
    p = code.generators[args.generator]
    rng = random.Random(args.seed)
    counts = {1: 0, -1: 0}
    mismatches = 0
    worst = 0
    for _ in range(args.trials):
        # a random state, so the outcome is not fixed in advance
        st = random_stabilizer_state(code.n, rng)
        cat = cat_state_measure(st, p, random.Random(rng.getrandbits(32)))
        direct = st.copy()
        direct.measure(p, cat.outcome)
        counts[cat.outcome] += 1
        if cat.state.canonical() != direct.canonical():
            mismatches += 1
        j = rng.randrange(p.weight)
        bad = cat_state_measure(st, p, random.Random(0), inject_x_on=j, forced_ancillas=cat.ancilla_outcomes)
        w = error_weight_between(bad.state, cat.state, 1)
        worst = max(worst, w if w is not None else p.weight + 1)
    print(f"operator={format_pauli(p)} trials={args.trials} outcome+1={counts[1]} outcome-1={counts[-1]}")
    print(f"max-discrepancy={mismatches}")
    print(f"injected-ancilla-error max-data-weight={worst if worst <= 1 else '>1'}")
    ok = mismatches == 0 and worst <= 1
    print("verdict=" + ("equivalent" if ok else "FAILED"))
    return EXIT_OK if ok else EXIT_FAIL


def _read_allowed(path: str, n: int):
    p = Path(path)
    if not p.is_file():
        raise InputError(f"no such allowed-operator file: {path}")
    out = []
    for ln in p.read_text().splitlines():
        s = ln.split("#", 1)[0].strip()
        if s:
            out.append(parse_pauli(s, n))
    return out


def cmd_constrained(args) -> int:
    src, tgt = _load_code(args.source), _load_code(args.target)
    allowed = _read_allowed(args.allowed, src.n)
    res = constrained_path_search(src, tgt, ConstraintSet(tuple(allowed), args.depth))
    print(f"verdict={res.verdict} explored={res.explored}")
    if res.plan is None:
        return EXIT_FAIL
    for i, s in enumerate(res.plan.steps):
        print(f"step={i} measure={format_pauli(s.measure)} correct={format_pauli(s.correction)}")
    if args.out:
        save_plan(res.plan, args.out)
    return EXIT_OK


def cmd_fixtures(args) -> int:
    from .library import export_fixtures
    for p in export_fixtures(args.directory):
        print(p)
    return EXIT_OK


# -- argument parsing ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="stabrewire", description="Measurement-based rewiring of stabilizer codes.")
    ap.add_argument("-v", "--verbose", action="count", default=0)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a code file")
    p.add_argument("code")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("plan", help="synthesize a measurement plan")
    p.add_argument("--from", dest="source", required=True)
    p.add_argument("--to", dest="target", required=True)
    p.add_argument("--out")
    p.add_argument("--pivots", help="target generator indices to use as pivots, e.g. 6,8,9,10")
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("simulate", help="run plans on the tableau simulator and verify")
    p.add_argument("--plan", action="append", required=True, help="plan file; repeat to chain plans")
    p.add_argument("--from", dest="source", help="code (with logicals) the first plan starts from")
    p.add_argument("--out", help="transcript file (default: standard output)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--fix-logical", action="append", help="logical Pauli prepared at +1 (repeatable)")
    p.add_argument("--branches", action="store_true", help="enumerate every outcome branch")
    p.add_argument("--round-trip", action="store_true", help="require the chain's logical action to be the identity")
    p.add_argument("--logical-action", action="store_true", help="print the logical action")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("distance", help="code distance or a plan's distance profile")
    p.add_argument("code", nargs="?")
    p.add_argument("--plan")
    p.add_argument("--max-weight", type=int, default=4)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_distance)

    p = sub.add_parser("catcheck", help="compare cat-state and direct measurement")
    p.add_argument("code")
    p.add_argument("--generator", type=int, default=0)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_catcheck)

    p = sub.add_parser("constrained", help="exhaustive search with an allowed operator set")
    p.add_argument("--from", dest="source", required=True)
    p.add_argument("--to", dest="target", required=True)
    p.add_argument("--allowed", required=True, help="file with one Pauli per line")
    p.add_argument("--depth", type=int, default=8)
    p.add_argument("--out")
    p.set_defaults(func=cmd_constrained)

    p = sub.add_parser("fixtures", help="write the fixture code files to a directory")
    p.add_argument("directory")
    p.set_defaults(func=cmd_fixtures)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2), format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (InputError, CodeError, PauliError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except SimulationError as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
