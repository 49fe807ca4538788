"""Command-line interface.

Exit codes: 0 = opaque / relation or condition holds, 1 = not opaque /
fails, 2 = usage or parse error, 3 = resource cap exceeded.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import fixtures, pwa
from .observer import (
    KSO,
    NOTIONS,
    backward_observer,
    build_two_way_observer,
    forward_observer,
    verify,
)
from .oracle import random_system
from .quotient import (
    build_quotient,
    check_eq1_condition,
    check_infsop_self,
    coarsest_infsop_partition,
)
from .relations import (
    check_bisimulation,
    check_infsop_bisimulation,
    check_initsop_bisimulation,
    check_initsop_simulation,
    check_simulation,
)
from .system import ResourceCapError, augment
from .textio import (
    ParseError,
    export_dot,
    parse_nts,
    parse_partition,
    parse_relation,
    serialize_nts,
    serialize_partition,
)

_RELATION_CHECKS = {
    "sim": check_simulation,
    "bisim": check_bisimulation,
    "initsop-sim": check_initsop_simulation,
    "initsop-bisim": check_initsop_bisimulation,
    "infsop-bisim": check_infsop_bisimulation,
}


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _load_system(path: str):
    return parse_nts(_read(path))


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="opacheck",
        description="Opacity verification for nondeterministic finite transition systems.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="decide opacity of a system")
    p.add_argument("--notion", action="append", choices=NOTIONS, required=True)
    p.add_argument("--k", type=int, help="window size for K-step opacity")
    p.add_argument("--witness", action="store_true", help="print witness paths")
    p.add_argument("file", metavar="FILE")

    p = sub.add_parser("observer", help="build the two-way observer")
    p.add_argument("--dot", metavar="OUT", help="write DOT to file")
    p.add_argument("--fig", metavar="OUT", help="render a figure to file")
    p.add_argument("--notion", choices=["cso", "initso", "infso"],
                   help="highlight states offending this notion")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--forward-only", action="store_true")
    g.add_argument("--backward-only", action="store_true")
    p.add_argument("file", metavar="FILE")

    p = sub.add_parser("quotient", help="build a quotient system from a partition")
    p.add_argument("--partition", metavar="PART", required=True)
    p.add_argument("--check-initsop", action="store_true",
                   help="check the same-input successor-block condition")
    p.add_argument("--check-infsop", action="store_true",
                   help="check the induced self-relation for step secrecy preservation")
    p.add_argument("--out", metavar="OUT")
    p.add_argument("file", metavar="FILE")

    p = sub.add_parser("relation", help="check a relation between two systems")
    p.add_argument("--kind", choices=sorted(_RELATION_CHECKS), required=True)
    p.add_argument("left", metavar="LEFT")
    p.add_argument("right", metavar="RIGHT")
    p.add_argument("rel", metavar="REL")

    p = sub.add_parser("refine", help="coarsest secrecy-preserving self-quotient")
    p.add_argument("--out", metavar="PART")
    p.add_argument("file", metavar="FILE")

    p = sub.add_parser("augment", help="complete a system with the sink state")
    p.add_argument("--out", metavar="OUT")
    p.add_argument("file", metavar="FILE")

    p = sub.add_parser("random", help="generate a reproducible random system")
    p.add_argument("--states", type=int, required=True)
    p.add_argument("--inputs", type=int, required=True)
    p.add_argument("--outputs", type=int, required=True)
    p.add_argument("--density", type=float, required=True)
    p.add_argument("--secret-frac", type=float, required=True)
    p.add_argument("--seed", type=int, required=True)

    p = sub.add_parser("demo", help="built-in demonstrations")
    p.add_argument("which", choices=["pwa"])
    p.add_argument("--dot", metavar="OUT")
    p.add_argument("--fig", metavar="OUT", help="render the region geometry")

    p = sub.add_parser("fixtures", help="built-in example systems")
    p.add_argument("action", choices=["list", "dump"])
    p.add_argument("fixture_id", nargs="?", metavar="ID")

    return parser


def _cmd_check(args) -> int:
    sys_ = _load_system(args.file)
    notions = args.notion
    if args.k is not None and KSO not in notions:
        print("error: --k is only meaningful with --notion kso", file=sys.stderr)
        return 2
    if KSO in notions and args.k is None:
        print("error: --notion kso requires --k", file=sys.stderr)
        return 2
    all_opaque = True
    for notion in notions:
        verdict = verify(sys_, notion, k=args.k)
        print(verdict.describe(with_witness=args.witness))
        all_opaque &= verdict.opaque
    return 0 if all_opaque else 1


def _observer_offenders(obs, sys_, notion):
    """States of an observer (full or component) violating a notion's condition."""
    aug = augment(sys_)
    secret, initial = aug.secret, aug.initial
    if hasattr(obs, "kind"):  # component observer over raw belief sets
        if notion == "cso" and obs.kind == "forward":
            return [q for q in obs.states if q <= secret]
        if notion == "initso" and obs.kind == "backward":
            return [q for q in obs.states if q & initial and (q & initial) <= secret]
        return []
    if notion == "cso":
        return [s for s in obs.states if s.q1 <= secret]
    if notion == "initso":
        return [
            s for s in obs.states
            if s.q2 & initial and (s.q2 & initial) <= secret
        ]
    return [
        s for s in obs.states if s.q1 & s.q2 and (s.q1 & s.q2) <= secret
    ]


def _cmd_observer(args) -> int:
    sys_ = _load_system(args.file)
    if args.forward_only:
        obs = forward_observer(sys_)
        print(f"forward observer: {len(obs.states)} states, "
              f"{len(obs.transitions)} transitions")
    elif args.backward_only:
        obs = backward_observer(sys_)
        print(f"backward observer: {len(obs.states)} states, "
              f"{len(obs.transitions)} transitions")
    else:
        obs = build_two_way_observer(sys_)
        print(f"two-way observer: {len(obs.states)} states, "
              f"{len(obs.transitions)} transitions")
    offenders = _observer_offenders(obs, sys_, args.notion) if args.notion else []
    if args.notion:
        print(f"offending states ({args.notion}): {len(offenders)}")
    if args.dot:
        _emit(export_dot(obs, offenders=offenders), args.dot)
    if args.fig:
        from .figures import save_observer_figure

        save_observer_figure(obs, args.fig, offenders=offenders)
    return 0


def _cmd_quotient(args) -> int:
    sys_ = _load_system(args.file)
    partition = parse_partition(_read(args.partition), sys_)
    quotient = build_quotient(partition)
    _emit(serialize_nts(quotient), args.out)
    ok = True
    if args.check_initsop:
        diag = check_eq1_condition(partition)
        print(f"initsop quotient condition: {'holds' if diag.holds else 'fails'}")
        for v in diag.violations:
            print(f"  {v}")
        ok &= diag.holds
    if args.check_infsop:
        diag = check_infsop_self(partition)
        print(f"infsop self-bisimulation: {'holds' if diag.holds else 'fails'}")
        for v in diag.violations:
            print(f"  {v}")
        ok &= diag.holds
    return 0 if ok else 1


def _cmd_relation(args) -> int:
    left = _load_system(args.left)
    right = _load_system(args.right)
    rel = parse_relation(_read(args.rel), left, right)
    diag = _RELATION_CHECKS[args.kind](rel)
    print(f"{args.kind}: {'holds' if diag.holds else 'fails'}")
    for v in diag.violations:
        print(f"  {v}")
    return 0 if diag.holds else 1


def _cmd_refine(args) -> int:
    sys_ = _load_system(args.file)
    partition = coarsest_infsop_partition(sys_)
    _emit(serialize_partition(partition), args.out)
    return 0


def _cmd_augment(args) -> int:
    sys_ = _load_system(args.file)
    _emit(serialize_nts(augment(sys_)), args.out)
    return 0


def _cmd_random(args) -> int:
    sys_ = random_system(
        seed=args.seed,
        n_states=args.states,
        n_inputs=args.inputs,
        n_outputs=args.outputs,
        transition_density=args.density,
        secret_fraction=args.secret_frac,
    )
    sys.stdout.write(serialize_nts(sys_))
    return 0


def _cmd_demo(args) -> int:
    check = pwa.verify_region_transitions()
    n_image = sum(1 for c in check.containments if c.kind == "image")
    n_pre = sum(1 for c in check.containments if c.kind == "preimage")
    print(f"region transition proof: {'holds' if check.holds else 'FAILS'} "
          f"({n_image} image containments, {n_pre} preimage containments, "
          f"image(A1)=B1 exactly: {check.a1_image_equals_b1})")
    for f in check.failures:
        print(f"  {f}")
    quotient = pwa.build_pwa_quotient()
    sys.stdout.write(serialize_nts(quotient))
    ok = check.holds
    for notion in ("initso", "cso", "infso"):
        verdict = verify(quotient, notion)
        print(verdict.describe())
        ok &= verdict.opaque
    for k in range(1, 9):
        verdict = verify(quotient, KSO, k=k)
        print(verdict.describe())
        ok &= verdict.opaque
    if args.dot:
        _emit(export_dot(quotient), args.dot)
    if args.fig:
        from .figures import save_region_figure

        save_region_figure(args.fig)
    return 0 if ok else 1


def _cmd_fixtures(args) -> int:
    if args.action == "list":
        for fid in fixtures.list_fixtures():
            print(fid)
        return 0
    if not args.fixture_id:
        print("error: fixtures dump requires an ID", file=sys.stderr)
        return 2
    try:
        sys_ = fixtures.fixture_system(args.fixture_id)
    except KeyError as exc:
        print(f"error: {exc.args[0]}", file=sys.stderr)
        return 2
    sys.stdout.write(serialize_nts(sys_))
    return 0


_COMMANDS = {
    "check": _cmd_check,
    "observer": _cmd_observer,
    "quotient": _cmd_quotient,
    "relation": _cmd_relation,
    "refine": _cmd_refine,
    "augment": _cmd_augment,
    "random": _cmd_random,
    "demo": _cmd_demo,
    "fixtures": _cmd_fixtures,
}


def cli_main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        return _COMMANDS[args.command](args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc.filename}: no such file", file=sys.stderr)
        return 2
    except ResourceCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(cli_main(sys.argv[1:]))


if __name__ == "__main__":
    main()
