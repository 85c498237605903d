"""Batch front door: run machines on words, enumerate and diff
languages against the reference simulators, run the equivalence
experiments, dump encodings.

Exit codes: 0 success (determinate verdict, empty diff), 2 language
mismatch against the oracle, 3 undetermined verdicts, 4 parse errors,
5 validation failures.
"""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction

from . import equivalence, export, oracle, sampling
from .execution import (T_CONL, T_DET, T_NL, Test, Verdict, evaluate_test,
                        language, accept_mass, plug, t_prob)
from .encodings import (EncodedMachine, TapeLayout, encode_machine,
                        encode_word, run_word)
from .graphing import classify, cost, validate
from .machines import (MachineParseError, MachineSpecError, load_machine)
from .realizers import Microcosm

EXIT_OK = 0
EXIT_MISMATCH = 2
EXIT_UNDETERMINED = 3
EXIT_PARSE = 4
EXIT_INVALID = 5


def _parse_fraction(text: str) -> Fraction:
    if "/" in text:
        p, q = text.split("/", 1)
        return Fraction(int(p), int(q))
    return Fraction(int(text))


def _test_from_args(args) -> Test:
    if args.test == "det":
        return T_DET
    if args.test == "nl":
        return T_NL
    if args.test == "conl":
        return T_CONL
    return t_prob(_parse_fraction(args.cutpoint))


def _load(path: str) -> EncodedMachine:
    spec = load_machine(path)
    return encode_machine(spec)


def _ensure_out(args) -> str | None:
    if args.out:
        os.makedirs(args.out, exist_ok=True)
    return args.out


def cmd_run(args) -> int:
    machine = _load(args.machine)
    result, regions = run_word(machine, args.word, one_way=args.one_way,
                               max_steps=args.max_steps)
    test = _test_from_args(args)
    verdict = evaluate_test(result, test, regions)
    print(f"{machine.spec.name} on {args.word!r}: {verdict.value}")
    if test.kind == "prob":
        print(f"accept mass: {export.frac_str(accept_mass(result, regions))}")
    out = _ensure_out(args)
    if out:
        export.write_jsonl(os.path.join(out, "trace.jsonl"),
                           [export.result_payload(result)])
        accepting = None
        for record, edge in zip(result.paths, result.graphing.edges):
            src = edge.source.intersect(regions.launch)
            if src.is_empty():
                continue
            if not edge.realizer.apply(src).intersect(regions.accept).is_empty():
                accepting = record.steps
                break
        if verdict is not Verdict.ACCEPT:
            accepting = None
        rows = len(machine.spec.states)
        names = machine.layout.cell_names(rows)
        enc = encode_word(args.word, machine.layout, state_rows=rows,
                          one_way=args.one_way)
        dot = export.run_dot(machine.graphing, enc.graphing, names, accepting)
        with open(os.path.join(out, "run.dot"), "w", encoding="utf-8") as fh:
            fh.write(dot)
    if verdict is Verdict.UNDETERMINED:
        return EXIT_UNDETERMINED
    return EXIT_OK


def _oracle_words(machine: EncodedMachine, test: Test, max_len: int):
    spec = machine.spec
    if test.kind == "conl":
        return oracle.oracle_language(spec, max_len, "co")
    if test.kind == "prob":
        return oracle.oracle_language(spec, max_len, "prob", test.cutpoint)
    return oracle.oracle_language(spec, max_len, "accept")


def cmd_language(args) -> int:
    machine = _load(args.machine)
    test = _test_from_args(args)
    got = language(machine, test, args.max_len, one_way=args.one_way,
                   max_steps=args.max_steps)
    expected = _oracle_words(machine, test, args.max_len)
    print(f"graphing language ({len(got.accepted)} words): "
          + " ".join(repr(w) for w in got.accepted))
    print(f"oracle language   ({len(expected)} words): "
          + " ".join(repr(w) for w in expected))
    payload = {
        "machine": machine.spec.name,
        "test": test.kind,
        "max_len": args.max_len,
        "graphing": got.accepted,
        "oracle": expected,
        "undetermined": got.undetermined,
    }
    if test.kind == "prob":
        payload["probabilities"] = {
            w: export.frac_str(oracle.pfa_accept_prob(machine.spec, w))
            for w in oracle.words_up_to(machine.spec.alphabet, args.max_len)}
    out = _ensure_out(args)
    if out:
        export.write_json(os.path.join(out, "language.json"), payload)
    if got.undetermined:
        print("undetermined words: " + " ".join(repr(w) for w in got.undetermined))
        return EXIT_UNDETERMINED
    if got.accepted != expected:
        only_graphing = sorted(set(got.accepted) - set(expected))
        only_oracle = sorted(set(expected) - set(got.accepted))
        print(f"MISMATCH; graphing-only: {only_graphing}, "
              f"oracle-only: {only_oracle}")
        return EXIT_MISMATCH
    print("languages agree")
    return EXIT_OK


def cmd_experiment(args) -> int:
    out = _ensure_out(args)
    if args.kind == "cost":
        partial, total = equivalence.treeing_cost(args.heads, args.depth)
        payload = {
            "experiment": "cost",
            "heads": args.heads,
            "depth": args.depth,
            "partial": export.frac_str(partial),
            "total": export.frac_str(total),
        }
        print(f"treeing cost, {args.heads} coordinates: partial "
              f"{export.frac_str(partial)} at depth {args.depth}, "
              f"total {export.frac_str(total)}")
    elif args.kind == "separation":
        report = equivalence.separation_experiment(
            args.small, args.large, args.max_word_len, args.max_parts)
        payload = {
            "experiment": "separation",
            **{k: (export.frac_str(v) if isinstance(v, Fraction) else v)
               for k, v in report.items()},
        }
        print(f"separation {args.small} vs {args.large}: totals "
              f"{export.frac_str(report['treeing_total_small'])} vs "
              f"{export.frac_str(report['treeing_total_large'])}, "
              f"swap noncompilable within bounds: "
              f"{report['swap_noncompilable_within_bounds']}")
    elif args.kind == "compile":
        machine = _load(args.machine)
        witnesses = equivalence.unit_shift_witnesses(machine.graphing)
        target = Microcosm.finitely_generated(
            equivalence.standard_generators(1))
        compiled = equivalence.compile_graphing(machine.graphing, witnesses,
                                                target)
        recompiled = EncodedMachine(machine.spec, machine.layout, compiled)
        test = _test_from_args(args)
        before = language(machine, test, args.max_len)
        after = language(recompiled, test, args.max_len)
        same = before.accepted == after.accepted
        payload = {
            "experiment": "compile",
            "machine": machine.spec.name,
            "max_len": args.max_len,
            "language_before": before.accepted,
            "language_after": after.accepted,
            "unchanged": same,
            "cost_before": export.frac_str(cost(machine.graphing)),
            "cost_after": export.frac_str(cost(compiled)),
        }
        print(f"compile {machine.spec.name} into unit shifts: language "
              f"{'unchanged' if same else 'CHANGED'} up to length {args.max_len}")
        if not same:
            if out:
                export.write_json(os.path.join(out, "experiment.json"), payload)
            return EXIT_MISMATCH
    elif args.kind in ("closure", "associativity"):
        payload = _property_experiment(args)
        failures = payload["failures"]
        print(f"{args.kind}: {payload['passes']}/{payload['count']} passed")
        if out:
            export.write_json(os.path.join(out, "experiment.json"), payload)
        return EXIT_OK if not failures else EXIT_MISMATCH
    else:
        raise ValueError(f"unknown experiment {args.kind!r}")
    if out:
        export.write_json(os.path.join(out, "experiment.json"), payload)
    return EXIT_OK


def _property_experiment(args) -> dict:
    from .graphing import GraphingClass

    passes = 0
    failures = []
    for k in range(args.count):
        seed = args.seed + k
        if args.kind == "closure":
            f, g = sampling.random_pair(seed, args.mode)
            result = plug(f, g, max_steps=args.max_steps)
            wanted = {"det": GraphingClass.DETERMINISTIC,
                      "nondet": GraphingClass.NONDETERMINISTIC,
                      "prob": GraphingClass.PROBABILISTIC}[args.mode]
            got = classify(result.graphing)
            ok = result.diagnostics.clean() and (
                got == wanted or got == GraphingClass.DETERMINISTIC)
        else:
            f, g, h = sampling.random_triple(seed, args.mode)
            left = plug(plug(f, g).graphing, h)
            right = plug(f, plug(g, h).graphing)
            ok = (left.diagnostics.clean() and right.diagnostics.clean()
                  and left.graphing.same_as(right.graphing))
        if ok:
            passes += 1
        else:
            failures.append(seed)
    return {
        "experiment": args.kind,
        "mode": getattr(args, "mode", "det"),
        "seed": args.seed,
        "count": args.count,
        "passes": passes,
        "failures": failures,
    }


def cmd_encode(args) -> int:
    out = _ensure_out(args)
    if args.what == "word":
        layout = TapeLayout(tuple(args.alphabet.split()))
        enc = encode_word(args.value, layout, state_rows=args.rows,
                          one_way=args.one_way)
        graphing = enc.graphing
        names = layout.cell_names(args.rows)
    else:
        machine = _load(args.value)
        graphing = machine.graphing
        names = machine.layout.cell_names(len(machine.spec.states))
    print(f"{len(graphing.edges)} edges, classified "
          f"{classify(graphing).value}, cost {export.frac_str(cost(graphing))}")
    if out:
        export.write_json(os.path.join(out, "encoding.json"),
                          export.graphing_payload(graphing))
        with open(os.path.join(out, "encoding.dot"), "w", encoding="utf-8") as fh:
            fh.write(export.graphing_dot(graphing, names))
    return EXIT_OK


def cmd_validate(args) -> int:
    machine = _load(args.machine)
    problems = validate(machine.graphing)
    if problems:
        for p in problems:
            print(f"violation: {p}")
        return EXIT_INVALID
    print(f"{machine.spec.name}: ok "
          f"({len(machine.graphing.edges)} edges, "
          f"{classify(machine.graphing).value})")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="graphvm",
        description="exact virtual machine for weighted graphings")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, test=True):
        p.add_argument("--max-steps", type=int, default=10000)
        p.add_argument("--out", default=None, help="output directory")
        if test:
            p.add_argument("--test", choices=["det", "nl", "conl", "prob"],
                           default="det")
            p.add_argument("--cutpoint", default="1/2")

    p = sub.add_parser("run", help="run a machine on one word")
    p.add_argument("machine")
    p.add_argument("word")
    p.add_argument("--one-way", action="store_true")
    common(p)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("language", help="enumerate and diff against the oracle")
    p.add_argument("machine")
    p.add_argument("--max-len", type=int, default=4)
    p.add_argument("--one-way", action="store_true")
    common(p)
    p.set_defaults(func=cmd_language)

    p = sub.add_parser("experiment", help="equivalence-lab experiments")
    ex = p.add_subparsers(dest="kind", required=True)

    q = ex.add_parser("cost")
    q.add_argument("--heads", type=int, required=True)
    q.add_argument("--depth", type=int, required=True)
    common(q, test=False)
    q.set_defaults(func=cmd_experiment)

    q = ex.add_parser("separation")
    q.add_argument("small", type=int)
    q.add_argument("large", type=int)
    q.add_argument("--max-word-len", type=int, default=6)
    q.add_argument("--max-parts", type=int, default=8)
    common(q, test=False)
    q.set_defaults(func=cmd_experiment)

    q = ex.add_parser("compile")
    q.add_argument("machine")
    q.add_argument("--max-len", type=int, default=6)
    common(q)
    q.set_defaults(func=cmd_experiment)

    for kind in ("closure", "associativity"):
        q = ex.add_parser(kind)
        q.add_argument("--mode", choices=["det", "nondet", "prob"],
                       default="det")
        q.add_argument("--seed", type=int, default=1)
        q.add_argument("--count", type=int, default=100)
        common(q, test=False)
        q.set_defaults(func=cmd_experiment)

    p = sub.add_parser("encode", help="dump a word or machine graphing")
    p.add_argument("what", choices=["word", "machine"])
    p.add_argument("value", help="the word itself, or a machine file")
    p.add_argument("--alphabet", default="0 1")
    p.add_argument("--rows", type=int, default=1)
    p.add_argument("--one-way", action="store_true")
    common(p, test=False)
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("validate", help="check a machine file and its graphing")
    p.add_argument("machine")
    common(p, test=False)
    p.set_defaults(func=cmd_validate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (MachineParseError, MachineSpecError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
