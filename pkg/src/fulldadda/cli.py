"""Command-line front end: generate, verify, report, compare.

Exit status: 0 on success or a passing verification, 1 on a failed
verification, 2 on usage or I/O errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import analysis, reports
from .circuits import make_spec, parse_spec
from .multiplier import CensusError, census
from .netlist import NetlistError, NetlistParseError, deserialize, serialize
from .primitives import DEFAULTS, load_attributes

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _circuit_flags(p: argparse.ArgumentParser, netlist: bool = True) -> None:
    p.add_argument("--circuit", default="multiplier",
                   help="multiplier, cell, fa, rca, csa, csa-bec1 or ha-csa-bec1")
    p.add_argument("--width", type=int, default=4)
    p.add_argument("--style", default="full-dadda", help="dadda or full-dadda")
    p.add_argument("--compressor", default="ha-csa-bec1", help="classic-fa or ha-csa-bec1")
    p.add_argument("--final-adder", default="rca", help="rca, csa, csa-bec1 or ha-csa-bec1")
    if netlist:
        p.add_argument("--netlist", type=Path, help="read a serialized netlist instead of generating")


def _attr_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--weights", type=Path, help="JSON delay table")
    p.add_argument("--costs", type=Path, help="JSON transistor-cost table")


def _out_flags(p: argparse.ArgumentParser, default_fmt: str = "text") -> None:
    p.add_argument("--format", choices=reports.FORMATS, default=default_fmt)
    p.add_argument("-o", "--output", type=Path, help="write here instead of standard output")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fulldadda",
                                     description="Gate-level multiplier and adder generator and auditor.")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a netlist and print its census")
    _circuit_flags(g, netlist=False)
    g.add_argument("-o", "--output", type=Path, help="netlist path (default: <name>.json)")
    g.add_argument("--format", choices=reports.FORMATS, default="text", help="census format")

    v = sub.add_parser("verify", help="check a circuit against integer arithmetic")
    _circuit_flags(v)
    v.add_argument("--samples", type=int, default=100_000)
    v.add_argument("--seed", type=int, default=0)

    r = sub.add_parser("report", help="cost, timing and optional activity report")
    _circuit_flags(r)
    _attr_flags(r)
    _out_flags(r)
    r.add_argument("--mode", choices=("table", "gate"), default="table", help="transistor cost mode")
    r.add_argument("--random-stimulus", type=int, metavar="K", help="K seeded random vectors")
    r.add_argument("--stimulus", type=Path, help='JSON {"port": [values, ...]}')
    r.add_argument("--seed", type=int, default=0)

    c = sub.add_parser("compare", help="side-by-side table of several circuits")
    c.add_argument("specs", nargs="+", metavar="SPEC",
                   help="kind[:width[:style[:compressor[:final]]]], e.g. rca:4 or mult:8:dadda")
    c.add_argument("--width", type=int, default=4, help="width for specs that omit one")
    c.add_argument("--allow-mixed-width", action="store_true")
    c.add_argument("--random-stimulus", type=int, default=10_000, metavar="K")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--samples", type=int, default=100_000)
    _attr_flags(c)
    _out_flags(c)
    return parser


def _attributes(args):
    attrs = DEFAULTS
    for path in (getattr(args, "costs", None), getattr(args, "weights", None)):
        if path is not None:
            attrs = load_attributes(path, attrs)
    return attrs


def _netlist(args):
    if getattr(args, "netlist", None) is not None:
        return deserialize(args.netlist.read_text())
    return make_spec(args.circuit, args.width, args.style, args.compressor, args.final_adder).build()


def _emit(text: str, path: Path | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        path.write_text(text)


def cmd_generate(args) -> int:
    spec = make_spec(args.circuit, args.width, args.style, args.compressor, args.final_adder)
    netlist = spec.build()
    out = args.output or Path(f"{netlist.name}.json")
    out.write_text(serialize(netlist))
    sections = []
    try:
        c = census(netlist)
    except CensusError:
        c = None
    if c is not None:
        sections.append(reports.census_section(netlist.name, c, spec.is_multiplier and spec.config().is_proposed))
    cost = analysis.count_transistors(netlist, "gate")
    sections.append(reports.Section("netlist", [
        reports.Row(netlist.name, cost.width, "netlist", "gates", len(netlist.gates)),
        reports.Row(netlist.name, cost.width, "netlist", "nets", netlist.net_count),
    ], {"name": netlist.name, "path": str(out), "gates": len(netlist.gates), "nets": netlist.net_count}))
    sys.stdout.write(reports.render(sections, args.format))
    return EXIT_OK


def cmd_verify(args) -> int:
    netlist = _netlist(args)
    verdict = analysis.verify(netlist, n_samples=args.samples, seed=args.seed)
    print(f"{netlist.name}: {verdict.summary()}")
    return EXIT_OK if verdict.passed else EXIT_FAIL


def _stimulus(args, netlist):
    if args.stimulus is not None and args.random_stimulus is not None:
        raise UsageError("--stimulus and --random-stimulus are mutually exclusive")
    if args.stimulus is not None:
        data = json.loads(args.stimulus.read_text())
        if not isinstance(data, dict):
            raise UsageError(f"--stimulus: {args.stimulus} must hold a JSON object of port -> values")
        return data
    if args.random_stimulus is not None:
        return analysis.random_stimulus(netlist, args.random_stimulus, args.seed)
    return None


def cmd_report(args) -> int:
    netlist = _netlist(args)
    sections = reports.circuit_report(netlist, args.mode, _attributes(args), _stimulus(args, netlist))
    _emit(reports.render(sections, args.format), args.output)
    return EXIT_OK


def cmd_compare(args) -> int:
    if len(args.specs) < 2:
        raise UsageError("compare needs at least two circuit specs")
    specs = [parse_spec(s, args.width) for s in args.specs]
    rows = reports.compare(specs, args.random_stimulus, args.seed, _attributes(args), args.samples,
                           args.allow_mixed_width)
    _emit(reports.render([reports.comparison_section(rows)], args.format), args.output)
    return EXIT_OK if all(r.verdict == "PASS" for r in rows) else EXIT_FAIL


COMMANDS = {"generate": cmd_generate, "verify": cmd_verify, "report": cmd_report, "compare": cmd_compare}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for flag in ("samples", "random_stimulus"):
        v = getattr(args, flag, None)
        if v is not None and v < (2 if flag == "random_stimulus" else 0):
            parser.error(f"--{flag.replace('_', '-')} is too small: {v}")
    try:
        return COMMANDS[args.command](args)
    except UsageError as e:
        parser.error(str(e))
    except (OSError, NetlistParseError, NetlistError, ValueError) as e:
        print(f"fulldadda {args.command}: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
