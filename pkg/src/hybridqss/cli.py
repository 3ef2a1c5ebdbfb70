"""Command-line front end.

Exit status: 0 pass/feasible/in-region, 1 audit failure/infeasible/out of
region, 2 usage, parse or parameter errors.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from .access import AccessParseError, enumerate_all_structures, format_set, parse_structure
from .rates import RateRegion
from .schemes import Scheme, build, build_general, family_region, rates_of
from .verify import audit

FAMILIES = ("otp", "plain", "twin", "t3", "t4", "general")

# flags each family accepts (besides --family)
FAMILY_FLAGS = {
    "otp": {"q"},
    "plain": {"q"},
    "twin": {"k1", "n1", "k2", "n2", "q"},
    "t3": {"extreme", "q"},
    "t4": {"structure", "extreme", "q"},
    "general": {"structure_file", "q"},
}
REQUIRED_FLAGS = {
    "twin": {"k1", "n1", "k2", "n2"},
    "t3": {"extreme"},
    "t4": {"structure", "extreme"},
    "general": {"structure_file"},
}
REGION_FAMILIES = ("otp", "twin", "t3", "t4")


class UsageError(Exception):
    pass


def _add_family_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--family", required=True, choices=FAMILIES)
    p.add_argument("--q", type=int)
    p.add_argument("--k1", type=int)
    p.add_argument("--n1", type=int)
    p.add_argument("--k2", type=int)
    p.add_argument("--n2", type=int)
    p.add_argument("--extreme", type=int, choices=(1, 2))
    p.add_argument("--structure", type=int, help="t4 structure index 1..5")
    p.add_argument("--structure-file", type=Path, help="access-structure file (family general)")


def _family_params(args: argparse.Namespace, allowed_families: Sequence[str] = FAMILIES,
                   required: dict[str, set[str]] = REQUIRED_FLAGS) -> dict:
    family = args.family
    if family not in allowed_families:
        raise UsageError(f"family {family!r} not supported here (choose from {', '.join(allowed_families)})")
    given = {name for name in ("q", "k1", "n1", "k2", "n2", "extreme", "structure", "structure_file")
             if getattr(args, name) is not None}
    extra = given - FAMILY_FLAGS[family]
    if extra:
        flags = ", ".join("--" + f.replace("_", "-") for f in sorted(extra))
        raise UsageError(f"family {family} does not take {flags}")
    missing = required.get(family, set()) - given
    if missing:
        flags = ", ".join("--" + f.replace("_", "-") for f in sorted(missing))
        raise UsageError(f"family {family} requires {flags}")
    return {name: getattr(args, name) for name in given}


def _scheme(args: argparse.Namespace) -> Scheme:
    params = _family_params(args)
    if args.family == "general":
        structure = parse_structure(params["structure_file"].read_text())
        return build_general(structure, params.get("q", 2))
    return build(args.family, **params)


def _region(args: argparse.Namespace) -> RateRegion:
    params = _family_params(args, REGION_FAMILIES, {"twin": REQUIRED_FLAGS["twin"]})
    return family_region(args.family, **{k: params[k] for k in ("k1", "n1", "k2", "n2")
                                         if k in params})


def parse_tuple(text: str) -> list[Fraction]:
    try:
        return [Fraction(part.strip()) for part in text.split(",")]
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"malformed rate tuple {text!r}") from None


def cmd_feasible(args: argparse.Namespace) -> int:
    structure = parse_structure(args.path.read_text())
    witness = structure.infeasibility_witness()
    if witness is None:
        print("feasible")
        return 0
    print(f"infeasible {format_set(witness[0])} {format_set(witness[1])}")
    return 1


def cmd_enumerate(args: argparse.Namespace) -> int:
    for e in enumerate_all_structures(args.n1, args.n2):
        if args.feasible_only and not e.feasible:
            continue
        print(f"{e.structure} feasible={str(e.feasible).lower()} "
              f"twin={str(e.twin_threshold).lower()}")
    return 0


def cmd_build(args: argparse.Namespace) -> int:
    scheme = _scheme(args)
    print(f"scheme {scheme.name}")
    print(f"structure {scheme.structure}")
    print("randomness " + " ".join(f"{n}:F_{size}" for n, size in scheme.randomness))
    print("sizes " + " ".join(f"{s}={scheme.share_sizes[s]}" for s in scheme.structure.shares))
    print("layout " + " ".join(f"{label}:{d}" for label, d in scheme.quantum_layout().parts))
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    report = audit(_scheme(args))
    sys.stdout.write(report.render())
    return 0 if report.overall else 1


def cmd_rates(args: argparse.Namespace) -> int:
    print(rates_of(_scheme(args)))
    return 0


def cmd_region(args: argparse.Namespace) -> int:
    region = _region(args)
    for line in region.render():
        print(line)
    if args.tuple is None:
        return 0
    point = parse_tuple(args.tuple)
    if len(point) != region.n1 + region.n2:
        raise UsageError(f"expected {region.n1 + region.n2} coordinates, got {len(point)}")
    verdict = region.classify(point)
    print(verdict)
    return 0 if verdict != "out" else 1


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hybridqss", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("feasible", help="test the pairwise quantum-intersection condition")
    p.add_argument("path", type=Path)
    p.set_defaults(func=cmd_feasible)

    p = sub.add_parser("enumerate", help="list access structures on small share sets")
    p.add_argument("--n1", type=int, required=True, choices=range(0, 3))
    p.add_argument("--n2", type=int, required=True, choices=range(0, 3))
    p.add_argument("--feasible-only", action="store_true")
    p.set_defaults(func=cmd_enumerate)

    for name, func, help_text in (("build", cmd_build, "construct a scheme and describe it"),
                                  ("verify", cmd_verify, "run the entropic audit"),
                                  ("rates", cmd_rates, "print achieved share rates")):
        p = sub.add_parser(name, help=help_text)
        _add_family_flags(p)
        p.set_defaults(func=func)

    p = sub.add_parser("region", help="print a rate region, optionally test a tuple")
    _add_family_flags(p)
    p.add_argument("--tuple", help="comma-separated rates, e.g. 2,1,2 or 2,3/2,3/2")
    p.set_defaults(func=cmd_region)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, AccessParseError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
