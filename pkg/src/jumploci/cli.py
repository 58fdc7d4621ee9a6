"""Command-line interface.

Exit codes: 0 success (including negative verdicts), 1 usage or input
error, 2 validation failure or unmet hypothesis, 3 resource limit.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .alexander import (
    GroupPresentation,
    LaurentPresentation,
    PresentationError,
    decide_completion_finiteness,
    elementary_ideal,
    fox_alexander_matrix,
)
from .cdga import CDGA, CDGAFormatError, CDGAValidationError, cohomology, validate
from .exactalg.config import ResourceLimitError, RunConfig, using
from .gysin import CompactificationData, CompactificationError, build_gysin, h1_iso_check
from .intersection import (
    HypothesisUnmetError,
    IntersectionData,
    check_h1_iso_under_invertible_blocks,
    thm12_pipeline,
)
from .resonance import decide_finiteness, resonance_locus, restrict_to_subspace

EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_RESOURCE = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _read_json(path) -> dict:
    try:
        with open(Path(path), encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from None


def _load_cdga(path) -> CDGA:
    return CDGA.from_json(_read_json(path))


def _subspace(path):
    if path is None:
        return None
    data = _read_json(path)
    if "matrix" not in data:
        raise UsageError(f"{path}: subspace file needs a 'matrix' entry")
    return data["matrix"]


# --- text renderings ---------------------------------------------------------

def _text_locus(rep: dict) -> str:
    head = f"R^{rep['degree']}_{rep['depth']} in ({', '.join(rep['variables'])})"
    if rep["empty"]:
        return head + ": empty"
    if rep["whole_space"]:
        return head + ": whole space"
    lines = [head + f": {len(rep['components'])} component(s), contains 0: {str(rep['contains_zero']).lower()}"]
    for c in rep["components"]:
        lines.append(f"  V({', '.join(c['generators'])})   [{c['provenance']}]")
    return "\n".join(lines)


def _text(kind: str, rep: dict) -> str:
    if kind == "validate":
        lines = [f"status: {rep['status']}"]
        lines += [f"  {v['axiom']}: {v['witness']}" for v in rep["violations"]]
        if "betti" in rep:
            lines.append("betti: " + " ".join(str(b) for b in rep["betti"]))
        return "\n".join(lines)
    if kind == "locus":
        return _text_locus(rep)
    if kind == "finiteness":
        lines = [rep["verdict"]]
        lines += [_text_locus(l) for l in rep["loci"]]
        for c in rep["isolation"]["certificates"]:
            lines.append(f"  component {c['component']} of R^{c['degree']}: witness {c['witness'] or 'none'}")
        return "\n".join(lines)
    if kind == "gysin":
        dims = " ".join(str(x) for x in rep["hilbert"])
        return f"{dims}, iso: {str(rep['h1_iso']).lower()}"
    if kind == "intersection":
        lines = []
        for b in rep["blocks"]:
            lines.append(f"{'+'.join(b['divisors'])}: {b['matrix']} {b['verdict']}")
        lines.append(f"h1 iso: {rep['h1_iso']['status']}")
        return "\n".join(lines)
    if kind == "thm12":
        lines = [rep["verdict"]]
        for b in rep["intersection"]["blocks"]:
            lines.append(f"  block {'+'.join(b['divisors'])}: {b['verdict']}")
        for e in rep.get("per_r", []):
            line = f"  r={e['r']}: match={str(e['match']).lower()} ({e['flag']})"
            if "local_dimension" in e:
                ld = e["local_dimension"]
                da = ld["gysin"]["value"] if ld["gysin"] else "-"
                df = ld["formal"]["value"] if ld["formal"] else "-"
                line += f" local dimension gysin={da} formal={df}"
            lines.append(line)
        return "\n".join(lines)
    if kind == "alexander":
        lines = [rep["verdict"]]
        lines.append("E_{}: ({})".format(rep["elementary_ideal"], ", ".join(rep["support"]["generators"]) or "0"))
        return "\n".join(lines)
    if kind == "fox":
        lines = [f"rank {rep['rank']}"]
        lines += ["  [" + ", ".join(r) + "]" for r in rep["presentation"]["matrix"]]
        for k, ideal in enumerate(rep["elementary_ideals"]):
            lines.append(f"E_{k}: ({', '.join(ideal) or '0'})")
        return "\n".join(lines)
    return json.dumps(rep, sort_keys=True, indent=2)


def _emit(args, kind: str, rep: dict, out=None):
    out = out or sys.stdout
    if args.format == "text":
        print(_text(kind, rep), file=out)
    else:
        print(json.dumps(rep, sort_keys=True, indent=2), file=out)


# --- commands ------------------------------------------------------------------

def cmd_cdga_validate(args) -> int:
    A = _load_cdga(args.file)
    report = validate(A)
    rep = report.to_json()
    if report.ok:
        rep["betti"] = [cohomology(A, i).dimension for i in range(A.N)]
    _emit(args, "validate", rep)
    return EXIT_OK if report.ok else EXIT_INVALID


def cmd_resonance_compute(args) -> int:
    A = _load_cdga(args.file)
    locus = resonance_locus(A, args.degree, args.depth)
    sub = _subspace(args.subspace)
    if sub is not None:
        locus = restrict_to_subspace(locus, sub)
    _emit(args, "locus", locus.to_json())
    return EXIT_OK


def cmd_resonance_finiteness(args) -> int:
    A = _load_cdga(args.file)
    result = decide_finiteness(A, args.q, _subspace(args.subspace))
    _emit(args, "finiteness", result.to_json())
    return EXIT_OK


def cmd_gysin_build(args) -> int:
    data = CompactificationData.from_json(_read_json(args.file))
    G = build_gysin(data)
    rep = {
        "hilbert": list(G.hilbert_coeffs()),
        "h1_iso": h1_iso_check(data),
        "basis": [list(b) for b in G.cdga.basis],
        "bigrading": [[list(pl) for pl in level] for level in G.bigrading],
        "weights": [list(w) for w in G.cdga.weights],
    }
    if args.emit_cdga:
        try:
            Path(args.emit_cdga).write_text(
                json.dumps(G.cdga.to_json(), sort_keys=True, indent=1) + "\n", encoding="utf-8"
            )
        except OSError as exc:
            raise UsageError(f"cannot write {args.emit_cdga}: {exc.strerror or exc}") from None
        rep["emitted"] = str(args.emit_cdga)
    _emit(args, "gysin", rep)
    return EXIT_OK


def _intersection_inputs(args):
    data = CompactificationData.from_json(_read_json(args.file))
    pairing = _read_json(args.pairing) if args.pairing else None
    return data, pairing


def cmd_intersection_check(args) -> int:
    data, pairing = _intersection_inputs(args)
    inter = IntersectionData.from_compactification(data, pairing)
    rep = inter.to_json()
    rep["h1_iso"] = check_h1_iso_under_invertible_blocks(inter, data).to_json()
    _emit(args, "intersection", rep)
    return EXIT_OK


def cmd_pipeline_thm12(args) -> int:
    data, pairing = _intersection_inputs(args)
    ambient = _read_json(args.ambient) if args.ambient else None
    try:
        rep = thm12_pipeline(data, ambient, args.rmax, pairing, args.ignore_hypothesis)
    except HypothesisUnmetError as exc:
        _emit(args, "thm12", exc.report)
        return EXIT_INVALID
    _emit(args, "thm12", rep)
    return EXIT_OK


def _is_group(data: dict) -> bool:
    return "generators" in data


def cmd_alexander_decide(args) -> int:
    data = _read_json(args.file)
    if _is_group(data):
        fox = fox_alexander_matrix(GroupPresentation.from_json(data))
        P, k = fox.presentation, 1 if args.k is None else args.k
    else:
        P, k = LaurentPresentation.from_json(data), 0 if args.k is None else args.k
    rep = decide_completion_finiteness(P, k).to_json()
    rep["input"] = "group" if _is_group(data) else "module"
    _emit(args, "alexander", rep)
    return EXIT_OK


def cmd_alexander_fox(args) -> int:
    fox = fox_alexander_matrix(GroupPresentation.load(args.file))
    rep = fox.to_json()
    P = fox.presentation
    rep["elementary_ideals"] = [
        [str(g) for g in elementary_ideal(P, k).ideal.groebner()] for k in range(P.ncols + 1)
    ]
    _emit(args, "fox", rep)
    return EXIT_OK


# --- parser ----------------------------------------------------------------------

def _globals(parser: argparse.ArgumentParser, suppress: bool):
    d = argparse.SUPPRESS if suppress else None
    g = parser.add_argument_group("run configuration")
    g.add_argument("--format", choices=("json", "text"), default=argparse.SUPPRESS if suppress else "json",
                   help="output format (default json)")
    g.add_argument("--seed", type=lambda s: int(s, 0), default=d, help="random seed (default 0x5EED)")
    g.add_argument("--samples", type=int, default=d, help="sample count for Monte Carlo checks")
    g.add_argument("--max-basis", dest="max_basis", type=int, default=d, help="Gröbner basis size guard")
    g.add_argument("--max-degree", dest="max_degree", type=int, default=d, help="polynomial degree guard")
    g.add_argument("--time-limit", dest="time_limit", type=float, default=d,
                   help="wall-clock seconds per ideal operation")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="jumploci",
        description="Resonance varieties of finite CDGAs, Gysin models and Alexander-side finiteness tests.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    _globals(parser, suppress=False)
    groups = parser.add_subparsers(dest="group", metavar="GROUP", required=True)

    def leaf(sub, name, func, help_):
        p = sub.add_parser(name, help=help_)
        _globals(p, suppress=True)
        p.set_defaults(func=func)
        return p

    g = groups.add_parser("cdga", help="algebra validation")
    s = g.add_subparsers(dest="command", metavar="COMMAND", required=True)
    p = leaf(s, "validate", cmd_cdga_validate, "check every CDGA axiom")
    p.add_argument("file")

    g = groups.add_parser("resonance", help="resonance loci")
    s = g.add_subparsers(dest="command", metavar="COMMAND", required=True)
    p = leaf(s, "compute", cmd_resonance_compute, "compute R^i_r")
    p.add_argument("file")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--subspace", help="JSON file with a 'matrix' (b1 rows) spanning a subspace of H^1")
    p = leaf(s, "decide-finiteness", cmd_resonance_finiteness, "is 0 isolated in R^0..R^q?")
    p.add_argument("file")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--subspace")

    g = groups.add_parser("gysin", help="Gysin models")
    s = g.add_subparsers(dest="command", metavar="COMMAND", required=True)
    p = leaf(s, "build", cmd_gysin_build, "build and validate the degree-2 Gysin model")
    p.add_argument("file")
    p.add_argument("--emit-cdga", dest="emit_cdga", metavar="OUT")

    g = groups.add_parser("intersection", help="intersection matrices")
    s = g.add_subparsers(dest="command", metavar="COMMAND", required=True)
    p = leaf(s, "check", cmd_intersection_check, "blocks and definiteness")
    p.add_argument("file")
    p.add_argument("--pairing", help="JSON with 'intersection' or 'h2_pairing'")

    g = groups.add_parser("pipeline", help="germ comparison")
    s = g.add_subparsers(dest="command", metavar="COMMAND", required=True)
    p = leaf(s, "thm12", cmd_pipeline_thm12, "compare degree-one germs of Gysin model and ring")
    p.add_argument("file")
    p.add_argument("--pairing")
    p.add_argument("--rmax", type=int, default=1)
    p.add_argument("--ambient", help="cohomology ring JSON (default: derived from the file)")
    p.add_argument("--ignore-hypothesis", dest="ignore_hypothesis", action="store_true")

    g = groups.add_parser("alexander", help="Alexander-side decisions")
    s = g.add_subparsers(dest="command", metavar="COMMAND", required=True)
    p = leaf(s, "decide", cmd_alexander_decide, "finiteness of the completion at the trivial character")
    p.add_argument("file", help="module presentation, or group presentation (Fox matrix, E_1)")
    p.add_argument("--k", type=int, default=None, help="elementary ideal index")
    p = leaf(s, "fox", cmd_alexander_fox, "Fox Jacobian of a group presentation")
    p.add_argument("file")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        config = RunConfig.from_env(
            seed=args.seed, samples=args.samples, max_basis_size=args.max_basis,
            max_degree=args.max_degree, time_limit=args.time_limit, output_format=args.format,
        )
    except ValueError as exc:
        print(f"jumploci: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        with using(config):
            return args.func(args)
    except ResourceLimitError as exc:
        print(f"jumploci: resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except CDGAValidationError as exc:
        _emit(args, "validate", exc.report.to_json(), sys.stdout)
        return EXIT_INVALID
    except CompactificationError as exc:
        print(f"jumploci: invalid compactification data: {exc}", file=sys.stderr)
        return EXIT_INVALID if exc.witnesses else EXIT_USAGE
    except (UsageError, CDGAFormatError, PresentationError, ValueError) as exc:
        print(f"jumploci: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
