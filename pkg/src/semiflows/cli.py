"""Command line: ``semiflows analyze | audit | generate``.

Exit status: 0 success, 1 audit violations, 2 usage error, 3 I/O error,
4 instance parse error, 5 instance validation error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import __version__
from .audit import (
    CLASSES,
    MAX_EXHAUSTIVE_G,
    MAX_EXHAUSTIVE_N,
    PROFILES,
    any_violations,
    atlas,
    format_report,
    profile_space,
    random_generators,
    random_suite,
    report_json,
    run_audit,
    theorem_catalog,
)
from .automorphisms import acts_freely, automorphism_group, aut_orbit, is_aut_equicontinuous
from .dynamics import minimal_subsets, property_vector, proximal_relation
from .errors import ValidationError
from .ideals import CLAUSES, left_ideal_report, verify_minimal_ideal_structure
from .instances import (
    PRESETS,
    InstanceFile,
    InstanceParseError,
    dump_instance,
    entourage_space,
    load_instance,
    preset,
)
from .measures import invariant_measures
from .transformation import idempotents

EXIT_OK, EXIT_VIOLATIONS, EXIT_USAGE, EXIT_IO, EXIT_PARSE, EXIT_VALIDATION = range(6)
REPORT_VERSION = 1


class UsageError(Exception):
    pass


def _frac(v) -> str:
    return f"{v.numerator}/{v.denominator}"


def analysis(inst: InstanceFile, max_elements: int = 256) -> dict:
    """Everything the analyze command reports, as plain JSON-ready data."""
    S = inst.semiflow()
    E = S.monoid
    U = S.space
    rows = E.array.tolist()
    ideals = left_ideal_report(E)
    structure = verify_minimal_ideal_structure(E)
    pv = property_vector(S)
    eq = pv.equicontinuous
    ua = pv.uniformly_almost_periodic
    A = automorphism_group(S)
    P = invariant_measures(S)
    idem = sorted(E.index(u) for u in idempotents(E))
    return {
        "format_version": REPORT_VERSION,
        "label": inst.label,
        "n": S.n,
        "generators": [list(g.image) for g in S.generators],
        "space": {"levels": U.k, "separated": U.separated,
                  "ball_sizes": [[int(c) for c in rel.sum(axis=1)] for rel in U.entourages]},
        "monoid": {
            "size": len(E),
            "elements": rows[:max_elements],
            "elements_omitted": max(0, len(E) - max_elements),
            "idempotents": idem,
        },
        "minimal_left_ideals": [
            {"elements": list(I), "idempotents": J,
             "groups": {str(u): list(g) for u, g in comp.items()}}
            for I, J, comp in zip(ideals.minimal_left_ideals, ideals.idempotents_per_ideal,
                                  ideals.group_components)
        ],
        "ideal_structure": {
            str(c): {"passed": r.passed, "checks": r.checks, "witness": r.witness}
            for c, r in structure.clauses.items()
        },
        "orbits": [sorted(o) for o in S.orbits],
        "minimal_sets": [sorted(M) for M in minimal_subsets(S)],
        "proximal_relation": sorted([list(p) for p in proximal_relation(S)]),
        "properties": {
            **pv.flags(),
            "transitive_points": sorted(x for x in range(S.n) if len(S.orbits[x]) == S.n),
            "equicontinuity_moduli": list(eq.moduli),
            "equicontinuity_witnesses": {str(i): list(w) for i, w in eq.witnesses.items()},
            "sensitive_levels": list(pv.sensitive.levels),
            "uap_syndetic_levels": list(ua.syndetic_levels),
            "equicontinuous_and_surjective": ua.equicontinuous_and_surjective,
            "wap_note": pv.weakly_almost_periodic.note,
        },
        "automorphisms": {
            "size": len(A),
            "elements": [list(a.image) for a in A],
            "universally_transitive": len(aut_orbit(A, 0)) == S.n,
            "acts_freely": acts_freely(A),
            "equicontinuous": is_aut_equicontinuous(S, A),
        },
        "invariant_measures": {
            "feasible": P.feasible,
            "particular": P.particular.to_strings() if P.particular else None,
            "dimension": P.dimension,
            "directions": [[_frac(v) for v in d] for d in P.directions],
            "uniquely_ergodic": P.is_unique,
        },
    }


def _yn(v) -> str:
    return "yes" if v else "no"


def format_analysis(doc: dict) -> str:
    out = []
    w = out.append
    w(f"instance: {doc['label'] or '(unlabelled)'}")
    w(f"points: {doc['n']}")
    for i, g in enumerate(doc["generators"]):
        w(f"generator {i}: {g}")
    sp = doc["space"]
    w(f"entourage levels: {sp['levels']}  separated: {_yn(sp['separated'])}")
    if not sp["separated"]:
        w("  note: the chain does not separate points; uniform notions are graded by it")
    m = doc["monoid"]
    w("")
    w(f"monoid size: {m['size']}")
    for i, row in enumerate(m["elements"]):
        w(f"  e{i}: {row}")
    if m["elements_omitted"]:
        w(f"  ... {m['elements_omitted']} more elements")
    w(f"idempotents: {m['idempotents']}")
    w("")
    for k, I in enumerate(doc["minimal_left_ideals"]):
        w(f"minimal left ideal {k}: {I['elements']}")
        w(f"  idempotents: {I['idempotents']}")
        for u, g in I["groups"].items():
            w(f"  group of e{u}: {g}")
    w("ideal structure:")
    for c, r in doc["ideal_structure"].items():
        status = "pass" if r["passed"] else f"FAIL {json.dumps(r['witness'], sort_keys=True)}"
        w(f"  ({c}) {CLAUSES[int(c)]}: {status} [{r['checks']} checks]")
    w("")
    w(f"orbits: {doc['orbits']}")
    w(f"minimal sets: {doc['minimal_sets']}")
    w(f"proximal pairs: {doc['proximal_relation']}")
    w("")
    p = doc["properties"]
    for key in ("pointwise_almost_periodic", "minimal", "topologically_transitive",
                "point_transitive", "syndetically_transitive", "distal", "equicontinuous",
                "uniformly_almost_periodic", "sensitive", "weakly_almost_periodic"):
        w(f"{key.replace('_', ' ')}: {_yn(p[key])}")
    w(f"transitive points: {p['transitive_points']}")
    w(f"equicontinuity moduli (delta level per eps level): {p['equicontinuity_moduli']}")
    for i, (x, y, e) in p["equicontinuity_witnesses"].items():
        w(f"  eps level {i}: pair ({x}, {y}) torn apart by e{e}")
    w(f"sensitive at eps levels: {p['sensitive_levels']}")
    w(f"syndetic small-motion sets per level: {[_yn(v) for v in p['uap_syndetic_levels']]}")
    w(f"equicontinuous with surjective elements: {_yn(p['equicontinuous_and_surjective'])}")
    w(f"weak almost periodicity: {p['wap_note']}")
    w("")
    a = doc["automorphisms"]
    w(f"automorphisms: {a['size']}")
    for img in a["elements"]:
        w(f"  {img}")
    w(f"universally transitive: {_yn(a['universally_transitive'])}")
    w(f"automorphisms act freely: {_yn(a['acts_freely'])}")
    w(f"automorphisms equicontinuous: {_yn(a['equicontinuous'])}")
    w("")
    mu = doc["invariant_measures"]
    w(f"invariant measure exists: {_yn(mu['feasible'])}")
    if mu["feasible"]:
        w(f"invariant measure: {mu['particular']}")
        w(f"polytope dimension: {mu['dimension']}")
        for d in mu["directions"]:
            w(f"  direction: {d}")
    w(f"uniquely ergodic: {_yn(mu['uniquely_ergodic'])}")
    return "\n".join(out) + "\n"


def _write(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def cmd_analyze(args) -> int:
    inst = load_instance(args.path)
    doc = analysis(inst, args.max_elements)
    if args.json:
        _write(json.dumps(doc, indent=2) + "\n", args.json)
    if args.json != "-":
        _write(format_analysis(doc), None)
    return EXIT_OK


def _split(value: str | None) -> list | None:
    if value is None:
        return None
    return [v.strip() for v in value.split(",") if v.strip()]


def cmd_audit(args) -> int:
    profiles = _split(args.space_profile)
    for p in profiles:
        if p not in PROFILES:
            raise UsageError(f"--space-profile: unknown profile {p!r} ({', '.join(PROFILES)})")
    theorems = _split(args.theorems)
    if theorems is not None:
        known = {c.id for c in theorem_catalog()}
        bad = [t for t in theorems if t not in known]
        if bad:
            raise UsageError(f"--theorems: unknown ids {', '.join(bad)}")
    if args.workers < 1:
        raise UsageError("--workers must be at least 1")
    if args.gens < 1:
        raise UsageError("--gens must be at least 1")
    if args.seeds is None:
        if not 1 <= args.n <= MAX_EXHAUSTIVE_N:
            raise UsageError(f"--n: exhaustive mode supports 1..{MAX_EXHAUSTIVE_N}, got {args.n}")
        if args.gens > MAX_EXHAUSTIVE_G:
            raise UsageError(f"--gens: exhaustive mode supports 1..{MAX_EXHAUSTIVE_G}")
        instances = [i for p in profiles for i in atlas(args.n, args.gens, p)]
        mode = f"exhaustive n<={args.n} g<={args.gens}"
    else:
        if args.n < 1 or args.seeds < 0:
            raise UsageError("--n must be positive and --seeds non-negative")
        cls = args.cls.replace("-", "_")
        if cls not in CLASSES:
            raise UsageError(f"--class: unknown class {args.cls!r}")
        instances = [i for p in profiles
                     for i in random_suite(args.n, args.gens, range(args.seeds), cls, p)]
        mode = f"random n={args.n} g={args.gens} seeds={args.seeds} class={cls}"
    results = run_audit(instances, theorems, workers=args.workers)
    header = {"mode": mode, "space profiles": ", ".join(profiles),
              "instances": len(instances)}
    if args.json:
        _write(report_json(results, {"mode": mode, "space_profiles": profiles,
                                     "instances": len(instances)}), args.json)
    if args.json != "-":
        _write(format_report(results, header), None)
    return EXIT_VIOLATIONS if any_violations(results) else EXIT_OK


def cmd_generate(args) -> int:
    if args.preset is not None:
        if args.count != 1:
            raise UsageError("--count applies to random instances only")
        docs = [preset(args.preset, args.n)]
    else:
        if args.n < 1 or args.count < 1:
            raise UsageError("--n and --count must be positive")
        cls = args.cls.replace("-", "_")
        if cls not in CLASSES:
            raise UsageError(f"--class: unknown class {args.cls!r}")
        if args.space_profile not in PROFILES:
            raise UsageError(f"--space-profile: unknown profile {args.space_profile!r}")
        space = entourage_space(profile_space(args.space_profile, args.n))
        docs = []
        for s in range(args.seed, args.seed + args.count):
            gens = random_generators(args.n, args.gens, s, cls)
            docs.append(InstanceFile(args.n, gens, space,
                                     f"random-{cls}-n{args.n}-g{args.gens}-s{s}"))
    if len(docs) == 1 and not (args.out and os.path.isdir(args.out)):
        _write(dump_instance(docs[0]), args.out)
        return EXIT_OK
    if not args.out:
        raise UsageError("--out DIRECTORY is required when writing several instances")
    os.makedirs(args.out, exist_ok=True)
    for d in docs:
        _write(dump_instance(d), os.path.join(args.out, f"{d.label}.json"))
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="semiflows", description="Analyze finite semiflows and audit theorems.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    a = sub.add_parser("analyze", help="full report for one instance file")
    a.add_argument("path")
    a.add_argument("--json", metavar="PATH", help="also write the report as JSON ('-' = stdout only)")
    a.add_argument("--max-elements", type=int, default=256, help="rows of the element table")
    a.set_defaults(func=cmd_analyze)

    u = sub.add_parser("audit", help="run the theorem catalog over instance families")
    u.add_argument("--n", type=int, default=3,
                   help=f"largest size (exhaustive, at most {MAX_EXHAUSTIVE_N}) or size (random)")
    u.add_argument("--gens", type=int, default=2, help="generator count (bound in exhaustive mode)")
    u.add_argument("--seeds", type=int, help="random mode: seeds 0..SEEDS-1")
    u.add_argument("--class", dest="cls", default="arbitrary", help=", ".join(CLASSES))
    u.add_argument("--space-profile", default="metric-cycle",
                   help=f"comma separated, from {', '.join(PROFILES)}")
    u.add_argument("--theorems", help="comma separated catalog ids (default: all)")
    u.add_argument("--workers", type=int, default=1)
    u.add_argument("--json", metavar="PATH", help="also write the JSON mirror ('-' = stdout only)")
    u.set_defaults(func=cmd_audit)

    g = sub.add_parser("generate", help="write instance files")
    g.add_argument("--preset", choices=sorted(PRESETS))
    g.add_argument("--n", type=int, default=8)
    g.add_argument("--gens", type=int, default=1)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--count", type=int, default=1)
    g.add_argument("--class", dest="cls", default="arbitrary", help=", ".join(CLASSES))
    g.add_argument("--space-profile", default="metric-cycle", help=", ".join(PROFILES))
    g.add_argument("--out", help="file, or directory for several instances (default: stdout)")
    g.set_defaults(func=cmd_generate)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"semiflows: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InstanceParseError as exc:
        print(f"semiflows: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ValidationError as exc:
        print(f"semiflows: invalid instance: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"semiflows: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
