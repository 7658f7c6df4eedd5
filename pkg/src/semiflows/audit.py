"""Executable theorem catalog and the harness that runs it over instance families.

Each :class:`TheoremCheck` pairs a hypothesis with a conclusion, both
evaluated on a cached :class:`InstanceAnalysis`. The statements are proved
results about compact Hausdorff systems, so on in-scope instances a failed
conclusion is a bug in this package.

Scope. Entries that speak about equicontinuity, uniform almost periodicity,
sensitivity or automorphism equicontinuity assume the uniformity of a
Hausdorff space; a finite entourage chain is one exactly when its finest
level is the diagonal. On chains that do not separate points these entries
are still evaluated, but the outcomes are tallied as out-of-scope data and
never count as violations.
"""

from __future__ import annotations

import json
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import permutations, product
from typing import Callable, Iterable, Sequence

import numpy as np

from .automorphisms import automorphism_group, is_aut_equicontinuous, is_universally_transitive
from .dynamics import (
    Semiflow,
    equi_points,
    equicontinuity_report,
    is_almost_periodic_point,
    is_distal,
    is_minimal,
    minimal_subsets,
    proximal_relation,
    restrict,
    sensitivity_report,
    transitivity_profile,
    uap_report,
)
from .errors import InconsistencyError
from .ideals import verify_minimal_ideal_structure
from .measures import invariant_measures
from .space import UniformSpace, cyclic_metric, from_metric
from .transformation import Transformation, is_abelian, is_group

__all__ = [
    "PROFILES",
    "CLASSES",
    "Instance",
    "InstanceAnalysis",
    "TheoremCheck",
    "AuditResult",
    "profile_space",
    "theorem_catalog",
    "enumerate_instances",
    "atlas",
    "random_instance",
    "random_suite",
    "random_generators",
    "run_audit",
    "any_violations",
    "format_report",
    "report_json",
]

PROFILES = ("coarse", "discrete", "metric-cycle", "metric-cycle-graded")
CLASSES = ("arbitrary", "permutation", "abelian_commuting", "permutation_abelian")
MAX_EXHAUSTIVE_N = 4
MAX_EXHAUSTIVE_G = 2
SEPARATION_CLAUSE = "uniformity separates points (finest entourage is the diagonal)"


def _cycle_thresholds(n: int, graded: bool) -> list:
    ds = sorted({v for row in cyclic_metric(n) for v in row if v}, reverse=True)
    ts = [Fraction(v) for v in ds]
    if not graded or not ts:
        ts.append(Fraction(1, 2))
    return ts


def profile_space(profile: str, n: int) -> UniformSpace:
    """Entourage chain template for ``n`` points.

    ``coarse``: the single full relation. ``discrete``: the single diagonal.
    ``metric-cycle``: the cyclic metric thresholded at every distance, plus a
    threshold below the least distance, so the chain ends at the diagonal.
    ``metric-cycle-graded``: the same without the diagonal level.
    """
    if profile == "coarse":
        return UniformSpace(n, [np.ones((n, n), dtype=bool)], warn=False)
    if profile == "discrete":
        return UniformSpace(n, [np.eye(n, dtype=bool)], warn=False)
    if profile in ("metric-cycle", "metric-cycle-graded"):
        return from_metric(cyclic_metric(n), _cycle_thresholds(n, profile.endswith("graded")),
                           warn=False)
    raise ValueError(f"unknown space profile {profile!r}; choose from {', '.join(PROFILES)}")


@dataclass(frozen=True)
class Instance:
    id: str
    n: int
    generators: tuple
    profile: str

    @cached_property
    def space(self) -> UniformSpace:
        return profile_space(self.profile, self.n)

    def semiflow(self) -> Semiflow:
        return Semiflow(self.space, self.generators)

    def to_dict(self) -> dict:
        return {"id": self.id, "n": self.n, "profile": self.profile,
                "generators": [list(g) for g in self.generators]}


class InstanceAnalysis:
    """Lazily computed facts about one instance, shared by all catalog entries."""

    def __init__(self, instance: Instance):
        self.instance = instance
        self.S = instance.semiflow()

    @property
    def space(self) -> UniformSpace:
        return self.S.space

    @cached_property
    def separated(self) -> bool:
        return self.S.space.separated

    @cached_property
    def generators_bijective(self) -> bool:
        return all(g.is_bijective() for g in self.S.generators)

    @cached_property
    def all_surjective(self) -> bool:
        return bool(self.S.monoid.bijective.all())

    @cached_property
    def abelian(self) -> bool:
        return is_abelian(self.S.monoid)

    @cached_property
    def pointwise_ap(self) -> bool:
        return all(is_almost_periodic_point(self.S, x) for x in range(self.S.n))

    @cached_property
    def minimal(self) -> bool:
        return is_minimal(self.S)

    @cached_property
    def minimal_sets(self) -> list:
        return minimal_subsets(self.S)

    @cached_property
    def transitivity(self):
        return transitivity_profile(self.S)

    @cached_property
    def distal(self) -> bool:
        return is_distal(self.S)

    @cached_property
    def group(self) -> bool:
        return is_group(self.S.monoid)

    @cached_property
    def equicontinuity(self):
        return equicontinuity_report(self.S.space, self.S.monoid.array)

    @property
    def equicontinuous(self) -> bool:
        return self.equicontinuity.equicontinuous

    @cached_property
    def sensitivity(self):
        return sensitivity_report(self.S)

    @cached_property
    def uap(self):
        return uap_report(self.S)

    @cached_property
    def equi_sets(self) -> list:
        return [equi_points(self.S, i) for i in range(1, self.S.space.k + 1)]

    @cached_property
    def aut(self):
        return automorphism_group(self.S)

    @cached_property
    def universally_transitive(self) -> bool:
        return is_universally_transitive(self.S, self.aut)

    @cached_property
    def aut_equicontinuous(self) -> bool:
        return is_aut_equicontinuous(self.S, self.aut)

    @cached_property
    def measures(self):
        return invariant_measures(self.S)

    @cached_property
    def group_flow(self) -> Semiflow:
        """The flow of the group generated by bijective generators."""
        gens = list(self.S.generators)
        return Semiflow(self.S.space, gens + [g.inverse() for g in gens])


@dataclass(frozen=True)
class TheoremCheck:
    id: str
    title: str
    hypothesis: Callable
    # returns (held, witness dict)
    conclusion: Callable
    degenerate_notes: tuple = ()
    asserting: bool = True
    requires_separated: bool = False
    # optional per-instance tallies reported but never asserted
    empirical: Callable | None = None

    def hypothesis_clauses(self) -> list:
        return [SEPARATION_CLAUSE] if self.requires_separated else []


def _flags(**kw) -> dict:
    return {k: bool(v) if isinstance(v, (bool, np.bool_)) else v for k, v in kw.items()}


def _t16(a):
    r = a.uap
    return r.routes_agree, _flags(uap=r.uap, equicontinuous=a.equicontinuous,
                                  all_surjective=a.all_surjective)


def _t25(a):
    return a.distal, _flags(distal=a.distal)


def _l23(a):
    return a.distal == a.group, _flags(distal=a.distal, group=a.group)


def _l211(a):
    return a.generators_bijective, _flags(generators_surjective=a.generators_bijective)


def _l214(a):
    rep = verify_minimal_ideal_structure(a.S.monoid)
    return rep.passed, {"failed_clauses": {str(c): w for c, w in rep.failures().items()}}


def _uap_only(a):
    return a.uap.uap, _flags(uap=a.uap.uap, syndetic_levels=list(a.uap.syndetic_levels))


def _t216(a):
    G = a.group_flow
    eq = equicontinuity_report(G.space, G.monoid.array).equicontinuous
    ua = uap_report(G).uap
    return eq and ua, _flags(equicontinuous=eq, uap=ua)


def _t219(a):
    nonempty = all(a.equi_sets)
    return nonempty, _flags(all_nonempty=nonempty)


def _t219_tally(a):
    return {"all_equi_nonempty": all(a.equi_sets),
            "all_equi_full": all(len(E) == a.S.n for E in a.equi_sets)}


def _t227(a):
    return a.minimal and a.equicontinuous, _flags(minimal=a.minimal,
                                                  equicontinuous=a.equicontinuous)


def _cc1(a):
    return a.minimal, _flags(minimal=a.minimal)


def _cc2(a):
    s = a.sensitivity.sensitive
    return not s, _flags(sensitive=s, levels=list(a.sensitivity.levels))


def _cc2_tally(a):
    return {"not_sensitive_unconditional": not a.sensitivity.sensitive}


def _t232(a):
    return a.equicontinuous and a.uap.uap, _flags(equicontinuous=a.equicontinuous,
                                                  uap=a.uap.uap)


def _t236(a):
    vals = (a.universally_transitive,
            a.aut_equicontinuous and a.generators_bijective,
            a.equicontinuous and a.generators_bijective,
            a.uap.uap)
    return len(set(vals)) == 1, _flags(universally_transitive=vals[0],
                                       aut_equicontinuous_and_bijective=vals[1],
                                       equicontinuous_and_surjective=vals[2], uap=vals[3])


def _ue(a):
    P = a.measures
    w = {"unique": P.is_unique, "feasible": P.feasible, "dimension": P.dimension}
    if P.particular is not None:
        w["measure"] = P.particular.to_strings()
    return P.is_unique, w


def _c33(a):
    for M in a.minimal_sets:
        sub = restrict(a.S, M)
        if not invariant_measures(sub).is_unique:
            return False, {"minimal_set": sorted(M)}
    return True, {}


def _l34(a):
    G = a.group_flow
    mn = is_minimal(G)
    eq = equicontinuity_report(G.space, G.monoid.array).equicontinuous
    return mn and eq, _flags(minimal=mn, equicontinuous=eq)


AMENABLE = "amenability of the acting semigroup witnessed by an abelian image monoid"
WAP = "weak almost periodicity is automatic on a finite discrete space"
RIGHT_C = "right C-semigroup condition is automatic for a finite image monoid"
DENSE = "dense set of almost periodic points means every point on a finite space"
TOPSEMI = "joint continuity of the enveloping semigroup is automatic at finite scale"
METRIZABLE = "finite spaces are compact metrizable"


def theorem_catalog() -> list:
    """Every in-scope statement as an executable check, in a fixed order."""
    T = TheoremCheck
    return [
        T("T1.6", "uniformly almost periodic iff equicontinuous with surjective elements",
          lambda a: True, _t16, requires_separated=True),
        T("T2.5", "equicontinuous with surjective generators implies distal",
          lambda a: a.equicontinuous and a.generators_bijective, _t25, requires_separated=True),
        T("L2.3", "distal iff the enveloping monoid is a group",
          lambda a: True, _l23),
        T("L2.11A", "pointwise almost periodic abelian implies surjective generators",
          lambda a: a.pointwise_ap and a.abelian, _l211, (AMENABLE,)),
        T("L2.14A", "structure of minimal left ideals",
          lambda a: True, _l214),
        T("T2.15A", "abelian with almost periodic points everywhere implies uniformly almost periodic",
          lambda a: a.abelian and a.pointwise_ap, _uap_only, (WAP, DENSE, TOPSEMI, AMENABLE),
          requires_separated=True),
        T("C2.16", "minimal abelian implies uniformly almost periodic",
          lambda a: a.minimal and a.abelian, _uap_only, (WAP, AMENABLE), requires_separated=True),
        T("T2.16A", "pointwise almost periodic flow is equicontinuous and uniformly almost periodic",
          lambda a: a.generators_bijective and a.pointwise_ap, _t216, (WAP,),
          requires_separated=True),
        T("T2.19A", "every equicontinuity set is nonempty (finite analogue, empirical)",
          lambda a: True, _t219, (WAP,), asserting=False, empirical=_t219_tally),
        T("T2.27", "syndetically transitive implies minimal equicontinuous",
          lambda a: a.transitivity.syndetically_transitive, _t227, (WAP, RIGHT_C),
          requires_separated=True),
        T("Cc1", "syndetically transitive implies minimal",
          lambda a: a.transitivity.syndetically_transitive, _cc1, (WAP,)),
        T("Cc2", "equicontinuous implies not sensitive",
          lambda a: a.equicontinuous, _cc2, (WAP,), requires_separated=True,
          empirical=_cc2_tally),
        T("T2.31A", "minimal abelian flow is uniformly almost periodic",
          lambda a: a.minimal and a.abelian and a.generators_bijective, _uap_only, (AMENABLE,),
          requires_separated=True),
        T("T2.32A", "minimal universally transitive implies equicontinuous and uniformly almost periodic",
          lambda a: a.minimal and a.universally_transitive, _t232, requires_separated=True),
        T("L2.33A", "universally transitive implies uniformly almost periodic",
          lambda a: a.universally_transitive, _uap_only, (METRIZABLE,), requires_separated=True),
        T("T2.34A", "universally transitive with equicontinuous automorphisms implies uniformly almost periodic",
          lambda a: a.universally_transitive and a.aut_equicontinuous, _uap_only,
          requires_separated=True),
        T("T2.36", "four equivalent conditions for point transitive abelian systems",
          lambda a: a.transitivity.point_transitive and a.abelian, _t236, (AMENABLE,),
          requires_separated=True),
        T("T3.2", "flow with a unique minimal set and an invariant measure is uniquely ergodic",
          lambda a: a.generators_bijective and len(a.minimal_sets) == 1 and a.measures.feasible,
          _ue),
        T("C3.3", "every minimal subset of a flow is uniquely ergodic",
          lambda a: a.generators_bijective, _c33),
        T("L3.4", "minimal equicontinuous flow stays so under the generated group",
          lambda a: a.minimal and a.equicontinuous and a.generators_bijective, _l34,
          requires_separated=True),
        T("T3.5", "minimal abelian flow is uniquely ergodic",
          lambda a: a.minimal and a.abelian and a.generators_bijective, _ue, (AMENABLE,)),
        T("T3.6", "minimal with surjective generators implies uniquely ergodic",
          lambda a: a.minimal and a.generators_bijective, _ue, (RIGHT_C,)),
    ]


def _preserving_permutations(U: UniformSpace) -> list:
    out = []
    for s in permutations(range(U.n)):
        idx = np.array(s)
        if (U.entourages[:, idx[:, None], idx[None, :]] == U.entourages).all():
            out.append(s)
    return out


def _conjugate(s: tuple, s_inv: tuple, t: tuple) -> tuple:
    # (s t s^-1)(x) = s(t(s^-1(x)))
    return tuple(s[t[s_inv[x]]] for x in range(len(t)))


def enumerate_instances(n: int, g: int, profile: str = "coarse") -> list:
    """All generator tuples up to simultaneous conjugation, lexicographically least first.

    Only point permutations preserving the profile's entourage chain are
    used, so conjugate instances have identical properties.
    """
    if not 1 <= n <= MAX_EXHAUSTIVE_N:
        raise ValueError(f"exhaustive enumeration needs 1 <= n <= {MAX_EXHAUSTIVE_N}, got {n}")
    if not 1 <= g <= MAX_EXHAUSTIVE_G:
        raise ValueError(f"exhaustive enumeration needs 1 <= g <= {MAX_EXHAUSTIVE_G}, got {g}")
    U = profile_space(profile, n)
    perms = [(s, tuple(np.argsort(s).tolist())) for s in _preserving_permutations(U)]
    maps = list(product(range(n), repeat=n))
    seen = set()
    out = []
    for gens in product(maps, repeat=g):
        if gens in seen:
            continue
        for s, s_inv in perms:
            seen.add(tuple(_conjugate(s, s_inv, t) for t in gens))
        out.append(Instance(f"exh/{profile}/n{n}/g{g}/{len(out):05d}", n, gens, profile))
    return out


def atlas(max_n: int = 3, max_g: int = 2, profile: str = "coarse") -> list:
    return [inst for n in range(1, max_n + 1) for g in range(1, max_g + 1)
            for inst in enumerate_instances(n, g, profile)]


def _normalize_class(cls: str) -> str:
    c = cls.replace("-", "_")
    if c not in CLASSES:
        raise ValueError(f"unknown instance class {cls!r}; choose from {', '.join(CLASSES)}")
    return c


def random_generators(n: int, g: int, seed: int, cls: str) -> tuple:
    cls = _normalize_class(cls)
    rng = random.Random(f"{n}:{g}:{seed}:{cls}")

    def perm():
        p = list(range(n))
        rng.shuffle(p)
        return tuple(p)

    if cls == "arbitrary":
        return tuple(tuple(rng.randrange(n) for _ in range(n)) for _ in range(g))
    if cls == "permutation":
        return tuple(perm() for _ in range(g))
    base = perm() if cls == "permutation_abelian" else tuple(rng.randrange(n) for _ in range(n))
    gens = []
    for _ in range(g):
        t = tuple(range(n))
        for _ in range(rng.randint(1, n)):
            t = tuple(base[x] for x in t)
        gens.append(t)
    return tuple(gens)


def random_instance(n: int, g: int, seed: int, cls: str = "arbitrary",
                    profile: str = "metric-cycle") -> Semiflow:
    """Reproducible random semiflow; identical arguments give identical generators."""
    return Semiflow(profile_space(profile, n), random_generators(n, g, seed, cls))


def random_suite(n: int, g: int, seeds: Iterable[int], cls: str = "arbitrary",
                 profile: str = "metric-cycle") -> list:
    c = _normalize_class(cls)
    return [Instance(f"rand/{c}/{profile}/n{n}/g{g}/s{s}", n, random_generators(n, g, s, c),
                     profile) for s in seeds]


@dataclass
class AuditResult:
    theorem_id: str
    title: str
    asserting: bool
    requires_separated: bool
    degenerate_notes: tuple
    instances_total: int = 0
    hypotheses_met: int = 0
    conclusion_held: int = 0
    conclusion_failed: int = 0
    violations: list = field(default_factory=list)
    # hypothesis met on a chain that does not separate points
    out_of_scope_met: int = 0
    out_of_scope_held: int = 0
    out_of_scope_failures: list = field(default_factory=list)
    empirical: dict = field(default_factory=dict)

    @property
    def vacuous(self) -> int:
        return self.instances_total - self.hypotheses_met - self.out_of_scope_met

    @property
    def status(self) -> str:
        if self.violations:
            return "VIOLATED"
        if not self.asserting:
            return "empirical"
        if self.conclusion_held == 0:
            return "hypothesis unsatisfiable at this scale"
        return "ok"

    def merge(self, other: "AuditResult") -> None:
        self.instances_total += other.instances_total
        self.hypotheses_met += other.hypotheses_met
        self.conclusion_held += other.conclusion_held
        self.conclusion_failed += other.conclusion_failed
        self.violations.extend(other.violations)
        self.out_of_scope_met += other.out_of_scope_met
        self.out_of_scope_held += other.out_of_scope_held
        self.out_of_scope_failures.extend(other.out_of_scope_failures)
        for k, v in other.empirical.items():
            self.empirical[k] = self.empirical.get(k, 0) + v

    def to_dict(self) -> dict:
        return {
            "theorem": self.theorem_id,
            "title": self.title,
            "asserting": self.asserting,
            "hypothesis_clauses": [SEPARATION_CLAUSE] if self.requires_separated else [],
            "degenerate_notes": list(self.degenerate_notes),
            "instances_total": self.instances_total,
            "hypotheses_met": self.hypotheses_met,
            "conclusion_held": self.conclusion_held,
            "conclusion_failed": self.conclusion_failed,
            "vacuous": self.vacuous,
            "violations": self.violations,
            "out_of_scope": {
                "hypotheses_met": self.out_of_scope_met,
                "conclusion_held": self.out_of_scope_held,
                "conclusion_failed": self.out_of_scope_met - self.out_of_scope_held,
                "failures": self.out_of_scope_failures,
            },
            "empirical": dict(sorted(self.empirical.items())),
            "status": self.status,
        }


OUT_OF_SCOPE_EXAMPLES = 5


def _empty_results(checks: Sequence[TheoremCheck]) -> list:
    return [AuditResult(c.id, c.title, c.asserting, c.requires_separated, c.degenerate_notes)
            for c in checks]


def _audit_chunk(args) -> list:
    instances, ids = args
    checks = [c for c in theorem_catalog() if c.id in ids]
    results = _empty_results(checks)
    for inst in instances:
        a = InstanceAnalysis(inst)
        for chk, res in zip(checks, results):
            res.instances_total += 1
            try:
                if chk.empirical is not None:
                    for k, v in chk.empirical(a).items():
                        res.empirical[k] = res.empirical.get(k, 0) + int(v)
                if not chk.hypothesis(a):
                    continue
                held, witness = chk.conclusion(a)
            except InconsistencyError as exc:
                held, witness = False, {"inconsistency": str(exc)}
            record = {"instance": inst.to_dict(), "witness": witness}
            if chk.requires_separated and not a.separated:
                res.out_of_scope_met += 1
                res.out_of_scope_held += bool(held)
                if not held and len(res.out_of_scope_failures) < OUT_OF_SCOPE_EXAMPLES:
                    res.out_of_scope_failures.append(record)
                continue
            res.hypotheses_met += 1
            if held:
                res.conclusion_held += 1
            else:
                res.conclusion_failed += 1
                if chk.asserting:
                    res.violations.append(record)
    return results


def run_audit(instances: Sequence[Instance], theorems: Iterable[str] | None = None,
              workers: int = 1, chunk_size: int = 64) -> list:
    """Evaluate the selected catalog entries on every instance.

    Results are ordered by catalog order, and violations within an entry by
    instance order, independently of ``workers``.
    """
    catalog = theorem_catalog()
    known = [c.id for c in catalog]
    ids = known if theorems is None else list(theorems)
    unknown = [t for t in ids if t not in known]
    if unknown:
        raise ValueError(f"unknown theorem ids: {', '.join(unknown)}")
    ids = [t for t in known if t in set(ids)]
    chunks = [(list(instances[i:i + chunk_size]), ids)
              for i in range(0, len(instances), chunk_size)]
    if workers > 1 and len(chunks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_audit_chunk, chunks))
    else:
        parts = [_audit_chunk(c) for c in chunks]
    results = _empty_results([c for c in catalog if c.id in set(ids)])
    for part in parts:
        for res, p in zip(results, part):
            res.merge(p)
    for res in results:
        del res.out_of_scope_failures[OUT_OF_SCOPE_EXAMPLES:]
    return results


def any_violations(results: Sequence[AuditResult]) -> bool:
    return any(r.violations for r in results if r.asserting)


def format_report(results: Sequence[AuditResult], header: dict | None = None) -> str:
    lines = []
    for k, v in (header or {}).items():
        lines.append(f"{k}: {v}")
    if header:
        lines.append("")
    for r in results:
        lines.append(f"[{r.theorem_id}] {r.title}")
        lines.append(f"  status: {r.status}")
        lines.append(f"  instances: {r.instances_total}  hypotheses met: {r.hypotheses_met}  "
                     f"held: {r.conclusion_held}  failed: {r.conclusion_failed}  "
                     f"vacuous: {r.vacuous}")
        if r.requires_separated:
            lines.append(f"  hypothesis clause: {SEPARATION_CLAUSE}")
            lines.append(f"  out of scope (chain does not separate points): met {r.out_of_scope_met}"
                         f"  held {r.out_of_scope_held}"
                         f"  failed {r.out_of_scope_met - r.out_of_scope_held}")
            for f in r.out_of_scope_failures:
                lines.append(f"    e.g. {f['instance']['id']} {f['instance']['generators']} "
                             f"{_dumps(f['witness'])}")
        for note in r.degenerate_notes:
            lines.append(f"  degenerate: {note}")
        for k, v in sorted(r.empirical.items()):
            lines.append(f"  empirical {k}: {v}/{r.instances_total}")
        for v in r.violations:
            lines.append(f"  VIOLATION {v['instance']['id']} {v['instance']['generators']} "
                         f"{_dumps(v['witness'])}")
    total = sum(len(r.violations) for r in results if r.asserting)
    lines.append("")
    lines.append(f"violations: {total}")
    return "\n".join(lines) + "\n"


def report_json(results: Sequence[AuditResult], header: dict | None = None) -> str:
    doc = {"format_version": 1, **(header or {}),
           "results": [r.to_dict() for r in results],
           "violations": sum(len(r.violations) for r in results if r.asserting)}
    return json.dumps(doc, indent=2, default=_plain) + "\n"


def _plain(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, (set, frozenset)):
        return sorted(obj)
    if isinstance(obj, tuple):
        return list(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, default=_plain)
