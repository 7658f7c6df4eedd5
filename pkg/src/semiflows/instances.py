"""JSON instance files.

::

    {
      "format_version": 1,
      "label": "rotation-8",
      "n": 8,
      "generators": [[1, 2, 3, 4, 5, 6, 7, 0]],
      "space": {"metric": [[0, 1, ...], ...], "thresholds": ["4", "2", "1"]}
    }

``space`` is either ``{"metric": ..., "thresholds": ...}`` with exact
rationals (integers or ``"p/q"`` strings; floats are refused) or
``{"entourages": [[[x, y], ...], ...]}`` listing unordered related pairs per
level, coarsest first, with the diagonal implicit.
"""

from __future__ import annotations

import json
import warnings
from fractions import Fraction

import numpy as np

from .dynamics import Semiflow
from .errors import ValidationError
from .space import UniformSpace, cyclic_metric, from_metric, from_relations

__all__ = [
    "FORMAT_VERSION",
    "InstanceParseError",
    "InstanceFile",
    "parse_instance",
    "load_instance",
    "dump_instance",
    "preset",
    "PRESETS",
]

FORMAT_VERSION = 1


class InstanceParseError(ValueError):
    """The file is not valid JSON or does not have the expected shape."""


class InstanceFile:
    def __init__(self, n: int, generators: list, space: dict, label: str | None = None):
        self.n = n
        self.generators = [list(g) for g in generators]
        self.space = space
        self.label = label

    def to_dict(self) -> dict:
        doc = {"format_version": FORMAT_VERSION}
        if self.label is not None:
            doc["label"] = self.label
        doc.update(n=self.n, generators=self.generators, space=self.space)
        return doc

    def uniform_space(self) -> UniformSpace:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            return _build_space(self.n, self.space)

    def semiflow(self) -> Semiflow:
        return Semiflow(self.uniform_space(), self.generators)


def _rational(value, where: str) -> Fraction:
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise ValidationError(f"{where}: expected an integer or a \"p/q\" string, got {value!r}")
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError):
        raise ValidationError(f"{where}: not a rational: {value!r}") from None


def _build_space(n: int, space: dict) -> UniformSpace:
    if "metric" in space:
        metric = space["metric"]
        if not isinstance(metric, list) or len(metric) != n or any(
                not isinstance(r, list) or len(r) != n for r in metric):
            raise ValidationError(f"space.metric: expected a {n} x {n} matrix")
        d = [[_rational(v, f"space.metric[{i}][{j}]") for j, v in enumerate(row)]
             for i, row in enumerate(metric)]
        ts = space.get("thresholds")
        if not isinstance(ts, list) or not ts:
            raise ValidationError("space.thresholds: expected a non-empty list")
        ts = [_rational(t, f"space.thresholds[{i}]") for i, t in enumerate(ts)]
        try:
            return from_metric(d, ts)
        except ValidationError as exc:
            raise ValidationError(f"space: {exc}") from None
    levels = space["entourages"]
    if not isinstance(levels, list) or not levels:
        raise ValidationError("space.entourages: expected a non-empty list of pair lists")
    for i, pairs in enumerate(levels):
        if not isinstance(pairs, list):
            raise ValidationError(f"space.entourages[{i}]: expected a list of pairs")
        for j, pair in enumerate(pairs):
            if (not isinstance(pair, list) or len(pair) != 2
                    or not all(isinstance(v, int) and not isinstance(v, bool) for v in pair)):
                raise ValidationError(f"space.entourages[{i}][{j}]: expected [x, y], got {pair!r}")
    try:
        return from_relations(n, levels)
    except ValidationError as exc:
        raise ValidationError(f"space.entourages: {exc}") from None


def parse_instance(text: str) -> InstanceFile:
    """Parse and validate; raises InstanceParseError or ValidationError."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceParseError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise InstanceParseError("top level: expected a JSON object")
    version = doc.get("format_version", FORMAT_VERSION)
    if version != FORMAT_VERSION:
        raise InstanceParseError(f"format_version: unsupported version {version!r}")
    for key in ("n", "generators", "space"):
        if key not in doc:
            raise InstanceParseError(f"{key}: missing required field")
    unknown = sorted(set(doc) - {"format_version", "label", "n", "generators", "space"})
    if unknown:
        raise InstanceParseError(f"{unknown[0]}: unknown field")
    n = doc["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ValidationError(f"n: expected a positive integer, got {n!r}")
    gens = doc["generators"]
    if not isinstance(gens, list) or not gens:
        raise ValidationError("generators: expected a non-empty list of maps")
    for i, g in enumerate(gens):
        if not isinstance(g, list) or len(g) != n:
            raise ValidationError(f"generators[{i}]: expected a list of {n} points")
        for x, v in enumerate(g):
            if not isinstance(v, int) or isinstance(v, bool) or not 0 <= v < n:
                raise ValidationError(f"generators[{i}][{x}]: {v!r} is not a point of 0..{n - 1}")
    space = doc["space"]
    if not isinstance(space, dict) or ("metric" in space) == ("entourages" in space):
        raise InstanceParseError("space: expected exactly one of \"metric\" or \"entourages\"")
    label = doc.get("label")
    if label is not None and not isinstance(label, str):
        raise ValidationError("label: expected a string")
    inst = InstanceFile(n, gens, space, label)
    inst.uniform_space()
    return inst


def load_instance(path: str) -> InstanceFile:
    with open(path, encoding="utf-8") as fh:
        return parse_instance(fh.read())


def _rows(rows, indent: str) -> str:
    if not rows:
        return "[]"
    body = ",\n".join(indent + "  " + json.dumps(r, separators=(", ", ": ")) for r in rows)
    return "[\n" + body + "\n" + indent + "]"


def dump_instance(inst: InstanceFile) -> str:
    """JSON with one map, metric row or entourage per line."""
    doc = inst.to_dict()
    head = [f'  "{k}": {json.dumps(doc[k])}' for k in ("format_version", "label", "n") if k in doc]
    space = doc["space"]
    if "metric" in space:
        sp = (f'{{\n    "metric": {_rows(space["metric"], "    ")},\n'
              f'    "thresholds": {json.dumps(space["thresholds"])}\n  }}')
    else:
        sp = f'{{\n    "entourages": {_rows(space["entourages"], "    ")}\n  }}'
    lines = head + [f'  "generators": {_rows(doc["generators"], "  ")}', f'  "space": {sp}']
    return "{\n" + ",\n".join(lines) + "\n}\n"


def _fraction_str(v) -> str:
    v = Fraction(v)
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def metric_space(metric, thresholds) -> dict:
    return {"metric": [[int(v) for v in row] for row in metric],
            "thresholds": [_fraction_str(t) for t in thresholds]}


def entourage_space(U: UniformSpace) -> dict:
    return {"entourages": [[[int(x), int(y)] for x, y in np.argwhere(np.triu(rel, 1))]
                           for rel in U.entourages]}


def halving_thresholds(n: int) -> list:
    """``[2^j, ..., 2, 1]`` with ``2^j`` the largest power of two at most ``n // 2``."""
    t, out = 1, []
    while 2 * t <= max(1, n // 2):
        t *= 2
    while t >= 1:
        out.append(t)
        t //= 2
    return out


def _cycle(n):
    return metric_space(cyclic_metric(n), halving_thresholds(n))


def _preset_rotation(n):
    return InstanceFile(n, [[(x + 1) % n for x in range(n)]], _cycle(n), f"rotation-{n}")


def _preset_doubling(n):
    return InstanceFile(n, [[(2 * x) % n for x in range(n)]], _cycle(n), f"doubling-{n}")


def _preset_identity(n):
    return InstanceFile(n, [list(range(n))], _cycle(n), f"identity-{n}")


def _preset_two_constants(n):
    return InstanceFile(2, [[0, 0], [1, 1]], {"entourages": [[[0, 1]]]}, "two-constants")


def _preset_id_c0(n):
    return InstanceFile(2, [[0, 0]], {"entourages": [[[0, 1]], []]}, "id-c0")


PRESETS = {
    "rotation": _preset_rotation,
    "doubling": _preset_doubling,
    "identity": _preset_identity,
    "two-constants": _preset_two_constants,
    "id-c0": _preset_id_c0,
}


def preset(name: str, n: int = 8) -> InstanceFile:
    """Named instance; ``two-constants`` and ``id-c0`` always live on 2 points."""
    try:
        return PRESETS[name](n)
    except KeyError:
        raise ValueError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}") from None
