"""Declarative problem files (JSON) and their validation."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional

from toricqd.generators import EulerSpec, TwistSpec
from toricqd.operators import DiffOperator, OperatorError, operator_from_terms
from toricqd.toric.bundle import BundleSpec, ProjectiveBundle
from toricqd.toric.fan import Fan, FanError
from toricqd.toric.variety import ToricError, ToricVariety


class ProblemError(ValueError):
    """Bad input; the message names the offending field."""


@dataclass
class Bounds:
    ample_degree: int = 3
    fiber: int = 3
    h_guard: Optional[int] = None


@dataclass
class Problem:
    name: str
    base: ToricVariety
    euler: EulerSpec
    bounds: Bounds
    bundle_spec: Optional[BundleSpec] = None
    operators: Dict[str, DiffOperator] = field(default_factory=dict)
    operator_targets: Dict[str, str] = field(default_factory=dict)
    gw_classes: List[tuple] = field(default_factory=list)
    twist_keys: List[tuple] = field(default_factory=list)
    _bundle: Optional[ProjectiveBundle] = None
    _twist: Optional[TwistSpec] = None

    @property
    def bundle(self) -> Optional[ProjectiveBundle]:
        if self.bundle_spec is not None and self._bundle is None:
            self._bundle = ProjectiveBundle(self.bundle_spec, label=self.name)
        return self._bundle

    @property
    def twist(self) -> Optional[TwistSpec]:
        if self.bundle_spec is not None and self._twist is None:
            self._twist = TwistSpec(self.bundle_spec)
        return self._twist

    def base_qnames(self) -> List[str]:
        k = self.base.picard_rank
        if self.bundle_spec is None:
            return ["q"] if k == 1 else [f"q{j + 1}" for j in range(k)]
        return ["q2"] if k == 1 else [f"q2_{j + 1}" for j in range(k)]

    def bundle_qnames(self) -> List[str]:
        return self.base_qnames() + ["q1"]


def _field(data: dict, name: str, kind, required: bool = True, default=None):
    if name not in data:
        if required:
            raise ProblemError(f"missing field '{name}'")
        return default
    value = data[name]
    if not isinstance(value, kind):
        raise ProblemError(f"field '{name}' has the wrong type ({type(value).__name__})")
    return value


def _int_matrix(value, name: str) -> List[List[int]]:
    if not isinstance(value, list) or not all(isinstance(r, list) for r in value):
        raise ProblemError(f"field '{name}' must be a list of integer lists")
    for i, row in enumerate(value):
        for j, x in enumerate(row):
            if not isinstance(x, int) or isinstance(x, bool):
                raise ProblemError(f"field '{name}[{i}][{j}]' is not an integer")
    return value


def _int(value, name: str, minimum: int = 0) -> int:
    if not isinstance(value, int) or isinstance(value, bool) or value < minimum:
        raise ProblemError(f"field '{name}' must be an integer >= {minimum}")
    return value


def parse_problem(data: dict, name: str = "problem") -> Problem:
    if not isinstance(data, dict):
        raise ProblemError("top level must be an object")
    name = str(data.get("name", name))
    rays = _int_matrix(_field(data, "rays", list), "rays")
    cones = _int_matrix(_field(data, "cones", list), "cones")
    rank = data.get("lattice_rank")
    if rank is not None:
        _int(rank, "lattice_rank")
        if any(len(r) != rank for r in rays):
            raise ProblemError(f"every ray needs lattice_rank = {rank} entries")
    for c, cone in enumerate(cones):
        for i in cone:
            if not 0 <= i < len(rays):
                raise ProblemError(f"field 'cones[{c}]' refers to ray {i}, which does not exist")
    nef = data.get("nef_basis")
    if nef is not None:
        nef = _int_matrix(nef, "nef_basis")
    names = data.get("names")
    try:
        fan = Fan(rays, cones)
        base = ToricVariety(fan, nef_basis=nef, names=names, label=name)
    except (FanError, ToricError, ValueError) as exc:
        raise ProblemError(f"fan: {exc}") from None
    k = base.picard_rank

    euler_block = _field(data, "euler", dict, required=False, default={})
    classes = _int_matrix(euler_block.get("classes", []), "euler.classes")
    for a, c in enumerate(classes):
        if len(c) != k:
            raise ProblemError(f"field 'euler.classes[{a}]' needs {k} entries")
    euler = EulerSpec(classes)

    bounds_block = _field(data, "bounds", dict, required=False, default={})
    bounds = Bounds(
        ample_degree=_int(bounds_block.get("ample_degree", 3), "bounds.ample_degree"),
        fiber=_int(bounds_block.get("fiber", 3), "bounds.fiber"),
        h_guard=None if bounds_block.get("h_guard") is None else _int(bounds_block["h_guard"], "bounds.h_guard", 1),
    )

    spec = None
    if "bundle" in data:
        block = _field(data, "bundle", dict)
        matrix = _int_matrix(_field(block, "matrix", list), "bundle.matrix")
        try:
            spec = BundleSpec(base, matrix)
        except ValueError as exc:
            raise ProblemError(f"bundle.matrix: {exc}") from None

    problem = Problem(name, base, euler, bounds, spec)

    for n, op in enumerate(_field(data, "operators", list, required=False, default=[])):
        if not isinstance(op, dict):
            raise ProblemError(f"field 'operators[{n}]' must be an object")
        target = op.get("on", "base")
        if target not in ("base", "bundle"):
            raise ProblemError(f"field 'operators[{n}].on' must be 'base' or 'bundle'")
        if target == "bundle" and spec is None:
            raise ProblemError(f"field 'operators[{n}]' acts on a bundle but none is given")
        nvars = k + (target == "bundle")
        try:
            parsed = operator_from_terms(_field(op, "terms", list), nvars, bundle=target == "bundle")
        except OperatorError as exc:
            raise ProblemError(f"field 'operators[{n}]': {exc}") from None
        label = str(op.get("name", f"op{n}"))
        problem.operators[label] = parsed
        problem.operator_targets[label] = target

    for n, beta in enumerate(data.get("gw", [])):
        if not isinstance(beta, list) or len(beta) != k:
            raise ProblemError(f"field 'gw[{n}]' needs {k} integers")
        problem.gw_classes.append(tuple(_int(x, f"gw[{n}]", -10**9) for x in beta))
    for n, key in enumerate(data.get("twist", [])):
        if spec is None:
            raise ProblemError("field 'twist' needs a bundle block")
        if not isinstance(key, list) or len(key) != k + 1:
            raise ProblemError(f"field 'twist[{n}]' needs [nu, d...] with {k + 1} integers")
        problem.twist_keys.append(tuple(_int(x, f"twist[{n}]", -10**9) for x in key))
    return problem


def load_problem(path) -> Problem:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ProblemError(f"cannot read {path}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return parse_problem(data, name=path.stem)
