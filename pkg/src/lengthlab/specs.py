"""Loading groups, length functions and quotient graphs from JSON or short strings.

Short forms accepted on the command line::

    Z | F2 | free:2 | free_abelian:3                 (groups)
    word | eps_deform:1/2 | additive_eps:1/2 | log  (lengths on --group / Z)
    ggraph:<file-or-fixture> | <file-or-fixture>.json
"""
from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

from .errors import ValidationError
from .ggraph import QuotientGGraph, based_length_function
from .groups import GroupModel, Z
from .length import (
    LengthFunction,
    additive_eps,
    epsilon_deformation,
    log_deformation,
    table_length,
    weighted_word_length,
    word_length,
)

BUNDLED_GRAPHS = ("z_standard", "f2_standard", "z_weighted_graph", "z_spur", "f2_three_edge")


def fixture_path(name: str) -> Path:
    """Resolve a filesystem path, falling back to a bundled fixture name."""
    p = Path(name)
    if p.exists():
        return p
    root = resources.files("lengthlab") / "fixtures"
    for cand in (name, f"{name}.json"):
        f = root / cand
        if f.is_file():
            return Path(str(f))
    raise ValidationError(f"no such file or bundled fixture: {name!r}")


def load_json(name: str):
    try:
        return json.loads(fixture_path(name).read_text())
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{name}: invalid JSON ({exc})") from None


def load_group(spec) -> GroupModel:
    if spec is None:
        return Z
    if isinstance(spec, GroupModel):
        return spec
    if isinstance(spec, dict):
        return GroupModel.from_spec(spec)
    s = str(spec).strip()
    if s == "Z":
        return Z
    if s.startswith("F") and s[1:].isdigit():
        return GroupModel.free(int(s[1:]))
    if s.startswith("Z^") and s[2:].isdigit():
        return GroupModel.free_abelian(int(s[2:]))
    if ":" in s:
        kind, rank = s.split(":", 1)
        if kind in ("free", "free_abelian") and rank.isdigit():
            return GroupModel(kind, rank=int(rank))
    return GroupModel.from_spec(load_json(s))


def load_graph(spec) -> QuotientGGraph:
    if isinstance(spec, QuotientGGraph):
        return spec
    if isinstance(spec, dict):
        return QuotientGGraph.from_spec(spec)
    return QuotientGGraph.from_spec(load_json(str(spec)))


def length_from_dict(spec: dict, group: GroupModel | None = None) -> LengthFunction:
    if "family" not in spec:
        raise ValidationError("length spec needs a 'family'")
    fam = spec["family"]
    model = load_group(spec["group"]) if "group" in spec else (group or Z)
    if fam == "word":
        if "weights" in spec:
            return weighted_word_length(model, spec["weights"])
        return word_length(model)
    if fam == "eps_deform":
        return epsilon_deformation(spec.get("eps", "1/2"))
    if fam == "additive_eps":
        return additive_eps(spec.get("eps", "1/2"))
    if fam == "log":
        base = length_from_dict(spec["base"], model) if "base" in spec else word_length(model)
        return log_deformation(base)
    if fam == "table":
        fallback = length_from_dict(spec["fallback"], model) if "fallback" in spec else word_length(model)
        return table_length(fallback.model, spec.get("table", {}), fallback)
    if fam == "ggraph_based":
        graph = spec.get("graph")
        if graph is None:
            raise ValidationError("ggraph_based spec needs 'graph'")
        return based_length_function(load_graph(graph))
    raise ValidationError(f"unknown length family {fam!r}")


def load_length(spec, group=None) -> LengthFunction:
    model = load_group(group) if group is not None else None
    if isinstance(spec, LengthFunction):
        return spec
    if isinstance(spec, dict):
        return length_from_dict(spec, model)
    s = str(spec).strip()
    head, _, arg = s.partition(":")
    if head == "word" and not arg:
        return word_length(model or Z)
    if head in ("eps_deform", "additive_eps") and not Path(s).exists():
        return length_from_dict({"family": head, "eps": arg or "1/2"}, model)
    if head == "log" and not arg:
        return log_deformation(word_length(model or Z))
    if head in ("ggraph", "ggraph_based"):
        return based_length_function(load_graph(arg))
    data = load_json(s)
    if "family" in data:
        return length_from_dict(data, model)
    if "edges" in data:
        return based_length_function(QuotientGGraph.from_spec(data))
    raise ValidationError(f"cannot interpret length spec {spec!r}")
