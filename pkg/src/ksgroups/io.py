"""JSON formats: cayley-v1 and perm-v1 groups, tower-v1 towers."""

from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import Any

from .errors import FormatError
from .groups import DEFAULT_ORDER_BUDGET, FiniteGroup, build_group_from_permutations, build_group_from_table
from .tower import ProfiniteTower, tower_from_maps


def group_from_json(obj: dict[str, Any], budget: int = DEFAULT_ORDER_BUDGET) -> FiniteGroup:
    fmt = obj.get("format")
    label = obj.get("label")
    if fmt == "cayley-v1":
        try:
            order, table = int(obj["order"]), obj["table"]
        except (KeyError, TypeError, ValueError) as exc:
            raise FormatError(f"cayley-v1 group is missing a field: {exc}") from None
        return build_group_from_table(order, table, label)
    if fmt == "perm-v1":
        try:
            degree, gens = int(obj["degree"]), obj["generators"]
        except (KeyError, TypeError, ValueError) as exc:
            raise FormatError(f"perm-v1 group is missing a field: {exc}") from None
        return build_group_from_permutations(degree, gens, label, budget=budget)
    raise FormatError(f"unknown group format {fmt!r}")


def group_to_json(G: FiniteGroup) -> dict[str, Any]:
    obj: dict[str, Any] = {"format": "cayley-v1", "order": G.order, "table": G.table.tolist()}
    if G.label:
        obj["label"] = G.label
    return obj


def tower_from_json(obj: dict[str, Any], budget: int = DEFAULT_ORDER_BUDGET) -> ProfiniteTower:
    """Parse tower-v1.  Maps are not checked here; run ``validate_tower`` on the result."""
    if obj.get("format") != "tower-v1":
        raise FormatError(f"expected format tower-v1, got {obj.get('format')!r}")
    levels = [group_from_json(g, budget) for g in obj.get("levels", [])]
    maps = obj.get("maps", [])
    if not levels:
        raise FormatError("tower has no levels")
    if len(maps) != len(levels) - 1:
        raise FormatError(f"tower with {len(levels)} levels needs {len(levels) - 1} maps, got {len(maps)}")
    for k, m in enumerate(maps):
        if len(m) != levels[k + 1].order:
            raise FormatError(f"maps[{k}] has length {len(m)}, expected {levels[k + 1].order}")
    return tower_from_maps(levels, maps, check=False)


def tower_to_json(t: ProfiniteTower) -> dict[str, Any]:
    return {
        "format": "tower-v1",
        "levels": [group_to_json(G) for G in t.levels],
        "maps": [f.image_of.tolist() for f in t.connecting],
    }


def load_json(path: str | Path) -> dict[str, Any]:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON ({exc})") from None


def digest(obj: Any) -> str:
    """sha256 of the canonical JSON encoding."""
    data = json.dumps(obj, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(data).hexdigest()
