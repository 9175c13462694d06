"""JSON and DOT serialization for skeletons, factorizations and lattices."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .factorization import Factorization
from .lattice import IntLattice
from .skeleton import (TRIANGLE, CoreGraph, PointedSkeleton, Skeleton,
                       SkeletonError, THREE_ONE)

__all__ = ["skeleton_from_dict", "to_jsonable", "dumps", "to_dot",
           "load_factorization", "load_skeleton"]


def skeleton_from_dict(d: dict) -> Skeleton | PointedSkeleton:
    """Inverse of ``to_dict``: null op slots become TRIANGLE."""
    try:
        op = [TRIANGLE if o is None else int(o) for o in d["op"]]
        nx = [int(x) for x in d["nx"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise SkeletonError(f"malformed skeleton record: {exc}") from None
    if "size" in d and d["size"] != len(op):
        raise SkeletonError(f"size {d['size']} does not match {len(op)} op entries")
    s = Skeleton(tuple(op), tuple(nx), d.get("kind", THREE_ONE))
    if d.get("base") is None:
        return s
    cls = CoreGraph if not s.is_complete() else PointedSkeleton
    return cls(s, int(d["base"]))


def to_jsonable(obj: Any) -> Any:
    if hasattr(obj, "as_dict"):
        return to_jsonable(obj.as_dict())
    if hasattr(obj, "to_dict"):
        return to_jsonable(obj.to_dict())
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(x) for x in obj]
    if isinstance(obj, (str, int, float, bool)) or obj is None:
        return obj
    return str(obj)


def dumps(obj: Any, indent: int | None = 2) -> str:
    return json.dumps(to_jsonable(obj), indent=indent, sort_keys=True)


def to_dot(s: Skeleton | PointedSkeleton, name: str = "skeleton") -> str:
    """Graphviz rendering.

    Each nx-cycle of length 3 is a filled point; ports p0, p1, p2 follow the
    nx order.  nx-fixed elements are BLACK monovalent vertices (filled),
    op-fixed ones WHITE (open circles) and open slots TRIANGLE nodes.
    """
    base = s.base if isinstance(s, PointedSkeleton) else None
    sk = s.skeleton if isinstance(s, PointedSkeleton) else s
    node_of: dict[int, str] = {}
    port: dict[int, str] = {}
    lines = [f"graph {name} {{", "  node [label=\"\"];"]
    for orb in sk.vertices():
        if len(orb) == 3:
            v = f"v{orb[0]}"
            lines.append(f"  {v} [shape=point, width=0.12];")
            for j, e in enumerate(orb):
                node_of[e], port[e] = v, f"p{j}"
        else:
            (e,) = orb
            v = f"b{e}"
            lines.append(f"  {v} [shape=circle, style=filled, fillcolor=black, width=0.15];")
            node_of[e], port[e] = v, "p0"
    done = set()
    for e in range(sk.size):
        if e in done:
            continue
        o = sk.op[e]
        attrs = f"taillabel=\"{port[e]}\""
        if e == base:
            attrs += ", color=red"
        if o == TRIANGLE:
            lines.append(f"  t{e} [shape=triangle, width=0.2];")
            lines.append(f"  {node_of[e]} -- t{e} [{attrs}];")
        elif o == e:
            lines.append(f"  w{e} [shape=circle, width=0.15];")
            lines.append(f"  {node_of[e]} -- w{e} [{attrs}];")
        else:
            lines.append(f"  {node_of[e]} -- {node_of[o]} [{attrs}, headlabel=\"{port[o]}\"];")
            done.add(o)
        done.add(e)
    lines.append("}")
    return "\n".join(lines) + "\n"


def load_factorization(path: str | Path) -> Factorization:
    text = Path(path).read_text()
    try:
        return Factorization.parse(text)
    except ValueError as exc:
        raise ValueError(f"{path}: {exc}") from None


def load_skeleton(path: str | Path) -> Skeleton | PointedSkeleton:
    return skeleton_from_dict(json.loads(Path(path).read_text()))


def lattice_from_dict(d: dict) -> IntLattice:
    return IntLattice(d["gram"])
