from __future__ import annotations

import json
import random

from fixtures import GTREE
from psl2skel.io import dumps, load_factorization, skeleton_from_dict, to_dot
from psl2skel.lattice import named_lattice
from psl2skel.skeleton import PointedSkeleton, random_skeleton
from psl2skel.trees import MarkedTree, pseudo_tree


def test_skeleton_json_roundtrip():
    rng = random.Random(1)
    for _ in range(30):
        s = random_skeleton(rng.randint(1, 15), rng)
        d = json.loads(dumps(s.to_dict()))
        assert skeleton_from_dict(d) == s
    p = pseudo_tree(MarkedTree.from_sequence((3, 4, 3, 4)))
    back = skeleton_from_dict(json.loads(dumps(p)))
    assert isinstance(back, PointedSkeleton) and back == p
    core = skeleton_from_dict(json.loads(dumps(GTREE)))
    assert core.skeleton == GTREE.skeleton and core.base == GTREE.base


def test_json_schema_fields():
    d = json.loads(dumps(GTREE))
    assert set(d) >= {"size", "op", "nx", "kind", "labels", "base"}
    assert d["op"][0] is None and d["labels"]["0"] == "triangle"
    lat = json.loads(dumps(named_lattice("D", 4)))
    assert set(lat) == {"rank", "gram", "det", "fingerprint"}


def test_dot_export():
    dot = to_dot(pseudo_tree(MarkedTree.from_sequence((2, 2))))
    assert dot.startswith("graph") and "shape=point" in dot and "p2" in dot
    dot = to_dot(GTREE)
    assert "shape=triangle" in dot and "fillcolor=black" in dot and "shape=circle, width" in dot


def test_load_factorization(tmp_path):
    path = tmp_path / "f.txt"
    path.write_text("group=gamma\nXY;\nxYx\n")
    f = load_factorization(path)
    assert len(f) == 2 and f.group == "gamma"
