"""Command line interface: ``psl2skel <command> ...``.

Exit codes: 0 success, 2 validation failure, 3 orbit cap exceeded (the
partial report is still printed).
"""

from __future__ import annotations

import argparse
import random
import sys
import time
from typing import Any, Sequence

from . import io
from .factorization import (B3, GAMMA, SL2_TAG, TAGS, CapExceeded, Factorization,
                            TagMismatch, abelianization, compare, from_tree,
                            hurwitz_orbit, infinity_class, monodromy_at_infinity,
                            monodromy_group, pi1_presentation, reduce_mod, core_code)
from .group import Gamma, NotSimple
from .lattice import (Indefinite, RankTooLarge, colored_lattice, isometric,
                      named_lattice, transcendental_lattice)
from .skeleton import (PointedSkeleton, Skeleton, SkeletonError, automorphisms,
                       canonical_code, fiber_product, fold_subgroup, index,
                       is_isomorphic, is_xy_generated, random_skeleton,
                       stabilizer_basis)
from .trees import (GeneralizedTree, NoTriangles, counts, enumerate_classes,
                    generalized_pseudo_tree, infinity_distances, parse_tree_literal,
                    pseudo_tree, tree_class)

EXIT_OK, EXIT_INVALID, EXIT_CAP = 0, 2, 3

VALIDATION_ERRORS = (ValueError, SkeletonError, NotSimple, TagMismatch, Indefinite,
                     RankTooLarge, NoTriangles, KeyError)


class Report:
    """Command echo, payload and timing; printed as JSON or as plain lines."""

    def __init__(self, command: str, args: argparse.Namespace):
        self.command = command
        self.echo = {k: v for k, v in vars(args).items() if k not in ("func",)}
        self.payload: dict[str, Any] = {}
        self.text: list[str] = []
        self.started = time.perf_counter()

    def emit(self, as_json: bool) -> None:
        elapsed = round(time.perf_counter() - self.started, 3)
        if as_json:
            print(io.dumps({"command": self.command, "args": self.echo,
                            "result": self.payload, "seconds": elapsed}))
        else:
            for line in self.text:
                print(line)


# ---------------------------------------------------------------------------
# commands

def cmd_counts(args, rep: Report) -> int:
    rows = []
    rep.text.append(f"{'k':>3} {'C(k)':>12} {'T1':>10} {'T2':>6} {'T3':>6} {'T':>10} {'T~':>12}")
    for k in range(args.max_k + 1):
        c = counts(k, jobs=args.jobs)
        rows.append(c.as_dict())
        rep.text.append(f"{k:>3} {c.catalan:>12} {c.T1:>10} {c.T2:>6} {c.T3:>6} {c.T:>10} {c.T_tilde:>12}")
    rep.payload = {"rows": rows}
    return EXIT_OK


def cmd_trees(args, rep: Report) -> int:
    classes = enumerate_classes(args.k)
    records = [{"sequence": str(c), "bits": c.tree().bits, "aut": c.aut_order} for c in classes]
    if args.out:
        with open(args.out, "w") as fh:
            for r in records:
                fh.write(io.dumps(r, indent=None) + "\n")
        rep.text.append(f"wrote {len(records)} classes to {args.out}")
    else:
        rep.text += [f"{r['sequence']}  bits={r['bits']}  |Aut|={r['aut']}" for r in records]
    rep.payload = {"k": args.k, "count": len(records), "classes": records if not args.out else args.out}
    return EXIT_OK


def _tree_factorization(args) -> tuple:
    tree, labels = parse_tree_literal(args.tree)
    return tree, labels, from_tree(tree, args.shift, args.group)


def _invariants(f: Factorization) -> dict:
    core = monodromy_group(f)
    idx = core.index()
    out = {"m_infty": str(monodromy_at_infinity(f)) if f.group != SL2_TAG
           else io.to_jsonable(monodromy_at_infinity(f)),
           "m_infty_class": infinity_class(f),
           "group_index": idx if idx is not None else "infinite",
           "core_code": core_code(core)}
    if f.is_simple():
        out["abelianization"] = abelianization(pi1_presentation(f.lift(B3)))
    return out


def cmd_tree(args, rep: Report) -> int:
    tree, labels, f = _tree_factorization(args)
    rep.payload = {"tree": str(tree), "bits": tree.bits, "shift": args.shift, "group": args.group}
    if args.what == "factorization":
        rep.payload["entries"] = [io.to_jsonable(m) if f.group == SL2_TAG else str(m) for m in f.entries]
        rep.text.append(f.to_text().rstrip())
    elif args.what == "skeleton":
        p = generalized_pseudo_tree(GeneralizedTree(tree, labels)) if labels else pseudo_tree(tree)
        rep.payload["skeleton"] = p.to_dict()
        rep.text.append(io.to_dot(p) if args.dot else io.dumps(p.to_dict()))
    elif args.what == "lattice":
        lat = transcendental_lattice(f.lift(SL2_TAG))
        rep.payload["lattice"] = lat.to_dict()
        rep.text.append(io.dumps(lat.to_dict()))
    else:
        inv = _invariants(f)
        p = pseudo_tree(tree)
        inv.update({"skeleton_index": index(p), "aut": tree_class(tree).aut_order,
                    "free_rank": len(stabilizer_basis(p)), "sequence": str(tree)})
        rep.payload["invariants"] = inv
        rep.text += [f"{k}: {v}" for k, v in inv.items()]
    return EXIT_OK


def _orbit_summary(f: Factorization, n: int, args) -> dict:
    r = hurwitz_orbit(reduce_mod(f, n), n, cap=args.cap, jobs=args.jobs, weak=args.weak)
    return {"size": r.size, "complete": r.complete, "fingerprint": r.fingerprint, "least": r.minimum}


def cmd_compare(args, rep: Report) -> int:
    f1, f2 = io.load_factorization(args.file_a), io.load_factorization(args.file_b)
    r = compare(f1, f2, lattices=args.lattices)
    rep.payload = r.as_dict()
    code = EXIT_OK
    if args.mod:
        g1 = f1 if f1.group != GAMMA else f1.lift(B3)
        g2 = f2 if f2.group != GAMMA else f2.lift(B3)
        o1, o2 = _orbit_summary(g1, args.mod, args), _orbit_summary(g2, args.mod, args)
        both = o1["complete"] and o2["complete"]
        rep.payload["orbits"] = {"a": o1, "b": o2, "modulus": args.mod,
                                 "same_orbit": (o1["least"] == o2["least"]) if both else None}
        if not both:
            code = EXIT_CAP
    rep.text += [f"{k}: {v}" for k, v in rep.payload.items()]
    return code


def cmd_fold(args, rep: Report) -> int:
    words = [Gamma.parse(w) for w in args.words]
    core = fold_subgroup(words)
    compact = core.compact()
    idx = core.index()
    payload = {"size": core.size, "labels": {"white": len(compact.white()), "black": len(compact.black()),
                                             "triangle": len(compact.triangles())},
               "index": idx if idx is not None else "infinite",
               "xy_generated": is_xy_generated(core), "code": canonical_code(compact)}
    if compact.triangles():
        try:
            payload["infinity_distances"] = list(infinity_distances(compact))
        except SkeletonError as exc:
            payload["infinity_distances"] = str(exc)
    rep.payload = payload
    rep.text += [f"{k}: {v}" for k, v in payload.items()]
    if args.dot:
        rep.text.append(io.to_dot(core))
        rep.payload["dot"] = io.to_dot(core)
    return EXIT_OK


def cmd_orbit(args, rep: Report) -> int:
    f = io.load_factorization(args.file)
    if f.group == GAMMA:
        f = f.lift(B3)
    rep.payload = _orbit_summary(f, args.mod, args)
    rep.text += [f"{k}: {v}" for k, v in rep.payload.items()]
    return EXIT_OK if rep.payload["complete"] else EXIT_CAP


def _plain(s: Skeleton | PointedSkeleton) -> Skeleton:
    return s.skeleton if isinstance(s, PointedSkeleton) else s


def cmd_skeleton(args, rep: Report) -> int:
    if args.action == "random":
        rng = random.Random(args.seed)
        s = random_skeleton(args.size, rng)
        rep.payload = s.to_dict()
        rep.text.append(io.dumps(s.to_dict()))
        return EXIT_OK
    a = io.load_skeleton(args.files[0])
    if args.action == "aut":
        auts = automorphisms(_plain(a))
        rep.payload = {"order": len(auts)}
    elif args.action == "dot":
        rep.payload = {"dot": io.to_dot(a)}
        rep.text.append(rep.payload["dot"])
        return EXIT_OK
    else:
        if len(args.files) != 2:
            raise ValueError(f"skeleton {args.action} needs two files")
        b = io.load_skeleton(args.files[1])
        if args.action == "iso":
            rep.payload = {"isomorphic": is_isomorphic(_plain(a), _plain(b))}
        else:
            pa = a if isinstance(a, PointedSkeleton) else PointedSkeleton(a, 0)
            pb = b if isinstance(b, PointedSkeleton) else PointedSkeleton(b, 0)
            prod = fiber_product(pa, pb)
            rep.payload = {"size": prod.size, "product": prod.to_dict()}
    rep.text += [f"{k}: {v}" for k, v in rep.payload.items()]
    return EXIT_OK


def cmd_lattice(args, rep: Report) -> int:
    if args.named:
        fam, k = args.named[0], int(args.named[1:])
        lat = named_lattice(fam, k)
    else:
        if args.tree:
            f = from_tree(parse_tree_literal(args.tree)[0], args.shift, GAMMA)
        elif args.file:
            f = io.load_factorization(args.file)
        else:
            raise ValueError("give a factorization file, --tree or --named")
        if args.coloring:
            signs = [1 if c == "+" else -1 for c in args.coloring]
            lat = colored_lattice(f.project().entries, signs)
        else:
            lat = transcendental_lattice(f if f.group == SL2_TAG else f.lift(SL2_TAG))
    rep.payload = lat.to_dict()
    if args.compare:
        ref = named_lattice(args.compare[0], int(args.compare[1:]))
        rep.payload["isometric_to_" + args.compare] = isometric(lat, ref)
    rep.text.append(io.dumps(rep.payload))
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="psl2skel",
                                     description="Skeletons, trees and braid monodromy over PSL(2,Z).")
    parser.add_argument("--json", action="store_true", help="print a JSON report")
    parser.add_argument("--seed", type=int, default=0, help="seed for randomized subcommands")
    parser.add_argument("--jobs", type=int, default=1, help="worker processes")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("counts", help="the table of T(k) and pointed counts")
    p.add_argument("--max-k", type=int, default=10)
    p.set_defaults(func=cmd_counts)

    p = sub.add_parser("trees", help="list admissible tree classes with k nodes")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--out", help="write one JSON record per line to this file")
    p.set_defaults(func=cmd_trees)

    p = sub.add_parser("tree", help="artifacts of one admissible tree")
    p.add_argument("--tree", required=True, help="distance sequence 3,4,4,4,3,6 or b:<bits>[!labels]")
    p.add_argument("--shift", type=int, default=0)
    p.add_argument("--group", choices=TAGS, default=GAMMA)
    p.add_argument("--dot", action="store_true")
    p.add_argument("what", choices=("factorization", "skeleton", "lattice", "invariants"))
    p.set_defaults(func=cmd_tree)

    p = sub.add_parser("compare", help="compare two factorization files")
    p.add_argument("file_a")
    p.add_argument("file_b")
    p.add_argument("--mod", type=int, help="also compare Hurwitz orbits modulo n")
    p.add_argument("--weak", action="store_true", help="orbits up to global conjugation")
    p.add_argument("--lattices", action="store_true", help="compare coloring fingerprints")
    p.add_argument("--cap", type=int)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("fold", help="core of the subgroup generated by words")
    p.add_argument("--words", nargs="+", required=True)
    p.add_argument("--dot", action="store_true")
    p.set_defaults(func=cmd_fold)

    p = sub.add_parser("orbit", help="Hurwitz orbit of a factorization modulo n")
    p.add_argument("file")
    p.add_argument("--mod", type=int, required=True)
    p.add_argument("--weak", action="store_true")
    p.add_argument("--cap", type=int)
    p.set_defaults(func=cmd_orbit)

    p = sub.add_parser("skeleton", help="skeleton utilities on JSON files")
    p.add_argument("action", choices=("iso", "aut", "product", "dot", "random"))
    p.add_argument("files", nargs="*")
    p.add_argument("--size", type=int, default=12, help="size for 'random'")
    p.set_defaults(func=cmd_skeleton)

    p = sub.add_parser("lattice", help="transcendental lattice of a factorization")
    p.add_argument("file", nargs="?")
    p.add_argument("--tree")
    p.add_argument("--shift", type=int, default=0)
    p.add_argument("--coloring", help="string of + and -, one per entry")
    p.add_argument("--named", help="a root lattice such as D4 or A3")
    p.add_argument("--compare", help="report isometry with a root lattice such as D4")
    p.set_defaults(func=cmd_lattice)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    rep = Report(args.command, args)
    try:
        code = args.func(args, rep)
    except CapExceeded as exc:
        rep.payload["error"] = str(exc)
        rep.emit(args.json)
        return EXIT_CAP
    except VALIDATION_ERRORS as exc:
        if args.json:
            print(io.dumps({"command": args.command, "error": str(exc)}))
        print(f"psl2skel {args.command}: {exc}", file=sys.stderr)
        return EXIT_INVALID
    rep.emit(args.json)
    return code


if __name__ == "__main__":
    sys.exit(main())
