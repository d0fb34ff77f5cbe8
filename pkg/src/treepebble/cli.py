"""Command-line front end: ``treepebble {pi,pi-t,solve,verify,random}``.

Output is one JSON document on stdout with sorted keys. Integers that do not
fit a signed 64-bit word are written as decimal strings. Exit codes: 0 ok,
1 property violation, 2 parse error, 3 empty target, 4 search budget.
"""
from __future__ import annotations

import argparse
import json
import os
import random
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .errors import BudgetExceeded, CapExceeded, EmptyTarget, InvalidVertex, ParseError, TreeError
from .oracle import Caps, brute_pi, check_support_theorem, load_catalog
from .partition import chung_configuration, chung_sizes, max_path_partition, pi_single_target
from .solver import Budget, Solver, Status
from .target import CANDIDATE_MODES, strong_target_slack, tree_pi
from .tree import (
    PebblingFn,
    Tree,
    build_tree,
    format_edge_list,
    parse_edge_list,
    parse_pebbling_spec,
)

EXIT_OK, EXIT_VIOLATION, EXIT_PARSE, EXIT_EMPTY, EXIT_BUDGET = 0, 1, 2, 3, 4
INT_LIMIT = 1 << 63


def jsonable(x):
    """Replace big integers by decimal strings, recursively."""
    if isinstance(x, bool) or x is None:
        return x
    if isinstance(x, int):
        return x if -INT_LIMIT <= x < INT_LIMIT else str(x)
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    return x


def dumps(doc) -> str:
    return json.dumps(jsonable(doc), sort_keys=True)


def default_budget() -> Budget:
    raw = os.environ.get("TREEPEBBLE_MAX_STATES")
    if raw is None:
        return Budget()
    try:
        return Budget(max_states=int(raw))
    except ValueError:
        raise ParseError(f"TREEPEBBLE_MAX_STATES must be an integer, got {raw!r}") from None


# -- instances --------------------------------------------------------------

@dataclass
class Instance:
    tree: Tree
    target: PebblingFn
    config: PebblingFn | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.target.n != self.tree.n or (self.config is not None and self.config.n != self.tree.n):
            raise InvalidVertex("instance functions do not match the tree's vertex count")

    def to_json(self) -> str:
        t = self.tree
        doc = {
            "tree": format_edge_list(t),
            "target": {t.name(v): k for v, k in self.target.to_dict().items()},
            "meta": self.meta,
        }
        if self.config is not None:
            doc["config"] = {t.name(v): k for v, k in self.config.to_dict().items()}
        return dumps(doc)

    @classmethod
    def from_json(cls, text: str) -> "Instance":
        try:
            doc = json.loads(text)
            t = parse_edge_list(doc["tree"])

            def fn(m):
                return PebblingFn.from_dict(t.n, {t.vertex(k): int(v) for k, v in m.items()})

            cfg = fn(doc["config"]) if "config" in doc else None
            return cls(t, fn(doc["target"]), cfg, doc.get("meta", {}))
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, (TreeError, ParseError)):
                raise
            raise ParseError(f"bad instance document: {exc}") from None


def random_tree(rng: random.Random, n: int) -> Tree:
    """Random recursive tree: vertex i attaches to a uniform j < i."""
    return build_tree([(rng.randrange(i), i) for i in range(1, n)], n=n)


def random_instance(seed: int, n: int, target_size: int) -> Instance:
    rng = random.Random(seed)
    t = random_tree(rng, n)
    counts = [0] * n
    for _ in range(target_size):
        counts[rng.randrange(n)] += 1
    meta = {"seed": seed, "generator": "random-recursive-tree", "n": n, "target_size": target_size}
    return Instance(t, PebblingFn(counts), None, meta)


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None


def _load(path: str) -> tuple[Tree, Instance | None]:
    text = _read_text(path)
    if text.lstrip().startswith("{"):
        inst = Instance.from_json(text)
        return inst.tree, inst
    return parse_edge_list(text), None


def _fn_json(t: Tree, f: PebblingFn) -> dict:
    return {t.name(v): k for v, k in f.to_dict().items()}


def _target(t: Tree, spec: str | None, inst: Instance | None) -> PebblingFn:
    if spec is None:
        if inst is None:
            raise ParseError("no target given")
        return inst.target
    return parse_pebbling_spec(t, spec)


# -- commands ---------------------------------------------------------------

def cmd_pi(args) -> tuple[dict, int]:
    t, inst = _load(args.tree)
    d = _target(t, args.target, inst)
    if d.size == 0:
        print("warning: empty target, pi(T, 0) = 0", file=sys.stderr)
        return {"pi": 0}, EXIT_EMPTY
    res = tree_pi(t, d, candidates=args.candidates, dead_weight=args.inject_fault != "dead-weight")
    doc = {
        "pi": res.pi,
        "witness": _fn_json(t, res.witness),
        "superstack_leaf": t.name(res.superstack_leaf),
        "candidates": [
            {"hull_vertex": t.name(c.hull_vertex), "leaf": t.name(c.leaf), "height": c.height,
             "alpha": c.alpha, "size": c.size}
            for c in res.candidates
        ],
    }
    code = EXIT_OK
    if args.check:
        s = Solver(t, d, default_budget())
        v = s.check(res.witness, witness=False)
        if v.status is Status.BUDGET_EXCEEDED:
            raise BudgetExceeded(v.states_explored)
        doc["check"] = {"witness_unsolvable": v.unsolvable, "states_explored": v.states_explored}
        if not v.unsolvable:
            code = EXIT_VIOLATION
    return doc, code


def cmd_pi_t(args) -> tuple[dict, int]:
    t, _ = _load(args.tree)
    if args.t < 1:
        raise ParseError("t must be a positive integer")
    sizes = chung_sizes(t, args.t)
    best = max(sizes)
    root = sizes.index(best)
    doc = {
        "pi_t": best + 1,
        "t": args.t,
        "argmax_root": t.name(root),
        "per_root": {t.name(r): s + 1 for r, s in enumerate(sizes)},
    }
    return doc, EXIT_OK


def cmd_solve(args) -> tuple[dict, int]:
    t, inst = _load(args.tree)
    if args.config is None:
        if inst is None or inst.config is None:
            raise ParseError("no configuration given")
        c = inst.config
    else:
        c = parse_pebbling_spec(t, args.config)
    d = _target(t, args.target, inst)
    if d.size == 0:
        print("warning: empty target is trivially solvable", file=sys.stderr)
        return {"solvable": True, "moves": [], "states_explored": 0}, EXIT_EMPTY
    budget = default_budget()
    if args.max_states is not None:
        budget = Budget(max_states=args.max_states)
    v = Solver(t, d, budget).check(c, witness=not args.no_moves)
    doc = {"states_explored": v.states_explored}
    if v.status is Status.BUDGET_EXCEEDED:
        doc.update(solvable=None, budget_exceeded=True)
        return doc, EXIT_BUDGET
    doc["solvable"] = v.solvable
    if v.solvable and v.solution is not None:
        doc["moves"] = [{"from": t.name(a), "to": t.name(b)} for a, b in v.solution.moves]
    return doc, EXIT_OK


PENDANT = build_tree([(0, 1), (1, 2), (2, 3), (3, 4), (2, 5)], names=["v1", "v2", "v3", "v4", "v5", "u"])


class _Tally:
    def __init__(self):
        self.props: dict[str, dict] = {}

    def record(self, name, ok, detail=None):
        p = self.props.setdefault(name, {"checked": 0, "failed": 0, "failures": []})
        p["checked"] += 1
        if not ok:
            p["failed"] += 1
            if len(p["failures"]) < 5 and detail is not None:
                p["failures"].append(detail)

    @property
    def ok(self):
        return all(p["failed"] == 0 for p in self.props.values())


def cmd_verify(args) -> tuple[dict, int]:
    rng = random.Random(args.seed)
    if args.caps < 1:
        raise ParseError("caps must be positive")
    # --caps bounds the random trees; the oracle must also cover the pendant
    caps = Caps(max_n=max(args.caps, PENDANT.n))
    dead = args.inject_fault != "dead-weight"
    tally = _Tally()

    def describe(t, d):
        return {"tree": [list(e) for e in t.edges], "n": t.n, "target": d.to_dict()}

    def agreement(t, d):
        got = tree_pi(t, d, dead_weight=dead)
        want = brute_pi(t, d, args.support, caps).pi
        tally.record("oracle_agreement", got.pi == want, {**describe(t, d), "formula": got.pi, "oracle": want})
        s = Solver(t, d)
        w = got.witness
        maximal = s.check(w, witness=False).unsolvable and all(
            s.check(w.plus(v), witness=False).solvable for v in range(t.n))
        tally.record("witness_maximal", maximal, describe(t, d))

    d = PebblingFn.from_dict(6, {0: 1, 4: 1})
    agreement(PENDANT, d)
    for _ in range(args.count):
        n = rng.randint(1, args.caps)
        t = random_tree(rng, n)
        counts = [0] * n
        for _ in range(rng.randint(1, 3)):
            counts[rng.randrange(n)] += 1
        d = PebblingFn(counts)
        agreement(t, d)
        r = rng.randrange(n)
        k = rng.randint(1, 3)
        single = tree_pi(t, PebblingFn.stack(n, r, k), dead_weight=dead).pi
        tally.record("single_target_reduction", single == pi_single_target(t, r, k).pi,
                     {**describe(t, PebblingFn.stack(n, r, k))})
        tally.record("strong_target_slack", strong_target_slack(t, d) >= 0, describe(t, d))

    if args.catalog:
        cat_caps = Caps(max_n=max(args.catalog, caps.max_n))
        for t in load_catalog(args.catalog):
            for r in range(t.n):
                tally.record("support_theorem", check_support_theorem(t, PebblingFn.stack(t.n, r, 1), cat_caps),
                             {"tree": [list(e) for e in t.edges], "root": r})
                for k in (1, 2, 3):
                    p = max_path_partition(t.rooted(r))
                    dk = PebblingFn.stack(t.n, r, k)
                    s = Solver(t, dk)
                    chung = (chung_configuration(p, k).config if p.paths
                             else PebblingFn.stack(t.n, r, k - 1))
                    ok = s.check(chung, witness=False).unsolvable and all(
                        s.check(chung.plus(v), witness=False).solvable for v in range(t.n))
                    tally.record("chung_extremal", ok, {"tree": [list(e) for e in t.edges], "root": r, "t": k})

    doc = {"seed": args.seed, "count": args.count, "caps": args.caps, "support": args.support,
           "fault": args.inject_fault, "ok": tally.ok, "properties": tally.props}
    return doc, EXIT_OK if tally.ok else EXIT_VIOLATION


def cmd_random(args) -> tuple[dict, int]:
    if args.n < 1:
        raise ParseError("n must be positive")
    if args.target_size < 1:
        raise ParseError("target size must be positive")
    inst = random_instance(args.seed, args.n, args.target_size)
    if args.out:
        base = Path(args.out)
        base.parent.mkdir(parents=True, exist_ok=True)
        base.with_suffix(".tree").write_text(format_edge_list(inst.tree))
        base.with_suffix(".json").write_text(inst.to_json() + "\n")
    return json.loads(inst.to_json()), EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="treepebble", description="Exact pebbling numbers on trees.")
    sub = p.add_subparsers(dest="command", required=True)

    q = sub.add_parser("pi", help="target pebbling number pi(T, D) with an extremal witness")
    q.add_argument("tree", help="edge-list file, instance JSON, or - for stdin")
    q.add_argument("target", nargs="?", help="target spec such as 'v1:2,v5'")
    q.add_argument("--check", action="store_true", help="confirm witness unsolvability with the solver")
    q.add_argument("--candidates", choices=CANDIDATE_MODES, default="all")
    q.add_argument("--inject-fault", choices=["dead-weight"], default=None)
    q.set_defaults(func=cmd_pi)

    q = sub.add_parser("pi-t", help="t-fold pebbling number pi_t(T) and values per root")
    q.add_argument("tree")
    q.add_argument("t", type=int)
    q.set_defaults(func=cmd_pi_t)

    q = sub.add_parser("solve", help="decide D-solvability of a configuration")
    q.add_argument("tree")
    q.add_argument("config", nargs="?")
    q.add_argument("target", nargs="?")
    q.add_argument("--no-moves", action="store_true", help="skip building the move list")
    q.add_argument("--max-states", type=int, default=None)
    q.set_defaults(func=cmd_solve)

    q = sub.add_parser("verify", help="run the property harness against the oracle")
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--count", type=int, default=50)
    q.add_argument("--caps", type=int, default=6, help="largest random tree size")
    q.add_argument("--support", choices=["all", "leaves"], default="leaves")
    q.add_argument("--catalog", type=int, default=0, help="also sweep catalog trees up to this size")
    q.add_argument("--inject-fault", choices=["dead-weight"], default=None)
    q.set_defaults(func=cmd_verify)

    q = sub.add_parser("random", help="emit a seeded random instance")
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--target-size", type=int, default=1)
    q.add_argument("--out", help="write OUT.tree and OUT.json as well")
    q.set_defaults(func=cmd_random)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        doc, code = args.func(args)
    except (ParseError, TreeError, InvalidVertex) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except EmptyTarget as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_EMPTY
    except (BudgetExceeded, CapExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    print(dumps(doc))
    return code


if __name__ == "__main__":
    sys.exit(main())
