"""Command-line front end.

Exit codes: 0 success or true, 1 checked false, 2 input error,
3 precondition refused (graph not nice), 4 resource cap exceeded.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass, fields
from typing import Optional

from . import cosets, gamma, graphs, quotients, trees
from .mekler import MeklerGroup, check_prime, relabel_element

EXIT_OK, EXIT_FALSE, EXIT_INPUT, EXIT_REFUSED, EXIT_CAP = 0, 1, 2, 3, 4


@dataclass
class Config:
    p: int = 3
    depth: Optional[int] = None
    cap: Optional[int] = None   # None: each command's own default
    seed: int = 0
    mode: str = "symbolic"
    format: str = "text"

    def validate(self) -> "Config":
        check_prime(self.p)
        if self.cap is not None and self.cap <= 0:
            raise ValueError("cap must be positive")
        if self.depth is not None and self.depth < 0:
            raise ValueError("depth must be non-negative")
        if self.format not in ("text", "json"):
            raise ValueError("format must be text or json")
        return self

    def cap_or(self, default: int) -> int:
        return default if self.cap is None else self.cap


class Output:
    def __init__(self, fmt: str, stream=None):
        self.fmt = fmt
        self.stream = stream or sys.stdout

    def text(self, line: str) -> None:
        if self.fmt == "text":
            print(line, file=self.stream)

    def record(self, obj: dict) -> None:
        if self.fmt == "json":
            print(json.dumps(obj, sort_keys=True), file=self.stream)


def _read_graph(path: str) -> graphs.Graph:
    with open(path) as fh:
        return graphs.parse_graph(fh.read())


def _int_list(text: str) -> tuple:
    return tuple(int(x) for x in text.replace(",", " ").split())


# -- commands ----------------------------------------------------------------

def cmd_nice(args, cfg: Config, out: Output) -> int:
    if args.action == "gen":
        g = graphs.generate_nice(args.n, cfg.seed)
        if g is None:
            out.text(f"no nice graph found on {args.n} vertices")
            out.record({"graph": None})
            return EXIT_FALSE
        out.text(graphs.format_graph(g).rstrip("\n"))
        out.record({"n": g.n_vertices, "edges": sorted(g.edges)})
        return EXIT_OK
    if args.file is None:
        raise ValueError("nice check needs a graph file")
    report = graphs.is_nice(_read_graph(args.file))
    out.text(str(report.violation) if report.violation else "nice")
    out.record({"nice": report.is_nice, "violation": str(report.violation) if report.violation else None})
    return EXIT_OK if report.is_nice else EXIT_FALSE


def cmd_gamma(args, cfg: Config, out: Output) -> int:
    g = _read_graph(args.file)
    if cfg.mode == "symbolic":
        recovered = gamma.gamma_symbolic(g, cfg.p)
    else:
        depth = g.n_vertices if cfg.depth is None else cfg.depth
        level = quotients.QuotientLevel(graphs.induced(g, range(depth)), cfg.p)
        target = level.graph
        recovered = gamma.gamma_brute(level, cfg.cap_or(gamma.DEFAULT_BRUTE_CAP)).graph
        g = target
    pi = graphs.are_isomorphic(g, recovered)
    witness = "none" if pi is None else " ".join(f"{i}->{k}" for i, k in enumerate(pi))
    out.text(graphs.format_graph(recovered).rstrip("\n"))
    out.text(f"iso: {witness}")
    out.record({
        "n": recovered.n_vertices,
        "edges": sorted(recovered.edges),
        "iso": None if pi is None else list(pi),
    })
    return EXIT_OK if pi is not None else EXIT_FALSE


def cmd_quotient(args, cfg: Config, out: Output) -> int:
    g = _read_graph(args.file)
    depth = g.n_vertices if cfg.depth is None else cfg.depth
    system = quotients.InverseSystem(g, cfg.p, depth)
    cap = cfg.cap_or(quotients.DEFAULT_ENUM_CAP)
    for lv in system.levels:
        lv.check_cap(cap)
    fp = quotients.fingerprint(system, cap)
    out.text("orders: " + " ".join(str(o) for o in fp.orders))
    for lv in fp.levels:
        rec = lv.as_record()
        out.text(
            f"level {rec['level']}: order {rec['order']} exponent {rec['exponent']} "
            f"class {rec['class']} abelianization {rec['abelianization']} "
            f"conj_classes {rec['conj_classes']}"
        )
    if cfg.format == "json":
        out.stream.write(fp.serialize())
    return EXIT_OK


def _structure(g: graphs.Graph, cfg: Config, order=None) -> cosets.CosetStructure:
    depth = min(3, g.n_vertices) if cfg.depth is None else cfg.depth
    basis = cosets.Basis(MeklerGroup(g, cfg.p), depth, order)
    quotients.QuotientLevel(graphs.induced(g, basis.kept(depth)), cfg.p).check_cap(cfg.cap_or(3 ** 5))
    return cosets.build_structure(basis)


def cmd_coset(args, cfg: Config, out: Output) -> int:
    if args.action == "build":
        M = _structure(_read_graph(args.files[0]), cfg)
        out.text(f"universe {len(M.universe)}")
        for k, c in enumerate(M.universe):
            out.text(str(c))
            out.record({"index": k, "level": c.level, "side": c.side, "rep": str(c.rep)})
        triples = sorted(M.relation)
        out.text(f"relation {len(triples)}")
        for t in triples:
            out.text(" ".join(map(str, t)))
        out.record({"relation": triples})
        return EXIT_OK
    if len(args.files) != 2 or args.map is None:
        raise ValueError("coset reconstruct needs two graph files and --map")
    ga, gb = _read_graph(args.files[0]), _read_graph(args.files[1])
    order_b = _int_list(args.order_b) if args.order_b else None
    MG, MH = _structure(ga, cfg), _structure(gb, cfg, order_b)
    rho = [None] * len(MG.universe)
    with open(args.map) as fh:
        for ln in fh:
            ln = ln.split("#", 1)[0].strip()
            if not ln:
                continue
            i, arrow, j = ln.partition("->")
            if not arrow:
                raise ValueError(f"expected 'i -> j', got {ln!r}")
            rho[int(i)] = int(j)
    if any(r is None for r in rho):
        raise ValueError("map does not cover the whole universe")
    bad = cosets.is_structure_isomorphism(rho, MG, MH)
    if bad is not None:
        out.text("counterexample: " + " ".join(map(str, bad)))
        out.record({"counterexample": list(bad)})
        return EXIT_FALSE
    theta = cosets.reconstruct_isomorphism(rho, MG, MH)
    G = MG.basis.group
    images = {}
    for v in MG.basis.kept(MG.depth):
        x = G.generator(v)
        images[str(x)] = str(theta[x])
        out.text(f"{x} -> {theta[x]}")
    out.record({"theta": images})
    return EXIT_OK


def cmd_coset_rho(args, cfg: Config, out: Output) -> int:
    """Universe bijection induced by a graph isomorphism, with the transported order."""
    ga, gb = _read_graph(args.files[0]), _read_graph(args.files[1])
    pi = graphs.are_isomorphic(ga, gb)
    if pi is None:
        out.text("graphs are not isomorphic")
        return EXIT_FALSE
    MG, MH = _structure(ga, cfg), _structure(gb, cfg, pi)
    rho = cosets.structure_map(lambda g: relabel_element(g, pi, MH.basis.group), MG, MH)
    out.text("# order-b: " + " ".join(map(str, pi)))
    for i, j in enumerate(rho):
        out.text(f"{i} -> {j}")
    out.record({"order_b": list(pi), "rho": rho})
    return EXIT_OK


def cmd_tree(args, cfg: Config, out: Output) -> int:
    depth = 3 if cfg.depth is None else cfg.depth
    gens = [trees.parse_cycles(s) for s in args.group]
    T = trees.tree_of_group(gens, depth, cfg.cap_or(10 ** 5))
    sizes = T.level_sizes()
    axioms = trees.subgroup_axioms_check(T)
    compact = trees.is_compact(T)
    out.text("levels: " + " ".join(map(str, sizes)))
    out.text(f"subgroup axioms: {str(axioms).lower()}")
    out.text(f"compact: {str(compact).lower()}")
    out.record({"levels": sizes, "subgroup_axioms": axioms, "compact": compact})
    return EXIT_OK


def cmd_roundtrip(args, cfg: Config, out: Output) -> int:
    a, b = _read_graph(args.a), _read_graph(args.b)
    verdict = gamma.roundtrip(a, b, cfg.p, cfg.cap_or(quotients.DEFAULT_ISO_CAP))
    out.text(verdict.summary())
    out.record({
        "isomorphic": verdict.isomorphic,
        "summary": verdict.summary(),
        "witness": list(verdict.witness) if verdict.witness else None,
    })
    return EXIT_OK if verdict.isomorphic else EXIT_FALSE


# -- argument parsing --------------------------------------------------------

def _global_flags(parser: argparse.ArgumentParser) -> None:
    # suppressed defaults so that flags work before or after the subcommand
    # and only explicitly given ones override the config file
    s = argparse.SUPPRESS
    parser.add_argument("--cap", type=int, default=s, help="enumeration cap")
    parser.add_argument("--seed", type=int, default=s)
    parser.add_argument("--format", choices=("text", "json"), default=s)
    parser.add_argument("--config", default=s, help="JSON file of defaults; flags override")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="topiso")
    _global_flags(parser)
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common)
    group_flags = argparse.ArgumentParser(add_help=False)
    group_flags.add_argument("-p", type=int, default=argparse.SUPPRESS, help="odd prime")
    group_flags.add_argument("--depth", type=int, default=argparse.SUPPRESS)

    sub = parser.add_subparsers(dest="command", required=True)

    nice = sub.add_parser("nice", parents=[common])
    nice.add_argument("action", choices=("check", "gen"))
    nice.add_argument("file", nargs="?")
    nice.add_argument("-n", type=int, default=10)
    nice.set_defaults(func=cmd_nice)

    gam = sub.add_parser("gamma", parents=[common, group_flags])
    gam.add_argument("action", choices=("recover",))
    gam.add_argument("file")
    gam.add_argument("--mode", choices=("symbolic", "brute"), default=argparse.SUPPRESS)
    gam.set_defaults(func=cmd_gamma)

    quo = sub.add_parser("quotient", parents=[common, group_flags])
    quo.add_argument("action", choices=("fingerprint",))
    quo.add_argument("file")
    quo.set_defaults(func=cmd_quotient)

    cos = sub.add_parser("coset", parents=[common, group_flags])
    cos.add_argument("action", choices=("build", "reconstruct", "rho"))
    cos.add_argument("files", nargs="+")
    cos.add_argument("--map", help="file of 'i -> j' lines")
    cos.add_argument("--order-b", help="vertex order for the second basis, e.g. '1 2 3 4 0'")
    cos.set_defaults(func=cmd_coset)

    tre = sub.add_parser("tree", parents=[common, group_flags])
    tre.add_argument("action", choices=("analyze",))
    tre.add_argument("--group", action="append", required=True,
                     help="a generator in cycle notation; repeat for more generators")
    tre.set_defaults(func=cmd_tree)

    rt = sub.add_parser("roundtrip", parents=[common, group_flags])
    rt.add_argument("a")
    rt.add_argument("b")
    rt.set_defaults(func=cmd_roundtrip)
    return parser


def make_config(args) -> Config:
    cfg = Config()
    if getattr(args, "config", None):
        with open(args.config) as fh:
            loaded = json.load(fh)
        names = {f.name for f in fields(Config)}
        unknown = set(loaded) - names
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        cfg = Config(**{**asdict(cfg), **loaded})
    for name in ("p", "depth", "cap", "seed", "mode", "format"):
        if hasattr(args, name) and getattr(args, name) is not None:
            setattr(cfg, name, getattr(args, name))
    return cfg.validate()


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        cfg = make_config(args)
        out = Output(cfg.format)
        if args.command == "coset" and args.action == "rho":
            return cmd_coset_rho(args, cfg, out)
        return args.func(args, cfg, out)
    except gamma.NotNice as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_REFUSED
    except (quotients.ResourceCapExceeded, trees.CapExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (OSError, ValueError, IndexError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
