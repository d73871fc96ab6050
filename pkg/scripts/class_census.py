"""Tabulate ~-class sizes of G(A)/Z by support type, brute force against the closed form."""
import argparse
import collections
import itertools

from topiso.gamma import brute_classes, classify
from topiso.graphs import cycle_graph, parse_graph
from topiso.mekler import MeklerGroup
from topiso.quotients import QuotientLevel
from topiso.words import X


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("graph", nargs="?", help="graph file (default: the 5-cycle)")
    ap.add_argument("-p", type=int, default=3)
    args = ap.parse_args()
    g = parse_graph(open(args.graph).read()) if args.graph else cycle_graph(5)
    G = MeklerGroup(g, args.p)
    _, _, classes, class_of = brute_classes(QuotientLevel(g, args.p), cap=args.p ** g.n_vertices)
    table = collections.Counter()
    disagreements = 0
    for vec in itertools.product(range(args.p), repeat=g.n_vertices):
        if not any(vec):
            continue
        d = classify(G.element(dict(enumerate(vec))))
        brute = len(classes[class_of[tuple(X(i, e) for i, e in enumerate(vec) if e)]])
        disagreements += brute != d.size
        table[type(d.case_tag).__name__, d.size, brute] += 1
    print(f"{'case':6} {'formula':>7} {'brute':>5} {'elements':>8}")
    for (case, size, brute), count in sorted(table.items()):
        print(f"{case:6} {size:7d} {brute:5d} {count:8d}")
    print(f"disagreements: {disagreements}")
    return 1 if disagreements else 0


if __name__ == "__main__":
    raise SystemExit(main())
