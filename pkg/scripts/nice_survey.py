"""Count nice graphs among all graphs on n vertices, by violation type."""
import argparse
import collections
import itertools

from topiso.graphs import Graph, is_nice


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-n", type=int, default=6)
    args = ap.parse_args()
    for n in range(1, args.max_n + 1):
        pairs = list(itertools.combinations(range(n), 2))
        tally = collections.Counter()
        for mask in range(1 << len(pairs)):
            edges = [e for k, e in enumerate(pairs) if mask >> k & 1]
            report = is_nice(Graph.from_edges(n, edges))
            tally["nice" if report.is_nice else type(report.violation).__name__] += 1
        print(f"n={n}: " + ", ".join(f"{k} {v}" for k, v in sorted(tally.items())))


if __name__ == "__main__":
    main()
