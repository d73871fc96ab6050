"""Build the coset structure of a small quotient and exercise the reconstructions."""
import argparse
import time

from topiso.cosets import (
    Basis,
    build_structure,
    check_conjugacy,
    filters,
    find_structure_isomorphisms,
    reconstruct_element,
    theta_action,
)
from topiso.graphs import cycle_graph
from topiso.mekler import MeklerGroup, relabel_element


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("-p", type=int, default=3)
    ap.add_argument("--depth", type=int, default=3)
    args = ap.parse_args()
    G = MeklerGroup(cycle_graph(5), args.p)
    t0 = time.perf_counter()
    M = build_structure(Basis(G, args.depth))
    print(f"universe {len(M.universe)}, relation {len(M.relation)} triples, "
          f"built in {time.perf_counter() - t0:.1f}s")
    ok = all(reconstruct_element(*filters(g, M), M) == g for g in M.elements)
    print(f"filters reconstruct every element: {ok}")
    rot = (1, 2, 3, 4, 0)
    MH = build_structure(Basis(G, args.depth, order=rot))
    phi = lambda g: relabel_element(g, rot, G)
    T = theta_action(M)
    print(f"theta injective: {T.is_injective()}; "
          f"conjugacy for the rotation: {check_conjugacy(phi, M, MH, T, theta_action(MH))}")
    if args.depth <= 2:
        print(f"self-isomorphisms of the structure: {len(find_structure_isomorphisms(M, M))}")


if __name__ == "__main__":
    main()
