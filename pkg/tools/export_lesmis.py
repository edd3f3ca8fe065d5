"""One-off exporter for the packaged co-occurrence network.

Writes src/commscale/data/lesmis.tsv from the networkx copy of the
Les Miserables character graph (Knuth's Stanford GraphBase weights).
Node names go into '# node <idx> <name>' header comments; edges follow
as '<u> <v> <w>' with 0-based indices in graph insertion order.

Run from the repository root:  python3 tools/export_lesmis.py
"""

import pathlib

import networkx as nx


def main() -> None:
    graph = nx.les_miserables_graph()
    names = list(graph.nodes())
    index = {name: i for i, name in enumerate(names)}
    lines = ["# Les Miserables character co-occurrence network (Knuth 1993)"]
    lines += [f"# node {i} {name}" for i, name in enumerate(names)]
    for u, v, data in graph.edges(data=True):
        a, b = sorted((index[u], index[v]))
        w = data["weight"]
        if w != int(w):
            raise SystemExit(f"non-integer weight on edge {u}-{v}: {w}")
        lines.append(f"{a} {b} {int(w)}")
    out = pathlib.Path(__file__).resolve().parent.parent / "src" / "commscale" / "data" / "lesmis.tsv"
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"wrote {out}: {graph.number_of_nodes()} nodes, {graph.number_of_edges()} edges")
    if graph.number_of_nodes() != 77 or graph.number_of_edges() != 254:
        raise SystemExit("unexpected graph size")


if __name__ == "__main__":
    main()
