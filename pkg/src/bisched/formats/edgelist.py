from __future__ import annotations

import networkx as nx

from bisched.core.errors import ParseError


def parse_edgelist(text: str) -> nx.Graph:
    """One `u v` pair of integer vertices per line; `#` starts a comment."""
    lines: list[str] = []
    for number, line in enumerate(text.splitlines(), start=1):
        content = line.split("#", 1)[0].strip()
        if not content:
            continue
        parts = content.split()
        if len(parts) != 2 or not all(part.lstrip("-").isdigit() for part in parts):
            raise ParseError(
                f"строка {number}", f"ожидалась пара целых вершин, получено '{content}'"
            )
        lines.append(content)
    graph = nx.parse_edgelist(lines, nodetype=int, data=False)
    return nx.Graph(graph)


def write_edgelist(graph: nx.Graph) -> str:
    edges = sorted((min(u, v), max(u, v)) for u, v in graph.edges)
    return "".join(f"{u} {v}\n" for u, v in edges)
