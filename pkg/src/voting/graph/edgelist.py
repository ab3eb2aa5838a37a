"""Edge-list text format: one ``u v`` pair per line, 0-indexed, ``#`` comments.

``u u`` is a self-loop. The vertex count is ``max index + 1`` unless a
``# n=<count>`` header line says otherwise.
"""

import re
from pathlib import Path

from src.voting.errors import InvalidGraph
from src.voting.graph.core import Graph
from src.voting.utils.logging_config import get_logger

logger = get_logger(__name__)

_HEADER = re.compile(r"#\s*n\s*=\s*(\d+)")


def parse_edge_list(text: str, *, name: str = "edge-list") -> Graph:
    edges: list[tuple[int, int]] = []
    declared_n: int | None = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            match = _HEADER.match(line)
            if match:
                declared_n = int(match.group(1))
            continue
        parts = line.split("#", 1)[0].split()
        if len(parts) != 2:
            raise InvalidGraph("edge line must hold two vertex ids", line=lineno, text=raw)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError as exc:
            raise InvalidGraph("vertex ids must be integers", line=lineno, text=raw) from exc
        edges.append((u, v))

    if not edges and declared_n is None:
        raise InvalidGraph("edge list is empty")
    n = declared_n if declared_n is not None else 1 + max(max(e) for e in edges)
    return Graph.from_edges(n, edges, name=name)


def load_edge_list(path: str | Path) -> Graph:
    """Read and validate (connectivity included) an edge-list file."""
    path = Path(path)
    graph = parse_edge_list(path.read_text(encoding="utf-8"), name=path.stem)
    logger.info("edge_list_loaded", path=str(path), **graph.describe())
    return graph


def format_edge_list(g: Graph) -> str:
    lines = [f"# n={g.n}", f"# {g.name}"]
    lines.extend(f"{u} {v}" for u, v in g.to_edge_list())
    return "\n".join(lines) + "\n"


def save_edge_list(g: Graph, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(format_edge_list(g), encoding="utf-8")
    logger.info("edge_list_saved", path=str(path), **g.describe())
    return path
