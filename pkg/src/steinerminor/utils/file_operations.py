# src/steinerminor/utils/file_operations.py

import csv
import hashlib
import json
import math
import os
from typing import Any, Dict, Iterable, List, Sequence, Tuple

from steinerminor.core.exceptions import GraphFormatError, InputError
from steinerminor.core.graph import TerminalSet, WeightedGraph


def _content_lines(text: str) -> List[Tuple[int, List[str]]]:
    lines = []
    for number, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        lines.append((number, stripped.split()))
    return lines


def _parse_count(token: str, what: str, line_number: int) -> int:
    try:
        value = int(token)
    except ValueError:
        raise GraphFormatError(f"{what} must be an integer, got {token!r}.", line_number) from None
    if value < 0:
        raise GraphFormatError(f"{what} must be nonnegative, got {value}.", line_number)
    return value


def parse_graph(text: str) -> Tuple[WeightedGraph, TerminalSet]:
    """
    Parse the graph text format.

    The first content line is ``n m k``, followed by m lines ``u v w`` and k
    lines each holding a terminal label. Blank lines and lines starting with
    ``#`` are skipped. When the labels are exactly the integers 0..n-1 they are
    used as vertex ids; otherwise ids follow first appearance.

    Raises:
        GraphFormatError: With the offending line number.
    """
    lines = _content_lines(text)
    if not lines:
        raise GraphFormatError("Missing the 'n m k' header.", 1)
    header_line, header = lines[0]
    if len(header) != 3:
        raise GraphFormatError(f"Header must be 'n m k', got {' '.join(header)!r}.", header_line)
    n, m, k = (_parse_count(token, name, header_line) for token, name in zip(header, "nmk"))
    if len(lines) - 1 != m + k:
        last = lines[-1][0]
        raise GraphFormatError(
            f"Expected {m} edge lines and {k} terminal lines, found {len(lines) - 1} lines.",
            last if len(lines) - 1 > m + k else header_line,
        )

    order: Dict[str, int] = {}
    label_lines: Dict[str, int] = {}

    def see(label: str, line_number: int) -> None:
        if label not in order:
            order[label] = len(order)
            label_lines[label] = line_number
            if len(order) > n:
                raise GraphFormatError(f"More than {n} distinct vertex labels.", line_number)

    raw_edges = []
    for line_number, tokens in lines[1 : m + 1]:
        if len(tokens) != 3:
            raise GraphFormatError(f"Edge line must be 'u v w', got {' '.join(tokens)!r}.", line_number)
        u, v, token = tokens
        try:
            w = float(token)
        except ValueError:
            raise GraphFormatError(f"Invalid weight {token!r}.", line_number) from None
        if not math.isfinite(w) or w <= 0:
            raise GraphFormatError(f"Weights must be finite and positive, got {token}.", line_number)
        if u == v:
            raise GraphFormatError(f"Self-loop on {u!r}.", line_number)
        see(u, line_number)
        see(v, line_number)
        raw_edges.append((u, v, w))

    terminal_labels = []
    for line_number, tokens in lines[m + 1 :]:
        if len(tokens) != 1:
            raise GraphFormatError(f"Terminal line must hold one label, got {' '.join(tokens)!r}.", line_number)
        see(tokens[0], line_number)
        terminal_labels.append(tokens[0])

    if len(order) != n:
        raise GraphFormatError(f"Header declares {n} vertices, found {len(order)} labels.", header_line)

    if set(order) == {str(v) for v in range(n)}:
        ids = {label: int(label) for label in order}
    else:
        ids = order
    labels = [""] * n
    for label, vertex in ids.items():
        labels[vertex] = label

    g = WeightedGraph(n, [(ids[u], ids[v], w) for u, v, w in raw_edges], labels)
    if not terminal_labels:
        raise GraphFormatError("At least one terminal is required.", header_line)
    terminals = TerminalSet.of(ids[label] for label in terminal_labels)
    return g, terminals


def read_graph_file(file_path: str) -> Tuple[WeightedGraph, TerminalSet]:
    try:
        with open(file_path, "r", encoding="utf-8") as file:
            text = file.read()
    except (OSError, UnicodeDecodeError) as e:
        raise InputError(f"Cannot read graph file {file_path}: {e}") from e
    return parse_graph(text)


def format_graph(g: WeightedGraph, terminals: Iterable[int]) -> str:
    terminals = list(terminals)
    lines = [f"{g.n} {g.m} {len(terminals)}"]
    lines.extend(f"{g.label_of(u)} {g.label_of(v)} {w!r}" for u, v, w in g.edges())
    lines.extend(g.label_of(t) for t in terminals)
    return "\n".join(lines) + "\n"


def write_graph_file(file_path: str, g: WeightedGraph, terminals: Iterable[int]) -> None:
    _ensure_parent(file_path)
    with open(file_path, "w", encoding="utf-8") as file:
        file.write(format_graph(g, terminals))


def write_json(file_path: str, payload: Any) -> None:
    """Write ``payload`` with sorted keys so identical payloads give identical bytes."""
    _ensure_parent(file_path)
    with open(file_path, "w", encoding="utf-8") as file:
        json.dump(payload, file, indent=2, sort_keys=True)
        file.write("\n")


def read_json(file_path: str) -> Any:
    with open(file_path, "r", encoding="utf-8") as file:
        return json.load(file)


def write_csv(file_path: str, rows: Sequence[Dict[str, Any]], fieldnames: Sequence[str]) -> None:
    _ensure_parent(file_path)
    with open(file_path, "w", encoding="utf-8", newline="") as file:
        writer = csv.DictWriter(file, fieldnames=list(fieldnames))
        writer.writeheader()
        writer.writerows(rows)


def get_file_hash(file_path: str) -> str:
    """
    Compute the MD5 hash of a file.

    Args:
        file_path (str): The path to the file.

    Returns:
        str: The MD5 hash of the file.
    """
    hasher = hashlib.md5()
    with open(file_path, "rb") as file:
        hasher.update(file.read())
    return hasher.hexdigest()


def _ensure_parent(file_path: str) -> None:
    parent = os.path.dirname(file_path)
    if parent:
        os.makedirs(parent, exist_ok=True)
