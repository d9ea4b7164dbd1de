"""Text format for happy-coloring instances.

    happy <variant> <n> <m> <k> <ell>
    # comment
    v <id> c <color>     precolor a vertex
    v <id> w <weight>    vertex weight (wmhv only)
    e <u> <v> [<w>]      edge, optional weight (weight != 1 only in wmhe)

Variants: mhe, mhv (unit weights), wmhe (edge weights), wmhv (vertex
weights).  Vertex ids are 1..n.  <ell> = 0 means plain optimization.
``write`` produces a canonical form: sorted vertex lines, then sorted
edge lines, unit weights omitted, variant tag downgraded to the
unweighted one when every weight is 1.  write(parse(x)) is canonical and
parse(write(inst)) == inst.
"""

from __future__ import annotations

import hashlib

from .model import MHE, MHV, Graph, HappyError, Instance, require_valid

VARIANTS = {"mhe": (MHE, False), "mhv": (MHV, False), "wmhe": (MHE, True), "wmhv": (MHV, True)}


class ParseError(HappyError):
    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


def parse_instance(text: str) -> Instance:
    """Parse and validate an instance; raises ParseError with line numbers."""
    header = None
    header_line = 0
    precoloring: dict[int, int] = {}
    vertex_weights: dict[int, int] = {}
    edges: list[tuple[int, int]] = []
    edge_weights: dict[tuple[int, int], int] = {}
    seen_edges: set[tuple[int, int]] = set()

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if header is None:
            if parts[0] != "happy":
                raise ParseError(line_no, f"expected 'happy' header, got {parts[0]!r}")
            if len(parts) != 6:
                raise ParseError(line_no, "header needs: happy <variant> <n> <m> <k> <ell>")
            tag = parts[1]
            if tag not in VARIANTS:
                raise ParseError(line_no, f"unknown variant {tag!r}")
            try:
                n, m, k, ell = (int(x) for x in parts[2:])
            except ValueError:
                raise ParseError(line_no, "header counts must be integers") from None
            if n < 0 or m < 0 or k < 1 or ell < 0:
                raise ParseError(line_no, "header counts out of range")
            header = (tag, n, m, k, ell)
            header_line = line_no
            continue
        tag, n, m, k, ell = header
        variant, weighted = VARIANTS[tag]
        if parts[0] == "v":
            if len(parts) != 4 or parts[2] not in ("c", "w"):
                raise ParseError(line_no, "vertex line needs: v <id> c|w <value>")
            try:
                vid, value = int(parts[1]), int(parts[3])
            except ValueError:
                raise ParseError(line_no, "vertex id and value must be integers") from None
            if not (1 <= vid <= n):
                raise ParseError(line_no, f"vertex {vid} outside 1..{n}")
            if parts[2] == "c":
                if not (1 <= value <= k):
                    raise ParseError(line_no, f"color {value} outside 1..{k}")
                if vid in precoloring:
                    raise ParseError(line_no, f"vertex {vid} precolored twice")
                precoloring[vid] = value
            else:
                if not (tag == "wmhv"):
                    raise ParseError(line_no, f"vertex weights not allowed for variant {tag}")
                if value < 1:
                    raise ParseError(line_no, f"weight {value} must be >= 1")
                if vid in vertex_weights:
                    raise ParseError(line_no, f"vertex {vid} weighted twice")
                vertex_weights[vid] = value
        elif parts[0] == "e":
            if len(parts) not in (3, 4):
                raise ParseError(line_no, "edge line needs: e <u> <v> [<w>]")
            try:
                u, v = int(parts[1]), int(parts[2])
                w = int(parts[3]) if len(parts) == 4 else 1
            except ValueError:
                raise ParseError(line_no, "edge fields must be integers") from None
            if not (1 <= u <= n and 1 <= v <= n):
                raise ParseError(line_no, f"edge ({u}, {v}) outside 1..{n}")
            if u == v:
                raise ParseError(line_no, f"self-loop at vertex {u}")
            key = (min(u, v), max(u, v))
            if key in seen_edges:
                raise ParseError(line_no, f"duplicate edge ({key[0]}, {key[1]})")
            seen_edges.add(key)
            if w != 1 and tag != "wmhe":
                raise ParseError(line_no, f"edge weight {w} not allowed for variant {tag}")
            if w < 1:
                raise ParseError(line_no, f"weight {w} must be >= 1")
            edges.append(key)
            if w != 1:
                edge_weights[key] = w
        else:
            raise ParseError(line_no, f"unknown line type {parts[0]!r}")

    if header is None:
        raise ParseError(1, "missing 'happy' header")
    tag, n, m, k, ell = header
    variant, _ = VARIANTS[tag]
    if len(edges) != m:
        raise ParseError(header_line, f"header announces {m} edges, file has {len(edges)}")
    inst = Instance(
        graph=Graph(n, edges),
        variant=variant,
        k=k,
        precoloring=precoloring,
        edge_weights=edge_weights,
        vertex_weights=vertex_weights,
        target=ell if ell > 0 else None,
    )
    require_valid(inst)
    return inst


def write_instance(inst: Instance) -> str:
    """Canonical text form of a validated instance."""
    require_valid(inst)
    g = inst.graph
    if inst.variant == MHE:
        tag = "wmhe" if inst.edge_weights else "mhe"
    else:
        tag = "wmhv" if inst.vertex_weights else "mhv"
    ell = inst.target or 0
    lines = [f"happy {tag} {g.n} {g.m} {inst.k} {ell}"]
    for v in sorted(inst.precoloring):
        lines.append(f"v {v} c {inst.precoloring[v]}")
    if tag == "wmhv":
        for v in sorted(inst.vertex_weights):
            lines.append(f"v {v} w {inst.vertex_weights[v]}")
    for u, v in sorted(g.edges):
        w = inst.edge_weight(u, v)
        if w != 1:
            lines.append(f"e {u} {v} {w}")
        else:
            lines.append(f"e {u} {v}")
    return "\n".join(lines) + "\n"


def instance_digest(inst: Instance) -> str:
    """Stable identifier: sha256 of the canonical text."""
    return hashlib.sha256(write_instance(inst).encode()).hexdigest()
