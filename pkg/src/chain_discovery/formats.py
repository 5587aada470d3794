"""Text file formats. All node indices on disk are 1-based.

graph      ``N <n>`` then ``<parent> <child>`` lines
model      graph lines plus ``P <node> <failure>`` or ``P * <failure>``
scenario   model lines plus ``M <parent> <child> <contact|noncontact> <delay>``
dataset    ``N <n>`` then ``<target|-> <bits>`` per episode
traces     ``N <n>``, then per episode ``E <target|->`` followed by
           ``A <node> <time>`` and ``C <time> <source> <target>`` lines

``#`` starts a comment anywhere on a line.
"""

from __future__ import annotations

from pathlib import Path
from typing import Iterable, Optional, Union

import numpy as np

from .estimator import DatasetFormatError, InterventionalDataset
from .events import EdgeMechanism, EventTrace, MechanizedModel, TraceDataset
from .graph import CausalTree, Digraph
from .scm import CascadeModel, Episode

PathOrText = Union[str, Path]


class FormatError(DatasetFormatError):
    pass


def _lines(text: str) -> Iterable[tuple[int, list[str]]]:
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line.split()


def _read(src: PathOrText) -> str:
    return Path(src).read_text()


def _node(tok: str, n: int, lineno: int) -> int:
    try:
        v = int(tok)
    except ValueError:
        raise FormatError(f"line {lineno}: expected a node index, got {tok!r}") from None
    if not 1 <= v <= n:
        raise FormatError(f"line {lineno}: node {v} outside 1..{n}")
    return v - 1


def _header(tokens: list[str], lineno: int) -> int:
    if len(tokens) != 2 or tokens[0] != "N":
        raise FormatError(f"line {lineno}: expected header 'N <n>'")
    try:
        n = int(tokens[1])
    except ValueError:
        raise FormatError(f"line {lineno}: bad node count {tokens[1]!r}") from None
    if n < 0:
        raise FormatError(f"line {lineno}: negative node count")
    return n


def _parse_model_text(text: str):
    """Shared parser: returns (n, edges, failure map, mechanisms)."""
    n: Optional[int] = None
    edges: list[tuple[int, int]] = []
    fail: dict[Optional[int], float] = {}
    mech: dict[tuple[int, int], EdgeMechanism] = {}
    for lineno, tok in _lines(text):
        if n is None:
            n = _header(tok, lineno)
            continue
        if tok[0] == "P":
            if len(tok) != 3:
                raise FormatError(f"line {lineno}: expected 'P <node|*> <failure_prob>'")
            key = None if tok[1] == "*" else _node(tok[1], n, lineno)
            fail[key] = _prob(tok[2], lineno)
        elif tok[0] == "M":
            if len(tok) != 5:
                raise FormatError(f"line {lineno}: expected 'M <parent> <child> <kind> <delay>'")
            e = (_node(tok[1], n, lineno), _node(tok[2], n, lineno))
            try:
                mech[e] = EdgeMechanism(tok[3], float(tok[4]))
            except ValueError as exc:
                raise FormatError(f"line {lineno}: {exc}") from None
        elif len(tok) == 2:
            edges.append((_node(tok[0], n, lineno), _node(tok[1], n, lineno)))
        else:
            raise FormatError(f"line {lineno}: unrecognised line {' '.join(tok)!r}")
    if n is None:
        raise FormatError("missing 'N <n>' header")
    return n, edges, fail, mech


def _prob(tok: str, lineno: int) -> float:
    try:
        p = float(tok)
    except ValueError:
        raise FormatError(f"line {lineno}: bad probability {tok!r}") from None
    if not 0.0 <= p < 1.0:
        raise FormatError(f"line {lineno}: failure probability {p} outside [0, 1)")
    return p


# -- graphs -----------------------------------------------------------------

def parse_digraph(text: str) -> Digraph:
    n, edges, _, _ = _parse_model_text(text)
    try:
        return Digraph(n, frozenset(edges))
    except (ValueError, IndexError) as exc:
        raise FormatError(str(exc)) from None


def parse_tree(text: str) -> CausalTree:
    n, edges, _, _ = _parse_model_text(text)
    if len(edges) != n - 1:
        raise FormatError(f"a tree on {n} nodes needs {n - 1} edges, got {len(edges)}")
    try:
        return CausalTree.from_edges(n, edges)
    except (ValueError, IndexError) as exc:
        raise FormatError(str(exc)) from None


def format_graph(g: Digraph | CausalTree, comment: str | None = None) -> str:
    out = [f"# {comment}"] if comment else []
    out.append(f"N {g.n}")
    out += [f"{i + 1} {j + 1}" for i, j in sorted(g.edges)]
    return "\n".join(out) + "\n"


# -- models and scenarios -----------------------------------------------------

def _failures(n: int, fail: dict[Optional[int], float]) -> list[float]:
    base = fail.get(None, 0.0)
    return [fail.get(j, base) for j in range(n)]


def parse_model(text: str) -> CascadeModel:
    n, _, fail, _ = _parse_model_text(text)
    t = parse_tree(text)
    return CascadeModel(t, tuple(1.0 - p for p in _failures(n, fail)))


def parse_scenario(text: str) -> MechanizedModel:
    """Model plus mechanisms; edges without an ``M`` line default to unit-delay contact."""
    _, _, _, mech = _parse_model_text(text)
    model = parse_model(text)
    extra = set(mech) - model.tree.edges
    if extra:
        raise FormatError(f"mechanisms given for non-edges {sorted((i + 1, j + 1) for i, j in extra)}")
    return MechanizedModel(model, {e: mech.get(e, EdgeMechanism()) for e in model.tree.edges})


def format_model(model: CascadeModel, comment: str | None = None) -> str:
    out = format_graph(model.tree, comment)
    fails = model.failure
    if len(set(fails)) <= 1:
        out += f"P * {_num(fails[0])}\n"
    else:
        out += "".join(f"P {j + 1} {_num(p)}\n" for j, p in enumerate(fails))
    return out


def format_scenario(mm: MechanizedModel, comment: str | None = None) -> str:
    out = format_model(mm.model, comment)
    for (i, j), m in sorted(mm.mechanisms.items()):
        out += f"M {i + 1} {j + 1} {m.kind} {_num(m.delay)}\n"
    return out


def _num(v: float) -> str:
    return repr(round(float(v), 12))


# -- datasets -----------------------------------------------------------------

def parse_dataset(text: str) -> InterventionalDataset:
    n: Optional[int] = None
    targets: list[int] = []
    rows: list[list[int]] = []
    for lineno, tok in _lines(text):
        if n is None:
            n = _header(tok, lineno)
            continue
        if len(tok) != 2:
            raise FormatError(f"line {lineno}: expected '<target|-> <bits>'")
        target = -1 if tok[0] == "-" else _node(tok[0], n, lineno)
        bits = tok[1]
        if len(bits) != n or set(bits) - {"0", "1"}:
            raise FormatError(f"line {lineno}: expected {n} binary digits, got {bits!r}")
        x = [int(b) for b in bits]
        if target >= 0 and x[target]:
            raise FormatError(f"line {lineno}: blocked node {target + 1} is marked active")
        targets.append(target)
        rows.append(x)
    if n is None:
        raise FormatError("missing 'N <n>' header")
    return InterventionalDataset(n, targets, np.array(rows, dtype=np.uint8).reshape(len(rows), n))


def format_dataset(data: InterventionalDataset) -> str:
    out = [f"N {data.n}"]
    for t, row in zip(data.targets, data.x):
        out.append(f"{'-' if t < 0 else t + 1} {''.join(str(int(b)) for b in row)}")
    return "\n".join(out) + "\n"


# -- traces -------------------------------------------------------------------

def format_trace(trace: EventTrace) -> str:
    out = []
    for j, t in sorted(((j, t) for j, t in enumerate(trace.activation_time) if t is not None), key=lambda p: (p[1], p[0])):
        out.append(f"A {j + 1} {_num(t)}")
    out += [f"C {_num(t)} {i + 1} {j + 1}" for t, i, j in trace.collisions]
    return "\n".join(out) + ("\n" if out else "")


def format_traces(n: int, traces: Iterable[EventTrace]) -> str:
    out = f"N {n}\n"
    for tr in traces:
        tgt = tr.episode.target
        out += f"E {'-' if tgt is None else tgt + 1}\n" + format_trace(tr)
    return out


def parse_traces(text: str) -> tuple[int, list[EventTrace]]:
    n: Optional[int] = None
    traces: list[EventTrace] = []
    cur = None

    def flush():
        if cur is not None:
            target, times, coll = cur
            x = tuple(0 if t is None else 1 for t in times)
            traces.append(EventTrace(Episode(target, x), tuple(times), tuple(sorted(coll))))

    for lineno, tok in _lines(text):
        if n is None:
            n = _header(tok, lineno)
            continue
        kind = tok[0]
        if kind == "E" and len(tok) == 2:
            flush()
            cur = (None if tok[1] == "-" else _node(tok[1], n, lineno), [None] * n, [])
        elif cur is None:
            raise FormatError(f"line {lineno}: event before the first 'E' line")
        elif kind == "A" and len(tok) == 3:
            cur[1][_node(tok[1], n, lineno)] = _float(tok[2], lineno)
        elif kind == "C" and len(tok) == 4:
            cur[2].append((_float(tok[1], lineno), _node(tok[2], n, lineno), _node(tok[3], n, lineno)))
        else:
            raise FormatError(f"line {lineno}: unrecognised trace line {' '.join(tok)!r}")
    flush()
    if n is None:
        raise FormatError("missing 'N <n>' header")
    return n, traces


def parse_trace_dataset(text: str) -> TraceDataset:
    """Observational traces only; interventional ones are skipped."""
    n, traces = parse_traces(text)
    return TraceDataset(n, [t for t in traces if t.episode.target is None])


def _float(tok: str, lineno: int) -> float:
    try:
        return float(tok)
    except ValueError:
        raise FormatError(f"line {lineno}: bad number {tok!r}") from None


def read(path: PathOrText, parser):
    return parser(_read(path))
