"""Taxonomy trees encoded as p-adic integers.

A node's path is the list of 1-based child indices from the root; the path
``d_0.d_1...d_m`` is encoded as ``d_0 + d_1 p + ... + d_m p**m``. Two codes
are p-adically close exactly when their paths share a long prefix.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .padic_core import Prime, dist_p, next_prime


class TreeError(ValueError):
    pass


@dataclass(frozen=True)
class Node:
    label: str
    children: tuple[str, ...]
    index: int  # 1-based position under the parent; 0 for the root


@dataclass(frozen=True)
class TaxonomyTree:
    """Immutable rooted tree with ordered children.

    ``root_path`` is the digit path of the root inside a larger hierarchy
    (empty for a true root); it lets a pruned fragment carry its absolute
    codes. ``prime`` is an optional encoding prime suggested by the source.
    """

    nodes: dict[str, Node]
    root: str
    root_path: tuple[int, ...] = ()
    prime: int | None = None
    _paths: dict[str, tuple[int, ...]] = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        if self.root not in self.nodes:
            raise TreeError(f"root {self.root!r} is not a node")
        paths: dict[str, tuple[int, ...]] = {self.root: tuple(self.root_path)}
        stack = [self.root]
        while stack:
            nid = stack.pop()
            used = set()
            for cid in self.nodes[nid].children:
                if cid in paths:
                    raise TreeError(f"node {cid!r} is reachable twice (cycle or multiple parents)")
                idx = self.nodes[cid].index
                if idx < 1 or idx in used:
                    raise TreeError(f"bad child index {idx} for {cid!r} under {nid!r}")
                used.add(idx)
                paths[cid] = paths[nid] + (idx,)
                stack.append(cid)
        if len(paths) != len(self.nodes):
            orphans = sorted(set(self.nodes) - set(paths))
            raise TreeError(f"nodes not reachable from the root: {orphans}")
        self._paths.update(paths)

    def path(self, node_id: str) -> tuple[int, ...]:
        try:
            return self._paths[node_id]
        except KeyError:
            raise KeyError(f"unknown node {node_id!r}") from None

    def find(self, label: str) -> str:
        if label in self.nodes:
            return label
        hits = [nid for nid, node in self.nodes.items() if node.label == label]
        if len(hits) != 1:
            raise KeyError(f"label {label!r} matches {len(hits)} nodes")
        return hits[0]

    def max_index(self) -> int:
        return max(list(self.root_path) + [n.index for n in self.nodes.values()] + [1])

    def __len__(self) -> int:
        return len(self.nodes)


@dataclass(frozen=True)
class PathCode:
    digits: tuple[int, ...]
    prime: int
    value: int

    @classmethod
    def from_digits(cls, digits: Sequence[int], p: int) -> "PathCode":
        return cls(tuple(digits), int(p), encode_path(digits, p))

    @classmethod
    def from_value(cls, value: int, p: int) -> "PathCode":
        return cls(decode(value, p), int(p), value)

    @property
    def dotted(self) -> str:
        return ".".join(map(str, self.digits))

    def to_dict(self) -> dict:
        return {"path": self.dotted, "value": str(self.value), "prime": self.prime}


def min_safe_prime(tree: TaxonomyTree) -> Prime:
    """Smallest prime strictly above every child index in ``tree``."""
    return next_prime(tree.max_index())


def encode_path(path: Sequence[int], p: int) -> int:
    p = Prime(p)
    value = 0
    for d in reversed(path):
        if not 1 <= d < p:
            raise ValueError(f"digit {d} outside 1..{p - 1}")
        value = value * p + d
    return value


def decode(value: int, p: int) -> tuple[int, ...]:
    p = Prime(p)
    if value < 0:
        raise ValueError("path codes are non-negative")
    digits = []
    while value:
        value, d = divmod(value, p)
        if d == 0:
            raise ValueError("zero digit: not a valid path code")
        digits.append(d)
    return tuple(digits)


def similarity(u: PathCode, v: PathCode) -> Fraction:
    """p-adic distance of two codes: ``p**-L`` for the first differing depth ``L``."""
    if u.prime != v.prime:
        raise ValueError(f"prime mismatch: {u.prime} vs {v.prime}")
    return dist_p(u.value, v.value, u.prime)


def common_depth(u: PathCode, v: PathCode) -> int | None:
    """Length of the shared root prefix; None when the nodes coincide."""
    if u.digits == v.digits:
        return None
    L = 0
    for a, b in zip(u.digits, v.digits):
        if a != b:
            break
        L += 1
    return L


def node_code(tree: TaxonomyTree, label: str, p: int | None = None) -> PathCode:
    p = p if p is not None else (tree.prime or min_safe_prime(tree))
    return PathCode.from_digits(tree.path(tree.find(label)), p)


# --- loading -------------------------------------------------------------------


def _from_json(doc) -> TaxonomyTree:
    if not isinstance(doc, dict) or "label" not in doc:
        raise TreeError("tree document must be an object with a 'label'")
    nodes: dict[str, Node] = {}

    def visit(obj, index):
        if not isinstance(obj, dict) or not isinstance(obj.get("label"), str):
            raise TreeError(f"malformed node: {obj!r}")
        label = obj["label"]
        if label in nodes:
            raise TreeError(f"node {label!r} appears more than once")
        kids = obj.get("children", [])
        if not isinstance(kids, list):
            raise TreeError(f"children of {label!r} must be a list")
        nodes[label] = Node(label, (), index)  # placeholder claims the id
        child_ids = []
        for pos, child in enumerate(kids, start=1):
            idx = child.get("index", pos) if isinstance(child, dict) else pos
            child_ids.append(visit(child, idx))
        nodes[label] = Node(label, tuple(child_ids), index)
        return label

    root = visit(doc, 0)
    root_path = doc.get("path", "")
    if isinstance(root_path, str):
        root_path = tuple(int(t) for t in root_path.split(".") if t)
    return TaxonomyTree(nodes, root, tuple(root_path), doc.get("prime"))


def _from_edges(text: str) -> TaxonomyTree:
    """Rows ``parent_id,child_id,child_order,label``; the root row has no parent."""
    reader = csv.reader(io.StringIO(text))
    rows = [r for r in reader if r and any(c.strip() for c in r)]
    if rows and rows[0][0].strip() == "parent_id":
        rows = rows[1:]
    labels: dict[str, str] = {}
    parents: dict[str, str] = {}
    children: dict[str, list[tuple[int, str]]] = {}
    roots = []
    for r in rows:
        if len(r) != 4:
            raise TreeError(f"edge row needs 4 fields: {r}")
        parent, child, order, label = (c.strip() for c in r)
        if child in labels:
            raise TreeError(f"node {child!r} listed more than once")
        labels[child] = label
        if parent:
            parents[child] = parent
            children.setdefault(parent, []).append((int(order), child))
        else:
            roots.append(child)
    if len(roots) != 1:
        raise TreeError(f"expected exactly one root, found {len(roots)}")
    missing = set(children) - set(labels)
    if missing:
        raise TreeError(f"parents never defined: {sorted(missing)}")
    nodes = {}
    for nid, label in labels.items():
        kids = tuple(c for _, c in sorted(children.get(nid, [])))
        index = 0 if nid == roots[0] else next(o for o, c in children[parents[nid]] if c == nid)
        nodes[nid] = Node(label, kids, index)
    return TaxonomyTree(nodes, roots[0])


def load_tree(source: str) -> TaxonomyTree:
    """Parse a JSON tree document or an edge-list CSV."""
    text = source.strip()
    if not text:
        raise TreeError("empty tree document")
    if text[0] == "{":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as e:
            raise TreeError(f"invalid JSON: {e}") from e
        return _from_json(doc)
    return _from_edges(text)


def tree_to_json(tree: TaxonomyTree) -> dict:
    def build(nid):
        node = tree.nodes[nid]
        out = {"label": node.label}
        if nid != tree.root:
            out["index"] = node.index
        if node.children:
            out["children"] = [build(c) for c in node.children]
        return out

    doc = build(tree.root)
    if tree.root_path:
        doc["path"] = ".".join(map(str, tree.root_path))
    if tree.prime is not None:
        doc["prime"] = tree.prime
    return doc
