"""Shuffle tree monomials, admissible monomial orders, and divisibility.

A shuffle tree monomial of arity n is a planar rooted tree whose internal
vertices carry generator symbols and whose leaves are labelled by distinct
integers (1..n at the top level) such that at every internal vertex the
minimal leaf labels of the child subtrees strictly increase from left to
right.  These monomials form the monomial basis of a free shuffle operad;
divisibility is given by subtree occurrences and drives the Buchberger
engine in :mod:`operadgb.groebner`.

Trees are interned: structurally equal trees are the same object, so
hashing and equality are cheap.  All values here are immutable and safe to
share between threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterable, Iterator, Sequence


class TreeError(ValueError):
    """Malformed tree monomial (bad labels, arity, or shuffle condition)."""


@dataclass(frozen=True)
class GeneratorSymbol:
    """A named operad generator of fixed arity."""

    name: str
    arity: int

    def __post_init__(self) -> None:
        if not self.name or not self.name[0].isalpha():
            raise TreeError(f"bad generator name {self.name!r}")
        if self.arity < 1:
            raise TreeError(f"generator {self.name}: arity must be >= 1")

    def __str__(self) -> str:
        return f"{self.name}/{self.arity}"


class Tree:
    """Interned shuffle tree monomial; construct via :func:`leaf` / :func:`node`.

    Attributes:
        gen: generator name at the root, or ``None`` for a leaf.
        children: tuple of subtrees (empty for a leaf).
        label: leaf label (0 for internal nodes).
        leaves: sorted tuple of all leaf labels.
        size: number of internal vertices.
    """

    __slots__ = ("gen", "children", "label", "leaves", "size", "_hash")

    _interned: dict = {}

    gen: str | None
    children: tuple["Tree", ...]
    label: int
    leaves: tuple[int, ...]
    size: int

    def __new__(cls, gen, children, label, leaves, size):
        self = object.__new__(cls)
        self.gen = gen
        self.children = children
        self.label = label
        self.leaves = leaves
        self.size = size
        self._hash = hash((gen, children, label))
        return self

    @property
    def is_leaf(self) -> bool:
        return self.gen is None

    @property
    def arity(self) -> int:
        return len(self.leaves)

    @property
    def min_leaf(self) -> int:
        return self.leaves[0]

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, Tree):
            return NotImplemented
        return (self.gen == other.gen and self.label == other.label
                and self.children == other.children)

    def __repr__(self) -> str:
        return f"Tree({format_tree(self)})"

    def __str__(self) -> str:
        return format_tree(self)

    # interned and immutable: copies are the object itself, pickling rebuilds
    # through the interning constructors
    def __copy__(self) -> "Tree":
        return self

    def __deepcopy__(self, memo) -> "Tree":
        return self

    def __reduce__(self):
        if self.is_leaf:
            return (leaf, (self.label,))
        return (node, (self.gen, self.children))


def leaf(label: int) -> Tree:
    """The leaf monomial with the given (positive) label."""
    if label < 1:
        raise TreeError(f"leaf label must be >= 1, got {label}")
    key = (None, (), label)
    cached = Tree._interned.get(key)
    if cached is None:
        cached = Tree._interned[key] = Tree(None, (), label, (label,), 0)
    return cached


def node(gen: str, children: Sequence[Tree]) -> Tree:
    """An internal vertex labelled ``gen`` over the given child subtrees.

    Children must already be in shuffle position: their minimal leaf labels
    strictly increasing, all leaf labels pairwise distinct.
    """
    kids = tuple(children)
    if len(kids) < 1:
        raise TreeError("internal vertex needs at least one child")
    key = (gen, kids, 0)
    cached = Tree._interned.get(key)
    if cached is not None:
        return cached
    prev_min = 0
    for c in kids:
        if c.min_leaf <= prev_min:
            raise TreeError(
                f"children minima must strictly increase: {[str(k) for k in kids]}")
        prev_min = c.min_leaf
    merged = _merge_leaves(kids)
    size = 1 + sum(c.size for c in kids)
    tree = Tree(gen, kids, 0, merged, size)
    Tree._interned[key] = tree
    return tree


def _merge_leaves(kids: tuple[Tree, ...]) -> tuple[int, ...]:
    labels: list[int] = []
    for c in kids:
        labels.extend(c.leaves)
    labels.sort()
    for a, b in zip(labels, labels[1:]):
        if a == b:
            raise TreeError(f"duplicate leaf label {a}")
    return tuple(labels)


def arity(t: Tree) -> int:
    """Number of leaves of a tree monomial."""
    return t.arity


def is_complete(t: Tree) -> bool:
    """True when the leaf labels are exactly 1..arity."""
    return t.leaves == tuple(range(1, t.arity + 1))


# ---------------------------------------------------------------------------
# text form: `x(y(1 3) 2)`, leaves as integers
# ---------------------------------------------------------------------------

def format_tree(t: Tree) -> str:
    if t.is_leaf:
        return str(t.label)
    return f"{t.gen}({' '.join(format_tree(c) for c in t.children)})"


# ---------------------------------------------------------------------------
# monomial orders
# ---------------------------------------------------------------------------

class TreeOrder:
    """Graded path-lexicographic order on equal-arity tree monomials.

    Monomials compare by number of internal vertices first, then by the
    sequence of leaf path words taken in increasing leaf-label order.  The
    path word of a leaf records, top down, (generator rank, child index) for
    every vertex on the root-to-leaf path; words compare degree first, then
    letter by letter.  This order is admissible: it is compatible with
    insertion into any composition context (checked by property tests).

    Two registered strategies differ only in generator precedence:
    ``pathlex`` ranks generators in declaration order, ``revpathlex``
    reverses it.  Dimension counts must agree between the two.
    """

    def __init__(self, order_id: str, precedence: Sequence[str]):
        self.order_id = order_id
        self.precedence = tuple(precedence)
        self._rank = {name: i for i, name in enumerate(self.precedence)}
        if len(self._rank) != len(self.precedence):
            raise TreeError("duplicate generator in precedence list")
        self._keys: dict[Tree, tuple] = {}

    def __repr__(self) -> str:
        return f"TreeOrder({self.order_id}, {'<'.join(self.precedence)})"

    def key(self, t: Tree) -> tuple:
        """Sort key; valid for comparing monomials of equal arity."""
        k = self._keys.get(t)
        if k is None:
            words: dict[int, tuple] = {}
            self._collect(t, (), words)
            k = (t.size, tuple((len(words[l]), words[l]) for l in t.leaves))
            self._keys[t] = k
        return k

    def _collect(self, t: Tree, prefix: tuple, out: dict[int, tuple]) -> None:
        if t.is_leaf:
            out[t.label] = prefix
            return
        try:
            r = self._rank[t.gen]
        except KeyError:
            raise TreeError(f"generator {t.gen!r} not covered by order "
                            f"{self.order_id}") from None
        for i, c in enumerate(t.children):
            self._collect(c, prefix + ((r, i),), out)

    def compare(self, t1: Tree, t2: Tree) -> int:
        """-1, 0, or 1; requires equal arities."""
        if t1.arity != t2.arity:
            raise TreeError(
                f"cannot compare monomials of arities {t1.arity} and {t2.arity}")
        k1, k2 = self.key(t1), self.key(t2)
        if k1 < k2:
            return -1
        if k1 > k2:
            return 1
        return 0

    def max_monomial(self, monomials: Iterable[Tree]) -> Tree:
        return max(monomials, key=self.key)


ORDER_IDS = ("pathlex", "revpathlex")


def order_for(order_id: str, gen_names: Sequence[str]) -> TreeOrder:
    """Build a registered order strategy over the given generator list."""
    if order_id == "pathlex":
        return TreeOrder(order_id, gen_names)
    if order_id == "revpathlex":
        return TreeOrder(order_id, tuple(reversed(gen_names)))
    raise TreeError(f"unknown order id {order_id!r}; known: {ORDER_IDS}")


# ---------------------------------------------------------------------------
# occurrences (divisibility), grafting and substitution
# ---------------------------------------------------------------------------

class Occurrence:
    """An embedding of a pattern monomial as a divisor of a host monomial.

    ``path`` locates the top vertex of the embedded pattern; ``slots`` maps
    the pattern leaves (in increasing label order) to the host subtrees that
    hang off the pattern's boundary; ``vertices`` is the set of host vertex
    paths covered by the pattern.
    """

    __slots__ = ("path", "slots", "vertices")

    def __init__(self, path: tuple[int, ...], slots: tuple[Tree, ...],
                 vertices: frozenset):
        self.path = path
        self.slots = slots
        self.vertices = vertices

    def __repr__(self) -> str:
        return f"Occurrence(path={self.path}, slots={[str(s) for s in self.slots]})"

    def __eq__(self, other) -> bool:
        return (isinstance(other, Occurrence) and self.path == other.path
                and self.slots == other.slots)

    def __hash__(self) -> int:
        return hash((self.path, self.slots))

    def leaf_map(self, pattern: Tree) -> dict[int, Tree]:
        """Pattern leaf label -> host subtree at that slot."""
        return dict(zip(pattern.leaves, self.slots))


def _match_at(pattern: Tree, sub: Tree, path: tuple[int, ...],
              slots: dict[int, Tree], vertices: list) -> bool:
    if pattern.is_leaf:
        slots[pattern.label] = sub
        return True
    if sub.is_leaf or pattern.gen != sub.gen \
            or len(pattern.children) != len(sub.children):
        return False
    vertices.append(path)
    for i, (pc, sc) in enumerate(zip(pattern.children, sub.children)):
        if not _match_at(pc, sc, path + (i,), slots, vertices):
            return False
    return True


def occurrence_at(pattern: Tree, host: Tree, path: tuple[int, ...]) -> Occurrence | None:
    """The unique occurrence of ``pattern`` anchored at ``path``, if any.

    Matching pairs children positionally (forced by the shuffle condition)
    and then checks that slot minima are increasing along the pattern's leaf
    labels, which makes the leaf relabeling an order isomorphism.
    """
    sub = subtree_at(host, path)
    if sub.is_leaf:
        return None
    slots: dict[int, Tree] = {}
    vertices: list = []
    if not _match_at(pattern, sub, path, slots, vertices):
        return None
    prev = 0
    ordered = []
    for lab in pattern.leaves:
        s = slots[lab]
        if s.min_leaf <= prev:
            return None
        prev = s.min_leaf
        ordered.append(s)
    return Occurrence(path, tuple(ordered), frozenset(vertices))


def find_occurrences(pattern: Tree, host: Tree) -> list[Occurrence]:
    """Every embedding of ``pattern`` as a divisor of ``host``."""
    if pattern.is_leaf:
        raise TreeError("pattern must have at least one internal vertex")
    out: list[Occurrence] = []
    for path in iter_positions(host):
        occ = occurrence_at(pattern, host, path)
        if occ is not None:
            out.append(occ)
    return out


def iter_positions(t: Tree, prefix: tuple[int, ...] = ()) -> Iterator[tuple[int, ...]]:
    """Internal vertex paths of ``t`` in pre-order."""
    if t.is_leaf:
        return
    yield prefix
    for i, c in enumerate(t.children):
        yield from iter_positions(c, prefix + (i,))


def subtree_at(t: Tree, path: tuple[int, ...]) -> Tree:
    for i in path:
        t = t.children[i]
    return t


def replace_at(t: Tree, path: tuple[int, ...], sub: Tree) -> Tree:
    """Replace the subtree at ``path``; the new subtree must keep the same
    leaf label set so the shuffle condition along the path is preserved."""
    if not path:
        return sub
    i = path[0]
    kids = list(t.children)
    kids[i] = replace_at(kids[i], path[1:], sub)
    return node(t.gen, kids)


def substitute(t: Tree, assignment: dict[int, Tree]) -> Tree:
    """Replace each leaf ``l`` of ``t`` by ``assignment[l]``.

    Requires the assignment to be min-monotone in the leaf labels (as slot
    maps from occurrences and shuffle compositions always are); the planar
    structure then carries over unchanged and :func:`node` revalidates it.
    """
    if t.is_leaf:
        return assignment[t.label]
    return node(t.gen, [substitute(c, assignment) for c in t.children])


def relabel_ordered(t: Tree, labels: Sequence[int]) -> Tree:
    """Order-isomorphic relabeling: i-th smallest leaf label -> labels[i]."""
    new = sorted(labels)
    if len(new) != t.arity:
        raise TreeError("relabeling size mismatch")
    mapping = dict(zip(t.leaves, new))
    return _relabel(t, mapping)


def _relabel(t: Tree, mapping: dict[int, int]) -> Tree:
    if t.is_leaf:
        return leaf(mapping[t.label])
    return node(t.gen, [_relabel(c, mapping) for c in t.children])


def permute_leaves(t: Tree, mapping: dict[int, int]) -> Tree:
    """Relabel leaves by an arbitrary bijection and re-normalize planarity."""
    if t.is_leaf:
        return leaf(mapping[t.label])
    kids = [permute_leaves(c, mapping) for c in t.children]
    kids.sort(key=lambda c: c.min_leaf)
    return node(t.gen, kids)


# ---------------------------------------------------------------------------
# enumeration
# ---------------------------------------------------------------------------

def compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """Ordered tuples of ``parts`` positive integers summing to ``total``."""
    if parts == 1:
        if total >= 1:
            yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


def min_increasing_blocks(labels: Sequence[int],
                          sizes: Sequence[int]) -> Iterator[tuple[tuple[int, ...], ...]]:
    """Partitions of ``labels`` into blocks of the given sizes whose minima
    strictly increase block to block (the shuffle condition on partitions)."""
    labels = tuple(sorted(labels))
    if sum(sizes) != len(labels):
        raise TreeError("block sizes do not cover the label set")

    def rec(remaining: tuple[int, ...], sizes_left: Sequence[int]):
        if not sizes_left:
            yield ()
            return
        head, rest_sizes = sizes_left[0], sizes_left[1:]
        lo, others = remaining[0], remaining[1:]
        for extra in combinations(others, head - 1):
            block = (lo,) + extra
            rest = tuple(x for x in others if x not in extra)
            for tail in rec(rest, rest_sizes):
                yield (block,) + tail

    yield from rec(labels, tuple(sizes))


@dataclass(frozen=True)
class ShufflePartition:
    """Ordered disjoint blocks covering 1..n with strictly increasing minima."""

    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        seen: set[int] = set()
        prev_min = 0
        for b in self.blocks:
            if not b:
                raise TreeError("empty block in shuffle partition")
            if min(b) <= prev_min:
                raise TreeError("block minima must strictly increase")
            prev_min = min(b)
            for x in b:
                if x in seen:
                    raise TreeError(f"label {x} repeated across blocks")
                seen.add(x)
        n = len(seen)
        if seen != set(range(1, n + 1)):
            raise TreeError("blocks must cover 1..n exactly")

    @property
    def total(self) -> int:
        return sum(len(b) for b in self.blocks)


_ALL_TREES: dict = {}


def _gens_sig(gens: Sequence[GeneratorSymbol]) -> tuple:
    return tuple((g.name, g.arity) for g in gens)


def all_trees(gens: Sequence[GeneratorSymbol], n: int) -> tuple[Tree, ...]:
    """All shuffle tree monomials of arity ``n`` over the given generators,
    with leaves labelled 1..n.  Cached per (generators, n)."""
    for g in gens:
        if g.arity < 2:
            raise TreeError(
                f"enumeration requires generator arity >= 2 (got {g})")
    key = (_gens_sig(gens), n)
    cached = _ALL_TREES.get(key)
    if cached is not None:
        return cached
    if n < 1:
        raise TreeError("arity must be >= 1")
    if n == 1:
        result: tuple[Tree, ...] = (leaf(1),)
    else:
        out: list[Tree] = []
        labels = tuple(range(1, n + 1))
        for g in gens:
            if g.arity > n:
                continue
            for comp in compositions(n, g.arity):
                for blocks in min_increasing_blocks(labels, comp):
                    child_choices = [
                        [relabel_ordered(t, b) for t in all_trees(gens, len(b))]
                        for b in blocks
                    ]
                    for kids in product(*child_choices):
                        out.append(node(g.name, kids))
        result = tuple(out)
    _ALL_TREES[key] = result
    return result


def extensions(t: Tree, target_arity: int,
               gens: Sequence[GeneratorSymbol]) -> list[tuple[Tree, Occurrence]]:
    """All monomials of the target arity divisible by ``t`` at the root,
    together with that root occurrence."""
    k = t.arity
    if target_arity < k:
        return []
    out: list[tuple[Tree, Occurrence]] = []
    pat_leaves = t.leaves
    for comp in compositions(target_arity, k):
        for blocks in min_increasing_blocks(range(1, target_arity + 1), comp):
            slot_choices = [
                [relabel_ordered(s, b) for s in all_trees(gens, len(b))]
                for b in blocks
            ]
            for slots in product(*slot_choices):
                assignment = dict(zip(pat_leaves, slots))
                m = substitute(t, assignment)
                occ = occurrence_at(t, m, ())
                assert occ is not None
                out.append((m, occ))
    return out


def overlap_pairs(t1: Tree, t2: Tree, target_arity: int,
                  gens: Sequence[GeneratorSymbol],
                  require_shared_vertex: bool = True,
                  ) -> list[tuple[Tree, Occurrence, Occurrence]]:
    """Minimal common multiples of ``t1`` and ``t2`` at the exact target
    arity: monomials carrying occurrences of both whose vertex sets jointly
    cover the whole tree (and, by default, intersect)."""
    seen: set[tuple[Tree, tuple, tuple]] = set()
    out: list[tuple[Tree, Occurrence, Occurrence]] = []

    def scan(base: Tree, other: Tree, swap: bool) -> None:
        for m, root_occ in extensions(base, target_arity, gens):
            all_vertices = frozenset(iter_positions(m))
            for occ2 in find_occurrences(other, m):
                if root_occ.path == occ2.path and base is other:
                    continue
                if require_shared_vertex and not (root_occ.vertices & occ2.vertices):
                    continue
                if root_occ.vertices | occ2.vertices != all_vertices:
                    continue
                o1, o2 = (occ2, root_occ) if swap else (root_occ, occ2)
                key = (m, o1.path, o2.path)
                if key in seen:
                    continue
                seen.add(key)
                out.append((m, o1, o2))

    scan(t1, t2, swap=False)
    if t1 is not t2:
        scan(t2, t1, swap=True)
    return out


def common_multiples(t1: Tree, t2: Tree, max_arity: int,
                     gens: Sequence[GeneratorSymbol]) -> list[Tree]:
    """Minimal monomials in which both inputs occur with overlapping
    (vertex-sharing) occurrences, up to the arity bound."""
    if t1.is_leaf or t2.is_leaf:
        raise TreeError("common multiples are defined for non-leaf monomials")
    found: list[Tree] = []
    seen: set[Tree] = set()
    for n in range(max(t1.arity, t2.arity), max_arity + 1):
        for m, _o1, _o2 in overlap_pairs(t1, t2, n, gens):
            if m not in seen:
                seen.add(m)
                found.append(m)
    return found
