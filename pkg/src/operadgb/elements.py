"""Exact-rational linear combinations of shuffle tree monomials.

Elements are canonicalized eagerly (no zero coefficients, one arity per
element) and all coefficients are :class:`fractions.Fraction`; no floating
point appears anywhere, since the dimension tables downstream require exact
rank computations.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .trees import (
    Occurrence,
    ShufflePartition,
    Tree,
    TreeOrder,
    is_complete,
    leaf,
    relabel_ordered,
    replace_at,
    substitute,
)


class ElementError(ValueError):
    """Ill-typed operad element arithmetic (arity or shape mismatch)."""


Coeff = Fraction


class OperadElement:
    """A formal rational combination of equal-arity shuffle tree monomials."""

    __slots__ = ("terms", "arity")

    terms: dict[Tree, Fraction]

    def __init__(self, terms: Mapping[Tree, Fraction | int] | None = None,
                 arity: int | None = None):
        clean: dict[Tree, Fraction] = {}
        for t, c in (terms or {}).items():
            if not isinstance(t, Tree):
                raise ElementError(f"term keys must be tree monomials, got {t!r}")
            c = Fraction(c)
            if c == 0:
                continue
            clean[t] = c
        arities = {t.arity for t in clean}
        if len(arities) > 1:
            raise ElementError(f"mixed arities in element: {sorted(arities)}")
        if arities:
            found = arities.pop()
            if arity is not None and arity != found:
                raise ElementError(f"declared arity {arity} != monomial arity {found}")
            arity = found
        if arity is None:
            raise ElementError("zero element needs an explicit arity")
        self.terms = clean
        self.arity = arity

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, arity: int) -> "OperadElement":
        return cls({}, arity)

    @classmethod
    def monomial(cls, t: Tree, coeff: Fraction | int = 1) -> "OperadElement":
        return cls({t: Fraction(coeff)})

    # -- structure ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, OperadElement):
            return NotImplemented
        return self.arity == other.arity and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.arity, frozenset(self.terms.items())))

    def coeff(self, t: Tree) -> Fraction:
        return self.terms.get(t, Fraction(0))

    def sorted_terms(self, order: TreeOrder) -> list[tuple[Tree, Fraction]]:
        """Terms in descending monomial order."""
        return sorted(self.terms.items(), key=lambda tc: order.key(tc[0]),
                      reverse=True)

    def leading_monomial(self, order: TreeOrder) -> Tree:
        if not self.terms:
            raise ElementError("zero element has no leading monomial")
        return max(self.terms, key=order.key)

    def leading_coeff(self, order: TreeOrder) -> Fraction:
        return self.terms[self.leading_monomial(order)]

    # -- linear algebra ----------------------------------------------------

    def __add__(self, other: "OperadElement") -> "OperadElement":
        if self.arity != other.arity:
            raise ElementError(
                f"arity mismatch in addition: {self.arity} vs {other.arity}")
        out = dict(self.terms)
        for t, c in other.terms.items():
            s = out.get(t, Fraction(0)) + c
            if s:
                out[t] = s
            else:
                out.pop(t, None)
        return OperadElement(out, self.arity)

    def __neg__(self) -> "OperadElement":
        return OperadElement({t: -c for t, c in self.terms.items()}, self.arity)

    def __sub__(self, other: "OperadElement") -> "OperadElement":
        return self + (-other)

    def scale(self, c: Fraction | int) -> "OperadElement":
        c = Fraction(c)
        if c == 0:
            return OperadElement.zero(self.arity)
        return OperadElement({t: c * v for t, v in self.terms.items()}, self.arity)

    def __rmul__(self, c) -> "OperadElement":
        return self.scale(c)

    def monic(self, order: TreeOrder) -> "OperadElement":
        if not self.terms:
            return self
        lc = self.leading_coeff(order)
        if lc == 1:
            return self
        return self.scale(Fraction(1) / lc)


def add(f: OperadElement, g: OperadElement) -> OperadElement:
    """Coefficientwise sum; arities must agree."""
    return f + g


def element_from_terms(pairs: Iterable[tuple[Fraction | int, Tree]],
                       arity: int | None = None) -> OperadElement:
    acc: dict[Tree, Fraction] = {}
    for c, t in pairs:
        acc[t] = acc.get(t, Fraction(0)) + Fraction(c)
    return OperadElement(acc, arity)


# ---------------------------------------------------------------------------
# shuffle composition and grafting
# ---------------------------------------------------------------------------

def compose_monomials(f: Tree, pi: ShufflePartition, gs: Sequence[Tree]) -> Tree:
    """gamma_pi on monomials: graft g_i onto input i of f, distributing the
    output leaf labels according to the blocks of pi."""
    if len(gs) != f.arity:
        raise ElementError(
            f"composition needs {f.arity} arguments, got {len(gs)}")
    if len(pi.blocks) != len(gs):
        raise ElementError("partition block count must match argument count")
    for b, g in zip(pi.blocks, gs):
        if len(b) != g.arity:
            raise ElementError(
                f"block size {len(b)} does not match argument arity {g.arity}")
    assignment = {
        lab: relabel_ordered(g, b)
        for lab, b, g in zip(f.leaves, pi.blocks, gs)
    }
    return substitute(f, assignment)


def shuffle_compose(f: OperadElement, pi: ShufflePartition,
                    gs: Sequence[OperadElement]) -> OperadElement:
    """Bilinear extension of gamma_pi to elements."""
    if len(gs) != f.arity:
        raise ElementError(
            f"composition needs {f.arity} arguments, got {len(gs)}")
    n = pi.total
    acc: dict[Tree, Fraction] = {}
    for tf, cf in f.terms.items():
        for choice in _term_products(gs):
            coeff = cf
            mons: list[Tree] = []
            for tg, cg in choice:
                coeff *= cg
                mons.append(tg)
            m = compose_monomials(tf, pi, mons)
            s = acc.get(m, Fraction(0)) + coeff
            if s:
                acc[m] = s
            else:
                acc.pop(m, None)
    return OperadElement(acc, n)


def _term_products(gs: Sequence[OperadElement]):
    if not gs:
        yield ()
        return
    head, rest = gs[0], gs[1:]
    for item in head.terms.items():
        for tail in _term_products(rest):
            yield (item,) + tail


def identity_partition(n: int) -> ShufflePartition:
    return ShufflePartition(tuple((i,) for i in range(1, n + 1)))


def identity_args(n: int) -> list[OperadElement]:
    return [OperadElement.monomial(leaf(1)) for _ in range(n)]


def graft_at(host: Tree, occ: Occurrence, replacement: OperadElement) -> OperadElement:
    """Replace the divisor at ``occ`` by ``replacement``, linearly.

    Each monomial of the replacement is substituted with the occurrence's
    slot subtrees and re-grafted into the host at the occurrence path; this
    is the single reduction step of the rewriting engine.
    """
    if replacement.arity != len(occ.slots):
        raise ElementError(
            f"replacement arity {replacement.arity} does not fit occurrence "
            f"with {len(occ.slots)} slots")
    acc: dict[Tree, Fraction] = {}
    for t, c in replacement.terms.items():
        assignment = dict(zip(t.leaves, occ.slots))
        grafted = replace_at(host, occ.path, substitute(t, assignment))
        s = acc.get(grafted, Fraction(0)) + c
        if s:
            acc[grafted] = s
        else:
            acc.pop(grafted, None)
    return OperadElement(acc, host.arity)


def validate_complete(f: OperadElement) -> OperadElement:
    """Check every monomial uses leaf labels 1..n exactly."""
    for t in f.terms:
        if not is_complete(t):
            raise ElementError(f"monomial {t} does not use labels 1..{t.arity}")
    return f
