"""Arity-stratified Buchberger completion for shuffle operads.

The completion works stratum by stratum: at arity K every S-polynomial of
the rules found so far whose minimal common multiple has arity exactly K is
reduced by the lower-arity rules, and the reduced vectors (together with
any input relations of arity K) are brought to reduced row echelon form by
exact Gaussian elimination.  Echelon pivots become the new rewrite rules of
arity K.  This is equivalent to classical critical-pair completion because
two distinct equal-arity leading monomials never divide one another (an
equal-arity divisor is the whole tree), so all interaction inside a stratum
is plain linear algebra.

Reduction is deterministic (greatest reducible monomial first, divisor
found at the first pre-order position, rules tried in a fixed order) and,
on a frozen completed basis, pure and safe to share between threads.
"""

from __future__ import annotations

import hashlib
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .elements import OperadElement, graft_at
from .presentation import Presentation
from .syntax import format_element, parse_element, parse_monomial
from .trees import (
    GeneratorSymbol,
    Occurrence,
    Tree,
    TreeError,
    TreeOrder,
    extensions,
    find_occurrences,
    iter_positions,
    occurrence_at,
    order_for,
    subtree_at,
)


class GroebnerError(ValueError):
    pass


class BudgetExceededError(GroebnerError):
    """The requested computation exceeds the configured arity budget."""


class BasisFormatError(GroebnerError):
    """Corrupted or incompatible basis file."""


class OrderMismatchError(GroebnerError):
    """Basis was computed under a different monomial order."""


class RewriteRule:
    """A monic rule ``lead -> tail`` standing for the basis element
    ``lead - tail`` with every tail monomial strictly below the lead."""

    __slots__ = ("lead", "tail", "arity", "rid")

    def __init__(self, lead: Tree, tail: OperadElement, rid: int):
        self.lead = lead
        self.tail = tail
        self.arity = lead.arity
        self.rid = rid
        if tail.arity != self.arity:
            raise GroebnerError("rule tail arity differs from lead arity")

    def as_element(self) -> OperadElement:
        return OperadElement.monomial(self.lead) - self.tail

    def __repr__(self) -> str:
        return f"RewriteRule({self.lead} => ...{len(self.tail)} terms)"


class _Reducer:
    """Normal-form engine over a fixed rule set, with per-monomial memo."""

    def __init__(self, rules: Sequence[RewriteRule], order: TreeOrder):
        self.order = order
        self.rules = tuple(rules)
        self._index: dict[str, list[RewriteRule]] = {}
        for r in sorted(self.rules,
                        key=lambda r: (r.arity, order.key(r.lead), r.rid)):
            self._index.setdefault(r.lead.gen, []).append(r)
        self._memo: dict[Tree, dict[Tree, Fraction]] = {}
        self._div_memo: dict[Tree, tuple[RewriteRule, Occurrence] | None] = {}

    def find_divisor(self, m: Tree) -> tuple[RewriteRule, Occurrence] | None:
        """First (pre-order position, rule order) divisor occurrence."""
        try:
            return self._div_memo[m]
        except KeyError:
            pass
        found = None
        for path in iter_positions(m):
            sub = subtree_at(m, path)
            bucket = self._index.get(sub.gen)
            if not bucket:
                continue
            sub_arity = sub.arity
            for rule in bucket:
                if rule.arity > sub_arity:
                    break  # bucket sorted by arity
                occ = occurrence_at(rule.lead, m, path)
                if occ is not None:
                    found = (rule, occ)
                    break
            if found:
                break
        self._div_memo[m] = found
        return found

    def all_applications(self, m: Tree) -> list[tuple[RewriteRule, Occurrence]]:
        """Every (rule, occurrence) pair applicable to the monomial."""
        out = []
        for path in iter_positions(m):
            sub = subtree_at(m, path)
            for rule in self._index.get(sub.gen, ()):
                if rule.arity > sub.arity:
                    break
                occ = occurrence_at(rule.lead, m, path)
                if occ is not None:
                    out.append((rule, occ))
        return out

    def is_normal(self, m: Tree) -> bool:
        return self.find_divisor(m) is None

    def nf_monomial(self, m: Tree) -> dict[Tree, Fraction]:
        memo = self._memo
        cached = memo.get(m)
        if cached is not None:
            return cached
        pending: dict[Tree, OperadElement] = {}
        stack = [m]
        while stack:
            cur = stack[-1]
            if cur in memo:
                stack.pop()
                continue
            rewritten = pending.get(cur)
            if rewritten is None:
                div = self.find_divisor(cur)
                if div is None:
                    memo[cur] = {cur: Fraction(1)}
                    stack.pop()
                    continue
                rule, occ = div
                rewritten = graft_at(cur, occ, rule.tail)
                pending[cur] = rewritten
            missing = [t for t in rewritten.terms if t not in memo]
            if missing:
                stack.extend(missing)
                continue
            acc: dict[Tree, Fraction] = {}
            for t, c in rewritten.terms.items():
                for nt, nc in memo[t].items():
                    s = acc.get(nt, Fraction(0)) + c * nc
                    if s:
                        acc[nt] = s
                    else:
                        acc.pop(nt, None)
            memo[cur] = acc
            del pending[cur]
            stack.pop()
        return memo[m]

    def nf_terms(self, terms: dict[Tree, Fraction]) -> dict[Tree, Fraction]:
        acc: dict[Tree, Fraction] = {}
        for t, c in terms.items():
            for nt, nc in self.nf_monomial(t).items():
                s = acc.get(nt, Fraction(0)) + c * nc
                if s:
                    acc[nt] = s
                else:
                    acc.pop(nt, None)
        return acc

    def nf_element(self, f: OperadElement) -> OperadElement:
        return OperadElement(self.nf_terms(f.terms), f.arity)


class GroebnerBasis:
    """Completed, interreduced rewrite system up to ``max_arity``."""

    def __init__(self, presentation_name: str,
                 generators: tuple[GeneratorSymbol, ...], order_id: str,
                 max_arity: int, rules: Sequence[RewriteRule]):
        self.presentation_name = presentation_name
        self.generators = tuple(generators)
        self.order_id = order_id
        self.max_arity = max_arity
        self.rules = tuple(rules)
        self.order = order_for(order_id, [g.name for g in self.generators])
        self._reducer: _Reducer | None = None

    @property
    def reducer(self) -> _Reducer:
        if self._reducer is None:
            self._reducer = _Reducer(self.rules, self.order)
        return self._reducer

    def rules_by_arity(self) -> dict[int, list[RewriteRule]]:
        grouped: dict[int, list[RewriteRule]] = {}
        for r in self.rules:
            grouped.setdefault(r.arity, []).append(r)
        return grouped

    def rule_counts(self) -> dict[int, int]:
        return {a: len(rs) for a, rs in sorted(self.rules_by_arity().items())}

    def leads(self) -> list[Tree]:
        return [r.lead for r in self.rules]

    def __repr__(self) -> str:
        return (f"GroebnerBasis({self.presentation_name}, order={self.order_id}, "
                f"max_arity={self.max_arity}, rules={self.rule_counts()})")


def reduce_element(f: OperadElement, basis: GroebnerBasis) -> OperadElement:
    """Normal form of ``f`` modulo the completed basis."""
    if f.arity > basis.max_arity:
        raise BudgetExceededError(
            f"element arity {f.arity} exceeds completed range {basis.max_arity}")
    return basis.reducer.nf_element(f)


def reduce_random(f: OperadElement, basis: GroebnerBasis, rng) -> OperadElement:
    """Normal form computed with a randomized strategy (random reducible
    monomial, random applicable rule and position); used to check the
    Church-Rosser property of completed bases."""
    if f.arity > basis.max_arity:
        raise BudgetExceededError(
            f"element arity {f.arity} exceeds completed range {basis.max_arity}")
    reducer = basis.reducer
    terms = dict(f.terms)
    while True:
        reducible = [m for m in terms if reducer.find_divisor(m) is not None]
        if not reducible:
            return OperadElement(terms, f.arity)
        m = reducible[rng.randrange(len(reducible))]
        apps = reducer.all_applications(m)
        rule, occ = apps[rng.randrange(len(apps))]
        c = terms.pop(m)
        for t, v in graft_at(m, occ, rule.tail).terms.items():
            s = terms.get(t, Fraction(0)) + c * v
            if s:
                terms[t] = s
            else:
                terms.pop(t, None)


# ---------------------------------------------------------------------------
# S-polynomials
# ---------------------------------------------------------------------------

def _spoly(m: Tree, r1: RewriteRule, o1: Occurrence, r2: RewriteRule,
           o2: Occurrence) -> OperadElement:
    return graft_at(m, o1, r1.tail) - graft_at(m, o2, r2.tail)


def s_polynomials(r1: RewriteRule, r2: RewriteRule, max_arity: int,
                  gens: Sequence[GeneratorSymbol]) -> list[OperadElement]:
    """All S-polynomials of the two rules from common multiples of arity up
    to ``max_arity`` (vertex-sharing overlaps)."""
    out: list[OperadElement] = []
    lo = max(r1.arity, r2.arity)
    hi = min(max_arity, r1.arity + r2.arity - 2)
    for K in range(lo, hi + 1):
        for m, o1, o2 in _shared_overlaps(r1, r2, K, gens):
            out.append(_spoly(m, r1, o1, r2, o2))
    return out


def _shared_overlaps(r1: RewriteRule, r2: RewriteRule, K: int,
                     gens: Sequence[GeneratorSymbol]):
    seen: set = set()
    for base, other, swap in ((r1, r2, False), (r2, r1, True)):
        for m, root_occ in extensions(base.lead, K, gens):
            allv = frozenset(iter_positions(m))
            for occ in find_occurrences(other.lead, m):
                if base is other and occ.path == root_occ.path:
                    continue
                if not (root_occ.vertices & occ.vertices):
                    continue
                if (root_occ.vertices | occ.vertices) != allv:
                    continue
                o1, o2 = (occ, root_occ) if swap else (root_occ, occ)
                key = (m, o1.path, o2.path)
                if key in seen:
                    continue
                seen.add(key)
                yield m, o1, o2
        if r1 is r2:
            break


# ---------------------------------------------------------------------------
# completion
# ---------------------------------------------------------------------------

def _echelon(vectors: Iterable[dict[Tree, Fraction]],
             order: TreeOrder) -> dict[Tree, dict[Tree, Fraction]]:
    """Reduced row echelon form of the given vectors; returns lead -> monic
    row (tails free of other pivot leads)."""
    pivots: dict[Tree, dict[Tree, Fraction]] = {}
    key = order.key
    for vec in vectors:
        row = dict(vec)
        while row:
            lead = max(row, key=key)
            piv = pivots.get(lead)
            if piv is None:
                lc = row[lead]
                pivots[lead] = {t: c / lc for t, c in row.items()}
                break
            c = row.pop(lead)
            for t, v in piv.items():
                if t is lead:
                    continue
                s = row.get(t, Fraction(0)) - c * v
                if s:
                    row[t] = s
                else:
                    row.pop(t, None)
    # back-substitution, ascending so referenced pivots are already clean
    for lead in sorted(pivots, key=key):
        row = pivots[lead]
        hits = [(t, c) for t, c in row.items() if t is not lead and t in pivots]
        for t, c in hits:
            del row[t]
            for u, v in pivots[t].items():
                if u is t:
                    continue
                s = row.get(u, Fraction(0)) - c * v
                if s:
                    row[u] = s
                else:
                    row.pop(u, None)
    return pivots


def _stratum_spolys(rules: Sequence[RewriteRule], K: int,
                    gens: Sequence[GeneratorSymbol], order: TreeOrder):
    """All S-polynomials at arity exactly K among the given rules.

    One of the two occurrences in a minimal common multiple always sits at
    the root, so extending each lead to arity K and scanning for the other
    occurrence is exhaustive.
    """
    index: dict[str, list[RewriteRule]] = {}
    for r in sorted(rules, key=lambda r: (r.arity, order.key(r.lead), r.rid)):
        index.setdefault(r.lead.gen, []).append(r)
    seen: set = set()
    for r1 in rules:
        if r1.arity >= K:
            continue
        for m, occ1 in extensions(r1.lead, K, gens):
            allv = frozenset(iter_positions(m))
            for path in iter_positions(m):
                sub = subtree_at(m, path)
                for r2 in index.get(sub.gen, ()):
                    if r2.arity > sub.arity:
                        break
                    occ2 = occurrence_at(r2.lead, m, path)
                    if occ2 is None:
                        continue
                    if r2 is r1 and occ2.path == occ1.path:
                        continue
                    if not (occ1.vertices & occ2.vertices):
                        continue
                    if (occ1.vertices | occ2.vertices) != allv:
                        continue
                    pair_key = (m,) + tuple(sorted(((r1.rid, occ1.path),
                                                    (r2.rid, occ2.path))))
                    if pair_key in seen:
                        continue
                    seen.add(pair_key)
                    yield _spoly(m, r1, occ1, r2, occ2)


def buchberger(p: Presentation, max_arity: int, order_id: str = "pathlex",
               progress: Callable[[str], None] | None = None) -> GroebnerBasis:
    """Complete the presentation's relations up to ``max_arity``."""
    if not p.relations:
        return GroebnerBasis(p.name, p.generators, order_id, max_arity, ())
    if p.max_relation_arity > max_arity:
        raise BudgetExceededError(
            f"presentation has relations of arity {p.max_relation_arity} "
            f"beyond the budget {max_arity}")
    order = p.order(order_id)
    rel_groups = p.relations_by_arity()
    rules: list[RewriteRule] = []
    next_rid = 0
    start = min(rel_groups)
    for K in range(start, max_arity + 1):
        reducer = _Reducer(rules, order)

        def reduced_vectors():
            for rel in rel_groups.get(K, ()):
                vec = reducer.nf_terms(rel.terms)
                if vec:
                    yield vec
            for spoly in _stratum_spolys(rules, K, p.generators, order):
                if spoly.is_zero():
                    continue
                vec = reducer.nf_terms(spoly.terms)
                if vec:
                    yield vec

        pivots = _echelon(reduced_vectors(), order)
        for lead in sorted(pivots, key=order.key):
            row = pivots[lead]
            tail = OperadElement(
                {t: -c for t, c in row.items() if t is not lead}, lead.arity)
            rules.append(RewriteRule(lead, tail, next_rid))
            next_rid += 1
        if progress is not None:
            progress(f"arity {K}: {len(pivots)} new rules, {len(rules)} total")
    return GroebnerBasis(p.name, p.generators, order_id, max_arity, rules)


# ---------------------------------------------------------------------------
# persistence
# ---------------------------------------------------------------------------

_MAGIC = "operadgb-basis v1"


def _rules_section(b: GroebnerBasis) -> list[str]:
    lines = []
    for r in sorted(b.rules, key=lambda r: (r.arity, b.order.key(r.lead))):
        tail = format_element(r.tail, b.order) if r.tail else "0"
        lines.append(f"{r.arity} {r.lead} => {tail}")
    return lines


def save_basis(b: GroebnerBasis, path: str) -> None:
    rules = _rules_section(b)
    body = "\n".join(rules)
    checksum = hashlib.sha256(body.encode()).hexdigest()
    header = [
        _MAGIC,
        f"presentation: {b.presentation_name}",
        f"order: {b.order_id}",
        "generators: " + " ".join(f"{g.name}/{g.arity}" for g in b.generators),
        f"max_arity: {b.max_arity}",
        f"rules: {len(rules)}",
        f"checksum: {checksum}",
    ]
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(header) + "\n" + body + ("\n" if body else ""))


def load_basis(path: str, validate: bool = True) -> GroebnerBasis:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    lines = text.splitlines()
    if not lines or lines[0] != _MAGIC:
        raise BasisFormatError(f"not a basis file (expected {_MAGIC!r})")

    def header(idx: int, name: str) -> str:
        if idx >= len(lines) or not lines[idx].startswith(name + ":"):
            raise BasisFormatError(f"missing header field {name!r}")
        return lines[idx].split(":", 1)[1].strip()

    pres_name = header(1, "presentation")
    order_id = header(2, "order")
    gen_spec = header(3, "generators")
    max_arity = int(header(4, "max_arity"))
    count = int(header(5, "rules"))
    checksum = header(6, "checksum")
    body_lines = lines[7:7 + count]
    if len(body_lines) != count:
        raise BasisFormatError("truncated rules section")
    body = "\n".join(body_lines)
    if hashlib.sha256(body.encode()).hexdigest() != checksum:
        raise BasisFormatError("checksum mismatch: file corrupted")
    gens = []
    for chunk in gen_spec.split():
        name, _, ar = chunk.partition("/")
        gens.append(GeneratorSymbol(name, int(ar)))
    gens = tuple(gens)
    rules: list[RewriteRule] = []
    for i, line in enumerate(body_lines):
        try:
            arity_str, rest = line.split(" ", 1)
            lead_str, tail_str = rest.split(" => ")
            lead = parse_monomial(lead_str, gens)
            if tail_str.strip() == "0":
                tail = OperadElement.zero(lead.arity)
            else:
                tail = parse_element(tail_str, gens)
        except (ValueError, TreeError) as exc:
            raise BasisFormatError(f"bad rule line {i + 1}: {exc}") from None
        rules.append(RewriteRule(lead, tail, i))
    basis = GroebnerBasis(pres_name, gens, order_id, max_arity, rules)
    if validate:
        validate_interreduced(basis)
    return basis


def validate_interreduced(b: GroebnerBasis) -> None:
    """Check no lead divides another lead or any tail monomial."""
    for r in b.rules:
        for other in b.rules:
            if other is not r and other.arity <= r.arity:
                if find_occurrences(other.lead, r.lead):
                    raise BasisFormatError(
                        f"lead {r.lead} divisible by lead {other.lead}")
        for t in r.tail.terms:
            if b.reducer.find_divisor(t) is not None:
                raise BasisFormatError(
                    f"tail monomial {t} of rule {r.lead} is reducible")
