"""Differential Poisson rewriting over a free Gelfand-Dorfman basis.

The carrier is the symmetric algebra on the free Lie algebra over derived
letters b^(n), where b runs over multilinear normal monomials exported by
the Groebner engine.  Weight-(-1) multilinear monomials rewrite, by the two
ideal-generated rule families below, down to plain GD expressions; critical
pairs of the rewriting surface exactly the special identities.

Lie factors are stored as right-nested bracket chains {g1,{g2,...{u,v}...}}
with the innermost pair ordered largest letter first (sign absorbed into
the coefficient); right-nested chains span every multilinear Lie element,
so no Lyndon-word machinery is needed at rewrite time.  Two rule shapes
act on a product of chains:

* L-rules (from the universal differential Lie envelope): the innermost
  bracket {a, b^(n)} with a underived rewrites to [a,b]^(n) minus the
  binomial tail of mixed-derivative brackets.
* P-rules (from the Poisson envelope ideal): an underived single factor a
  times a chain ending in a derived letter b^(n) absorbs a via the Leibniz
  expansion of {g1,...,{gk, a b^(n) - ...}}, trading the product for
  chains over GD composites.

Every rewrite strictly decreases the measure (bracket count, multiset of
derivative orders, free underived letters, L-reducible brackets), which is
asserted on each step, so normal forms always exist and land in the span
of the basis letters for weight-(-1) inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations
from math import comb
from typing import Iterable, NamedTuple, Sequence

from .elements import OperadElement
from .groebner import GroebnerBasis, buchberger, reduce_element
from .presentation import Presentation, permute_element
from .trees import Tree, leaf, node, relabel_ordered


class DiffPoissonError(ValueError):
    pass


class BasisElem:
    """A basis letter: a normal GD monomial over a fixed variable set."""

    __slots__ = ("tree", "vars", "key")

    def __init__(self, tree: Tree, vars: tuple[int, ...], key: tuple):
        self.tree = tree
        self.vars = vars
        self.key = key

    @property
    def degree(self) -> int:
        return len(self.vars)

    def __repr__(self) -> str:
        return f"BasisElem({self.tree}@{self.vars})"


class Letter(NamedTuple):
    base: BasisElem
    order: int


Chain = tuple  # tuple[Letter, ...], right-nested bracket chain
PMonomial = tuple  # tuple[Chain, ...], sorted commutative product

App = tuple  # ("L", ci) | ("P0", ai, bi) | ("P", ai, ci, flip)


def letter_weight(l: Letter) -> int:
    return l.order - 1


def chain_weight(c: Chain) -> int:
    return sum(l.order - 1 for l in c) + len(c) - 1


def monomial_weight(pm: PMonomial) -> int:
    return sum(chain_weight(c) for c in pm)


def monomial_degree(pm: PMonomial) -> int:
    return sum(l.base.degree for c in pm for l in c)


def measure(pm: PMonomial) -> tuple:
    """Termination measure, strictly decreasing along every rewrite."""
    brackets = sum(len(c) - 1 for c in pm)
    derivs = tuple(sorted((l.order for c in pm for l in c), reverse=True))
    free_underived = sum(1 for c in pm if len(c) == 1 and c[0].order == 0)
    l_hot = sum(1 for c in pm if len(c) >= 2 and c[-2].order == 0)
    return (brackets, derivs, free_underived, l_hot)


def app_footprint(app: App) -> frozenset:
    kind = app[0]
    if kind == "L":
        return frozenset((app[1],))
    return frozenset((app[1], app[2]))


@dataclass(frozen=True)
class Ambiguity:
    """A monomial with two overlapping rule applications."""

    monomial: PMonomial
    app1: App
    app2: App

    @property
    def degree(self) -> int:
        return monomial_degree(self.monomial)


VAR_NAMES = "abcdefghij"


class RewriteContext:
    """Rule engine bound to one completed GD-type Groebner basis.

    The basis supplies both the letter alphabet (its normal monomials) and
    the reduction of GD products back to that alphabet, so rewriting is
    always performed modulo the cubic relations.
    """

    def __init__(self, basis: GroebnerBasis):
        self.basis = basis
        self.order = basis.order
        self._bases: dict[tuple[Tree, tuple[int, ...]], BasisElem] = {}
        self._circ: dict = {}
        self._bracket: dict = {}

    # -- letters -----------------------------------------------------------

    def base(self, tree: Tree, vars: Sequence[int]) -> BasisElem:
        vars = tuple(vars)
        key = (tree, vars)
        found = self._bases.get(key)
        if found is None:
            if tree.arity != len(vars):
                raise DiffPoissonError("variable set does not match arity")
            if tuple(sorted(vars)) != vars:
                raise DiffPoissonError("variable sets are kept sorted")
            found = BasisElem(tree, vars,
                              (len(vars), vars, self.order.key(tree)))
            self._bases[key] = found
        return found

    def var_base(self, v: int) -> BasisElem:
        return self.base(leaf(1), (v,))

    def var_letter(self, v: int, order: int = 0) -> Letter:
        return Letter(self.var_base(v), order)

    @staticmethod
    def letter_key(l: Letter) -> tuple:
        return (l.base.key, -l.order)

    def chain_key(self, c: Chain) -> tuple:
        return (len(c), tuple(self.letter_key(l) for l in c))

    def pm_key(self, pm: PMonomial) -> tuple:
        return tuple(self.chain_key(c) for c in pm)

    # -- constructors ------------------------------------------------------

    def make_chain(self, letters: Sequence[Letter]) -> tuple[int, Chain | None]:
        """Canonicalize the innermost bracket (largest letter first);
        returns (sign, chain) with chain None when the bracket vanishes."""
        letters = tuple(letters)
        if len(letters) < 2:
            return 1, letters
        u, v = letters[-2], letters[-1]
        ku, kv = self.letter_key(u), self.letter_key(v)
        if ku == kv:
            return 1, None
        if ku < kv:
            return -1, letters[:-2] + (v, u)
        return 1, letters

    def make_monomial(self, chains: Iterable[Chain]) -> PMonomial:
        return tuple(sorted(chains, key=self.chain_key))

    # -- GD arithmetic on basis letters -------------------------------------

    def _compose(self, b1: BasisElem, b2: BasisElem, bracket: bool) \
            -> dict[BasisElem, Fraction]:
        cache = self._bracket if bracket else self._circ
        hit = cache.get((b1, b2))
        if hit is not None:
            return hit
        union = tuple(sorted(b1.vars + b2.vars))
        if len(set(union)) != len(union):
            raise DiffPoissonError("letters must have disjoint variables")
        pos = {v: i + 1 for i, v in enumerate(union)}
        t1 = relabel_ordered(b1.tree, [pos[v] for v in b1.vars])
        t2 = relabel_ordered(b2.tree, [pos[v] for v in b2.vars])
        sign = 1
        if b1.vars[0] < b2.vars[0]:
            gen = "z" if bracket else "x"
            tree = node(gen, (t1, t2))
        else:
            gen = "z" if bracket else "y"
            tree = node(gen, (t2, t1))
            if bracket:
                sign = -1
        nf = reduce_element(OperadElement.monomial(tree, sign), self.basis)
        result = {self.base(t, union): c for t, c in nf.terms.items()}
        cache[(b1, b2)] = result
        return result

    def circ_pair(self, b1: BasisElem, b2: BasisElem) -> dict[BasisElem, Fraction]:
        return self._compose(b1, b2, bracket=False)

    def bracket_pair(self, b1: BasisElem, b2: BasisElem) -> dict[BasisElem, Fraction]:
        return self._compose(b1, b2, bracket=True)

    # -- rule applications ---------------------------------------------------

    def applications(self, pm: PMonomial) -> list[App]:
        apps: list[App] = []
        singles0 = []
        for ci, c in enumerate(pm):
            if len(c) >= 2 and c[-2].order == 0:
                apps.append(("L", ci))
            if len(c) == 1 and c[0].order == 0:
                singles0.append(ci)
        for ai in singles0:
            for ci, c in enumerate(pm):
                if ci == ai:
                    continue
                if len(c) == 1 and c[0].order >= 1:
                    apps.append(("P0", ai, ci))
                elif len(c) >= 2:
                    if c[-1].order >= 1:
                        apps.append(("P", ai, ci, 0))
                    if c[-2].order >= 1:
                        apps.append(("P", ai, ci, 1))
        apps.sort()
        return apps

    def _replace(self, pm: PMonomial, dropped: tuple[int, ...],
                 added: Iterable[Chain]) -> PMonomial:
        kept = [c for i, c in enumerate(pm) if i not in dropped]
        kept.extend(added)
        return self.make_monomial(kept)

    def apply(self, pm: PMonomial, app: App) -> dict[PMonomial, Fraction]:
        """One rewrite step at the given application; returns the
        replacement of pm as a combination of monomials."""
        kind = app[0]
        if kind == "L":
            acc = self._apply_lie(pm, app[1])
        elif kind == "P0":
            acc = self._apply_p0(pm, app[1], app[2])
        else:
            acc = self._apply_poisson(pm, app[1], app[2], app[3])
        before = measure(pm)
        for out_pm in acc:
            assert measure(out_pm) < before, \
                f"termination measure failed at {app} on {pm}"
        return acc

    def _add(self, acc, pm, coeff) -> None:
        s = acc.get(pm, Fraction(0)) + coeff
        if s:
            acc[pm] = s
        else:
            acc.pop(pm, None)

    def _apply_lie(self, pm: PMonomial, ci: int) -> dict[PMonomial, Fraction]:
        chain = pm[ci]
        u, v = chain[-2], chain[-1]
        if u.order != 0:
            raise DiffPoissonError("L-rule needs an underived larger letter")
        prefix = chain[:-2]
        a, b, n = u.base, v.base, v.order
        acc: dict[PMonomial, Fraction] = {}
        for beta, cb in self.bracket_pair(a, b).items():
            s, nc = self.make_chain(prefix + (Letter(beta, n),))
            if nc is not None:
                self._add(acc, self._replace(pm, (ci,), [nc]), cb * s)
        for i in range(1, n + 1):
            s, nc = self.make_chain(prefix + (Letter(a, i), Letter(b, n - i)))
            if nc is not None:
                self._add(acc, self._replace(pm, (ci,), [nc]),
                          -comb(n, i) * s)
        return acc

    def _apply_p0(self, pm: PMonomial, ai: int, bi: int) -> dict[PMonomial, Fraction]:
        alpha = pm[ai][0]
        blet = pm[bi][0]
        n = blet.order
        acc: dict[PMonomial, Fraction] = {}
        for delta, cd in self.circ_pair(alpha.base, blet.base).items():
            self._add(acc, self._replace(pm, (ai, bi),
                                         [(Letter(delta, n - 1),)]), cd)
        for i in range(1, n):
            self._add(acc, self._replace(
                pm, (ai, bi),
                [(Letter(alpha.base, i),), (Letter(blet.base, n - i),)]),
                -comb(n - 1, i))
        return acc

    def _apply_poisson(self, pm: PMonomial, ai: int, ci: int,
                       flip: int) -> dict[PMonomial, Fraction]:
        alpha = pm[ai][0]
        chain = pm[ci]
        if flip:
            interior = chain[:-2] + (chain[-1],)
            blet = chain[-2]
            sgn = Fraction(-1)
        else:
            interior = chain[:-1]
            blet = chain[-1]
            sgn = Fraction(1)
        n = blet.order
        if n < 1 or alpha.order != 0:
            raise DiffPoissonError("P-rule needs underived factor and derived chain end")
        k = len(interior)
        acc: dict[PMonomial, Fraction] = {}
        # {g_1,...,{g_k, (alpha o beta)^(n-1)}}
        for delta, cd in self.circ_pair(alpha.base, blet.base).items():
            s, nc = self.make_chain(interior + (Letter(delta, n - 1),))
            if nc is not None:
                self._add(acc, self._replace(pm, (ai, ci), [nc]), sgn * cd * s)
        # - sum_i C(n-1,i) {chain, alpha^(i) beta^(n-i)} via Leibniz
        for i in range(1, n):
            coeff = -sgn * comb(n - 1, i)
            for pm2, c2 in self._leibniz(pm, (ai, ci), interior,
                                         Letter(alpha.base, i),
                                         Letter(blet.base, n - i)):
                self._add(acc, pm2, coeff * c2)
        # - sum over nonempty S of {g_S, alpha} {g_rest, beta^(n)}
        idx = tuple(range(k))
        for r in range(1, k + 1):
            for S in combinations(idx, r):
                rest = tuple(j for j in idx if j not in S)
                s1, c1 = self.make_chain(
                    tuple(interior[j] for j in S) + (alpha,))
                if c1 is None:
                    continue
                s2, c2 = self.make_chain(
                    tuple(interior[j] for j in rest) + (blet,))
                if c2 is None:
                    continue
                self._add(acc, self._replace(pm, (ai, ci), [c1, c2]),
                          -sgn * s1 * s2)
        return acc

    def _leibniz(self, pm, dropped, interior, u: Letter, v: Letter):
        """{g_1,...,{g_k, u v}...} expanded over subsets of the interior."""
        out = []
        idx = tuple(range(len(interior)))
        for r in range(len(interior) + 1):
            for S in combinations(idx, r):
                rest = tuple(j for j in idx if j not in S)
                s1, c1 = self.make_chain(tuple(interior[j] for j in S) + (u,))
                if c1 is None:
                    continue
                s2, c2 = self.make_chain(
                    tuple(interior[j] for j in rest) + (v,))
                if c2 is None:
                    continue
                out.append((self._replace(pm, dropped, [c1, c2]),
                            Fraction(s1 * s2)))
        return out

    # -- normal forms --------------------------------------------------------

    def normal_form(self, poly: dict[PMonomial, Fraction],
                    trace: list | None = None) -> dict[PMonomial, Fraction]:
        """Deterministic normal form: rewrite the largest reducible monomial
        with its first applicable rule until nothing applies."""
        work = dict(poly)
        out: dict[PMonomial, Fraction] = {}
        while work:
            pm = max(work, key=self.pm_key)
            c = work.pop(pm)
            apps = self.applications(pm)
            if not apps:
                s = out.get(pm, Fraction(0)) + c
                if s:
                    out[pm] = s
                else:
                    out.pop(pm, None)
                continue
            app = apps[0]
            repl = self.apply(pm, app)
            if trace is not None:
                trace.append((describe_app(pm, app), pm, dict(repl)))
            for pm2, c2 in repl.items():
                s = work.get(pm2, Fraction(0)) + c * c2
                if s:
                    work[pm2] = s
                else:
                    work.pop(pm2, None)
        return out

    def normal_form_of(self, pm: PMonomial,
                       trace: list | None = None) -> dict[PMonomial, Fraction]:
        return self.normal_form({pm: Fraction(1)}, trace)

    def to_operad(self, nf: dict[PMonomial, Fraction], nvars: int) -> OperadElement:
        """Interpret a bracket-free, derivative-free normal form as an
        operad element over the full variable set."""
        want = tuple(range(1, nvars + 1))
        terms: dict[Tree, Fraction] = {}
        for pm, c in nf.items():
            if len(pm) != 1 or len(pm[0]) != 1 or pm[0][0].order != 0:
                raise DiffPoissonError(
                    f"normal form is not a GD expression: {format_monomial(pm)}")
            base = pm[0][0].base
            if base.vars != want:
                raise DiffPoissonError("normal form does not cover all variables")
            terms[base.tree] = terms.get(base.tree, Fraction(0)) + c
        return OperadElement(terms, nvars)

    # -- weight-(-1) enumeration and ambiguities ------------------------------

    def weight_minus_one_monomials(self, n: int) -> list[PMonomial]:
        """All multilinear weight-(-1) monomials of degree n over single
        variables, in canonical chain form."""
        out: set[PMonomial] = set()
        variables = list(range(1, n + 1))
        for blocks in set_partitions(variables):
            deriv_budget = len(blocks) - 1
            for orders in weak_compositions(deriv_budget, n):
                chain_options = []
                for block in blocks:
                    opts = []
                    for perm in permutations(block):
                        letters = tuple(self.var_letter(v, orders[v - 1])
                                        for v in perm)
                        if len(letters) >= 2 and \
                                self.letter_key(letters[-2]) <= \
                                self.letter_key(letters[-1]):
                            continue  # keep one orientation per bracket
                        opts.append(letters)
                    chain_options.append(opts)
                for chains in _product(chain_options):
                    out.add(self.make_monomial(chains))
        return sorted(out, key=self.pm_key)

    def enumerate_ambiguities(self, n: int) -> list[Ambiguity]:
        """Monomials of degree n carrying two overlapping rule applications.

        Bracket-free monomials are omitted (purely commutative critical
        pairs are confluent) and pairs of L-rules never overlap, so pure
        Lie pairs are excluded automatically.
        """
        if n < 3:
            raise DiffPoissonError("critical pairs start at degree 3")
        if n > self.basis.max_arity:
            raise DiffPoissonError(
                f"degree {n} residues need a basis completed to arity {n}, "
                f"got {self.basis.max_arity}")
        ambs: list[Ambiguity] = []
        for pm in self.weight_minus_one_monomials(n):
            if all(len(c) == 1 for c in pm):
                continue
            apps = self.applications(pm)
            for i in range(len(apps)):
                fi = app_footprint(apps[i])
                for j in range(i + 1, len(apps)):
                    if fi & app_footprint(apps[j]):
                        ambs.append(Ambiguity(pm, apps[i], apps[j]))
        return ambs

    def residue(self, amb: Ambiguity,
                modulo: GroebnerBasis | None = None,
                traces: tuple[list, list] | None = None) -> OperadElement:
        """Difference of the two normal forms of the ambiguity, as a GD
        expression (already reduced modulo the context's relations); when
        ``modulo`` is given the result is further reduced by that basis."""
        n = amb.degree
        t1 = traces[0] if traces else None
        t2 = traces[1] if traces else None
        route1 = self.normal_form(self.apply(amb.monomial, amb.app1), t1)
        route2 = self.normal_form(self.apply(amb.monomial, amb.app2), t2)
        res = self.to_operad(route1, n) - self.to_operad(route2, n)
        if modulo is not None:
            res = reduce_element(res, modulo)
        return res

    def gd_expression(self, identity_instance: OperadElement) -> dict[BasisElem, Fraction]:
        nf = reduce_element(identity_instance, self.basis)
        vars = tuple(range(1, nf.arity + 1))
        return {self.base(t, vars): c for t, c in nf.terms.items()}


def _product(choices):
    if not choices:
        yield ()
        return
    head, rest = choices[0], choices[1:]
    for h in head:
        for tail in _product(rest):
            yield (h,) + tail


def set_partitions(items: list) -> Iterable[list[list]]:
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]
        yield [[first]] + part


def weak_compositions(total: int, parts: int) -> Iterable[tuple[int, ...]]:
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in weak_compositions(total - first, parts - 1):
            yield (first,) + rest


# ---------------------------------------------------------------------------
# display
# ---------------------------------------------------------------------------

def format_letter(l: Letter) -> str:
    base = l.base
    if base.degree == 1:
        body = VAR_NAMES[base.vars[0] - 1]
    else:
        names = {i + 1: VAR_NAMES[v - 1] for i, v in enumerate(base.vars)}
        body = "(" + _tree_with_names(base.tree, names) + ")"
    if l.order <= 3:
        return body + "'" * l.order
    return f"{body}^({l.order})"


def _tree_with_names(t: Tree, names: dict[int, str]) -> str:
    if t.is_leaf:
        return names[t.label]
    return f"{t.gen}({' '.join(_tree_with_names(c, names) for c in t.children)})"


def format_chain(c: Chain) -> str:
    body = format_letter(c[-1])
    for l in reversed(c[:-1]):
        body = f"{{{format_letter(l)},{body}}}"
    return body


def format_monomial(pm: PMonomial) -> str:
    singles = [format_chain(c) for c in pm if len(c) == 1]
    brackets = [format_chain(c) for c in pm if len(c) >= 2]
    return " ".join(singles + brackets) or "1"


def describe_app(pm: PMonomial, app: App) -> str:
    kind = app[0]
    if kind == "L":
        c = pm[app[1]]
        return f"L[{format_letter(c[-2])},{format_letter(c[-1])}]"
    if kind == "P0":
        return (f"P0[{format_letter(pm[app[1]][0])};"
                f"{format_letter(pm[app[2]][0])}]")
    flip = "~" if app[3] else ""
    return (f"P{flip}[{format_letter(pm[app[1]][0])};"
            f"{format_chain(pm[app[2]])}]")


# ---------------------------------------------------------------------------
# degree-4 family classification
# ---------------------------------------------------------------------------

def classify_degree4(pm: PMonomial) -> str:
    """Assign a degree-4 ambiguous monomial to one of the five families.

    (A1)/(A2) split the single-plus-3-chain shape by whether the derived
    letter's base is above or below the chain's interior letter; the other
    three shapes are two singles (or a single plus a derived single) times
    a 2-bracket distinguished by derivative placement.
    """
    lens = sorted(len(c) for c in pm)
    if lens == [1, 3]:
        chain = next(c for c in pm if len(c) == 3)
        q, _r, s = chain
        return "A1" if s.base.key > q.base.key else "A2"
    if lens == [1, 1, 2]:
        chain = next(c for c in pm if len(c) == 2)
        orders = sorted(l.order for l in chain)
        if orders == [0, 2]:
            return "A5"
        if orders == [1, 1]:
            return "A4"
        if orders == [0, 1]:
            return "A3"
    raise DiffPoissonError(f"unrecognized degree-4 shape: {format_monomial(pm)}")


def family_signature(pm: PMonomial) -> tuple:
    """Shape of a monomial up to renaming letters and flipping innermost
    brackets: the multiset of (chain length, derivative placements)."""
    sigs = []
    for c in pm:
        orders = tuple(l.order for l in c)
        if len(orders) >= 2:
            orders = orders[:-2] + tuple(sorted(orders[-2:], reverse=True))
        sigs.append((len(c), orders))
    return tuple(sorted(sigs))


# ---------------------------------------------------------------------------
# residue analysis
# ---------------------------------------------------------------------------

def element_orbit(e: OperadElement) -> list[OperadElement]:
    """All symmetric-group images of a multilinear element."""
    n = e.arity
    out = []
    for sigma in permutations(range(1, n + 1)):
        perm = {i + 1: sigma[i] for i in range(n)}
        out.append(permute_element(e, perm))
    return out


def orbit_pivots(elems: Iterable[OperadElement], basis: GroebnerBasis,
                 pivots: dict | None = None) -> dict:
    """Gaussian pivots of the span of all orbit images of the given
    elements, reduced modulo the basis."""
    order = basis.order
    pivots = dict(pivots or {})
    for e in elems:
        for img in element_orbit(e):
            row = dict(reduce_element(img, basis).terms)
            while row:
                lead = max(row, key=order.key)
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
    return pivots


def independent_identities(residues: Sequence[OperadElement],
                           gd_presentation: Presentation,
                           arity: int) -> list[OperadElement]:
    """Greedy filtration: keep the residues that are new as identities,
    i.e. not consequences of the presentation plus the previously kept
    residues (with their full permutation orbits)."""
    found: list[OperadElement] = []
    relations = list(gd_presentation.relations)
    basis = buchberger(
        Presentation(gd_presentation.name, gd_presentation.generators,
                     tuple(relations)), arity)
    for res in residues:
        if res.is_zero():
            continue
        if reduce_element(res, basis).is_zero():
            continue
        found.append(res)
        for img in element_orbit(res):
            relations.append(img)
        basis = buchberger(
            Presentation(f"{gd_presentation.name}+found",
                         gd_presentation.generators, tuple(relations)), arity)
    return found


# ---------------------------------------------------------------------------
# Lyndon-Shirshov words over abstract derived letters
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DiffGenerator:
    """An abstract derived letter b^(n): a base symbol plus a derivative
    order, ordered by (base, -order) lexicographically."""

    base: str
    order: int
    base_rank: int = 0

    def key(self) -> tuple:
        return (self.base_rank, -self.order)

    def __str__(self) -> str:
        if self.order <= 3:
            return self.base + "'" * self.order
        return f"{self.base}^({self.order})"


@dataclass(frozen=True)
class LSWord:
    """An associative Lyndon-Shirshov word with its standard bracketing."""

    letters: tuple[DiffGenerator, ...]

    def bracketing(self):
        return _standard_bracketing(self.letters)

    def __str__(self) -> str:
        return " ".join(str(l) for l in self.letters)


def _word_key(letters: Sequence[DiffGenerator]) -> tuple:
    return tuple(l.key() for l in letters)


def _is_lyndon(letters: Sequence[DiffGenerator]) -> bool:
    """Smaller than every proper rotation (words of equal length compare
    letterwise under the derived-letter order)."""
    w = _word_key(letters)
    n = len(w)
    if n == 1:
        return True
    for i in range(1, n):
        if not w < w[i:] + w[:i]:
            return False
    return True


def _standard_bracketing(letters: tuple[DiffGenerator, ...]):
    if len(letters) == 1:
        return letters[0]
    # split at the longest proper suffix that is itself a Lyndon word
    for i in range(1, len(letters)):
        if _is_lyndon(letters[i:]):
            return (_standard_bracketing(letters[:i]),
                    _standard_bracketing(letters[i:]))
    raise DiffPoissonError("not a Lyndon word")


def _reduced_pattern(letters: Sequence[DiffGenerator]) -> bool:
    """Words of the universal differential envelope basis: groups of weakly
    ascending underived letters each capped by a derived letter at least as
    large (single letters are always allowed)."""
    if len(letters) == 1:
        return True
    group: list[DiffGenerator] = []
    for l in letters:
        if l.order == 0:
            if group and group[-1].base_rank > l.base_rank:
                return False
            group.append(l)
        else:
            if group and group[-1].base_rank > l.base_rank:
                return False
            group = []
    return not group  # every group must end with a derived letter


def ls_basis(bases: Sequence[str], degree: int, weight: int,
             max_order: int | None = None) -> list[LSWord]:
    """Reduced Lyndon-Shirshov words over distinct letters from ``bases``
    (listed in ascending order) with the given degree and weight.

    The weight of a degree-d word with derivative orders m_1..m_d is
    sum(m_i) - 1, so the total derivative order is weight + 1.
    """
    total = weight + 1
    if total < 0 or degree < 1 or degree > len(bases):
        return []
    cap = total if max_order is None else min(max_order, total)
    out: list[LSWord] = []
    for names in permutations(range(len(bases)), degree):
        for orders in weak_compositions(total, degree):
            if any(o > cap for o in orders):
                continue
            letters = tuple(DiffGenerator(bases[i], o, i)
                            for i, o in zip(names, orders))
            if not _reduced_pattern(letters):
                continue
            if not _is_lyndon(letters):
                continue
            out.append(LSWord(letters))
    out.sort(key=lambda w: _word_key(w.letters))
    return out


# ---------------------------------------------------------------------------
# rule listings
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LieRule:
    """An instance of the differential Lie envelope family with principal
    part {a, b^(n)}, a > b."""

    a: BasisElem
    b: BasisElem
    n: int

    def principal(self, ctx: RewriteContext) -> PMonomial:
        _s, chain = ctx.make_chain((Letter(self.a, 0), Letter(self.b, self.n)))
        return ctx.make_monomial([chain])

    def replacement(self, ctx: RewriteContext) -> dict[PMonomial, Fraction]:
        pm = self.principal(ctx)
        return ctx.apply(pm, ("L", 0))

    def __str__(self) -> str:
        return f"{{a,b^({self.n})}} -> [a,b]^({self.n}) - sum"


def lie_rewrite_rules(ctx: RewriteContext, bases: Sequence[BasisElem],
                      max_order: int) -> list[LieRule]:
    """Rules {a, b^(n)} for all pairs a > b in the slice, n <= max_order."""
    rules = []
    ordered = sorted(bases, key=lambda b: b.key)
    for i, b in enumerate(ordered):
        for a in ordered[i + 1:]:
            for n in range(max_order + 1):
                rules.append(LieRule(a, b, n))
    return rules


@dataclass(frozen=True)
class PoissonRule:
    """An instance of the Poisson envelope family: an underived factor
    ``alpha`` against a chain of the given interior ending in beta^(n)."""

    alpha: BasisElem
    interior: tuple[Letter, ...]
    beta: BasisElem
    n: int

    def principal(self, ctx: RewriteContext) -> PMonomial:
        last = Letter(self.beta, self.n)
        if self.interior:
            _s, chain = ctx.make_chain(self.interior + (last,))
        else:
            chain = (last,)
        return ctx.make_monomial([(Letter(self.alpha, 0),), chain])

    def replacement(self, ctx: RewriteContext) -> dict[PMonomial, Fraction]:
        pm = self.principal(ctx)
        apps = [a for a in ctx.applications(pm) if a[0] != "L"]
        return ctx.apply(pm, apps[0])

    def cooked(self, ctx: RewriteContext) -> dict[PMonomial, Fraction]:
        """Replacement rewritten to normal form (closed for weight -1)."""
        return ctx.normal_form(self.replacement(ctx))


def poisson_rewrite_rules(ctx: RewriteContext, bases: Sequence[BasisElem],
                          max_degree: int) -> list[PoissonRule]:
    """Product rules alpha * b^(n) and the depth-one chain rules
    alpha * {g, b^(n)}; deeper chains are generated on the fly by the
    rewriting engine itself."""
    rules = []
    for alpha in bases:
        for beta in bases:
            if beta is alpha:
                continue
            for n in range(1, max_degree):
                rules.append(PoissonRule(alpha, (), beta, n))
            for g in bases:
                if g is alpha or g is beta:
                    continue
                rules.append(PoissonRule(alpha, (Letter(g, 0),), beta, 1))
    return rules
