"""Symbols, the Spencer delta map, delta-cohomology and Janet tabulars.

A symbol g_p is a subspace of S_p T* (x) E given by linear equations on the
order-p jets. Its prolongation g_{p+1} is obtained by shifting every equation
by each x_i (coefficients are not differentiated). Below the base order the
symbol is the full space S_p T* (x) E.

Exterior forms use increasing index tuples; delta inserts a covector with the
sign (-1)^t where t is its position in the sorted tuple:

    (delta w)_{nu, J} = sum_t (-1)^t w_{nu + 1_{j_t}, J minus j_t}.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, List, Optional, Tuple

from . import jets as J
from .field import RationalFunction
from .jets import Jet, dim_sym
from .linalg import Echelon, kernel_basis


@dataclass
class SymbolSpace:
    n: int
    m: int
    level: int
    equations: List[Dict[Jet, RationalFunction]]  # RREF, distinct leads
    one: RationalFunction
    _basis: Optional[list] = field(default=None, repr=False)
    _next: Optional["SymbolSpace"] = field(default=None, repr=False)

    @classmethod
    def from_rows(cls, n, m, level, rows, one) -> "SymbolSpace":
        e = Echelon(J.jet_key)
        for r in rows:
            if r:
                e.insert(r)
        red = e.reduced_rows()
        eqs = [red[ld][0] for ld in J.jet_sort(red)]
        return cls(n, m, level, eqs, one)

    @classmethod
    def full(cls, n, m, level, one) -> "SymbolSpace":
        return cls(n, m, level, [], one)

    @property
    def dim(self) -> int:
        return dim_sym(self.level, self.n, self.m) - len(self.equations)

    @property
    def leads(self) -> List[Jet]:
        return [min(r, key=J.jet_key) for r in self.equations]

    def columns(self) -> List[Jet]:
        return J.enumerate_jets(self.m, self.n, self.level, exact=True)

    def parametric(self) -> List[Jet]:
        ls = set(self.leads)
        return [j for j in self.columns() if j not in ls]

    @property
    def basis(self) -> List[Dict[Jet, RationalFunction]]:
        """Kernel basis; vector i has 1 at the i-th parametric jet and 0 at
        the other parametric jets, so coordinates are parametric values."""
        if self._basis is None:
            if self.level < 0:
                self._basis = []
            else:
                self._basis = kernel_basis(self.equations, self.columns(), J.jet_key, self.one)
        return self._basis

    def prolong(self) -> "SymbolSpace":
        if self._next is None:
            rows = []
            for eq in self.equations:
                for i in range(self.n):
                    rows.append({Jet(j.k, J.bump(j.mu, i)): c for j, c in eq.items()})
            self._next = SymbolSpace.from_rows(self.n, self.m, self.level + 1, rows, self.one)
        return self._next

    def contains(self, vec: Dict[Jet, RationalFunction]) -> bool:
        for eq in self.equations:
            s = None
            for j, c in eq.items():
                v = vec.get(j)
                if v is not None:
                    s = c * v if s is None else s + c * v
            if s is not None and not s.is_zero():
                return False
        return True


class SymbolFamily:
    """g_p for all p: full below the base level, prolongations above it."""

    def __init__(self, base: SymbolSpace):
        self.base = base
        self._full: Dict[int, SymbolSpace] = {}

    @property
    def q(self) -> int:
        return self.base.level

    def at(self, p: int) -> SymbolSpace:
        b = self.base
        if p < b.level:
            s = self._full.get(p)
            if s is None:
                s = self._full[p] = SymbolSpace.full(b.n, b.m, p, b.one)
            return s
        g = b
        while g.level < p:
            g = g.prolong()
        return g


def system_symbol(sys, level: Optional[int] = None) -> SymbolSpace:
    """Symbol of the prolongation of `sys` at the given level (default q)."""
    level = sys.q if level is None else level
    rows = sys.tower().top_parts(level)
    return SymbolSpace.from_rows(sys.n, sys.m, level, rows, sys.K.one)


def symbol(sys, r: int = 0) -> SymbolSpace:
    return system_symbol(sys, sys.q + r)


# delta ---------------------------------------------------------------------------

def wedge_basis(n: int, s: int) -> List[Tuple[int, ...]]:
    if s < 0 or s > n:
        return []
    return list(combinations(range(n), s))


def delta_apply(vec: Dict, n: int) -> Dict:
    """delta on an ambient element of wedge^s (x) S_p (x) E, given as a dict
    (I, Jet) -> coefficient."""
    out: Dict = {}
    for (I, jet), c in vec.items():
        mu = jet.mu
        for i in range(n):
            if i in I or not mu[i]:
                continue
            Jt = tuple(sorted(I + (i,)))
            sign = -1 if Jt.index(i) % 2 else 1
            key = (Jt, Jet(jet.k, mu[:i] + (mu[i] - 1,) + mu[i + 1:]))
            t = out.get(key)
            v = c if sign > 0 else -c
            v = v if t is None else t + v
            if v.is_zero():
                out.pop(key, None)
            else:
                out[key] = v
    return out


def _amb_key(k):
    return (k[0], J.jet_key(k[1]))


@dataclass
class DeltaMatrix:
    """delta: wedge^s (x) g_hi -> wedge^{s+1} (x) g_lo in kernel-basis coordinates.

    rows[i] is the image of domain element domain[i] = (I, basis index),
    written in codomain coordinates (J, parametric jet of g_lo)."""

    s: int
    level: int  # level of g_hi
    domain: List[Tuple[Tuple[int, ...], int]]
    rows: List[Dict[Tuple[Tuple[int, ...], Jet], RationalFunction]]
    ambient: List[Dict] = field(repr=False, default_factory=list)

    @property
    def codomain(self) -> Tuple[int, int]:
        return (self.s + 1, self.level - 1)

    def rank(self) -> int:
        e = Echelon(_amb_key)
        for v in self.rows:
            if v:
                e.insert(v)
        return len(e)

    def compose(self, other: "DeltaMatrix") -> List[Dict]:
        """Rows of other o self (apply self, then other)."""
        index = {}
        for idx, (I, b) in enumerate(other.domain):
            index[(I, b)] = idx
        out = []
        for row in self.rows:
            acc: Dict = {}
            for (Jt, pj), c in row.items():
                k = index[(Jt, other._param_pos[pj])]
                for key, v in other.rows[k].items():
                    t = acc.get(key)
                    val = c * v if t is None else t + c * v
                    if val.is_zero():
                        acc.pop(key, None)
                    else:
                        acc[key] = val
            out.append(acc)
        return out


def delta_matrix(g_hi: SymbolSpace, g_lo: SymbolSpace, s: int) -> DeltaMatrix:
    if g_hi.level != g_lo.level + 1:
        raise ValueError(f"level mismatch: {g_hi.level} -> {g_lo.level}")
    n = g_hi.n
    domain, rows, amb = [], [], []
    param_lo = set(g_lo.parametric())
    for I in wedge_basis(n, s):
        for b, vec in enumerate(g_hi.basis):
            image = delta_apply({(I, j): c for j, c in vec.items()}, n)
            domain.append((I, b))
            amb.append(image)
            rows.append({k: v for k, v in image.items() if k[1] in param_lo})
    dm = DeltaMatrix(s, g_hi.level, domain, rows, amb)
    dm._param_pos = {j: i for i, j in enumerate(g_hi.parametric())}
    return dm


def _delta_rank(g: SymbolSpace, s: int, n: int) -> int:
    """rank of delta on wedge^s (x) g into the ambient wedge^{s+1} space."""
    if s < 0 or s > n or g.level <= 0:
        return 0
    e = Echelon(_amb_key)
    for I in wedge_basis(n, s):
        for vec in g.basis:
            image = delta_apply({(I, j): c for j, c in vec.items()}, n)
            if image:
                e.insert(image)
    return len(e)


def cohomology_dim(fam: SymbolFamily, p: int, s: int) -> int:
    """dim H at wedge^s (x) g_p: ker(delta into wedge^{s+1} (x) g_{p-1})
    minus im(delta from wedge^{s-1} (x) g_{p+1})."""
    n = fam.base.n
    if p < 0 or s < 0 or s > n:
        return 0
    cache = fam.__dict__.setdefault("_rank", {})

    def rk(pp, ss):
        key = (pp, ss)
        if key not in cache:
            cache[key] = _delta_rank(fam.at(pp), ss, n)
        return cache[key]

    dom = len(wedge_basis(n, s)) * fam.at(p).dim
    return dom - rk(p, s) - rk(p + 1, s - 1)


def spencer_cohomology_dim(sys, r: int, s: int) -> int:
    """dim H^s(g_{q+r}) for the symbol family of `sys`."""
    fam = SymbolFamily(system_symbol(sys))
    return cohomology_dim(fam, sys.q + r, s)


def is_involutive(g: SymbolSpace, depth: int = 1) -> bool:
    """H^s(g_{q+r}) = 0 for 1 <= s <= n and 0 <= r <= depth."""
    if g.dim == 0:
        return True
    fam = SymbolFamily(g)
    return all(cohomology_dim(fam, g.level + r, s) == 0
               for r in range(depth + 1) for s in range(1, g.n + 1))


def is_2_acyclic(g: SymbolSpace, depth: int = 2) -> bool:
    """H^1 = H^2 = 0 at g_{q+r} for 0 <= r <= depth."""
    fam = SymbolFamily(g)
    q = g.level
    return all(cohomology_dim(fam, q + r, s) == 0 for r in range(depth + 1) for s in (1, 2))


def system_is_involutive(sys, r: int = 0) -> bool:
    return is_involutive(symbol(sys, r))


def system_is_2_acyclic(sys, r: int = 0) -> bool:
    return is_2_acyclic(symbol(sys, r))


# Janet tabulars ------------------------------------------------------------------

@dataclass
class TabularRow:
    lead: Jet
    equation: Dict[Jet, RationalFunction]
    cls: int
    multiplicative: Tuple[int, ...]  # 1-based
    marks: Dict[int, str]  # non-multiplicative var -> "•" (reduces) or "×"


@dataclass
class JanetTabular:
    level: int
    n: int
    m: int
    rows: List[TabularRow]
    characters: Tuple[int, ...]  # alpha^1..alpha^n
    involutive: bool  # Janet criterion: every mark is "•"
    change: Optional[List[List[int]]] = None

    @property
    def dim(self) -> int:
        return sum(self.characters)


def janet_tabular_of(g: SymbolSpace) -> JanetTabular:
    n, m, p = g.n, g.m, g.level
    rows_eq = g.equations
    leads = g.leads

    def cls(mu):
        # order-0 rows: every variable is multiplicative
        return J.janet_class(mu) if p else n

    # multiplicative prolongations of all rows
    mult = Echelon(J.jet_key)
    for eq, ld in zip(rows_eq, leads):
        for i in range(cls(ld.mu)):
            mult.insert({Jet(j.k, J.bump(j.mu, i)): c for j, c in eq.items()})
    rows = []
    for eq, ld in zip(rows_eq, leads):
        c = cls(ld.mu)
        marks = {}
        for v in range(c + 1, n + 1):
            shifted = {Jet(j.k, J.bump(j.mu, v - 1)): x for j, x in eq.items()}
            rest, _ = mult.head_reduce(shifted)
            marks[v] = "•" if not rest else "×"
        rows.append(TabularRow(ld, eq, c, tuple(range(1, c + 1)), marks))
    beta = [0] * n
    for ld in leads:
        beta[cls(ld.mu) - 1] += 1
    alpha = []
    for i in range(1, n + 1):
        tot = m * _count_class(p, n, i)
        alpha.append(tot - beta[i - 1])
    invol = all(x == "•" for r in rows for x in r.marks.values())
    return JanetTabular(p, n, m, rows, tuple(alpha), invol)


def _count_class(p: int, n: int, i: int) -> int:
    """Number of multi-indices of order p >= 1 and class i."""
    if p == 0:
        return 1 if i == n else 0
    # mu_1..mu_{i-1} = 0, mu_i >= 1: order p-1 spread over n-i+1 slots
    return dim_sym(p - 1, n - i + 1)


def janet_tabular(sys, r: int = 0) -> JanetTabular:
    return janet_tabular_of(symbol(sys, r))


def random_change(rng: random.Random, n: int) -> List[List[int]]:
    import sympy
    while True:
        M = [[rng.randint(-2, 2) for _ in range(n)] for _ in range(n)]
        if sympy.Matrix(M).det() != 0:
            return M


def elementary_shears(n: int) -> List[List[List[int]]]:
    """xbar_i = x_i + x_j for i != j, in a fixed order."""
    out = []
    for i in range(n):
        for j in range(n):
            if i != j:
                M = [[int(a == b) for b in range(n)] for a in range(n)]
                M[i][j] = 1
                out.append(M)
    return out


@dataclass
class Regularization:
    system: object
    change: List[List[int]]
    tabular: JanetTabular
    janet_verdict: bool
    delta_verdict: bool
    tries: int

    @property
    def agreed(self) -> bool:
        return self.janet_verdict == self.delta_verdict


def delta_regularize(sys, r: int = 0, seed: int = 0, max_tries: int = 20) -> Regularization:
    """Search for coordinates where the Janet criterion agrees with the
    delta-cohomology verdict. The identity is tried first, then the
    elementary shears, then seeded random integer matrices."""
    from .system import change_coordinates

    n = sys.n
    delta_verdict = is_involutive(symbol(sys, r))
    rng = random.Random(seed)
    shears = elementary_shears(n)
    M = [[int(i == j) for j in range(n)] for i in range(n)]
    cur = sys
    for attempt in range(max_tries + 1):
        if attempt:
            M = shears[attempt - 1] if attempt <= len(shears) else random_change(rng, n)
            cur = change_coordinates(sys, M)
        tab = janet_tabular(cur, r)
        tab.change = M
        if tab.involutive == delta_verdict:
            return Regularization(cur, M, tab, tab.involutive, delta_verdict, attempt + 1)
    return Regularization(cur, M, tab, tab.involutive, delta_verdict, max_tries + 1)


def render_tabular(tab: JanetTabular, names: Tuple[str, ...] = ("v",), xnames=None) -> str:
    """Equations on the left, the multiplicative box on the right."""
    lines = []
    lefts = [render_symbol_row(r.equation, names, xnames) + " = 0" for r in tab.rows]
    w = max((len(s) for s in lefts), default=0)
    for s, r in zip(lefts, tab.rows):
        cells = [str(v) if v <= r.cls else r.marks[v] for v in range(1, tab.n + 1)]
        lines.append(f"{s.ljust(w)}  | {' '.join(cells)} |")
    return "\n".join(lines)


def render_symbol_row(eq, names, xnames=None) -> str:
    from .render import render_linear_form
    return render_linear_form(eq, names, xnames, key=J.jet_key)
