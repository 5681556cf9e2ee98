"""Linear systems of PDE, formal prolongation, elimination and projection.

A system R_q is a list of linear equations  sum a^k_mu(x) y^k_mu = rhs  where
the right-hand side is a linear form in source jets u^a_nu. Every equation
carries a nominal order: the r-th prolongation contains d_lambda e for
|lambda| <= q + r - order(e). For a plain order-q system all nominal orders
equal q. Operator systems with rows of mixed order use the row order, so a
lower-order row stands for itself and its derivatives.

The Tower class keeps one incremental echelon form per system; prolonging by
one more order only inserts the new rows.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from . import jets as J
from .field import Field, MultiPoly, RationalFunction
from .jets import Jet, SourceJet, dim_jet, dim_sym
from .linalg import Echelon, Vec


class PreconditionError(ValueError):
    """An operation was called on a system that does not satisfy its
    hypotheses (the message names the failing test)."""


@dataclass
class LinearEquation:
    lhs: Dict[Jet, RationalFunction]
    rhs: Dict[SourceJet, RationalFunction] = field(default_factory=dict)
    label: Optional[str] = None
    order: Optional[int] = None  # nominal order; defaults to lhs order

    def __post_init__(self):
        if self.order is None:
            self.order = self.lhs_order

    @property
    def lhs_order(self) -> int:
        return max((j.order for j in self.lhs), default=0)

    def is_trivial(self) -> bool:
        return not self.lhs and not self.rhs


@dataclass(frozen=True)
class PDESystem:
    K: Field
    unknowns: Tuple[str, ...]
    equations: Tuple[LinearEquation, ...]
    sources: Tuple[str, ...] = ()
    source_orders: Tuple[int, ...] = ()
    q: int = 0
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        if self.equations and self.q < max(e.order for e in self.equations):
            object.__setattr__(self, "q", max(e.order for e in self.equations))

    @property
    def n(self) -> int:
        return self.K.n

    @property
    def m(self) -> int:
        return len(self.unknowns)

    @property
    def names(self) -> Tuple[str, ...]:
        return self.K.names

    def tower(self) -> "Tower":
        t = self._cache.get("tower")
        if t is None:
            t = self._cache["tower"] = Tower(self)
        return t

    def min_order(self) -> int:
        return min((e.order for e in self.equations), default=self.q)

    def operator_rows(self) -> Dict[int, Dict[Jet, RationalFunction]]:
        """Source index -> lhs for systems of the form  D_a y = u^a."""
        out = {}
        for e in self.equations:
            if len(e.rhs) == 1:
                (sj, c), = e.rhs.items()
                if not any(sj.nu) and c.is_one() and sj.a not in out:
                    out[sj.a] = e.lhs
                    continue
            if e.rhs:
                raise PreconditionError("system is not in operator form D y = u")
        return out

    def with_equations(self, eqs, q=None) -> "PDESystem":
        return PDESystem(self.K, self.unknowns, tuple(eqs), self.sources,
                         self.source_orders, self.q if q is None else q)


# derivatives -------------------------------------------------------------------

def derive_vec(vec: Dict, i: int, n: int) -> Dict:
    """Formal total derivative d_i of a linear form in jets or source jets."""
    out: Dict = {}
    for key, c in vec.items():
        mu = key[1]
        up = key.__class__(key[0], mu[:i] + (mu[i] + 1,) + mu[i + 1:])
        t = out.get(up)
        v = c if t is None else t + c
        if v.num.terms:
            out[up] = v
        else:
            out.pop(up, None)
        dc = c.partial(i)
        if dc.num.terms:
            t = out.get(key)
            v = dc if t is None else t + dc
            if v.num.terms:
                out[key] = v
            else:
                out.pop(key, None)
    return out


def total_derivative(eq: LinearEquation, i: int, n: int) -> LinearEquation:
    return LinearEquation(derive_vec(eq.lhs, i, n), derive_vec(eq.rhs, i, n),
                          None, eq.order)


class _DerivCache:
    """d_lambda of a fixed linear form, memoized over lambda."""

    def __init__(self, lhs, rhs, n):
        self.n = n
        self.memo = {(0,) * n: (lhs, rhs)}

    def get(self, lam):
        r = self.memo.get(lam)
        if r is None:
            i = next(k for k in range(self.n - 1, -1, -1) if lam[k])
            lhs, rhs = self.get(lam[:i] + (lam[i] - 1,) + lam[i + 1:])
            r = (derive_vec(lhs, i, self.n), derive_vec(rhs, i, self.n))
            self.memo[lam] = r
        return r


# the tower ---------------------------------------------------------------------

class Tower:
    """Incremental elimination of rho_r(R) for r = 0, 1, 2, ...

    Level N holds d_lambda e for all equations e with order(e) + |lambda| <= N.
    Rows are inserted level by level; every pivot remembers its level so the
    state after any level can be replayed exactly.
    """

    def __init__(self, sys: PDESystem):
        self.sys = sys
        self.n = sys.n
        self.echelon = Echelon(J.jet_key)
        self.pivot_level: Dict[Jet, int] = {}
        self.cc: List[Tuple[int, Vec]] = []  # (level, rhs of a zero lhs row)
        self.identities: Dict[int, int] = {}
        self.level = sys.min_order() - 1
        self._derivs = [_DerivCache(e.lhs, e.rhs, self.n) for e in sys.equations]

    def rows_of_level(self, N: int):
        out = []
        for e, dc in zip(self.sys.equations, self._derivs):
            r = N - e.order
            if r < 0:
                continue
            for lam in J.indices_of_order(r, self.n):
                lhs, rhs = dc.get(lam)
                if lhs or rhs:
                    out.append((lhs, rhs))
        # deterministic order: by lead jet then sparsity
        out.sort(key=lambda t: (J.jet_key(min(t[0], key=J.jet_key)) if t[0] else (1,),
                                len(t[0]), len(t[1])))
        return out

    def ensure(self, N: int) -> None:
        while self.level < N:
            lev = self.level + 1
            ident = 0
            for lhs, rhs in self.rows_of_level(lev):
                ld, rest = self.echelon.insert(lhs, rhs)
                if ld is not None:
                    self.pivot_level[ld] = lev
                elif rest:
                    self.cc.append((lev, rest))
                else:
                    ident += 1
            self.identities[lev] = ident
            self.level = lev

    # queries -------------------------------------------------------------
    def pivots(self, N: int, max_order: Optional[int] = None) -> List[Jet]:
        self.ensure(N)
        return [j for j in self.echelon.order
                if self.pivot_level[j] <= N and (max_order is None or j.order <= max_order)]

    def rank(self, N: int, max_order: Optional[int] = None) -> int:
        return len(self.pivots(N, max_order))

    def dim_R(self, N: int) -> int:
        """dim of rho(R) at level N."""
        return dim_jet(N, self.n, self.sys.m) - self.rank(N)

    def dim_projection(self, N: int, t: int) -> int:
        """dim of the projection of level N onto order t."""
        return dim_jet(t, self.n, self.sys.m) - self.rank(N, t)

    def symbol_rank(self, N: int) -> int:
        return sum(1 for j in self.pivots(N) if j.order == N)

    def dim_g(self, N: int) -> int:
        return dim_sym(N, self.n, self.sys.m) - self.symbol_rank(N)

    def cc_rows(self, N: int) -> List[Tuple[int, Vec]]:
        self.ensure(N)
        return [(lev, v) for lev, v in self.cc if lev <= N]

    def reduced_rows(self, N: int, t: Optional[int] = None):
        """Autoreduced rows of the projection of level N onto order t,
        greatest lead first: list of (lead, lhs, rhs)."""
        leads = self.pivots(N, t)
        red = self.echelon.reduced_rows(leads)
        return [(ld, red[ld][0], red[ld][1] or {}) for ld in J.jet_sort(leads)]

    def top_parts(self, N: int, p: Optional[int] = None) -> List[Dict[Jet, RationalFunction]]:
        """Order-p parts of the rows of level N whose lead has order p."""
        p = N if p is None else p
        out = []
        for ld in self.pivots(N, p):
            if ld.order == p:
                row = self.echelon.rows[ld][0]
                out.append({j: c for j, c in row.items() if j.order == p})
        return out


# public operations -------------------------------------------------------------

def prolong(sys: PDESystem, r: int) -> PDESystem:
    """rho_r(R_q) as a new order-(q+r) system: d_lambda e for every equation
    e and |lambda| <= q + r - order(e)."""
    N = sys.q + r
    n = sys.n
    eqs = []
    for e in sys.equations:
        dc = _DerivCache(e.lhs, e.rhs, n)
        for lam in J.indices_up_to(N - e.order, n):
            lhs, rhs = dc.get(lam)
            if not lhs and not rhs:
                continue
            d = J.render_derivative(lam)
            label = e.label if not d or e.label is None else f"{d}({e.label})"
            eqs.append(LinearEquation(dict(lhs), dict(rhs), label, N))
    return PDESystem(sys.K, sys.unknowns, tuple(eqs), sys.sources,
                     sys.source_orders, N)


def project(sys: PDESystem, t: int, level: Optional[int] = None) -> PDESystem:
    """pi_t of the system's prolongation at `level` (default: the system
    order), autoreduced; all equations get nominal order t."""
    level = sys.q if level is None else level
    tw = sys.tower()
    eqs = []
    for i, (ld, lhs, rhs) in enumerate(tw.reduced_rows(level, t)):
        eqs.append(LinearEquation(dict(lhs), dict(rhs), None, t))
    return PDESystem(sys.K, sys.unknowns, tuple(eqs), sys.sources,
                     sys.source_orders, t)


@dataclass
class SolvedForm:
    order: int
    principal: List[Jet]
    parametric: List[Jet]
    rows: List[Tuple[Jet, Dict[Jet, RationalFunction], Dict[SourceJet, RationalFunction]]]
    dim: int
    cc: List[Dict[SourceJet, RationalFunction]]


def solve(sys: PDESystem) -> SolvedForm:
    tw = sys.tower()
    q = sys.q
    rows = tw.reduced_rows(q)
    principal = [ld for ld, _, _ in rows]
    ps = set(principal)
    parametric = [j for j in J.enumerate_jets(sys.m, sys.n, q) if j not in ps]
    return SolvedForm(q, principal, parametric, rows, len(parametric),
                      [v for _, v in tw.cc_rows(q)])


def dim_R(sys: PDESystem, r: int = 0) -> int:
    return sys.tower().dim_R(sys.q + r)


@dataclass
class FIReport:
    is_fi: bool
    first_failure: Optional[int]  # order q+r where pi(R_{q+r+1}) < R_{q+r}
    dims: List[Tuple[int, int, int]]  # (order, dim R, dim pi(R_next))

    @property
    def fi(self) -> bool:
        return self.is_fi

    @property
    def first_drop(self) -> Optional[Tuple[int, int, int]]:
        """(r, dim R_{q+r}, dim pi(R_{q+r+1})) at the first failing level."""
        if self.first_failure is None:
            return None
        q = self.dims[0][0]
        for order, a, b in self.dims:
            if order == self.first_failure:
                return (order - q, a, b)
        return None


def fi_test(sys: PDESystem, depth: int = 3) -> FIReport:
    tw = sys.tower()
    q = sys.q
    dims = []
    first = None
    for r in range(depth):
        a = tw.dim_R(q + r)
        b = tw.dim_projection(q + r + 1, q + r)
        dims.append((q + r, a, b))
        if a != b and first is None:
            first = q + r
    return FIReport(first is None, first, dims)


# projections of the base tower ---------------------------------------------------

def projected(sys: PDESystem, s: int, t: int) -> PDESystem:
    """R^{(s)}_t = pi_t(R_{t+s}) as a standalone order-t system."""
    return project(sys, t, level=t + s)


def dim_projected(sys: PDESystem, s: int, t: int) -> int:
    return sys.tower().dim_projection(t + s, t)


@dataclass
class PPResult:
    converged: bool
    order: int  # Q: order of the final involutive system
    s: int  # k: number of projections, final = R^{(k)}_Q
    final: Optional[PDESystem]
    stable_q: Optional[PDESystem]  # R^{(Q-q+k)}_q
    chain: List[Tuple[int, int, int]]  # distinct (s, order q, dim R^{(s)}_q)
    steps: List[str]
    cc_level: Optional[int]  # Q + k + 1: generating CC live at or below it

    @property
    def cc_order_bound(self) -> Optional[int]:
        return None if self.cc_level is None else self.cc_level


def pp_procedure(sys: PDESystem, max_order: int = 10) -> PPResult:
    """Prolongation/projection until an involutive R^{(k)}_Q is found.

    Walks R^{(s)}_t = pi_t(R_{t+s}): raise t while the symbol is not
    involutive, raise s while the projection of the first prolongation is
    smaller. max_order caps the base tower at level q + max_order.
    """
    from .symbol import system_symbol, is_involutive

    q = sys.q
    cap = q + max_order
    steps = []
    t, s = q, 0
    while True:
        if t + s + 1 > cap:
            steps.append(f"cap reached at R^({s})_{t}")
            return PPResult(False, t, s, None, None, _chain(sys, q, t - q + s),
                            steps, None)
        T = projected(sys, s, t)
        if not is_involutive(system_symbol(T, t)):
            steps.append(f"R^({s})_{t}: symbol not involutive, prolong")
            t += 1
            continue
        dT = T.tower().dim_R(t)
        dP = T.tower().dim_projection(t + 1, t)
        if dT != dP:
            steps.append(f"R^({s})_{t}: dim {dT} but its first prolongation "
                         f"projects to dim {dP}, project")
            s += 1
            continue
        steps.append(f"R^({s})_{t}: dim {dT}, involutive")
        stable = projected(sys, t - q + s, q)
        return PPResult(True, t, s, T, stable, _chain(sys, q, t - q + s),
                        steps, t + s + 1)


def _chain(sys, q, smax):
    tw = sys.tower()
    out = []
    last = None
    for s in range(smax + 1):
        d = tw.dim_projection(q + s, q)
        if d != last:
            out.append((s, q, d))
            last = d
    return out


# spencer operator ----------------------------------------------------------------

def spencer_operator(section: Dict[Jet, RationalFunction], n: int, m: int, q: int):
    """(d_i f)^k_mu = d_i f^k_mu - f^k_{mu+1_i} for |mu| <= q.

    `section` maps jets of order <= q+1 to component functions (missing jets
    are zero). Returns a dict (i, Jet) -> value for 0 <= i < n and |mu| <= q;
    zero values are omitted.
    """
    out = {}
    for k in range(m):
        for mu in J.indices_up_to(q, n):
            for i in range(n):
                f = section.get(Jet(k, mu))
                g = section.get(Jet(k, J.bump(mu, i)))
                val = None
                if f is not None:
                    val = f.partial(i)
                if g is not None:
                    val = -g if val is None else val - g
                if val is not None and val.num.terms:
                    out[(i, Jet(k, mu))] = val
    return out


# coordinate changes --------------------------------------------------------------

def _expand_derivative(mu, M, n):
    """d/dx with d_i = sum_j M[j][i] dbar_j, applied as prod d_i^mu_i.
    Returns dict new-multi-index -> Fraction coefficient."""
    from fractions import Fraction
    poly = {(0,) * n: Fraction(1)}
    for i in range(n):
        for _ in range(mu[i]):
            nxt = {}
            for nu, c in poly.items():
                for j in range(n):
                    a = M[j][i]
                    if a:
                        k = J.bump(nu, j)
                        nxt[k] = nxt.get(k, 0) + c * a
            poly = {k: v for k, v in nxt.items() if v}
    return poly


def change_coordinates(sys: PDESystem, M) -> PDESystem:
    """Linear change xbar = M x. Jets expand through d_i = sum_j M_ji dbar_j and
    coefficients are rewritten with x = M^{-1} xbar."""
    import sympy  # exact inverse of a small integer matrix

    n = sys.n
    inv = sympy.Matrix(M).inv()
    images = []
    for i in range(n):
        terms = {}
        for j in range(n):
            v = inv[i, j]
            if v != 0:
                e = [0] * n
                e[j] = 1
                terms[tuple(e)] = v
        images.append(MultiPoly.from_terms(
            [(e, _frac(c)) for e, c in terms.items()], n))

    def conv(vec):
        out = {}
        for key, c in vec.items():
            c2 = c.compose_linear(images)
            for nu, a in _expand_derivative(key[1], M, n).items():
                nk = key.__class__(key[0], nu)
                val = c2 * RationalFunction.const(a, n)
                t = out.get(nk)
                val = val if t is None else t + val
                if val.num.terms:
                    out[nk] = val
                else:
                    out.pop(nk, None)
        return out

    eqs = [LinearEquation(conv(e.lhs), conv(e.rhs), e.label, e.order) for e in sys.equations]
    return PDESystem(sys.K, sys.unknowns, tuple(eqs), sys.sources, sys.source_orders, sys.q)


def _frac(c):
    from fractions import Fraction
    return Fraction(int(c.p), int(c.q))
