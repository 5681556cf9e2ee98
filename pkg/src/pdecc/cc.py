"""Compatibility conditions, generating CC, syzygies and resolutions.

A compatibility condition is a linear form in source jets u^a_nu that
vanishes identically once every u^a is replaced by the operator row it
stands for. The tower of a system produces them as right-hand sides of rows
whose left-hand side eliminates to zero. Generating CC are found order by
order as the complement of the prolongations of the generators found so far.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from typing import Dict, List, Optional, Tuple

from . import jets as J
from .field import RationalFunction
from .jets import Jet, SourceJet, dim_jet, dim_sym
from .linalg import Echelon, Vec
from .system import (LinearEquation, PDESystem, PPResult, PreconditionError,
                     _DerivCache, derive_vec, pp_procedure)
from .symbol import SymbolSpace, _delta_rank, is_involutive, system_symbol

DEFAULT_CAP = 10


@dataclass
class CCExpression:
    rhs: Dict[SourceJet, RationalFunction]
    order: int  # max |nu|
    level: int  # max |nu| + order of the source
    label: str = ""


@dataclass
class OrderStats:
    order: int  # r: CC of order <= r live at level q + r
    dim_Q: int
    new: int


@dataclass
class CCGeneratorSet:
    system: PDESystem
    generators: List[CCExpression]
    stats: List[OrderStats]
    complete: bool
    scanned_level: int
    bound_level: Optional[int]
    reduced_candidates: Dict[int, int] = field(default_factory=dict)
    identities: int = 0

    def orders(self) -> List[int]:
        return [g.order for g in self.generators]

    def by_order(self) -> Dict[int, int]:
        out: Dict[int, int] = {}
        for g in self.generators:
            out[g.order] = out.get(g.order, 0) + 1
        return out


@dataclass
class SyzygyRelation:
    coefficients: Dict[SourceJet, RationalFunction]  # (generator index, lambda)
    order: int
    label: str = ""


@dataclass
class ResolutionStage:
    rank: int
    order: Optional[int]  # order of the operator leaving this stage
    labels: List[str]


@dataclass
class ResolutionReport:
    ranks: List[int]
    orders: List[int]
    euler_characteristic: int
    differential_rank: Optional[int]
    complete: bool
    stages: List[CCGeneratorSet] = field(default_factory=list)


def source_key_factory(orders):
    def key(sj):
        nu = sj[1]
        return (-(orders[sj[0]] + sum(nu)),) + nu + (sj[0],)
    return key


def source_key(sys: PDESystem):
    k = sys._cache.get("source_key")
    if k is None:
        k = sys._cache["source_key"] = source_key_factory(sys.source_orders)
    return k


def _order_level(vec, orders):
    o = max(sum(k.nu) for k in vec)
    lev = max(sum(k.nu) + orders[k.a] for k in vec)
    return o, lev


# dimensions ----------------------------------------------------------------------

def dim_source_jets(sys: PDESystem, level: int, exact: bool = False) -> int:
    """dim J_r(F_0) (or S_r(F_0) when exact) at the given tower level."""
    n = sys.n
    total = 0
    for o in sys.source_orders:
        r = level - o
        total += dim_sym(r, n) if exact else dim_jet(r, n)
    return total


def cc_dims(sys: PDESystem, r: int) -> Dict[str, int]:
    """dim B_r = rank of rho_r(Phi), dim Q_r = dim J_r(F_0) - dim B_r."""
    tw = sys.tower()
    N = sys.q + r
    B = tw.rank(N)
    return {"dim_B": B, "dim_Q": dim_source_jets(sys, N) - B}


def cc_at_order(sys: PDESystem, r: int) -> List[CCExpression]:
    """Canonical basis of all CC living at level q + r (reduced echelon form)."""
    tw = sys.tower()
    key = source_key(sys)
    e = Echelon(key)
    for _, v in tw.cc_rows(sys.q + r):
        e.insert(v)
    red = e.reduced_rows()
    out = []
    for ld in sorted(red, key=key, reverse=True):
        vec = red[ld][0]
        o, lev = _order_level(vec, sys.source_orders)
        out.append(CCExpression(vec, o, lev))
    return out


# prolongation of rhs forms -------------------------------------------------------

def prolong_form(vec: Vec, lam, n: int) -> Vec:
    out = vec
    for i in range(n):
        for _ in range(lam[i]):
            out = derive_vec(out, i, n)
    return out


class _KnownSpan:
    """Span of d_lambda g for all generators g, filled level by level."""

    def __init__(self, sys: PDESystem):
        self.sys = sys
        self.key = source_key(sys)
        self.echelon = Echelon(self.key)
        self.gens: List[Tuple[CCExpression, _DerivCache]] = []
        self.level = None

    def add_generator(self, g: CCExpression):
        self.gens.append((g, _DerivCache(g.rhs, {}, self.sys.n)))

    def fill(self, N: int):
        """Insert d_lambda g with level(g) + |lambda| == N."""
        n = self.sys.n
        for g, dc in self.gens:
            r = N - g.level
            if r <= 0:
                continue
            for lam in J.indices_of_order(r, n):
                v = dc.get(lam)[0]
                if v:
                    self.echelon.insert(v)

    def normal_form(self, v: Vec) -> Vec:
        return self.echelon.normal_form(v)[0]


def _complement(known: _KnownSpan, candidates: List[Vec], orders) -> List[Vec]:
    """Canonical basis of span(candidates) modulo the known span."""
    sub = Echelon(known.key)
    for v in candidates:
        nf = known.normal_form(v)
        if nf:
            sub.insert(nf)
    red = sub.reduced_rows()
    return [red[ld][0] for ld in sorted(red, key=known.key, reverse=True)]


def new_generators(sys: PDESystem, r: int, known: List[CCExpression]) -> List[CCExpression]:
    """Generators at level q+r+1 not in the span of prolongations of `known`."""
    N = sys.q + r + 1
    ks = _KnownSpan(sys)
    for g in known:
        ks.add_generator(g)
        ks.echelon.insert(g.rhs)
    for lev in range(sys.min_order(), N + 1):
        ks.fill(lev)
    cands = [v for lev, v in sys.tower().cc_rows(N)]
    out = []
    for vec in _complement(ks, cands, sys.source_orders):
        o, lev = _order_level(vec, sys.source_orders)
        out.append(CCExpression(vec, o, lev))
    return out


def generating_cc(sys: PDESystem, max_order: Optional[int] = None,
                  prefix: str = "Psi", pp: Optional[PPResult] = None) -> CCGeneratorSet:
    """Generating CC of all orders, scanning up to the level certified by the
    PP procedure (Q + k + 1 for an involutive R^{(k)}_Q), capped at
    q + max_order."""
    cap = DEFAULT_CAP if max_order is None else max_order
    if pp is None:
        pp = pp_procedure(sys, cap)
    top = sys.q + cap
    complete = False
    if pp.converged and pp.cc_level is not None and pp.cc_level <= top:
        top = pp.cc_level
        complete = True
    tw = sys.tower()
    ks = _KnownSpan(sys)
    gens: List[CCExpression] = []
    stats: List[OrderStats] = []
    reduced: Dict[int, int] = {}
    start = sys.min_order()
    for N in range(start, top + 1):
        ks.fill(N)
        cands = [v for lev, v in tw.cc_rows(N) if lev == N]
        new = _complement(ks, cands, sys.source_orders)
        reduced[N - sys.q] = len(cands) - len(new)
        for vec in new:
            o, lev = _order_level(vec, sys.source_orders)
            g = CCExpression(vec, o, lev, f"{prefix}{len(gens) + 1}")
            gens.append(g)
            ks.add_generator(g)
            ks.echelon.insert(vec)
        if N >= sys.q:
            d = cc_dims(sys, N - sys.q)
            stats.append(OrderStats(N - sys.q, d["dim_Q"], len(new)))
    idents = sum(v for k, v in tw.identities.items() if k <= top)
    return CCGeneratorSet(sys, gens, stats, complete, top, pp.cc_level, reduced, idents)


def in_prolongation_span(sys: PDESystem, gens: List[CCExpression], vec: Vec) -> bool:
    """True when vec lies in the span of the prolongations of gens."""
    _, lev = _order_level(vec, sys.source_orders)
    ks = _KnownSpan(sys)
    for g in gens:
        if g.level <= lev:
            ks.add_generator(g)
            ks.echelon.insert(g.rhs)
    for N in range(sys.min_order(), lev + 1):
        ks.fill(N)
    return not ks.normal_form(vec)


# substitution checks -------------------------------------------------------------

def substitute(sys: PDESystem, vec: Vec) -> Dict[Jet, RationalFunction]:
    """Replace every u^a_nu by d_nu of the operator row of u^a."""
    rows = sys.operator_rows()
    caches = sys._cache.setdefault("subst", {})
    out: Dict[Jet, RationalFunction] = {}
    for sj, c in vec.items():
        dc = caches.get(sj.a)
        if dc is None:
            dc = caches[sj.a] = _DerivCache(rows[sj.a], {}, sys.n)
        form = dc.get(sj.nu)[0]
        for j, x in form.items():
            t = out.get(j)
            v = c * x if t is None else t + c * x
            if v.is_zero():
                out.pop(j, None)
            else:
                out[j] = v
    return out


def verify_cc(sys: PDESystem, vec: Vec) -> bool:
    return not substitute(sys, vec)


# syzygies and resolutions --------------------------------------------------------

def generator_system(sys: PDESystem, gens: CCGeneratorSet | List[CCExpression]) -> PDESystem:
    """The generators as an operator on the sources of `sys`: unknowns are the
    sources, each generator becomes a row with its own source."""
    glist = gens.generators if isinstance(gens, CCGeneratorSet) else gens
    n = sys.n
    eqs = []
    for idx, g in enumerate(glist):
        lhs = {Jet(sj.a, sj.nu): c for sj, c in g.rhs.items()}
        eqs.append(LinearEquation(lhs, {SourceJet(idx, (0,) * n): sys.K.one},
                                  g.label, g.order))
    labels = tuple(g.label for g in glist)
    q = max((g.order for g in glist), default=0)
    return PDESystem(sys.K, sys.sources, tuple(eqs), labels,
                     tuple(g.order for g in glist), q)


def syzygies(gens: CCGeneratorSet, search_order: Optional[int] = None,
             prefix: str = "Syz") -> Tuple[List[SyzygyRelation], CCGeneratorSet]:
    """Generating relations among the generators, via generating_cc of the
    operator they define. search_order caps the prolongation depth."""
    stage = generator_system(gens.system, gens)
    if search_order is None:
        search_order = max(gens.orders(), default=0) + 4
    sub = generating_cc(stage, search_order, prefix=prefix)
    rels = [SyzygyRelation(g.rhs, g.order, g.label) for g in sub.generators]
    return rels, sub


def verify_syzygy(gens: CCGeneratorSet, rel: SyzygyRelation) -> bool:
    """Apply the relation to the generators; must vanish identically."""
    stage = generator_system(gens.system, gens)
    return verify_cc(stage, rel.coefficients)


def resolution(sys: PDESystem, max_order: Optional[int] = None,
               max_stages: int = 6, rank_levels: bool = True) -> ResolutionReport:
    ranks = [sys.m, len(sys.sources)]
    orders = [sys.q]
    stages = []
    cur = sys
    complete = True
    gens = generating_cc(sys, max_order)
    prefixes = ["Psi", "Syz", "Syz2_", "Syz3_", "Syz4_", "Syz5_"]
    for depth in range(max_stages):
        stages.append(gens)
        complete = complete and gens.complete
        if not gens.generators:
            break
        ranks.append(len(gens.generators))
        orders.append(max(gens.orders()))
        cur = generator_system(cur, gens)
        cap = max(gens.orders()) + 4 if max_order is None else max_order
        gens = generating_cc(cur, cap, prefix=prefixes[min(depth + 1, len(prefixes) - 1)])
    else:
        complete = False
    chi = sum((-1) ** i * r for i, r in enumerate(ranks))
    rk = differential_rank(sys, max_order) if rank_levels else None
    return ResolutionReport(ranks, orders, chi, rk, complete, stages)


def differential_rank(sys: PDESystem, max_order: Optional[int] = None) -> Optional[int]:
    """rk_D from the growth of dim R_N: the n-th finite difference of dim R_N
    once the PP procedure has stabilised (leading coefficient times n!)."""
    cap = DEFAULT_CAP if max_order is None else max_order
    pp = pp_procedure(sys, cap)
    if not pp.converged:
        return None
    n = sys.n
    tw = sys.tower()
    start = max(pp.order + pp.s, sys.q)
    vals = [tw.dim_R(start + i) for i in range(n + 1)]
    for _ in range(n):
        vals = [b - a for a, b in zip(vals, vals[1:])]
    return vals[0]


def long_run_dims(sys: PDESystem, r_lo: int, r_hi: int) -> List[Tuple[int, int]]:
    tw = sys.tower()
    return [(sys.q + r, tw.dim_R(sys.q + r)) for r in range(r_lo, r_hi + 1)]


# diagram dimensions --------------------------------------------------------------

def connecting_sequence_dims(sys: PDESystem, r: int) -> Tuple[int, int, int, int, int, int]:
    """(g_{q+r+1}, R_{q+r+1}, R_{q+r}, h_{r+1}, Q_{r+1}, Q_r) of the exact
    sequence 0 -> g -> R -> R -> h -> Q -> Q -> 0."""
    tw = sys.tower()
    q = sys.q
    g = tw.dim_g(q + r + 1)
    R1 = tw.dim_R(q + r + 1)
    R0 = tw.dim_R(q + r)
    h = dim_source_jets(sys, q + r + 1, exact=True) - tw.symbol_rank(q + r + 1)
    Q1 = cc_dims(sys, r + 1)["dim_Q"]
    Q0 = cc_dims(sys, r)["dim_Q"]
    return (g, R1, R0, h, Q1, Q0)


def alternating_sum(seq) -> int:
    return sum((-1) ** i * x for i, x in enumerate(seq))


def exact_sequence_dims(sys: PDESystem, r: int) -> Tuple[int, int, int, int]:
    """(R_{q+r}, J_{q+r}(E), J_r(F_0), Q_r) of 0 -> R -> J(E) -> J(F_0) -> Q -> 0."""
    tw = sys.tower()
    N = sys.q + r
    return (tw.dim_R(N), dim_jet(N, sys.n, sys.m), dim_source_jets(sys, N),
            cc_dims(sys, r)["dim_Q"])


def jet_cohomology_dims(sys: PDESystem, r: int, relative: str = "cc") -> Dict[str, int]:
    """H(R_{q+r}), H(S_{r+1}(F_0)), H(J_{r+1}(F_0)) with the identity
    H_S = H_R + H_J.

    relative="cc" measures cocycles against all CC of level <= q+r (Psi_r).
    relative="generators" measures them against the prolongations of the
    generating CC up to level q+r+1 (the operator D_1 with F_1 = Q).
    """
    if relative == "generators":
        return _jet_cohomology_generators(sys, r)
    tw = sys.tower()
    q = sys.q
    N = q + r
    H_R = tw.dim_R(N) - tw.dim_projection(N + 1, N)
    # H_J: CC at level N+1 not obtained from first prolongations of level N
    key = source_key(sys)
    pro = Echelon(key)
    for _, v in tw.cc_rows(N):
        pro.insert(v)
        for i in range(sys.n):
            pro.insert(derive_vec(v, i, sys.n))
    span_rho1 = len(pro)
    Q1 = cc_dims(sys, r + 1)["dim_Q"]
    H_J = Q1 - span_rho1
    # H_S: Z = ker sigma_1(Psi_r) in S_{r+1}(F_0), B = im sigma_{r+1}(Phi)
    orders = sys.source_orders
    top_rows = Echelon(key)
    for _, v in tw.cc_rows(N):
        top = {k: c for k, c in v.items() if sum(k.nu) + orders[k.a] == N}
        if not top:
            continue
        for i in range(sys.n):
            sh = {SourceJet(k.a, J.bump(k.nu, i)): c for k, c in top.items()}
            top_rows.insert(sh)
    dim_S = dim_source_jets(sys, N + 1, exact=True)
    Z = dim_S - len(top_rows)
    B = tw.symbol_rank(N + 1)
    H_S = Z - B
    return {"H_R": H_R, "H_S": H_S, "H_J": H_J, "Z": Z, "B": B}


def _jet_cohomology_generators(sys: PDESystem, r: int) -> Dict[str, int]:
    tw = sys.tower()
    q, n = sys.q, sys.n
    N = q + r + 1
    gens = generating_cc(sys, max(r + 2, DEFAULT_CAP))
    key = source_key(sys)
    orders = sys.source_orders
    full = Echelon(key)
    top = Echelon(key)
    for g in gens.generators:
        if g.level > N:
            continue
        dc = _DerivCache(g.rhs, {}, n)
        for k in range(N - g.level + 1):
            for lam in J.indices_of_order(k, n):
                v = dc.get(lam)[0]
                full.insert(v)
                if k == N - g.level:
                    t = {sj: c for sj, c in v.items() if sum(sj.nu) + orders[sj.a] == N}
                    if t:
                        top.insert(t)
    H_R = tw.dim_R(N - 1) - tw.dim_projection(N, N - 1)
    B = tw.symbol_rank(N)
    Z = dim_source_jets(sys, N, exact=True) - len(top)
    ker = dim_source_jets(sys, N) - len(full)
    H_J = ker - tw.rank(N)
    return {"H_R": H_R, "H_S": Z - B, "H_J": H_J, "Z": Z, "B": B}


def containment_holds(sys: PDESystem, r: int) -> Tuple[bool, bool]:
    """(first prolongations of the level-(q+r) CC lie in the level-(q+r+1)
    CC span, the containment is strict)."""
    tw = sys.tower()
    key = source_key(sys)
    N = sys.q + r
    big = Echelon(key)
    for _, v in tw.cc_rows(N + 1):
        big.insert(v)
    small = Echelon(key)
    ok = True
    for _, v in tw.cc_rows(N):
        for w in [v] + [derive_vec(v, i, sys.n) for i in range(sys.n)]:
            if big.normal_form(w)[0]:
                ok = False
            small.insert(w)
    return ok, len(small) < len(big)


def sequence_dims(sys: PDESystem, depth: int = 2) -> Dict[str, List[int]]:
    """Spencer, trivial Spencer and Janet bundle dimensions of an involutive
    system R_q:
        C_r    = C(n,r) dim R_q       - rank delta(wedge^{r-1} (x) g_{q+1})
        C_r(E) = C(n,r) dim J_q(E)    - rank delta(wedge^{r-1} (x) S_{q+1} (x) E)
        F_r    = C_r(E) - C_r
    """
    from .system import fi_test

    fi = fi_test(sys, depth)
    if not fi.is_fi:
        raise PreconditionError(f"fi_test failed at order {fi.first_failure}")
    g = system_symbol(sys)
    if not is_involutive(g):
        raise PreconditionError("is_involutive failed: symbol is not involutive")
    n, m, q = sys.n, sys.m, sys.q
    tw = sys.tower()
    dimR = tw.dim_R(q)
    g1 = g.prolong()
    S1 = SymbolSpace.full(n, m, q + 1, sys.K.one)
    spencer, trivial = [], []
    for r in range(n + 1):
        spencer.append(comb(n, r) * dimR - _delta_rank(g1, r - 1, n))
        trivial.append(comb(n, r) * dim_jet(q, n, m) - _delta_rank(S1, r - 1, n))
    janet = [a - b for a, b in zip(trivial, spencer)]
    return {"spencer": spencer, "trivial": trivial, "janet": janet}
