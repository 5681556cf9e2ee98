"""Analysis driver and report emitters.

An AnalysisReport holds only JSON-compatible values (str, int, bool, None,
lists and dicts of those), so the structured form round-trips exactly.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, fields
from typing import Dict, List, Optional

from . import cc
from .jets import render_jet
from .parser import SystemFile, render_system
from .render import render_linear_form
from .symbol import JanetTabular, delta_regularize, render_symbol_row
from .system import fi_test, pp_procedure

SCHEMA_VERSION = "v1"
COMMANDS = ("dims", "tabular", "cc", "syzygies", "resolution", "full")


@dataclass
class AnalysisReport:
    command: str = ""
    system: Dict = field(default_factory=dict)
    options: Dict = field(default_factory=dict)
    dims: Optional[List[Dict]] = None
    fi: Optional[Dict] = None
    pp: Optional[Dict] = None
    tabulars: Optional[List[Dict]] = None
    cc: Optional[Dict] = None
    syzygies: Optional[List[Dict]] = None
    resolution: Optional[Dict] = None
    checks: Optional[Dict[str, bool]] = None
    partial: bool = False
    schema: str = SCHEMA_VERSION

    def to_dict(self) -> Dict:
        return {k: v for k, v in asdict(self).items() if v is not None}

    @classmethod
    def from_dict(cls, d: Dict) -> "AnalysisReport":
        names = {f.name for f in fields(cls)}
        unknown = set(d) - names
        if unknown:
            raise ValueError(f"unknown report fields: {sorted(unknown)}")
        return cls(**d)

    @property
    def failed_checks(self) -> List[str]:
        return sorted(k for k, v in (self.checks or {}).items() if not v)


# emitters ------------------------------------------------------------------------

def emit_structured(report: AnalysisReport) -> bytes:
    return (json.dumps(report.to_dict(), sort_keys=True, indent=2, ensure_ascii=False)
            + "\n").encode("utf-8")


def parse_structured(data: bytes | str) -> AnalysisReport:
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    return AnalysisReport.from_dict(json.loads(data))


def emit_report(report: AnalysisReport, fmt: str = "text") -> bytes:
    if fmt == "structured":
        return emit_structured(report)
    if fmt == "text":
        return render_text(report).encode("utf-8")
    raise ValueError(f"unknown format {fmt!r}")


def _box(rows: List[Dict], n: int) -> List[str]:
    lefts = [r["equation"] for r in rows]
    w = max((len(s) for s in lefts), default=0)
    inner = 2 * n - 1
    pad = " " * (w + 2)
    out = [f"{pad}+{'-' * (inner + 2)}+"]
    for r in rows:
        out.append(f"{r['equation'].ljust(w)}  | {' '.join(r['columns'])} |")
    out.append(f"{pad}+{'-' * (inner + 2)}+")
    return out


def render_text(report: AnalysisReport) -> str:
    out: List[str] = []
    sysd = report.system
    if sysd:
        out.append(f"system: n={sysd['n']} m={sysd['m']} q={sysd['q']} "
                   f"sources={sysd['p']}")
    if report.dims is not None:
        out.append("")
        out.append("order  dim R  dim g  dim pi(R_next)")
        for row in report.dims:
            out.append(f"{row['order']:>5}  {row['dim_R']:>5}  {row['dim_g']:>5}  "
                       f"{row['dim_projection']:>14}")
    if report.fi is not None:
        fi = report.fi
        verdict = "yes" if fi["is_fi"] else f"no (first drop at order {fi['first_failure']})"
        out.append(f"formally integrable up to depth {fi['depth']}: {verdict}")
    if report.pp is not None:
        pp = report.pp
        out.append("")
        out.append("prolongation/projection:")
        for s in pp["steps"]:
            out.append(f"  {s}")
        chain = " -> ".join(str(c["dim"]) for c in pp["chain"])
        out.append(f"  chain of dim R^(s)_q: {chain}")
        if pp["converged"]:
            out.append(f"  involutive R^({pp['s']})_{pp['order']}; "
                       f"generating CC live at level <= {pp['cc_level']}")
        else:
            out.append("  not converged within the cap")
    for tab in report.tabulars or []:
        out.append("")
        out.append(f"Janet tabular of {tab['name']} (symbol at order {tab['level']}):")
        out.extend("  " + s for s in _box(tab["rows"], tab["n"]))
        out.append(f"  characters {tuple(tab['characters'])}, "
                   f"Janet: {'involutive' if tab['involutive'] else 'not involutive'}, "
                   f"delta: {'involutive' if tab['delta_involutive'] else 'not involutive'}")
        if tab["change"] is not None:
            out.append(f"  coordinate change {tab['change']}")
    if report.cc is not None:
        c = report.cc
        out.append("")
        out.append("generating compatibility conditions:")
        for g in c["generators"]:
            out.append(f"  {g['label']} (order {g['order']}): {g['expression']} = 0")
        if not c["generators"]:
            out.append("  none")
        out.append(f"  dim Q_r for r = 0..: {c['dim_Q']}")
        if not c["complete"]:
            out.append("  scan stopped at the cap: list may be incomplete")
    if report.syzygies is not None:
        out.append("")
        out.append("syzygies among the generators:")
        for s in report.syzygies:
            out.append(f"  {s['label']} (order {s['order']}): {s['expression']} = 0")
        if not report.syzygies:
            out.append("  none")
    if report.resolution is not None:
        r = report.resolution
        out.append("")
        out.append(f"resolution ranks {r['ranks']}, operator orders {r['orders']}")
        out.append(f"  euler characteristic {r['euler_characteristic']}, "
                   f"differential rank from dim growth {r['differential_rank']}")
        out.append(f"  generators {r['generator_count']} vs dim F0 - dim E = "
                   f"{r['source_excess']}")
    if report.checks is not None:
        out.append("")
        out.append("checks:")
        for k in sorted(report.checks):
            out.append(f"  {k}: {'ok' if report.checks[k] else 'FAILED'}")
    if report.partial:
        out.append("")
        out.append("partial result: a cap was reached")
    return "\n".join(out).lstrip("\n") + "\n"


# driver --------------------------------------------------------------------------

def _tabular_dict(tab: JanetTabular, name: str, names, xnames, delta_inv: bool) -> Dict:
    rows = []
    for r in tab.rows:
        cols = [str(v) if v <= r.cls else r.marks[v] for v in range(1, tab.n + 1)]
        rows.append({"lead": render_jet(names[r.lead.k], r.lead.mu),
                     "equation": render_symbol_row(r.equation, names, xnames) + " = 0",
                     "class": r.cls,
                     "columns": cols})
    return {"name": name, "level": tab.level, "n": tab.n,
            "rows": rows, "characters": list(tab.characters),
            "involutive": tab.involutive, "delta_involutive": delta_inv,
            "change": tab.change}


def _form(vec, names, xnames, key) -> str:
    return render_linear_form(vec, names, xnames, key=key)


def run_analysis(sf: SystemFile, command: str, max_order: Optional[int] = None,
                 depth: Optional[int] = None, seed: Optional[int] = None) -> AnalysisReport:
    if command not in COMMANDS:
        raise ValueError(f"unknown command {command!r}")
    opts = sf.options
    max_order = max_order if max_order is not None else opts.get("max_order", cc.DEFAULT_CAP)
    depth = depth if depth is not None else opts.get("depth", 3)
    seed = seed if seed is not None else opts.get("seed", 0)
    sys = sf.to_system()
    xn = sys.K.names
    rep = AnalysisReport(command=command)
    rep.system = {"n": sys.n, "m": sys.m, "q": sys.q, "p": len(sys.sources),
                  "variables": list(sf.variables), "unknowns": list(sf.unknowns),
                  "sources": list(sf.sources), "text": render_system(sf)}
    rep.options = {"max_order": max_order, "depth": depth, "seed": seed}
    full = command == "full"
    checks: Dict[str, bool] = {}

    if command in ("dims", "full"):
        tw = sys.tower()
        rep.dims = [{"order": sys.q + r, "dim_R": tw.dim_R(sys.q + r),
                     "dim_g": tw.dim_g(sys.q + r),
                     "dim_projection": tw.dim_projection(sys.q + r + 1, sys.q + r)}
                    for r in range(depth + 1)]
        fi = fi_test(sys, depth)
        rep.fi = {"is_fi": fi.is_fi, "first_failure": fi.first_failure, "depth": depth}

    pp = None
    if command in ("dims", "tabular", "full"):
        pp = pp_procedure(sys, max_order)
        rep.pp = {"converged": pp.converged, "order": pp.order, "s": pp.s,
                  "cc_level": pp.cc_level, "steps": list(pp.steps),
                  "chain": [{"s": s, "order": q, "dim": d} for s, q, d in pp.chain]}
        if not pp.converged:
            rep.partial = True

    if command in ("tabular", "full") and sys.q > 0:
        tabs = []
        targets = [("R_q", sys)]
        if pp is not None and pp.converged and pp.final is not None and (pp.s or pp.order != sys.q):
            targets.append((f"R^({pp.s})_{pp.order}", pp.final))
        for name, T in targets:
            reg = delta_regularize(T, 0, seed=seed, max_tries=20)
            change = None if reg.tries == 1 else reg.change
            tab = reg.tabular
            tab.change = change
            tabs.append(_tabular_dict(tab, name, sys.unknowns, xn, reg.delta_verdict))
            if full:
                checks[f"janet_agrees_with_delta[{name}]"] = reg.agreed
        rep.tabulars = tabs

    gens = None
    if command in ("cc", "syzygies", "resolution", "full"):
        gens = cc.generating_cc(sys, max_order)
        key = cc.source_key(sys)
        rep.cc = {"generators": [{"label": g.label, "order": g.order,
                                  "expression": _form(g.rhs, sys.sources, xn, key)}
                                 for g in gens.generators],
                  "by_order": {str(k): v for k, v in sorted(gens.by_order().items())},
                  "complete": gens.complete, "scanned_level": gens.scanned_level,
                  "dim_Q": [s.dim_Q for s in gens.stats],
                  "identities": gens.identities}
        if not gens.complete:
            rep.partial = True
        if full:
            checks["cc_substitution"] = all(cc.verify_cc(sys, g.rhs) for g in gens.generators)

    if command in ("syzygies", "resolution", "full") and gens is not None:
        rels, sub = cc.syzygies(gens)
        names = tuple(g.label for g in gens.generators)
        key = cc.source_key(sub.system)
        rep.syzygies = [{"label": r.label, "order": r.order,
                         "expression": _form(r.coefficients, names, xn, key)}
                        for r in rels]
        if not sub.complete:
            rep.partial = True
        if full:
            checks["syzygy_substitution"] = all(cc.verify_syzygy(gens, r) for r in rels)

    if command in ("resolution", "full"):
        res = cc.resolution(sys, max_order)
        rep.resolution = {"ranks": res.ranks, "orders": res.orders,
                          "euler_characteristic": res.euler_characteristic,
                          "differential_rank": res.differential_rank,
                          "complete": res.complete,
                          "generator_count": res.ranks[2] if len(res.ranks) > 2 else 0,
                          "source_excess": len(sys.sources) - sys.m}
        if not res.complete:
            rep.partial = True
        if full and res.differential_rank is not None and res.complete:
            checks["euler_equals_differential_rank"] = (
                res.euler_characteristic == res.differential_rank)

    if full:
        last = min(3, max_order - 1)
        conn, add, cont = True, True, True
        for r in range(last + 1):
            conn &= cc.alternating_sum(cc.connecting_sequence_dims(sys, r)) == 0
            h = cc.jet_cohomology_dims(sys, r)
            add &= h["H_S"] == h["H_R"] + h["H_J"]
            ok, _ = cc.containment_holds(sys, r)
            cont &= ok
        checks["connecting_sequence_exact"] = conn
        checks["cohomology_additivity"] = add
        checks["cc_containment"] = cont
        rep.checks = checks
    return rep


def exit_status(report: AnalysisReport) -> int:
    if report.failed_checks:
        return 3
    if report.partial:
        return 2
    return 0
