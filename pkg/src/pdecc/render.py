"""Text rendering of linear forms in jets or source jets."""
from __future__ import annotations

from typing import Callable, Dict, Optional, Sequence

from .field import RationalFunction
from .jets import render_jet


def _xnames(f: RationalFunction, xnames):
    return xnames if xnames is not None else [f"x{i + 1}" for i in range(f.nvars)]


def coefficient_parts(c: RationalFunction, xnames=None):
    """(negative, text) where text is '' for coefficient 1."""
    xn = _xnames(c, xnames)
    neg = False
    if c.den.is_one() and len(c.num.terms) == 1:
        (e, q), = c.num.terms.items()
        if q < 0:
            neg = True
            c = -c
        if c.is_one():
            return neg, ""
        return neg, c.render(xn)
    return False, f"({c.render(xn)})"


def render_linear_form(vec: Dict, names: Sequence[str], xnames=None,
                       key: Optional[Callable] = None, deriv_style: bool = False) -> str:
    """Render sum c * name_mu with terms in key order (greatest first).

    With deriv_style the terms are written d_mu(name) instead of name_mu.
    """
    if not vec:
        return "0"
    items = sorted(vec.items(), key=(lambda kv: key(kv[0])) if key else None)
    out = []
    for idx, (k, c) in enumerate(items):
        neg, coef = coefficient_parts(c, xnames)
        name = names[k[0]]
        if deriv_style:
            from .jets import render_derivative
            d = render_derivative(k[1])
            atom = f"{d}({name})" if d else name
        else:
            atom = render_jet(name, k[1])
        body = f"{coef}*{atom}" if coef else atom
        if idx == 0:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)
