"""Sparse Gaussian elimination over K.

Vectors are dicts key -> RationalFunction without zero entries. The order
of keys is given by a sort-key callable where the smallest key is the
leading (most important) coordinate. An optional payload vector follows
every row operation, which is how right-hand sides are tracked.
"""
from __future__ import annotations

from typing import Callable, Dict, Hashable, Iterable, List, Optional, Tuple

from .field import RationalFunction

Vec = Dict[Hashable, RationalFunction]


def axpy(target: Vec, c: RationalFunction, source: Vec) -> None:
    """target -= c * source, in place."""
    for k, v in source.items():
        t = target.get(k)
        cv = c * v
        if t is None:
            target[k] = -cv
        else:
            nv = t - cv
            if nv.num.terms:
                target[k] = nv
            else:
                del target[k]


def scale(vec: Vec, c: RationalFunction) -> Vec:
    return {k: v * c for k, v in vec.items()}


def add_into(target: Vec, c: RationalFunction, source: Vec) -> None:
    """target += c * source."""
    axpy(target, -c, source)


class Echelon:
    """Incremental row echelon form with head reduction.

    Each stored row has leading coefficient 1 at its lead key. Rows are never
    modified after insertion, so insertion history can be replayed.
    """

    def __init__(self, key: Callable):
        self.key = key
        self.rows: Dict[Hashable, Tuple[Vec, Optional[Vec]]] = {}
        self.order: List[Hashable] = []  # lead keys in insertion order

    def __len__(self):
        return len(self.rows)

    def lead(self, vec: Vec):
        return min(vec, key=self.key)

    def head_reduce(self, vec: Vec, payload: Optional[Vec] = None):
        vec = dict(vec)
        payload = dict(payload) if payload is not None else None
        rows, key = self.rows, self.key
        while vec:
            ld = min(vec, key=key)
            piv = rows.get(ld)
            if piv is None:
                break
            c = vec[ld]
            axpy(vec, c, piv[0])
            if payload is not None and piv[1]:
                axpy(payload, c, piv[1])
        return vec, payload

    def normal_form(self, vec: Vec, payload: Optional[Vec] = None):
        """Reduce every coordinate that is a lead key. The result is the
        unique element of vec + span with no lead keys in its support."""
        vec = dict(vec)
        payload = dict(payload) if payload is not None else None
        rows, key = self.rows, self.key
        done: Vec = {}
        while vec:
            ld = min(vec, key=key)
            c = vec[ld]
            piv = rows.get(ld)
            if piv is None:
                done[ld] = vec.pop(ld)
                continue
            axpy(vec, c, piv[0])
            if payload is not None and piv[1]:
                axpy(payload, c, piv[1])
        return done, payload

    def insert(self, vec: Vec, payload: Optional[Vec] = None, reduced: bool = False):
        """Add a row. Returns (lead, None) for a new pivot or (None, payload)
        when the row falls into the span (payload is the residual)."""
        if not reduced:
            vec, payload = self.head_reduce(vec, payload)
        if not vec:
            return None, payload
        ld = min(vec, key=self.key)
        c = vec[ld]
        if not c.is_one():
            inv = c.inverse()
            vec = {k: v * inv for k, v in vec.items()}
            if payload:
                payload = {k: v * inv for k, v in payload.items()}
        self.rows[ld] = (vec, payload)
        self.order.append(ld)
        return ld, None

    def reduced_rows(self, leads: Optional[Iterable] = None) -> Dict[Hashable, Tuple[Vec, Optional[Vec]]]:
        """Fully reduced (RREF) copies of the selected rows, reduced among
        themselves only."""
        leads = list(self.rows) if leads is None else list(leads)
        sub = Echelon(self.key)
        for ld in sorted(leads, key=self.key, reverse=True):
            vec, pay = self.rows[ld]
            sub.rows[ld] = (dict(vec), dict(pay) if pay is not None else None)
        out = {}
        for ld in sorted(leads, key=self.key, reverse=True):
            vec, pay = sub.rows[ld]
            tail = {k: v for k, v in vec.items() if k != ld}
            nf, npay = sub.normal_form(tail, pay)
            nf[ld] = vec[ld]
            out[ld] = (nf, npay)
            sub.rows[ld] = (nf, npay)
        return out


def rank(vectors: Iterable[Vec], key: Callable = repr) -> int:
    e = Echelon(key)
    r = 0
    for v in vectors:
        if v:
            ld, _ = e.insert(v)
            if ld is not None:
                r += 1
    return r


def kernel_basis(rows: Iterable[Vec], columns: List[Hashable], key: Callable,
                 one: RationalFunction) -> List[Vec]:
    """Basis of {v : row . v = 0 for all rows} over the given columns,
    one vector per free column (free column -> 1), free columns in order."""
    e = Echelon(key)
    for r in rows:
        if r:
            e.insert(r)
    red = e.reduced_rows()
    out = []
    for f in sorted(columns, key=key):
        if f in red:
            continue
        vec = {f: one}
        for ld, (row, _) in red.items():
            c = row.get(f)
            if c is not None:
                vec[ld] = -c
        out.append(vec)
    return out
