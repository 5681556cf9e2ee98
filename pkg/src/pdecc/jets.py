"""Jet coordinates, multi-indices and the ordering used for pivots.

A multi-index is a tuple (mu_1, ..., mu_n) of non-negative ints. Jets
y^k_mu and source jets u^a_nu are small named tuples so they can be used
directly as sparse-vector keys.

Ordering: higher order first. Within one order the jet with the smaller
mu_1 wins, then smaller mu_2, and so on (degree reverse lex). Within one
multi-index the larger unknown index comes first. This ranks y_33 above
y_23 above y_22 above y_13 and is class respecting: a jet of higher
class always precedes a jet of lower class of the same order.
"""
from __future__ import annotations

import re
from functools import lru_cache
from itertools import combinations_with_replacement
from math import comb
from typing import Iterator, NamedTuple, Sequence, Tuple

MultiIndex = Tuple[int, ...]


class Jet(NamedTuple):
    k: int  # unknown index, 0-based
    mu: MultiIndex

    @property
    def order(self) -> int:
        return sum(self.mu)


class SourceJet(NamedTuple):
    a: int  # source (right-hand side) index, 0-based
    nu: MultiIndex

    @property
    def order(self) -> int:
        return sum(self.nu)


def order(mu: MultiIndex) -> int:
    return sum(mu)


def unit(i: int, n: int) -> MultiIndex:
    e = [0] * n
    e[i] = 1
    return tuple(e)


def add_index(mu: MultiIndex, nu: MultiIndex) -> MultiIndex:
    return tuple(a + b for a, b in zip(mu, nu))


def bump(mu: MultiIndex, i: int, by: int = 1) -> MultiIndex:
    return mu[:i] + (mu[i] + by,) + mu[i + 1:]


def janet_class(mu: MultiIndex) -> int:
    """Smallest i (1-based) with mu_i != 0."""
    for i, a in enumerate(mu):
        if a:
            return i + 1
    raise ValueError("order-0 multi-index has no class")


def multiplicative_vars(mu: MultiIndex) -> Tuple[int, ...]:
    """1-based multiplicative variables: 1..class."""
    return tuple(range(1, janet_class(mu) + 1))


def dim_sym(q: int, n: int, m: int = 1) -> int:
    if q < 0:
        return 0
    return m * comb(q + n - 1, n - 1)


def dim_jet(q: int, n: int, m: int = 1) -> int:
    if q < 0:
        return 0
    return m * comb(q + n, n)


def indices_of_order(q: int, n: int) -> Iterator[MultiIndex]:
    """Multi-indices of length n and order q, greatest first."""
    out = []
    for combo in combinations_with_replacement(range(n), q):
        mu = [0] * n
        for i in combo:
            mu[i] += 1
        out.append(tuple(mu))
    out.sort()
    return iter(out)


def indices_up_to(q: int, n: int) -> Iterator[MultiIndex]:
    for p in range(q, -1, -1):
        yield from indices_of_order(p, n)


@lru_cache(maxsize=None)
def jet_key(j) -> tuple:
    """Sort key: ascending key means more important (leading first)."""
    mu = j[1]
    return (-sum(mu),) + mu + (-j[0],)


def jet_sort(jets) -> list:
    return sorted(jets, key=jet_key)


def enumerate_jets(m: int, n: int, q: int, exact: bool = False) -> list:
    """Jets y^k_mu with |mu| = q (exact) or |mu| <= q, greatest first."""
    orders = [q] if exact else range(q, -1, -1)
    out = []
    for p in orders:
        for mu in indices_of_order(p, n):
            for k in range(m - 1, -1, -1):
                out.append(Jet(k, mu))
    return out


def enumerate_source_jets(orders: Sequence[int], n: int, level: int) -> list:
    """Source jets (a, nu) with |nu| + orders[a] <= level."""
    out = []
    for a, oa in enumerate(orders):
        for mu in indices_up_to(level - oa, n):
            out.append(SourceJet(a, mu))
    return out


# text syntax -----------------------------------------------------------------

def index_digits(mu: MultiIndex) -> str:
    """Non-decreasing digit string: (1,0,2) -> '133'. Uses '0' for order zero."""
    s = "".join(str(i + 1) * a for i, a in enumerate(mu))
    return s


def render_jet(name: str, mu: MultiIndex) -> str:
    d = index_digits(mu)
    return f"{name}_{d}" if d else name


def render_derivative(mu: MultiIndex) -> str:
    d = index_digits(mu)
    return f"d_{d}" if d else ""


_JET_TOKEN = re.compile(r"^([A-Za-z][A-Za-z0-9]*?)(?:_([0-9]+))?$")


def parse_index_digits(digits: str, n: int) -> MultiIndex:
    """'133' -> (1,0,2). Digit order does not matter; '0' alone means order 0."""
    mu = [0] * n
    if digits == "0":
        return tuple(mu)
    for ch in digits:
        i = int(ch)
        if i < 1 or i > n:
            raise IndexError(f"variable index {i} out of range 1..{n}")
        mu[i - 1] += 1
    return tuple(mu)
