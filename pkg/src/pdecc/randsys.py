"""Seeded random small systems in the input language."""
from __future__ import annotations

import random
from typing import List

from .jets import enumerate_jets, index_digits


def _coeff(rng: random.Random, n: int, allow_x: bool) -> str:
    c = rng.choice([-2, -1, 1, 1, 2, 3])
    if allow_x and rng.random() < 0.25:
        x = f"x{rng.randint(1, n)}"
        return f"{c}*{x}" if c != 1 else x
    return str(c)


def random_system_text(rng: random.Random, n: int, m: int, q: int, neq: int,
                       allow_x: bool = True, lower: bool = True) -> str:
    """Each equation: 1-3 top-order terms plus an optional lower-order term,
    with its own source."""
    names = ["y"] if m == 1 else [f"y{k + 1}" for k in range(m)]
    top = enumerate_jets(m, n, q, exact=True)
    low = enumerate_jets(m, n, q - 1) if q > 0 else []
    lines = [f"vars {' '.join(f'x{i + 1}' for i in range(n))}",
             f"unknowns {' '.join(names)}",
             f"sources {' '.join(f'u{i + 1}' for i in range(neq))}"]
    for i in range(neq):
        jets = rng.sample(top, rng.randint(1, min(3, len(top))))
        if lower and low and rng.random() < 0.5:
            jets.append(rng.choice(low))
        terms: List[str] = []
        for j in jets:
            d = index_digits(j.mu)
            atom = f"{names[j.k]}_{d}" if d else names[j.k]
            terms.append(f"{_coeff(rng, n, allow_x)}*{atom}")
        lines.append(f"eq e{i + 1}: {' + '.join(terms)} = u{i + 1}")
    return "\n".join(lines) + "\n"


def random_system_params(rng: random.Random):
    n = rng.choice([2, 2, 3])
    m = rng.choice([1, 1, 2])
    q = rng.choice([1, 2]) if m == 1 else 1
    ntop = len(enumerate_jets(m, n, q, exact=True))
    neq = rng.randint(1, max(1, min(3, ntop - 1)))
    return n, m, q, neq
