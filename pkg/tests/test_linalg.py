import random

import sympy

from pdecc.field import Field
from pdecc.linalg import Echelon, axpy, kernel_basis, rank

K = Field(("x1", "x2"))
X = sympy.symbols("x1 x2")


def rand_entry(rng):
    c = rng.randint(-2, 2)
    if c == 0:
        return None
    f = K.const(c)
    if rng.random() < 0.3:
        f = f * K.var(rng.randint(0, 1))
    return f


def rand_rows(rng, nrows, ncols):
    rows = []
    for _ in range(nrows):
        v = {}
        for j in range(ncols):
            e = rand_entry(rng)
            if e is not None:
                v[j] = e
        rows.append(v)
    return rows


def to_matrix(rows, ncols):
    return sympy.Matrix([[sympy.sympify(r[j].render(["x1", "x2"]), locals=dict(zip(["x1", "x2"], X)))
                          if j in r else 0 for j in range(ncols)] for r in rows])


def test_rank_against_sympy():
    rng = random.Random(5)
    for _ in range(25):
        nr, nc = rng.randint(1, 5), rng.randint(1, 5)
        rows = rand_rows(rng, nr, nc)
        if not any(rows):
            continue
        assert rank(rows, key=lambda j: j) == to_matrix(rows, nc).rank(simplify=True)


def test_dependent_rows_have_rank_one():
    v = {0: K.var(0), 1: K.one}
    w = {0: K.var(0) * K.var(1), 1: K.var(1)}
    assert rank([v, w], key=lambda j: j) == 1


def test_kernel_basis_annihilated_by_rows():
    rng = random.Random(9)
    for _ in range(20):
        nc = rng.randint(2, 5)
        rows = rand_rows(rng, rng.randint(1, 4), nc)
        ker = kernel_basis(rows, list(range(nc)), key=lambda j: j, one=K.one)
        r = rank(rows, key=lambda j: j)
        assert len(ker) == nc - r
        for v in ker:
            for row in rows:
                s = K.zero
                for j, c in row.items():
                    if j in v:
                        s = s + c * v[j]
                assert s.is_zero()


def test_payload_tracks_combination():
    e = Echelon(key=lambda j: j)
    a = {0: K.one, 1: K.var(0)}
    b = {1: K.one}
    e.insert(a, {"A": K.one})
    e.insert(b, {"B": K.one})
    # c = x2*a - x1*x2*b, so it reduces to zero
    c = {0: K.var(1)}
    lead, residual = e.insert(c, {"C": K.one})
    assert lead is None
    assert residual == {"C": K.one, "A": -K.var(1), "B": K.var(0) * K.var(1)}


def test_axpy_removes_zero_entries():
    t = {0: K.one, 1: K.var(0)}
    axpy(t, K.one, {0: K.one})
    assert t == {1: K.var(0)}


def test_reduced_rows_are_reduced():
    e = Echelon(key=lambda j: j)
    e.insert({0: K.one, 1: K.one, 2: K.one})
    e.insert({1: K.one, 2: K.var(0)})
    red = e.reduced_rows()
    assert set(red) == {0, 1}
    assert 1 not in red[0][0]
    assert red[0][0][2] == K.one - K.var(0)
