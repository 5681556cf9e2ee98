from pathlib import Path

import pytest

from pdecc.parser import load_system, parse_system

FIXTURES = Path(__file__).resolve().parents[1] / "src" / "pdecc" / "fixtures"
WORKED = ("example_2_1", "example_2_2", "example_2_3", "macaulay")
ALL = WORKED + tuple(f"random_{i:02d}" for i in range(1, 11))


def fixture_text(name):
    return (FIXTURES / f"{name}.pde").read_text()


def load(name):
    return load_system(fixture_text(name))


def parsed(name):
    return parse_system(fixture_text(name))


@pytest.fixture(scope="session")
def ex21():
    return load("example_2_1")


@pytest.fixture(scope="session")
def ex22():
    return load("example_2_2")


@pytest.fixture(scope="session")
def ex23():
    return load("example_2_3")


@pytest.fixture(scope="session")
def mac():
    return load("macaulay")


def lhs_text(sys, vec):
    from pdecc.jets import jet_key
    from pdecc.render import render_linear_form
    return render_linear_form(vec, sys.unknowns, sys.names, key=jet_key)


def rhs_text(sys, vec):
    from pdecc.cc import source_key
    from pdecc.render import render_linear_form
    return render_linear_form(vec, sys.sources, sys.names, key=source_key(sys))


def equation_texts(sys):
    return [f"{lhs_text(sys, e.lhs)} = {rhs_text(sys, e.rhs)}" for e in sys.equations]


def monic_text(vec, names, key, xnames):
    """Render a linear form scaled so its leading coefficient is 1."""
    from pdecc.render import render_linear_form
    lead = min(vec, key=key)
    inv = vec[lead].inverse()
    return render_linear_form({k: c * inv for k, c in vec.items()}, names, xnames, key=key)


def cc_texts(gens):
    from pdecc.cc import source_key
    sys = gens.system
    return [monic_text(g.rhs, sys.sources, source_key(sys), sys.names) for g in gens.generators]


def syzygy_texts(rels, sub):
    from pdecc.cc import source_key
    st = sub.system
    return [monic_text(r.coefficients, st.sources, source_key(st), st.names) for r in rels]


def named_terms(vec, names):
    from pdecc.jets import render_jet
    return {render_jet(names[k[0]], k[1]): c for k, c in vec.items()}


def proportional(got, expected):
    """got: name -> RationalFunction; expected: name -> RationalFunction or int."""
    if set(got) != set(expected):
        return False
    if not got:
        return True
    n = next(iter(got.values())).nvars
    from pdecc.field import RationalFunction
    expected = {k: v if isinstance(v, RationalFunction) else RationalFunction.const(v, n)
                for k, v in expected.items()}
    k0 = next(iter(expected))
    a0, b0 = got[k0], expected[k0]
    return all(got[k] * b0 == a0 * expected[k] for k in expected)
