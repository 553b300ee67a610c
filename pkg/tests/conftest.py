import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from tridom.generators import GenSpec, generate

settings.register_profile(
    "default", deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

NAMED = ["triangle", "K4", "stacked5", "octahedron", "icosahedron",
         "doublewheel_5", "doublewheel_7"]


@st.composite
def gen_specs(draw, min_n=4, max_n=40):
    n = draw(st.integers(min_n, max_n))
    seed = draw(st.integers(0, 2**32 - 1))
    if draw(st.booleans()):
        return GenSpec("stacked", n=n, seed=seed)
    return GenSpec("flipmix", n=n, seed=seed, flips=draw(st.integers(0, 6 * n)))


@st.composite
def triangulations(draw, min_n=4, max_n=40):
    return generate(draw(gen_specs(min_n, max_n)))


@pytest.fixture(params=NAMED)
def named_graph(request):
    return generate(GenSpec("named", name=request.param))


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for k in sorted(results):
            terminalreporter.write_line(results[k])
