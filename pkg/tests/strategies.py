from __future__ import annotations

from fractions import Fraction

from hypothesis import strategies as st

from kahler_dirac.kahler_atiyah import Metric, Multivector
from kahler_dirac.numbers import Num
from kahler_dirac.su2_harmonics import PolyFun

small_fraction = st.builds(Fraction, st.integers(-5, 5), st.integers(1, 4))


@st.composite
def nums(draw, surd: bool = True):
    parts = [draw(small_fraction), draw(small_fraction)]
    if surd and draw(st.booleans()):
        parts += [draw(small_fraction), draw(small_fraction)]
    return Num(*parts)


gaussian = nums(surd=False)


@st.composite
def multivectors(draw, dim: int, max_terms: int = 6):
    masks = draw(st.lists(st.integers(0, (1 << dim) - 1), max_size=max_terms, unique=True))
    return Multivector(dim, {m: draw(gaussian) for m in masks})


@st.composite
def vectors(draw, dim: int):
    return Multivector.vector(dim, [draw(gaussian) for _ in range(dim)])


@st.composite
def diagonal_metrics(draw, dim: int):
    return Metric.diagonal([draw(st.sampled_from([1, -1])) for _ in range(dim)])


@st.composite
def polyfuns(draw, max_degree: int = 3, max_terms: int = 4):
    terms = {}
    for _ in range(draw(st.integers(0, max_terms))):
        e = tuple(draw(st.integers(0, max_degree)) for _ in range(4))
        terms[e] = draw(gaussian)
    return PolyFun(terms)
