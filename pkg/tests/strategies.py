"""Shared hypothesis strategies."""

from hypothesis import strategies as st

from cohdiff.generators import GenConfig, random_open, random_program
from cohdiff.syntax import NAT, Arrow, NatD

nat_types = st.integers(0, 4).map(NatD)

types = st.recursive(nat_types, lambda inner: st.builds(Arrow, inner, inner), max_leaves=4)


@st.composite
def sharp_types(draw):
    doms = draw(st.lists(types, max_size=3))
    out = NAT
    for a in reversed(doms):
        out = Arrow(a, out)
    return out


seeds = st.integers(0, 10**6)
programs = st.builds(random_program, seeds)
programs_td = st.builds(lambda s, d: random_program(s, GenConfig(), ty=NatD(d)), seeds, st.integers(0, 2))
judgments = st.builds(random_open, seeds)
