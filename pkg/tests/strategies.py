import hypothesis.strategies as st

from omegamodal.syntax import BOTTOM, TOP, And, Atom, Box, Forall, Not

VARS = st.sampled_from(["x", "y", "z"])
MODS = st.sampled_from(["box", "E", "C"])
# Fixed arities keep every generated formula arity-consistent.
ARITY = {"p": 0, "q": 0, "P": 1, "R": 2}


@st.composite
def atoms(draw):
    pred = draw(st.sampled_from(sorted(ARITY)))
    return Atom(pred, tuple(draw(VARS) for _ in range(ARITY[pred])))


def formulas(max_leaves=12, mods=MODS):
    if not isinstance(mods, st.SearchStrategy):
        mods = st.sampled_from(list(mods))
    leaves = st.one_of(st.just(TOP), st.just(BOTTOM), atoms())
    return st.recursive(
        leaves,
        lambda sub: st.one_of(
            st.builds(And, sub, sub),
            st.builds(Not, sub),
            st.builds(Forall, VARS, sub),
            st.builds(Box, mods, sub),
        ),
        max_leaves=max_leaves,
    )
