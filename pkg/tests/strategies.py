"""
Hypothesis strategies for expressions over a handful of noemata
"""
from hypothesis import strategies as st

import syntax

binders = st.integers(min_value=0, max_value=3)

leaf_terms = st.one_of(
    st.just(syntax.alethizor()),
    st.just(syntax.enumerator()),
    binders.map(syntax.noema),
)


def _grow_formulas(atoms):
    return st.recursive(
        atoms,
        lambda inner: st.one_of(
            st.builds(syntax.joint_formula, inner, inner),
            st.builds(syntax.universal, binders, inner),
        ),
        max_leaves=6,
    )


flat_formulas = _grow_formulas(st.builds(syntax.atom, leaf_terms, leaf_terms))

terms = st.recursive(
    leaf_terms,
    lambda inner: st.one_of(
        st.builds(syntax.joint_term, inner, inner),
        st.builds(syntax.abstraction, binders, flat_formulas),
    ),
    max_leaves=6,
)

formulas = _grow_formulas(st.builds(syntax.atom, terms, terms))

expressions = st.one_of(terms, formulas)

formation_numbers = st.integers(min_value=1, max_value=1 << 64)
