from fractions import Fraction

from hypothesis import settings, strategies as st

from polifz.coeff import QuadExt

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

small_int = st.integers(min_value=-30, max_value=30)
rationals = st.builds(Fraction, small_int, st.integers(min_value=1, max_value=12))
nonzero_rationals = rationals.filter(bool)
quads = st.builds(QuadExt, rationals, rationals)
