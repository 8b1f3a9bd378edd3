"""Shared hypothesis strategies."""
from hypothesis import strategies as st

from ..constructions import BElement, MnElement, Params
from ..duality import Functional
from ..perms import Permutation

PARAMS = Params(5, 2, 3, 1)
# q = 3 gives B two coordinates
WIDE_PARAMS = Params(5, 3, 2, 1)


def permutations_of(degree: int):
    return st.permutations(list(range(1, degree + 1))).map(lambda images: Permutation(tuple(images)))


def even_permutations_of(degree: int):
    return permutations_of(degree).filter(lambda s: s.is_even)


def vn_vectors(params: Params = PARAMS):
    return st.lists(st.integers(0, params.q - 1), min_size=params.vn.dimension,
                    max_size=params.vn.dimension).map(params.vn.combination)


def nonzero_vn_vectors(params: Params = PARAMS):
    return vn_vectors(params).filter(lambda v: not v.is_zero)


def b_elements(params: Params = PARAMS):
    return st.lists(st.integers(0, params.m - 1), min_size=params.q - 1, max_size=params.q - 1).map(
        lambda coords: BElement.from_coordinates(coords, params.q, params.m))


def sparse_mn_elements(params: Params = PARAMS, max_size: int = 4):
    return st.dictionaries(nonzero_vn_vectors(params), b_elements(params), max_size=max_size).map(
        lambda values: MnElement.from_map(params.q, params.m, values))


def functionals(params: Params = PARAMS, max_size: int = 4):
    keys = st.tuples(nonzero_vn_vectors(params), st.integers(1, params.q - 1))
    return st.dictionaries(keys, st.integers(0, params.m - 1), max_size=max_size).map(
        lambda coeffs: Functional.of(coeffs, params.m))


seeds = st.integers(min_value=0, max_value=2 ** 32 - 1)
