import math

import numpy as np
from django.test import SimpleTestCase
from hypothesis import given
from hypothesis import strategies as st

from ..exceptions import NoSuchVectorError, ParameterError
from ..ffla import (
    FqScalar, FqSubspace, FqVector, ap_invariant_closure, find_orbit_p_vector, in_column_module, inner,
    is_nondegenerate, matrix_inverse, nullspace, orthogonal_complement, rank, row_reduce, sumzero_space,
)
from ..perms import alternating_group, parse_cycles
from .strategies import WIDE_PARAMS, even_permutations_of, permutations_of, vn_vectors


def matrices(q, rows=4, cols=5):
    return st.lists(st.lists(st.integers(0, q - 1), min_size=cols, max_size=cols), min_size=rows, max_size=rows)


class ScalarTests(SimpleTestCase):
    def test_arithmetic(self):
        a, b = FqScalar(3, 5), FqScalar(4, 5)
        self.assertEqual(a + b, 2)
        self.assertEqual(a - b, 4)
        self.assertEqual(a * b, 2)
        self.assertEqual(FqScalar(2, 5).inverse(), 3)
        self.assertEqual(a / b, 2)

    def test_zero_has_no_inverse(self):
        with self.assertRaises(ParameterError):
            FqScalar(0, 7).inverse()

    def test_field_mismatch(self):
        with self.assertRaises(ParameterError):
            FqScalar(3, 5) + FqScalar(1, 7)


class VectorTests(SimpleTestCase):
    def test_block_right_action(self):
        v = FqVector.from_blocks([[1], [2], [3], [4], [0]], 5)
        cycle = parse_cycles('(1 2 3 4 5)', 5).inverse()
        self.assertEqual(v.permute(cycle).coords, (0, 1, 2, 3, 4))

    def test_length_mismatch(self):
        with self.assertRaises(ParameterError):
            FqVector.of([1, 2], 3) + FqVector.of([1, 2, 0], 3)

    @given(permutations_of(5), permutations_of(5), st.lists(st.integers(0, 2), min_size=10, max_size=10))
    def test_permute_is_a_right_action(self, a, b, coords):
        v = FqVector.of(coords, 3, 2)
        self.assertEqual(v.permute(a * b), v.permute(a).permute(b))

    @given(permutations_of(5), st.lists(st.integers(0, 2), min_size=5, max_size=5),
           st.lists(st.integers(0, 2), min_size=5, max_size=5), st.integers(0, 2))
    def test_form_is_bilinear_and_invariant(self, s, x, y, c):
        v, w = FqVector.of(x, 3, 1), FqVector.of(y, 3, 1)
        self.assertEqual(inner(v.permute(s), w.permute(s)), inner(v, w))
        self.assertEqual(inner(v.scale(c) + w, w), c * inner(v, w) + inner(w, w))
        self.assertEqual(inner(v, w), inner(w, v))


class MatrixTests(SimpleTestCase):
    def test_rank_and_inverse(self):
        self.assertEqual(rank([[1, 2], [2, 4]], 5), 1)
        inverse = matrix_inverse([[1, 1], [0, 1]], 5)
        self.assertEqual(inverse.tolist(), [[1, 4], [0, 1]])
        with self.assertRaises(ParameterError):
            matrix_inverse([[1, 2], [2, 4]], 5)

    @given(matrices(3))
    def test_nullspace(self, rows):
        M = np.array(rows, dtype=np.int64)
        basis = nullspace(M, 3)
        self.assertEqual(basis.shape[0], M.shape[1] - rank(M, 3))
        if basis.shape[0]:
            self.assertFalse((M @ basis.T % 3).any())

    @given(matrices(5))
    def test_row_reduce_pivots(self, rows):
        R, pivots = row_reduce(rows, 5)
        self.assertEqual(len(pivots), R.shape[0])
        for r, c in enumerate(pivots):
            self.assertEqual(int(R[r, c]), 1)
            self.assertEqual(int(np.count_nonzero(R[:, c])), 1)


class ModuleSolveTests(SimpleTestCase):
    def test_prime_power_modulus(self):
        self.assertFalse(in_column_module([[2]], [1], 4))
        self.assertTrue(in_column_module([[2]], [2], 4))
        self.assertTrue(in_column_module([[2, 3]], [1], 4))

    def test_composite_modulus(self):
        self.assertTrue(in_column_module([[3]], [3], 6))
        self.assertFalse(in_column_module([[3]], [1], 6))
        self.assertTrue(in_column_module([[2], [3]], [4, 0], 6))
        self.assertFalse(in_column_module([[2], [3]], [1, 0], 6))

    def test_trivial_modulus(self):
        self.assertTrue(in_column_module([[0]], [5], 1))

    def test_shape_mismatch(self):
        with self.assertRaises(ParameterError):
            in_column_module([[1, 2]], [1, 2], 5)

    @given(matrices(3, rows=3, cols=4), st.lists(st.integers(0, 8), min_size=4, max_size=4))
    def test_image_vectors_are_solvable(self, rows, coefficients):
        A = np.array(rows, dtype=np.int64)
        b = A @ np.array(coefficients, dtype=np.int64) % 9
        self.assertTrue(in_column_module(A, b, 9))


class SubspaceTests(SimpleTestCase):
    def setUp(self):
        self.vn = sumzero_space(5, 2, 1)

    def test_sumzero_space(self):
        self.assertEqual(self.vn.dimension, 4)
        self.assertEqual(len(self.vn.elements()), 16)
        self.assertIn(FqVector.of([1, 1, 0, 0, 0], 2, 1), self.vn)
        self.assertNotIn(FqVector.of([1, 0, 0, 0, 0], 2, 1), self.vn)
        self.assertEqual(sumzero_space(5, 3, 2).dimension, 8)

    def test_sumzero_space_parameters(self):
        for p, q, n in ((5, 5, 1), (3, 2, 1), (5, 4, 1), (5, 2, 0)):
            with self.subTest(p=p, q=q, n=n):
                with self.assertRaises(ParameterError):
                    sumzero_space(p, q, n)

    def test_coordinates(self):
        v = FqVector.of([1, 0, 1, 0, 0], 2, 1)
        self.assertEqual(self.vn.combination(self.vn.coordinates(v)), v)
        with self.assertRaises(ParameterError):
            self.vn.coordinates(FqVector.of([1, 0, 0, 0, 0], 2, 1))

    def test_complement(self):
        self.assertTrue(is_nondegenerate(self.vn))
        self.assertEqual(orthogonal_complement(self.vn, self.vn).dimension, 0)
        line = [FqVector.of([1, 1, 0, 0, 0], 2, 1)]
        perp = orthogonal_complement(line, self.vn)
        self.assertEqual(perp.dimension, 3)
        self.assertTrue(all(int(inner(u, line[0])) == 0 for u in perp.vectors()))

    def test_join(self):
        a = FqSubspace.span([[1, 1, 0, 0, 0]], 5, 2, 1)
        b = FqSubspace.span([[0, 1, 1, 0, 0]], 5, 2, 1)
        self.assertEqual(a.join(b).dimension, 2)
        self.assertTrue(a.issubspace(a.join(b)))
        self.assertTrue(a.join(b).issubspace(self.vn))

    def test_closure_is_invariant(self):
        closure, perp = ap_invariant_closure([FqVector.of([1, 1, 0, 0, 0], 2, 1)], 5)
        self.assertEqual(closure.dimension, 4)
        self.assertEqual(perp.dimension, 0)

    @given(even_permutations_of(5))
    def test_closure_of_block_vector(self, s):
        v = FqVector.from_blocks([[1, 0], [2, 0], [0, 0], [0, 0], [0, 0]], 3)
        closure, perp = ap_invariant_closure([v], 5)
        self.assertEqual(closure.dimension, 4)
        self.assertEqual(perp.dimension, 4)
        self.assertIn(v.permute(s), closure)

    def test_nondegeneracy(self):
        isotropic = FqSubspace.span([[1, 1]], 2, 2)
        self.assertFalse(is_nondegenerate(isotropic))
        self.assertTrue(is_nondegenerate(FqSubspace.span([[1, 0]], 2, 2)))
        self.assertTrue(is_nondegenerate(FqSubspace.span([], 2, 2)))
        self.assertTrue(is_nondegenerate(FqSubspace.whole(2, 2)))
        self.assertTrue(is_nondegenerate(sumzero_space(5, 3, 2)))

    @given(st.lists(vn_vectors(WIDE_PARAMS), max_size=3))
    def test_double_complement(self, vectors):
        vn = WIDE_PARAMS.vn
        w = FqSubspace.span(vectors, vn.dim, vn.q, vn.block)
        perp = orthogonal_complement(w, vn)
        self.assertEqual(perp.dimension, vn.dimension - w.dimension)
        back = orthogonal_complement(perp, vn)
        self.assertTrue(back.issubspace(w))
        self.assertTrue(w.issubspace(back))

    @given(st.lists(vn_vectors(), min_size=1, max_size=3))
    def test_closure_bounds(self, vectors):
        closure, _ = ap_invariant_closure(vectors, 5, self.vn)
        group_order = math.factorial(5) // 2
        self.assertLessEqual(closure.dimension, len(vectors) * group_order)
        self.assertLessEqual(closure.dimension, self.vn.dimension)
        for v in vectors:
            self.assertIn(v, closure)
        for s in alternating_group(5).generators:
            self.assertTrue(all(u.permute(s) in closure for u in closure.vectors()))

    @given(st.lists(vn_vectors(WIDE_PARAMS), min_size=1, max_size=2), vn_vectors(WIDE_PARAMS))
    def test_closure_is_smallest(self, vectors, extra):
        vn = WIDE_PARAMS.vn
        closure, perp = ap_invariant_closure(vectors, 5, vn)
        larger, _ = ap_invariant_closure(vectors + [extra], 5, vn)
        self.assertTrue(closure.issubspace(larger))
        again, _ = ap_invariant_closure(closure.vectors(), 5, vn)
        self.assertEqual(again.dimension, closure.dimension)
        self.assertTrue(perp.issubspace(orthogonal_complement(vectors, vn)))
        self.assertEqual(perp.dimension, vn.dimension - closure.dimension)


class OrbitVectorTests(SimpleTestCase):
    def test_without_defining_vectors(self):
        w = find_orbit_p_vector([], 5, 2, 1)
        self.assertEqual(w.coords, (1, 1, 1, 1, 0))
        self.assertEqual(len({w.permute(s) for s in alternating_group(5).elements}), 5)

    def test_spanning_components(self):
        with self.assertRaises(NoSuchVectorError):
            find_orbit_p_vector([FqVector.of([1, 1, 0, 0, 0], 2, 1)], 5, 2, 1)

    def test_orthogonal_to_defining_vectors(self):
        d = FqVector.from_blocks([[1, 0], [2, 0], [0, 0], [0, 0], [0, 0]], 3)
        w = find_orbit_p_vector([d], 5, 3, 2)
        self.assertEqual(int(inner(w, d)), 0)
        self.assertIn(w, sumzero_space(5, 3, 2))
