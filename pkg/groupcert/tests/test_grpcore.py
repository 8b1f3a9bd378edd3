import numpy as np
from django.test import SimpleTestCase, tag

from .. import grpcore
from ..catalog import sign_subdirect, sl2_5
from ..exceptions import NotApplicable, ParameterError, ResourceCapError
from ..grpcore import INFINITE, ConcreteGroup, Contract, direct_product, generate, semidirect_product
from ..perms import alternating_group, parse_cycles, symmetric_group


def cyclic(order: int) -> ConcreteGroup:
    contract = Contract(mul=lambda a, b: (a + b) % order, inv=lambda a: -a % order, identity=0)
    return generate([1 % order], contract, name=f"Z{order}")


def dihedral_s3() -> ConcreteGroup:
    """Z3 ⋊ Z2 with the inversion action."""
    return semidirect_product(cyclic(3), cyclic(2), lambda m, g: m if g == 0 else -m % 3, name='S3')


class ConstructionTests(SimpleTestCase):
    def test_generate(self):
        self.assertEqual(cyclic(6).order, 6)
        gens = [parse_cycles('(1 2 3)', 5), parse_cycles('(1 2 3 4 5)', 5)]
        self.assertEqual(generate(gens, Contract.native(parse_cycles('()', 5))).order, 60)

    def test_generate_cap(self):
        gens = [parse_cycles('(1 2 3)', 5), parse_cycles('(1 2 3 4 5)', 5)]
        with self.assertRaises(ResourceCapError) as ctx:
            generate(gens, Contract.native(parse_cycles('()', 5)), cap=10)
        self.assertGreater(ctx.exception.partial, 10)

    def test_identity_required(self):
        contract = Contract(mul=lambda a, b: a, inv=lambda a: a, identity=99)
        with self.assertRaises(ParameterError):
            ConcreteGroup([1, 2], contract)

    def test_semidirect_product_law(self):
        s3 = dihedral_s3()
        self.assertEqual(s3.order, 6)
        self.assertFalse(grpcore.is_abelian(s3))
        a, b = (1, 0), (0, 1)
        self.assertEqual(s3.mul(a, b), (1, 1))
        self.assertEqual(s3.mul(b, a), (2, 1))

    def test_direct_product(self):
        product = direct_product(cyclic(2), cyclic(3))
        self.assertEqual(product.order, 6)
        self.assertTrue(grpcore.is_abelian(product))


class ClassTests(SimpleTestCase):
    def test_a5_classes(self):
        a5 = alternating_group(5)
        sizes = sorted(len(c) for c in grpcore.conjugacy_classes(a5))
        self.assertEqual(sizes, [1, 12, 12, 15, 20])
        self.assertEqual(grpcore.center(a5).order, 1)

    def test_commutator_set_of_s5(self):
        s5 = symmetric_group(5)
        self.assertEqual(int(grpcore.commutator_mask(s5).sum()), 60)
        self.assertEqual(grpcore.derived_subgroup(s5).order, 60)

    def test_lengths(self):
        s5 = symmetric_group(5)
        self.assertEqual(grpcore.commutator_length(s5, s5.identity), 0)
        self.assertEqual(grpcore.commutator_length(s5, parse_cycles('(1 2)', 5)), INFINITE)
        self.assertEqual(grpcore.commutator_width(s5), INFINITE)
        self.assertEqual(grpcore.commutator_width(alternating_group(5)), 1)

    def test_length_of_non_member(self):
        a5 = alternating_group(5)
        for element in (parse_cycles('(1 2)', 5), parse_cycles('(1 2 3)', 6)):
            with self.subTest(element=str(element)):
                with self.assertRaises(ParameterError):
                    grpcore.commutator_length(a5, element)

    def test_width_cap(self):
        with self.assertRaises(ResourceCapError):
            grpcore.commutator_width(alternating_group(5), cap=10)


class NormalSubgroupTests(SimpleTestCase):
    def test_counts(self):
        cases = {'A5': (alternating_group(5), 2), 'S5': (symmetric_group(5), 3), 'S4': (symmetric_group(4), 4),
                 'S3': (dihedral_s3(), 3), 'Z6': (cyclic(6), 4)}
        for name, (group, expected) in cases.items():
            with self.subTest(group=name):
                normals = grpcore.normal_subgroups(group)
                self.assertEqual(len(normals), expected)
                self.assertTrue(normals[0].is_trivial)
                self.assertTrue(normals[-1].is_whole)

    def test_cap(self):
        with self.assertRaises(ResourceCapError):
            grpcore.normal_subgroups(symmetric_group(5), cap=50)

    def test_quotient(self):
        s5 = symmetric_group(5)
        quotient = grpcore.quotient_group(s5, grpcore.derived_subgroup(s5))
        self.assertEqual(quotient.order, 2)
        self.assertEqual(len(quotient.projection), 120)

    def test_quotient_by_non_normal(self):
        s5 = symmetric_group(5)
        mask, gens = s5.generated_mask([s5.index[parse_cycles('(1 2)', 5)]])
        with self.assertRaises(ParameterError):
            grpcore.quotient_group(s5, grpcore.NormalSubgroup(s5, mask, gens))
        self.assertFalse(grpcore.is_normal_mask(s5, mask))

    def test_abelianization(self):
        z2 = cyclic(2)
        self.assertEqual(grpcore.abelianization_invariants(cyclic(6)), [6])
        self.assertEqual(grpcore.abelianization_invariants(direct_product(z2, z2)), [2, 2])
        self.assertEqual(grpcore.abelianization_invariants(direct_product(cyclic(4), z2)), [2, 4])
        self.assertEqual(grpcore.abelianization_invariants(symmetric_group(4)), [2])
        self.assertEqual(grpcore.abelianization_invariants(alternating_group(5)), [])


class PredicateTests(SimpleTestCase):
    def test_a5(self):
        a5 = alternating_group(5)
        self.assertTrue(grpcore.is_perfect(a5))
        self.assertTrue(grpcore.is_simple(a5))
        self.assertTrue(grpcore.is_semisimple(a5))
        self.assertTrue(grpcore.is_quasisimple(a5))
        self.assertTrue(grpcore.is_almost_simple(a5))
        self.assertFalse(grpcore.is_solvable(a5))

    def test_s5(self):
        s5 = symmetric_group(5)
        self.assertFalse(grpcore.is_perfect(s5))
        self.assertFalse(grpcore.is_semisimple(s5))
        self.assertTrue(grpcore.is_almost_simple(s5))
        self.assertEqual(grpcore.cr_radical(s5).order, 60)
        self.assertTrue(grpcore.solvable_radical(s5).is_trivial)

    def test_solvable_groups(self):
        s4 = symmetric_group(4)
        self.assertTrue(grpcore.is_solvable(s4))
        self.assertEqual(grpcore.solvable_radical(s4).order, 24)
        self.assertEqual(grpcore.cr_radical(s4).order, 1)
        self.assertFalse(grpcore.is_almost_simple(s4))
        self.assertEqual([g.order for g in grpcore.derived_series(s4)], [24, 12, 4, 1])

    def test_abelian_simple_group_is_not_semisimple(self):
        z5 = cyclic(5)
        self.assertTrue(grpcore.is_simple(z5))
        self.assertFalse(grpcore.is_semisimple(z5))
        self.assertFalse(grpcore.is_quasisimple(z5))

    def test_trivial_group(self):
        trivial = cyclic(1)
        self.assertEqual(trivial.order, 1)
        self.assertTrue(grpcore.is_semisimple(trivial))
        self.assertFalse(grpcore.is_simple(trivial))

    def test_a5_squared(self):
        a5 = alternating_group(5)
        square = direct_product(a5, a5)
        self.assertEqual(len(grpcore.normal_subgroups(square)), 4)
        self.assertTrue(grpcore.is_semisimple(square))
        self.assertFalse(grpcore.is_simple(square))
        self.assertFalse(grpcore.is_quasisimple(square))
        self.assertTrue(grpcore.is_central_product_of_quasisimples(square))
        self.assertEqual(len(grpcore.minimal_normal_subgroups(square)), 2)

    def test_masks_are_boolean(self):
        a5 = alternating_group(5)
        self.assertEqual(grpcore.center(a5).mask.dtype, np.bool_)


class AlmostSemisimpleTests(SimpleTestCase):
    def test_almost_simple_groups(self):
        for group in (alternating_group(5), symmetric_group(5)):
            with self.subTest(group=group.name):
                self.assertTrue(grpcore.is_almost_semisimple(group))
                self.assertTrue(grpcore.is_cr_quotient_solvable(group))
                self.assertTrue(grpcore.acts_faithfully_on_cr(group))
                self.assertTrue(grpcore.is_product_of_almost_simple_and_solvable(group))
        result = grpcore.almost_semisimple_embedding(symmetric_group(5))
        self.assertEqual(result['cr_order'], 60)

    def test_solvable_group(self):
        s4 = symmetric_group(4)
        self.assertFalse(grpcore.is_almost_semisimple(s4))
        self.assertTrue(grpcore.is_cr_quotient_solvable(s4))
        self.assertFalse(grpcore.acts_faithfully_on_cr(s4))
        self.assertEqual(grpcore.cr_centralizer(s4).order, 24)
        self.assertTrue(grpcore.is_product_of_almost_simple_and_solvable(s4))
        with self.assertRaises(NotApplicable):
            grpcore.almost_semisimple_embedding(s4)
        self.assertEqual(grpcore.solvable_split(s4)['top_order'], 1)

    def test_quasisimple_group(self):
        sl2 = sl2_5()
        self.assertFalse(grpcore.is_almost_semisimple(sl2))
        self.assertFalse(grpcore.is_cr_quotient_solvable(sl2))
        self.assertFalse(grpcore.is_product_of_almost_simple_and_solvable(sl2))
        with self.assertRaises(NotApplicable):
            grpcore.solvable_split(sl2)

    def test_direct_product_with_a_solvable_factor(self):
        group = direct_product(symmetric_group(5), cyclic(2))
        self.assertFalse(grpcore.is_almost_semisimple(group))
        self.assertTrue(grpcore.is_product_of_almost_simple_and_solvable(group))
        self.assertEqual(grpcore.cr_centralizer(group).order, 2)
        split = grpcore.solvable_split(group)
        self.assertEqual((split['cr_order'], split['solvable_radical_order'], split['top_order']), (60, 2, 120))

    def test_a5_squared(self):
        a5 = alternating_group(5)
        square = direct_product(a5, a5)
        self.assertTrue(grpcore.is_almost_semisimple(square))
        self.assertTrue(grpcore.is_product_of_almost_simple_and_solvable(square))
        self.assertEqual(grpcore.almost_semisimple_embedding(square)['cr_order'], 3600)

    @tag('slow')
    def test_sign_subdirect_product(self):
        group = sign_subdirect('s5s5-subdirect')
        self.assertEqual(group.order, 7200)
        self.assertTrue(grpcore.is_almost_semisimple(group))
        self.assertFalse(grpcore.is_almost_simple(group))
        self.assertTrue(grpcore.acts_faithfully_on_cr(group))
        self.assertTrue(grpcore.is_cr_quotient_solvable(group))
        self.assertFalse(grpcore.is_product_of_almost_simple_and_solvable(group))
        self.assertEqual(grpcore.solvable_split(group)['top_order'], 7200)
