"""
Check batteries behind the management commands.

Each check is one library call; whatever it raises decides the row status:
NotApplicable and NoSuchVectorError give not-applicable, ResourceCapError
gives skipped, anything else fails the check.  ParameterError propagates.
"""
import logging
import time
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np

from . import catalog, grpcore
from .conf import setting
from .constructions import (
    BElement, Params, action_compatibility_check, ap_commutator_ingredient, avm_identities_check, b_basis,
    b_elements, bf_suite, certify_Mn_perfect, gn_bijection_ingredient, gn_exact_width, gn_fixed_point_ingredient,
    gn_tightness, mg_diameter_check, mn_witnesses, random_vector, vn_group, width_lower_bound,
)
from .duality import (
    ap_subgroup, check_invariance, extend_invariant_functional, homomorphism_check, invariant_functional,
    no_global_invariant_functional, null_set, phi_v, support, z_n,
)
from .exceptions import (
    NoSuchVectorError, NotApplicable, ParameterError, ResourceCapError, VerificationFailed,
)
from .ffla import FqVector
from .grpcore import ConcreteGroup, Contract
from .perms import (
    DOUBLE_TRANSPOSITION, Permutation, alternating_group, commutator, parse_cycles, verify_a5_fixed_point_lemma,
)
from .reports import FAIL, NOT_APPLICABLE, PASS, SKIPPED, Check, Report

logger = logging.getLogger(__name__)

# (p, q, m, n) instances run by the suite
SUITE_PARAMS = ((5, 2, 3, 1), (5, 3, 2, 1))
SUITE_DUALITY_PARAMS = (5, 2, 3, 2)
SUITE_B_MODULES = ((2, 3), (3, 2), (3, 4), (5, 6))


@dataclass
class RunOptions:
    seed: int
    samples: int
    cap_enum: Optional[int] = None
    cap_width: Optional[int] = None
    cap_solve: Optional[int] = None

    @classmethod
    def from_options(cls, options: Dict[str, Any]) -> 'RunOptions':
        return cls(
            seed=setting('DEFAULT_SEED', options.get('seed')),
            samples=setting('DEFAULT_SAMPLES', options.get('samples')),
            cap_enum=options.get('cap_enum'),
            cap_width=options.get('cap_width'),
            cap_solve=options.get('cap_solve'),
        )


def run_check(report: Report, name: str, func: Callable[..., Optional[Dict[str, Any]]], *args, **kwargs) -> Check:
    start = time.perf_counter()
    status, details, witness = PASS, {}, None
    try:
        details = func(*args, **kwargs) or {}
    except ParameterError:
        raise
    except (NotApplicable, NoSuchVectorError) as exc:
        status, details = NOT_APPLICABLE, {'reason': str(exc)}
    except ResourceCapError as exc:
        logger.warning(f"{name} skipped: {exc}")
        status, details = SKIPPED, {'reason': str(exc), 'partial': exc.partial, 'cap': exc.cap}
    except VerificationFailed as exc:
        logger.error(f"{name} failed: {exc}")
        status, details, witness = FAIL, {'error': str(exc)}, exc.witness
    except Exception as exc:
        logger.exception(f"{name} raised")
        status, details = FAIL, {'error': f"{type(exc).__name__}: {exc}"}
    check = Check(name, status, details, witness, (time.perf_counter() - start) * 1000)
    report.add(check)
    return check


def _label(name: str, label: str) -> str:
    return f"{name}@{label}" if label else name


def _tag(params: Params) -> str:
    return f"{params.p},{params.q},{params.m},{params.n}"


# ---------------- A5 lemma -----------------
def a5_spot_check() -> Dict[str, Any]:
    s1, s2 = parse_cycles('(1 2 3)', 5), parse_cycles('(1 3)(2 4)', 5)
    value = commutator(s1, s2)
    if value != DOUBLE_TRANSPOSITION:
        raise VerificationFailed('a5_spot_commutator', f"[(1 2 3), (1 3)(2 4)] = {value}", witness=str(value))
    identity = Permutation.identity(5)
    if commutator(identity, identity) == DOUBLE_TRANSPOSITION:
        raise VerificationFailed('a5_spot_commutator', "[e, e] equals (1 2)(3 4)")
    return {'commutator': str(value)}


def add_a5_checks(report: Report):
    run_check(report, 'a5_fixed_point_lemma', verify_a5_fixed_point_lemma)
    run_check(report, 'a5_spot_commutator', a5_spot_check)


def run_verify_a5(options: RunOptions) -> Report:
    report = Report('verify_a5', {'seed': options.seed})
    add_a5_checks(report)
    return report


# ---------------- G_n, M_n, P_n -----------------
def add_gn_checks(report: Report, params: Params, options: RunOptions, label: str = '') -> List[Check]:
    return [
        run_check(report, _label('gn_cycle_fixed_points', label), gn_fixed_point_ingredient, params),
        run_check(report, _label('gn_commutator_bijection', label), gn_bijection_ingredient, params, options.cap_enum),
        run_check(report, _label('ap_all_commutators', label), ap_commutator_ingredient, params.p),
        run_check(report, _label('gn_exact_width', label), gn_exact_width, params, options.cap_enum, options.cap_width),
        run_check(report, _label('gn_width_tight', label), gn_tightness, params, options.cap_enum, options.cap_width),
    ]


def _pairing_witnesses(params: Params, cap: Optional[int]) -> Dict[str, Any]:
    witnesses = mn_witnesses(params, cap)
    return {'vectors': len(witnesses)}


def add_mn_checks(report: Report, params: Params, options: RunOptions, label: str = '') -> List[Check]:
    return [
        run_check(report, _label('b_module', label), bf_suite, params.q, params.m),
        run_check(report, _label('mn_pairing_witnesses', label), _pairing_witnesses, params, options.cap_enum),
        run_check(report, _label('mn_perfect', label), certify_Mn_perfect, params, options.samples, options.seed,
                  options.cap_enum),
        run_check(report, _label('mn_action_well_defined', label), action_compatibility_check, params,
                  options.samples, options.seed),
        run_check(report, _label('avm_identities', label), avm_identities_check, params, options.samples,
                  options.seed, options.cap_enum),
    ]


def _conclude_perfect(checks: Sequence[Check]) -> Dict[str, Any]:
    failed = [c.name for c in checks if c.status == FAIL]
    if failed:
        raise VerificationFailed('pn_perfect', "a constituent certificate failed", witness=failed)
    return {'constituents': len(checks), 'width_bound_gn': 2}


def _width_bound(params: Params) -> Dict[str, Any]:
    return {'lower_bound': width_lower_bound(params), 'verified': False}


def add_pn_checks(report: Report, params: Params, options: RunOptions, label: str = ''):
    checks = add_gn_checks(report, params, options, label) + add_mn_checks(report, params, options, label)
    run_check(report, _label('pn_perfect', label), _conclude_perfect, checks)
    run_check(report, _label('pn_width_lower_bound', label), _width_bound, params)


def default_defining_vector(params: Params) -> FqVector:
    """(e_1, -e_1, 0, ..., 0)"""
    e1 = [1] + [0] * (params.n - 1)
    zero = [0] * params.n
    return FqVector.from_blocks([e1, [-c % params.q for c in e1]] + [zero] * (params.p - 2), params.q)


def _z_n_check(params: Params, options: RunOptions) -> Dict[str, Any]:
    z = z_n(params)
    rng = np.random.default_rng(options.seed)
    draws = min(options.samples, params.vn_size)
    for _ in range(draws):
        v = random_vector(params, rng, nonzero=True)
        if phi_v(v, params.m)(z) != 1 % params.m:
            raise VerificationFailed('z_n', "phi_v(z_n) != 1", witness=str(v))
    null = null_set(z, params)
    if null.cofinite or null.members != {params.zero_vector}:
        raise VerificationFailed('z_n', "null(z_n) is not {0}")
    return {'vectors_sampled': draws, 'null_set_size': 1}


def _invariant_functional_check(params: Params, defining: Sequence[FqVector]) -> Dict[str, Any]:
    raw = invariant_functional(params, defining, rescale=False)
    phi = invariant_functional(params, defining)
    return {
        'defining_vectors': [str(v) for v in defining],
        'support_size': len(support(phi)),
        'value_before_rescale': raw(z_n(params)),
        'value_on_z_n': phi(z_n(params)),
        'functional': phi.records(),
    }


def _invariance_check(params: Params, defining: Sequence[FqVector]) -> Dict[str, Any]:
    return check_invariance(invariant_functional(params, defining), params, defining)


def _extension_check(params: Params, defining: Sequence[FqVector], options: RunOptions) -> Dict[str, Any]:
    extension = extend_invariant_functional(invariant_functional(params, defining), params, ap_subgroup(params))
    return homomorphism_check(extension, params, options.samples, options.seed)


def add_duality_checks(report: Report, params: Params, options: RunOptions, label: str = ''):
    defining = [default_defining_vector(params)]
    run_check(report, _label('z_n', label), _z_n_check, params, options)
    run_check(report, _label('invariant_functional_unrestricted', label), _invariant_functional_check, params, [])
    run_check(report, _label('invariant_functional', label), _invariant_functional_check, params, defining)
    run_check(report, _label('check_invariance', label), _invariance_check, params, defining)
    run_check(report, _label('extension_homomorphism', label), _extension_check, params, defining, options)
    run_check(report, _label('no_global_invariant_functional', label), no_global_invariant_functional, params,
              options.cap_solve, options.cap_enum)


def run_certify(target: str, params: Params, options: RunOptions) -> Report:
    report = Report(f"certify {target}", {**params.as_dict(), 'seed': options.seed, 'samples': options.samples})
    if target == 'gn':
        add_gn_checks(report, params, options)
    elif target == 'mn':
        add_mn_checks(report, params, options)
    elif target == 'pn':
        add_pn_checks(report, params, options)
    elif target == 'duality':
        add_duality_checks(report, params, options)
    else:
        raise ParameterError(f"unknown certify target: {target}")
    return report


# ---------------- Group structure -----------------
def structure_facts(group: ConcreteGroup, options: RunOptions) -> Dict[str, Any]:
    cap = options.cap_enum
    center = grpcore.center(group)
    normals = grpcore.normal_subgroups(group, cap=cap)
    facts = {
        'order': group.order,
        'normal_subgroups': len(normals),
        'perfect': grpcore.is_perfect(group),
        'abelian': grpcore.is_abelian(group),
        'solvable': grpcore.is_solvable(group),
        'simple': grpcore.is_simple(group, cap=cap),
        'semisimple': grpcore.is_semisimple(group, cap=cap),
        'quasisimple': grpcore.is_quasisimple(group, cap=cap),
        'almost_simple': grpcore.is_almost_simple(group, cap=cap),
        'central_product_of_quasisimples': grpcore.is_central_product_of_quasisimples(group, cap=cap),
        'central_ext_of_semisimple': grpcore.is_central_ext_of_semisimple(group, cap=cap),
        'cr_radical_order': grpcore.cr_radical(group, cap=cap).order,
        'solvable_radical_order': grpcore.solvable_radical(group, cap=cap).order,
        'center_order': center.order,
        'center_quotient_simple': grpcore.is_simple(grpcore.quotient_group(group, center), cap=cap),
        'abelianization': grpcore.abelianization_invariants(group),
        'almost_semisimple': grpcore.is_almost_semisimple(group, cap=cap),
        'cr_quotient_solvable': grpcore.is_cr_quotient_solvable(group, cap=cap),
        'acts_faithfully_on_cr': grpcore.acts_faithfully_on_cr(group, cap=cap),
        'product_of_almost_simple_and_solvable': grpcore.is_product_of_almost_simple_and_solvable(group, cap=cap),
    }
    if group.order == 1:
        facts['trivial_counted_as_semisimple'] = True
    try:
        facts['commutator_width'] = grpcore.commutator_width(group, options.cap_width)
    except ResourceCapError as exc:
        logger.warning(f"Commutator width of {group.name} skipped: {exc}")
        facts['commutator_width'] = None
    return facts


def run_analyze(spec: str, options: RunOptions) -> Report:
    """A group above the enumeration cap gives a report with one skipped row."""
    report = Report('analyze', {'group': spec})
    try:
        group = catalog.parse_group_spec(spec, options.cap_enum)
    except ResourceCapError as exc:
        logger.warning(f"Group {spec!r} not built: {exc}")
        report.add(Check('build_group', SKIPPED, {'reason': str(exc), 'partial': exc.partial, 'cap': exc.cap}))
        return report
    run_check(report, 'structure', structure_facts, group, options)
    run_check(report, 'almost_semisimple_embedding', grpcore.almost_semisimple_embedding, group, options.cap_enum)
    run_check(report, 'solvable_split', grpcore.solvable_split, group, options.cap_enum)
    return report


def _expect(spec: str, expected: Dict[str, Any], options: RunOptions) -> Dict[str, Any]:
    facts = structure_facts(catalog.parse_group_spec(spec, options.cap_enum), options)
    wrong = {k: {'expected': v, 'computed': facts.get(k)} for k, v in expected.items() if facts.get(k) != v}
    if wrong:
        raise VerificationFailed(f"classify {spec}", "structure differs from the expected values", witness=wrong)
    return facts


CLASSIFICATION = (
    ('a5', {'simple': True, 'semisimple': True, 'quasisimple': True, 'almost_simple': True,
            'commutator_width': 1, 'perfect': True, 'almost_semisimple': True,
            'product_of_almost_simple_and_solvable': True}),
    ('s5', {'almost_simple': True, 'perfect': False, 'semisimple': False, 'almost_semisimple': True,
            'cr_quotient_solvable': True, 'acts_faithfully_on_cr': True}),
    ('sl2(5)', {'quasisimple': True, 'center_order': 2, 'center_quotient_simple': True, 'normal_subgroups': 3,
                'almost_semisimple': False, 'cr_quotient_solvable': False,
                'product_of_almost_simple_and_solvable': False}),
    ('a5xa5', {'semisimple': True, 'normal_subgroups': 4, 'simple': False, 'almost_semisimple': True,
               'product_of_almost_simple_and_solvable': True}),
    ('subdirect-sl25', {'order': 240, 'perfect': False, 'abelianization': [2],
                        'central_product_of_quasisimples': False, 'central_ext_of_semisimple': True}),
    ('s5s5-subdirect', {'order': 7200, 'almost_semisimple': True, 'almost_simple': False, 'cr_radical_order': 3600,
                        'acts_faithfully_on_cr': True, 'cr_quotient_solvable': True,
                        'product_of_almost_simple_and_solvable': False}),
)

ALMOST_SEMISIMPLE_SPECS = ('s5', 'a5xa5', 's5s5-subdirect')


def _on_spec(check: Callable[..., Dict[str, Any]], spec: str, options: RunOptions) -> Dict[str, Any]:
    return check(catalog.parse_group_spec(spec, options.cap_enum), options.cap_enum)


# ---------------- The full battery -----------------
def _v1_a5_diameter(params: Params, options: RunOptions) -> Dict[str, Any]:
    return mg_diameter_check(vn_group(params, options.cap_enum), alternating_group(params.p),
                             lambda v, s: v.permute(s), options.cap_enum, options.cap_width)


def _trivial_action_diameter(params: Params, options: RunOptions) -> Dict[str, Any]:
    contract = Contract(mul=lambda a, b: a + b, inv=lambda a: -a, identity=BElement.zero(params.q, params.m))
    module = ConcreteGroup(b_elements(params.q, params.m), contract, b_basis(params.q, params.m), 'B')
    return mg_diameter_check(module, alternating_group(params.p), lambda b, s: b,
                             options.cap_enum, options.cap_width)


def run_suite(options: RunOptions) -> Report:
    report = Report('suite', {'seed': options.seed, 'samples': options.samples})
    add_a5_checks(report)
    for q, m in SUITE_B_MODULES:
        run_check(report, f"b_module@{q},{m}", bf_suite, q, m)
    for values in SUITE_PARAMS:
        params = Params(*values)
        add_pn_checks(report, params, options, _tag(params))
    first = Params(*SUITE_PARAMS[0])
    run_check(report, f"mg_diameter@{_tag(first)}", _v1_a5_diameter, first, options)
    run_check(report, f"mg_diameter_trivial_action@{_tag(first)}", _trivial_action_diameter, first, options)
    duality = Params(*SUITE_DUALITY_PARAMS)
    add_duality_checks(report, duality, options, _tag(duality))
    for values in SUITE_PARAMS:
        params = Params(*values)
        run_check(report, f"no_global_invariant_functional@{_tag(params)}", no_global_invariant_functional,
                  params, options.cap_solve, options.cap_enum)
    for spec, expected in CLASSIFICATION:
        run_check(report, f"classify@{spec}", _expect, spec, expected, options)
    for spec in ALMOST_SEMISIMPLE_SPECS:
        run_check(report, f"almost_semisimple_embedding@{spec}", _on_spec, grpcore.almost_semisimple_embedding,
                  spec, options)
        run_check(report, f"solvable_split@{spec}", _on_spec, grpcore.solvable_split, spec, options)
    logger.info(f"Suite finished: {report.summary}")
    return report
