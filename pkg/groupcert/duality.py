"""
Functionals M_n -> Z/mZ, their supports, and the A_p-invariant functionals
that take the value 1 on z_n.
"""
import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Mapping, Optional, Sequence, Tuple

import numpy as np
from sympy import isprime, mod_inverse

from .conf import setting
from .constructions import (
    BElement, GnElement, MnElement, Params, PnElement, b_basis, nonzero_vectors, random_mn,
)
from .exceptions import ParameterError, ResourceCapError, VerificationFailed
from .ffla import FqSubspace, FqVector, find_orbit_p_vector, in_column_module, inner, rank
from .perms import Permutation, alternating_generators, alternating_group

logger = logging.getLogger(__name__)

BasisKey = Tuple[FqVector, int]


@dataclass(frozen=True)
class SupportSet:
    """A set of vectors of V_n, or with `cofinite` set, everything except `members`."""
    members: FrozenSet[FqVector]
    cofinite: bool = False

    def __contains__(self, v: FqVector) -> bool:
        return (v in self.members) != self.cofinite

    def __len__(self):
        if self.cofinite:
            raise TypeError("a cofinite set has no finite length")
        return len(self.members)

    @property
    def is_empty(self) -> bool:
        return not self.cofinite and not self.members

    def issubset(self, other: 'SupportSet') -> bool:
        if not self.cofinite:
            return all(v in other for v in self.members)
        return other.cofinite and other.members <= self.members

    def sorted(self) -> List[FqVector]:
        return sorted(self.members)


@dataclass(frozen=True)
class Functional:
    """
    phi(x) = sum over (v, i) of coeffs(v, i) · (i-th B-coordinate of x(v)), mod m.

    Coefficients are stored sorted and non-zero.
    """
    coeffs: Tuple[Tuple[BasisKey, int], ...]
    m: int

    @classmethod
    def of(cls, coeffs: Mapping[BasisKey, int], m: int) -> 'Functional':
        cleaned = {}
        for (v, i), c in coeffs.items():
            if v.is_zero:
                raise ParameterError("functionals are indexed by non-zero vectors")
            if c % m:
                cleaned[(v, i)] = c % m
        return cls(tuple(sorted(cleaned.items())), m)

    @classmethod
    def zero(cls, m: int) -> 'Functional':
        return cls((), m)

    def as_dict(self) -> Dict[BasisKey, int]:
        return dict(self.coeffs)

    def __call__(self, x: MnElement) -> int:
        total = 0
        for (v, i), c in self.coeffs:
            total += c * x.value(v).coordinates()[i - 1]
        return total % self.m

    def __add__(self, other: 'Functional') -> 'Functional':
        merged = self.as_dict()
        for key, c in other.coeffs:
            merged[key] = merged.get(key, 0) + c
        return Functional.of(merged, self.m)

    def __neg__(self) -> 'Functional':
        return Functional.of({k: -c for k, c in self.coeffs}, self.m)

    def __sub__(self, other: 'Functional') -> 'Functional':
        return self + (-other)

    def scale(self, k: int) -> 'Functional':
        return Functional.of({key: c * k for key, c in self.coeffs}, self.m)

    def records(self) -> List[Dict[str, object]]:
        return [{'v': list(v.coords), 'i': i, 'c': c} for (v, i), c in self.coeffs]


def phi_v(v: FqVector, m: int) -> Functional:
    """Sends x_(v->b_1) to 1 and every other basis map to 0."""
    if v.is_zero:
        raise ParameterError("phi_v needs a non-zero vector")
    return Functional.of({(v, 1): 1}, m)


def support(phi: Functional) -> SupportSet:
    return SupportSet(frozenset(v for (v, _), _ in phi.coeffs))


def support_by_criterion(phi: Functional, params: Params, cap: Optional[int] = None) -> SupportSet:
    """v is in supp(phi) iff phi(x_(v->b_i)) != 0 for some i, tested at every non-zero v of V_n."""
    if phi.m != params.m:
        raise ParameterError(f"functional is mod {phi.m}, parameters are mod {params.m}")
    basis = b_basis(params.q, params.m)
    return SupportSet(frozenset(v for v in nonzero_vectors(params, cap)
                                if any(phi(MnElement.single(v, b)) for b in basis)))


def null_set(x: MnElement, params: Params, cap: Optional[int] = None) -> SupportSet:
    """
    {0} together with every w where x vanishes.

    Sparse elements give a cofinite answer.  An untwisted constant part c makes
    the null set finite: the keys whose sparse value is -c.  Twisted constants
    are evaluated over all of V_n.
    """
    if x.is_sparse:
        return SupportSet(frozenset(x.keys()), cofinite=True)
    zero = params.zero_vector
    if all(t.is_zero for t, _ in x.constants):
        constant = sum((b for _, b in x.constants), BElement.zero(params.q, params.m))
        if constant.is_zero:
            return SupportSet(frozenset(x.keys()), cofinite=True)
        return SupportSet(frozenset([zero] + [k for k, b in x.sparse if (b + constant).is_zero]))
    vectors = nonzero_vectors(params, cap)
    return SupportSet(frozenset([zero] + [w for w in vectors if x.value(w).is_zero]))


def z_n(params: Params) -> MnElement:
    """The map that is b_1 at every non-zero vector."""
    b1 = b_basis(params.q, params.m)[0]
    return MnElement(params.q, params.m, (), ((params.zero_vector, b1),))


def orbit(v: FqVector, p: int) -> List[FqVector]:
    return sorted({v.permute(s) for s in alternating_group(p).elements})


def _defining_vectors(params: Params, defining: Sequence[FqVector]) -> List[FqVector]:
    for v in defining:
        if v not in params.vn:
            raise ParameterError(f"defining vector {v} is not in V_{params.n}")
    return list(defining)


def invariant_functional(params: Params, defining: Sequence[FqVector] = (), rescale: bool = True) -> Functional:
    """
    phi = p^-1 · sum of phi_v over the A_p-orbit of an orbit-p vector of W = (defining)^perp.

    phi(z_n) = 1 (p before rescaling), supp(phi) is that orbit inside W, and
    phi is A_p-invariant; all three are verified before returning.
    """
    check = 'invariant_functional'
    defining = _defining_vectors(params, defining)
    w = find_orbit_p_vector(defining, params.p, params.q, params.n)
    members = orbit(w, params.p)
    if len(members) != params.p:
        raise VerificationFailed(check, f"orbit has {len(members)} elements instead of {params.p}", witness=str(w))
    scale = mod_inverse(params.p, params.m) if rescale and params.m > 1 else 1
    phi = Functional.of({(u, 1): scale for u in members}, params.m)
    expected = 1 if rescale else params.p % params.m
    if phi(z_n(params)) != expected % params.m:
        raise VerificationFailed(check, f"phi(z_n) = {phi(z_n(params))}, expected {expected}")
    for u in members:
        if any(int(inner(u, v)) for v in defining):
            raise VerificationFailed(check, "support leaves W", witness=str(u))
    ap_invariance(phi, params)
    logger.info(f"Invariant functional at {params}: support {len(members)} around {w}")
    return phi


def _support_closure(phi: Functional, p: int) -> List[FqVector]:
    closure = set()
    for v in support(phi).members:
        closure.update(orbit(v, p))
    return sorted(closure)


def ap_invariance(phi: Functional, params: Params) -> Dict[str, object]:
    """phi(x^s) = phi(x) for every s in A_p, exactly, on the basis maps over the orbit closure of the support."""
    basis = b_basis(params.q, params.m)
    vectors = _support_closure(phi, params.p)
    checked = 0
    for sigma in alternating_group(params.p).elements:
        for v in vectors:
            for i, b in enumerate(basis, start=1):
                x = MnElement.single(v, b)
                if phi(x.permute(sigma)) != phi(x):
                    raise VerificationFailed('ap_invariance', "phi(x^s) != phi(x)",
                                             witness={'sigma': str(sigma), 'v': str(v), 'i': i})
                checked += 1
    return {'basis_elements': len(vectors) * len(basis), 'checks': checked}


def check_invariance(phi: Functional, params: Params, defining: Sequence[FqVector] = ()) -> Dict[str, object]:
    """
    Invariance of phi under the subgroup of G_n generated by A_p and W^perp.

    W^perp is spanned by the defining vectors and, with their A_p-images, the
    spanning set is closed under A_p.  Invariance under all of G_n is not
    claimed and fails whenever phi(z_n) != 0.
    """
    defining = _defining_vectors(params, defining)
    details = ap_invariance(phi, params)
    spanning = sorted({u.permute(s) for u in defining for s in alternating_group(params.p).elements})
    basis = b_basis(params.q, params.m)
    for u in spanning:
        for v in support(phi).sorted():
            for i, b in enumerate(basis, start=1):
                x = MnElement.single(v, b)
                if phi(x.twist(u)) != phi(x):
                    raise VerificationFailed('wperp_invariance', "phi(x^u) != phi(x) for u in W^perp",
                                             witness={'u': str(u), 'v': str(v), 'i': i})
    defining_span = FqSubspace.span(defining, params.vn.dim, params.q, params.n)
    details.update({
        'wperp_vectors': len(spanning),
        'w_ap_invariant': FqSubspace.span(spanning, params.vn.dim, params.q, params.n) == defining_span,
        'global_invariance_claimed': False,
    })
    return details


def _coordinate_vector(x: MnElement, index: Dict[BasisKey, int], q: int) -> np.ndarray:
    row = np.zeros(len(index), dtype=np.int64)
    for key, b in x.sparse:
        for i, c in enumerate(b.coordinates(), start=1):
            row[index[(key, i)]] += c
    return row


def no_global_invariant_functional(params: Params, cap: Optional[int] = None,
                                   cap_enum: Optional[int] = None) -> Dict[str, object]:
    """
    Every functional fixed by the generators of G_n vanishes on z_n.

    The invariant functionals are the annihilator of the rows x^g - x, so this
    holds iff the coordinates of z_n lie in the row module of that system.
    """
    cap = setting('SOLVE_CAP', cap)
    unknowns = (params.vn_size - 1) * (params.q - 1)
    if unknowns > cap:
        raise ResourceCapError(f"{unknowns} coefficients exceed the solve cap {cap}", partial=unknowns, cap=cap)
    vectors = nonzero_vectors(params, cap_enum)
    index = {(v, i): k for k, (v, i) in enumerate((v, i) for v in vectors for i in range(1, params.q))}
    identity = Permutation.identity(params.p)
    generators = [GnElement(params.zero_vector, s) for s in alternating_generators(params.p)]
    generators += [GnElement(b, identity) for b in params.vn.vectors()]
    basis = b_basis(params.q, params.m)
    rows = []
    for g in generators:
        for v in vectors:
            for b in basis:
                x = MnElement.single(v, b)
                rows.append((_coordinate_vector(x.act(g), index, params.q)
                             - _coordinate_vector(x, index, params.q)) % params.m)
    E = np.array(rows, dtype=np.int64)
    target = np.zeros(len(index), dtype=np.int64)
    for v in vectors:
        target[index[(v, 1)]] = 1
    if not in_column_module(E.T, target, params.m):
        raise VerificationFailed('no_global_invariant_functional',
                                 "a G_n-invariant functional is non-zero on z_n")
    details = {'unknowns': len(index), 'equations': E.shape[0], 'generators': len(generators),
               'z_in_span': True}
    if isprime(params.m):
        system_rank = rank(E, params.m)
        details.update({'rank': system_rank, 'solution_dimension': len(index) - system_rank})
    logger.info(f"Obstruction system at {params}: {E.shape[0]} x {len(index)}")
    return details


class Extension:
    """psi(x g) = phi(x) on M_n ⋊ H."""

    def __init__(self, phi: Functional, subgroup: Sequence[GnElement]):
        self.phi = phi
        self.subgroup = list(subgroup)

    def __call__(self, element: PnElement) -> int:
        return self.phi(element.x)


def extend_invariant_functional(phi: Functional, params: Params,
                                subgroup: Optional[Sequence[GnElement]] = None) -> Extension:
    """
    Extend phi to M_n ⋊ H by ignoring the H-part.

    Well defined as a homomorphism because phi kills [M_n, H]; that is checked
    on the basis maps over the H-orbit closure of supp(phi).
    """
    if subgroup is None:
        subgroup = [GnElement.identity(params)]
    basis = b_basis(params.q, params.m)
    closure = set(support(phi).members)
    frontier = list(closure)
    while frontier:
        v = frontier.pop()
        for h in subgroup:
            image = v.permute(h.sigma)
            if image not in closure:
                closure.add(image)
                frontier.append(image)
    for h in subgroup:
        for v in sorted(closure):
            for b in basis:
                x = MnElement.single(v, b)
                if phi(x.act(h)) != phi(x):
                    raise VerificationFailed('extension_precondition', "phi is not invariant under H",
                                             witness={'h': str(h), 'v': str(v), 'b': str(b)})
    return Extension(phi, subgroup)


def homomorphism_check(extension: Extension, params: Params, samples: Optional[int] = None,
                       seed: Optional[int] = None) -> Dict[str, object]:
    """psi(ab) = psi(a) + psi(b) on random pairs from M_n ⋊ H, the x-parts touching supp(phi)."""
    samples = setting('DEFAULT_SAMPLES', samples)
    rng = np.random.default_rng(setting('DEFAULT_SEED', seed))
    keys = support(extension.phi).sorted()
    m = params.m
    for _ in range(samples):
        a, b = (PnElement(random_mn(params, rng, keys=keys),
                          extension.subgroup[int(rng.integers(len(extension.subgroup)))]) for _ in range(2))
        if extension(a * b) != (extension(a) + extension(b)) % m:
            raise VerificationFailed('extension_homomorphism', "psi(ab) != psi(a) + psi(b)",
                                     witness={'a': str(a.g), 'b': str(b.g)})
    return {'samples': samples, 'subgroup_order': len(extension.subgroup)}


def ap_subgroup(params: Params) -> List[GnElement]:
    return [GnElement(params.zero_vector, s) for s in alternating_group(params.p).elements]
