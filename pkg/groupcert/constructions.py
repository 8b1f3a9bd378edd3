"""
The explicit groups and their certificates.

  B     sum-zero tuples in (Z/mZ)^q with the right cyclic shift f
  G_n   V_n ⋊ A_p, V_n the sum-zero subspace of (F_q^n)^p
  M_n   maps V_n - {0} -> B, with x^v(w) = f^<v,w>(x(w)) and x^s(w) = x(w^(s^-1))
  P_n   M_n ⋊ G_n

M_n is never enumerated; everything about it is checked on the basis maps
x_(v->b) or on sampled sparse elements.
"""
import functools
import logging
import math
from dataclasses import asdict, dataclass
from fractions import Fraction
from itertools import product
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np
from sympy import isprime

from .conf import setting
from .exceptions import NotApplicable, ParameterError, ResourceCapError, VerificationFailed
from .ffla import FqSubspace, FqVector, inner, nullspace, rank, sumzero_space
from .grpcore import (
    INFINITE, ConcreteGroup, Contract, commutator_length, commutator_mask, commutator_width,
    native_commutator, semidirect_product,
)
from .perms import (
    DOUBLE_TRANSPOSITION, Permutation, alternating_generators, alternating_group, verify_a5_fixed_point_lemma,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Params:
    p: int
    q: int
    m: int
    n: int

    def __post_init__(self):
        for name in ('p', 'q', 'm', 'n'):
            value = getattr(self, name)
            if not isinstance(value, int) or isinstance(value, bool):
                raise ParameterError(f"{name} must be an integer, got {value!r}")
        if self.p < 5 or not isprime(self.p):
            raise ParameterError(f"p={self.p} must be a prime of at least 5")
        if not isprime(self.q):
            raise ParameterError(f"q={self.q} is not prime")
        if self.p == self.q:
            raise ParameterError("p and q must be distinct")
        if self.m < 1 or self.n < 1:
            raise ParameterError("m and n must be positive")
        if math.gcd(self.m, self.p) != 1 or math.gcd(self.m, self.q) != 1:
            raise ParameterError(f"m={self.m} must be coprime to p={self.p} and q={self.q}")

    def as_dict(self) -> Dict[str, int]:
        return asdict(self)

    def __str__(self):
        return f"(p={self.p}, q={self.q}, m={self.m}, n={self.n})"

    @functools.cached_property
    def vn(self) -> FqSubspace:
        return sumzero_space(self.p, self.q, self.n)

    @property
    def vn_size(self) -> int:
        return self.q ** (self.n * (self.p - 1))

    @property
    def zero_vector(self) -> FqVector:
        return FqVector.zero(self.n * self.p, self.q, self.n)


# ---------------- B and the shift f -----------------
@dataclass(frozen=True, order=True)
class BElement:
    t: Tuple[int, ...]
    m: int

    def __post_init__(self):
        if sum(self.t) % self.m:
            raise ParameterError(f"{self.t} does not sum to zero mod {self.m}")

    @classmethod
    def of(cls, t: Iterable[int], m: int) -> 'BElement':
        return cls(tuple(int(c) % m for c in t), m)

    @classmethod
    def zero(cls, q: int, m: int) -> 'BElement':
        return cls((0,) * q, m)

    @classmethod
    def from_coordinates(cls, coords: Sequence[int], q: int, m: int) -> 'BElement':
        """sum c_i b_i with b_i = e_i - e_(i+1)"""
        c = [0] + [int(x) for x in coords] + [0]
        return cls.of([c[j] - c[j - 1] for j in range(1, q + 1)], m)

    @property
    def q(self) -> int:
        return len(self.t)

    @property
    def is_zero(self) -> bool:
        return not any(self.t)

    def __add__(self, other: 'BElement') -> 'BElement':
        return BElement(tuple((a + b) % self.m for a, b in zip(self.t, other.t)), self.m)

    def __sub__(self, other: 'BElement') -> 'BElement':
        return BElement(tuple((a - b) % self.m for a, b in zip(self.t, other.t)), self.m)

    def __neg__(self) -> 'BElement':
        return BElement(tuple(-a % self.m for a in self.t), self.m)

    def scale(self, k: int) -> 'BElement':
        return BElement(tuple(a * int(k) % self.m for a in self.t), self.m)

    def shift(self, k: int = 1) -> 'BElement':
        """f^k, f(t_1, ..., t_q) = (t_q, t_1, ..., t_(q-1))"""
        k = int(k) % self.q
        if not k:
            return self
        return BElement(self.t[-k:] + self.t[:-k], self.m)

    def coordinates(self) -> Tuple[int, ...]:
        """c_i = t_1 + ... + t_i for i < q"""
        running, coords = 0, []
        for value in self.t[:-1]:
            running = (running + value) % self.m
            coords.append(running)
        return tuple(coords)

    def __str__(self):
        return '(' + ','.join(str(c) for c in self.t) + ')'


def f_shift(b: BElement) -> BElement:
    return b.shift(1)


def f_power(b: BElement, k: int) -> BElement:
    return b.shift(k)


def b_basis(q: int, m: int) -> List[BElement]:
    first = BElement.of([1, -1] + [0] * (q - 2), m)
    return [first.shift(i) for i in range(q - 1)]


def b_coordinates(b: BElement) -> Tuple[int, ...]:
    return b.coordinates()


def b_elements(q: int, m: int) -> List[BElement]:
    return [BElement.from_coordinates(c, q, m) for c in product(range(m), repeat=q - 1)]


@functools.lru_cache(maxsize=32)
def f_minus_id_inverse(q: int, m: int) -> Dict[BElement, BElement]:
    """Lookup table of (f - id)^-1, built by enumerating B."""
    table: Dict[BElement, BElement] = {}
    for b in b_elements(q, m):
        image = b.shift(1) - b
        if image in table:
            raise VerificationFailed('f_minus_id_bijective', f"f - id is not injective on B(q={q}, m={m})",
                                     witness=[str(table[image]), str(b)])
        table[image] = b
    return table


def bf_suite(q: int, m: int) -> Dict[str, object]:
    """f has order q, fixes only 0, f - id is invertible, and the coordinates reconstruct every b."""
    if math.gcd(q, m) != 1:
        raise ParameterError(f"q={q} and m={m} must be coprime")
    check = 'b_module'
    elements = b_elements(q, m)
    basis = b_basis(q, m)
    inverse = f_minus_id_inverse(q, m)
    for b in elements:
        if b.shift(q) != b:
            raise VerificationFailed(check, "f^q differs from the identity", witness=str(b))
        if b.shift(1) == b and not b.is_zero:
            raise VerificationFailed(check, "non-zero fixed point of f", witness=str(b))
        image = b.shift(1) - b
        if inverse[image] != b:
            raise VerificationFailed(check, "(f - id)^-1 does not invert f - id", witness=str(b))
        rebuilt = BElement.zero(q, m)
        for c, basis_element in zip(b.coordinates(), basis):
            rebuilt = rebuilt + basis_element.scale(c)
        if rebuilt != b:
            raise VerificationFailed(check, "coordinates do not reconstruct b", witness=str(b))
    if len({b.coordinates() for b in elements}) != m ** (q - 1):
        raise VerificationFailed(check, "coordinate map is not injective")
    return {'q': q, 'm': m, 'elements': len(elements), 'f_order': q, 'fixed_points': 1}


# ---------------- G_n -----------------
@dataclass(frozen=True, order=True)
class GnElement:
    """v·s with (v1 s1)(v2 s2) = (v1 + v2^(s1^-1)) (s1 s2)"""
    v: FqVector
    sigma: Permutation

    @classmethod
    def identity(cls, params: Params) -> 'GnElement':
        return cls(params.zero_vector, Permutation.identity(params.p))

    def __mul__(self, other: 'GnElement') -> 'GnElement':
        return GnElement(self.v + other.v.permute(self.sigma.inverse()), self.sigma * other.sigma)

    def inverse(self) -> 'GnElement':
        return GnElement((-self.v).permute(self.sigma), self.sigma.inverse())

    @property
    def is_identity(self) -> bool:
        return self.v.is_zero and self.sigma == Permutation.identity(self.sigma.degree)

    def __str__(self):
        return f"{self.v}{self.sigma}"


def canonical_p_cycle(p: int) -> Permutation:
    """(v_1, ..., v_p) -> (v_p, v_1, ..., v_(p-1))"""
    return Permutation((p,) + tuple(range(1, p)))


def _require_enumerable(size: int, cap: int, what: str):
    if size > cap:
        raise ResourceCapError(f"{what} has {size} elements, cap is {cap}", partial=0, cap=cap)


def vn_elements(params: Params, cap: Optional[int] = None) -> List[FqVector]:
    _require_enumerable(params.vn_size, setting('ENUMERATION_CAP', cap), f"V_{params.n}")
    return _vn_elements(params)


@functools.lru_cache(maxsize=16)
def _vn_elements(params: Params) -> List[FqVector]:
    return params.vn.elements()


def nonzero_vectors(params: Params, cap: Optional[int] = None) -> List[FqVector]:
    return [v for v in vn_elements(params, cap) if not v.is_zero]


def vn_group(params: Params, cap: Optional[int] = None) -> ConcreteGroup:
    """V_n under addition."""
    contract = Contract(mul=lambda a, b: a + b, inv=lambda a: -a, identity=params.zero_vector)
    return ConcreteGroup(vn_elements(params, cap), contract, params.vn.vectors(), f"V{params.n}")


def build_Gn(params: Params, cap: Optional[int] = None) -> ConcreteGroup:
    size = params.vn_size * math.factorial(params.p) // 2
    _require_enumerable(size, setting('ENUMERATION_CAP', cap), f"G_{params.n}")
    return _build_Gn(params.p, params.q, params.n)


@functools.lru_cache(maxsize=8)
def _build_Gn(p: int, q: int, n: int) -> ConcreteGroup:
    params = Params(p, q, 1, n)
    ap = alternating_group(p).elements
    elements = [GnElement(v, s) for v in _vn_elements(params) for s in ap]
    identity_perm = Permutation.identity(p)
    gens = [GnElement(b, identity_perm) for b in params.vn.vectors()]
    gens += [GnElement(params.zero_vector, s) for s in alternating_generators(p)]
    logger.info(f"Built G_{n} for p={p}, q={q}: {len(elements)} elements")
    return ConcreteGroup(elements, Contract.native(GnElement.identity(params)), gens, f"G{n}(p={p},q={q})")


def _cycle_difference(params: Params) -> np.ndarray:
    """Rows -b + b^s for the echelon basis b of V_n and the canonical p-cycle s."""
    sigma = canonical_p_cycle(params.p)
    basis = params.vn.vectors()
    return np.array([(b.permute(sigma) - b).coords for b in basis], dtype=np.int64)


def gn_fixed_point_ingredient(params: Params) -> Dict[str, object]:
    """The canonical p-cycle fixes only 0 in V_n."""
    D = _cycle_difference(params)
    kernel = nullspace(D.T, params.q)
    if kernel.shape[0]:
        witness = params.vn.combination(kernel[0])
        raise VerificationFailed('gn_cycle_fixed_points', "the p-cycle fixes a non-zero vector", witness=str(witness))
    return {'cycle': str(canonical_p_cycle(params.p)), 'fixed_space_dimension': 0,
            'vn_dimension': params.vn.dimension}


def gn_bijection_ingredient(params: Params, cap: Optional[int] = None) -> Dict[str, object]:
    """
    v -> [v, s] = -v + v^s is a bijection of V_n.

    The rank is cross-checked against the fixed-space dimension (the kernel of
    the map is the fixed space), and against a full image count when V_n is small.
    """
    check = 'gn_commutator_bijection'
    D = _cycle_difference(params)
    d = params.vn.dimension
    map_rank = rank(D, params.q)
    fixed_dimension = nullspace(D.T, params.q).shape[0]
    if map_rank + fixed_dimension != d:
        raise VerificationFailed(check, f"rank {map_rank} and kernel {fixed_dimension} disagree with dimension {d}")
    if map_rank != d:
        raise VerificationFailed(check, f"v -> [v, s] has rank {map_rank} < {d}")
    details = {'rank': map_rank, 'vn_dimension': d, 'kernel_dimension': fixed_dimension}
    try:
        vectors = vn_elements(params, cap)
    except ResourceCapError:
        details['image_count'] = None
        return details
    sigma = canonical_p_cycle(params.p)
    images = {v.permute(sigma) - v for v in vectors}
    if len(images) != len(vectors):
        raise VerificationFailed(check, f"{len(images)} distinct images for {len(vectors)} vectors")
    details['image_count'] = len(images)
    return details


def ap_commutator_ingredient(p: int, cap: Optional[int] = None) -> Dict[str, object]:
    """Every element of A_p is a single commutator."""
    ap = alternating_group(p, cap)
    mask = commutator_mask(ap)
    if not mask.all():
        missing = ap.elements[int(np.flatnonzero(~mask)[0])]
        raise VerificationFailed('ap_all_commutators', "element of A_p is not a commutator", witness=str(missing))
    return {'p': p, 'elements': ap.order}


def gn_exact_width(params: Params, cap_enum: Optional[int] = None, cap_width: Optional[int] = None) -> Dict[str, object]:
    """Exact commutator width of G_n by the level-set search; at most 2 is required."""
    group = build_Gn(params, cap_enum)
    width = commutator_width(group, cap_width)
    if width == INFINITE or width > 2:
        raise VerificationFailed('gn_exact_width', f"commutator width {width} exceeds 2")
    return {'order': group.order, 'width': width}


def gn_tightness(params: Params, cap_enum: Optional[int] = None, cap_width: Optional[int] = None) -> Dict[str, object]:
    """
    For p = 5, every v·(1 2)(3 4) with a non-zero fifth block has commutator length exactly 2.

    The A_5 lemma is what forces this: the permutation parts of any commutator
    pair realising (1 2)(3 4) both fix 5.
    """
    check = 'gn_width_tight'
    if params.p != 5:
        raise NotApplicable(f"the tightness statement concerns p = 5, got p = {params.p}")
    group = build_Gn(params, cap_enum)
    lemma = verify_a5_fixed_point_lemma()
    checked = 0
    for element in group.elements:
        if element.sigma != DOUBLE_TRANSPOSITION or not any(element.v.blocks()[4]):
            continue
        length = commutator_length(group, element, cap_width)
        if length != 2:
            raise VerificationFailed(check, f"commutator length {length} instead of 2", witness=str(element))
        checked += 1
    e1 = [1] + [0] * (params.n - 1)
    minus_e1 = [-c % params.q for c in e1]
    zero = [0] * params.n
    witness = GnElement(FqVector.from_blocks([e1, zero, zero, zero, minus_e1], params.q), DOUBLE_TRANSPOSITION)
    return {'elements_checked': checked, 'witness': str(witness),
            'witness_length': commutator_length(group, witness, cap_width),
            'a5_lemma_solutions': lemma['solutions']}


def certify_Gn_perfect_width2(params: Params, cap_enum: Optional[int] = None,
                              cap_width: Optional[int] = None) -> Dict[str, object]:
    """All ingredients of the width-2 certificate, plus the exact width where G_n is small enough."""
    certificate = {
        'fixed_points': gn_fixed_point_ingredient(params),
        'bijection': gn_bijection_ingredient(params, cap_enum),
        'ap_commutators': ap_commutator_ingredient(params.p),
        'width_bound': 2,
    }
    try:
        certificate['exact_width'] = gn_exact_width(params, cap_enum, cap_width)['width']
    except ResourceCapError as exc:
        logger.warning(f"Exact width of G_{params.n} skipped: {exc}")
        certificate['exact_width'] = None
    return certificate


# ---------------- M_n and P_n -----------------
Terms = Tuple[Tuple[FqVector, BElement], ...]


def _canonical(items: Iterable[Tuple[FqVector, BElement]]) -> Terms:
    merged: Dict[FqVector, BElement] = {}
    for key, value in items:
        merged[key] = merged[key] + value if key in merged else value
    return tuple(sorted((k, v) for k, v in merged.items() if not v.is_zero))


@dataclass(frozen=True)
class MnElement:
    """
    A map V_n - {0} -> B.

    x(w) = sparse(w) + sum over constant terms (t, b) of f^<t,w>(b).  Sparse
    entries are never zero; the constant terms make z_n representable, the
    twist t recording the v-actions applied to it.
    """
    q: int
    m: int
    sparse: Terms = ()
    constants: Terms = ()

    @classmethod
    def from_map(cls, q: int, m: int, values: Mapping[FqVector, BElement], constants: Iterable = ()) -> 'MnElement':
        for key in values:
            if key.is_zero:
                raise ParameterError("M_n elements are not defined at 0")
        return cls(q, m, _canonical(values.items()), _canonical(constants))

    @classmethod
    def single(cls, v: FqVector, b: BElement) -> 'MnElement':
        """x_(v->b)"""
        return cls.from_map(b.q, b.m, {v: b})

    @classmethod
    def zero(cls, q: int, m: int) -> 'MnElement':
        return cls(q, m)

    @property
    def is_zero(self) -> bool:
        return not self.sparse and not self.constants

    @property
    def is_sparse(self) -> bool:
        return not self.constants

    def keys(self) -> List[FqVector]:
        return [k for k, _ in self.sparse]

    def as_dict(self) -> Dict[FqVector, BElement]:
        return dict(self.sparse)

    def value(self, w: FqVector) -> BElement:
        if w.is_zero:
            raise ParameterError("M_n elements are not defined at 0")
        total = self.as_dict().get(w, BElement.zero(self.q, self.m))
        for twist, b in self.constants:
            total = total + b.shift(int(inner(twist, w)))
        return total

    def __add__(self, other: 'MnElement') -> 'MnElement':
        return MnElement(self.q, self.m, _canonical(self.sparse + other.sparse),
                         _canonical(self.constants + other.constants))

    def __neg__(self) -> 'MnElement':
        return MnElement(self.q, self.m, tuple((k, -v) for k, v in self.sparse),
                         tuple((t, -b) for t, b in self.constants))

    def __sub__(self, other: 'MnElement') -> 'MnElement':
        return self + (-other)

    def twist(self, v: FqVector) -> 'MnElement':
        """x^v"""
        if v.is_zero:
            return self
        return MnElement(self.q, self.m,
                         _canonical((k, b.shift(int(inner(v, k)))) for k, b in self.sparse),
                         _canonical((t + v, b) for t, b in self.constants))

    def permute(self, sigma: Permutation) -> 'MnElement':
        """x^s: the value at w moves to w^s"""
        return MnElement(self.q, self.m,
                         _canonical((k.permute(sigma), b) for k, b in self.sparse),
                         _canonical((t.permute(sigma), b) for t, b in self.constants))

    def act(self, g: GnElement) -> 'MnElement':
        """x^(v s) = (x^v)^s"""
        return self.twist(g.v).permute(g.sigma)


def mn_action(x: MnElement, g: GnElement) -> MnElement:
    return x.act(g)


@dataclass(frozen=True)
class PnElement:
    """x·g with (x1 g1)(x2 g2) = (x1 + x2^(g1^-1)) (g1 g2)"""
    x: MnElement
    g: GnElement

    @classmethod
    def identity(cls, params: Params) -> 'PnElement':
        return cls(MnElement.zero(params.q, params.m), GnElement.identity(params))

    @classmethod
    def of_m(cls, x: MnElement, params: Params) -> 'PnElement':
        return cls(x, GnElement.identity(params))

    @classmethod
    def of_g(cls, g: GnElement, params: Params) -> 'PnElement':
        return cls(MnElement.zero(params.q, params.m), g)

    def __mul__(self, other: 'PnElement') -> 'PnElement':
        return PnElement(self.x + other.x.act(self.g.inverse()), self.g * other.g)

    def inverse(self) -> 'PnElement':
        return PnElement((-self.x).act(self.g), self.g.inverse())


def m_commutator(x: MnElement, g: GnElement, params: Params) -> MnElement:
    """[x, g] computed in P_n; it always lies in M_n."""
    result = native_commutator(PnElement.of_m(x, params), PnElement.of_g(g, params))
    if not result.g.is_identity:
        raise VerificationFailed('pn_commutator', "[x, g] left M_n", witness=str(result.g))
    return result.x


# ---------------- Sampling -----------------
def random_vector(params: Params, rng: np.random.Generator, nonzero: bool = False) -> FqVector:
    while True:
        v = params.vn.combination(rng.integers(0, params.q, size=params.vn.dimension))
        if not (nonzero and v.is_zero):
            return v


def random_ap(p: int, rng: np.random.Generator) -> Permutation:
    elements = alternating_group(p).elements
    return elements[int(rng.integers(len(elements)))]


def random_b(params: Params, rng: np.random.Generator) -> BElement:
    return BElement.from_coordinates(rng.integers(0, params.m, size=params.q - 1), params.q, params.m)


def random_mn(params: Params, rng: np.random.Generator, terms: int = 4,
              keys: Sequence[FqVector] = ()) -> MnElement:
    """Sparse element on `keys` plus up to `terms` random positions."""
    values = {k: random_b(params, rng) for k in keys}
    for _ in range(int(rng.integers(0, terms + 1))):
        values[random_vector(params, rng, nonzero=True)] = random_b(params, rng)
    return MnElement.from_map(params.q, params.m, values)


def random_gn(params: Params, rng: np.random.Generator) -> GnElement:
    return GnElement(random_vector(params, rng), random_ap(params.p, rng))


# ---------------- M_n certificates -----------------
def mn_witnesses(params: Params, cap: Optional[int] = None) -> Dict[FqVector, FqVector]:
    """For every v != 0 some w with <w, v> = 1, scaled from an echelon basis vector of V_n."""
    basis = params.vn.vectors()
    witnesses = {}
    for v in nonzero_vectors(params, cap):
        for e in basis:
            value = inner(e, v)
            if int(value):
                witnesses[v] = e.scale(value.inverse())
                break
        else:
            raise VerificationFailed('mn_pairing_witnesses', "no w with <w, v> = 1", witness=str(v))
    return witnesses


def mn_commutator_spot_check(params: Params, samples: Optional[int] = None, seed: Optional[int] = None,
                             cap: Optional[int] = None) -> Dict[str, object]:
    """
    [x_(v->b), w] = x_(v->(f-id)b) for every v != 0, using the pairing witness w of v.

    Every b when B is small, otherwise `samples` draws spread over the v.
    """
    check = 'mn_commutator_identity'
    samples = setting('DEFAULT_SAMPLES', samples)
    rng = np.random.default_rng(setting('DEFAULT_SEED', seed))
    f_minus_id_inverse(params.q, params.m)
    witnesses = mn_witnesses(params, cap)
    all_b = b_elements(params.q, params.m)
    per_vector = max(1, samples // max(1, len(witnesses)))
    identity = Permutation.identity(params.p)
    checked = 0
    for v, w in witnesses.items():
        if len(all_b) <= per_vector:
            chosen = all_b
        else:
            chosen = [all_b[int(i)] for i in rng.choice(len(all_b), size=per_vector, replace=False)]
        for b in chosen:
            got = m_commutator(MnElement.single(v, b), GnElement(w, identity), params)
            expected = MnElement.single(v, b.shift(1) - b)
            if got != expected:
                raise VerificationFailed(check, "commutator differs from x_(v->(f-id)b)",
                                         witness={'v': str(v), 'w': str(w), 'b': str(b)})
            checked += 1
    return {'vectors': len(witnesses), 'pairs_checked': checked}


def certify_Mn_perfect(params: Params, samples: Optional[int] = None, seed: Optional[int] = None,
                       cap: Optional[int] = None) -> Dict[str, object]:
    """
    M_n = [M_n, V_n]: each basis map x_(v->b) equals [x_(v->c), w] with c = (f-id)^-1 b.

    Together with the G_n certificate this makes P_n perfect.
    """
    table = f_minus_id_inverse(params.q, params.m)
    spot = mn_commutator_spot_check(params, samples, seed, cap)
    return {'b_size': len(table), 'f_minus_id_bijective': True, **spot}


def action_compatibility_check(params: Params, samples: Optional[int] = None,
                               seed: Optional[int] = None) -> Dict[str, object]:
    """x^(s^-1 v s) = x^(v^s) and x^(g1 g2) = (x^g1)^g2 on random samples."""
    check = 'mn_action_well_defined'
    samples = setting('DEFAULT_SAMPLES', samples)
    rng = np.random.default_rng(setting('DEFAULT_SEED', seed))
    for _ in range(samples):
        x = random_mn(params, rng)
        v = random_vector(params, rng)
        sigma = random_ap(params.p, rng)
        stepwise = x.permute(sigma.inverse()).twist(v).permute(sigma)
        if stepwise != x.twist(v.permute(sigma)):
            raise VerificationFailed(check, "x^(s^-1 v s) differs from x^(v^s)",
                                     witness={'v': str(v), 'sigma': str(sigma)})
        g1, g2 = random_gn(params, rng), random_gn(params, rng)
        if x.act(g1 * g2) != x.act(g1).act(g2):
            raise VerificationFailed(check, "x^(g1 g2) differs from (x^g1)^g2",
                                     witness={'g1': str(g1), 'g2': str(g2)})
    return {'samples': samples}


def ap_orbits(params: Params, cap: Optional[int] = None) -> Dict[FqVector, int]:
    """Orbit id of every non-zero vector of V_n under A_p."""
    gens = alternating_generators(params.p)
    orbit_of: Dict[FqVector, int] = {}
    oid = -1
    for v in nonzero_vectors(params, cap):
        if v in orbit_of:
            continue
        oid += 1
        orbit_of[v] = oid
        queue = [v]
        while queue:
            u = queue.pop()
            for s in gens:
                image = u.permute(s)
                if image not in orbit_of:
                    orbit_of[image] = oid
                    queue.append(image)
    return orbit_of


def avm_identities_check(params: Params, samples: Optional[int] = None, seed: Optional[int] = None,
                         cap: Optional[int] = None) -> Dict[str, object]:
    """
    On random (x, v, s):
      [x, vs] = [x^v, s] + [x, v]
      {v}^perp lies in null([x, v])
      [x, s] sums to zero over every A_p-orbit of V_n - {0}
    """
    samples = setting('DEFAULT_SAMPLES', samples)
    rng = np.random.default_rng(setting('DEFAULT_SEED', seed))
    orbit_of = ap_orbits(params, cap)
    identity = Permutation.identity(params.p)
    zero_b = BElement.zero(params.q, params.m)
    for _ in range(samples):
        x = random_mn(params, rng)
        v = random_vector(params, rng)
        sigma = random_ap(params.p, rng)
        g_v = GnElement(v, identity)
        g_s = GnElement(params.zero_vector, sigma)
        witness = {'x': {str(k): str(b) for k, b in x.sparse}, 'v': str(v), 'sigma': str(sigma)}

        left = m_commutator(x, g_v * g_s, params)
        right = m_commutator(x.twist(v), g_s, params) + m_commutator(x, g_v, params)
        if left != right:
            raise VerificationFailed('avm_commutator_identity', "[x, vs] != [x^v, s] + [x, v]", witness=witness)

        for key in m_commutator(x, g_v, params).keys():
            if not int(inner(key, v)):
                raise VerificationFailed('avm_null_containment', f"[x, v] is non-zero at {key} orthogonal to v",
                                         witness=witness)

        sums: Dict[int, BElement] = {}
        for key, b in m_commutator(x, g_s, params).sparse:
            sums[orbit_of[key]] = sums.get(orbit_of[key], zero_b) + b
        if any(not total.is_zero for total in sums.values()):
            raise VerificationFailed('avm_orbit_sums', "[x, s] does not sum to zero over an orbit", witness=witness)
    return {'samples': samples, 'orbits': len(set(orbit_of.values()))}


def mg_diameter_check(normal: ConcreteGroup, top: ConcreteGroup, act: Callable,
                      cap_enum: Optional[int] = None, cap_width: Optional[int] = None) -> Dict[str, object]:
    """
    For abelian M with G acting, the diameter of M in the generators {[x, g]}
    is at most twice the commutator width d of M ⋊ G.
    """
    m_c = normal.contract
    gens = {m_c.mul(m_c.inv(x), act(x, g)) for x in normal.elements for g in top.elements}
    gens.discard(m_c.identity)
    if not gens:
        if normal.order == 1:
            return {'diameter': 0, 'width': 0, 'bound': 0, 'generators': 0}
        raise NotApplicable("every [x, g] is trivial, so the commutators do not generate M")
    steps = gens | {m_c.inv(s) for s in gens}
    distance = {m_c.identity: 0}
    frontier = [m_c.identity]
    while frontier:
        nxt = []
        for x in frontier:
            for s in steps:
                y = m_c.mul(x, s)
                if y not in distance:
                    distance[y] = distance[x] + 1
                    nxt.append(y)
        frontier = nxt
    if len(distance) != normal.order:
        raise NotApplicable(f"the commutators generate {len(distance)} of {normal.order} elements of M")
    diameter = max(distance.values())
    product_group = semidirect_product(normal, top, act, cap=cap_enum)
    width = commutator_width(product_group, cap_width)
    if width == INFINITE:
        raise NotApplicable(f"{product_group.name} is not perfect")
    if diameter > 2 * width:
        far = max(distance, key=distance.get)
        raise VerificationFailed('mg_diameter', f"diameter {diameter} exceeds 2d = {2 * width}", witness=str(far))
    return {'diameter': diameter, 'width': width, 'bound': 2 * width, 'generators': len(gens)}


def width_lower_bound(params: Params) -> Fraction:
    """n(p-1)/p!, reported as metadata only."""
    return Fraction(params.n * (params.p - 1), math.factorial(params.p))
