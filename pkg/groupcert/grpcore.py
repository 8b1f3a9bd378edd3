"""
Black-box finite group engine.

A group is fully enumerated: every element receives an index, and all of the
analysis below (conjugacy classes, normal subgroups, commutator lengths, the
structure predicates) works on numpy arrays over those indices.  Elements are
opaque hashable, totally ordered values; how to multiply them is supplied by a
`Contract` owned by the group.
"""
import functools
import logging
import math
import operator
from collections import deque
from dataclasses import dataclass
from itertools import combinations
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .conf import setting
from .exceptions import NotApplicable, ParameterError, ResourceCapError, UniquenessError, VerificationFailed

logger = logging.getLogger(__name__)

# Commutator length of elements outside the derived subgroup.
INFINITE = math.inf


@dataclass(frozen=True)
class Contract:
    """Multiplication, inversion and identity for one family of group elements."""
    mul: Callable[[Any, Any], Any]
    inv: Callable[[Any], Any]
    identity: Any

    @classmethod
    def native(cls, identity: Any) -> 'Contract':
        """Contract for element types implementing `*` and `.inverse()`."""
        return cls(operator.mul, _native_inverse, identity)


def _native_inverse(element):
    return element.inverse()


def direct_product_contract(left: Contract, right: Contract) -> Contract:
    return Contract(
        mul=lambda a, b: (left.mul(a[0], b[0]), right.mul(a[1], b[1])),
        inv=lambda a: (left.inv(a[0]), right.inv(a[1])),
        identity=(left.identity, right.identity),
    )


class ConcreteGroup:
    """A finite group stored as a sorted element table with an index map."""

    def __init__(self, elements: Iterable, contract: Contract, generators: Sequence = (), name: str = 'group'):
        self.elements: List[Any] = sorted(set(elements))
        self.index: Dict[Any, int] = {e: i for i, e in enumerate(self.elements)}
        if contract.identity not in self.index:
            raise ParameterError(f"{name}: identity element missing from the element table")
        self.contract = contract
        self.generators = list(dict.fromkeys(generators))
        for g in self.generators:
            if g not in self.index:
                raise ParameterError(f"{name}: generator {g!r} is not an element")
        self.name = name
        self.identity_index = self.index[contract.identity]
        self.memo: Dict[Any, Any] = {}

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def identity(self):
        return self.contract.identity

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, element) -> bool:
        return element in self.index

    def __repr__(self):
        return f"ConcreteGroup({self.name}, order={self.order})"

    def mul(self, a, b):
        return self.contract.mul(a, b)

    def inv(self, a):
        return self.contract.inv(a)

    def mul_idx(self, i: int, j: int) -> int:
        return self.index[self.contract.mul(self.elements[i], self.elements[j])]

    def commutator(self, a, b):
        """[a, b] = a^-1 b^-1 a b"""
        return self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))

    @functools.cached_property
    def inverse_index(self) -> np.ndarray:
        return np.array([self.index[self.contract.inv(e)] for e in self.elements], dtype=np.int64)

    @functools.cached_property
    def generator_indices(self) -> List[int]:
        if self.generators:
            return [self.index[g] for g in self.generators]
        _, gens = self.generated_mask(range(self.order))
        return gens

    def conjugate_idx(self, x: int, g: int) -> int:
        """Index of x^g = g^-1 x g."""
        return self.mul_idx(self.mul_idx(int(self.inverse_index[g]), x), g)

    def generated_mask(self, gen_indices: Iterable[int]) -> Tuple[np.ndarray, List[int]]:
        """
        Closure of the given elements.

        Returns the member mask of the generated subgroup and the generators that
        were actually needed (an element already in the closure is skipped).
        """
        mask = np.zeros(self.order, dtype=bool)
        mask[self.identity_index] = True
        members = [self.identity_index]
        used: List[int] = []
        for g in gen_indices:
            g = int(g)
            if mask[g]:
                continue
            used.append(g)
            queue = list(members)
            while queue:
                x = queue.pop()
                for h in used:
                    y = self.mul_idx(x, h)
                    if not mask[y]:
                        mask[y] = True
                        members.append(y)
                        queue.append(y)
        return mask, used

    def subgroup(self, mask: np.ndarray, generators: Optional[Sequence[int]] = None, name: Optional[str] = None) -> 'ConcreteGroup':
        """The subgroup with the given member mask as a standalone group."""
        if mask.all():
            return self
        members = [self.elements[i] for i in np.flatnonzero(mask)]
        gens = [self.elements[i] for i in generators] if generators is not None else ()
        return ConcreteGroup(members, self.contract, gens, name or f"{self.name}:sub{len(members)}")


class NormalSubgroup:
    """Member bitset over the parent's element indices."""

    def __init__(self, group: ConcreteGroup, mask: np.ndarray, generators: Optional[Sequence[int]] = None):
        self.group = group
        self.mask = mask
        self._generators = list(generators) if generators is not None else None

    @property
    def order(self) -> int:
        return int(self.mask.sum())

    @property
    def key(self) -> bytes:
        return self.mask.tobytes()

    @property
    def indices(self) -> np.ndarray:
        return np.flatnonzero(self.mask)

    @property
    def elements(self) -> List[Any]:
        return [self.group.elements[i] for i in self.indices]

    @property
    def generators(self) -> List[int]:
        if self._generators is None:
            _, self._generators = self.group.generated_mask(self.indices)
        return self._generators

    @property
    def is_trivial(self) -> bool:
        return self.order == 1

    @property
    def is_whole(self) -> bool:
        return bool(self.mask.all())

    def __contains__(self, element) -> bool:
        i = self.group.index.get(element)
        return i is not None and bool(self.mask[i])

    def __eq__(self, other):
        return isinstance(other, NormalSubgroup) and other.group is self.group and other.key == self.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"NormalSubgroup(order={self.order} in {self.group.name})"

    def issubset(self, other: 'NormalSubgroup') -> bool:
        return not bool((self.mask & ~other.mask).any())

    @functools.cached_property
    def as_group(self) -> ConcreteGroup:
        return self.group.subgroup(self.mask, self.generators)


def _memoized(func):
    """Cache a per-group analysis result on the group itself."""
    @functools.wraps(func)
    def wrapper(group: ConcreteGroup, *args, **kwargs):
        key = (func.__name__, args, tuple(sorted(kwargs.items())))
        if key not in group.memo:
            group.memo[key] = func(group, *args, **kwargs)
        return group.memo[key]
    return wrapper


def _check_cap(group: ConcreteGroup, cap: int, what: str):
    if group.order > cap:
        raise ResourceCapError(f"{what}: {group.name} has {group.order} elements, cap is {cap}",
                               partial=group.order, cap=cap)


# ---------------- Construction -----------------
def generate(gens: Sequence, contract: Contract, cap: Optional[int] = None, name: str = 'group') -> ConcreteGroup:
    """Breadth-first closure of `gens` under right multiplication."""
    cap = setting('ENUMERATION_CAP', cap)
    gens = list(gens)
    seen = {contract.identity}
    queue = deque([contract.identity])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = contract.mul(x, g)
            if y not in seen:
                seen.add(y)
                if len(seen) > cap:
                    raise ResourceCapError(f"generate({name}): more than {cap} elements", partial=len(seen), cap=cap)
                queue.append(y)
    logger.info(f"Generated {name} with {len(seen)} elements")
    return ConcreteGroup(seen, contract, gens, name)


def direct_product(left: ConcreteGroup, right: ConcreteGroup, cap: Optional[int] = None, name: Optional[str] = None) -> ConcreteGroup:
    cap = setting('ENUMERATION_CAP', cap)
    if left.order * right.order > cap:
        raise ResourceCapError(f"direct product of order {left.order * right.order} exceeds cap {cap}",
                               partial=left.order * right.order, cap=cap)
    contract = direct_product_contract(left.contract, right.contract)
    elements = [(a, b) for a in left.elements for b in right.elements]
    gens = [(g, right.identity) for g in left.generators] + [(left.identity, h) for h in right.generators]
    return ConcreteGroup(elements, contract, gens, name or f"{left.name}x{right.name}")


def semidirect_product(normal: ConcreteGroup, top: ConcreteGroup, act: Callable[[Any, Any], Any],
                       cap: Optional[int] = None, name: Optional[str] = None) -> ConcreteGroup:
    """
    M ⋊ G on pairs (m, g), G acting on M from the right via act(m, g) = m^g.

    (m1 g1)(m2 g2) = (m1 · m2^(g1^-1)) (g1 g2)
    """
    cap = setting('ENUMERATION_CAP', cap)
    total = normal.order * top.order
    if total > cap:
        raise ResourceCapError(f"semidirect product of order {total} exceeds cap {cap}", partial=total, cap=cap)
    m_c, g_c = normal.contract, top.contract
    contract = Contract(
        mul=lambda a, b: (m_c.mul(a[0], act(b[0], g_c.inv(a[1]))), g_c.mul(a[1], b[1])),
        inv=lambda a: (act(m_c.inv(a[0]), a[1]), g_c.inv(a[1])),
        identity=(m_c.identity, g_c.identity),
    )
    elements = [(m, g) for m in normal.elements for g in top.elements]
    gens = [(m, g_c.identity) for m in normal.generators] + [(m_c.identity, g) for g in top.generators]
    return ConcreteGroup(elements, contract, gens, name or f"{normal.name}:{top.name}")


# ---------------- Classes and commutators -----------------
@_memoized
def _class_data(group: ConcreteGroup) -> Tuple[List[np.ndarray], np.ndarray]:
    class_of = np.full(group.order, -1, dtype=np.int64)
    classes: List[np.ndarray] = []
    gens = group.generator_indices
    for start in range(group.order):
        if class_of[start] >= 0:
            continue
        cid = len(classes)
        class_of[start] = cid
        members = [start]
        queue = [start]
        while queue:
            x = queue.pop()
            for g in gens:
                y = group.conjugate_idx(x, g)
                if class_of[y] < 0:
                    class_of[y] = cid
                    members.append(y)
                    queue.append(y)
        classes.append(np.array(sorted(members), dtype=np.int64))
    return classes, class_of


def conjugacy_classes(group: ConcreteGroup) -> List[List[Any]]:
    classes, _ = _class_data(group)
    return [[group.elements[i] for i in cls] for cls in classes]


@_memoized
def commutator_mask(group: ConcreteGroup) -> np.ndarray:
    """
    Mask of the set C of single commutators.

    C is a union of conjugacy classes, and [r, h] = r^-1 r^h, so scanning
    r^-1 x over x in the class of r for one representative r per class
    finds every class that C meets.
    """
    classes, class_of = _class_data(group)
    hit = np.zeros(len(classes), dtype=bool)
    for cls in classes:
        r_inv = int(group.inverse_index[cls[0]])
        for x in cls:
            hit[class_of[group.mul_idx(r_inv, int(x))]] = True
    return hit[class_of]


@_memoized
def derived_subgroup(group: ConcreteGroup) -> NormalSubgroup:
    mask, gens = group.generated_mask(np.flatnonzero(commutator_mask(group)))
    return NormalSubgroup(group, mask, gens)


@_memoized
def center(group: ConcreteGroup) -> NormalSubgroup:
    gens = group.generator_indices
    mask = np.array([all(group.mul_idx(x, g) == group.mul_idx(g, x) for g in gens) for x in range(group.order)],
                    dtype=bool)
    return NormalSubgroup(group, mask)


@_memoized
def _commutator_levels(group: ConcreteGroup) -> np.ndarray:
    """
    Commutator length per conjugacy class, -1 where unreachable.

    Level sets S_0 = {e}, S_(k+1) = S_k C are unions of classes, so a class
    with representative r joins level k+1 iff r c^-1 lies in S_k for some c in C.
    """
    classes, class_of = _class_data(group)
    level = np.full(len(classes), -1, dtype=np.int64)
    level[class_of[group.identity_index]] = 0
    commutators = np.flatnonzero(commutator_mask(group))
    c_inverses = [int(group.inverse_index[c]) for c in commutators]
    # S_1 is C itself
    first = np.unique(class_of[commutators])
    level[first[level[first] < 0]] = 1
    k = 1
    while True:
        reached = (level >= 0)[class_of]
        fresh = []
        for cid in np.flatnonzero(level < 0):
            r = int(classes[cid][0])
            if any(reached[group.mul_idx(r, c)] for c in c_inverses):
                fresh.append(cid)
        if not fresh:
            return level
        k += 1
        level[fresh] = k


def commutator_length(group: ConcreteGroup, element, cap: Optional[int] = None):
    """Least number of commutators whose product is `element`; INFINITE outside G'."""
    _check_cap(group, setting('WIDTH_CAP', cap), 'commutator_length')
    position = group.index.get(element)
    if position is None:
        raise ParameterError(f"{element} is not an element of {group.name}")
    _, class_of = _class_data(group)
    value = int(_commutator_levels(group)[class_of[position]])
    return INFINITE if value < 0 else value


def commutator_width(group: ConcreteGroup, cap: Optional[int] = None):
    _check_cap(group, setting('WIDTH_CAP', cap), 'commutator_width')
    levels = _commutator_levels(group)
    if (levels < 0).any():
        return INFINITE
    return int(levels.max())


# ---------------- Normal subgroups and quotients -----------------
def is_normal_mask(group: ConcreteGroup, mask: np.ndarray) -> bool:
    classes, _ = _class_data(group)
    for cls in classes:
        inside = mask[cls]
        if inside.any() and not inside.all():
            return False
    closure, _ = group.generated_mask(np.flatnonzero(mask))
    return bool((closure == mask).all())


@_memoized
def normal_subgroups(group: ConcreteGroup, cap: Optional[int] = None) -> List[NormalSubgroup]:
    """
    All normal subgroups: normal closures of single classes, completed under joins.

    Every normal subgroup is the join of the closures of the classes it contains.
    """
    _check_cap(group, setting('ENUMERATION_CAP', cap), 'normal_subgroups')
    classes, _ = _class_data(group)
    found: Dict[bytes, NormalSubgroup] = {}

    def add(mask, gens) -> bool:
        sub = NormalSubgroup(group, mask, gens)
        if sub.key in found:
            return False
        found[sub.key] = sub
        return True

    trivial = np.zeros(group.order, dtype=bool)
    trivial[group.identity_index] = True
    add(trivial, [])
    for cls in classes:
        add(*group.generated_mask(cls))

    joined = set()
    changed = True
    while changed:
        changed = False
        for a, b in combinations(list(found.values()), 2):
            pair = (a.key, b.key)
            if pair in joined or a.issubset(b) or b.issubset(a):
                continue
            joined.add(pair)
            if add(*group.generated_mask(a.generators + b.generators)):
                changed = True
    result = sorted(found.values(), key=lambda n: (n.order, tuple(n.indices)))
    logger.info(f"{group.name}: {len(result)} normal subgroups")
    return result


def quotient_group(group: ConcreteGroup, normal: NormalSubgroup) -> ConcreteGroup:
    """Coset group G/N; elements are coset ids and `projection` maps G-indices to them."""
    if normal.group is not group:
        raise ParameterError("quotient_group: subgroup belongs to another group")
    if not is_normal_mask(group, normal.mask):
        raise ParameterError(f"quotient_group: subgroup of order {normal.order} is not normal in {group.name}")
    coset_of = np.full(group.order, -1, dtype=np.int64)
    reps: List[int] = []
    members = normal.indices
    for x in range(group.order):
        if coset_of[x] >= 0:
            continue
        cid = len(reps)
        reps.append(x)
        for n in members:
            coset_of[group.mul_idx(x, int(n))] = cid
    contract = Contract(
        mul=lambda a, b: int(coset_of[group.mul_idx(reps[a], reps[b])]),
        inv=lambda a: int(coset_of[group.inverse_index[reps[a]]]),
        identity=int(coset_of[group.identity_index]),
    )
    gens = [int(coset_of[g]) for g in group.generator_indices]
    quotient = ConcreteGroup(range(len(reps)), contract, gens, f"{group.name}/N{normal.order}")
    quotient.projection = coset_of
    return quotient


def native_commutator(a, b):
    """[a, b] = a^-1 b^-1 a b for elements implementing `*` and `.inverse()`."""
    return a.inverse() * b.inverse() * a * b


def element_order(group: ConcreteGroup, element) -> int:
    x, k = element, 1
    while x != group.identity:
        x = group.mul(x, element)
        k += 1
    return k


@_memoized
def abelianization_invariants(group: ConcreteGroup) -> List[int]:
    """
    Invariant factors d_1 | d_2 | ... of G/G'.

    An element of maximal order in a finite abelian group spans a direct
    summand, so splitting it off repeatedly yields the factors largest first.
    """
    quotient = quotient_group(group, derived_subgroup(group))
    factors: List[int] = []
    while quotient.order > 1:
        orders = [element_order(quotient, a) for a in quotient.elements]
        best = int(np.argmax(orders))
        factors.append(orders[best])
        mask, gens = quotient.generated_mask([best])
        quotient = quotient_group(quotient, NormalSubgroup(quotient, mask, gens))
    return sorted(factors)


# ---------------- Structure predicates -----------------
def is_abelian(group: ConcreteGroup) -> bool:
    gens = group.generator_indices
    return all(group.mul_idx(a, b) == group.mul_idx(b, a) for a, b in combinations(gens, 2))


def is_perfect(group: ConcreteGroup) -> bool:
    return derived_subgroup(group).order == group.order


def derived_series(group: ConcreteGroup) -> List[ConcreteGroup]:
    series = [group]
    while True:
        current = series[-1]
        derived = derived_subgroup(current)
        if derived.order == current.order:
            return series
        series.append(derived.as_group)
        if derived.order == 1:
            return series


def is_solvable(group: ConcreteGroup) -> bool:
    return derived_series(group)[-1].order == 1


def is_simple(group: ConcreteGroup, cap: Optional[int] = None) -> bool:
    return group.order > 1 and len(normal_subgroups(group, cap=cap)) == 2


def minimal_normal_subgroups(group: ConcreteGroup, cap: Optional[int] = None) -> List[NormalSubgroup]:
    nontrivial = [n for n in normal_subgroups(group, cap=cap) if not n.is_trivial]
    return [n for n in nontrivial
            if not any(m.order < n.order and m.issubset(n) for m in nontrivial)]


@_memoized
def is_semisimple(group: ConcreteGroup, cap: Optional[int] = None) -> bool:
    """
    Internal direct product of non-abelian simple minimal normal subgroups.

    The trivial group counts as the empty product.
    """
    if group.order == 1:
        return True
    minimal = minimal_normal_subgroups(group, cap=cap)
    for n in minimal:
        factor = n.as_group
        if is_abelian(factor) or not is_simple(factor, cap=cap):
            return False
    if math.prod(n.order for n in minimal) != group.order:
        return False
    for a, b in combinations(minimal, 2):
        if int((a.mask & b.mask).sum()) != 1:
            return False
        for x in a.generators:
            for y in b.generators:
                if group.mul_idx(x, y) != group.mul_idx(y, x):
                    return False
    return True


def is_quasisimple(group: ConcreteGroup, cap: Optional[int] = None) -> bool:
    if not is_perfect(group):
        return False
    central_quotient = quotient_group(group, center(group))
    return not is_abelian(central_quotient) and is_simple(central_quotient, cap=cap)


def is_central_ext_of_semisimple(group: ConcreteGroup, cap: Optional[int] = None) -> bool:
    return is_semisimple(quotient_group(group, center(group)), cap=cap)


def is_central_product_of_quasisimples(group: ConcreteGroup, cap: Optional[int] = None) -> bool:
    """Perfect central extension of a semisimple group, i.e. a central product of quasisimple groups."""
    return is_perfect(group) and is_central_ext_of_semisimple(group, cap=cap)


def _unique_maximal(group: ConcreteGroup, predicate, what: str, cap: Optional[int]) -> NormalSubgroup:
    candidates = [n for n in normal_subgroups(group, cap=cap) if predicate(n.as_group)]
    maximal = [n for n in candidates if not any(n.order < m.order and n.issubset(m) for m in candidates)]
    if len(maximal) != 1:
        raise UniquenessError(f"{what} of {group.name}: {len(maximal)} maximal candidates")
    return maximal[0]


@_memoized
def cr_radical(group: ConcreteGroup, cap: Optional[int] = None) -> NormalSubgroup:
    """Largest semisimple normal subgroup."""
    return _unique_maximal(group, lambda h: is_semisimple(h, cap=cap), 'CR-radical', cap)


@_memoized
def solvable_radical(group: ConcreteGroup, cap: Optional[int] = None) -> NormalSubgroup:
    return _unique_maximal(group, is_solvable, 'solvable radical', cap)


def is_almost_simple(group: ConcreteGroup, cap: Optional[int] = None) -> bool:
    if not solvable_radical(group, cap=cap).is_trivial:
        return False
    socle = cr_radical(group, cap=cap).as_group
    return not is_abelian(socle) and is_simple(socle, cap=cap)


# ---------------- Almost semisimple groups -----------------
def is_almost_semisimple(group: ConcreteGroup, cap: Optional[int] = None) -> bool:
    """No non-trivial solvable normal subgroup."""
    return solvable_radical(group, cap=cap).is_trivial


def is_cr_quotient_solvable(group: ConcreteGroup, cap: Optional[int] = None) -> bool:
    return is_solvable(quotient_group(group, cr_radical(group, cap=cap)))


def cr_centralizer(group: ConcreteGroup, cap: Optional[int] = None) -> NormalSubgroup:
    """Kernel of the conjugation action of G on CR(G)."""
    gens = cr_radical(group, cap=cap).generators
    mask = np.array([all(group.mul_idx(x, g) == group.mul_idx(g, x) for g in gens)
                     for x in range(group.order)], dtype=bool)
    return NormalSubgroup(group, mask)


def acts_faithfully_on_cr(group: ConcreteGroup, cap: Optional[int] = None) -> bool:
    return cr_centralizer(group, cap=cap).is_trivial


def almost_semisimple_embedding(group: ConcreteGroup, cap: Optional[int] = None) -> Dict[str, object]:
    """
    An almost semisimple group acts faithfully on CR(G) by conjugation, so it
    sits inside Aut(CR(G)) above CR(G).
    """
    if not is_almost_semisimple(group, cap=cap):
        raise NotApplicable(f"{group.name} has a non-trivial solvable normal subgroup")
    kernel = cr_centralizer(group, cap=cap)
    if not kernel.is_trivial:
        raise VerificationFailed('almost_semisimple_embedding',
                                 f"{kernel.order} elements centralize CR({group.name})",
                                 witness=[str(e) for e in kernel.elements[:5]])
    return {'order': group.order, 'cr_order': cr_radical(group, cap=cap).order, 'centralizer_order': 1}


def solvable_split(group: ConcreteGroup, cap: Optional[int] = None) -> Dict[str, object]:
    """
    With G/CR(G) solvable, sol(G) meets CR(G) trivially and G/sol(G) is almost
    semisimple, so G is a subdirect product of G/sol(G) and G/CR(G).
    """
    if not is_cr_quotient_solvable(group, cap=cap):
        raise NotApplicable(f"{group.name}/CR is not solvable")
    radical, sol = cr_radical(group, cap=cap), solvable_radical(group, cap=cap)
    meet = int((radical.mask & sol.mask).sum())
    if meet != 1:
        raise VerificationFailed('solvable_split', f"sol(G) and CR(G) share {meet} elements")
    top = quotient_group(group, sol)
    if not is_almost_semisimple(top, cap=cap):
        raise VerificationFailed('solvable_split', f"G/sol(G) of order {top.order} is not almost semisimple")
    return {'cr_order': radical.order, 'solvable_radical_order': sol.order, 'top_order': top.order}


def is_product_of_almost_simple_and_solvable(group: ConcreteGroup, cap: Optional[int] = None) -> bool:
    """
    G = A_1 x ... x A_k x sol(G) with each A_i almost simple.

    Normal subgroups form an internal direct product exactly when they
    generate G and their orders multiply to |G|.
    """
    sol = solvable_radical(group, cap=cap)
    target = group.order // sol.order
    factors = [n for n in normal_subgroups(group, cap=cap)
               if not n.is_trivial and target % n.order == 0 and int((n.mask & sol.mask).sum()) == 1
               and is_almost_simple(n.as_group, cap=cap)]
    for size in range(len(factors) + 1):
        for chosen in combinations(factors, size):
            if math.prod(n.order for n in chosen) != target:
                continue
            gens = list(sol.generators) + [g for n in chosen for g in n.generators]
            mask, _ = group.generated_mask(gens)
            if mask.all():
                return True
    return False
