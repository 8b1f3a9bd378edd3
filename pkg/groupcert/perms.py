"""
Permutations of {1..p}, the symmetric and alternating groups on top of the
group engine, and the exhaustive A_5 commutator lemma.

Elements wrap sympy.combinatorics permutations and keep their one-line images
(1-based) for hashing and ordering.  Composition follows (st)(i) = s(t(i)),
which in sympy's left-to-right product is `t * s`.
"""
import functools
import logging
import math
import re
from collections import Counter
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from sympy.combinatorics import Permutation as SymPermutation
from sympy.combinatorics.named_groups import AlternatingGroup, SymmetricGroup

from .conf import setting
from .exceptions import ParameterError, ResourceCapError, VerificationFailed
from .grpcore import ConcreteGroup, Contract

logger = logging.getLogger(__name__)

_CYCLE_RE = re.compile(r'\(([^()]*)\)')

# cycles such as "(123)" are only unambiguous while every point is one digit
COMPACT_DEGREE_LIMIT = 9


@dataclass(frozen=True, order=True)
class Permutation:
    images: Tuple[int, ...]

    def __post_init__(self):
        if sorted(self.images) != list(range(1, len(self.images) + 1)):
            raise ParameterError(f"not a permutation of 1..{len(self.images)}: {self.images}")

    @classmethod
    def from_sympy(cls, perm: SymPermutation, degree: Optional[int] = None) -> 'Permutation':
        array = list(perm.array_form)
        if degree is not None:
            if len(array) > degree:
                raise ParameterError(f"permutation of size {len(array)} does not fit degree {degree}")
            array += range(len(array), degree)
        obj = cls(tuple(i + 1 for i in array))
        obj.__dict__['sym'] = perm if perm.size == len(array) else SymPermutation(array)
        return obj

    @classmethod
    def identity(cls, degree: int) -> 'Permutation':
        return cls(tuple(range(1, degree + 1)))

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], degree: int) -> 'Permutation':
        seen = set()
        moving = []
        for cycle in cycles:
            for point in cycle:
                if not 1 <= point <= degree:
                    raise ParameterError(f"point {point} outside 1..{degree}")
                if point in seen:
                    raise ParameterError(f"cycles are not disjoint at point {point}")
                seen.add(point)
            if len(cycle) > 1:
                moving.append([point - 1 for point in cycle])
        if not moving:
            return cls.identity(degree)
        return cls.from_sympy(SymPermutation(moving, size=degree), degree)

    @functools.cached_property
    def sym(self) -> SymPermutation:
        return SymPermutation([i - 1 for i in self.images])

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, point: int) -> int:
        return self.images[point - 1]

    def __mul__(self, other: 'Permutation') -> 'Permutation':
        if other.degree != self.degree:
            raise ParameterError(f"degree mismatch: {self.degree} vs {other.degree}")
        return Permutation.from_sympy(other.sym * self.sym)

    def inverse(self) -> 'Permutation':
        return Permutation.from_sympy(~self.sym)

    def cycles(self) -> List[Tuple[int, ...]]:
        """Non-trivial cycles, each starting at its smallest point."""
        return [tuple(point + 1 for point in cycle) for cycle in self.sym.cyclic_form]

    def cycle_type(self) -> Tuple[int, ...]:
        return tuple(sorted((len(c) for c in self.cycles()), reverse=True))

    @property
    def is_even(self) -> bool:
        return bool(self.sym.is_even)

    @property
    def parity(self) -> str:
        return 'even' if self.is_even else 'odd'

    def fixes(self, point: int) -> bool:
        return self(point) == point

    def __str__(self):
        cycles = self.cycles()
        if not cycles:
            return '()'
        return ''.join('(' + ' '.join(str(p) for p in c) + ')' for c in cycles)


def parse_cycles(text: str, degree: Optional[int] = None) -> Permutation:
    """
    Read cycle notation such as "(1 2 3)(4 5)"; "()" is the identity.

    Points are separated by whitespace or commas.  A cycle written without
    separators, like "(123)", is read digit by digit and is refused once the
    degree exceeds 9.
    """
    text = text.strip()
    if not text or _CYCLE_RE.sub('', text).strip():
        raise ParameterError(f"malformed cycle notation: {text!r}")
    cycles = []
    compact = False
    for body in _CYCLE_RE.findall(text):
        tokens = [t for t in re.split(r'[\s,]+', body.strip()) if t]
        if len(tokens) == 1 and len(tokens[0]) > 1:
            tokens = list(tokens[0])
            compact = True
        try:
            points = [int(t) for t in tokens]
        except ValueError:
            raise ParameterError(f"malformed cycle notation: {text!r}")
        if points:
            cycles.append(points)
    largest = max((max(c) for c in cycles), default=1)
    if degree is None:
        degree = largest
    elif largest > degree:
        raise ParameterError(f"point {largest} exceeds degree {degree}")
    if compact and degree > COMPACT_DEGREE_LIMIT:
        raise ParameterError(f"cycles without separators are ambiguous in degree {degree}: {text!r}")
    return Permutation.from_cycles(cycles, degree)


def commutator(a: Permutation, b: Permutation) -> Permutation:
    """[a, b] = a^-1 b^-1 a b"""
    return a.inverse() * b.inverse() * a * b


def alternating_generators(p: int) -> List[Permutation]:
    """(1 2 3) with (1 2 ... p) for odd p, or (2 3 ... p) for even p."""
    if p < 3:
        return []
    return [Permutation.from_sympy(g, p) for g in AlternatingGroup(p).generators]


def symmetric_generators(p: int) -> List[Permutation]:
    if p < 2:
        return []
    return [Permutation.from_sympy(g, p) for g in SymmetricGroup(p).generators]


def _enumerate(p: int, cap: int, even_only: bool, name: str) -> ConcreteGroup:
    if p < 1:
        raise ParameterError(f"degree must be positive, got {p}")
    size = math.factorial(p) // (2 if even_only and p >= 2 else 1)
    if size > cap:
        raise ResourceCapError(f"{name} has {size} elements, cap is {cap}", partial=0, cap=cap)
    group = AlternatingGroup(p) if even_only else SymmetricGroup(p)
    elements = [Permutation.from_sympy(s, p) for s in group.generate()]
    gens = alternating_generators(p) if even_only else symmetric_generators(p)
    return ConcreteGroup(elements, Contract.native(Permutation.identity(p)), gens, name)


def alternating_group(p: int, cap: Optional[int] = None) -> ConcreteGroup:
    return _enumerate(p, setting('ALTERNATING_CAP', cap), True, f"A{p}")


def symmetric_group(p: int, cap: Optional[int] = None) -> ConcreteGroup:
    return _enumerate(p, setting('ALTERNATING_CAP', cap), False, f"S{p}")


# (1 2)(3 4), written out in one-line notation
DOUBLE_TRANSPOSITION = Permutation((2, 1, 4, 3, 5))


def verify_a5_fixed_point_lemma() -> Dict[str, object]:
    """
    Exhaust all ordered pairs of A_5 and collect those whose commutator is (1 2)(3 4).

    Every solution must fix the point 5 in both coordinates.
    """
    a5 = alternating_group(5).elements
    solutions = []
    for s1 in a5:
        inv1 = s1.inverse()
        for s2 in a5:
            if inv1 * s2.inverse() * s1 * s2 == DOUBLE_TRANSPOSITION:
                solutions.append((s1, s2))
    logger.info(f"A5 lemma: {len(solutions)} solution pairs among {len(a5) ** 2}")
    if not solutions:
        raise VerificationFailed('a5_fixed_point_lemma', "no pair has commutator (1 2)(3 4)")
    for s1, s2 in solutions:
        if not (s1.fixes(5) and s2.fixes(5)):
            raise VerificationFailed('a5_fixed_point_lemma', "solution moves the point 5",
                                     witness=[str(s1), str(s2)])
    types = Counter(s1.cycle_type() for s1, _ in solutions)
    return {
        'pairs_checked': len(a5) ** 2,
        'solutions': len(solutions),
        'sigma1_cycle_types': {str(list(t)) if t else '[]': n for t, n in sorted(types.items())},
    }
