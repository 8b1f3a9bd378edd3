"""
Group-spec text for the analyze command.

    a5 | s5 | sl2(5) | subdirect-sl25 | a5xa5 | s5s5-subdirect | s5s6-subdirect
    a(p) | s(p) | gn(p,q,n)
    perm{<cycles>;<cycles>;...}
    mat(q){<row-major entries>;<row-major entries>;...}
"""
import logging
import math
import re
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .conf import setting
from .constructions import Params, build_Gn
from .exceptions import ParameterError
from .ffla import matrix_inverse, require_prime
from .grpcore import ConcreteGroup, Contract, direct_product, direct_product_contract, generate
from .perms import Permutation, alternating_group, parse_cycles, symmetric_group

logger = logging.getLogger(__name__)

Matrix = Tuple[Tuple[int, ...], ...]

_GN_RE = re.compile(r'^gn\(\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*\)$')
_DEGREE_RE = re.compile(r'^([as])\(\s*(\d+)\s*\)$')
_PERM_RE = re.compile(r'^perm\{(.*)\}$')
_MAT_RE = re.compile(r'^mat\(\s*(\d+)\s*\)\{(.*)\}$')

SL2_GENERATORS = (((1, 1), (0, 1)), ((0, -1), (1, 0)))

# A_5 x A_k and one element that is a transposition in both factors
SIGN_SUBDIRECT = {
    's5s5-subdirect': (10, ['(1 2 3)', '(1 2 3 4 5)', '(6 7 8)', '(6 7 8 9 10)', '(1 2)(6 7)']),
    's5s6-subdirect': (11, ['(1 2 3)', '(1 2 3 4 5)', '(6 7 8)', '(7 8 9 10 11)', '(1 2)(6 7)']),
}


def matrix_contract(q: int, size: int) -> Contract:
    """Invertible size x size matrices over F_q as tuples of row tuples."""
    require_prime(q)

    def mul(a: Matrix, b: Matrix) -> Matrix:
        product = np.array(a, dtype=np.int64) @ np.array(b, dtype=np.int64) % q
        return tuple(tuple(int(c) for c in row) for row in product)

    def inv(a: Matrix) -> Matrix:
        return tuple(tuple(int(c) for c in row) for row in matrix_inverse(a, q))

    identity = tuple(tuple(int(i == j) for j in range(size)) for i in range(size))
    return Contract(mul, inv, identity)


def as_matrix(entries: Sequence[int], q: int) -> Matrix:
    size = math.isqrt(len(entries))
    if size * size != len(entries) or size == 0:
        raise ParameterError(f"{len(entries)} entries do not form a square matrix")
    return tuple(tuple(int(entries[i * size + j]) % q for j in range(size)) for i in range(size))


def matrix_group(gens: Sequence[Matrix], q: int, cap: Optional[int] = None, name: str = 'mat') -> ConcreteGroup:
    sizes = {len(g) for g in gens}
    if len(sizes) > 1:
        raise ParameterError("generators have different sizes")
    contract = matrix_contract(q, sizes.pop() if sizes else 1)
    for g in gens:
        try:
            contract.inv(g)
        except ParameterError:
            raise ParameterError(f"generator {g} is singular mod {q}")
    return generate(gens, contract, cap, name)


def sl2_5(cap: Optional[int] = None) -> ConcreteGroup:
    return matrix_group([as_matrix([c for row in g for c in row], 5) for g in SL2_GENERATORS], 5, cap, 'SL2(5)')


def subdirect_sl25(cap: Optional[int] = None) -> ConcreteGroup:
    """
    Preimage of the diagonal A_5 in SL2(5) x SL2(5): the diagonal SL2(5)
    together with (I, -I).  Order 240.
    """
    contract = matrix_contract(5, 2)
    pair = direct_product_contract(contract, contract)
    diagonal = [(as_matrix([c for row in g for c in row], 5),) * 2 for g in SL2_GENERATORS]
    minus_identity = ((4, 0), (0, 4))
    gens = diagonal + [(contract.identity, minus_identity)]
    return generate(gens, pair, cap, 'subdirect-SL2(5)^2')


def sign_subdirect(spec: str, cap: Optional[int] = None) -> ConcreteGroup:
    """
    Subdirect product of S_5 and S_k glued along the sign: (A_5 x A_k) ⋊ Z/2.

    Almost semisimple, but not a direct product of almost simple and solvable
    groups.  Orders 7200 (k = 5) and 43200 (k = 6).
    """
    degree, cycles = SIGN_SUBDIRECT[spec]
    gens = [parse_cycles(c, degree) for c in cycles]
    return generate(gens, Contract.native(Permutation.identity(degree)), cap, spec)


def _parse_entries(text: str) -> List[int]:
    try:
        return [int(t) for t in re.split(r'[\s,]+', text.strip()) if t]
    except ValueError:
        raise ParameterError(f"malformed matrix entries: {text!r}")


def parse_group_spec(spec: str, cap: Optional[int] = None) -> ConcreteGroup:
    cap = setting('ENUMERATION_CAP', cap)
    text = spec.strip().lower()
    logger.info(f"Building group from spec {text!r}")
    if text == 'a5':
        return alternating_group(5)
    if text == 's5':
        return symmetric_group(5)
    if text == 'sl2(5)':
        return sl2_5(cap)
    if text == 'subdirect-sl25':
        return subdirect_sl25(cap)
    if text in SIGN_SUBDIRECT:
        return sign_subdirect(text, cap)
    if text == 'a5xa5':
        a5 = alternating_group(5)
        return direct_product(a5, a5, cap, 'A5xA5')
    match = _DEGREE_RE.match(text)
    if match:
        kind, degree = match.group(1), int(match.group(2))
        builder = alternating_group if kind == 'a' else symmetric_group
        return builder(degree, min(cap, setting('ALTERNATING_CAP')))
    match = _GN_RE.match(text)
    if match:
        p, q, n = (int(g) for g in match.groups())
        return build_Gn(Params(p, q, 1, n), cap)
    match = _PERM_RE.match(text)
    if match:
        parts = [part for part in match.group(1).split(';') if part.strip()]
        if not parts:
            raise ParameterError("perm{} needs at least one generator")
        perms = [parse_cycles(part) for part in parts]
        degree = max(s.degree for s in perms)
        gens = [parse_cycles(part, degree) for part in parts]
        return generate(gens, Contract.native(Permutation.identity(degree)), cap, f"perm{{{match.group(1)}}}")
    match = _MAT_RE.match(text)
    if match:
        q = int(match.group(1))
        parts = [part for part in match.group(2).split(';') if part.strip()]
        if not parts:
            raise ParameterError("mat(q){} needs at least one generator")
        gens = [as_matrix(_parse_entries(part), q) for part in parts]
        return matrix_group(gens, q, cap, f"mat({q})")
    raise ParameterError(f"unknown group spec: {spec!r}")
