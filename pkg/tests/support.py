"""Shared randomized generators and the linear fixture suite."""

from fractions import Fraction

from groupca.ca import CellularAutomaton, LinearRule
from groupca.groups import FiniteGroup, FreeGroup, ZdGroup, ball
from groupca.near_ring import ExponentVector, NearRingElement
from groupca.rings import QQ, ExactMatrix, PrimeField


def rand_group_element(group, rng, radius=2):
    elems = list(ball(group, radius))
    return elems[rng.randrange(len(elems))]


def rand_scalar(field, rng, lo=-4, hi=4):
    if field is QQ or getattr(field, "characteristic", None) == 0:
        d = rng.randint(1, 3)
        return Fraction(rng.randint(lo, hi), d)
    return field.from_int(rng.randint(0, field.size() - 1))


def rand_nonzero_scalar(field, rng):
    while True:
        c = rand_scalar(field, rng)
        if c:
            return c


def rand_exponent_vector(group, rng, radius=2, max_degree=3, max_support=2):
    items = {}
    remaining = max_degree
    for _ in range(rng.randint(0, max_support)):
        if remaining <= 0:
            break
        g = rand_group_element(group, rng, radius)
        e = rng.randint(1, remaining)
        items[g] = items.get(g, 0) + e
        remaining -= e
    return ExponentVector(group, items)


def rand_near_ring(group, field, rng, radius=2, max_degree=3, max_terms=3, nonzero=False):
    terms = {}
    for _ in range(rng.randint(0 if not nonzero else 1, max_terms)):
        u = rand_exponent_vector(group, rng, radius, max_degree)
        c = rand_scalar(field, rng)
        if c:
            terms[u] = c
    elem = NearRingElement(group, field, terms)
    if nonzero and not elem:
        return NearRingElement.constant(group, field, field.one())
    return elem


def rand_group_ring(group, field, rng, radius=2, max_terms=3, shape=None):
    from groupca.group_ring import GroupRingElement

    coeffs = {}
    for _ in range(rng.randint(0, max_terms)):
        g = rand_group_element(group, rng, radius)
        if shape is None:
            coeffs[g] = rand_scalar(field, rng)
        else:
            coeffs[g] = rand_matrix(field, rng, shape)
    return GroupRingElement(group, field, coeffs, shape=shape)


def rand_matrix(field, rng, n):
    return ExactMatrix(field, [[rand_scalar(field, rng) for _ in range(n)] for _ in range(n)])


# ---------------------------------------------------------------------------
# linear fixture suite (10 automata over Z and Z^2)


def _mat(field, rows):
    return ExactMatrix.from_ints(field, rows)


def z_fixtures():
    Z = ZdGroup(1)
    el = lambda n: Z.element((n,))
    F = QQ
    identity = CellularAutomaton(Z, LinearRule(1, F, {el(0): _mat(F, [[1]])}))
    shift = CellularAutomaton(Z, LinearRule(1, F, {el(1): _mat(F, [[1]])}))
    diff = CellularAutomaton(
        Z, LinearRule(1, F, {el(0): _mat(F, [[-1]]), el(1): _mat(F, [[1]])})
    )
    rank1 = CellularAutomaton(
        Z,
        LinearRule(
            2,
            F,
            {
                el(0): _mat(F, [[1, 0], [0, 0]]),
                el(1): _mat(F, [[0, 1], [1, 0]]),
                el(2): _mat(F, [[0, 0], [0, 1]]),
            },
        ),
    )
    pair_tau = CellularAutomaton(
        Z,
        LinearRule(
            2, F, {el(0): ExactMatrix.identity(F, 2), el(1): _mat(F, [[0, 1], [0, 0]])}
        ),
    )
    return {
        "identity": identity,
        "shift": shift,
        "diff": diff,
        "rank1_2x2": rank1,
        "invertible_pair_tau": pair_tau,
    }


def pair_sigma():
    Z = ZdGroup(1)
    el = lambda n: Z.element((n,))
    return CellularAutomaton(
        Z,
        LinearRule(
            2,
            QQ,
            {el(0): ExactMatrix.identity(QQ, 2), el(1): _mat(QQ, [[0, -1], [0, 0]])},
        ),
    )


def z2_fixtures():
    Z2 = ZdGroup(2)
    el = lambda x, y: Z2.element((x, y))
    F2, F3 = PrimeField(2), PrimeField(3)
    identity_f3 = CellularAutomaton(Z2, LinearRule(1, F3, {el(0, 0): _mat(F3, [[1]])}))
    shift_e1 = CellularAutomaton(Z2, LinearRule(1, QQ, {el(1, 0): _mat(QQ, [[1]])}))
    diff_e1 = CellularAutomaton(
        Z2, LinearRule(1, QQ, {el(0, 0): _mat(QQ, [[-1]]), el(1, 0): _mat(QQ, [[1]])})
    )
    zero = CellularAutomaton(Z2, LinearRule(1, QQ, {}))
    corner_f2 = CellularAutomaton(
        Z2,
        LinearRule(
            1,
            F2,
            {el(0, 0): _mat(F2, [[1]]), el(1, 0): _mat(F2, [[1]]), el(0, 1): _mat(F2, [[1]])},
        ),
    )
    return {
        "identity_f3": identity_f3,
        "shift_e1": shift_e1,
        "diff_e1": diff_e1,
        "zero": zero,
        "corner_f2": corner_f2,
    }


def fixture_suite():
    suite = {}
    suite.update({"z/" + k: v for k, v in z_fixtures().items()})
    suite.update({"z2/" + k: v for k, v in z2_fixtures().items()})
    return suite


def cyclic_group(n):
    return FiniteGroup.cyclic(n, generator_indices=[1])


def free2():
    return FreeGroup(2)
