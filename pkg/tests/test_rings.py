import itertools
import random
from fractions import Fraction

import pytest

from groupca.rings import (
    _IRREDUCIBLE,
    QQ,
    ExactMatrix,
    ExtensionField,
    PrimeField,
    RingError,
    TwistedPoly,
    exact_decimal,
    field_from_spec,
    frobenius,
    matrix_rank_kernel,
    rank_kernel_sparse,
    scalar_field,
    twisted_multiply,
)

F2, F3, F5 = PrimeField(2), PrimeField(3), PrimeField(5)
GF4 = ExtensionField(2, 2)


def test_shipped_moduli_are_irreducible():
    # brute force: no monic factor of degree <= k/2 divides the modulus
    for (p, k), coeffs in _IRREDUCIBLE.items():
        def polydiv_rem(a, b):
            a = list(a)
            while len(a) >= len(b):
                f = a[-1] * pow(b[-1], p - 2, p) % p
                for i in range(len(b)):
                    a[len(a) - len(b) + i] = (a[len(a) - len(b) + i] - f * b[i]) % p
                while a and a[-1] == 0:
                    a.pop()
                if not a:
                    return []
            return a

        assert coeffs[-1] == 1 and len(coeffs) == k + 1
        for d in range(1, k // 2 + 1):
            for tail in itertools.product(range(p), repeat=d):
                factor = list(tail) + [1]
                assert polydiv_rem(coeffs, factor), (p, k, factor)


def test_field_axioms_sampled():
    rng = random.Random(0)
    for field in (F3, F5, GF4, ExtensionField(3, 2), ExtensionField(5, 2)):
        elems = field.elements()
        for _ in range(300):
            a, b, c = (elems[rng.randrange(len(elems))] for _ in range(3))
            assert (a + b) + c == a + (b + c)
            assert a * (b + c) == a * b + a * c
            assert (a * b) * c == a * (b * c)
            assert a + (-a) == field.zero()
            if a:
                assert a * a.inverse() == field.one()


def test_prime_field_basics():
    assert F5.from_int(3) + F5.from_int(4) == F5.from_int(2)
    assert F5.from_int(3) / F5.from_int(4) == F5.from_int(2)
    with pytest.raises(RingError):
        F5.from_int(0).inverse()
    with pytest.raises(RingError):
        PrimeField(6)
    with pytest.raises(RingError):
        F5.from_int(1) + F3.from_int(1)


def test_frobenius_examples():
    assert frobenius(F3.from_int(2), 1) == F3.from_int(2)
    w = GF4.gen()
    assert frobenius(w, 1) == w + GF4.one()
    assert frobenius(w, 0) == w
    with pytest.raises(RingError):
        frobenius(Fraction(1, 2), 1)


def test_scalar_parse_format_round_trip():
    cases = [
        (QQ, Fraction(3, 4)),
        (QQ, Fraction(-7)),
        (F5, F5.from_int(2)),
        (GF4, GF4.gen() + GF4.one()),
        (GF4, GF4.zero()),
    ]
    for field, value in cases:
        assert field.parse(field.format(value)) == value
    assert QQ.format(Fraction(3, 4)) == "3/4"
    assert F5.format(F5.from_int(2)) == "2 mod 5"
    assert GF4.format(GF4.gen() + GF4.one()) == "w^1+1 in GF(4)"


def test_field_from_spec():
    assert field_from_spec("q") is QQ
    assert field_from_spec("f7").p == 7
    assert field_from_spec("gf9") == ExtensionField(3, 2)
    assert field_from_spec("gf5") == PrimeField(5)
    with pytest.raises(RingError):
        field_from_spec("gf6")
    assert scalar_field(GF4.gen()) == GF4


def test_rank_kernel_examples():
    ident = ExactMatrix.identity(QQ, 3)
    rank, kernel = matrix_rank_kernel(ident)
    assert rank == 3 and kernel == []

    m = ExactMatrix.from_ints(QQ, [[1, 2], [2, 4]])
    rank, kernel = matrix_rank_kernel(m)
    assert rank == 1
    assert kernel == [(Fraction(-2), Fraction(1))]

    m2 = ExactMatrix.from_ints(F2, [[1, 1], [1, 1]])
    rank, kernel = matrix_rank_kernel(m2)
    assert rank == 1
    assert kernel == [(F2.one(), F2.one())]


def test_kernel_vectors_annihilate():
    rng = random.Random(7)
    for field in (QQ, F5):
        for _ in range(100):
            rows = [
                [field.from_int(rng.randint(-3, 3)) for _ in range(rng.randint(1, 5))]
            ]
            ncols = len(rows[0])
            for _ in range(rng.randint(0, 4)):
                rows.append([field.from_int(rng.randint(-3, 3)) for _ in range(ncols)])
            m = ExactMatrix(field, rows)
            rank, kernel = matrix_rank_kernel(m)
            assert rank + len(kernel) == ncols
            for vec in kernel:
                assert all(not x for x in m.apply(list(vec)))


def _alt_rank_span(field, m):
    """Second elimination order: columns right to left, largest row index pivot."""
    rows = [{j: v for j, v in enumerate(r) if v} for r in m.rows]
    pivots = {}
    remaining = list(range(len(rows)))
    for col in range(m.ncols - 1, -1, -1):
        pr = None
        for i in reversed(remaining):
            if rows[i].get(col):
                pr = i
                break
        if pr is None:
            continue
        remaining.remove(pr)
        pivots[col] = pr
        prow = rows[pr]
        inv = 1 / prow[col] if isinstance(prow[col], Fraction) else prow[col].inverse()
        for j, v in list(prow.items()):
            prow[j] = v * inv
        for i in remaining:
            f = rows[i].get(col)
            if not f:
                continue
            for j, v in prow.items():
                nv = rows[i].get(j, field.zero()) - f * v
                if nv:
                    rows[i][j] = nv
                elif j in rows[i]:
                    del rows[i][j]
    return len(pivots)


def test_rank_against_second_elimination_order():
    rng = random.Random(11)
    for field in (QQ, F5):
        for _ in range(200):
            nr, nc = rng.randint(1, 6), rng.randint(1, 6)
            m = ExactMatrix(
                field, [[field.from_int(rng.randint(-2, 2)) for _ in range(nc)] for _ in range(nr)]
            )
            assert m.rank() == _alt_rank_span(field, m)


def test_rank_kernel_rejects_non_field():
    class FakeRing:
        pass

    m = ExactMatrix.from_ints(QQ, [[1]])
    m.field = FakeRing()
    with pytest.raises(RingError):
        matrix_rank_kernel(m)


def test_matrix_arithmetic():
    a = ExactMatrix.from_ints(QQ, [[1, 2], [3, 4]])
    b = ExactMatrix.from_ints(QQ, [[0, 1], [1, 0]])
    assert (a * b).rows[0] == [Fraction(2), Fraction(1)]
    assert (a + b - b) == a
    assert a.transpose().rows[0] == [Fraction(1), Fraction(3)]
    assert a.apply([Fraction(1), Fraction(1)]) == [Fraction(3), Fraction(7)]
    with pytest.raises(RingError):
        a * ExactMatrix.identity(F2, 2)


def test_twisted_examples():
    w = GF4.gen()
    t = TwistedPoly.t(GF4)
    const_w = TwistedPoly.constant(GF4, w)
    prod = twisted_multiply(t, const_w)
    assert prod.coeffs == (GF4.zero(), w * w)  # t*w = w^2 t, and w^2 = w+1
    assert w * w == w + GF4.one()
    assert twisted_multiply(t, t).coeffs == (GF4.zero(), GF4.zero(), GF4.one())


def test_twisted_prime_field_commutes():
    rng = random.Random(3)
    for _ in range(100):
        a = TwistedPoly(F5, [F5.from_int(rng.randint(0, 4)) for _ in range(rng.randint(0, 3))])
        b = TwistedPoly(F5, [F5.from_int(rng.randint(0, 4)) for _ in range(rng.randint(0, 3))])
        assert a * b == b * a


def test_twisted_noncommutative_over_gf4():
    t = TwistedPoly.t(GF4)
    cw = TwistedPoly.constant(GF4, GF4.gen())
    assert t * cw != cw * t


def test_twisted_ring_axioms_random():
    rng = random.Random(9)

    def rand_poly():
        return TwistedPoly(
            GF4, [GF4.elements()[rng.randrange(4)] for _ in range(rng.randint(0, 3))]
        )

    for _ in range(200):
        a, b, c = rand_poly(), rand_poly(), rand_poly()
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert (a + b) * c == a * c + b * c


def test_twisted_degree_additive():
    t = TwistedPoly.t(GF4)
    a = t * t + TwistedPoly.constant(GF4, GF4.one())
    b = t + TwistedPoly.constant(GF4, GF4.gen())
    assert (a * b).degree() == a.degree() + b.degree()


def test_twisted_rejects_characteristic_zero():
    with pytest.raises(RingError):
        TwistedPoly(QQ, [Fraction(1)])


def test_exact_decimal():
    assert exact_decimal(Fraction(1, 3)) == "0.333333"
    assert exact_decimal(Fraction(-1, 2)) == "-0.500000"
    assert exact_decimal(Fraction(2)) == "2.000000"
    assert exact_decimal(Fraction(1, 6), places=3) == "0.167"


def test_sparse_rank_matches_dense_on_wide_banded():
    # the window-matrix shape: banded with +/-1 entries
    n = 40
    rows = []
    for i in range(n):
        rows.append({i: Fraction(-1), i + 1: Fraction(1)})
    rank, kernel = rank_kernel_sparse(QQ, rows, n + 1, want_kernel=True)
    assert rank == n
    assert len(kernel) == 1
    assert all(x == kernel[0][0] for x in kernel[0])  # constants span the kernel
