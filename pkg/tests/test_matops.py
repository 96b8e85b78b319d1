import random
from fractions import Fraction

import pytest

from toda2.matops import OpMatrix, embed_two_leg, tensor_embed
from toda2.ring import Scalar, ScalarFraction
from toda2.weyl import Lattice, WeylOp
from toda2.quantum import ModelParams, build_lax, build_scalar_aux, q_sigma_z

LAT = Lattice(3, True)
PARAMS = ModelParams.generic()


def sc(v):
    return Scalar.const(v)


def rand_scalar_matrix(rng, n):
    return OpMatrix([[Scalar.monomial({"lam": rng.randint(0, 2)}, rng.randint(-4, 4))
                      for _ in range(n)] for _ in range(n)])


def test_identity_multiplication():
    a = rand_scalar_matrix(random.Random(1), 3)
    one = OpMatrix.identity(3, sc(1))
    assert one.mul(a).residual(a)[1]
    assert a.mul(one).residual(a)[1]


def test_gauge_matrix_inverse_pair():
    lam = Scalar.var("lam")
    one2 = OpMatrix.identity(2, WeylOp.one(LAT))
    for n in (1, 2, 3):
        N = build_lax("gaugeN", n, lam, PARAMS, LAT)
        Ninv = build_lax("gaugeNinv", n, lam, PARAMS, LAT)
        assert N.mul(Ninv).residual(one2)[1]
        assert Ninv.mul(N).residual(one2)[1]


def test_2x2_weyl_product_eight_term_oracle():
    U1, V1 = WeylOp.generator(LAT, 1, "U"), WeylOp.generator(LAT, 1, "V")
    U2, V2 = WeylOp.generator(LAT, 2, "U"), WeylOp.generator(LAT, 2, "V")
    A = OpMatrix([[U1, V1], [V2, U2]])
    B = OpMatrix([[V1, U2], [U1, V2]])
    got = A.mul(B)
    # expand each entry by hand, preserving operator order
    expect = OpMatrix([
        [U1 * V1 + V1 * U1, U1 * U2 + V1 * V2],
        [V2 * V1 + U2 * U1, V2 * U2 + U2 * V2],
    ])
    assert got.residual(expect)[1]


def test_matmul_associativity_random():
    rng = random.Random(8)
    for _ in range(10):
        a, b, c = (rand_scalar_matrix(rng, 3) for _ in range(3))
        lhs = a.mul(b).mul(c)
        rhs = a.mul(b.mul(c))
        assert lhs.residual(rhs)[1]


def test_sigma_z_tensor_square():
    sz = OpMatrix([[sc(1), sc(0)], [sc(0), sc(-1)]])
    got = tensor_embed(sz, 1).mul(tensor_embed(sz, 2))
    expect = OpMatrix([[sc(1), sc(0), sc(0), sc(0)],
                       [sc(0), sc(-1), sc(0), sc(0)],
                       [sc(0), sc(0), sc(-1), sc(0)],
                       [sc(0), sc(0), sc(0), sc(1)]])
    assert got.residual(expect)[1]


def test_embed_identity_is_identity():
    one2 = OpMatrix.identity(2, sc(1))
    assert tensor_embed(one2, 1).residual(OpMatrix.identity(4, sc(1)))[1]
    assert tensor_embed(one2, 2).residual(OpMatrix.identity(4, sc(1)))[1]


def test_leg_product_index_arithmetic_oracle():
    lam1, lam2 = Scalar.var("lam1"), Scalar.var("lam2")
    l1 = build_lax("l", 1, lam1, PARAMS, LAT)
    l2 = build_lax("l", 1, lam2, PARAMS, LAT)
    prod = tensor_embed(l1, 1).mul(tensor_embed(l2, 2))
    # entry ((a,b),(c,d)) of the product must be l1[a][c] * l2[b][d]
    for a in range(2):
        for b in range(2):
            for c in range(2):
                for d in range(2):
                    got = prod.entries[2 * a + b][2 * c + d]
                    assert (got - l1.entries[a][c] * l2.entries[b][d]).is_zero()
    # in particular the (2,3) entry pairs the off-diagonals
    assert (prod.entries[1][2] - l1.entries[0][1] * l2.entries[1][0]).is_zero()


def test_legs_commute_for_scalar_entries():
    rng = random.Random(77)
    a = rand_scalar_matrix(rng, 2)
    b = rand_scalar_matrix(rng, 2)
    lhs = tensor_embed(a, 1).mul(tensor_embed(b, 2))
    rhs = tensor_embed(b, 2).mul(tensor_embed(a, 1))
    assert lhs.residual(rhs)[1]


def test_trace_identity_and_closing_trace():
    assert OpMatrix.identity(2, sc(1)).trace() == sc(2)
    # diagonal of the trace-closing companion against diag(q^-1, q)
    lam = Scalar.var("lam")
    g = build_scalar_aux("Gtilde0", lam, PARAMS)
    closed = g.mul(q_sigma_z(-1))
    d1, d23 = Scalar.var("d1"), Scalar.var("d2") * Scalar.var("d3")
    s = Scalar.var("s")
    expect = (Scalar.var("s", -2)
              + Scalar.var("s", 2) * (Scalar.var("s", -1) + s * d1 * lam
                                      + Scalar.var("s", -1) * d23 * lam * lam))
    assert closed.trace() == expect


def test_trace_cyclicity_commutative_and_weyl_counterexample():
    rng = random.Random(3)
    for _ in range(10):
        a, b = rand_scalar_matrix(rng, 3), rand_scalar_matrix(rng, 3)
        assert (a.mul(b).trace() - b.mul(a).trace()).is_zero()
    U1, V1 = WeylOp.generator(LAT, 1, "U"), WeylOp.generator(LAT, 1, "V")
    zero = WeylOp.zero(LAT)
    A = OpMatrix([[U1, zero], [zero, zero]])
    B = OpMatrix([[V1, zero], [zero, zero]])
    # tr(AB) = U V differs from tr(BA) = V U in the Weyl algebra
    assert not (A.mul(B).trace() - B.mul(A).trace()).is_zero()


def test_det_diagonal_and_multiplicativity():
    a, b, c = Scalar.var("d1"), Scalar.var("d2"), Scalar.var("d3")
    zero = Scalar.zero()
    d = OpMatrix([[a, zero, zero], [zero, b, zero], [zero, zero, c]])
    assert d.det() == a * b * c
    rng = random.Random(15)
    for n in (2, 3):
        for _ in range(6):
            x, y = rand_scalar_matrix(rng, n), rand_scalar_matrix(rng, n)
            assert x.mul(y).det() == x.det() * y.det()


def test_det_rejects_weyl_entries():
    U1 = WeylOp.generator(LAT, 1, "U")
    m = OpMatrix([[U1, U1], [U1, U1]])
    with pytest.raises(TypeError):
        m.det()


def test_residual_reports_flipped_corner():
    lam = Scalar.var("lam")
    g = build_scalar_aux("G0", lam, PARAMS)
    bad = OpMatrix([row[:] for row in g.entries])
    bad.entries[1][0] = -bad.entries[1][0]
    res, ok = g.residual(bad)
    assert not ok
    assert res.nonzero_entries() == [(1, 0)]
    res2, ok2 = g.residual(g)
    assert ok2 and res2.is_zero()


def test_partial_transpose_is_involutive():
    rng = random.Random(4)
    m = rand_scalar_matrix(rng, 4)
    for leg in (1, 2):
        assert m.partial_transpose(leg).partial_transpose(leg).residual(m)[1]


def test_inverse_comm_adjugate():
    m = OpMatrix([[sc(2), sc(1), sc(0), sc(0)],
                  [sc(0), sc(1), sc(3), sc(0)],
                  [sc(0), sc(0), sc(1), sc(0)],
                  [sc(5), sc(0), sc(0), sc(1)]])
    inv = m.inverse_comm()
    one4 = OpMatrix.identity(4, ScalarFraction(sc(1)))
    got = inv.mul(m.map(ScalarFraction))
    assert got.residual(one4)[1]


def test_denominators_multiply_and_align():
    den = Scalar.var("lam") + sc(1)
    a = OpMatrix([[Scalar.var("lam"), sc(0)], [sc(0), sc(1)]], den)
    b = OpMatrix([[sc(1), sc(0)], [sc(0), sc(1)]], den)
    prod = a.mul(b)
    assert prod.den == den * den
    # subtraction aligns denominators by cross-multiplication
    diff, ok = a.sub(a).residual(OpMatrix.filled(2, 2, Scalar.zero()))
    assert ok


def test_three_leg_embedding_matches_two_leg():
    rng = random.Random(6)
    m = rand_scalar_matrix(rng, 4)
    e12 = embed_two_leg(m, (1, 2))
    for r in range(8):
        for c in range(8):
            rb = [(r >> k) & 1 for k in (2, 1, 0)]
            cb = [(c >> k) & 1 for k in (2, 1, 0)]
            if rb[2] != cb[2]:
                assert e12.entries[r][c].is_zero()
            else:
                expect = m.entries[2 * rb[0] + rb[1]][2 * cb[0] + cb[1]]
                assert (e12.entries[r][c] - expect).is_zero()
