"""Classical integrability of the second-structure chain.

The N-particle model is encoded two ways: an N x N Jacobi-type Lax matrix
L(mu) with spectral corners, whose entry brackets close on r/a structure
matrices, and a product of 2x2 local Lax matrices whose trace reproduces the
mu-independent part of the N x N characteristic polynomial.  All identities
are verified entrywise over the fraction field of the periodic qp chart.
"""

from __future__ import annotations

from .matops import OpMatrix
from .poisson import Chart, PoissonElem, make_chart
from .ring import DEFAULT_REGISTRY, Scalar, ScalarFraction, VarRegistry

__all__ = ["ClassicalModel", "build_model", "build_structure", "swap_two_leg",
           "bracket_matrix", "big_lax", "local_lax", "classical_monodromy"]


class ClassicalModel:
    """Chart plus both Lax presentations at chain length N."""

    def __init__(self, N: int, registry: VarRegistry = DEFAULT_REGISTRY):
        if N < 2:
            raise ValueError("the chain needs at least two sites")
        self.N = N
        self.registry = registry
        self.chart = make_chart("qp", N, periodic=True, registry=registry)
        self.L = big_lax(self.chart, "mu")
        self.T = classical_monodromy(self.chart, "lam")


def build_model(N: int, registry: VarRegistry = DEFAULT_REGISTRY) -> ClassicalModel:
    return ClassicalModel(N, registry)


def big_lax(chart: Chart, mu_name: str = "mu") -> OpMatrix:
    """Tridiagonal Lax matrix with mu^(-+1) corners; diagonal -P_n."""
    N = chart.size
    mu = chart.from_scalar(Scalar.var(mu_name, registry=chart.registry))
    zero = chart.zero()
    m = [[zero for _ in range(N)] for _ in range(N)]
    for n in range(1, N + 1):
        m[n - 1][n - 1] = m[n - 1][n - 1] - chart.gen(f"P{n}")
    for n in range(1, N):
        q = chart.gen(f"Q{n}")
        m[n - 1][n] = m[n - 1][n] + q
        m[n][n - 1] = m[n][n - 1] + q
    qn = chart.gen(f"Q{N}")
    m[0][N - 1] = m[0][N - 1] + qn / mu
    m[N - 1][0] = m[N - 1][0] + qn * mu
    return OpMatrix(m)


def local_lax(chart: Chart, n: int, lam_name: str = "lam") -> OpMatrix:
    lam = chart.from_scalar(Scalar.var(lam_name, registry=chart.registry))
    return OpMatrix([
        [lam - chart.gen(f"P{n}"), -chart.const(1)],
        [chart.gen(f"Q{n}") ** 2, chart.zero()],
    ])


def classical_monodromy(chart: Chart, lam_name: str = "lam") -> OpMatrix:
    t = None
    for n in range(chart.size, 0, -1):
        f = local_lax(chart, n, lam_name)
        t = f if t is None else t.mul(f)
    return t


def build_structure(kind: str, chart: Chart, mu1: str = "mu1", mu2: str = "mu2") -> OpMatrix:
    """N^2 x N^2 structure matrices; r-type carry the denominator mu1 - mu2."""
    N = chart.size
    reg = chart.registry
    m1 = Scalar.var(mu1, registry=reg)
    m2 = Scalar.var(mu2, registry=reg)
    zero = Scalar.zero(reg)
    half = Scalar.const("1/2", reg)

    def at(mat, a, c, b, d, val):
        mat[(a - 1) * N + (c - 1)][(b - 1) * N + (d - 1)] = \
            mat[(a - 1) * N + (c - 1)][(b - 1) * N + (d - 1)] + val

    if kind in ("r12", "r21"):
        entries = [[zero] * N * N for _ in range(N * N)]
        u, v = (m1, m2) if kind == "r12" else (m2, m1)
        den = u - v
        for i in range(1, N + 1):
            for j in range(i + 1, N + 1):
                # E_ij (x) E_ji and E_ji (x) E_ij blocks
                at(entries, i, j, j, i, 2 * v)
                at(entries, j, i, i, j, 2 * u)
            at(entries, i, i, i, i, u + v)
        mat = OpMatrix(entries, den)
        return mat if kind == "r12" else swap_two_leg(mat, N)
    if kind in ("a12", "a21"):
        entries = [[zero] * N * N for _ in range(N * N)]
        for i in range(1, N + 1):
            for j in range(i + 1, N + 1):
                at(entries, i, j, i, j, half)
                at(entries, j, i, j, i, -half)
        mat = OpMatrix(entries)
        return mat if kind == "a12" else swap_two_leg(mat, N)
    if kind in ("d12", "d21"):
        swap = kind == "d21"
        r = build_structure("r12", chart, (mu2 if swap else mu1), (mu1 if swap else mu2))
        a = build_structure("a12", chart)
        if swap:
            r = swap_two_leg(r, N)
            a = swap_two_leg(a, N)
        # d12 right-multiplies the second-leg copy; the swapped d21 the first-leg one.
        Lother = leg_embed(big_lax(chart, mu2 if not swap else mu1), 2 if not swap else 1, chart)
        rp = promote(r, chart)
        ap = promote(a, chart)
        den_elem = chart.from_scalar(r.den)
        # combine over the common denominator mu1 - mu2 (or its swap)
        minus = rp.sub(ap.scale(den_elem))
        plus = rp.add(ap.scale(den_elem))
        out = minus.mul(Lother).neg().sub(Lother.mul(plus))
        return OpMatrix(out.entries, r.den)
    raise ValueError(f"unknown structure kind {kind!r}")


def promote(m: OpMatrix, chart: Chart) -> OpMatrix:
    """Scalar-entry matrix -> PoissonElem entries (denominator dropped)."""
    return OpMatrix([[x if isinstance(x, PoissonElem) else chart.from_scalar(x)
                      for x in row] for row in m.entries])


def leg_embed(m: OpMatrix, leg: int, chart: Chart) -> OpMatrix:
    """Embed an N x N matrix on one leg of the doubled space.

    Leg 1 carries the matrix content as M (x) id, leg 2 as id (x) M.
    """
    N = m.rows
    zero = chart.zero()
    out = [[zero] * N * N for _ in range(N * N)]
    for a in range(N):
        for c in range(N):
            for b in range(N):
                for d in range(N):
                    if leg == 1 and c == d:
                        out[a * N + c][b * N + d] = m.entries[a][b]
                    elif leg == 2 and a == b:
                        out[a * N + c][b * N + d] = m.entries[c][d]
    return OpMatrix(out)


def swap_two_leg(m: OpMatrix, N: int) -> OpMatrix:
    """Exchange the two tensor legs of an N^2 x N^2 matrix."""
    out = [[None] * N * N for _ in range(N * N)]
    for a in range(N):
        for c in range(N):
            for b in range(N):
                for d in range(N):
                    out[c * N + a][d * N + b] = m.entries[a * N + c][b * N + d]
    return OpMatrix(out, m.den)


def bracket_matrix(chart: Chart, mu1: str = "mu1", mu2: str = "mu2") -> OpMatrix:
    """The matrix of entry brackets of the two spectral copies of L.

    Leg 1 carries the mu1 copy and leg 2 the mu2 copy: the entry at row
    (a, c), column (b, d) is {L(mu1)_ab, L(mu2)_cd}.  This is the unique
    orientation for which both closed forms of the bracket hold.
    """
    N = chart.size
    L1m = big_lax(chart, mu1)
    L2m = big_lax(chart, mu2)
    out = [[None] * N * N for _ in range(N * N)]
    for a in range(N):
        for b in range(N):
            for c in range(N):
                for d in range(N):
                    out[a * N + c][b * N + d] = chart.bracket(
                        L1m.entries[a][b], L2m.entries[c][d])
    return OpMatrix(out)


# -- named checks ----------------------------------------------------------------


def _trace_power(L: OpMatrix, n: int):
    M = L
    for _ in range(n - 1):
        M = M.mul(L)
    return M.trace()


def check_classical(check_id: str, N: int = 3,
                    registry: VarRegistry = DEFAULT_REGISTRY,
                    mutate: bool = False):
    """Integrability checks for the N x N presentation; N = 2 runs everywhere
    but is labelled degenerate (periodic deltas collapse)."""
    from .reports import report_from_residuals

    chart = make_chart("qp", N, periodic=True, registry=registry)
    run_params = {"N": N}
    degenerate = N < 3

    if check_id in ("poissonL_explicit", "poissonL_dform"):
        BM = bracket_matrix(chart)
        L1 = leg_embed(big_lax(chart, "mu1"), 1, chart)
        L2 = leg_embed(big_lax(chart, "mu2"), 2, chart)
        den12 = chart.from_scalar(build_structure("r12", chart).den)
        if check_id == "poissonL_dform":
            d12 = build_structure("d12", chart)
            d21 = build_structure("d21", chart)
            den21 = chart.from_scalar(d21.den)
            d12p, d21p = promote(d12, chart), promote(d21, chart)
            rhs = (d12p.mul(L1).sub(L1.mul(d12p))).scale(den21).sub(
                (d21p.mul(L2).sub(L2.mul(d21p))).scale(den12))
            res, _ = BM.scale(den12 * den21).residual(rhs)
            return report_from_residuals(check_id, run_params, _CANCHORS[check_id],
                                         [("entry brackets vs commutator form", res)],
                                         degenerate)
        r12 = promote(build_structure("r12", chart), chart)
        a12 = promote(build_structure("a12", chart), chart)
        if mutate:
            a12 = a12.neg()
        two = chart.const(2)
        L12 = L1.mul(L2)
        rhs = (r12.mul(L12).sub(L12.mul(r12))).scale(-two) \
            .add(a12.mul(L12).scale(two).scale(den12)) \
            .add(L12.mul(a12).scale(two).scale(den12)) \
            .sub(L1.mul(a12).mul(L2).scale(two).scale(den12)) \
            .sub(L2.mul(a12).mul(L1).scale(two).scale(den12))
        res, _ = BM.scale(den12).residual(rhs)
        return report_from_residuals(check_id, run_params, _CANCHORS[check_id],
                                     [("entry brackets vs explicit form", res)],
                                     degenerate)

    if check_id == "involution":
        La, Lb = big_lax(chart, "mu1"), big_lax(chart, "mu2")
        items = []
        for n in (1, 2, 3):
            for m in (1, 2, 3):
                items.append((f"(n={n},m={m})",
                              chart.bracket(_trace_power(La, n), _trace_power(Lb, m))))
        prod_q = chart.const(1)
        for a in range(1, N + 1):
            prod_q = prod_q * chart.gen(f"Q{a}")
        for n in (1, 2, 3):
            items.append((f"center(n={n})",
                          chart.bracket(prod_q, _trace_power(La, n))))
        return report_from_residuals(check_id, run_params, _CANCHORS[check_id],
                                     items, degenerate)

    if check_id in ("curve_NxN", "pN_equals_trT", "curve_2x2"):
        lam = chart.from_scalar(Scalar.var("lam", registry=registry))
        mu = chart.from_scalar(Scalar.var("mu", registry=registry))
        mu_inv = chart.from_scalar(Scalar.var("mu", registry=registry).monomial_inverse())
        prod_q = chart.const(1)
        for a in range(1, N + 1):
            prod_q = prod_q * chart.gen(f"Q{a}")
        if check_id == "curve_2x2":
            T = classical_monodromy(chart, "lam")
            shifted = OpMatrix([[T.entries[i][j] - (mu if i == j else chart.zero())
                                 for j in range(2)] for i in range(2)])
            lhs = shifted.det() * mu_inv
            rhs = mu + prod_q * prod_q * mu_inv - T.trace()
            return report_from_residuals(check_id, run_params, _CANCHORS[check_id],
                                         [("characteristic relation", lhs - rhs),
                                          ("spectral determinant", T.det() - prod_q * prod_q)],
                                         degenerate)
        L = big_lax(chart, "mu")
        shifted = OpMatrix([[L.entries[i][j] + (lam if i == j else chart.zero())
                             for j in range(N)] for i in range(N)])
        corner = prod_q * (mu + mu_inv)
        if N % 2 == 0:
            corner = -corner
        pN = shifted.det() - corner
        if check_id == "curve_NxN":
            # mu-freeness through a fresh spectral variable: unreduced
            # fractions make an exponent scan unreliable
            nu = Scalar.var("nu", registry=registry)
            pN_nu = PoissonElem(chart, ScalarFraction(
                pN.value.num.substitute({"mu": nu}), pN.value.den.substitute({"mu": nu})))
            return report_from_residuals(check_id, run_params, _CANCHORS[check_id],
                                         [("corner-free remainder", pN - pN_nu)],
                                         degenerate)
        T = classical_monodromy(chart, "lam")
        return report_from_residuals(check_id, run_params, _CANCHORS[check_id],
                                     [("trace identification", pN - T.trace())],
                                     degenerate)

    raise ValueError(f"unknown classical check {check_id!r}")


_CANCHORS = {
    "poissonL_explicit": "entry brackets of the big Lax match the explicit quadratic form",
    "poissonL_dform": "entry brackets of the big Lax match the commutator form",
    "involution": "trace powers are in involution and the corner product is central",
    "curve_NxN": "characteristic polynomial splits off the corner term",
    "curve_2x2": "monodromy characteristic relation and spectral determinant",
    "pN_equals_trT": "corner-free characteristic part equals the monodromy trace",
}
