"""Classical phase-space engine: charts, Poisson brackets, lattice fields.

A :class:`Chart` declares commuting generators and an antisymmetric bracket
table on them; the bracket of arbitrary Laurent-polynomial fractions follows
by bilinearity, the Leibniz rule and the quotient rule.  Three charts ship:

* ``exlat``    -- open chain of row doublets (xi1_n, xi2_n) whose bracket is
                  the componentwise action of the rational r-matrices,
* ``qp``       -- the quadratic/cubic second-structure bracket on (Q_n, P_n),
                  open or periodic (periodic Kronecker deltas read mod N),
* ``darboux``  -- canonical pairs (g_n, h_n) with {g_n, h_n} = g_n h_n.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

from .ring import DEFAULT_REGISTRY, Scalar, ScalarFraction, VarRegistry
from .ring import _key_mul  # sparse exponent-vector merge

__all__ = ["Chart", "PoissonElem", "make_chart", "build_classical"]


# Componentwise coefficients of the rational exchange structure on the
# doublet basis (11, 12, 21, 22): r_plus for first site > second site,
# r_minus for first < second, their mean at equal sites.
_R_PLUS = [
    [Fraction(1), 0, 0, 0],
    [0, Fraction(-1), Fraction(4), 0],
    [0, 0, Fraction(-1), 0],
    [0, 0, 0, Fraction(1)],
]
_R_MINUS = [
    [Fraction(-1), 0, 0, 0],
    [0, Fraction(1), 0, 0],
    [0, Fraction(-4), Fraction(1), 0],
    [0, 0, 0, Fraction(-1)],
]


class Chart:
    """Generators plus a frozen antisymmetric bracket table."""

    def __init__(self, kind: str, size: int, periodic: bool,
                 registry: VarRegistry = DEFAULT_REGISTRY):
        self.kind = kind
        self.size = size
        self.periodic = periodic
        self.registry = registry
        self.gen_names: list[str] = []
        self._gen_index: dict[str, int] = {}
        self._gen_indices: set[int] = set()
        self._table: dict[tuple[int, int], Scalar] = {}

    def _add_gen(self, name: str) -> int:
        idx = self.registry.add(name)
        self.gen_names.append(name)
        self._gen_index[name] = idx
        self._gen_indices.add(idx)
        return idx

    def _set_bracket(self, g1: str, g2: str, value: Scalar) -> None:
        i, j = self.registry.index(g1), self.registry.index(g2)
        if i == j:
            raise ValueError("diagonal bracket entries are identically zero")
        if i > j:
            i, j, value = j, i, -value
        if not value.is_zero():
            self._table[(i, j)] = value

    def table(self, i: int, j: int) -> Scalar | None:
        """Bracket of two generator variables by registry index (None if zero)."""
        if i == j:
            return None
        if i < j:
            return self._table.get((i, j))
        v = self._table.get((j, i))
        return None if v is None else -v

    def is_generator(self, idx: int) -> bool:
        return idx in self._gen_indices

    # -- element constructors ------------------------------------------------

    def gen(self, name: str, power: int = 1) -> "PoissonElem":
        if name not in self._gen_index:
            raise KeyError(f"{name!r} is not a generator of this chart")
        return PoissonElem(self, ScalarFraction(Scalar.var(name, power, registry=self.registry)))

    def const(self, value) -> "PoissonElem":
        return PoissonElem(self, ScalarFraction(Scalar.const(value, self.registry)))

    def from_scalar(self, s: Scalar) -> "PoissonElem":
        return PoissonElem(self, ScalarFraction(s))

    def zero(self) -> "PoissonElem":
        return PoissonElem(self, ScalarFraction(Scalar.zero(self.registry)))

    # -- the bracket ----------------------------------------------------------

    def poly_bracket(self, p: Scalar, q: Scalar) -> Scalar:
        """Bracket of two Laurent polynomials via the Leibniz monomial rule."""
        gens = self._gen_indices
        out = Scalar.zero(self.registry)
        for k1, c1 in p.terms.items():
            e1 = [(v, e) for v, e in k1 if v in gens]
            if not e1:
                continue
            for k2, c2 in q.terms.items():
                e2 = [(v, e) for v, e in k2 if v in gens]
                if not e2:
                    continue
                base = _key_mul(k1, k2)
                for vi, ei in e1:
                    for vj, ej in e2:
                        t = self.table(vi, vj)
                        if t is None:
                            continue
                        key = _key_mul(base, ((vi, -1),))
                        key = _key_mul(key, ((vj, -1),))
                        mono = Scalar({key: c1 * c2 * ei * ej}, self.registry)
                        out = out + mono * t
        return out

    def bracket(self, f: "PoissonElem", g: "PoissonElem") -> "PoissonElem":
        """Bracket of fractions via the quotient rule over a common denominator."""
        if f.chart is not self or g.chart is not self:
            raise ValueError("elements from a different chart")
        a, b = f.value.num, f.value.den
        c, d = g.value.num, g.value.den
        pb = self.poly_bracket
        num = (pb(a, c) * b * d - pb(a, d) * c * b
               - pb(b, c) * a * d + pb(b, d) * a * c)
        den = b * b * d * d
        return PoissonElem(self, ScalarFraction(num, den))

    def __repr__(self):
        return f"Chart({self.kind!r}, size={self.size}, periodic={self.periodic})"


class PoissonElem:
    """A phase-space function: fraction of Laurent polynomials on a chart."""

    __slots__ = ("chart", "value")

    def __init__(self, chart: Chart, value: ScalarFraction):
        self.chart = chart
        self.value = value

    def _coerce(self, other) -> "PoissonElem":
        if isinstance(other, PoissonElem):
            if other.chart is not self.chart:
                raise ValueError("mixing elements of different charts")
            return other
        if isinstance(other, (int, Fraction)):
            return self.chart.const(other)
        if isinstance(other, Scalar):
            return self.chart.from_scalar(other)
        if isinstance(other, ScalarFraction):
            return PoissonElem(self.chart, other)
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return PoissonElem(self.chart, self.value + o.value)

    __radd__ = __add__

    def __neg__(self):
        return PoissonElem(self.chart, -self.value)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return PoissonElem(self.chart, self.value * o.value)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return PoissonElem(self.chart, self.value / o.value)

    def __pow__(self, n: int):
        if n < 0:
            return PoissonElem(self.chart, ScalarFraction(self.value.den, self.value.num)) ** (-n)
        out = self.chart.const(1)
        for _ in range(n):
            out = out * self
        return out

    def bracket(self, other: "PoissonElem") -> "PoissonElem":
        return self.chart.bracket(self, other)

    def is_zero(self) -> bool:
        return self.value.is_zero()

    def zero_like(self) -> "PoissonElem":
        return self.chart.zero()

    def num_terms(self) -> int:
        return len(self.value.num.terms)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.value == o.value

    def __hash__(self):
        raise TypeError("PoissonElem is not hashable")

    def to_text(self) -> str:
        return self.value.to_text()

    def __repr__(self):
        return f"PoissonElem({self.to_text()})"


def make_chart(kind: str, size: int, periodic: bool = False,
               registry: VarRegistry = DEFAULT_REGISTRY) -> Chart:
    if size < 2:
        raise ValueError("charts need at least two sites")
    if kind == "exlat":
        if periodic:
            raise ValueError("the exchange-doublet chart is defined on open chains")
        return _make_exlat(size, registry)
    if kind == "qp":
        return _make_qp(size, periodic, registry)
    if kind == "darboux":
        if periodic:
            raise ValueError("the canonical-pair chart is defined on open chains")
        return _make_darboux(size, registry)
    raise ValueError(f"unknown chart kind {kind!r}")


def _make_exlat(size: int, registry: VarRegistry) -> Chart:
    chart = Chart("exlat", size, False, registry)
    for n in range(1, size + 1):
        chart._add_gen(f"xi1_{n}")
        chart._add_gen(f"xi2_{n}")

    def xi(n: int, comp: int) -> Scalar:
        return Scalar.var(f"xi{comp}_{n}", registry=registry)

    for n in range(1, size + 1):
        for m in range(1, n + 1):
            if n > m:
                struct = _R_PLUS
            else:
                struct = [[(_R_PLUS[i][j] + _R_MINUS[i][j]) / 2 for j in range(4)]
                          for i in range(4)]
            for a in (1, 2):
                for b in (1, 2):
                    if n == m and a >= b:
                        continue  # store upper pairs only; diagonal is zero
                    col = 2 * (a - 1) + (b - 1)
                    val = Scalar.zero(registry)
                    for ap in (1, 2):
                        for bp in (1, 2):
                            coeff = struct[2 * (ap - 1) + (bp - 1)][col]
                            if coeff:
                                val = val + Scalar.const(coeff, registry) * xi(n, ap) * xi(m, bp)
                    chart._set_bracket(f"xi{a}_{n}", f"xi{b}_{m}", val)
    return chart


def _make_qp(size: int, periodic: bool, registry: VarRegistry) -> Chart:
    chart = Chart("qp", size, periodic, registry)
    for n in range(1, size + 1):
        chart._add_gen(f"Q{n}")
        chart._add_gen(f"P{n}")

    def delta(a: int, b: int) -> int:
        if periodic:
            return 1 if (a - b) % size == 0 else 0
        return 1 if a == b else 0

    def Q(n: int) -> Scalar:
        return Scalar.var(f"Q{n}", registry=registry)

    def P(n: int) -> Scalar:
        return Scalar.var(f"P{n}", registry=registry)

    rng = range(1, size + 1)
    for n in rng:
        for m in rng:
            cqq = delta(n + 1, m) - delta(n, m + 1)
            if cqq and n < m:
                chart._set_bracket(f"Q{n}", f"Q{m}", Scalar.const(cqq, registry) * Q(n) * Q(m))
            cqp = -2 * (delta(n, m) - delta(n + 1, m))
            if cqp:
                chart._set_bracket(f"Q{n}", f"P{m}", Scalar.const(cqp, registry) * Q(n) * P(m))
            if n < m:
                val = (Scalar.const(-4 * delta(n, m + 1), registry) * Q(m) * Q(m)
                       + Scalar.const(4 * delta(n + 1, m), registry) * Q(n) * Q(n))
                if not val.is_zero():
                    chart._set_bracket(f"P{n}", f"P{m}", val)
    return chart


def _make_darboux(size: int, registry: VarRegistry) -> Chart:
    chart = Chart("darboux", size, False, registry)
    for n in range(1, size + 1):
        chart._add_gen(f"g{n}")
        chart._add_gen(f"h{n}")
    for n in range(1, size + 1):
        chart._set_bracket(f"g{n}", f"h{n}",
                           Scalar.var(f"g{n}", registry=registry)
                           * Scalar.var(f"h{n}", registry=registry))
    return chart


# -- lattice fields ------------------------------------------------------------


def build_classical(symbol: str, n: int, chart: Chart) -> PoissonElem:
    """Construct the named phase-space function at site n."""
    if symbol == "W1":
        return _wronskian(chart, n, 1)
    if symbol == "W2":
        return _wronskian(chart, n, 2)
    if symbol == "S":
        w = lambda k, p: _wronskian(chart, k, p)
        return 4 * w(n + 1, 1) * w(n - 1, 1) / (w(n, 2) * w(n - 1, 2))
    if symbol == "Q":
        return chart.const(1) / _wronskian(chart, n, 1)
    if symbol == "P":
        return _wronskian(chart, n - 1, 2) / (_wronskian(chart, n - 1, 1) * _wronskian(chart, n, 1))
    if symbol == "xi1_darboux":
        elem = chart.gen(f"g{n}", -1)
        for a in range(1, n + 1):
            elem = elem * chart.gen(f"h{a}")
        return elem
    if symbol == "xi2_darboux":
        total = chart.zero()
        for a in range(1, n + 1):
            term = chart.gen(f"g{a}", 2)
            for b in range(a, n + 1):
                term = term * chart.gen(f"h{b}")
            for b in range(1, a):
                term = term * chart.gen(f"h{b}", -1)
            total = total + term
        return chart.gen(f"g{n}", -1) * total
    if symbol == "repQ2":
        return (chart.gen(f"h{n + 1}", -2) * chart.gen(f"g{n}", 2)
                * chart.gen(f"g{n + 1}", -2))
    if symbol == "repP":
        return (chart.gen(f"h{n}", -2)
                + chart.gen(f"g{n}", 2) * chart.gen(f"g{n + 1}", -2))
    raise ValueError(f"unknown classical symbol {symbol!r}")


def _wronskian(chart: Chart, n: int, p: int) -> PoissonElem:
    if chart.kind != "exlat":
        raise ValueError("lattice Wronskians live on the exchange-doublet chart")
    return (chart.gen(f"xi1_{n}") * chart.gen(f"xi2_{n + p}")
            - chart.gen(f"xi2_{n}") * chart.gen(f"xi1_{n + p}"))


# -- identity suites -----------------------------------------------------------


def _delta(chart: Chart, a: int, b: int) -> int:
    if chart.periodic:
        return 1 if (a - b) % chart.size == 0 else 0
    return 1 if a == b else 0


def residuals_w1w1(chart: Chart, window) -> list[tuple[str, PoissonElem]]:
    out = []
    w = lambda k: _wronskian(chart, k, 1)
    for n in window:
        for m in window:
            lhs = chart.bracket(w(n), w(m))
            rhs = w(n) * w(m) * (_delta(chart, n, m - 1) - _delta(chart, n, m + 1))
            out.append((f"(n={n},m={m})", lhs - rhs))
    return out


def residuals_w1w2(chart: Chart, window) -> list[tuple[str, PoissonElem]]:
    out = []
    for n in window:
        for m in window:
            w1n = _wronskian(chart, n, 1)
            w2m = _wronskian(chart, m, 2)
            lhs = chart.bracket(w1n, w2m)
            coeff = (_delta(chart, n, m + 1) - _delta(chart, n, m + 2)
                     + _delta(chart, n, m - 1) - _delta(chart, n, m))
            out.append((f"(n={n},m={m})", lhs - w1n * w2m * coeff))
    return out


def residuals_w2w2(chart: Chart, window) -> list[tuple[str, PoissonElem]]:
    out = []
    w = lambda k, p: _wronskian(chart, k, p)
    for n in window:
        for m in window:
            lhs = chart.bracket(w(n, 2), w(m, 2))
            coeff = (_delta(chart, n, m - 2) - _delta(chart, n, m + 2)
                     + 2 * _delta(chart, n, m + 1) - 2 * _delta(chart, n, m - 1))
            rhs = w(n, 2) * w(m, 2) * coeff
            if _delta(chart, n, m + 1):
                rhs = rhs - 4 * w(n - 1, 1) * w(n + 1, 1)
            if _delta(chart, n, m - 1):
                rhs = rhs + 4 * w(m - 1, 1) * w(m + 1, 1)
            out.append((f"(n={n},m={m})", lhs - rhs))
    return out


def residuals_virlat(chart: Chart, window) -> list[tuple[str, PoissonElem]]:
    """Closure of the cubic subalgebra and its decoupling from the Wronskians."""
    out = []
    S = {k: build_classical("S", k, chart) for k in
         range(min(window) - 1, max(window) + 1)}
    for n in window:
        for m in window:
            lhs = chart.bracket(S[n], S[m])
            bump = _delta(chart, n, m - 1) - _delta(chart, n, m + 1)
            inner = (4 - S[n] - S[m]) * bump
            if _delta(chart, n, m + 2):
                inner = inner + S[n - 1]
            if _delta(chart, n, m - 2):
                inner = inner - S[m - 1]
            rhs = -(S[n] * S[m] * inner)
            out.append((f"SS(n={n},m={m})", lhs - rhs))
    for n in window:
        for m in window:
            w1n = _wronskian(chart, n, 1)
            out.append((f"W1S(n={n},m={m})", chart.bracket(w1n, S[m])))
            qn = build_classical("Q", n, chart)
            out.append((f"QS(n={n},m={m})", chart.bracket(qn, S[m])))
    return out


def residuals_qp_algebra(which: str, chart: Chart, window,
                         q_of=None, p_of=None) -> list[tuple[str, PoissonElem]]:
    """Residuals of the closed Q/P bracket relations.

    ``q_of``/``p_of`` supply the realisation (defaults: the chart's own
    Q, P generators on a qp chart).
    """
    if q_of is None:
        q_of = lambda k: chart.gen(f"Q{k}")
    if p_of is None:
        p_of = lambda k: chart.gen(f"P{k}")
    out = []
    for n in window:
        for m in window:
            if which == "qq":
                lhs = chart.bracket(q_of(n), q_of(m))
                rhs = q_of(n) * q_of(m) * (_delta(chart, n + 1, m) - _delta(chart, n, m + 1))
            elif which == "qp":
                lhs = chart.bracket(q_of(n), p_of(m))
                rhs = -2 * q_of(n) * p_of(m) * (_delta(chart, n, m) - _delta(chart, n + 1, m))
            elif which == "pp":
                lhs = chart.bracket(p_of(n), p_of(m))
                rhs = (-4 * q_of(m) ** 2 * _delta(chart, n, m + 1)
                       + 4 * q_of(n) ** 2 * _delta(chart, n + 1, m))
            else:
                raise ValueError(which)
            out.append((f"(n={n},m={m})", lhs - rhs))
    return out


def residuals_qp_squared(which: str, chart: Chart, window,
                         q2_of, p_of) -> list[tuple[str, PoissonElem]]:
    """Same relations expressed through Q^2 where only Q^2 is realised."""
    out = []
    for n in window:
        for m in window:
            if which == "qq":
                lhs = chart.bracket(q2_of(n), q2_of(m))
                rhs = 4 * q2_of(n) * q2_of(m) * (_delta(chart, n + 1, m) - _delta(chart, n, m + 1))
            elif which == "qp":
                lhs = chart.bracket(q2_of(n), p_of(m))
                rhs = -4 * q2_of(n) * p_of(m) * (_delta(chart, n, m) - _delta(chart, n + 1, m))
            elif which == "pp":
                lhs = chart.bracket(p_of(n), p_of(m))
                rhs = (-4 * q2_of(m) * _delta(chart, n, m + 1)
                       + 4 * q2_of(n) * _delta(chart, n + 1, m))
            else:
                raise ValueError(which)
            out.append((f"(n={n},m={m})", lhs - rhs))
    return out


def residuals_exlat_from_darboux(chart: Chart) -> list[tuple[str, PoissonElem]]:
    """Check the doublet exchange bracket on the canonical-pair realisation."""
    xi = {}
    for n in range(1, chart.size + 1):
        xi[(n, 1)] = build_classical("xi1_darboux", n, chart)
        xi[(n, 2)] = build_classical("xi2_darboux", n, chart)
    out = []
    for n in range(1, chart.size + 1):
        for m in range(1, n + 1):
            if n > m:
                struct = _R_PLUS
            else:
                struct = [[(_R_PLUS[i][j] + _R_MINUS[i][j]) / 2 for j in range(4)]
                          for i in range(4)]
            for a in (1, 2):
                for b in (1, 2):
                    lhs = chart.bracket(xi[(n, a)], xi[(m, b)])
                    rhs = chart.zero()
                    col = 2 * (a - 1) + (b - 1)
                    for ap in (1, 2):
                        for bp in (1, 2):
                            coeff = struct[2 * (ap - 1) + (bp - 1)][col]
                            if coeff:
                                rhs = rhs + coeff * xi[(n, ap)] * xi[(m, bp)]
                    out.append((f"(n={n},m={m},a={a},b={b})", lhs - rhs))
    return out


def residuals_jacobi(chart: Chart) -> list[tuple[str, PoissonElem]]:
    """Jacobi identity on all generator triples of the chart."""
    out = []
    gens = [chart.gen(name) for name in chart.gen_names]
    labels = chart.gen_names
    for (i, f), (j, g), (k, h) in combinations(enumerate(gens), 3):
        acc = (chart.bracket(f, chart.bracket(g, h))
               + chart.bracket(g, chart.bracket(h, f))
               + chart.bracket(h, chart.bracket(f, g)))
        out.append((f"({labels[i]},{labels[j]},{labels[k]})", acc))
    return out


# -- named checks ----------------------------------------------------------------


def check_bracket_identity(check_id: str, size: int = 8,
                           registry: VarRegistry = DEFAULT_REGISTRY,
                           mutate: bool = False):
    """Run one classical bracket suite and summarise it as a CheckReport.

    ``mutate`` deliberately corrupts the identity under test (a flipped
    delta sign) so the surrounding plumbing can prove it detects failures.
    """
    from .reports import report_from_residuals

    params = {"size": size}
    if check_id in ("w1w1", "w1w2", "w2w2", "virlat", "qq", "qp", "pp"):
        if size < 8:
            raise ValueError("the open-chain suites need at least 8 sites")
        chart = make_chart("exlat", size, registry=registry)
        if check_id == "w1w1":
            items = residuals_w1w1(chart, range(2, size - 1))
            if mutate:
                w = _wronskian(chart, 2, 1)
                items = [("mutated", chart.bracket(w, _wronskian(chart, 3, 1))
                          + w * _wronskian(chart, 3, 1))] + items
        elif check_id == "w1w2":
            items = residuals_w1w2(chart, range(2, size - 2))
        elif check_id == "w2w2":
            items = residuals_w2w2(chart, range(3, size - 1))
        elif check_id == "virlat":
            items = residuals_virlat(chart, range(3, size - 1))
        else:
            qof = lambda k: build_classical("Q", k, chart)
            pof = lambda k: build_classical("P", k, chart)
            items = residuals_qp_algebra(check_id, chart, range(2, size),
                                         q_of=qof, p_of=pof)
        return report_from_residuals(check_id, params, _ANCHORS[check_id], items)

    if check_id == "exlat_from_darboux":
        chart = make_chart("darboux", min(size, 6), registry=registry)
        items = residuals_exlat_from_darboux(chart)
        return report_from_residuals(check_id, {"size": chart.size},
                                     _ANCHORS[check_id], items)

    if check_id == "qp_from_rep":
        chart = make_chart("darboux", min(size, 6), registry=registry)
        q2of = lambda k: build_classical("repQ2", k, chart)
        pof = lambda k: build_classical("repP", k, chart)
        items = []
        for which in ("qq", "qp", "pp"):
            items += [(f"{which}{lab}", r) for lab, r in residuals_qp_squared(
                which, chart, range(1, chart.size), q2_of=q2of, p_of=pof)]
        return report_from_residuals(check_id, {"size": chart.size},
                                     _ANCHORS[check_id], items)

    if check_id == "jacobi":
        items = []
        for kind, n, per in (("exlat", 4, False), ("qp", 3, True),
                             ("qp", 2, True), ("darboux", 4, False)):
            chart = make_chart(kind, n, per, registry=registry)
            items += [(f"{kind}/N={n}{lab}", r) for lab, r in residuals_jacobi(chart)]
        return report_from_residuals(check_id, {"charts": "exlat,qp,darboux"},
                                     _ANCHORS[check_id], items)

    raise ValueError(f"unknown bracket identity {check_id!r}")


_ANCHORS = {
    "w1w1": "adjacent-step Wronskian brackets close quadratically",
    "w1w2": "mixed-step Wronskian brackets close quadratically",
    "w2w2": "double-step Wronskian brackets close with quartic tail",
    "virlat": "cubic subalgebra closes and decouples from the Wronskians",
    "qq": "Q-Q bracket recovered from the Wronskian realisation",
    "qp": "Q-P bracket recovered from the Wronskian realisation",
    "pp": "P-P bracket recovered from the Wronskian realisation",
    "exlat_from_darboux": "canonical-pair realisation satisfies the doublet exchange bracket",
    "qp_from_rep": "canonical-pair realisation reproduces the quadratic Q/P brackets",
    "jacobi": "Jacobi identity for every shipped bracket table",
}
