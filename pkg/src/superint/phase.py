"""Per-family phase-space charts and the canonical Poisson bracket.

A Chart owns a Ring whose symbols are the two coordinates, the two
conjugate momenta, transcendental generators (with chain-rule entries
and algebraic relations), and the potential parameters.  A PhaseExpr is
a ring polynomial divided by a product of fixed denominator-basis
elements (e.g. (1+c), (1-c)); no cancellation is ever attempted, so
equality is decided by the cross-multiplied difference being zero.
"""

from __future__ import annotations

import cmath
from fractions import Fraction

from .kernel import add_into
from .rings import (AlgebraError, InversionError, Poly, Ring,
                    UnknownSymbolError, _normalize, differentiate)
from .scalars import GaussianRational, rat

RAT_ONE = rat(1)


class ChartMismatchError(AlgebraError):
    pass


class DegeneratePointError(AlgebraError):
    """A sample point annihilates a denominator or Laurent symbol."""


class Chart:
    """Symbol chart of one family: coordinates, momenta, generators,
    relations, denominator set, parameters, samplers and numeric maps."""

    def __init__(self, name, ring, coordinates, momenta, generators, parameters,
                 denominator_basis, k, sample_fn, numeric_fn):
        self.name = name
        self.ring = ring
        self.coordinates = tuple(coordinates)
        self.momenta = tuple(momenta)
        self.generators = tuple(generators)
        self.parameters = tuple(parameters)
        self.denominator_basis = list(denominator_basis)
        self.k = k
        self._sample_fn = sample_fn
        self._numeric_fn = numeric_fn
        self.pairs = tuple(zip(self.coordinates, self.momenta))
        self.momentum_indices = tuple(ring.index[m] for m in momenta)
        self._den_pows = {}
        self._den_derivs = {}
        self._zero_den = (0,) * len(self.denominator_basis)

    # -- expression constructors ----------------------------------------

    def zero(self):
        return PhaseExpr(self, self.ring.zero(), self._zero_den)

    def one(self):
        return PhaseExpr(self, self.ring.one(), self._zero_den)

    def expr(self, value, den=None):
        """Wrap a Poly (or scalar, or symbol name) as a PhaseExpr."""
        if isinstance(value, PhaseExpr):
            return value
        if isinstance(value, str):
            value = self.ring.sym(value)
        if not isinstance(value, Poly):
            value = self.ring.const(value)
        if value.ring is not self.ring:
            raise ChartMismatchError("polynomial from a different ring")
        return PhaseExpr(self, value, self._zero_den if den is None else tuple(den))

    def over(self, poly, *den_slots):
        """poly / product of denominator-basis elements at the given slots."""
        den = list(self._zero_den)
        for slot in den_slots:
            den[slot] += 1
        return self.expr(poly, den)

    # -- denominator bookkeeping ------------------------------------------

    def den_pow(self, slot, m):
        if m == 0:
            return self.ring.one()
        cached = self._den_pows.get((slot, m))
        if cached is None:
            cached = self.denominator_basis[slot] ** m
            self._den_pows[(slot, m)] = cached
        return cached

    def den_deriv(self, slot, v):
        key = (slot, v)
        if key not in self._den_derivs:
            d = differentiate(self.denominator_basis[slot], v)
            self._den_derivs[key] = None if d.is_zero() else d
        return self._den_derivs[key]

    # -- sampling and numerics ---------------------------------------------

    def sample_point(self, rng):
        """Exact rational symbol values satisfying all chart relations,
        with every denominator-basis element and Laurent symbol nonzero."""
        return self._sample_fn(self, rng)

    def numeric_symbol_values(self, state, params):
        """Complex symbol values from a phase-space state (x1, x2, p1, p2)."""
        return self._numeric_fn(self, state, params)

    def __repr__(self):
        return f"Chart({self.name}, k={self.k})"


class PhaseExpr:
    """numerator / product of chart denominator-basis powers."""

    __slots__ = ("chart", "num", "den")

    def __init__(self, chart, num, den):
        self.chart = chart
        self.num = num
        self.den = den

    def _coerce(self, other):
        if isinstance(other, PhaseExpr):
            if other.chart is not self.chart:
                raise ChartMismatchError("operands live on different charts")
            return other
        return self.chart.expr(other)

    def _aligned(self, other):
        den = tuple(max(a, b) for a, b in zip(self.den, other.den))
        na, nb = self.num, other.num
        for slot, m in enumerate(den):
            da, db = m - self.den[slot], m - other.den[slot]
            if da:
                na = na * self.chart.den_pow(slot, da)
            if db:
                nb = nb * self.chart.den_pow(slot, db)
        return na, nb, den

    def __add__(self, other):
        other = self._coerce(other)
        na, nb, den = self._aligned(other)
        return PhaseExpr(self.chart, na + nb, den)

    __radd__ = __add__

    def __neg__(self):
        return PhaseExpr(self.chart, -self.num, self.den)

    def __sub__(self, other):
        other = self._coerce(other)
        na, nb, den = self._aligned(other)
        return PhaseExpr(self.chart, na - nb, den)

    def __rsub__(self, other):
        return self._coerce(other).__sub__(self)

    def __mul__(self, other):
        if isinstance(other, PhaseExpr):
            if other.chart is not self.chart:
                raise ChartMismatchError("operands live on different charts")
            return PhaseExpr(self.chart, self.num * other.num,
                             tuple(a + b for a, b in zip(self.den, other.den)))
        return PhaseExpr(self.chart, self.num * other, self.den)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise InversionError("negative power of a phase expression")
        out = self.chart.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            if n > 1:
                base = PhaseExpr(self.chart, base.num.square(),
                                 tuple(2 * m for m in base.den))
            n >>= 1
        return out

    def diff(self, v):
        """Exact partial derivative, quotient rule through denominators."""
        chart = self.chart
        dnum = differentiate(self.num, v)
        active = [slot for slot, m in enumerate(self.den) if m > 0]
        if not active:
            return PhaseExpr(chart, dnum, self.den)
        full = None
        for slot in active:
            dp = chart.den_pow(slot, 1)
            full = dp if full is None else full * dp
        out = dnum * full
        for slot in active:
            dd = chart.den_deriv(slot, v)
            if dd is None:
                continue
            rest = None
            for other in active:
                if other == slot:
                    continue
                dp = chart.den_pow(other, 1)
                rest = dp if rest is None else rest * dp
            piece = self.num * dd * self.den[slot]
            if rest is not None:
                piece = piece * rest
            out = out - piece
        den = tuple(m + 1 if m > 0 else 0 for m in self.den)
        return PhaseExpr(chart, out, den)

    def is_zero(self):
        return self.num.is_zero()

    def equals(self, other):
        try:
            return (self - other).is_zero()
        except (TypeError, ValueError):
            return NotImplemented

    __eq__ = equals

    def __hash__(self):
        return hash((id(self.chart), self.num))

    def evaluate(self, values):
        """Exact value at a sample point (list of GaussianRational)."""
        total = self.num.evaluate(values)
        for slot, m in enumerate(self.den):
            if not m:
                continue
            dval = self.chart.denominator_basis[slot].evaluate(values)
            if not dval:
                raise DegeneratePointError(
                    f"denominator {slot} vanishes at sample point")
            total = total / dval ** m
        return total

    def momentum_degree(self):
        """Max total degree in the momenta (denominators are momentum-free)."""
        idxs = self.chart.momentum_indices
        if self.num.is_zero():
            return 0
        return max(sum(key[j] for j in idxs) for key in self.num.terms)

    def __repr__(self):
        den = ""
        for slot, m in enumerate(self.den):
            if m:
                den += f" / ({self.chart.denominator_basis[slot]})^{m}"
        return f"({self.num}){den}"


def poisson_bracket(F, G):
    """Canonical bracket {F, G} = sum_j dF/dx_j dG/dp_j - dF/dp_j dG/dx_j."""
    if not isinstance(F, PhaseExpr) or not isinstance(G, PhaseExpr):
        raise ChartMismatchError("bracket arguments must be phase expressions")
    if F.chart is not G.chart:
        raise ChartMismatchError("bracket arguments live on different charts")
    out = F.chart.zero()
    for x, p in F.chart.pairs:
        out = out + (F.diff(x) * G.diff(p) - F.diff(p) * G.diff(x))
    return out


def substitute(p, images, chart):
    """Ring homomorphism sending the keys of ``images`` to phase
    expressions on ``chart``; all other symbols map to their same-named
    chart symbols.  Returns a PhaseExpr.

    Terms are grouped by the exponents of the substituted symbols so
    each image power is expanded exactly once.
    """
    ring = p.ring
    target = chart.ring
    rep = {}
    for name, img in images.items():
        idx = ring.index.get(name)
        if idx is None:
            raise UnknownSymbolError(f"{name} not in ring {ring.name}")
        rep[idx] = chart.expr(img)
    remap = []
    for j, name in enumerate(ring.symbols):
        if j in rep:
            remap.append(None)
        else:
            remap.append(target.index.get(name))
    rep_order = sorted(rep)

    groups = {}
    for key, coeff in p.terms.items():
        rkey = tuple(key[j] for j in rep_order)
        tkey = [0] * target.nsyms
        for j, e in enumerate(key):
            if not e or j in rep:
                continue
            dst = remap[j]
            if dst is None:
                raise UnknownSymbolError(
                    f"{ring.symbols[j]} has no image in chart {chart.name}")
            tkey[dst] = e
        add_into(groups.setdefault(rkey, {}), {tuple(tkey): coeff})

    pow_cache = {}

    def image_power(j, e):
        cached = pow_cache.get((j, e))
        if cached is not None:
            return cached
        img = rep[j]
        if e >= 0:
            out = img ** e
        else:
            out = _invert_image(img, chart) ** (-e)
        pow_cache[(j, e)] = out
        return out

    result = chart.zero()
    for rkey, terms in groups.items():
        base = PhaseExpr(chart, Poly(target, _normalize(target, terms)),
                         chart._zero_den)
        for j, e in zip(rep_order, rkey):
            if e:
                base = base * image_power(j, e)
        result = result + base
    return result


def _invert_image(img, chart):
    """Invert a substitution image; only monomial units are invertible."""
    if any(img.den):
        raise InversionError("cannot invert an image with denominators")
    terms = img.num.terms
    if len(terms) != 1:
        raise InversionError("Laurent power of a symbol with non-monomial image")
    key, coeff = next(iter(terms))
    ring = chart.ring
    inv_key = [0] * len(key)
    inv_coeff = 1 / coeff
    for j, e in enumerate(key):
        if not e:
            continue
        if j == 0:
            # i^(-e) = (-1)^e i^e
            inv_key[0] = e
            if e % 2:
                inv_coeff = -inv_coeff
            continue
        if e > 0 and j not in ring.laurent:
            raise InversionError(f"{ring.symbols[j]} is not invertible")
        inv_key[j] = -e
    inv = Poly(ring, _normalize(ring, {tuple(inv_key): inv_coeff}))
    return PhaseExpr(chart, inv, chart._zero_den)


# ---------------------------------------------------------------------------
# chart construction for the five families
# ---------------------------------------------------------------------------

def _rand_rat(rng):
    return rat(rng.randint(-1000, 1000), rng.randint(1, 1000))


def _rand_nonzero(rng):
    while True:
        r = rat(rng.randint(-1000, 1000), rng.randint(1, 1000))
        if r:
            return GaussianRational(r)


def _rand_gr(rng):
    return GaussianRational(_rand_rat(rng))


def _circle_values(rng, exclude_zero=False, exclude_unit=False):
    """Exact rational point (cos, sin) on the unit circle via the
    tangent-half parametrization c = (1-t^2)/(1+t^2), s = 2t/(1+t^2)."""
    while True:
        t = _rand_rat(rng)
        if t == 0 and exclude_zero:
            continue
        if exclude_unit and (t == 1 or t == -1):
            continue
        break
    d = 1 + t * t
    return GaussianRational((1 - t * t) / d), GaussianRational((t + t) / d)


def _hyperbola_values(rng):
    """Exact rational point (cosh, sinh): C = (1+u^2)/(1-u^2), Sh = 2u/(1-u^2)
    with u not in {0, 1, -1} so that C-1 and the parametrization stay regular."""
    while True:
        u = _rand_rat(rng)
        if u != 0 and u != 1 and u != -1:
            break
    d = 1 - u * u
    return GaussianRational((1 + u * u) / d), GaussianRational((u + u) / d)


def _base_sample(chart, rng):
    """Coordinates, momenta free; parameters nonzero; i handled by evaluate."""
    ring = chart.ring
    values = [None] * ring.nsyms
    for name in chart.coordinates + chart.momenta:
        values[ring.index[name]] = _rand_gr(rng)
    for name in chart.parameters:
        values[ring.index[name]] = _rand_nonzero(rng)
    return values


def _sample_ttw(chart, rng):
    ring = chart.ring
    values = _base_sample(chart, rng)
    values[ring.index["E"]] = _rand_nonzero(rng)
    # t=0 would put the point on the 1-c = 0 locus
    c, s = _circle_values(rng, exclude_zero=True)
    values[ring.index["c"]], values[ring.index["s"]] = c, s
    return values


def _sample_coulomb(chart, rng):
    ring = chart.ring
    values = _base_sample(chart, rng)
    values[ring.index["rho"]] = _rand_nonzero(rng)
    values[ring.index["w"]] = _rand_nonzero(rng)
    return values


def _sample_sphere(chart, rng):
    ring = chart.ring
    values = _base_sample(chart, rng)
    values[ring.index["t"]] = _rand_gr(rng)
    # t=+-1 would put the point on the cphi = 0 locus
    c, s = _circle_values(rng, exclude_unit=True)
    values[ring.index["cphi"]], values[ring.index["sphi"]] = c, s
    return values


def _sample_generic(chart, rng):
    ring = chart.ring
    values = _base_sample(chart, rng)
    c, s = _circle_values(rng, exclude_zero=True)
    values[ring.index["c"]], values[ring.index["s"]] = c, s
    C, Sh = _hyperbola_values(rng)
    values[ring.index["C"]], values[ring.index["Sh"]] = C, Sh
    return values


def _sample_oscillator(chart, rng):
    ring = chart.ring
    values = _base_sample(chart, rng)
    values[ring.index["x"]] = _rand_nonzero(rng)
    values[ring.index["y"]] = _rand_nonzero(rng)
    return values


def _numeric_common(chart, state, params):
    ring = chart.ring
    values = [0j] * ring.nsyms
    values[0] = 1j
    x1, x2, p1, p2 = state
    values[ring.index[chart.coordinates[0]]] = x1
    values[ring.index[chart.coordinates[1]]] = x2
    values[ring.index[chart.momenta[0]]] = p1
    values[ring.index[chart.momenta[1]]] = p2
    for name in chart.parameters:
        values[ring.index[name]] = complex(params[name])
    return values


def _numeric_ttw(chart, state, params):
    values = _numeric_common(chart, state, params)
    ring = chart.ring
    R, theta = state[0], state[1]
    kf = complex(Fraction(chart.k.numerator, chart.k.denominator))
    values[ring.index["E"]] = cmath.exp(2 * R)
    values[ring.index["c"]] = cmath.cos(2 * kf * theta)
    values[ring.index["s"]] = cmath.sin(2 * kf * theta)
    return values


def _numeric_coulomb(chart, state, params):
    values = _numeric_common(chart, state, params)
    ring = chart.ring
    R, theta = state[0], state[1]
    kf = complex(Fraction(chart.k.numerator, chart.k.denominator))
    values[ring.index["rho"]] = cmath.exp(R)
    values[ring.index["w"]] = cmath.exp(1j * kf * theta)
    return values


def _numeric_sphere(chart, state, params):
    values = _numeric_common(chart, state, params)
    ring = chart.ring
    theta, phi = state[0], state[1]
    kf = complex(Fraction(chart.k.numerator, chart.k.denominator))
    values[ring.index["t"]] = cmath.cos(theta) / cmath.sin(theta)
    values[ring.index["cphi"]] = cmath.cos(kf * phi)
    values[ring.index["sphi"]] = cmath.sin(kf * phi)
    return values


def _numeric_generic(chart, state, params):
    values = _numeric_common(chart, state, params)
    ring = chart.ring
    psi, phi = state[0], state[1]
    kf = complex(Fraction(chart.k.numerator, chart.k.denominator))
    values[ring.index["C"]] = cmath.cosh(2 * psi)
    values[ring.index["Sh"]] = cmath.sinh(2 * psi)
    values[ring.index["c"]] = cmath.cos(2 * kf * phi)
    values[ring.index["s"]] = cmath.sin(2 * kf * phi)
    return values


def _numeric_oscillator(chart, state, params):
    return _numeric_common(chart, state, params)


def chart_for(name, p=1, q=1):
    """The fixed chart of one family, with k = p/q baked into the
    derivative tables as an exact rational."""
    k = rat(p, q)
    if name == "ttw":
        ring = Ring("ttw", ("R", "theta", "pR", "ptheta",
                            "E", "c", "s", "alpha", "beta", "omega"),
                    laurent=("E",))
        ring.add_derivation("E", "R", ring.poly((2, {"E": 1})))
        ring.add_derivation("c", "theta", ring.poly((-2 * k, {"s": 1})))
        ring.add_derivation("s", "theta", ring.poly((2 * k, {"c": 1})))
        ring.rewrites.add("s", 2, ring.poly((1, {}), (-1, {"c": 2})))
        one_plus_c = ring.poly((1, {}), (1, {"c": 1}))
        one_minus_c = ring.poly((1, {}), (-1, {"c": 1}))
        return Chart("ttw", ring, ("R", "theta"), ("pR", "ptheta"),
                     ("E", "c", "s"), ("alpha", "beta", "omega"),
                     [one_plus_c, one_minus_c], k, _sample_ttw, _numeric_ttw)
    if name == "coulomb":
        ring = Ring("coulomb", ("R", "theta", "pR", "ptheta",
                                "rho", "w", "delta"),
                    laurent=("rho", "w"))
        ring.add_derivation("rho", "R", ring.sym("rho"))
        ring.add_derivation("w", "theta", ring.monomial({"i": 1, "w": 1}, k))
        return Chart("coulomb", ring, ("R", "theta"), ("pR", "ptheta"),
                     ("rho", "w"), ("delta",),
                     [], k, _sample_coulomb, _numeric_coulomb)
    if name == "sphere":
        ring = Ring("sphere", ("theta", "phi", "ptheta", "pphi",
                               "t", "cphi", "sphi", "alpha"))
        ring.add_derivation("t", "theta", ring.poly((-1, {}), (-1, {"t": 2})))
        ring.add_derivation("cphi", "phi", ring.poly((-k, {"sphi": 1})))
        ring.add_derivation("sphi", "phi", ring.poly((k, {"cphi": 1})))
        ring.rewrites.add("sphi", 2, ring.poly((1, {}), (-1, {"cphi": 2})))
        return Chart("sphere", ring, ("theta", "phi"), ("ptheta", "pphi"),
                     ("t", "cphi", "sphi"), ("alpha",),
                     [ring.sym("cphi")], k, _sample_sphere, _numeric_sphere)
    if name == "sphere-generic":
        ring = Ring("sphere-generic", ("psi", "phi", "ppsi", "pphi",
                                       "C", "Sh", "c", "s",
                                       "alpha", "beta", "gamma"))
        ring.add_derivation("C", "psi", ring.poly((2, {"Sh": 1})))
        ring.add_derivation("Sh", "psi", ring.poly((2, {"C": 1})))
        ring.add_derivation("c", "phi", ring.poly((-2 * k, {"s": 1})))
        ring.add_derivation("s", "phi", ring.poly((2 * k, {"c": 1})))
        ring.rewrites.add("s", 2, ring.poly((1, {}), (-1, {"c": 2})))
        ring.rewrites.add("Sh", 2, ring.poly((-1, {}), (1, {"C": 2})))
        one_plus_c = ring.poly((1, {}), (1, {"c": 1}))
        one_minus_c = ring.poly((1, {}), (-1, {"c": 1}))
        C_minus_1 = ring.poly((-1, {}), (1, {"C": 1}))
        C_plus_1 = ring.poly((1, {}), (1, {"C": 1}))
        return Chart("sphere-generic", ring, ("psi", "phi"), ("ppsi", "pphi"),
                     ("C", "Sh", "c", "s"), ("alpha", "beta", "gamma"),
                     [one_plus_c, one_minus_c, C_minus_1, C_plus_1], k,
                     _sample_generic, _numeric_generic)
    if name == "oscillator":
        ring = Ring("oscillator", ("x", "y", "px", "py",
                                   "alpha", "beta", "omega"),
                    laurent=("x", "y"))
        return Chart("oscillator", ring, ("x", "y"), ("px", "py"),
                     (), ("alpha", "beta", "omega"),
                     [], k, _sample_oscillator, _numeric_oscillator)
    raise AlgebraError(f"unknown family {name!r}")
