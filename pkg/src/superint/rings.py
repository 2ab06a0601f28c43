"""Sparse multivariate Laurent polynomial rings with rewrite normalization.

A Ring fixes an ordered symbol table.  Symbol 0 is always the imaginary
unit ``i`` carrying the rewrite i^2 -> -1, so internally every
coefficient is a plain exact rational while the ring as a whole is an
algebra over Q(i); GaussianRational is the scalar type at the API
boundary (evaluation, coefficient queries).

Polynomials are dicts mapping exponent tuples to rational coefficients,
kept in a canonical normal form: rewrite rules applied, no zero
coefficients.  Two polynomials are equal iff their term dicts are equal,
which is what makes the exact zero test sound and complete (each ring
used here is an integral domain: a single conic or hyperbola relation,
plus Laurent localizations).

Rewrite rules have the shape  head^threshold -> replacement  where the
replacement never contains any rule head, so one reduction pass is
confluent and terminating.
"""

from __future__ import annotations

from .kernel import add_into, mul_terms, neg_terms, scale_terms, square_terms
from .scalars import GR_ZERO, GaussianRational, rat

RAT_ONE = rat(1)


class AlgebraError(Exception):
    """Base class for exact-algebra errors."""


class UnknownSymbolError(AlgebraError):
    pass


class ExponentError(AlgebraError):
    """Negative exponent on a symbol that is not Laurent-flagged."""


class InversionError(AlgebraError):
    """Laurent power of a substituted symbol with a non-invertible image."""


class Monomial:
    """Exponent-map view of one internal exponent tuple.

    Stores no zero exponents; negative exponents only on Laurent
    symbols (enforced by the owning ring on construction).
    """

    __slots__ = ("ring", "key")

    def __init__(self, ring, key):
        self.ring = ring
        self.key = key

    @property
    def exponents(self):
        syms = self.ring.symbols
        return {syms[j]: e for j, e in enumerate(self.key) if e}

    def degree(self, names=None):
        if names is None:
            return sum(self.key)
        idxs = [self.ring.index[n] for n in names]
        return sum(self.key[j] for j in idxs)

    def __eq__(self, other):
        return isinstance(other, Monomial) and self.ring is other.ring and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        parts = [f"{s}^{e}" if e != 1 else s for s, e in self.exponents.items()]
        return "*".join(parts) if parts else "1"


class RewriteSystem:
    """Ordered list of (symbol, threshold, replacement) reduction rules."""

    def __init__(self, ring):
        self.ring = ring
        self.rules = []          # (symbol name, threshold, replacement Poly)
        self._by_idx = {}        # symbol index -> (threshold, replacement terms)
        self._pow_cache = {}

    def add(self, symbol, threshold, replacement):
        idx = self.ring.index[symbol]
        if idx in self._by_idx:
            raise AlgebraError(f"duplicate rewrite rule for {symbol}")
        terms = replacement.terms if isinstance(replacement, Poly) else dict(replacement)
        for key in terms:
            if key[idx] != 0:
                raise AlgebraError(f"replacement for {symbol} must not contain {symbol}")
        self.rules.append((symbol, threshold, terms))
        self._by_idx[idx] = (threshold, terms)

    def replacement_power(self, idx, m):
        """(replacement of rule at idx)^m, memoized."""
        cached = self._pow_cache.get((idx, m))
        if cached is not None:
            return cached
        if m == 0:
            out = {self.ring.unit_key: RAT_ONE}
        elif m == 1:
            out = self._by_idx[idx][1]
        else:
            half = self.replacement_power(idx, m // 2)
            out = mul_terms(half, half)
            if m % 2:
                out = mul_terms(out, self._by_idx[idx][1])
        self._pow_cache[(idx, m)] = out
        return out


class Ring:
    """Fixed symbol table plus rewrite rules and derivative entries."""

    def __init__(self, name, symbols, laurent=()):
        if "i" in symbols:
            raise AlgebraError("'i' is reserved and added automatically")
        self.name = name
        self.symbols = ("i",) + tuple(symbols)
        self.index = {s: j for j, s in enumerate(self.symbols)}
        self.nsyms = len(self.symbols)
        self.laurent = frozenset(self.index[s] for s in laurent)
        self.unit_key = (0,) * self.nsyms
        self.rewrites = RewriteSystem(self)
        self.rewrites.add("i", 2, {self.unit_key: rat(-1)})
        # (symbol idx, wrt idx) -> terms of d(symbol)/d(wrt), beyond the
        # identity d(sym)/d(sym) = 1 which is implicit
        self._derivs = {}
        self._dep = {}           # wrt idx -> [(sym idx, terms)]
        self._zero = None
        self._one = None

    # -- construction -------------------------------------------------

    def add_derivation(self, symbol, wrt, derivative):
        si = self.index[symbol]
        wi = self.index[wrt]
        terms = derivative.terms if isinstance(derivative, Poly) else dict(derivative)
        self._derivs[(si, wi)] = terms
        self._dep = {}

    def _dependents(self, wi):
        dep = self._dep.get(wi)
        if dep is None:
            dep = [(wi, {self.unit_key: RAT_ONE})]
            for (si, w), terms in self._derivs.items():
                if w == wi:
                    dep.append((si, terms))
            self._dep[wi] = dep
        return dep

    # -- element constructors -----------------------------------------

    def zero(self):
        if self._zero is None:
            self._zero = Poly(self, {})
        return self._zero

    def one(self):
        if self._one is None:
            self._one = Poly(self, {self.unit_key: RAT_ONE})
        return self._one

    def const(self, value):
        return Poly(self, self._scalar_terms(value))

    def i(self):
        return self.sym("i")

    def sym(self, name, exp=1):
        return self.monomial({name: exp})

    def monomial(self, exponents, coeff=1):
        key = [0] * self.nsyms
        for name, e in exponents.items():
            idx = self.index.get(name)
            if idx is None:
                raise UnknownSymbolError(f"{name} not in ring {self.name}")
            if e < 0 and idx not in self.laurent:
                raise ExponentError(f"negative power of non-Laurent symbol {name}")
            key[idx] = e
        base = Poly(self, _normalize(self, {tuple(key): RAT_ONE}))
        if coeff == 1:
            return base
        return base * coeff

    def poly(self, *terms):
        """Build a polynomial from (coeff, {symbol: exp}) pairs."""
        out = self.zero()
        for coeff, exps in terms:
            out = out + self.monomial(exps, coeff)
        return out

    def _scalar_terms(self, value):
        """Internal terms of a scalar (int / rational / GaussianRational)."""
        if isinstance(value, GaussianRational):
            out = {}
            if value.re:
                out[self.unit_key] = value.re
            if value.im:
                key = list(self.unit_key)
                key[0] = 1
                out[tuple(key)] = value.im
            return out
        r = rat(value) if not type(value) is type(RAT_ONE) else value
        return {self.unit_key: r} if r else {}

    def extend(self, name, extra_symbols, extra_laurent=()):
        """New ring with the same table plus symbols appended at the end.

        Rewrite rules and derivative entries carry over (keys are
        re-padded); used to build the abstract action ring on top of a
        chart ring.
        """
        ext = Ring(name, self.symbols[1:] + tuple(extra_symbols),
                   laurent=[self.symbols[j] for j in self.laurent] + list(extra_laurent))
        pad = ext.nsyms - self.nsyms
        for sym, threshold, terms in self.rewrites.rules:
            if sym == "i":
                continue
            ext.rewrites.add(sym, threshold, {k + (0,) * pad: c for k, c in terms.items()})
        for (si, wi), terms in self._derivs.items():
            ext._derivs[(si, wi)] = {k + (0,) * pad: c for k, c in terms.items()}
        return ext

    def __repr__(self):
        return f"Ring({self.name}: {', '.join(self.symbols)})"


def _normalize(ring, raw):
    """Apply rewrite rules until every rule-head power is below threshold."""
    rules = ring.rewrites._by_idx
    if not rules:
        return {k: c for k, c in raw.items() if c}
    out = {}
    pending = [raw]
    while pending:
        terms = pending.pop()
        for key, coeff in terms.items():
            if not coeff:
                continue
            hits = []
            for idx, (threshold, _) in rules.items():
                e = key[idx]
                if e >= threshold:
                    hits.append((idx, threshold, e))
            if not hits:
                add_into(out, {key: coeff})
                continue
            reduced = list(key)
            factor = None
            for idx, threshold, e in hits:
                m, r = divmod(e, threshold)
                reduced[idx] = r
                fpow = ring.rewrites.replacement_power(idx, m)
                factor = fpow if factor is None else mul_terms(factor, fpow)
            contrib = mul_terms({tuple(reduced): coeff}, factor)
            # replacements never contain rule heads, so contrib is reduced
            add_into(out, contrib)
    return out


class Poly:
    """Normalized sparse polynomial over Q(i) in a fixed Ring.

    Internal terms map exponent tuples to rational coefficients (the
    imaginary unit is the exponent at slot 0); ``gaussian_items`` gives
    the Monomial -> GaussianRational view with i folded in.
    """

    __slots__ = ("ring", "terms")

    def __init__(self, ring, terms):
        self.ring = ring
        self.terms = terms

    # -- ring operations ----------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self.terms)
        add_into(out, other.terms)
        return Poly(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.ring, neg_terms(self.terms))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self.terms)
        add_into(out, neg_terms(other.terms))
        return Poly(self.ring, out)

    def __rsub__(self, other):
        return self._coerce(other).__sub__(self)

    def __mul__(self, other):
        if isinstance(other, Poly):
            if other.ring is not self.ring:
                raise AlgebraError("cannot multiply across rings")
            return Poly(self.ring, _normalize(self.ring, mul_terms(self.terms, other.terms)))
        if isinstance(other, GaussianRational):
            return Poly(self.ring,
                        _normalize(self.ring,
                                   mul_terms(self.terms, self.ring._scalar_terms(other))))
        try:
            c = other if type(other) is type(RAT_ONE) else rat(other)
        except (TypeError, ValueError):
            return NotImplemented
        return Poly(self.ring, scale_terms(self.terms, c))

    __rmul__ = __mul__

    def square(self):
        return Poly(self.ring, _normalize(self.ring, square_terms(self.terms)))

    def __pow__(self, n):
        if n < 0:
            raise ExponentError("negative polynomial power")
        out = self.ring.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            if n > 1:
                base = base.square()
            n >>= 1
        return out

    def _coerce(self, other):
        if isinstance(other, Poly):
            if other.ring is not self.ring:
                raise AlgebraError("cannot combine across rings")
            return other
        if isinstance(other, GaussianRational):
            return Poly(self.ring, self.ring._scalar_terms(other))
        try:
            return self.ring.const(other)
        except (TypeError, ValueError):
            return NotImplemented

    # -- queries --------------------------------------------------------

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.ring is other.ring and self.terms == other.terms
        coerced = self._coerce(other)
        if coerced is NotImplemented:
            return NotImplemented
        return self.terms == coerced.terms

    def __hash__(self):
        return hash((id(self.ring), frozenset(self.terms.items())))

    def num_terms(self):
        return len(self.terms)

    def monomials(self):
        for key in self.terms:
            yield Monomial(self.ring, key)

    def gaussian_items(self):
        """Yield (Monomial, GaussianRational) with the i exponent folded in."""
        folded = {}
        for key, coeff in self.terms.items():
            e = key[0]
            base = (0,) + key[1:]
            g = folded.setdefault(base, [rat(0), rat(0)])
            # i^e with e in {0, 1} after normalization
            if e == 0:
                g[0] += coeff
            else:
                g[1] += coeff
        for base, (re, im) in sorted(folded.items()):
            yield Monomial(self.ring, base), GaussianRational(re, im)

    def coefficient(self, exponents):
        """GaussianRational coefficient of the given i-free monomial."""
        key = [0] * self.ring.nsyms
        for name, e in exponents.items():
            key[self.ring.index[name]] = e
        key_re = tuple(key)
        key[0] = 1
        key_im = tuple(key)
        return GaussianRational(self.terms.get(key_re, rat(0)),
                                self.terms.get(key_im, rat(0)))

    def degree(self, names=None):
        """Max total degree over the given symbols (all if None)."""
        if not self.terms:
            return 0
        if names is None:
            idxs = range(1, self.ring.nsyms)
        else:
            idxs = [self.ring.index[n] for n in names]
        return max(sum(key[j] for j in idxs) for key in self.terms)

    def max_exponent(self, name):
        idx = self.ring.index[name]
        return max((key[idx] for key in self.terms), default=0)

    def split_by_exponent(self, name):
        """Partition into {exponent: Poly with that symbol stripped}."""
        idx = self.ring.index[name]
        groups = {}
        for key, coeff in self.terms.items():
            e = key[idx]
            stripped = key[:idx] + (0,) + key[idx + 1:]
            groups.setdefault(e, {})[stripped] = coeff
        return {e: Poly(self.ring, terms) for e, terms in groups.items()}

    def at_zero(self, names):
        """Evaluate the listed symbols at 0 (drop terms with positive powers)."""
        idxs = [self.ring.index[n] for n in names]
        out = {}
        for key, coeff in self.terms.items():
            if any(key[j] < 0 for j in idxs):
                raise InversionError("symbol with negative power set to zero")
            if all(key[j] == 0 for j in idxs):
                out[key] = coeff
        return Poly(self.ring, out)

    def evaluate(self, values):
        """Exact evaluation; values is a sequence of GaussianRational
        aligned with ring.symbols (slot 0 is ignored, i is implicit)."""
        total = GR_ZERO
        cache = {}
        for key, coeff in self.terms.items():
            acc = GaussianRational(coeff)
            for idx in range(self.ring.nsyms):
                e = key[idx]
                if not e:
                    continue
                p = cache.get((idx, e))
                if p is None:
                    v = GR_I_VALUE if idx == 0 else values[idx]
                    p = v ** e
                    cache[(idx, e)] = p
                acc = acc * p
            total = total + acc
        return total

    def map_ring(self, target):
        """Reinterpret in a ring sharing a symbol prefix (pad with zeros)."""
        pad = target.nsyms - self.ring.nsyms
        if pad < 0 or target.symbols[: self.ring.nsyms] != self.ring.symbols:
            raise AlgebraError("target ring does not extend source ring")
        if pad == 0:
            return Poly(target, dict(self.terms))
        return Poly(target, {k + (0,) * pad: c for k, c in self.terms.items()})

    def __repr__(self):
        if not self.terms:
            return "0"
        syms = self.ring.symbols
        parts = []
        for key in sorted(self.terms):
            coeff = self.terms[key]
            factors = [str(coeff)]
            for j, e in enumerate(key):
                if e == 0:
                    continue
                factors.append(syms[j] if e == 1 else f"{syms[j]}^{e}")
            parts.append("*".join(factors))
        return " + ".join(parts)


GR_I_VALUE = GaussianRational(0, 1)


def normalize(p, rs=None):
    """Reduce p by the rewrite system (the ring's own if rs is None).

    Idempotent; the result contains no symbol power at or above its
    rule threshold.
    """
    ring = p.ring
    if rs is None or rs is ring.rewrites:
        return Poly(ring, _normalize(ring, dict(p.terms)))
    saved = ring.rewrites
    try:
        ring.rewrites = rs
        return Poly(ring, _normalize(ring, dict(p.terms)))
    finally:
        ring.rewrites = saved


def differentiate(p, v):
    """Exact partial derivative with respect to symbol v.

    Uses the power rule on v itself plus the ring's chain-rule entries
    (e.g. dc/dtheta for transcendental generators).  Symbols without an
    entry are treated as constants.
    """
    ring = p.ring
    vi = ring.index.get(v)
    if vi is None:
        raise UnknownSymbolError(f"{v} not in ring {ring.name}")
    dep = ring._dependents(vi)
    out = {}
    for si, dterms in dep:
        for key, coeff in p.terms.items():
            e = key[si]
            if not e:
                continue
            base = key[:si] + (e - 1,) + key[si + 1:]
            add_into(out, mul_terms({base: coeff * e}, dterms))
    return Poly(ring, _normalize(ring, out))
