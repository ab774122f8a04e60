"""Sparse Laurent polynomials with exact rational coefficients.

Also holds the sifting operator, the geometric-sum factor that turns
sifting of a rational series into sifting of a polynomial, truncated power
series expansion over ``prod_j (1 - t^{a_j})`` and inclusion-exclusion
numerators of monomial quotients.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .errors import LIMITS, InvalidInput, SizeLimit


def _add_exp(a, b):
    return tuple(x + y for x, y in zip(a, b))


class LaurentPoly:
    """Immutable finitely supported map ``Z^nvars -> Q`` (zero terms dropped)."""

    __slots__ = ("nvars", "_terms")

    def __init__(self, terms=None, nvars=None):
        clean = {}
        for exp, c in (terms or {}).items():
            exp = tuple(int(e) for e in exp)
            if nvars is None:
                nvars = len(exp)
            elif len(exp) != nvars:
                raise InvalidInput(f"exponent {exp} has length != {nvars}")
            c = Fraction(c)
            if c:
                clean[exp] = clean.get(exp, 0) + c
                if not clean[exp]:
                    del clean[exp]
        if nvars is None:
            raise InvalidInput("cannot infer number of variables of an empty polynomial")
        self.nvars = nvars
        self._terms = dict(sorted(clean.items()))

    @classmethod
    def zero(cls, nvars):
        return cls({}, nvars)

    @classmethod
    def constant(cls, c, nvars):
        return cls({(0,) * nvars: c}, nvars)

    @classmethod
    def monomial(cls, exp, c=1):
        return cls({tuple(exp): c}, len(exp))

    @classmethod
    def variables(cls, nvars):
        return tuple(cls.monomial([int(i == j) for j in range(nvars)]) for i in range(nvars))

    # -- access --
    @property
    def terms(self):
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def support(self):
        return list(self._terms)

    def __getitem__(self, exp):
        return self._terms.get(tuple(exp), Fraction(0))

    def __len__(self):
        return len(self._terms)

    def __iter__(self):
        return iter(self._terms)

    def is_zero(self):
        return not self._terms

    def eval_at_one(self):
        return sum(self._terms.values(), Fraction(0))

    def max_abs_coefficient(self):
        return max((abs(c) for c in self._terms.values()), default=Fraction(0))

    # -- arithmetic --
    def _coerce(self, other):
        if isinstance(other, LaurentPoly):
            if other.nvars != self.nvars:
                raise InvalidInput("variable count mismatch")
            return other
        return LaurentPoly.constant(other, self.nvars)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, 0) + c
        return LaurentPoly(out, self.nvars)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({e: -c for e, c in self._terms.items()}, self.nvars)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, LaurentPoly):
            c = Fraction(other)
            return LaurentPoly({e: c * v for e, v in self._terms.items()}, self.nvars)
        other = self._coerce(other)
        out = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = _add_exp(e1, e2)
                out[e] = out.get(e, 0) + c1 * c2
        return LaurentPoly(out, self.nvars)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return self * (1 / Fraction(scalar))

    def __pow__(self, k):
        if k < 0:
            raise ValueError("negative power")
        out = LaurentPoly.constant(1, self.nvars)
        for _ in range(k):
            out = out * self
        return out

    def shift(self, w):
        """Multiply by the monomial ``t^w``."""
        return LaurentPoly({_add_exp(e, w): c for e, c in self._terms.items()}, self.nvars)

    def change_exponents(self, M):
        """Apply an integer matrix to every exponent vector."""
        return LaurentPoly({tuple(sum(a * x for a, x in zip(row, e)) for row in M): c
                            for e, c in self._terms.items()}, len(M))

    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            return self.nvars == other.nvars and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == LaurentPoly.constant(other, self.nvars)
        return NotImplemented

    def __hash__(self):
        return hash((self.nvars, tuple(self._terms.items())))

    def __repr__(self):
        if not self._terms:
            return "0"
        parts = []
        for e, c in self._terms.items():
            mono = "*".join(f"t{i + 1}^{x}" if x != 1 else f"t{i + 1}" for i, x in enumerate(e) if x)
            parts.append(f"({c})" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)


def one_minus_monomial(a):
    """``1 - t^a``."""
    d = len(a)
    return LaurentPoly({(0,) * d: 1, tuple(a): -1}, d)


def sieve(F, r):
    """Keep terms whose exponent is divisible by ``r`` componentwise, divide exponents by ``r``."""
    if r < 1:
        raise InvalidInput("r must be positive")
    return LaurentPoly({tuple(x // r for x in e): c for e, c in F.items()
                        if all(x % r == 0 for x in e)}, F.nvars)


def geometric_factor(config, r, cap=None):
    """``prod_j (1 + t^{a_j} + ... + t^{(r-1) a_j})``, expanded."""
    cap = cap or LIMITS.term
    d = config.d
    out = {(0,) * d: 1}
    for a in config.columns:
        new = {}
        for e, c in out.items():
            for k in range(r):
                key = tuple(x + k * y for x, y in zip(e, a))
                new[key] = new.get(key, 0) + c
        if len(new) > cap:
            raise SizeLimit(f"geometric factor exceeds {cap} terms")
        out = new
    return LaurentPoly(out, d)


@dataclass(frozen=True)
class SeriesBox:
    """Coefficients ``c_w`` of ``F / prod_j (1 - t^{a_j})`` with ``y . w <= bound``."""

    config: object
    bound: Fraction
    coefficients: dict

    def __getitem__(self, w):
        return self.coefficients.get(tuple(w), Fraction(0))

    def sifted(self, r):
        """Coefficients ``c_{r w}`` re-indexed by ``w`` (bound scales by ``1/r``)."""
        coeffs = {tuple(x // r for x in w): c for w, c in self.coefficients.items()
                  if all(x % r == 0 for x in w)}
        return SeriesBox(self.config, self.bound / r, coeffs)

    def restrict(self, bound):
        bound = Fraction(bound)
        return SeriesBox(self.config, bound, {w: c for w, c in self.coefficients.items()
                                              if self.config.weight(w) <= bound})


def series_expand(F, config, bound):
    """Truncated expansion of ``F / prod_j (1 - t^{a_j})``.

    Each division by ``1 - t^a`` is a truncated multiplication by the
    geometric series, i.e. every term is propagated along ``w, w + a, ...``
    while the positive functional stays within ``bound``.
    """
    bound = Fraction(bound)
    coeffs = {e: c for e, c in F.items() if config.weight(e) <= bound}
    for a in config.columns:
        step = config.weight(a)
        new = {}
        for e, c in coeffs.items():
            w, k = e, config.weight(e)
            while k <= bound:
                new[w] = new.get(w, 0) + c
                w = _add_exp(w, a)
                k += step
        coeffs = {w: c for w, c in new.items() if c}
    return SeriesBox(config, bound, dict(sorted(coeffs.items())))


def monomial_quotient_kpoly(config, generators):
    """Numerator of the Hilbert series of ``S / <x^g : g in generators>``.

    Inclusion-exclusion over subsets of generators with ``lcm`` taken
    componentwise; the grading maps each exponent ``e`` to ``A e``.
    """
    gens = [tuple(int(x) for x in g) for g in generators]
    for g in gens:
        if len(g) != config.n or any(x < 0 for x in g):
            raise InvalidInput(f"generator {g} is not a nonnegative {config.n}-vector")
    out = {}
    for k in range(len(gens) + 1):
        for sub in combinations(gens, k):
            lcm = tuple(max(col) for col in zip(*sub)) if sub else (0,) * config.n
            deg = tuple(sum(a * x for a, x in zip(row, lcm)) for row in config.entries)
            out[deg] = out.get(deg, 0) + (-1) ** k
    return LaurentPoly(out, config.d)
