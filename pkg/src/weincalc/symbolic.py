"""Polynomials and rational functions over Q in x = rho^2, pi-graded values,
and period lattices with exact membership and order decision procedures.

Modeling axiom: the monomials pi^a * x^b are treated as linearly independent
over Q.  (pi is transcendental; the blow-up weight rho is assumed
transcendental in (0, 1), and x stands for rho^2.)  Equality of values is
therefore formal equality of coefficients, and membership in a lattice
generated by monomials decomposes into one cyclic-group test per monomial.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .exactarith import format_rational, parse_rational


class PolyQ:
    """Sparse univariate polynomial over Q, stored as {exponent: coefficient}.

    No stored coefficient is zero; the zero polynomial is the empty map.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[int, Fraction | int] | None = None):
        clean: dict[int, Fraction] = {}
        if terms:
            for exp, coeff in terms.items():
                if exp < 0:
                    raise ValueError(f"exponent must be >= 0, got {exp}")
                c = Fraction(coeff)
                if c:
                    clean[int(exp)] = c
        self.terms = clean

    @classmethod
    def const(cls, c: Fraction | int) -> PolyQ:
        return cls({0: Fraction(c)})

    @classmethod
    def monomial(cls, exp: int, coeff: Fraction | int = 1) -> PolyQ:
        return cls({exp: Fraction(coeff)})

    @classmethod
    def one_minus_x_pow(cls, m: int) -> PolyQ:
        """1 - x^m (the blow-up volume factors are all of this shape)."""
        if m < 1:
            raise ValueError(f"power must be >= 1, got {m}")
        return cls({0: Fraction(1), m: Fraction(-1)})

    def __bool__(self) -> bool:
        return bool(self.terms)

    @property
    def degree(self) -> int:
        """Degree, with the convention degree(0) = -1."""
        return max(self.terms) if self.terms else -1

    def leading_coeff(self) -> Fraction:
        if not self.terms:
            return Fraction(0)
        return self.terms[self.degree]

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = PolyQ.const(other)
        if not isinstance(other, PolyQ):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __neg__(self) -> PolyQ:
        return PolyQ({e: -c for e, c in self.terms.items()})

    def __add__(self, other: PolyQ) -> PolyQ:
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, Fraction(0)) + c
        return PolyQ(out)

    def __sub__(self, other: PolyQ) -> PolyQ:
        return self + (-other)

    def __mul__(self, other: PolyQ | Fraction | int) -> PolyQ:
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            return PolyQ({e: cc * c for e, cc in self.terms.items()})
        out: dict[int, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = e1 + e2
                out[e] = out.get(e, Fraction(0)) + c1 * c2
        return PolyQ(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> PolyQ:
        if n < 0:
            raise ValueError("negative power")
        out = PolyQ.const(1)
        for _ in range(n):
            out = out * self
        return out

    def __divmod__(self, other: PolyQ) -> tuple[PolyQ, PolyQ]:
        """Euclidean division in Q[x]: self = q*other + r with deg r < deg other."""
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        quot: dict[int, Fraction] = {}
        rem = dict(self.terms)
        dlead = other.degree
        clead = other.terms[dlead]
        while rem and max(rem) >= dlead:
            e = max(rem)
            factor = rem[e] / clead
            quot[e - dlead] = factor
            for oe, oc in other.terms.items():
                t = e - dlead + oe
                new = rem.get(t, Fraction(0)) - factor * oc
                if new:
                    rem[t] = new
                else:
                    rem.pop(t, None)
        return PolyQ(quot), PolyQ(rem)

    def monic(self) -> PolyQ:
        """Scale so the leading coefficient is 1 (zero stays zero)."""
        if not self.terms:
            return self
        lead = self.leading_coeff()
        return self * (1 / lead)

    def evaluate(self, x):
        """Evaluate at x; exact for Fraction/int input, float for float input."""
        zero = Fraction(0) if isinstance(x, (int, Fraction)) else 0.0
        return sum((c * x**e for e, c in self.terms.items()), zero)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            if e == 0:
                parts.append(format_rational(c))
            else:
                var = "x" if e == 1 else f"x^{e}"
                if c == 1:
                    parts.append(var)
                elif c == -1:
                    parts.append(f"-{var}")
                else:
                    parts.append(f"{format_rational(c)}*{var}")
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out

    def __repr__(self) -> str:
        return f"PolyQ({self})"


def poly_gcd(a: PolyQ, b: PolyQ) -> PolyQ:
    """Monic gcd in Q[x] by the Euclidean algorithm; gcd(0, 0) = 0."""
    while b:
        a, b = b, divmod(a, b)[1]
    return a.monic()


def divexact(a: PolyQ, b: PolyQ) -> PolyQ:
    """Exact quotient a/b; rejects non-divisible pairs."""
    q, r = divmod(a, b)
    if r:
        raise ValueError(f"({a}) is not divisible by ({b}), remainder {r}")
    return q


class RatFuncQ:
    """Reduced rational function over Q: gcd(num, den) = 1, den monic, nonzero."""

    __slots__ = ("num", "den")

    def __init__(self, num: PolyQ | Fraction | int, den: PolyQ | Fraction | int = 1):
        if isinstance(num, (int, Fraction)):
            num = PolyQ.const(num)
        if isinstance(den, (int, Fraction)):
            den = PolyQ.const(den)
        if not den:
            raise ZeroDivisionError("rational function with zero denominator")
        if not num:
            self.num = PolyQ()
            self.den = PolyQ.const(1)
            return
        g = poly_gcd(num, den)
        num = divexact(num, g)
        den = divexact(den, g)
        # Normalize: monic denominator, scale absorbed into the numerator.
        lead = den.leading_coeff()
        self.num = num * (1 / lead)
        self.den = den * (1 / lead)

    @property
    def is_polynomial(self) -> bool:
        return self.den == PolyQ.const(1)

    def as_polynomial(self) -> PolyQ:
        if not self.is_polynomial:
            raise ValueError(f"not a polynomial: {self}")
        return self.num

    def __bool__(self) -> bool:
        return bool(self.num)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction, PolyQ)):
            other = RatFuncQ(other)
        if not isinstance(other, RatFuncQ):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __neg__(self) -> RatFuncQ:
        return RatFuncQ(-self.num, self.den)

    def __add__(self, other: RatFuncQ) -> RatFuncQ:
        return RatFuncQ(self.num * other.den + other.num * self.den, self.den * other.den)

    def __sub__(self, other: RatFuncQ) -> RatFuncQ:
        return self + (-other)

    def __mul__(self, other: RatFuncQ | Fraction | int) -> RatFuncQ:
        if isinstance(other, (int, Fraction)):
            return RatFuncQ(self.num * other, self.den)
        return RatFuncQ(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def evaluate(self, x):
        """Evaluate at x (exact for Fraction input); raises at a pole."""
        den = self.den.evaluate(x)
        if den == 0:
            raise ZeroDivisionError(f"denominator {self.den} vanishes at x={x}")
        return self.num.evaluate(x) / den

    def __str__(self) -> str:
        if self.is_polynomial:
            return str(self.num)
        return f"({self.num}) / ({self.den})"

    def __repr__(self) -> str:
        return f"RatFuncQ({self})"


def ratfunc_reduce(num: PolyQ, den: PolyQ) -> RatFuncQ:
    """Reduced form of num/den (gcd cancelled, denominator monic)."""
    return RatFuncQ(num, den)


def rational_gcd(values: Iterable[Fraction]) -> Fraction:
    """The positive generator g of the Z-module Z*v_1 + ... + Z*v_r.

    Concretely gcd of the numerators over the common denominator.  All inputs
    must be nonzero.
    """
    vals = [Fraction(v) for v in values]
    if not vals:
        raise ValueError("rational_gcd of an empty sequence")
    if any(v == 0 for v in vals):
        raise ValueError("rational_gcd requires nonzero inputs")
    den = math.lcm(*(v.denominator for v in vals))
    num = math.gcd(*(abs(v.numerator) * (den // v.denominator) for v in vals))
    return Fraction(num, den)


# ---------------------------------------------------------------------------
# pi-graded values


class PiGradedValue:
    """A finite sum  sum_a f_a(x) * pi^a  with reduced rational functions f_a.

    Every morphism value and every exact integral in the package is one of
    these; the zero value has no components.
    """

    __slots__ = ("components",)

    def __init__(self, components: Mapping[int, RatFuncQ] | None = None):
        clean: dict[int, RatFuncQ] = {}
        if components:
            for a, f in components.items():
                if a < 0:
                    raise ValueError(f"pi exponent must be >= 0, got {a}")
                if not isinstance(f, RatFuncQ):
                    f = RatFuncQ(f)
                if f:
                    clean[int(a)] = f
        self.components = clean

    @classmethod
    def zero(cls) -> PiGradedValue:
        return cls()

    @classmethod
    def monomial(cls, coeff: Fraction | int, pi_exp: int, x_exp: int = 0) -> PiGradedValue:
        """coeff * pi^pi_exp * x^x_exp."""
        return cls({pi_exp: RatFuncQ(PolyQ.monomial(x_exp, Fraction(coeff)))})

    def __bool__(self) -> bool:
        return bool(self.components)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PiGradedValue):
            return NotImplemented
        return self.components == other.components

    def __hash__(self) -> int:
        return hash(frozenset(self.components.items()))

    def __neg__(self) -> PiGradedValue:
        return PiGradedValue({a: -f for a, f in self.components.items()})

    def __add__(self, other: PiGradedValue) -> PiGradedValue:
        out = dict(self.components)
        for a, f in other.components.items():
            out[a] = out[a] + f if a in out else f
        return PiGradedValue(out)

    def __sub__(self, other: PiGradedValue) -> PiGradedValue:
        return self + (-other)

    def __mul__(self, scalar: Fraction | int) -> PiGradedValue:
        return PiGradedValue({a: f * scalar for a, f in self.components.items()})

    __rmul__ = __mul__

    @property
    def is_polynomial(self) -> bool:
        return all(f.is_polynomial for f in self.components.values())

    def evaluate(self, x: float, pi_value: float = math.pi) -> float:
        """Numeric value with x and pi substituted."""
        return float(
            sum(float(f.evaluate(x)) * pi_value**a for a, f in self.components.items())
        )

    def to_json(self) -> list[dict]:
        """Stable JSON shape: per component, term lists [[exp, "p/q"], ...]."""
        out = []
        for a in sorted(self.components):
            f = self.components[a]
            out.append(
                {
                    "pi_exp": a,
                    "num": [[e, format_rational(f.num.terms[e])] for e in sorted(f.num.terms)],
                    "den": [[e, format_rational(f.den.terms[e])] for e in sorted(f.den.terms)],
                }
            )
        return out

    @classmethod
    def from_json(cls, doc: list[dict]) -> PiGradedValue:
        comps: dict[int, RatFuncQ] = {}
        for entry in doc:
            a = int(entry["pi_exp"])
            num = PolyQ({int(e): parse_rational(c) for e, c in entry["num"]})
            den = PolyQ({int(e): parse_rational(c) for e, c in entry["den"]})
            comps[a] = RatFuncQ(num, den)
        return cls(comps)

    def __str__(self) -> str:
        if not self.components:
            return "0"
        parts = []
        for a in sorted(self.components):
            f = self.components[a]
            if a == 0:
                parts.append(f"({f})")
            else:
                pi = "pi" if a == 1 else f"pi^{a}"
                parts.append(f"({f})*{pi}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"PiGradedValue({self})"


# ---------------------------------------------------------------------------
# period lattices and the decision procedures


class Lattice:
    """The Z-module spanned by monomial generators coeff * pi^a * x^b.

    Generators sharing a monomial are collapsed eagerly into a single positive
    generator via rational_gcd, so each occupied (pi_exp, x_exp) cell carries a
    cyclic group g*Z and every decision below is one divisibility test per
    cell.  The generator list is canonical: deduplicated, positive, sorted.
    """

    __slots__ = ("generators",)

    def __init__(self, generators: Iterable[tuple[Fraction | int, int, int]] = ()):
        cells: dict[tuple[int, int], list[Fraction]] = {}
        for coeff, pi_exp, x_exp in generators:
            c = Fraction(coeff)
            if c == 0:
                raise ValueError("lattice generator with zero coefficient")
            if pi_exp < 0 or x_exp < 0:
                raise ValueError(
                    f"generator exponents must be >= 0, got ({pi_exp}, {x_exp})"
                )
            cells.setdefault((int(pi_exp), int(x_exp)), []).append(abs(c))
        self.generators = tuple(
            (rational_gcd(coeffs), a, b) for (a, b), coeffs in sorted(cells.items())
        )

    def cell(self, pi_exp: int, x_exp: int) -> Fraction | None:
        """Positive generator at the monomial (pi_exp, x_exp), if occupied."""
        for coeff, a, b in self.generators:
            if (a, b) == (pi_exp, x_exp):
                return coeff
        return None

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Lattice):
            return NotImplemented
        return self.generators == other.generators

    def __hash__(self) -> int:
        return hash(self.generators)

    def __bool__(self) -> bool:
        return bool(self.generators)

    def to_json(self) -> list[dict]:
        return [
            {"coeff": format_rational(c), "pi_exp": a, "x_exp": b}
            for c, a, b in self.generators
        ]

    @classmethod
    def from_json(cls, doc: list[dict]) -> Lattice:
        return cls(
            (parse_rational(entry["coeff"]), int(entry["pi_exp"]), int(entry["x_exp"]))
            for entry in doc
        )

    def __str__(self) -> str:
        if not self.generators:
            return "<0>"
        gens = []
        for c, a, b in self.generators:
            factors = [] if c == 1 and (a or b) else [format_rational(c)]
            if a:
                factors.append("pi" if a == 1 else f"pi^{a}")
            if b:
                factors.append("x" if b == 1 else f"x^{b}")
            gens.append("*".join(factors) if factors else "1")
        return "<" + ", ".join(gens) + ">"

    def __repr__(self) -> str:
        return f"Lattice({self})"


def lattice_sum(a: Lattice, b: Lattice) -> Lattice:
    """Z-module sum: concatenated generators, re-collapsed and deduplicated."""
    return Lattice(a.generators + b.generators)


@dataclass(frozen=True)
class OrderResult:
    """Order of a value in R / lattice: Finite(order) or Infinite (order None).

    For infinite order, `witness` names the obstruction (a non-polynomial
    component or a monomial outside the lattice support).
    """

    order: int | None
    witness: str | None = None

    @classmethod
    def finite(cls, m: int) -> OrderResult:
        return cls(order=m)

    @classmethod
    def infinite(cls, witness: str) -> OrderResult:
        return cls(order=None, witness=witness)

    @property
    def is_finite(self) -> bool:
        return self.order is not None

    def to_json(self) -> dict:
        if self.is_finite:
            return {"kind": "finite", "order": self.order}
        return {"kind": "infinite", "witness": self.witness}

    def __str__(self) -> str:
        if self.is_finite:
            return f"Finite({self.order})"
        return f"Infinite ({self.witness})"


def lattice_order(value: PiGradedValue, lattice: Lattice) -> OrderResult:
    """Minimal m >= 1 with m*value in the lattice, or Infinite.

    By the independence axiom a value lies in the lattice iff, monomial by
    monomial, its coefficient is an integer multiple of the cell generator.
    A non-polynomial component or an unsupported monomial can never be
    cleared by an integer multiple, hence infinite order; otherwise the order
    is the lcm of the denominators of coefficient/generator per cell.
    """
    m = 1
    for a in sorted(value.components):
        f = value.components[a]
        if not f.is_polynomial:
            return OrderResult.infinite(
                f"pi^{a} component has reduced denominator ({f.den})"
            )
        for b in sorted(f.num.terms):
            g = lattice.cell(a, b)
            if g is None:
                return OrderResult.infinite(
                    f"monomial pi^{a}*x^{b} is outside the lattice support"
                )
            m = math.lcm(m, (f.num.terms[b] / g).denominator)
    return OrderResult.finite(m)


def lattice_member(value: PiGradedValue, lattice: Lattice) -> bool:
    """True iff value is an integer combination of the lattice generators."""
    return lattice_order(value, lattice) == OrderResult.finite(1)
