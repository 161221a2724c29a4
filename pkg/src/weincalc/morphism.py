"""Exact generalized Weinstein morphism values.

Covers complex projective space with the Fubini-Study form normalized so a
projective line has area pi, its one-point symplectic blow-up of weight rho
(through the induced value, with x = rho^2 formal), and Cartesian products
with a manifold known through its rational period data.  Also the explicit
dense ball embedding into CP^n and the pointwise trace-volume formula that
feed the Monte Carlo oracles.

Conventions: values live in the basis of plain pi powers, so the morphism
value on CP^n in degree 2k-1 is stored as (q/k!) * pi^k against the period
lattice generated by pi^k/k!, where

    q(n, k) = n! * k! * C(2k-1, k) / (n+k)!

The classical degree-1 case (k = 1) is included: the formulas specialize
cleanly and give the familiar order n+1 in pi_1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from . import combinatorics
from .exactarith import binomial, factorial, format_rational, parse_rational
from .symbolic import (
    Lattice,
    OrderResult,
    PiGradedValue,
    PolyQ,
    RatFuncQ,
    lattice_member,
    lattice_order,
    lattice_sum,
)

# Brute-force self-check budget: the raw multi-index sum for degree k runs
# over C(3k-1, 2k-1) compositions, which is millions of terms by k = 9.
RAW_CHECK_MAX_K = 8

# Structured flag for the one case where the computed order is finite even
# though the infinite-order statement for blow-up classes would cover it.
FINITE_ORDER_AT_TOP_DEGREE = "finite-order-at-k-equals-n"


class SelfCheckError(RuntimeError):
    """Closed form and independent raw evaluation disagree; refuse to answer."""


@dataclass(frozen=True)
class CosetValue:
    """A morphism value together with the period lattice it is reduced by."""

    value: PiGradedValue
    lattice: Lattice

    def is_trivial(self) -> bool:
        """True iff the value lies in the lattice (the coset is zero)."""
        return lattice_member(self.value, self.lattice)

    def order(self) -> OrderResult:
        return lattice_order(self.value, self.lattice)


def _require_degree(n: int, k: int) -> None:
    if n < 1:
        raise ValueError(f"n must be >= 1, got n={n}")
    if not 1 <= k <= n:
        raise ValueError(f"k must satisfy 1 <= k <= n, got k={k} with n={n}")


def cpn_q(n: int, k: int) -> Fraction:
    """q(n, k) = n! k! C(2k-1, k) / (n+k)!: the multiple of pi^k/k! taken by
    the morphism on the standard unitary generator of degree 2k-1."""
    _require_degree(n, k)
    return Fraction(factorial(n) * factorial(k) * binomial(2 * k - 1, k), factorial(n + k))


def cpn_weinstein_raw(n: int, k: int) -> Fraction:
    """The pre-simplification value n!/((n+k)! 2^k) * S(k, k), with S evaluated
    by brute-force enumeration.  Internal oracle for cpn_q."""
    _require_degree(n, k)
    s = combinatorics.moment_sum_bruteforce(k, k)
    return Fraction(factorial(n), factorial(n + k) * 2**k) * s


def cpn_lattice(k: int) -> Lattice:
    """Degree-2k period lattice of CP^n: the single generator pi^k/k!."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    return Lattice([(Fraction(1, factorial(k)), k, 0)])


def _checked_q(n: int, k: int) -> Fraction:
    """q(n, k) with the closed form cross-checked against the raw multi-index
    sum whenever k is inside the brute-force budget."""
    q = cpn_q(n, k)
    if k <= RAW_CHECK_MAX_K:
        raw = cpn_weinstein_raw(n, k)
        if raw != q:
            raise SelfCheckError(
                f"closed form q({n},{k}) = {q} disagrees with raw multi-index value {raw}"
            )
    return q


def cpn_weinstein(n: int, k: int) -> CosetValue:
    """Morphism value on the degree-(2k-1) unitary generator acting on CP^n:
    (q(n,k)/k!) * pi^k in R / <pi^k/k!>."""
    q = _checked_q(n, k)
    value = PiGradedValue.monomial(q / factorial(k), k, 0)
    return CosetValue(value, cpn_lattice(k))


def blowup_lattice(k: int, base: Lattice | None = None) -> Lattice:
    """Degree-2k period lattice of a one-point blow-up: base + Z*(pi^k x^k / k!).

    Defaults to the CP^n base lattice, for which this is <pi^k/k!, pi^k x^k/k!>.
    """
    if base is None:
        base = cpn_lattice(k)
    return lattice_sum(base, Lattice([(Fraction(1, factorial(k)), k, k)]))


def blowup_weinstein(n: int, k: int) -> CosetValue:
    """Morphism value of the lifted class on the weight-rho blow-up of CP^n.

    The single pi^k component is the reduced rational function

        f_k(x) = (q(n,k)/k!) * (1 - x^(n+k)) / (1 - x^n),      x = rho^2,

    taken against the lattice <pi^k/k!, pi^k x^k/k!>.  Setting x = 0 recovers
    the CP^n value.
    """
    q = _checked_q(n, k)
    f = RatFuncQ(
        PolyQ.one_minus_x_pow(n + k) * (q / factorial(k)),
        PolyQ.one_minus_x_pow(n),
    )
    return CosetValue(PiGradedValue({k: f}), blowup_lattice(k))


def blowup_order(n: int, k: int) -> OrderResult:
    """Order of the lifted class modulo the blow-up period lattice.

    Infinite for every k < n (the reduced denominator of f_k survives, since
    n does not divide n+k).  At k = n the correction factor divides exactly,
    f_n = (1/(2 n!)) (1 + x^n), and the computed order is Finite(2); see
    blowup_flags.
    """
    cv = blowup_weinstein(n, k)
    return cv.order()


def blowup_flags(n: int, k: int, order: OrderResult) -> list[str]:
    """Structured flags for the blow-up order report.

    At k = n the computed order is finite although the infinite-order
    statement for lifted classes is asserted for every k in {1, ..., n};
    the computation is reported verbatim and this flag marks the conflict.
    """
    if k == n and order.is_finite:
        return [FINITE_ORDER_AT_TOP_DEGREE]
    return []


# ---------------------------------------------------------------------------
# Cartesian products


def product_value(
    a_value: PiGradedValue,
    a_lattice: Lattice,
    b_value: PiGradedValue,
    b_lattice: Lattice,
    full_lattice: Lattice,
) -> CosetValue:
    """Morphism value of a product class: the sum of the factor values, taken
    against the full product period lattice.

    The product lattice must contain the sum of the factor lattices; every
    generator is checked for membership and a violation is rejected.
    """
    for coeff, pi_exp, x_exp in lattice_sum(a_lattice, b_lattice).generators:
        gen_value = PiGradedValue.monomial(coeff, pi_exp, x_exp)
        if not lattice_member(gen_value, full_lattice):
            raise ValueError(
                f"product lattice does not contain the factor generator "
                f"{format_rational(coeff)}*pi^{pi_exp}*x^{x_exp}"
            )
    return CosetValue(a_value + b_value, full_lattice)


class DescriptorError(ValueError):
    """Manifold descriptor validation failure, carrying the offending field."""

    def __init__(self, fieldname: str, message: str):
        super().__init__(f"{fieldname}: {message}")
        self.field = fieldname


@dataclass(frozen=True)
class NamedClass:
    """A named morphism value on the descriptor manifold, with its degree."""

    degree: int
    value: PiGradedValue


@dataclass(frozen=True)
class ManifoldDescriptor:
    """Period data of a closed symplectic manifold of dimension 2m.

    `periods[2j]` lists rational generators of the degree-2j period group
    (as coefficients of pi^0 -- real periods).  `trivial_odd_homotopy` lists
    the odd degrees 2k-1 in which the manifold's homotopy is asserted trivial
    (required for the morphism to be defined).  `classes` optionally names
    known morphism values.
    """

    dimension: int
    trivial_odd_homotopy: frozenset[int]
    periods: Mapping[int, tuple[Fraction, ...]]
    classes: Mapping[str, NamedClass] = field(default_factory=dict)

    @property
    def half_dimension(self) -> int:
        return self.dimension // 2

    def period_lattice(self, k: int) -> Lattice:
        """Degree-2k periods as a lattice of pi^0 generators (empty if none)."""
        return Lattice((p, 0, 0) for p in self.periods.get(2 * k, ()))

    @classmethod
    def from_json(cls, doc: dict) -> ManifoldDescriptor:
        if not isinstance(doc, dict):
            raise DescriptorError("<root>", "descriptor must be a JSON object")
        dim = doc.get("dimension")
        if not isinstance(dim, int) or dim < 2 or dim % 2:
            raise DescriptorError(
                "dimension", f"must be a positive even integer, got {dim!r}"
            )
        m = dim // 2

        toh = doc.get("trivial_odd_homotopy", [])
        if not isinstance(toh, list) or not all(
            isinstance(d, int) and d >= 1 and d % 2 == 1 for d in toh
        ):
            raise DescriptorError(
                "trivial_odd_homotopy", f"must be a list of odd degrees, got {toh!r}"
            )

        periods: dict[int, tuple[Fraction, ...]] = {}
        for key, gens in doc.get("periods", {}).items():
            try:
                degree = int(key)
            except (TypeError, ValueError):
                raise DescriptorError(f"periods.{key}", "degree key must be an integer")
            if degree < 2 or degree % 2 or degree > dim:
                raise DescriptorError(
                    f"periods.{key}",
                    f"degree must be even with 2 <= degree <= {dim}",
                )
            if not isinstance(gens, list):
                raise DescriptorError(f"periods.{key}", "generators must be a list")
            parsed = []
            for g in gens:
                try:
                    parsed.append(parse_rational(g))
                except ValueError:
                    raise DescriptorError(
                        f"periods.{key}",
                        f"period {g!r} is not rational; only manifolds with "
                        f"rational period groups are supported",
                    )
            periods[degree] = tuple(parsed)

        classes: dict[str, NamedClass] = {}
        for name, entry in doc.get("classes", {}).items():
            if not isinstance(entry, dict) or "degree" not in entry:
                raise DescriptorError(
                    f"classes.{name}", "must be an object with 'degree' and 'value'"
                )
            degree = entry["degree"]
            if not isinstance(degree, int) or degree < 1 or degree % 2 == 0:
                raise DescriptorError(
                    f"classes.{name}.degree", f"must be a positive odd integer, got {degree!r}"
                )
            try:
                value = PiGradedValue.from_json(entry.get("value", []))
            except (KeyError, TypeError, ValueError) as exc:
                raise DescriptorError(f"classes.{name}.value", str(exc))
            classes[name] = NamedClass(degree=degree, value=value)

        return cls(
            dimension=dim,
            trivial_odd_homotopy=frozenset(toh),
            periods=periods,
            classes=classes,
        )


def product_cpn_lattice(n: int, k: int, m_desc: ManifoldDescriptor) -> Lattice:
    """Degree-2k period lattice of CP^n x M, generated by

        pi^k/k!,  pi^(k-1)/(k-1)! * P_2(M),  ...,  P_2k(M).

    Degrees missing from the descriptor contribute nothing.
    """
    _require_degree(n, k)
    if k > m_desc.half_dimension:
        raise ValueError(
            f"k={k} exceeds the descriptor dimension bound "
            f"(dimension {m_desc.dimension} allows k <= {m_desc.half_dimension})"
        )
    gens: list[tuple[Fraction, int, int]] = [(Fraction(1, factorial(k)), k, 0)]
    for j in range(1, k + 1):
        for p in m_desc.periods.get(2 * j, ()):
            gens.append((p / factorial(k - j), k - j, 0))
    return Lattice(gens)


# ---------------------------------------------------------------------------
# the dense ball embedding and the pointwise trace volume


def embed_ball_to_cpn(z: Sequence[complex]) -> tuple[complex, ...]:
    """Symplectic embedding of the open unit 2n-ball into CP^n:

        (z_1, ..., z_n) -> [z_1 : ... : z_n : sqrt(1 - sum |z_j|^2)].
    """
    z = tuple(complex(c) for c in z)
    if not z:
        raise ValueError("embed_ball_to_cpn requires at least one coordinate")
    sq = sum(abs(c) ** 2 for c in z)
    if sq >= 1.0:
        raise ValueError(f"point has squared norm {sq} >= 1, outside the open ball")
    return z + (complex(math.sqrt(1.0 - sq)),)


def inverse_embed(w: Sequence[complex]) -> tuple[complex, ...]:
    """Preimage in the open ball of [w_1 : ... : w_{n+1}] with w_{n+1} != 0:

        (1 + sum |w_j/w_{n+1}|^2)^(-1/2) * (w_1/w_{n+1}, ..., w_n/w_{n+1}).

    Points with w_{n+1} = 0 lie on the complement hyperplane and are rejected.
    """
    w = tuple(complex(c) for c in w)
    if len(w) < 2:
        raise ValueError("inverse_embed requires at least two homogeneous coordinates")
    if w[-1] == 0:
        raise ValueError("last homogeneous coordinate is zero: point lies on the hyperplane")
    ratios = tuple(c / w[-1] for c in w[:-1])
    scale = 1.0 / math.sqrt(1.0 + sum(abs(r) ** 2 for r in ratios))
    return tuple(scale * r for r in ratios)


def trace_action(n: int, k: int, w: Sequence) -> Fraction | float:
    """Enclosed omega^k-volume of the trace sphere of [w], as the coefficient
    of pi^k (so the volume itself is result * pi^k):

        result = (1/k!) * ( sum_{j<=k} |w_j|^2 / (|w|^2) )^k,

    writing |w|^2 for |w_{n+1}|^2 + sum_{j<=n} |w_j|^2.  Exact Fraction when
    all coordinates are exact real numbers (int/Fraction), float otherwise.
    The value is invariant under phase changes of single coordinates and
    under rescaling the whole representative; w_{n+1} = 0 is rejected.
    """
    coords = tuple(w)
    if len(coords) != n + 1:
        raise ValueError(f"expected {n + 1} homogeneous coordinates, got {len(coords)}")
    if all(isinstance(c, (int, Fraction)) for c in coords):
        sq: list = [Fraction(c) ** 2 for c in coords]
    else:
        sq = [abs(complex(c)) ** 2 for c in coords]
    return trace_action_from_moduli(n, k, sq)


def trace_action_from_moduli(n: int, k: int, sq_moduli: Sequence) -> Fraction | float:
    """trace_action from the squared moduli |w_j|^2 themselves, for points
    whose coordinates are irrational but whose squared moduli are not
    (e.g. |w| = sqrt(2) contributes an exact 2)."""
    _require_degree(n, k)
    sq = list(sq_moduli)
    if len(sq) != n + 1:
        raise ValueError(f"expected {n + 1} squared moduli, got {len(sq)}")
    if any(m < 0 for m in sq):
        raise ValueError("squared moduli must be nonnegative")
    if sq[-1] == 0:
        raise ValueError("last homogeneous coordinate is zero: point lies on the hyperplane")
    if all(isinstance(m, (int, Fraction)) for m in sq):
        ratio = Fraction(sum(Fraction(m) for m in sq[:k])) / sum(Fraction(m) for m in sq)
        return ratio**k / factorial(k)
    ratio = float(sum(sq[:k])) / float(sum(sq))
    return ratio**k / factorial(k)
