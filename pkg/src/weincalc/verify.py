"""Self-verification suite.

Every closed-form result in the package is checked here against an
independent route: brute-force enumeration for the combinatorial sums,
frozen quadrature spot values and Monte Carlo for the integrals, and a
bounded exhaustive search over integer coefficient vectors for the lattice
decision procedures.  The CLI `verify` command and the acceptance tests both
run exactly this suite.

All seeds are fixed so that repeated runs produce identical output.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import combinatorics
from .exactarith import format_rational
from .montecarlo import (
    McEstimate,
    mc_ball_moment,
    mc_blowup_average,
    mc_cpn_average,
    sample_ball,
)
from .morphism import (
    FINITE_ORDER_AT_TOP_DEGREE,
    ManifoldDescriptor,
    blowup_flags,
    blowup_weinstein,
    cpn_q,
    cpn_weinstein,
    cpn_weinstein_raw,
    product_cpn_lattice,
    product_value,
)
from .symbolic import (
    Lattice,
    OrderResult,
    PiGradedValue,
    PolyQ,
    RatFuncQ,
    lattice_member,
    lattice_order,
)

BASE_SEED = 20250808

SIGMA_BAND = 4.0

# Frozen spot values for the ball moment integral, each derived from the
# one-dimensional radial quadrature that is independent of the multi-index
# sum: over B^2, int r^2 dA = 2*pi*int_0^1 r^3 dr = pi/2 and
# int r^4 dA = 2*pi*int_0^1 r^5 dr = pi/3; over B^4,
# int |z|^2 = 2*pi^2*int_0^1 r^5 dr = pi^2/3, halved by symmetry for |z_1|^2.
MOMENT_SPOT_VALUES = {
    (1, 1, 1): (Fraction(1, 2), 1),
    (2, 1, 1): (Fraction(1, 6), 2),
    (1, 1, 2): (Fraction(1, 3), 1),
}


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one verification check, with JSON-safe details."""

    name: str
    passed: bool
    details: dict

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "details": self.details}


def check_identity_suite(k_max: int = 7) -> CheckResult:
    """Brute-force diagonal moment sums against 2^k k! C(2k-1, k)."""
    rows = []
    ok = True
    for k, brute, closed, equal in combinatorics.verify_diagonal_identity(k_max):
        ok &= equal
        rows.append({"k": k, "bruteforce": str(brute), "closed": str(closed), "ok": equal})
    return CheckResult("identity-suite", ok, {"k_max": k_max, "rows": rows})


def check_moment_sums(k_max: int = 6, l_max: int = 6) -> CheckResult:
    """Brute-force S(k, l) against 2^k k! C(k+l-1, k) on the full grid."""
    failures = []
    for k in range(1, k_max + 1):
        for l in range(1, l_max + 1):
            brute = combinatorics.moment_sum_bruteforce(k, l)
            closed = combinatorics.moment_sum_closed(k, l)
            if brute != closed:
                failures.append({"k": k, "l": l, "bruteforce": str(brute), "closed": str(closed)})
    return CheckResult(
        "moment-sums",
        not failures,
        {"k_max": k_max, "l_max": l_max, "pairs": k_max * l_max, "failures": failures},
    )


def check_ball_moments(samples: int = 10**6, n_max: int = 3, k_max: int = 3) -> CheckResult:
    """Exact moment formula against frozen quadrature spots, then Monte Carlo
    against the exact value on the (n <= 3, l <= n, k <= 3) grid."""
    ok = True
    spots = []
    for (n, l, k), (coeff, pi_exp) in sorted(MOMENT_SPOT_VALUES.items()):
        got = combinatorics.ball_moment_exact(n, l, k)
        match = got == (coeff, pi_exp)
        ok &= match
        spots.append(
            {
                "n": n,
                "l": l,
                "k": k,
                "expected": f"{format_rational(coeff)}*pi^{pi_exp}",
                "got": f"{format_rational(got[0])}*pi^{got[1]}",
                "ok": match,
            }
        )
    mc_rows = []
    for n in range(1, n_max + 1):
        for l in range(1, n + 1):
            for k in range(1, k_max + 1):
                coeff, pi_exp = combinatorics.ball_moment_exact(n, l, k)
                exact = float(coeff) * math.pi**pi_exp
                est = mc_ball_moment(
                    n, l, k, 1.0, samples, BASE_SEED + 100 * n + 10 * l + k
                )
                sigma = est.sigma_distance(exact)
                ok &= sigma < SIGMA_BAND
                mc_rows.append(_mc_row({"n": n, "l": l, "k": k}, est, exact, sigma))
    return CheckResult(
        "ball-moments", ok, {"samples": samples, "spots": spots, "monte_carlo": mc_rows}
    )


def check_cpn_exact(n_max: int = 8, raw_k_max: int = 8) -> CheckResult:
    """Exact CP^n suite: 0 < q < 1 and nontriviality for all k <= n <= n_max,
    raw multi-index value equal to the closed form, and the two anchors
    q(n, 1) = 1/(n+1) with order n+1, q(n, n) = 1/2 with order 2."""
    ok = True
    rows = []
    for n in range(1, n_max + 1):
        for k in range(1, n + 1):
            q = cpn_q(n, k)
            entry = {"n": n, "k": k, "q": format_rational(q)}
            good = 0 < q < 1
            if k <= raw_k_max:
                raw = cpn_weinstein_raw(n, k)
                entry["raw"] = format_rational(raw)
                good &= raw == q
            cv = cpn_weinstein(n, k)
            order = cv.order()
            entry["order"] = order.to_json()
            entry["nontrivial"] = not cv.is_trivial()
            good &= entry["nontrivial"]
            if k == 1:
                good &= q == Fraction(1, n + 1) and order == OrderResult.finite(n + 1)
            if k == n:
                good &= q == Fraction(1, 2) and order == OrderResult.finite(2)
            entry["ok"] = good
            ok &= good
            rows.append(entry)
    return CheckResult(
        "cpn-exact", ok, {"n_max": n_max, "raw_k_max": raw_k_max, "rows": rows}
    )


def check_cpn_monte_carlo(samples: int = 10**6, n_max: int = 3) -> CheckResult:
    """Monte Carlo trace-volume average against q(n,k) pi^k/k!."""
    ok = True
    rows = []
    for n in range(1, n_max + 1):
        for k in range(1, n + 1):
            exact = float(cpn_q(n, k)) * math.pi**k / math.factorial(k)
            est = mc_cpn_average(n, k, samples, BASE_SEED + 1000 + 10 * n + k)
            sigma = est.sigma_distance(exact)
            ok &= sigma < SIGMA_BAND
            rows.append(_mc_row({"n": n, "k": k}, est, exact, sigma))
    return CheckResult("cpn-monte-carlo", ok, {"samples": samples, "rows": rows})


def check_blowup(
    n_max: int = 8,
    samples: int = 10**6,
    mc_n_max: int = 3,
    rho: Fraction = Fraction(1, 2),
) -> CheckResult:
    """Blow-up suite: infinite order for every k < n, the flagged Finite(2)
    at k = n, the x -> 0 degeneration to the CP^n value, and Monte Carlo at
    weight rho against the exact rational-function evaluation."""
    ok = True
    rows = []
    for n in range(2, n_max + 1):
        for k in range(1, n + 1):
            cv = blowup_weinstein(n, k)
            order = cv.order()
            flags = blowup_flags(n, k, order)
            at_zero = cv.value.components[k].evaluate(Fraction(0))
            degenerates = at_zero == cpn_q(n, k) / math.factorial(k)
            if k < n:
                good = not order.is_finite
            else:
                good = order == OrderResult.finite(2) and FINITE_ORDER_AT_TOP_DEGREE in flags
            good &= degenerates
            ok &= good
            rows.append(
                {
                    "n": n,
                    "k": k,
                    "order": order.to_json(),
                    "flags": flags,
                    "x0_matches_cpn": degenerates,
                    "ok": good,
                }
            )
    mc_rows = []
    x = Fraction(rho) ** 2
    for n in range(1, mc_n_max + 1):
        for k in range(1, n + 1):
            cv = blowup_weinstein(n, k)
            exact = float(cv.value.components[k].evaluate(x)) * math.pi**k
            est = mc_blowup_average(
                n, k, float(rho), samples, BASE_SEED + 2000 + 10 * n + k
            )
            sigma = est.sigma_distance(exact)
            ok &= sigma < SIGMA_BAND
            mc_rows.append(_mc_row({"n": n, "k": k, "rho": format_rational(rho)}, est, exact, sigma))
    return CheckResult(
        "blowup",
        ok,
        {"n_max": n_max, "samples": samples, "rows": rows, "monte_carlo": mc_rows},
    )


def check_product(n_max: int = 5) -> CheckResult:
    """Product suite: cpn(n,k) x trivial against a rational-period descriptor
    is nontrivial for all k <= n <= n_max, with the factor-lattice containment
    checked generator by generator inside product_value."""
    descriptor = ManifoldDescriptor.from_json(
        {
            "dimension": 2 * n_max,
            "trivial_odd_homotopy": [2 * k - 1 for k in range(1, n_max + 1)],
            "periods": {str(2 * j): ["1/2"] for j in range(1, n_max + 1)},
        }
    )
    ok = True
    rows = []
    for n in range(1, n_max + 1):
        for k in range(1, n + 1):
            cv = cpn_weinstein(n, k)
            full = product_cpn_lattice(n, k, descriptor)
            product = product_value(
                cv.value,
                cv.lattice,
                PiGradedValue.zero(),
                descriptor.period_lattice(k),
                full,
            )
            nontrivial = not product.is_trivial()
            ok &= nontrivial
            rows.append(
                {
                    "n": n,
                    "k": k,
                    "generators_checked": len(cv.lattice.generators)
                    + len(descriptor.period_lattice(k).generators),
                    "nontrivial": nontrivial,
                }
            )
    return CheckResult("product", ok, {"n_max": n_max, "rows": rows})


def check_mc_determinism(samples: int = 10**5) -> CheckResult:
    """Identical (parameters, seed) must reproduce estimates bit for bit."""
    seed = BASE_SEED + 3000
    first = mc_ball_moment(2, 1, 1, 1.0, samples, seed)
    second = mc_ball_moment(2, 1, 1, 1.0, samples, seed)
    rng_a = np.random.Generator(np.random.PCG64(seed))
    rng_b = np.random.Generator(np.random.PCG64(seed))
    stream_equal = bool(
        np.array_equal(sample_ball(3, 1.0, rng_a, 64), sample_ball(3, 1.0, rng_b, 64))
    )
    passed = first == second and stream_equal
    return CheckResult(
        "mc-determinism",
        passed,
        {
            "samples": samples,
            "estimate_repeats_identically": first == second,
            "stream_repeats_identically": stream_equal,
            "mean": first.mean,
        },
    )


# ---------------------------------------------------------------------------
# decision-procedure oracle: bounded exhaustive search over integer vectors


def _box_solvable(gens: list[Fraction], target: Fraction, bound: int) -> bool:
    """Exhaustively search integer coefficients in [-bound, bound] for a
    combination of `gens` equal to `target`.  Supports 1-3 generators."""
    den = math.lcm(target.denominator, *(g.denominator for g in gens))
    g_int = [int(g * den) for g in gens]
    t = int(target * den)
    axis = np.arange(-bound, bound + 1, dtype=np.int64)
    if len(g_int) == 1:
        sums = axis * g_int[0]
    elif len(g_int) == 2:
        sums = axis[:, None] * g_int[0] + axis[None, :] * g_int[1]
    elif len(g_int) == 3:
        sums = (
            axis[:, None, None] * g_int[0]
            + axis[None, :, None] * g_int[1]
            + axis[None, None, :] * g_int[2]
        )
    else:
        raise ValueError("box search supports at most 3 generators per monomial")
    return bool(np.any(sums == t))


def brute_force_member(
    value: PiGradedValue,
    raw_generators: list[tuple[Fraction, int, int]],
    bound: int,
) -> bool:
    """Membership by bounded exhaustive search, independent of the lattice
    decision procedures: works on the raw (uncollapsed) generator list and
    never touches rational_gcd or divisibility reasoning.

    Integer combinations of monomial generators are polynomial and supported
    on the generator monomials, so a non-polynomial component or a monomial
    with no generators decides immediately; otherwise each monomial is an
    independent coordinate of the linear system and is searched exhaustively.
    """
    groups: dict[tuple[int, int], list[Fraction]] = {}
    for coeff, a, b in raw_generators:
        groups.setdefault((a, b), []).append(Fraction(coeff))
    for a, f in value.components.items():
        if not f.is_polynomial:
            return False
        for b, coeff in f.num.terms.items():
            gens = groups.get((a, b))
            if not gens:
                return False
            if not _box_solvable(gens, coeff, bound):
                return False
    return True


def _proper_divisors(d: int) -> list[int]:
    return [m for m in range(1, d) if d % m == 0]


def _confirm_order(
    value: PiGradedValue,
    raw_generators: list[tuple[Fraction, int, int]],
    order: OrderResult,
    bound: int,
) -> bool:
    """Confirm an order result against the box search.

    Finite(d): d*value must be reachable and no proper divisor multiple may
    be (multiples m with m*value in the lattice form a subgroup d'*Z of Z, so
    checking divisors of d suffices for minimality).  Infinite: no multiple
    up to 8 may be reachable.
    """
    if order.is_finite:
        d = order.order
        if not brute_force_member(d * value, raw_generators, bound):
            return False
        return all(
            not brute_force_member(m * value, raw_generators, bound)
            for m in _proper_divisors(d)
        )
    return all(
        not brute_force_member(m * value, raw_generators, bound) for m in range(1, 9)
    )


def _random_instance(rnd: random.Random, kind: str):
    """One randomized (value, raw generator list) pair of the given kind.

    Values are constructed so that whenever a bounded representation exists
    at all, it exists within the [-50, 50] search box; ground truth never
    comes from the code under test.
    """
    def random_coeff() -> Fraction:
        return Fraction(rnd.randint(1, 20), rnd.randint(1, 20))

    def random_cells(count: int, distinct: bool) -> list[tuple[int, int]]:
        cells = []
        while len(cells) < count:
            cell = (rnd.randint(0, 2), rnd.randint(0, 2))
            if distinct and cell in cells:
                continue
            cells.append(cell)
        return cells

    if kind == "member":
        # Integer combination with small witness coefficients; shared
        # monomials allowed.
        r = rnd.randint(1, 3)
        cells = random_cells(r, distinct=False)
        gens = [(random_coeff(), a, b) for a, b in cells]
        value = PiGradedValue.zero()
        for coeff, a, b in gens:
            value = value + PiGradedValue.monomial(coeff * rnd.randint(-15, 15), a, b)
        return value, gens

    if kind == "fractional":
        # Per-cell coefficients t/s of the generator with small t and s, so
        # any finite order is at most lcm(2,3,4) and every multiple the
        # confirmation needs stays inside the box.
        r = rnd.randint(1, 3)
        cells = random_cells(r, distinct=True)
        gens = [(random_coeff(), a, b) for a, b in cells]
        value = PiGradedValue.zero()
        for coeff, a, b in gens:
            s = rnd.choice([1, 2, 3, 4])
            t = rnd.choice([t for t in range(-4, 5) if t and math.gcd(t, s) == 1])
            value = value + PiGradedValue.monomial(coeff * Fraction(t, s), a, b)
        return value, gens

    if kind == "offsupport":
        # A monomial outside the generator support can never be cleared.
        gens = [(random_coeff(), a, b) for a, b in random_cells(rnd.randint(1, 2), True)]
        occupied = {(a, b) for _, a, b in gens}
        while True:
            cell = (rnd.randint(0, 3), rnd.randint(0, 3))
            if cell not in occupied:
                break
        value = PiGradedValue.monomial(random_coeff(), *cell)
        if gens and rnd.random() < 0.5:
            coeff, a, b = gens[0]
            value = value + PiGradedValue.monomial(coeff * rnd.randint(1, 10), a, b)
        return value, gens

    if kind == "nonpoly":
        # A reduced rational-function component is not an integer combination
        # of monomials, whatever the lattice.
        gens = [(random_coeff(), a, b) for a, b in random_cells(rnd.randint(1, 2), True)]
        f = RatFuncQ(
            PolyQ.monomial(1, Fraction(rnd.randint(1, 5))),
            PolyQ({0: Fraction(1), 1: Fraction(1)}),
        )
        return PiGradedValue({rnd.randint(0, 2): f}), gens

    if kind == "halfgcd":
        # Two generators sharing one monomial; the target is an odd
        # half-multiple of the true span generator, computed with stdlib
        # integer gcd only.  Magnitudes are capped so the minimal Bezout
        # witness for the order-2 confirmation fits in the search box:
        # cleared numerators are at most 8*8 = 64, so the reduced solution
        # has |coefficients| <= 64/2 + 13 < 50.
        cell = (rnd.randint(0, 2), rnd.randint(0, 2))
        g1 = Fraction(rnd.randint(1, 8), rnd.randint(1, 8))
        g2 = Fraction(rnd.randint(1, 8), rnd.randint(1, 8))
        den = math.lcm(g1.denominator, g2.denominator)
        span = Fraction(
            math.gcd(g1.numerator * (den // g1.denominator),
                     g2.numerator * (den // g2.denominator)),
            den,
        )
        value = PiGradedValue.monomial(span * Fraction(2 * rnd.randint(0, 6) + 1, 2), *cell)
        return value, [(g1, *cell), (g2, *cell)]

    raise ValueError(f"unknown instance kind {kind!r}")


def check_decision_procedures(
    instances: int = 200, bound: int = 50, seed: int = BASE_SEED + 4000
) -> CheckResult:
    """lattice_member / lattice_order against the bounded exhaustive search
    on randomized small instances."""
    rnd = random.Random(seed)
    kinds = ["member", "fractional", "offsupport", "nonpoly", "halfgcd"]
    mismatches = []
    counts = {kind: 0 for kind in kinds}
    for i in range(instances):
        kind = kinds[i % len(kinds)]
        counts[kind] += 1
        value, raw_gens = _random_instance(rnd, kind)
        lattice = Lattice(raw_gens)
        member = lattice_member(value, lattice)
        order = lattice_order(value, lattice)
        brute = brute_force_member(value, raw_gens, bound)
        order_ok = _confirm_order(value, raw_gens, order, bound)
        if member != brute or not order_ok:
            mismatches.append(
                {
                    "kind": kind,
                    "value": str(value),
                    "generators": [
                        f"{format_rational(c)}*pi^{a}*x^{b}" for c, a, b in raw_gens
                    ],
                    "member": member,
                    "brute_member": brute,
                    "order": order.to_json(),
                    "order_confirmed": order_ok,
                }
            )
    return CheckResult(
        "decision-procedures",
        not mismatches,
        {
            "instances": instances,
            "bound": bound,
            "seed": seed,
            "kinds": counts,
            "mismatches": mismatches,
        },
    )


def _mc_row(params: dict, est: McEstimate, exact: float, sigma: float) -> dict:
    row = dict(params)
    row.update(
        {
            "exact": exact,
            "mean": est.mean,
            "std_error": est.std_error,
            "seed": est.seed,
            "sigma": sigma,
            "ok": sigma < SIGMA_BAND,
        }
    )
    return row


def run_all(quick: bool = False) -> list[CheckResult]:
    """The full verification suite; `quick` caps brute force at k <= 4 and
    Monte Carlo at 10^5 samples."""
    if quick:
        samples, k_cap, n_cap = 10**5, 4, 4
    else:
        samples, k_cap, n_cap = 10**6, 7, 8
    return [
        check_identity_suite(k_max=k_cap),
        check_moment_sums(k_max=min(k_cap, 6), l_max=min(k_cap, 6)),
        check_ball_moments(samples=samples),
        check_cpn_exact(n_max=n_cap),
        check_cpn_monte_carlo(samples=samples),
        check_blowup(n_max=n_cap, samples=samples),
        check_product(n_max=min(n_cap, 5)),
        check_decision_procedures(),
        check_mc_determinism(samples=min(samples, 10**5)),
    ]
