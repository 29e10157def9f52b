"""Recognition and decomposition of two-variable polynomial automorphisms.

A pair (g1, g2) is an automorphism of the plane exactly when it factors into
invertible linear maps and shears ``x -> x + f(y), y -> y``.  With
``deg g1 >= deg g2`` the pair is either affine or there is a unique scalar
``mu`` and positive integer ``d`` with ``deg(g1 - mu * g2^d) < deg g1``; the
sum of the component degrees strictly drops at every such step, which makes
the recognition loop terminate and yields the factorization as a
certificate.  The same descent on degrees powers the univariate
generating-pair test.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from elemtrans.poly import PolyMap, Polynomial, compose, format_poly


def embed_univariate(f: Polynomial, var: int, nvars: int = 2) -> Polynomial:
    """View a one-variable polynomial as a polynomial in variable ``var``."""
    if f.nvars != 1:
        raise ValueError("expected a univariate polynomial")
    terms = {}
    for (e,), c in f.terms.items():
        m = tuple(e if k == var - 1 else 0 for k in range(nvars))
        terms[m] = c
    return Polynomial(nvars, terms)


@dataclass(frozen=True)
class LinearFactor:
    """Invertible linear map x -> a*x + b*y, y -> c*x + d*y."""

    matrix: tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]

    def __post_init__(self):
        (a, b), (c, d) = self.matrix
        if a * d - b * c == 0:
            raise ValueError("linear factor must be invertible")

    def det(self) -> Fraction:
        (a, b), (c, d) = self.matrix
        return a * d - b * c

    def map(self) -> PolyMap:
        (a, b), (c, d) = self.matrix
        x = Polynomial.variable(1, 2)
        y = Polynomial.variable(2, 2)
        return PolyMap((x.scale(a) + y.scale(b), x.scale(c) + y.scale(d)))

    def inverse(self) -> "LinearFactor":
        (a, b), (c, d) = self.matrix
        det = self.det()
        return LinearFactor(((d / det, -b / det), (-c / det, a / det)))

    def is_swap(self) -> bool:
        return self.matrix == ((0, 1), (1, 0))

    def to_json_dict(self) -> dict:
        return {"kind": "linear", "matrix": [[str(c) for c in row] for row in self.matrix]}


def linear(a, b, c, d) -> LinearFactor:
    return LinearFactor(
        ((Fraction(a), Fraction(b)), (Fraction(c), Fraction(d)))
    )


SWAP = linear(0, 1, 1, 0)


@dataclass(frozen=True)
class ShearFactor:
    """x -> x + f(y), y -> y; f may include a constant term."""

    f: Polynomial  # univariate

    def __post_init__(self):
        if self.f.nvars != 1:
            raise ValueError("shear polynomial must be univariate")

    def map(self) -> PolyMap:
        x = Polynomial.variable(1, 2)
        y = Polynomial.variable(2, 2)
        return PolyMap((x + embed_univariate(self.f, 2), y))

    def inverse(self) -> "ShearFactor":
        return ShearFactor(-self.f)

    def to_json_dict(self) -> dict:
        return {"kind": "shear", "f": format_poly(self.f)}


ElementaryFactor = LinearFactor | ShearFactor


def compose_factors(factors) -> PolyMap:
    """The map F1 o F2 o ... o Fk (the last factor acts on variables first)."""
    acc = PolyMap.identity(2)
    for f in factors:
        acc = compose(acc, f.map())
    return acc


@dataclass(frozen=True)
class Decomposition:
    """Ordered elementary factors; reduction factors carry their (mu, d).

    ``steps`` is aligned with ``factors``: None for factors that are not
    degree-reduction steps (swaps and the affine prefix).
    """

    factors: tuple[ElementaryFactor, ...]
    steps: tuple[tuple[Fraction, int] | None, ...] = ()

    def __post_init__(self):
        if self.steps and len(self.steps) != len(self.factors):
            raise ValueError("steps must align with factors")

    def compose(self) -> PolyMap:
        return compose_factors(self.factors)

    def inverse_factors(self) -> tuple[ElementaryFactor, ...]:
        return tuple(f.inverse() for f in reversed(self.factors))

    def reduction_steps(self) -> list[tuple[Fraction, int]]:
        return [s for s in self.steps if s is not None]

    def to_json_dict(self) -> dict:
        steps = self.steps or (None,) * len(self.factors)
        recs = []
        for f, step in zip(self.factors, steps):
            rec = f.to_json_dict()
            rec["mu"] = str(step[0]) if step else None
            rec["d"] = step[1] if step else None
            recs.append(rec)
        return {"factors": recs}


@dataclass(frozen=True)
class DecomposeVerdict:
    is_automorphism: bool
    decomposition: Decomposition | None
    reason: str = ""

    def to_json_dict(self) -> dict:
        return {
            "verdict": "automorphism" if self.is_automorphism else "not_automorphism",
            "decomposition": (
                self.decomposition.to_json_dict() if self.decomposition else None
            ),
            "reason": self.reason or None,
        }


def _leading_form_scalar(g1: Polynomial, g2_pow: Polynomial) -> Fraction | None:
    """The unique mu with leading_form(g1) == mu * g2_pow, if any."""
    lf1 = g1.leading_form()
    _, m0 = g2_pow.leading_term()
    c1 = lf1.coefficient(m0)
    if c1 == 0:
        return None
    mu = c1 / g2_pow.coefficient(m0)
    return mu if lf1 == g2_pow.scale(mu) else None


def _translation_factors(c1: Fraction, c2: Fraction) -> list[ElementaryFactor]:
    out: list[ElementaryFactor] = []
    if c1:
        out.append(ShearFactor(Polynomial.const(c1, 1)))
    if c2:
        out.extend([SWAP, ShearFactor(Polynomial.const(c2, 1)), SWAP])
    return out


def _affine_factors(g1: Polynomial, g2: Polynomial):
    x, y, one = (1, 0), (0, 1), (0, 0)
    A = ((g1.coefficient(x), g1.coefficient(y)), (g2.coefficient(x), g2.coefficient(y)))
    if A[0][0] * A[1][1] - A[0][1] * A[1][0] == 0:
        return None
    factors: list[ElementaryFactor] = []
    lin = LinearFactor(A)
    if not lin.map().is_identity():
        factors.append(lin)
    factors.extend(_translation_factors(g1.coefficient(one), g2.coefficient(one)))
    return factors


def decompose_automorphism(g1: Polynomial, g2: Polynomial) -> DecomposeVerdict:
    """Factor the pair into linear maps and shears, or explain the failure.

    The composition of the returned factors reproduces (g1, g2) exactly, and
    deg g1 + deg g2 strictly decreased at every nonlinear step of its
    construction.
    """
    if g1.nvars != 2 or g2.nvars != 2:
        raise ValueError("decomposition requires two-variable polynomials")
    a, b = g1, g2
    tail: list[ElementaryFactor] = []
    steps: list[tuple[Fraction, int] | None] = []
    while True:
        da, db = a.degree(), b.degree()
        if da <= 0 or db <= 0:
            return DecomposeVerdict(False, None, "component constant")
        if da == 1 and db == 1:
            affine = _affine_factors(a, b)
            if affine is None:
                return DecomposeVerdict(False, None, "linear part singular")
            factors = tuple(affine) + tuple(reversed(tail))
            full_steps = (None,) * len(affine) + tuple(reversed(steps))
            dec = Decomposition(factors, full_steps)
            if dec.compose() != PolyMap((g1, g2)):
                raise AssertionError("factor composition failed to reproduce the pair")
            return DecomposeVerdict(True, dec)
        if db > da:
            a, b = b, a
            tail.append(SWAP)
            steps.append(None)
            continue
        if da % db != 0:
            return DecomposeVerdict(
                False, None, "degree of g1 is not a multiple of degree of g2"
            )
        d = da // db
        power = b.leading_form() ** d
        mu = _leading_form_scalar(a, power)
        if mu is None:
            return DecomposeVerdict(
                False,
                None,
                "leading form of g1 is not a scalar multiple of a power of the"
                " leading form of g2",
            )
        reduced = a - (b**d).scale(mu)
        if reduced.degree() >= da:
            raise AssertionError("degree did not drop after cancelling leading forms")
        if d == 1:
            tail.append(linear(1, mu, 0, 1))
        else:
            tail.append(ShearFactor(Polynomial(1, {(d,): mu})))
        steps.append((mu, d))
        a = reduced


def invert_automorphism(dec: Decomposition) -> PolyMap:
    """Two-sided inverse obtained by inverting each factor in reverse order."""
    return compose_factors(dec.inverse_factors())


# ---------------------------------------------------------------------------
# univariate generating pairs (degree-divisibility descent)

@dataclass(frozen=True)
class UnivariatePairVerdict:
    generating: bool
    trace: tuple[dict, ...] = ()
    reason: str = ""
    witness_degrees: tuple[int, int] | None = None

    def to_json_dict(self) -> dict:
        return {
            "verdict": "generating" if self.generating else "not_generating",
            "trace": list(self.trace),
            "reason": self.reason or None,
            "witness_degrees": (
                list(self.witness_degrees) if self.witness_degrees else None
            ),
        }


def is_univariate_generating_pair(
    u: Polynomial, v: Polynomial
) -> UnivariatePairVerdict:
    """Do u(t), v(t) generate all of K[t]?

    Subtracting ``mu * lower^(n/m)`` from the higher-degree element strictly
    drops its degree while preserving the generated subalgebra; a pair of
    degrees at least 2 where neither divides the other can never generate,
    and reaching a degree-1 element certifies generation.
    """
    if u.nvars != 1 or v.nvars != 1:
        raise ValueError("expected univariate polynomials")
    a, b = u, v
    trace: list[dict] = []
    while True:
        da, db = a.degree(), b.degree()
        if da == 1 or db == 1:
            return UnivariatePairVerdict(True, tuple(trace))
        if da <= 0 and db <= 0:
            return UnivariatePairVerdict(False, tuple(trace), "both elements constant")
        if da <= 0 or db <= 0:
            return UnivariatePairVerdict(
                False,
                tuple(trace),
                "single nonconstant element of degree at least 2",
                (max(da, 0), max(db, 0)),
            )
        hi, lo, hi_slot = (a, b, 0) if da >= db else (b, a, 1)
        dh, dl = hi.degree(), lo.degree()
        if dh % dl != 0:
            return UnivariatePairVerdict(
                False,
                tuple(trace),
                "neither degree divides the other",
                (da, db),
            )
        d = dh // dl
        mu = hi.leading_coeff() / lo.leading_coeff() ** d
        new_hi = hi - (lo**d).scale(mu)
        trace.append(
            {
                "reduced": hi_slot,
                "mu": str(mu),
                "d": d,
                "degree_before": dh,
                "degree_after": new_hi.degree(),
            }
        )
        if hi_slot == 0:
            a = new_hi
        else:
            b = new_hi


def random_generating_pair(seed: int, steps: int = 4) -> tuple[Polynomial, Polynomial]:
    """Reverse reduction steps applied to (t, 1): always a generating pair."""
    rng = random.Random(seed)
    t = Polynomial.variable(1, 1)
    a, b = t, Polynomial.const(rng.randrange(1, 3), 1)
    for _ in range(steps):
        mu = Fraction(rng.choice([1, -1, 2, -2]))
        d = rng.randrange(1, 3)
        if rng.random() < 0.5:
            a = a + (b**d).scale(mu) if b.degree() > 0 else a + Polynomial.const(mu, 1)
        else:
            b = b + (a**d).scale(mu)
    return a, b


# ---------------------------------------------------------------------------
# random tame maps (round-trip harness)

def random_tame_automorphism(
    seed: int,
    k: int,
    coeff_bound: int = 2,
    degree_bound: int = 3,
    degree_cap: int = 64,
) -> tuple[PolyMap, Decomposition]:
    """A composition of k random shear/linear factors, with its factor list.

    If the composed degree exceeds the cap the factors are redrawn with a
    smaller shear-degree bound; nothing is ever truncated.
    """
    if k < 0:
        raise ValueError("factor count must be nonnegative")
    rng = random.Random(seed)
    bound = max(1, degree_bound)
    attempts = 0
    while True:
        factors: list[ElementaryFactor] = []
        for _ in range(k):
            if rng.random() < 0.68:
                d = rng.randrange(1, bound + 1)
                c = Fraction(rng.choice([1, -1, 2, -2, 3]))
                terms = {(d,): c}
                if rng.random() < 0.3:
                    terms[(rng.randrange(0, d),)] = Fraction(rng.choice([1, -1, 2]))
                factors.append(ShearFactor(Polynomial(1, terms)))
            elif rng.random() < 0.5:
                factors.append(SWAP)
            else:
                while True:
                    entries = [rng.randrange(-2, 3) for _ in range(4)]
                    if entries[0] * entries[3] - entries[1] * entries[2] != 0:
                        break
                factors.append(linear(*entries))
        phi = compose_factors(factors)
        if phi.degree() <= degree_cap:
            return phi, Decomposition(tuple(factors))
        attempts += 1
        if attempts % 2 == 0:
            bound = max(1, bound - 1)
