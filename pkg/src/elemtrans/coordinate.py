"""Coordinate polynomials in two variables via gradient reductions.

A polynomial is a coordinate exactly when its gradient row can be carried
to (1, 0) using only regular (elementary) Groebner reductions; the product
of the elementary factors is the certificate.  Along the search the maximum
monomial degree of the pair never increases, and it drops strictly once the
divisions at the current degree level are complete, which bounds the number
of levels by the initial degree.  Certificates are completed with a
polynomial q such that (p, q) is an automorphism, found by an
approximate-root construction on the leading form, and with the inverted
factor sequence that carries p to x.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from elemtrans.groebner import (
    DiagFactor,
    ElemFactor,
    GEMatrix,
    RegularStep,
    SingularStep,
    contains_one,
    s_polynomial,
    swap_factors,
)
from elemtrans.poly import (
    PolyMap,
    Polynomial,
    deglex_key,
    is_jacobian_unit,
    jacobian_det,
    monomial_div,
    monomial_divides,
)
from elemtrans.tame import (
    ElementaryFactor,
    LinearFactor,
    decompose_automorphism,
)


class CompletionError(RuntimeError):
    """Internal failure to complete a certified coordinate to a basis."""


def unimodular_gradient(p: Polynomial) -> bool:
    """Do the partial derivatives generate the unit ideal?"""
    partials = [p.partial_derivative(i) for i in range(1, p.nvars + 1)]
    nonzero = [g for g in partials if not g.is_zero()]
    if not nonzero:
        return False  # constant polynomial
    return contains_one(nonzero)


def _maxdeg(a: Polynomial, b: Polynomial) -> int:
    return max(a.degree(), b.degree())


def _divide_once(target: Polynomial, source: Polynomial):
    """Full single-divisor division; returns (quotient, remainder, step count)."""
    q = Polynomial.zero(target.nvars)
    r = Polynomial.zero(target.nvars)
    cur = target
    sc, sm = source.leading_term()
    steps = 0
    while cur:
        c, m = cur.leading_term()
        if monomial_divides(sm, m):
            piece = Polynomial(target.nvars, {monomial_div(m, sm): c / sc})
            q = q + piece
            cur = cur - piece * source
            steps += 1
        else:
            t = Polynomial(target.nvars, {m: c})
            r = r + t
            cur = cur - t
    return q, r, steps


@dataclass(frozen=True)
class RoundRecord:
    target: int
    quotient: Polynomial
    steps: int
    maxdeg_before: int
    maxdeg_after: int

    def to_json_dict(self) -> dict:
        return {
            "target": self.target,
            "quotient": str(self.quotient),
            "steps": self.steps,
            "maxdeg_before": self.maxdeg_before,
            "maxdeg_after": self.maxdeg_after,
        }


@dataclass(frozen=True)
class GradientReduction:
    reached: bool
    matrix: GEMatrix | None
    rounds: tuple[RoundRecord, ...]
    final_pair: tuple[Polynomial, Polynomial]
    step_count: int

    def degree_levels(self) -> list[int]:
        """Distinct pair max-degrees along the trace, strictly decreasing."""
        levels: list[int] = []
        for r in self.rounds:
            for d in (r.maxdeg_before, r.maxdeg_after):
                if not levels or d < levels[-1]:
                    levels.append(d)
        return levels

    def to_json_dict(self) -> dict:
        return {
            "verdict": "reached" if self.reached else "stuck",
            "matrix_factors": self.matrix.to_json_dict() if self.matrix else None,
            "rounds": [r.to_json_dict() for r in self.rounds],
            "final_pair": [str(self.final_pair[0]), str(self.final_pair[1])],
            "step_count": self.step_count,
        }


def _terminal_factors(pair):
    """Normalization factors carrying (c,0) or (0,c) to (1,0), or None."""
    a, b = pair
    if b.is_zero() and a.is_constant() and not a.is_zero():
        c = a.constant_value()
        return [] if c == 1 else [DiagFactor(Fraction(1) / c, Fraction(1))]
    if a.is_zero() and b.is_constant() and not b.is_zero():
        c = b.constant_value()
        out = swap_factors(a.nvars)
        if c != 1:
            out.append(DiagFactor(Fraction(1) / c, Fraction(1)))
        return out
    return None


def _round_moves(pair):
    """Candidate full-division rounds, deglex-larger component first."""
    a, b = pair
    if a.is_zero() or b.is_zero():
        return []
    order = (
        (0, 1)
        if deglex_key(a.leading_monomial()) >= deglex_key(b.leading_monomial())
        else (1, 0)
    )
    return list(order)


def _apply_round(pair, target):
    source = pair[1 - target]
    quotient, remainder, steps = _divide_once(pair[target], source)
    if quotient.is_zero():
        return None
    new = (remainder, source) if target == 0 else (source, remainder)
    return new, quotient, steps


def _search_elementary(pair0, node_budget: int = 20000):
    """Depth-first search over full divisions of one component by the other.

    Every division strictly decreases the leading monomial of its target, so
    paths are finite; the pair's maximum monomial degree can never increase.
    Failed states are memoized on monic-normalized pairs.
    """
    failed: set = set()
    path: list[tuple[RoundRecord, int]] = []  # record + target
    explored = 0

    def key(pair):
        return (pair[0].monic(), pair[1].monic())

    def dfs(pair) -> bool:
        nonlocal explored
        if _terminal_factors(pair) is not None:
            return True
        k = key(pair)
        if k in failed:
            return False
        explored += 1
        if explored > node_budget:
            return False
        before = _maxdeg(*pair)
        for target in _round_moves(pair):
            out = _apply_round(pair, target)
            if out is None:
                continue
            new, quotient, steps = out
            rec = RoundRecord(target, quotient, steps, before, _maxdeg(*new))
            path.append((rec, target))
            if dfs(new):
                return True
            path.pop()
        failed.add(k)
        return False

    ok = dfs(pair0)
    return ok, path, explored


def elementary_reduce_gradient(
    p: Polynomial, node_budget: int = 20000
) -> GradientReduction:
    """Carry (d1 p, d2 p) to (1, 0) by regular reductions, or report stuck.

    The returned matrix is verified by exact multiplication against the
    gradient row before returning.
    """
    if p.nvars != 2:
        raise ValueError("gradient reduction requires two variables")
    g = (p.partial_derivative(1), p.partial_derivative(2))
    ok, path, _ = _search_elementary(g, node_budget)
    if not ok:
        # replay the deterministic primary loop to report an honest final pair
        pair = g
        while _terminal_factors(pair) is None:
            for target in _round_moves(pair):
                out = _apply_round(pair, target)
                if out is not None:
                    pair = out[0]
                    break
            else:
                break
        return GradientReduction(False, None, (), pair, 0)
    matrix = GEMatrix(2)
    pair = g
    rounds = []
    total_steps = 0
    for rec, target in path:
        pos = (2, 1) if target == 0 else (1, 2)
        matrix.append(ElemFactor(pos, -rec.quotient))
        out = _apply_round(pair, target)
        pair = out[0]
        rounds.append(rec)
        total_steps += rec.steps
    matrix.extend(_terminal_factors(pair))
    one = Polynomial.const(1, 2)
    zero = Polynomial.zero(2)
    if not matrix.verify_row_identity(g, (one, zero)):
        raise AssertionError("gradient certificate failed verification")
    return GradientReduction(True, matrix, tuple(rounds), (one, zero), total_steps)


# ---------------------------------------------------------------------------
# completion to a basis via the leading-form approximate root

def _homogeneous_part(p: Polynomial, d: int) -> Polynomial:
    return Polynomial(p.nvars, {m: c for m, c in p.terms.items() if sum(m) == d})


def _linear_power_root(form: Polynomial):
    """Write a binary form as gamma * (alpha*x + beta*y)^D, or return None."""
    D = form.degree()
    gamma = form.coefficient((D, 0))
    if gamma == 0:
        c = form.coefficient((0, D))
        if c == 0 or form != Polynomial(2, {(0, D): c}):
            return None
        return Fraction(0), Fraction(1), c
    beta = form.coefficient((D - 1, 1)) / (gamma * D)
    x = Polynomial.variable(1, 2)
    y = Polynomial.variable(2, 2)
    if form != ((x + y.scale(beta)) ** D).scale(gamma):
        return None
    return Fraction(1), beta, gamma


def _normalizing_linear(alpha: Fraction, beta: Fraction) -> LinearFactor:
    """Invertible L with (alpha*x + beta*y) o L = y."""
    if alpha != 0:
        return LinearFactor(
            ((-beta / alpha, Fraction(1) / alpha), (Fraction(1), Fraction(0)))
        )
    return LinearFactor(((Fraction(1), Fraction(0)), (Fraction(0), Fraction(1) / beta)))


def _divisors_below(D: int):
    return [e for e in range(1, D) if D % e == 0]


def _approx_root(phat: Polynomial, E: int) -> Polynomial | None:
    """Monic candidate q of degree E with deg(phat - q^(D/E)) <= E*(D/E - 1).

    The homogeneous parts of q are solved from the top down by cancelling
    the corresponding parts of phat - q^d.  Above degree E*(d-1) each level
    must cancel exactly (a true completion leaves no residual there); at
    E*(d-1) and below the residual of the descent legitimately survives.
    """
    D = phat.degree()
    d = D // E
    q = Polynomial(2, {(0, E): Fraction(1)})
    shift = E * (d - 1)
    for delta in range(E - 1, -1, -1):
        R = phat - q**d
        level = shift + delta
        if R.degree() > level:
            return None
        form = _homogeneous_part(R, level)
        if form.is_zero():
            continue
        if any(m[1] < shift for m in form.terms):
            if delta == 0:
                break  # residual territory; leave it to the pair descent
            return None
        correction = Polynomial(
            2, {(m[0], m[1] - shift): c / d for m, c in form.terms.items()}
        )
        q = q + correction
    return q


def _complete_coordinate(p: Polynomial) -> Polynomial:
    """A q with (p, q) an automorphism and deg q <= deg p; p must be coordinate."""
    D = p.degree()
    if D <= 0:
        raise CompletionError("constants cannot be completed")
    x = Polynomial.variable(1, 2)
    y = Polynomial.variable(2, 2)
    if D == 1:
        q = y if p.coefficient((1, 0)) != 0 else x
        if not is_jacobian_unit(PolyMap((p, q))):
            raise CompletionError("degenerate linear polynomial")
        return q
    root = _linear_power_root(p.leading_form())
    if root is None:
        raise CompletionError("leading form is not a power of a linear form")
    alpha, beta, gamma = root
    L = _normalizing_linear(alpha, beta)
    phat = p.substitute(L.map()).scale(Fraction(1) / gamma)
    for E in _divisors_below(D):
        q_hat = _approx_root(phat, E)
        if q_hat is None:
            continue
        det = jacobian_det(PolyMap((phat, q_hat)))
        if not det.is_constant() or det.is_zero():
            continue
        Linv = L.inverse().map()
        q = q_hat.substitute(Linv)
        if decompose_automorphism(p, q).is_automorphism:
            return q
    raise CompletionError("no completing polynomial found")


@dataclass(frozen=True)
class CoordCertificate:
    matrix: GEMatrix
    q: Polynomial
    auto_sequence: tuple[ElementaryFactor, ...]
    rounds: tuple[RoundRecord, ...]

    def to_json_dict(self) -> dict:
        return {
            "matrix_factors": self.matrix.to_json_dict(),
            "q": str(self.q),
            "auto_sequence": [f.to_json_dict() for f in self.auto_sequence],
            "trace": [r.to_json_dict() for r in self.rounds],
        }


@dataclass(frozen=True)
class CoordVerdict:
    coordinate: bool
    certificate: CoordCertificate | None
    reason: str = ""  # "gradient_not_unimodular" | "reduction_stuck"

    def to_json_dict(self) -> dict:
        return {
            "verdict": "coordinate" if self.coordinate else "not_coordinate",
            "certificate": (
                self.certificate.to_json_dict() if self.certificate else None
            ),
            "reason": self.reason or None,
        }


def _x1_sequence(p: Polynomial, q: Polynomial) -> tuple[ElementaryFactor, ...]:
    """Inverted decomposition factors; applied in order they carry p to x."""
    dec = decompose_automorphism(p, q)
    if not dec.is_automorphism:
        raise CompletionError("completion failed to decompose")
    return tuple(f.inverse() for f in dec.decomposition.factors)


def apply_sequence(p: Polynomial, sequence) -> Polynomial:
    for f in sequence:
        p = p.substitute(f.map())
    return p


def is_coordinate(p: Polynomial) -> CoordVerdict:
    """Coordinate membership with a fully verified certificate.

    Polynomials failing the unimodular-gradient test are rejected without
    any search.  On success the certificate is re-verified: the matrix
    identity by exact multiplication, the completion by its Jacobian, and
    the automorphism sequence by replaying it on p.
    """
    if p.nvars != 2:
        raise ValueError("coordinate detection requires two variables")
    if not unimodular_gradient(p):
        return CoordVerdict(False, None, "gradient_not_unimodular")
    reduction = elementary_reduce_gradient(p)
    if not reduction.reached:
        return CoordVerdict(False, None, "reduction_stuck")
    q = _complete_coordinate(p)
    sequence = _x1_sequence(p, q)
    det = jacobian_det(PolyMap((p, q)))
    if not det.is_constant() or det.is_zero():
        raise AssertionError("completion lost the unit Jacobian")
    if apply_sequence(p, sequence) != Polynomial.variable(1, 2):
        raise AssertionError("automorphism sequence does not reduce p to x")
    cert = CoordCertificate(reduction.matrix, q, sequence, reduction.rounds)
    return CoordVerdict(True, cert)


def complete_to_basis(p: Polynomial) -> Polynomial:
    """The certificate's completing polynomial; errors on non-coordinates."""
    verdict = is_coordinate(p)
    if not verdict.coordinate:
        raise ValueError(f"not a coordinate polynomial ({verdict.reason})")
    return verdict.certificate.q


def reduce_to_x1(p: Polynomial) -> tuple[ElementaryFactor, ...]:
    """Elementary automorphisms whose in-order application sends p to x."""
    verdict = is_coordinate(p)
    if not verdict.coordinate:
        raise ValueError(f"not a coordinate polynomial ({verdict.reason})")
    return verdict.certificate.auto_sequence


# ---------------------------------------------------------------------------
# experimental search: gradient to (1, 0) with at most one singular step

@dataclass(frozen=True)
class ConjectureGVerdict:
    found: bool
    steps: tuple | None
    singular_count: int
    states_explored: int

    def to_json_dict(self) -> dict:
        return {
            "verdict": "witness" if self.found else "none_found_within_budget",
            "steps": [s.to_json_dict() for s in self.steps] if self.steps else None,
            "singular_count": self.singular_count if self.found else None,
            "states_explored": self.states_explored,
        }


def replay_conjecture_witness(p: Polynomial, steps) -> tuple[Polynomial, Polynomial]:
    pair = [p.partial_derivative(1), p.partial_derivative(2)]
    for step in steps:
        if isinstance(step, RegularStep):
            pair[step.target] = (
                pair[step.target].scale(step.alpha)
                - step.multiplier * pair[step.source]
            )
        elif isinstance(step, SingularStep):
            s, rec = s_polynomial(pair[0], pair[1])
            if rec != step.record:
                raise ValueError("singular step record does not match replay")
            pair[step.replaced] = s
        else:
            raise TypeError(f"unknown step {step!r}")
    return pair[0], pair[1]


def conjecture_g_search(p: Polynomial, budget: int = 5000) -> ConjectureGVerdict:
    """Search for a reduction of the gradient to (1, 0) using at most one
    singular step; absence of a witness within the budget proves nothing.
    """
    if not unimodular_gradient(p):
        raise ValueError("conjecture search requires a unimodular gradient")
    g = (p.partial_derivative(1), p.partial_derivative(2))
    seen: set = set()
    explored = 0
    path: list = []

    def terminal(pair) -> bool:
        return _terminal_factors(pair) is not None

    def dfs(pair, used: bool) -> bool:
        nonlocal explored
        k = (pair[0], pair[1], used)
        if k in seen:
            return False
        seen.add(k)
        explored += 1
        if explored > budget:
            return False
        if terminal(pair):
            return True
        before = _maxdeg(*pair)
        for target in _round_moves(pair):
            out = _apply_round(pair, target)
            if out is None:
                continue
            new, quotient, _ = out
            if _maxdeg(*new) > before:
                continue
            path.append(RegularStep(target, 1 - target, quotient))
            if dfs(new, used):
                return True
            path.pop()
        if not used and not pair[0].is_zero() and not pair[1].is_zero():
            s, rec = s_polynomial(pair[0], pair[1])
            if not s.is_zero() and s.degree() <= before:
                for replaced in (1, 0):
                    new = (pair[0], s) if replaced == 1 else (s, pair[1])
                    path.append(SingularStep(replaced, rec))
                    if dfs(new, True):
                        return True
                    path.pop()
        return False

    if budget > 0 and dfs(g, False):
        steps = tuple(path)
        final = replay_conjecture_witness(p, steps)
        if _terminal_factors(final) is None:
            raise AssertionError("witness replay did not reach a terminal pair")
        singular = sum(1 for s in steps if isinstance(s, SingularStep))
        return ConjectureGVerdict(True, steps, singular, explored)
    return ConjectureGVerdict(False, None, 0, explored)
