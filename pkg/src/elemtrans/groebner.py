"""S-polynomials, Buchberger completion, and GE2 certificate matrices.

A reduction between a pair of polynomials is *regular* (elementary) when
one leading monomial divides the other; it is then realized by right
multiplication with a 2x2 elementary matrix.  All other S-polynomial steps
are *singular*.  ``GEMatrix`` tracks products of elementary and diagonal
factors so that row-vector identities can be replayed exactly.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction

from elemtrans.poly import (
    Monomial,
    Polynomial,
    deglex_key,
    divide,
    monomial_div,
    monomial_divides,
    monomial_lcm,
)


@dataclass(frozen=True)
class SPolyRecord:
    """The lcm and both leading terms entering S(p, q)."""

    lcm: Monomial
    lt_p: tuple[Fraction, Monomial]
    lt_q: tuple[Fraction, Monomial]

    def to_json_dict(self) -> dict:
        return {
            "lcm": list(self.lcm),
            "lt_p": {"coeff": str(self.lt_p[0]), "monomial": list(self.lt_p[1])},
            "lt_q": {"coeff": str(self.lt_q[0]), "monomial": list(self.lt_q[1])},
        }


def s_polynomial(p: Polynomial, q: Polynomial) -> tuple[Polynomial, SPolyRecord]:
    """S(p, q) = L/lt(p) * p - L/lt(q) * q with L = lcm of the leading monomials."""
    if p.is_zero() or q.is_zero():
        raise ValueError("S-polynomial of the zero polynomial")
    cp, mp = p.leading_term()
    cq, mq = q.leading_term()
    L = monomial_lcm(mp, mq)
    s = p.term_mul(Fraction(1) / cp, monomial_div(L, mp)) - q.term_mul(
        Fraction(1) / cq, monomial_div(L, mq)
    )
    return s, SPolyRecord(L, (cp, mp), (cq, mq))


def classify_reduction(p: Polynomial, q: Polynomial) -> str:
    """'regular' when one leading monomial divides the other, else 'singular'."""
    if p.is_zero() or q.is_zero():
        raise ValueError("cannot classify a reduction with a zero polynomial")
    mp = p.leading_monomial()
    mq = q.leading_monomial()
    if monomial_divides(mp, mq) or monomial_divides(mq, mp):
        return "regular"
    return "singular"


def reduce_mod_basis(p: Polynomial, basis: list[Polynomial]) -> Polynomial:
    """Full normal form of p modulo the basis (unique for a Groebner basis)."""
    if not basis:
        return p
    _, r = divide(p, basis)
    return r


def _validate_basis(gens: list[Polynomial]) -> list[Polynomial]:
    gens = [g for g in gens]
    if not gens:
        raise ValueError("ideal basis must be nonempty")
    if any(g.is_zero() for g in gens):
        raise ValueError("ideal basis must not contain zero")
    return gens


def _autoreduce(basis: list[Polynomial]) -> list[Polynomial]:
    basis = [g.monic() for g in basis if not g.is_zero()]
    changed = True
    while changed:
        changed = False
        for i in range(len(basis)):
            others = basis[:i] + basis[i + 1 :]
            if not others:
                continue
            r = reduce_mod_basis(basis[i], others)
            if r != basis[i]:
                changed = True
                if r.is_zero():
                    basis = others
                else:
                    basis = others + [r.monic()]
                break
    basis.sort(key=lambda g: deglex_key(g.leading_monomial()), reverse=True)
    return basis


class GroebnerBudgetExceeded(RuntimeError):
    """Raised when a capped Buchberger run grows past its addition budget."""


def buchberger(
    gens: list[Polynomial], max_additions: int | None = None
) -> list[Polynomial]:
    """Reduced Groebner basis under deglex, normal selection strategy.

    Pairs are processed in order of smallest lcm through a heap; pairs with
    coprime leading monomials are skipped (their S-polynomials reduce to
    zero).  The output is auto-reduced, monic, and sorted by descending
    leading monomial.  ``max_additions`` caps basis growth for callers that
    must stay budget-bounded; exceeding it raises, it never truncates.
    """
    basis = _autoreduce(_validate_basis(gens))
    if not basis:
        raise ValueError("ideal basis reduced to nothing; input was invalid")

    heap: list = []
    additions = 0

    def push_pairs(k: int):
        mk = basis[k].leading_monomial()
        for t in range(k):
            L = monomial_lcm(basis[t].leading_monomial(), mk)
            heapq.heappush(heap, (deglex_key(L), t, k, L))

    for k in range(len(basis)):
        push_pairs(k)
    while heap:
        _, i, j, L = heapq.heappop(heap)
        mi = basis[i].leading_monomial()
        mj = basis[j].leading_monomial()
        if tuple(a + b for a, b in zip(mi, mj)) == L:
            continue  # coprime leading monomials
        s, _ = s_polynomial(basis[i], basis[j])
        r = reduce_mod_basis(s, basis)
        if not r.is_zero():
            additions += 1
            if max_additions is not None and additions > max_additions:
                raise GroebnerBudgetExceeded(
                    f"basis grew past {max_additions} additions"
                )
            basis.append(r.monic())
            push_pairs(len(basis) - 1)
    return _autoreduce(basis)


def contains_one(gens: list[Polynomial]) -> bool:
    """Whether the generated ideal is the whole ring."""
    basis = buchberger(gens)
    return len(basis) == 1 and basis[0] == Polynomial.const(1, basis[0].nvars)


# ---------------------------------------------------------------------------
# GE2 certificates

@dataclass(frozen=True)
class ElemFactor:
    """Identity matrix plus one off-diagonal polynomial entry."""

    pos: tuple[int, int]  # (row, col), 1-based
    value: Polynomial

    def __post_init__(self):
        if self.pos not in ((1, 2), (2, 1)):
            raise ValueError("elementary factor entry must be off-diagonal")

    def matrix(self) -> list[list[Polynomial]]:
        n = self.value.nvars
        one = Polynomial.const(1, n)
        zero = Polynomial.zero(n)
        m = [[one, zero], [zero, one]]
        m[self.pos[0] - 1][self.pos[1] - 1] = self.value
        return m

    def to_json_dict(self) -> dict:
        return {"kind": "elem", "pos": list(self.pos), "value": str(self.value)}


@dataclass(frozen=True)
class DiagFactor:
    """Diagonal matrix with nonzero scalar entries."""

    a: Fraction
    b: Fraction

    def __post_init__(self):
        if self.a == 0 or self.b == 0:
            raise ValueError("diagonal factor entries must be nonzero")

    def matrix_for(self, nvars: int) -> list[list[Polynomial]]:
        return [
            [Polynomial.const(self.a, nvars), Polynomial.zero(nvars)],
            [Polynomial.zero(nvars), Polynomial.const(self.b, nvars)],
        ]

    def to_json_dict(self) -> dict:
        return {"kind": "diag", "a": str(self.a), "b": str(self.b)}


def _mat_mul(A, B):
    return [
        [
            A[i][0] * B[0][j] + A[i][1] * B[1][j]
            for j in range(2)
        ]
        for i in range(2)
    ]


def swap_factors(nvars: int = 2) -> list:
    """The swap matrix [[0,1],[1,0]] as elementary and diagonal factors."""
    one = Polynomial.const(1, nvars)
    return [
        ElemFactor((1, 2), one),
        ElemFactor((2, 1), -one),
        ElemFactor((1, 2), one),
        DiagFactor(Fraction(-1), Fraction(1)),
    ]


class GEMatrix:
    """Product of elementary and diagonal 2x2 factors over the polynomial ring.

    The determinant of the product is always a nonzero scalar, which is what
    keeps the product inside GE2.
    """

    def __init__(self, nvars: int = 2, factors: list | None = None):
        self.nvars = nvars
        self.factors: list = list(factors or [])
        self._product = None

    def append(self, factor) -> None:
        self.factors.append(factor)
        self._product = None

    def extend(self, factors) -> None:
        self.factors.extend(factors)
        self._product = None

    def product(self) -> list[list[Polynomial]]:
        if self._product is None:
            one = Polynomial.const(1, self.nvars)
            zero = Polynomial.zero(self.nvars)
            acc = [[one, zero], [zero, one]]
            for f in self.factors:
                m = (
                    f.matrix()
                    if isinstance(f, ElemFactor)
                    else f.matrix_for(self.nvars)
                )
                acc = _mat_mul(acc, m)
            self._product = acc
        return self._product

    def det(self) -> Polynomial:
        m = self.product()
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]

    def det_scalar(self) -> Fraction:
        """Product of the factor determinants (elementary factors have det 1)."""
        d = Fraction(1)
        for f in self.factors:
            if isinstance(f, DiagFactor):
                d *= f.a * f.b
        return d

    def apply_row(
        self, pair: tuple[Polynomial, Polynomial]
    ) -> tuple[Polynomial, Polynomial]:
        """Right-multiply the row vector (a, b) by the tracked product.

        Factors are applied one at a time, which is exact and avoids forming
        the full matrix product.
        """
        a, b = pair
        for f in self.factors:
            if isinstance(f, ElemFactor):
                if f.pos == (2, 1):
                    a = a + b * f.value
                else:
                    b = b + a * f.value
            else:
                a, b = a.scale(f.a), b.scale(f.b)
        return a, b

    def verify_row_identity(
        self,
        start: tuple[Polynomial, Polynomial],
        end: tuple[Polynomial, Polynomial],
    ) -> bool:
        return self.apply_row(start) == end and self.det_scalar() != 0

    def to_json_dict(self) -> list[dict]:
        return [f.to_json_dict() for f in self.factors]


# reduction-step records used by the coordinate search traces

@dataclass(frozen=True)
class RegularStep:
    """target <- alpha * target - r * source, realized by an elementary factor."""

    target: int  # 0 or 1, index within the pair
    source: int
    multiplier: Polynomial
    alpha: Fraction = Fraction(1)

    def __post_init__(self):
        if self.alpha == 0:
            raise ValueError("regular step scalar must be nonzero")
        if {self.target, self.source} != {0, 1}:
            raise ValueError("regular step must involve both components")

    def to_json_dict(self) -> dict:
        return {
            "kind": "regular",
            "target": self.target,
            "source": self.source,
            "multiplier": str(self.multiplier),
            "alpha": str(self.alpha),
        }


@dataclass(frozen=True)
class SingularStep:
    """One component replaced by the S-polynomial of the pair."""

    replaced: int
    record: SPolyRecord

    def to_json_dict(self) -> dict:
        return {
            "kind": "singular",
            "replaced": self.replaced,
            "record": self.record.to_json_dict(),
        }
