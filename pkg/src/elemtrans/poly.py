"""Sparse multivariate polynomials over the rationals under deglex order.

Monomials are exponent tuples compared first by total degree, then
lexicographically with ``x1 > x2 > ... > xn``.  Coefficients are exact
``fractions.Fraction`` values; zero coefficients are never stored, so equal
polynomials have identical term dictionaries.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

Monomial = tuple[int, ...]


class PolyParseError(ValueError):
    """Raised on malformed polynomial text; carries the offending position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


def deglex_key(m: Monomial) -> tuple[int, Monomial]:
    return (sum(m), m)


def monomial_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def monomial_divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def monomial_div(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x - y for x, y in zip(a, b))


def monomial_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


class Polynomial:
    """Immutable sparse polynomial with a fixed number of variables."""

    __slots__ = ("nvars", "terms", "_lm")

    def __init__(self, nvars: int, terms: Mapping[Monomial, Fraction] | None = None):
        if nvars < 1:
            raise ValueError("a polynomial needs at least one variable")
        clean: dict[Monomial, Fraction] = {}
        if terms:
            for m, c in terms.items():
                if len(m) != nvars:
                    raise ValueError(f"monomial {m} does not have {nvars} exponents")
                if any(e < 0 for e in m):
                    raise ValueError(f"negative exponent in monomial {m}")
                c = Fraction(c)
                if c:
                    clean[m] = c
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "_lm", None)

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    # -- constructors -------------------------------------------------------

    @classmethod
    def _raw(cls, nvars: int, terms: dict) -> "Polynomial":
        # internal fast path: caller guarantees valid monomials, Fraction
        # coefficients, and no stored zeros
        self = object.__new__(cls)
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "_lm", None)
        return self

    @staticmethod
    def zero(nvars: int) -> "Polynomial":
        return Polynomial(nvars)

    @staticmethod
    def const(c, nvars: int) -> "Polynomial":
        return Polynomial(nvars, {(0,) * nvars: Fraction(c)})

    @staticmethod
    def variable(i: int, nvars: int) -> "Polynomial":
        if not 1 <= i <= nvars:
            raise ValueError(f"variable index {i} out of range 1..{nvars}")
        m = tuple(1 if k == i - 1 else 0 for k in range(nvars))
        return Polynomial(nvars, {m: Fraction(1)})

    # -- predicates and views ------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_constant(self) -> bool:
        return all(sum(m) == 0 for m in self.terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return self.terms.get((0,) * self.nvars, Fraction(0))

    def degree(self) -> int:
        """Total degree; the zero polynomial reports -1."""
        if not self.terms:
            return -1
        return max(sum(m) for m in self.terms)

    def leading_monomial(self) -> Monomial:
        if not self.terms:
            raise ValueError("the zero polynomial has no leading term")
        lm = self._lm
        if lm is None:
            lm = max(self.terms, key=deglex_key)
            object.__setattr__(self, "_lm", lm)
        return lm

    def leading_term(self) -> tuple[Fraction, Monomial]:
        """Maximal monomial under deglex together with its coefficient."""
        lm = self.leading_monomial()
        return self.terms[lm], lm

    def leading_coeff(self) -> Fraction:
        return self.terms[self.leading_monomial()]

    def leading_form(self) -> "Polynomial":
        """Top-degree homogeneous part."""
        d = self.degree()
        if d < 0:
            raise ValueError("the zero polynomial has no leading form")
        return Polynomial._raw(
            self.nvars, {m: c for m, c in self.terms.items() if sum(m) == d}
        )

    def coefficient(self, m: Monomial) -> Fraction:
        return self.terms.get(m, Fraction(0))

    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        """Terms in descending deglex order (the canonical serialization)."""
        return sorted(self.terms.items(), key=lambda t: deglex_key(t[0]), reverse=True)

    # -- arithmetic ----------------------------------------------------------

    def _check(self, other: "Polynomial") -> None:
        if self.nvars != other.nvars:
            raise ValueError("variable-count mismatch")

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, Fraction(0)) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Polynomial._raw(self.nvars, out)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, Fraction(0)) - c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Polynomial._raw(self.nvars, out)

    def __neg__(self) -> "Polynomial":
        return Polynomial._raw(self.nvars, {m: -c for m, c in self.terms.items()})

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        out: dict[Monomial, Fraction] = {}
        zero = Fraction(0)
        get = out.get
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(map(sum, zip(m1, m2)))
                s = get(m, zero) + c1 * c2
                if s:
                    out[m] = s
                else:
                    del out[m]
        return Polynomial._raw(self.nvars, out)

    def scale(self, c) -> "Polynomial":
        c = Fraction(c)
        if not c:
            return Polynomial.zero(self.nvars)
        return Polynomial._raw(self.nvars, {m: c * v for m, v in self.terms.items()})

    def term_mul(self, c: Fraction, m: Monomial) -> "Polynomial":
        if not c:
            return Polynomial.zero(self.nvars)
        return Polynomial._raw(
            self.nvars, {monomial_mul(m, m2): c * c2 for m2, c2 in self.terms.items()}
        )

    def __pow__(self, k: int) -> "Polynomial":
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result = Polynomial.const(1, self.nvars)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    def monic(self) -> "Polynomial":
        if not self.terms:
            return self
        lc = self.leading_coeff()
        if lc == 1:
            return self
        return self.scale(Fraction(1) / lc)

    def partial_derivative(self, i: int) -> "Polynomial":
        """Formal derivative with respect to the i-th variable (1-based)."""
        if not 1 <= i <= self.nvars:
            raise ValueError(f"variable index {i} out of range 1..{self.nvars}")
        out: dict[Monomial, Fraction] = {}
        k = i - 1
        for m, c in self.terms.items():
            if m[k] == 0:
                continue
            dm = tuple(e - 1 if j == k else e for j, e in enumerate(m))
            out[dm] = out.get(dm, Fraction(0)) + c * m[k]
        return Polynomial(self.nvars, out)

    def substitute(self, phi: "PolyMap") -> "Polynomial":
        """Image under the endomorphism sending each variable to its image."""
        if phi.nvars != self.nvars:
            raise ValueError("variable-count mismatch")
        target = phi.images[0].nvars
        # powers of each image are shared across terms
        pow_cache: list[dict[int, Polynomial]] = [
            {0: Polynomial.const(1, target)} for _ in range(self.nvars)
        ]

        def power(var: int, e: int) -> Polynomial:
            cache = pow_cache[var]
            if e not in cache:
                half = power(var, e // 2)
                sq = half * half
                cache[e] = sq if e % 2 == 0 else sq * phi.images[var]
            return cache[e]

        acc = Polynomial.zero(target)
        for m, c in self.terms.items():
            part = Polynomial.const(c, target)
            for var, e in enumerate(m):
                if e:
                    part = part * power(var, e)
            acc = acc + part
        return acc

    # -- comparisons ---------------------------------------------------------

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Polynomial)
            and self.nvars == other.nvars
            and self.terms == other.terms
        )

    def __hash__(self) -> int:
        return hash((self.nvars, frozenset(self.terms.items())))

    def __repr__(self) -> str:
        return f"Polynomial({format_poly(self)!r})"

    def __str__(self) -> str:
        return format_poly(self)


def divide(
    p: Polynomial, divisors: Iterable[Polynomial]
) -> tuple[list[Polynomial], Polynomial]:
    """Multivariate division: ``p = sum q_i f_i + r``.

    The first divisor whose leading monomial divides the current leading
    monomial is used, so the outcome is deterministic; no monomial of the
    remainder is divisible by any divisor's leading monomial.
    """
    fs = list(divisors)
    if any(f.is_zero() for f in fs):
        raise ValueError("division by the zero polynomial")
    qs = [Polynomial.zero(p.nvars) for _ in fs]
    r = Polynomial.zero(p.nvars)
    cur = p
    while cur:
        c, m = cur.leading_term()
        for i, f in enumerate(fs):
            fc, fm = f.leading_term()
            if monomial_divides(fm, m):
                coeff = c / fc
                mono = monomial_div(m, fm)
                qs[i] = qs[i] + Polynomial(p.nvars, {mono: coeff})
                cur = cur - f.term_mul(coeff, mono)
                break
        else:
            t = Polynomial(p.nvars, {m: c})
            r = r + t
            cur = cur - t
    return qs, r


@dataclass(frozen=True)
class PolyMap:
    """Endomorphism of the polynomial algebra given by variable images."""

    images: tuple[Polynomial, ...]

    def __post_init__(self):
        if not self.images:
            raise ValueError("a polynomial map needs at least one image")
        n = len(self.images)
        for g in self.images:
            if g.nvars != n:
                raise ValueError("image arity does not match the number of variables")

    @property
    def nvars(self) -> int:
        return len(self.images)

    @staticmethod
    def identity(n: int) -> "PolyMap":
        return PolyMap(tuple(Polynomial.variable(i, n) for i in range(1, n + 1)))

    def is_identity(self) -> bool:
        return self == PolyMap.identity(self.nvars)

    def __call__(self, p: Polynomial) -> Polynomial:
        return p.substitute(self)

    def degree(self) -> int:
        return max(g.degree() for g in self.images)

    def __str__(self) -> str:
        return ", ".join(format_poly(g) for g in self.images)


def compose(phi: PolyMap, psi: PolyMap) -> PolyMap:
    """The endomorphism ``phi o psi`` (apply ``psi`` first to variables)."""
    if phi.nvars != psi.nvars:
        raise ValueError("variable-count mismatch")
    return PolyMap(tuple(g.substitute(phi) for g in psi.images))


def jacobian(phi: PolyMap) -> list[list[Polynomial]]:
    n = phi.nvars
    return [
        [phi.images[i].partial_derivative(j + 1) for j in range(n)] for i in range(n)
    ]


def jacobian_det(phi: PolyMap) -> Polynomial:
    """Determinant of the Jacobian matrix; two variables only."""
    if phi.nvars != 2:
        raise ValueError("Jacobian determinant requires exactly two variables")
    j = jacobian(phi)
    return j[0][0] * j[1][1] - j[0][1] * j[1][0]


def is_jacobian_unit(phi: PolyMap) -> bool:
    det = jacobian_det(phi)
    return det.is_constant() and not det.is_zero()


# ---------------------------------------------------------------------------
# text grammar: variables x, y (aliases x1, x2; x1..xn in general), rational
# coefficients p/q, operators + - * ^, parentheses

def _variable_names(nvars: int, names: tuple[str, ...] | None) -> dict[str, int]:
    table: dict[str, int] = {}
    if names is not None:
        if len(names) != nvars:
            raise ValueError("one name per variable required")
        for i, nm in enumerate(names):
            table[nm] = i + 1
    elif nvars == 1:
        table["t"] = 1
        table["x"] = 1
    elif nvars == 2:
        table["x"] = 1
        table["y"] = 2
    for i in range(1, nvars + 1):
        table.setdefault(f"x{i}", i)
    return table


class _Parser:
    def __init__(self, text: str, nvars: int, names):
        self.text = text
        self.pos = 0
        self.nvars = nvars
        self.vars = _variable_names(nvars, names)

    def error(self, msg: str):
        raise PolyParseError(msg, self.pos)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def parse(self) -> Polynomial:
        p = self.expr()
        self.skip_ws()
        if self.pos != len(self.text):
            self.error(f"unexpected trailing input {self.text[self.pos]!r}")
        return p

    def expr(self) -> Polynomial:
        c = self.peek()
        if c == "+":
            self.pos += 1
            acc = self.term()
        elif c == "-":
            self.pos += 1
            acc = -self.term()
        else:
            acc = self.term()
        while True:
            c = self.peek()
            if c == "+":
                self.pos += 1
                acc = acc + self.term()
            elif c == "-":
                self.pos += 1
                acc = acc - self.term()
            else:
                return acc

    def term(self) -> Polynomial:
        acc = self.factor()
        while True:
            c = self.peek()
            if c == "*":
                self.pos += 1
                acc = acc * self.factor()
            elif c == "/":
                self.pos += 1
                d = self.factor()
                if not d.is_constant() or d.is_zero():
                    self.error("division only by a nonzero constant")
                acc = acc.scale(Fraction(1) / d.constant_value())
            elif c == "(" or c.isalpha() or c.isdigit():
                # juxtaposition, e.g. "2x" or "x y"
                acc = acc * self.factor()
            else:
                return acc

    def factor(self) -> Polynomial:
        base = self.atom()
        self.skip_ws()
        if self.peek() == "^":
            self.pos += 1
            self.skip_ws()
            start = self.pos
            if self.pos < len(self.text) and self.text[self.pos] in "+-":
                self.pos += 1
            while self.pos < len(self.text) and self.text[self.pos].isdigit():
                self.pos += 1
            if self.pos == start:
                self.error("expected integer exponent after '^'")
            k = int(self.text[start : self.pos])
            if k < 0:
                self.error("negative exponents are not polynomial")
            return base**k
        return base

    def atom(self) -> Polynomial:
        self.skip_ws()
        if self.pos >= len(self.text):
            self.error("unexpected end of input")
        c = self.text[self.pos]
        if c == "(":
            self.pos += 1
            p = self.expr()
            if self.peek() != ")":
                self.error("expected ')'")
            self.pos += 1
            return p
        if c.isdigit():
            start = self.pos
            while self.pos < len(self.text) and self.text[self.pos].isdigit():
                self.pos += 1
            return Polynomial.const(int(self.text[start : self.pos]), self.nvars)
        if c.isalpha():
            start = self.pos
            self.pos += 1
            while self.pos < len(self.text) and (
                self.text[self.pos].isalnum() or self.text[self.pos] == "_"
            ):
                self.pos += 1
            name = self.text[start : self.pos]
            if name not in self.vars:
                self.pos = start
                self.error(f"unknown variable {name!r}")
            return Polynomial.variable(self.vars[name], self.nvars)
        self.error(f"unexpected character {c!r}")


def parse_poly(
    text: str, nvars: int = 2, names: tuple[str, ...] | None = None
) -> Polynomial:
    return _Parser(text, nvars, names).parse()


def parse_map(
    text: str, nvars: int = 2, names: tuple[str, ...] | None = None
) -> PolyMap:
    parts = _split_top_level(text)
    if len(parts) != nvars:
        raise ValueError(f"expected {nvars} comma-separated images, got {len(parts)}")
    return PolyMap(tuple(parse_poly(p, nvars, names) for p in parts))


def _split_top_level(text: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return parts


def _format_monomial(m: Monomial, names: tuple[str, ...]) -> str:
    out = []
    for e, nm in zip(m, names):
        if e == 1:
            out.append(nm)
        elif e > 1:
            out.append(f"{nm}^{e}")
    return "*".join(out)


def _default_names(nvars: int) -> tuple[str, ...]:
    if nvars == 1:
        return ("t",)
    if nvars == 2:
        return ("x", "y")
    return tuple(f"x{i}" for i in range(1, nvars + 1))


def format_poly(p: Polynomial, names: tuple[str, ...] | None = None) -> str:
    """Canonical text: descending deglex terms joined with explicit '*'."""
    if p.is_zero():
        return "0"
    names = names or _default_names(p.nvars)
    pieces = []
    for m, c in p.sorted_terms():
        mono = _format_monomial(m, names)
        if not mono:
            body = str(abs(c))
        elif abs(c) == 1:
            body = mono
        else:
            body = f"{abs(c)}*{mono}"
        if not pieces:
            pieces.append(body if c > 0 else f"-{body}")
        else:
            pieces.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(pieces)


def format_map(phi: PolyMap, names: tuple[str, ...] | None = None) -> str:
    return ", ".join(format_poly(g, names) for g in phi.images)
