"""Exact rational scalars and univariate polynomials.

Scalars are arbitrary-precision rationals (`fractions.Fraction`), which are
always kept in lowest terms with a positive denominator.  Polynomials are
immutable tuples of such scalars indexed by exponent, with no trailing zero
coefficient; the zero polynomial is the empty tuple and its degree is the
distinguished sentinel ``NEG_INF`` rather than an integer.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Union

from .errors import ParseError

Rat = Fraction

RatLike = Union[Rat, int, str]

# Degree of the zero polynomial.  Compares below every integer, and
# NEG_INF + k == NEG_INF, so degree bookkeeping needs no special cases.
NEG_INF = float("-inf")


def rat(value: RatLike) -> Rat:
    """Coerce an int, string like ``-3/4``, or Fraction to an exact rational."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("bool is not a rational scalar")
    if isinstance(value, (int, str)):
        return Fraction(value)
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


class Poly:
    """Univariate polynomial over the rationals, in canonical form."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[RatLike] = ()):
        cs = [rat(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    # -- construction -------------------------------------------------

    @classmethod
    def zero(cls) -> "Poly":
        return cls(())

    @classmethod
    def one(cls) -> "Poly":
        return cls((1,))

    @classmethod
    def const(cls, c: RatLike) -> "Poly":
        return cls((rat(c),))

    @classmethod
    def monomial(cls, k: int, c: RatLike = 1) -> "Poly":
        """The polynomial c*x^k."""
        if k < 0:
            raise ValueError("monomial exponent must be nonnegative")
        return cls((0,) * k + (rat(c),))

    # -- structure ----------------------------------------------------

    @property
    def degree(self):
        """Degree, or the NEG_INF sentinel for the zero polynomial."""
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, k: int) -> Rat:
        """Coefficient of x^k (zero when k is out of range)."""
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return Rat(0)

    @property
    def lead(self) -> Rat:
        """Leading coefficient; zero for the zero polynomial."""
        return self.coeffs[-1] if self.coeffs else Rat(0)

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other: "Poly") -> "Poly":
        if not isinstance(other, Poly):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Poly(out)

    def __neg__(self) -> "Poly":
        return Poly(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "Poly") -> "Poly":
        if not isinstance(other, Poly):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other) -> "Poly":
        if isinstance(other, Poly):
            if not self.coeffs or not other.coeffs:
                return Poly()
            out = [Rat(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
            for i, a in enumerate(self.coeffs):
                if a == 0:
                    continue
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
            return Poly(out)
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, n: int) -> "Poly":
        if not isinstance(n, int) or n < 0:
            raise ValueError("polynomial power must be a nonnegative integer")
        out = Poly.one()
        for _ in range(n):
            out = out * self
        return out

    def scale(self, c: RatLike) -> "Poly":
        c = rat(c)
        if c == 0:
            return Poly()
        return Poly(tuple(a * c for a in self.coeffs))

    def derivative(self) -> "Poly":
        """Formal derivative."""
        return Poly(tuple(k * c for k, c in enumerate(self.coeffs) if k >= 1))

    def integral(self) -> "Poly":
        """Antiderivative with zero constant term (definite integral from 0)."""
        return Poly((Rat(0),) + tuple(c / (k + 1) for k, c in enumerate(self.coeffs)))

    def eval(self, point: RatLike) -> Rat:
        """Value at a rational point, by Horner's rule."""
        point = rat(point)
        acc = Rat(0)
        for c in reversed(self.coeffs):
            acc = acc * point + c
        return acc

    def compose(self, inner: "Poly") -> "Poly":
        """Substitution self(inner(x))."""
        acc = Poly()
        for c in reversed(self.coeffs):
            acc = acc * inner + Poly.const(c)
        return acc

    def shift(self, a: RatLike) -> "Poly":
        """p(x + a)."""
        return self.compose(Poly((rat(a), 1)))

    # -- comparison / hashing ------------------------------------------

    def __eq__(self, other) -> bool:
        return isinstance(other, Poly) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    # -- text ------------------------------------------------------------

    def __str__(self) -> str:
        return render_poly(self)

    def __repr__(self) -> str:
        return f"Poly({str(self)!r})"

    @classmethod
    def parse(cls, text: str, var: str = "x") -> "Poly":
        return parse_poly(text, var=var)


def falling_factorial(m: int) -> Poly:
    """(x)_m = x(x-1)(x-2)...(x-m+1) as a polynomial; (x)_0 = 1."""
    if m < 0:
        raise ValueError("falling factorial index must be nonnegative")
    out = Poly.one()
    for i in range(m):
        out = out * Poly((-i, 1))
    return out


def falling_factorial_at(n: RatLike, m: int) -> Rat:
    """(n)_m for a rational n: n(n-1)...(n-m+1); (n)_0 = 1."""
    if m < 0:
        raise ValueError("falling factorial index must be nonnegative")
    n = rat(n)
    out = Rat(1)
    for i in range(m):
        out *= n - i
    return out


# ----------------------------------------------------------------------
# Canonical text form: descending exponents, explicit rational
# coefficients, e.g. "x^2 - 1/2*x + 3".  parse(render(p)) == p exactly.


def _render_coeff(c: Rat) -> str:
    return str(c)  # Fraction prints "3" or "-1/2"


def render_poly(p: Poly, var: str = "x") -> str:
    if p.is_zero():
        return "0"
    parts = []
    for k in range(len(p.coeffs) - 1, -1, -1):
        c = p.coeffs[k]
        if c == 0:
            continue
        mag = -c if c < 0 else c
        if k == 0:
            body = _render_coeff(mag)
        else:
            xpart = var if k == 1 else f"{var}^{k}"
            body = xpart if mag == 1 else f"{_render_coeff(mag)}*{xpart}"
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(parts)


def parse_poly(text: str, var: str = "x") -> Poly:
    """Parse the canonical polynomial text form (and harmless variants).

    Accepts signed terms like ``-1/2*x^3``, ``x``, ``+ 4``; the ``*``
    between coefficient and variable is optional.
    """
    s = text.strip()
    if not s:
        raise ParseError("empty polynomial", position=0, expected=("term",))
    coeffs: dict[int, Rat] = {}
    i = 0
    n = len(s)
    first = True
    while i < n:
        while i < n and s[i].isspace():
            i += 1
        if i >= n:
            break
        sign = Rat(1)
        if s[i] in "+-":
            if s[i] == "-":
                sign = Rat(-1)
            i += 1
            while i < n and s[i].isspace():
                i += 1
        elif not first:
            raise ParseError(
                f"expected '+' or '-' at position {i}", position=i, expected=("+", "-")
            )
        first = False
        # optional coefficient
        coef = Rat(1)
        saw_coef = False
        j = i
        while j < n and s[j].isdigit():
            j += 1
        if j > i:
            num = int(s[i:j])
            i = j
            den = 1
            if i < n and s[i] == "/":
                i += 1
                j = i
                while j < n and s[j].isdigit():
                    j += 1
                if j == i:
                    raise ParseError(
                        f"expected denominator at position {i}",
                        position=i,
                        expected=("integer",),
                    )
                den = int(s[i:j])
                i = j
            coef = Rat(num, den)
            saw_coef = True
            while i < n and s[i].isspace():
                i += 1
            if i < n and s[i] == "*":
                i += 1
                while i < n and s[i].isspace():
                    i += 1
        # optional variable part
        exp = 0
        if i < n and s[i : i + len(var)] == var:
            i += len(var)
            exp = 1
            if i < n and s[i] == "^":
                i += 1
                j = i
                while j < n and s[j].isdigit():
                    j += 1
                if j == i:
                    raise ParseError(
                        f"expected exponent at position {i}",
                        position=i,
                        expected=("integer",),
                    )
                exp = int(s[i:j])
                i = j
        elif not saw_coef:
            raise ParseError(
                f"expected coefficient or '{var}' at position {i}",
                position=i,
                expected=("coefficient", var),
            )
        coeffs[exp] = coeffs.get(exp, Rat(0)) + sign * coef
    if not coeffs:
        raise ParseError("empty polynomial", position=0, expected=("term",))
    top = max(coeffs)
    return Poly(tuple(coeffs.get(k, Rat(0)) for k in range(top + 1)))
