"""Sparse multivariate polynomials over the rationals."""

from __future__ import annotations

import re
from math import gcd
from operator import add

from .rational import ONE, Rational, ZERO, qq, to_str


class MonomialOrder:
    """A monomial order, described by a sort key.

    ``desc_key(e)`` sorts exponent tuples from the largest monomial to the
    smallest; the leading monomial of a polynomial is therefore the ``min``
    of its exponents under that key.
    """

    __slots__ = ("kind", "k")

    def __init__(self, kind: str, k: int = 0):
        if kind not in ("grevlex", "lex", "block"):
            raise ValueError(f"unknown monomial order {kind!r}")
        if kind == "block" and k < 1:
            raise ValueError("block elimination order needs k >= 1")
        self.kind = kind
        self.k = k if kind == "block" else 0

    def desc_key(self, e):
        if self.kind == "grevlex":
            return (-sum(e),) + e[::-1]
        if self.kind == "lex":
            return tuple(-x for x in e)
        k = self.k
        head, tail = e[:k], e[k:]
        return (-sum(head),) + head[::-1] + (-sum(tail),) + tail[::-1]

    def greater(self, a, b) -> bool:
        return self.desc_key(a) < self.desc_key(b)

    def __eq__(self, other):
        return isinstance(other, MonomialOrder) and (self.kind, self.k) == (other.kind, other.k)

    def __hash__(self):
        return hash((self.kind, self.k))

    def __repr__(self):
        if self.kind == "block":
            return f"block_elimination({self.k})"
        return self.kind


GREVLEX = MonomialOrder("grevlex")
LEX = MonomialOrder("lex")


def block_elimination(k: int) -> MonomialOrder:
    """Grevlex on the first ``k`` variables, then grevlex on the rest."""
    return MonomialOrder("block", k)


def default_names(n: int) -> tuple[str, ...]:
    return tuple(f"t{i + 1}" for i in range(n))


class MultiPoly:
    """Immutable sparse polynomial: a map from exponent tuples to nonzero rationals."""

    __slots__ = ("nvars", "terms", "names")

    def __init__(self, terms=None, nvars: int | None = None, names=None):
        if names is not None:
            names = tuple(names)
            if nvars is None:
                nvars = len(names)
        if nvars is None:
            raise ValueError("nvars (or names) is required")
        if names is None:
            names = default_names(nvars)
        if len(names) != nvars:
            raise ValueError("names must have length nvars")
        clean = {}
        if terms:
            for e, c in terms.items():
                e = tuple(e)
                if len(e) != nvars:
                    raise ValueError(f"exponent {e} has wrong length for {nvars} variables")
                if any(x < 0 for x in e):
                    raise ValueError(f"negative exponent {e} in a polynomial")
                c = qq(c)
                if c:
                    clean[e] = clean.get(e, ZERO) + c
                    if not clean[e]:
                        del clean[e]
        self.nvars = nvars
        self.terms = clean
        self.names = names

    @classmethod
    def _raw(cls, terms: dict, nvars: int, names) -> "MultiPoly":
        # trusted constructor: terms already clean
        p = object.__new__(cls)
        p.nvars = nvars
        p.terms = terms
        p.names = names
        return p

    # --- constructors -------------------------------------------------
    @classmethod
    def zero(cls, nvars: int, names=None) -> "MultiPoly":
        return cls(None, nvars, names)

    @classmethod
    def const(cls, c, nvars: int, names=None) -> "MultiPoly":
        return cls({(0,) * nvars: c}, nvars, names)

    @classmethod
    def var(cls, i: int, nvars: int, names=None) -> "MultiPoly":
        e = [0] * nvars
        e[i] = 1
        return cls({tuple(e): 1}, nvars, names)

    @classmethod
    def monomial(cls, exp, coeff, names) -> "MultiPoly":
        names = tuple(names)
        return cls({tuple(exp): coeff}, len(names), names)

    @classmethod
    def linear(cls, coeffs, names=None, constant=0) -> "MultiPoly":
        n = len(coeffs)
        terms = {(0,) * n: constant}
        for i, c in enumerate(coeffs):
            e = [0] * n
            e[i] = 1
            terms[tuple(e)] = c
        return cls(terms, n, names)

    # --- basic queries ------------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_term(self) -> Rational:
        return self.terms.get((0,) * self.nvars, ZERO)

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree_in(self, i: int) -> int:
        return max((e[i] for e in self.terms), default=-1)

    def weighted_degrees(self, weights) -> set[int]:
        return {sum(w * x for w, x in zip(weights, e)) for e in self.terms}

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def is_weighted_homogeneous(self, weights) -> bool:
        return len(self.weighted_degrees(weights)) <= 1

    def variables(self) -> set[int]:
        return {i for e in self.terms for i, x in enumerate(e) if x}

    def leading(self, order: MonomialOrder = GREVLEX):
        """Return ``(exponent, coefficient)`` of the leading term."""
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        e = min(self.terms, key=order.desc_key)
        return e, self.terms[e]

    def sorted_terms(self, order: MonomialOrder = GREVLEX):
        return sorted(self.terms.items(), key=lambda t: order.desc_key(t[0]))

    # --- arithmetic ---------------------------------------------------
    def _check(self, other: "MultiPoly"):
        if self.nvars != other.nvars:
            raise ValueError("polynomials live in different rings")

    def _coerce(self, other):
        if isinstance(other, MultiPoly):
            self._check(other)
            return other
        return MultiPoly.const(qq(other), self.nvars, self.names)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, ZERO) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return MultiPoly._raw(out, self.nvars, self.names)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._raw({e: -c for e, c in self.terms.items()}, self.nvars, self.names)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c) -> "MultiPoly":
        c = qq(c)
        if not c:
            return MultiPoly.zero(self.nvars, self.names)
        return MultiPoly._raw({e: v * c for e, v in self.terms.items()}, self.nvars, self.names)

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            return self.scale(other)
        self._check(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(map(add, e1, e2))
                v = out.get(e, ZERO) + c1 * c2
                if v:
                    out[e] = v
                else:
                    del out[e]
        return MultiPoly._raw(out, self.nvars, self.names)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result = MultiPoly.const(1, self.nvars, self.names)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def mul_monomial(self, exp, coeff=ONE) -> "MultiPoly":
        coeff = qq(coeff)
        return MultiPoly._raw(
            {tuple(map(add, e, exp)): c * coeff for e, c in self.terms.items()},
            self.nvars,
            self.names,
        )

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.nvars == other.nvars and self.terms == other.terms
        try:
            c = qq(other)
        except TypeError:
            return NotImplemented
        return self.terms == ({(0,) * self.nvars: c} if c else {})

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    # --- evaluation and substitution ----------------------------------
    def evaluate(self, point) -> Rational:
        if len(point) != self.nvars:
            raise ValueError("point has wrong length")
        point = [qq(x) for x in point]
        total = ZERO
        for e, c in self.terms.items():
            v = c
            for x, k in zip(point, e):
                if k:
                    v *= x**k
            total += v
        return total

    def substitute(self, images) -> "MultiPoly":
        """Compose with ``t_i -> images[i]`` (all images in one common ring)."""
        images = list(images)
        if len(images) != self.nvars:
            raise ValueError("need one image per variable")
        if not images:
            raise ValueError("cannot substitute into a polynomial in zero variables")
        target = images[0]
        powers: list[dict[int, MultiPoly]] = [{0: MultiPoly.const(1, target.nvars, target.names)} for _ in images]

        def power(i, k):
            cache = powers[i]
            if k not in cache:
                cache[k] = power(i, k - 1) * images[i]
            return cache[k]

        out = MultiPoly.zero(target.nvars, target.names)
        for e, c in self.terms.items():
            term = MultiPoly.const(c, target.nvars, target.names)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            out = out + term
        return out

    def embed(self, nvars: int, positions, names=None) -> "MultiPoly":
        """Re-home into ``nvars`` variables; variable i goes to ``positions[i]``."""
        out = {}
        for e, c in self.terms.items():
            ne = [0] * nvars
            for i, x in enumerate(e):
                ne[positions[i]] = x
            out[tuple(ne)] = c
        return MultiPoly._raw(out, nvars, tuple(names) if names else default_names(nvars))

    def with_names(self, names) -> "MultiPoly":
        names = tuple(names)
        if len(names) != self.nvars:
            raise ValueError("names must have length nvars")
        return MultiPoly._raw(self.terms, self.nvars, names)

    # --- normalization ------------------------------------------------
    def monic(self, order: MonomialOrder = GREVLEX) -> "MultiPoly":
        if not self.terms:
            return self
        _, lc = self.leading(order)
        return self.scale(1 / lc)

    def primitive(self, order: MonomialOrder = GREVLEX) -> "MultiPoly":
        """Integer coefficients with content 1 and positive leading coefficient."""
        if not self.terms:
            return self
        den = 1
        for c in self.terms.values():
            den = den * c.denominator // gcd(den, c.denominator)
        nums = [int(c * den) for c in self.terms.values()]
        g = 0
        for v in nums:
            g = gcd(g, v)
        factor = qq(den) / g
        if self.leading(order)[1] < 0:
            factor = -factor
        return self.scale(factor)

    # --- printing -----------------------------------------------------
    def __str__(self):
        if not self.terms:
            return "0"
        pieces = []
        for e, c in self.sorted_terms(GREVLEX):
            mono = "*".join(
                name if x == 1 else f"{name}^{x}" for name, x in zip(self.names, e) if x
            )
            mag = abs(c)
            if not mono:
                body = to_str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{to_str(mag)}*{mono}"
            sign = "-" if c < 0 else "+"
            pieces.append((sign, body))
        first_sign, first = pieces[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, body in pieces[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self):
        return f"MultiPoly({str(self)!r}, names={self.names})"


# --- parsing ----------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()]))")


class PolyParseError(ValueError):
    pass


def _tokenize(text: str):
    pos = 0
    out = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise PolyParseError(f"unexpected character at {pos} in {text!r}")
        num, ident, op = m.groups()
        if num is not None:
            out.append(("num", int(num)))
        elif ident is not None:
            out.append(("id", ident))
        else:
            out.append(("op", "^" if op == "**" else op))
        pos = m.end()
    return out


class _LaurentParser:
    """Recursive-descent parser producing {exponent: coeff} with integer exponents."""

    def __init__(self, text, names):
        self.tokens = _tokenize(text)
        self.i = 0
        self.names = tuple(names)
        self.index = {n: k for k, n in enumerate(self.names)}
        self.text = text

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, op):
        kind, val = self.take()
        if kind != "op" or val != op:
            raise PolyParseError(f"expected {op!r} in {self.text!r}")

    def parse(self):
        if not self.tokens:
            raise PolyParseError("empty polynomial")
        value = self.expr()
        if self.i != len(self.tokens):
            raise PolyParseError(f"trailing input in {self.text!r}")
        return value

    def _add(self, a, b, sign=1):
        out = dict(a)
        for e, c in b.items():
            v = out.get(e, ZERO) + sign * c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return out

    def _mul(self, a, b):
        out = {}
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                e = tuple(map(add, e1, e2))
                v = out.get(e, ZERO) + c1 * c2
                if v:
                    out[e] = v
                else:
                    out.pop(e, None)
        return out

    def _const(self, c):
        c = qq(c)
        return {(0,) * len(self.names): c} if c else {}

    def expr(self):
        value = self.term()
        while True:
            kind, val = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                value = self._add(value, self.term(), 1 if val == "+" else -1)
            else:
                return value

    def term(self):
        value = self.unary()
        while True:
            kind, val = self.peek()
            if kind == "op" and val == "*":
                self.take()
                value = self._mul(value, self.unary())
            elif kind == "op" and val == "/":
                self.take()
                kind2, num = self.take()
                if kind2 != "num" or num == 0:
                    raise PolyParseError(f"division only by a nonzero integer in {self.text!r}")
                value = {e: c / num for e, c in value.items()}
            else:
                return value

    def unary(self):
        kind, val = self.peek()
        if kind == "op" and val in "+-":
            self.take()
            inner = self.unary()
            return inner if val == "+" else {e: -c for e, c in inner.items()}
        return self.power()

    def power(self):
        base = self.atom()
        kind, val = self.peek()
        if kind == "op" and val == "^":
            self.take()
            sign = 1
            kind, val = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                sign = -1 if val == "-" else 1
            kind, num = self.take()
            if kind != "num":
                raise PolyParseError(f"exponent must be an integer in {self.text!r}")
            k = sign * num
            if k < 0:
                if len(base) != 1:
                    raise PolyParseError(f"negative power of a non-monomial in {self.text!r}")
                (e, c), = base.items()
                return {tuple(x * k for x in e): c**k}
            out = self._const(1)
            for _ in range(k):
                out = self._mul(out, base)
            return out
        return base

    def atom(self):
        kind, val = self.take()
        if kind == "num":
            return self._const(val)
        if kind == "id":
            if val not in self.index:
                raise PolyParseError(f"unknown variable {val!r} (known: {', '.join(self.names)})")
            e = [0] * len(self.names)
            e[self.index[val]] = 1
            return {tuple(e): ONE}
        if kind == "op" and val == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        raise PolyParseError(f"unexpected token {val!r} in {self.text!r}")


def parse_laurent(text: str, names) -> dict:
    """Parse into ``{exponent tuple: coefficient}``; exponents may be negative."""
    return _LaurentParser(text, names).parse()


def parse_poly(text: str, names=None, nvars: int | None = None) -> MultiPoly:
    if names is None:
        if nvars is None:
            raise ValueError("need names or nvars")
        names = default_names(nvars)
    names = tuple(names)
    terms = parse_laurent(text, names)
    if any(x < 0 for e in terms for x in e):
        raise PolyParseError(f"negative exponent in polynomial {text!r}")
    return MultiPoly(terms, len(names), names)
