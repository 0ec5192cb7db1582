"""Sparse multivariate polynomials over arbitrary-precision integers.

Terms are stored as a map from exponent vectors to nonzero integer
coefficients. Values are canonical: variable names are kept sorted, unused
variables are pruned, and zero coefficients never stored, so two equal
polynomials compare equal term for term. Evaluation is exact over Fraction.
No floating point is used anywhere in this module.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping, Union

Scalar = Union[int, "MultiPoly"]


class MultiPoly:
    __slots__ = ("variables", "terms")

    def __init__(self, variables: Iterable[str] = (), terms: Mapping[tuple, int] | None = None):
        vs = tuple(variables)
        tm: dict[tuple, int] = {}
        for expo, coeff in (terms or {}).items():
            expo = tuple(int(e) for e in expo)
            if len(expo) != len(vs):
                raise ValueError("exponent arity does not match variable list")
            if any(e < 0 for e in expo):
                raise ValueError("negative exponent")
            if coeff:
                tm[expo] = tm.get(expo, 0) + int(coeff)
        tm = {e: c for e, c in tm.items() if c}
        self.variables, self.terms = _canonicalize(vs, tm)

    # -- constructors ----------------------------------------------------

    @classmethod
    def zero(cls) -> "MultiPoly":
        return cls((), {})

    @classmethod
    def const(cls, c: int) -> "MultiPoly":
        return cls((), {(): int(c)} if c else {})

    @classmethod
    def var(cls, name: str) -> "MultiPoly":
        return cls((name,), {(1,): 1})

    # -- ring structure ---------------------------------------------------

    def __add__(self, other: Scalar) -> "MultiPoly":
        other = _coerce(other)
        vs, ps, qs = _align(self, other)
        out = dict(ps)
        for e, c in qs.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return MultiPoly(vs, out)

    __radd__ = __add__

    def __neg__(self) -> "MultiPoly":
        return MultiPoly(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: Scalar) -> "MultiPoly":
        return self + (-_coerce(other))

    def __rsub__(self, other: Scalar) -> "MultiPoly":
        return _coerce(other) + (-self)

    def __mul__(self, other: Scalar) -> "MultiPoly":
        other = _coerce(other)
        vs, ps, qs = _align(self, other)
        out: dict[tuple, int] = {}
        for e1, c1 in ps.items():
            for e2, c2 in qs.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, 0) + c1 * c2
                if s:
                    out[e] = s
                else:
                    del out[e]
        return MultiPoly(vs, out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "MultiPoly":
        if n < 0:
            raise ValueError("negative power")
        result = MultiPoly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = MultiPoly.const(other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.variables == other.variables and self.terms == other.terms

    def __hash__(self):
        return hash((self.variables, frozenset(self.terms.items())))

    # -- queries ----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def is_homogeneous(self, deg: int | None = None) -> bool:
        degs = {sum(e) for e in self.terms}
        if not degs:
            return True
        if len(degs) > 1:
            return False
        return deg is None or degs == {deg}

    def term_count(self) -> int:
        return len(self.terms)

    def coefficient(self, monomial: Mapping[str, int]) -> int:
        expo = tuple(monomial.get(v, 0) for v in self.variables)
        extra = set(monomial) - set(self.variables)
        if any(monomial[v] for v in extra):
            return 0
        return self.terms.get(expo, 0)

    # -- evaluation and substitution ---------------------------------------

    def eval(self, assignment: Mapping[str, int | Fraction]) -> Fraction:
        """Exact value at a rational point; every variable must be assigned."""
        missing = [v for v in self.variables if v not in assignment]
        if missing:
            raise ValueError(f"missing assignment for {', '.join(missing)}")
        total = Fraction(0)
        vals = [Fraction(assignment[v]) for v in self.variables]
        for expo, coeff in self.terms.items():
            term = Fraction(coeff)
            for val, e in zip(vals, expo):
                if e:
                    term *= val**e
            total += term
        return total

    def subs(self, mapping: Mapping[str, Scalar]) -> "MultiPoly":
        """Substitute polynomials (or integers) for variables."""
        out = MultiPoly.zero()
        images = {v: _coerce(mapping[v]) for v in self.variables if v in mapping}
        for expo, coeff in self.terms.items():
            term = MultiPoly.const(coeff)
            for v, e in zip(self.variables, expo):
                if not e:
                    continue
                base = images.get(v, MultiPoly.var(v))
                term = term * base**e
            out = out + term
        return out

    def diff(self, name: str) -> "MultiPoly":
        """Formal partial derivative."""
        if name not in self.variables:
            return MultiPoly.zero()
        i = self.variables.index(name)
        out: dict[tuple, int] = {}
        for expo, coeff in self.terms.items():
            if expo[i] == 0:
                continue
            e2 = list(expo)
            e2[i] -= 1
            out[tuple(e2)] = coeff * expo[i]
        return MultiPoly(self.variables, out)

    # -- presentation -------------------------------------------------------

    def sorted_terms(self):
        """Terms in graded-lexicographic descending order."""
        return sorted(self.terms.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True)

    def __str__(self) -> str:
        return format_poly(self)

    def __repr__(self) -> str:
        return f"MultiPoly({format_poly(self)!r})"


def _canonicalize(vs, tm):
    used = [i for i, v in enumerate(vs) if any(e[i] for e in tm)]
    order = sorted(used, key=lambda i: vs[i])
    new_vs = tuple(vs[i] for i in order)
    if len(set(new_vs)) != len(new_vs):
        raise ValueError("duplicate variable names")
    new_tm = {}
    for e, c in tm.items():
        ne = tuple(e[i] for i in order)
        new_tm[ne] = new_tm.get(ne, 0) + c
    return new_vs, {e: c for e, c in new_tm.items() if c}


def _coerce(x: Scalar) -> MultiPoly:
    if isinstance(x, MultiPoly):
        return x
    if isinstance(x, int):
        return MultiPoly.const(x)
    raise TypeError(f"cannot coerce {type(x).__name__} to MultiPoly")


def _align(p: MultiPoly, q: MultiPoly):
    """Common sorted variable list and remapped term dicts."""
    if p.variables == q.variables:
        return p.variables, p.terms, q.terms
    vs = tuple(sorted(set(p.variables) | set(q.variables)))

    def remap(poly):
        idx = [poly.variables.index(v) if v in poly.variables else None for v in vs]
        return {
            tuple(e[i] if i is not None else 0 for i in idx): c
            for e, c in poly.terms.items()
        }

    return vs, remap(p), remap(q)


# -- parsing and printing ----------------------------------------------------

_TOKEN = re.compile(r"\s*(\d+|[A-Za-z_][A-Za-z_0-9]*|\*\*|[-+*^()])")


def parse_poly(text: str) -> MultiPoly:
    """Parse `-8*a^3*b^2 + c^6` style syntax (also accepts ** for powers)."""
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip():
                raise ValueError(f"bad character at {text[pos:]!r}")
            break
        tokens.append(m.group(1))
        pos = m.end()
    tokens.append(None)  # sentinel

    state = {"i": 0}

    def peek():
        return tokens[state["i"]]

    def take():
        t = tokens[state["i"]]
        state["i"] += 1
        return t

    def parse_expr():
        node = parse_term()
        while peek() in ("+", "-"):
            op = take()
            rhs = parse_term()
            node = node + rhs if op == "+" else node - rhs
        return node

    def parse_term():
        node = parse_unary()
        while peek() == "*":
            take()
            node = node * parse_unary()
        return node

    def parse_unary():
        if peek() in ("+", "-"):
            op = take()
            inner = parse_unary()
            return inner if op == "+" else -inner
        return parse_power()

    def parse_power():
        base = parse_atom()
        if peek() in ("^", "**"):
            take()
            expo = take()
            if expo is None or not expo.isdigit():
                raise ValueError("exponent must be a nonnegative integer")
            return base ** int(expo)
        return base

    def parse_atom():
        t = take()
        if t is None:
            raise ValueError("unexpected end of input")
        if t == "(":
            inner = parse_expr()
            if take() != ")":
                raise ValueError("missing closing parenthesis")
            return inner
        if t.isdigit():
            return MultiPoly.const(int(t))
        if re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", t):
            return MultiPoly.var(t)
        raise ValueError(f"unexpected token {t!r}")

    result = parse_expr()
    if peek() is not None:
        raise ValueError(f"trailing input at token {peek()!r}")
    return result


def format_poly(p: MultiPoly) -> str:
    """Deterministic rendering, graded-lex descending, e.g. `c^6 - 8*a^3*b^2`."""
    if p.is_zero():
        return "0"
    chunks = []
    for expo, coeff in p.sorted_terms():
        mono = "*".join(
            v if e == 1 else f"{v}^{e}"
            for v, e in zip(p.variables, expo)
            if e
        )
        mag = abs(coeff)
        if mono:
            body = mono if mag == 1 else f"{mag}*{mono}"
        else:
            body = str(mag)
        if not chunks:
            chunks.append(body if coeff > 0 else f"-{body}")
        else:
            chunks.append(f"+ {body}" if coeff > 0 else f"- {body}")
    return " ".join(chunks)
