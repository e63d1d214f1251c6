"""Exact scalars, sparse graded polynomials, monomial orders and derivations.

Polynomials are immutable maps from exponent tuples to coefficients.  The
coefficient field is either the rationals (``QQ``) or a prime field
``GF(p)``; a polynomial remembers its field and arithmetic refuses to mix
fields or variable counts.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

DEFAULT_PRIME = 2147483647


class Field:
    """The rationals when ``p`` is None, otherwise the prime field F_p."""

    __slots__ = ("p",)

    def __init__(self, p: int | None = None):
        if p is not None and not _is_prime(p):
            raise ValueError(f"{p} is not a prime")
        self.p = p

    @property
    def is_rational(self) -> bool:
        return self.p is None

    def __call__(self, x):
        if self.p is None:
            if isinstance(x, str):
                return parse_scalar(x)
            return Fraction(x)
        if isinstance(x, str):
            x = parse_scalar(x)
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ZeroDivisionError("denominator vanishes modulo p")
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return int(x) % self.p

    def zero(self):
        return Fraction(0) if self.p is None else 0

    def one(self):
        return Fraction(1) if self.p is None else 1

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero")
        if self.p is None:
            return 1 / a
        return pow(a, -1, self.p)

    def __eq__(self, other):
        return isinstance(other, Field) and other.p == self.p

    def __hash__(self):
        return hash(("field", self.p))

    def __repr__(self):
        return "QQ" if self.p is None else f"GF({self.p})"

    def spec(self) -> str:
        return "q" if self.p is None else f"fp:{self.p}"


@lru_cache(maxsize=64)
def _is_prime(n: int) -> bool:
    # deterministic Miller-Rabin for n < 3.3e24
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
    for q in small:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


QQ = Field()


def GF(p: int = DEFAULT_PRIME) -> Field:
    return Field(p)


def field_from_spec(spec: str) -> Field:
    """Parse ``q`` or ``fp:<p>``."""
    spec = spec.strip().lower()
    if spec in ("q", "qq"):
        return QQ
    if spec.startswith("fp:"):
        return Field(int(spec[3:]))
    raise ValueError(f"unknown field {spec!r}")


def parse_scalar(s: str) -> Fraction:
    return Fraction(s.strip())


def format_scalar(c) -> str:
    if isinstance(c, Fraction):
        return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
    return str(c)


class MonomialOrder:
    """Graded monomial order with an explicit variable priority.

    ``perm[0]`` is the largest variable.  The default is grevlex with
    x_1 > ... > x_n, which keeps the cone variable last.
    """

    __slots__ = ("tag", "perm")

    def __init__(self, tag: str = "grevlex", perm: Sequence[int] | None = None):
        if tag not in ("grevlex", "grlex"):
            raise ValueError(f"unsupported order {tag!r}")
        self.tag = tag
        self.perm = None if perm is None else tuple(perm)

    def permuted(self, exps):
        return exps if self.perm is None else tuple(exps[i] for i in self.perm)

    def key(self, exps):
        e = self.permuted(exps)
        if self.tag == "grlex":
            return (sum(e), e)
        return (sum(e), tuple(-x for x in reversed(e)))

    def __repr__(self):
        return f"MonomialOrder({self.tag!r}, {self.perm})"


GREVLEX = MonomialOrder("grevlex")


def _check(a: "Polynomial", b: "Polynomial"):
    if a.nvars != b.nvars:
        raise ValueError(f"variable count mismatch: {a.nvars} vs {b.nvars}")
    if a.field != b.field:
        raise ValueError(f"field mismatch: {a.field} vs {b.field}")


class Polynomial:
    __slots__ = ("nvars", "terms", "field", "_hash")

    def __init__(self, nvars: int, terms: Mapping[tuple, object] | None = None,
                 field: Field = QQ, *, _trusted: bool = False):
        self.nvars = nvars
        self.field = field
        self._hash = None
        if _trusted:
            self.terms = terms
            return
        clean = {}
        for mono, c in (terms or {}).items():
            mono = tuple(int(e) for e in mono)
            if len(mono) != nvars or min(mono, default=0) < 0:
                raise ValueError(f"bad exponent vector {mono} for {nvars} variables")
            c = field(c)
            if c:
                c = clean.get(mono, field.zero()) + c
                if field.p is not None:
                    c %= field.p
                if c:
                    clean[mono] = c
                else:
                    clean.pop(mono, None)
        self.terms = clean

    # constructors
    @classmethod
    def zero(cls, nvars: int, field: Field = QQ) -> "Polynomial":
        return cls(nvars, {}, field, _trusted=True)

    @classmethod
    def constant(cls, nvars: int, c, field: Field = QQ) -> "Polynomial":
        return cls(nvars, {(0,) * nvars: c}, field)

    @classmethod
    def var(cls, nvars: int, i: int, field: Field = QQ) -> "Polynomial":
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): 1}, field)

    @classmethod
    def linear(cls, coeffs: Sequence, constant=0, field: Field = QQ) -> "Polynomial":
        """sum coeffs[i]*x_i + constant."""
        n = len(coeffs)
        terms = {}
        for i, c in enumerate(coeffs):
            e = [0] * n
            e[i] = 1
            terms[tuple(e)] = c
        terms[(0,) * n] = constant
        return cls(n, terms, field)

    def _new(self, terms) -> "Polynomial":
        return Polynomial(self.nvars, terms, self.field, _trusted=True)

    # queries
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(m) for m in self.terms), default=-1)

    def homogeneous_degree(self) -> int | None:
        """Common total degree, or None if the polynomial is zero or inhomogeneous."""
        degs = {sum(m) for m in self.terms}
        return degs.pop() if len(degs) == 1 else None

    def is_homogeneous(self) -> bool:
        return len({sum(m) for m in self.terms}) <= 1

    def coefficient(self, mono: tuple):
        return self.terms.get(tuple(mono), self.field.zero())

    def constant_term(self):
        return self.coefficient((0,) * self.nvars)

    def linear_coeffs(self) -> list:
        """Coefficients of x_1..x_n (degree-1 part)."""
        out = []
        for i in range(self.nvars):
            e = [0] * self.nvars
            e[i] = 1
            out.append(self.coefficient(tuple(e)))
        return out

    def leading_term(self, order: MonomialOrder = GREVLEX):
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        m = max(self.terms, key=order.key)
        return m, self.terms[m]

    def sorted_terms(self, order: MonomialOrder = GREVLEX):
        return sorted(self.terms.items(), key=lambda t: order.key(t[0]), reverse=True)

    def variables(self) -> set[int]:
        return {i for m in self.terms for i, e in enumerate(m) if e}

    # arithmetic
    def __add__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(self.nvars, other, self.field)
        _check(self, other)
        p = self.field.p
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m)
            v = c if v is None else v + c
            if p is not None:
                v %= p
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return self._new(out)

    __radd__ = __add__

    def __neg__(self):
        p = self.field.p
        if p is None:
            return self._new({m: -c for m, c in self.terms.items()})
        return self._new({m: (-c) % p for m, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(self.nvars, other, self.field)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "Polynomial":
        c = self.field(c)
        if not c:
            return Polynomial.zero(self.nvars, self.field)
        p = self.field.p
        if p is None:
            return self._new({m: v * c for m, v in self.terms.items()})
        return self._new({m: v * c % p for m, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return self.scale(other)
        _check(self, other)
        p = self.field.p
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                v = out.get(m)
                v = c1 * c2 if v is None else v + c1 * c2
                out[m] = v
        if p is None:
            out = {m: c for m, c in out.items() if c}
        else:
            out = {m: c % p for m, c in out.items() if c % p}
        return self._new(out)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = Polynomial.constant(self.nvars, 1, self.field)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.nvars == other.nvars and self.field == other.field and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return not self.terms
            return self.terms == {(0,) * self.nvars: self.field(other)}
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, self.field.p, frozenset(self.terms.items())))
        return self._hash

    # calculus and substitution
    def diff(self, i: int) -> "Polynomial":
        p = self.field.p
        out = {}
        for m, c in self.terms.items():
            e = m[i]
            if e:
                mm = m[:i] + (e - 1,) + m[i + 1:]
                v = c * e
                if p is not None:
                    v %= p
                if v:
                    out[mm] = v
        return self._new(out)

    def evaluate(self, point: Sequence):
        f = self.field
        total = f.zero()
        pt = [f(x) for x in point]
        for m, c in self.terms.items():
            v = c
            for x, e in zip(pt, m):
                if e:
                    v = v * x ** e
            total += v
        return total if f.p is None else total % f.p

    def substitute(self, images: Sequence["Polynomial"]) -> "Polynomial":
        """Replace x_i by images[i] (all images share one ambient ring)."""
        if len(images) != self.nvars:
            raise ValueError(f"need {self.nvars} images, got {len(images)}")
        if not images:
            return self
        target_n = images[0].nvars
        powers: list[dict[int, Polynomial]] = [{0: Polynomial.constant(target_n, 1, self.field)}
                                               for _ in images]

        def pw(i, e):
            cache = powers[i]
            if e not in cache:
                cache[e] = pw(i, e - 1) * images[i]
            return cache[e]

        result = Polynomial.zero(target_n, self.field)
        acc: dict = {}
        for m, c in self.terms.items():
            t = Polynomial.constant(target_n, c, self.field)
            for i, e in enumerate(m):
                if e:
                    t = t * pw(i, e)
            for mm, cc in t.terms.items():
                acc[mm] = acc.get(mm, 0) + cc
        p = self.field.p
        if p is None:
            result = Polynomial(target_n, {m: c for m, c in acc.items() if c}, self.field, _trusted=True)
        else:
            result = Polynomial(target_n, {m: c % p for m, c in acc.items() if c % p}, self.field,
                                _trusted=True)
        return result

    def exact_divide(self, b: "Polynomial") -> "Polynomial | None":
        """Quotient q with self = q*b, or None if b does not divide self."""
        _check(self, b)
        if not b.terms:
            raise ZeroDivisionError("division by the zero polynomial")
        if not self.terms:
            return self
        bm, bc = b.leading_term()
        binv = self.field.inv(bc)
        p = self.field.p
        rem = dict(self.terms)
        quot: dict = {}
        key = GREVLEX.key
        bterms = list(b.terms.items())
        while rem:
            m = max(rem, key=key)
            if any(x < y for x, y in zip(m, bm)):
                return None
            qm = tuple(x - y for x, y in zip(m, bm))
            qc = rem[m] * binv
            if p is not None:
                qc %= p
            quot[qm] = qc
            for tm, tc in bterms:
                mm = tuple(x + y for x, y in zip(qm, tm))
                v = rem.get(mm, 0) - qc * tc
                if p is not None:
                    v %= p
                if v:
                    rem[mm] = v
                else:
                    rem.pop(mm, None)
        return self._new(quot)

    def change_field(self, field: Field) -> "Polynomial":
        return Polynomial(self.nvars, self.terms, field)

    def to_str(self, names: Sequence[str] | None = None, order: MonomialOrder = GREVLEX) -> str:
        names = list(names) if names is not None else default_names(self.nvars)
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms(order):
            mono = "*".join(n if e == 1 else f"{n}^{e}" for n, e in zip(names, m) if e)
            if isinstance(c, Fraction) and c < 0:
                sign, c = "-", -c
            else:
                sign = "+"
            cs = format_scalar(c)
            if not mono:
                body = cs
            elif cs == "1":
                body = mono
            else:
                body = f"{cs}*{mono}"
            parts.append((sign, body))
        s = parts[0][1] if parts[0][0] == "+" else "-" + parts[0][1]
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s

    def __repr__(self):
        return f"Polynomial({self.to_str()})"


def default_names(n: int) -> list[str]:
    if n <= 3:
        return ["x", "y", "z"][:n]
    return [f"x{i + 1}" for i in range(n)]


# operation-style entry points

def poly_arith(a: Polynomial, b: Polynomial, op: str) -> Polynomial:
    if a.nvars != b.nvars:
        raise ValueError(f"variable count mismatch: {a.nvars} vs {b.nvars}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


def poly_exact_divide(a: Polynomial, b: Polynomial) -> Polynomial | None:
    return a.exact_divide(b)


def substitute_linear(f: Polynomial, images: Sequence[Polynomial]) -> Polynomial:
    return f.substitute(images)


def homogenize(f: Polynomial) -> Polynomial:
    """Append a new last variable z and homogenize f to its total degree."""
    d = f.degree()
    n = f.nvars
    return Polynomial(n + 1, {m + (d - sum(m),): c for m, c in f.terms.items()}, f.field,
                      _trusted=True)


def product(polys: Iterable[Polynomial], nvars: int, field: Field = QQ) -> Polynomial:
    out = Polynomial.constant(nvars, 1, field)
    for f in polys:
        out = out * f
    return out


class DerivationVector:
    """theta = sum coords[i] * d/dx_i."""

    __slots__ = ("coords",)

    def __init__(self, coords: Sequence[Polynomial]):
        coords = tuple(coords)
        if not coords:
            raise ValueError("empty derivation")
        n = coords[0].nvars
        if len(coords) != n or any(c.nvars != n for c in coords):
            raise ValueError("a derivation needs one coordinate per variable")
        degs = {c.homogeneous_degree() for c in coords if c}
        if len(degs) > 1 or None in degs:
            raise ValueError("derivation coordinates must be homogeneous of one degree")
        self.coords = coords

    @classmethod
    def euler(cls, n: int, field: Field = QQ) -> "DerivationVector":
        return cls([Polynomial.var(n, i, field) for i in range(n)])

    @property
    def nvars(self) -> int:
        return len(self.coords)

    @property
    def field(self) -> Field:
        return self.coords[0].field

    @property
    def degree(self) -> int | None:
        for c in self.coords:
            if c:
                return c.homogeneous_degree()
        return None

    def is_zero(self) -> bool:
        return not any(self.coords)

    def apply(self, f: Polynomial) -> Polynomial:
        return apply_derivation(self, f)

    def __add__(self, other: "DerivationVector"):
        return DerivationVector([a + b for a, b in zip(self.coords, other.coords)])

    def __sub__(self, other: "DerivationVector"):
        return DerivationVector([a - b for a, b in zip(self.coords, other.coords)])

    def __mul__(self, f):
        return DerivationVector([c * f for c in self.coords])

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, DerivationVector) and self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)

    def __repr__(self):
        return "DerivationVector(" + ", ".join(c.to_str() for c in self.coords) + ")"


def apply_derivation(theta: DerivationVector, f: Polynomial) -> Polynomial:
    if theta.nvars != f.nvars:
        raise ValueError(f"variable count mismatch: {theta.nvars} vs {f.nvars}")
    out = Polynomial.zero(f.nvars, f.field)
    for i, c in enumerate(theta.coords):
        if c:
            d = f.diff(i)
            if d:
                out = out + c * d
    return out
