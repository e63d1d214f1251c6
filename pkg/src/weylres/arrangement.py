"""Arrangements and multiarrangements of hyperplanes, with the usual surgery.

A hyperplane is stored as a normalized affine form: coefficient vector plus
constant, scaled so the first nonzero coefficient is 1.  Central
arrangements have every constant equal to zero; only ``cone`` turns an
affine arrangement into a central one.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from .rootsys import RootSystem
from .scalar_poly import QQ, Field, Polynomial, format_scalar, parse_scalar, product


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else parse_scalar(x) if isinstance(x, str) else Fraction(x)


@dataclass(frozen=True, order=True)
class Hyperplane:
    coeffs: tuple
    constant: Fraction = Fraction(0)

    def __post_init__(self):
        cs = tuple(_frac(c) for c in self.coeffs)
        k = _frac(self.constant)
        lead = next((c for c in cs if c != 0), None)
        if lead is None:
            raise ValueError("a hyperplane needs a nonzero linear part")
        object.__setattr__(self, "coeffs", tuple(c / lead for c in cs))
        object.__setattr__(self, "constant", k / lead)

    @classmethod
    def from_form(cls, coeffs: Sequence, constant=0) -> "Hyperplane":
        return cls(tuple(coeffs), constant)

    @property
    def dim(self) -> int:
        return len(self.coeffs)

    @property
    def is_central(self) -> bool:
        return self.constant == 0

    @property
    def pivot(self) -> int:
        return next(i for i, c in enumerate(self.coeffs) if c != 0)

    def form(self, field: Field = QQ) -> Polynomial:
        return Polynomial.linear([field(c) for c in self.coeffs], field(self.constant), field)

    def vector(self) -> tuple:
        """Homogeneous coefficient vector (coeffs, constant)."""
        return self.coeffs + (self.constant,)

    def to_json(self) -> dict:
        return {"coeffs": [format_scalar(c) for c in self.coeffs],
                "constant": format_scalar(self.constant)}

    @classmethod
    def from_json(cls, obj: dict) -> "Hyperplane":
        return cls(tuple(parse_scalar(str(c)) for c in obj["coeffs"]),
                   parse_scalar(str(obj.get("constant", "0"))))

    def to_str(self, names: Sequence[str] | None = None) -> str:
        return self.form().to_str(names) + " = 0"

    def __repr__(self):
        return f"Hyperplane({self.to_str()})"


def _rref(rows: Sequence[Sequence[Fraction]]) -> tuple[tuple, ...]:
    """Reduced row echelon form over Q, zero rows dropped."""
    m = [list(map(Fraction, r)) for r in rows]
    out, col, ncols = [], 0, len(m[0]) if m else 0
    r = 0
    while r < len(m) and col < ncols:
        p = next((i for i in range(r, len(m)) if m[i][col] != 0), None)
        if p is None:
            col += 1
            continue
        m[r], m[p] = m[p], m[r]
        piv = m[r][col]
        m[r] = [v / piv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][col] != 0:
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        r += 1
        col += 1
    out = [tuple(row) for row in m[:r]]
    return tuple(out)


def rank_of(rows: Sequence[Sequence]) -> int:
    return len(_rref(rows)) if rows else 0


@dataclass(frozen=True)
class Flat:
    """A linear subspace, stored by the RREF of its defining equations."""
    equations: tuple

    @classmethod
    def from_forms(cls, forms: Iterable[Sequence]) -> "Flat":
        forms = [tuple(_frac(c) for c in f) for f in forms]
        return cls(_rref(forms) if forms else ())

    @property
    def codim(self) -> int:
        return len(self.equations)

    def contains_form(self, coeffs: Sequence) -> bool:
        """True iff the hyperplane with these coefficients contains the flat."""
        if not self.equations:
            return not any(coeffs)
        return rank_of(list(self.equations) + [tuple(coeffs)]) == self.codim

    def intersect(self, coeffs: Sequence) -> "Flat":
        return Flat.from_forms(list(self.equations) + [tuple(coeffs)])


class Arrangement:
    """Duplicate-free set of hyperplanes in K^dim, kept in canonical order."""

    def __init__(self, dim: int, hyperplanes: Iterable[Hyperplane], central: bool | None = None):
        hs = sorted(set(hyperplanes))
        for h in hs:
            if h.dim != dim:
                raise ValueError(f"hyperplane {h} does not live in dimension {dim}")
        is_central = all(h.is_central for h in hs)
        if central is None:
            central = is_central
        if central and not is_central:
            raise ValueError("central arrangement with an affine hyperplane")
        self.dim = dim
        self.hyperplanes: tuple = tuple(hs)
        self.central = central

    # container protocol
    def __len__(self):
        return len(self.hyperplanes)

    def __iter__(self):
        return iter(self.hyperplanes)

    def __contains__(self, h):
        return h in self._set

    def __eq__(self, other):
        return isinstance(other, Arrangement) and self.dim == other.dim and \
            self.central == other.central and self.hyperplanes == other.hyperplanes

    def __hash__(self):
        return hash((self.dim, self.central, self.hyperplanes))

    def __repr__(self):
        return f"Arrangement(dim={self.dim}, central={self.central}, n={len(self)})"

    @cached_property
    def _set(self):
        return frozenset(self.hyperplanes)

    def index(self, h: Hyperplane) -> int:
        return self.hyperplanes.index(h)

    def forms(self, field: Field = QQ) -> list[Polynomial]:
        return [h.form(field) for h in self.hyperplanes]

    def defining_polynomial(self, field: Field = QQ) -> Polynomial:
        return product(self.forms(field), self.dim, field)

    @property
    def rank(self) -> int:
        return rank_of([h.coeffs for h in self.hyperplanes]) if self.hyperplanes else 0

    @property
    def is_essential(self) -> bool:
        return self.rank == self.dim

    def to_json(self) -> dict:
        return {"dim": self.dim, "central": self.central,
                "hyperplanes": [h.to_json() for h in self.hyperplanes]}

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    @classmethod
    def from_json(cls, obj: dict) -> "Arrangement":
        hs = [Hyperplane.from_json(h) for h in obj["hyperplanes"]]
        return cls(int(obj["dim"]), hs, bool(obj.get("central", all(h.is_central for h in hs))))

    @classmethod
    def loads(cls, s: str) -> "Arrangement":
        return cls.from_json(json.loads(s))

    @classmethod
    def from_forms(cls, forms: Iterable[Sequence], central: bool | None = None) -> "Arrangement":
        """From homogeneous coefficient lists (central) or (coeffs..., constant) pairs."""
        hs = []
        for f in forms:
            if isinstance(f, Hyperplane):
                hs.append(f)
            elif len(f) == 2 and isinstance(f[0], (tuple, list)):
                hs.append(Hyperplane(tuple(f[0]), f[1]))
            else:
                hs.append(Hyperplane(tuple(f)))
        dim = hs[0].dim if hs else 0
        return cls(dim, hs, central)


def boolean(n: int) -> Arrangement:
    return Arrangement(n, [Hyperplane(tuple(1 if i == j else 0 for j in range(n))) for i in range(n)])


# constructors -------------------------------------------------------------

def weyl(rs: RootSystem) -> Arrangement:
    """The central arrangement of the positive roots (essential coordinates)."""
    return Arrangement(rs.rank, [Hyperplane(f) for f in rs.essential_forms()], central=True)


def deformation(rs: RootSystem, a: int, b: int) -> Arrangement:
    """Affine arrangement {alpha = k : alpha positive, a <= k <= b}."""
    if a > b:
        raise ValueError(f"empty interval [{a},{b}]")
    hs = [Hyperplane(f, -k) for f in rs.essential_forms() for k in range(a, b + 1)]
    return Arrangement(rs.rank, hs, central=False)


def cone(aff: Arrangement) -> Arrangement:
    """Homogenize with a new last variable z and add z = 0."""
    if aff.central:
        raise ValueError("cone expects an affine arrangement")
    n = aff.dim
    hs = [Hyperplane(h.coeffs + (h.constant,)) for h in aff.hyperplanes]
    hs.append(Hyperplane((0,) * n + (1,)))
    return Arrangement(n + 1, hs, central=True)


def cone_variable_hyperplane(dim: int) -> Hyperplane:
    return Hyperplane((0,) * (dim - 1) + (1,))


def delete(A: Arrangement, H: Hyperplane) -> Arrangement:
    if H not in A:
        raise ValueError(f"{H} is not in the arrangement")
    return Arrangement(A.dim, [h for h in A.hyperplanes if h != H], A.central)


def add(A: Arrangement, H: Hyperplane) -> Arrangement:
    if H in A:
        raise ValueError(f"{H} is already in the arrangement")
    if A.central and not H.is_central:
        raise ValueError("cannot add an affine hyperplane to a central arrangement")
    return Arrangement(A.dim, list(A.hyperplanes) + [H], A.central)


# restriction --------------------------------------------------------------

def restriction_chart(H: Hyperplane) -> tuple[int, list[Fraction]]:
    """Solve alpha_H = 0 for its pivot variable: x_p = sum_i c_i x_i (i != p)."""
    p = H.pivot
    sol = [Fraction(0) if i == p else -c for i, c in enumerate(H.coeffs)]
    return p, sol


def restrict_form(coeffs: Sequence[Fraction], H: Hyperplane) -> tuple:
    """The trace of a linear form on H, in the chart coordinates (pivot dropped)."""
    p, sol = restriction_chart(H)
    a = coeffs[p]
    out = []
    for i, c in enumerate(coeffs):
        if i != p:
            out.append(Fraction(c) + a * sol[i])
    return tuple(out)


def _traces(A: Arrangement, H: Hyperplane, member: bool = True) -> dict:
    if not A.central:
        raise ValueError("restriction is implemented for central arrangements")
    if not H.is_central or H.dim != A.dim:
        raise ValueError(f"{H} is not a linear hyperplane of the ambient space")
    if member and H not in A:
        raise ValueError(f"{H} is not in the arrangement")
    groups: dict = {}
    for L in A.hyperplanes:
        if L == H:
            continue
        tr = restrict_form(L.coeffs, H)
        if not any(tr):
            continue  # L == H up to scalar cannot happen after normalization
        groups.setdefault(Hyperplane(tr), []).append(L)
    return groups


def restrict(A: Arrangement, H: Hyperplane) -> Arrangement:
    """A^H = {L cap H : L in A, L != H} in the pivot chart of H.

    H need not belong to A; then this is the trace of A on H, whose size is
    the count |A cap H| used by the splitting-type formulas.
    """
    return Arrangement(A.dim - 1, list(_traces(A, H, member=False)), central=True)


class Multiarrangement:
    """An arrangement with positive integer multiplicities."""

    def __init__(self, arrangement: Arrangement, multiplicities: Sequence[int] | dict):
        if isinstance(multiplicities, dict):
            mult = tuple(int(multiplicities[h]) for h in arrangement.hyperplanes)
        else:
            mult = tuple(int(m) for m in multiplicities)
        if len(mult) != len(arrangement) or any(m < 1 for m in mult):
            raise ValueError("multiplicities must be positive, one per hyperplane")
        self.arrangement = arrangement
        self.multiplicities = mult

    @property
    def dim(self) -> int:
        return self.arrangement.dim

    @property
    def total(self) -> int:
        return sum(self.multiplicities)

    def items(self):
        return zip(self.arrangement.hyperplanes, self.multiplicities)

    def __repr__(self):
        return f"Multiarrangement(dim={self.dim}, |m|={self.total})"


def ziegler_restriction(A: Arrangement, H: Hyperplane) -> Multiarrangement:
    groups = _traces(A, H)
    arr = Arrangement(A.dim - 1, list(groups), central=True)
    return Multiarrangement(arr, {X: len(Ls) for X, Ls in groups.items()})


def terao_b_polynomial(A: Arrangement, H: Hyperplane, field: Field = QQ) -> Polynomial:
    """Q(A minus H) divided by one chosen form per trace on H.

    For each trace the hyperplane with the lexicographically smallest
    normalized coefficient vector is divided out.  The result is a
    representative of B modulo alpha_H.
    """
    groups = _traces(A, H)
    chosen = {min(Ls, key=lambda L: L.coeffs) for Ls in groups.values()}
    rest = [L.form(field) for L in A.hyperplanes if L != H and L not in chosen]
    return product(rest, A.dim, field)


# localization -------------------------------------------------------------

def flat_of(A: Arrangement, hyperplanes: Iterable[Hyperplane]) -> Flat:
    return Flat.from_forms([h.coeffs for h in hyperplanes])


def localize(A: Arrangement, X: Flat) -> Arrangement:
    """The hyperplanes of A containing X."""
    if not A.central:
        raise ValueError("localization is implemented for central arrangements")
    sub = [h for h in A.hyperplanes if X.contains_form(h.coeffs)]
    if X.codim and flat_of(A, sub) != X:
        raise ValueError("X is not a flat of the arrangement")
    return Arrangement(A.dim, sub, central=True)


def essentialize(A: Arrangement) -> Arrangement:
    """Rewrite a central arrangement in coordinates on the span of its forms.

    The forms are expressed in the RREF basis of their span, so the result
    is essential and has the same combinatorics and freeness.
    """
    if not A.central:
        raise ValueError("essentialization is implemented for central arrangements")
    basis = _rref([h.coeffs for h in A.hyperplanes]) if A.hyperplanes else ()
    pivots = [next(i for i, c in enumerate(row) if c) for row in basis]
    hs = []
    for h in A.hyperplanes:
        # in RREF coordinates the pivot entries are the coordinates
        hs.append(Hyperplane(tuple(h.coeffs[p] for p in pivots)))
    return Arrangement(len(basis), hs, central=True)
