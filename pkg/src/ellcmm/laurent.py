"""Laurent polynomials with Scalar coefficients.

One class serves both the two-variable polynomials in (X1, X2) and the
one-variable polynomials in z or r.  Exponent keys are integer tuples.
"""

from __future__ import annotations

from typing import Callable, Iterable, Mapping

from .errors import NonExactDivision, TowerMismatch
from .exactfield import Scalar, Tower


class Laurent:
    __slots__ = ("tower", "nvars", "terms")

    def __init__(self, tower: Tower, nvars: int, terms: Mapping[tuple[int, ...], Scalar] | None = None):
        self.tower = tower
        self.nvars = nvars
        clean = {}
        for k, v in (terms or {}).items():
            if len(k) != nvars:
                raise ValueError(f"exponent {k} does not have {nvars} entries")
            if not isinstance(v, Scalar):
                v = tower(v)
            if not v.is_zero():
                clean[tuple(k)] = v
        self.terms = clean

    # -- constructors ------------------------------------------------------

    @classmethod
    def monomial(cls, tower: Tower, exps: tuple[int, ...], coeff=1) -> Laurent:
        return cls(tower, len(exps), {tuple(exps): tower(coeff)})

    @classmethod
    def constant(cls, tower: Tower, nvars: int, c=1) -> Laurent:
        return cls(tower, nvars, {(0,) * nvars: tower(c)})

    def _new(self, terms) -> Laurent:
        out = Laurent.__new__(Laurent)
        out.tower = self.tower
        out.nvars = self.nvars
        out.terms = terms
        return out

    # -- inspection ------------------------------------------------------

    def coeff(self, *exps: int) -> Scalar:
        return self.terms.get(tuple(exps), self.tower.zero)

    def is_zero(self) -> bool:
        return not self.terms

    def exponents(self) -> list[tuple[int, ...]]:
        return sorted(self.terms)

    def total_degrees(self) -> set[int]:
        return {sum(k) for k in self.terms}

    def is_homogeneous(self, degree: int | None = None) -> bool:
        degs = self.total_degrees()
        if not degs:
            return True
        return len(degs) == 1 and (degree is None or degs == {degree})

    # -- arithmetic ------------------------------------------------------

    def _check(self, other: Laurent):
        if other.nvars != self.nvars:
            raise ValueError("variable count mismatch")
        if other.tower != self.tower:
            raise TowerMismatch(f"{self.tower} vs {other.tower}")

    def __add__(self, other):
        if not isinstance(other, Laurent):
            other = Laurent.constant(self.tower, self.nvars, other)
        self._check(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            if k in out:
                w = out[k] + v
                if w.is_zero():
                    del out[k]
                else:
                    out[k] = w
            else:
                out[k] = v
        return self._new(out)

    __radd__ = __add__

    def __neg__(self):
        return self._new({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Laurent):
            self._check(other)
            out: dict[tuple[int, ...], Scalar] = {}
            for k1, v1 in self.terms.items():
                for k2, v2 in other.terms.items():
                    k = tuple(a + b for a, b in zip(k1, k2))
                    prod = v1 * v2
                    out[k] = out[k] + prod if k in out else prod
            return self._new({k: v for k, v in out.items() if not v.is_zero()})
        c = self.tower(other)
        if c.is_zero():
            return self._new({})
        return self._new({k: v * c for k, v in self.terms.items()})

    def __rmul__(self, other):
        return self * other

    def __pow__(self, n: int) -> Laurent:
        out = Laurent.constant(self.tower, self.nvars)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, (int,)) or isinstance(other, Scalar):
            other = Laurent.constant(self.tower, self.nvars, other)
        if not isinstance(other, Laurent):
            return NotImplemented
        return self.nvars == other.nvars and self.tower == other.tower and self.terms == other.terms

    def __hash__(self):
        return hash(self.canonical())

    # -- structural maps ---------------------------------------------------

    def shift(self, *exps: int) -> Laurent:
        """Multiply by the monomial with the given exponents."""
        return self._new({tuple(a + b for a, b in zip(k, exps)): v for k, v in self.terms.items()})

    def scale_vars(self, *factors: Scalar) -> Laurent:
        """f(c1 x1, c2 x2, ...)."""
        out = {}
        for k, v in self.terms.items():
            w = v
            for c, e in zip(factors, k):
                if e:
                    w = w * c**e
            out[k] = w
        return Laurent(self.tower, self.nvars, out)

    def map_coeffs(self, fn: Callable[[Scalar], Scalar], tower: Tower | None = None) -> Laurent:
        tower = tower or self.tower
        return Laurent(tower, self.nvars, {k: fn(v) for k, v in self.terms.items()})

    def map_exponents(self, fn: Callable[[tuple[int, ...]], tuple[int, ...]], nvars: int | None = None) -> Laurent:
        out: dict[tuple[int, ...], Scalar] = {}
        for k, v in self.terms.items():
            k2 = fn(k)
            out[k2] = out[k2] + v if k2 in out else v
        return Laurent(self.tower, nvars or self.nvars, out)

    def swap(self) -> Laurent:
        """Exchange X1 and X2 (two-variable polynomials only)."""
        if self.nvars != 2:
            raise ValueError("swap needs two variables")
        return self._new({(b, a): v for (a, b), v in self.terms.items()})

    def is_symmetric(self) -> bool:
        return self == self.swap()

    def evaluate(self, *values: Scalar) -> Scalar:
        total = self.tower.zero
        for k, v in self.terms.items():
            term = v
            for x, e in zip(values, k):
                if e:
                    term = term * x**e
            total = total + term
        return total

    # -- presentation ------------------------------------------------------

    def canonical(self) -> str:
        return "; ".join(f"{list(k)}: {v.canonical()}" for k, v in sorted(self.terms.items()))

    def __repr__(self):
        return f"Laurent({self.canonical() or '0'})"

    def to_json(self, names: Iterable[str] = ("e1", "e2")) -> list[dict]:
        names = list(names)
        return [
            dict(zip(names, k), value=v.canonical())
            for k, v in sorted(self.terms.items())
        ]

    @classmethod
    def from_json(cls, tower: Tower, items: list[dict], names: Iterable[str] = ("e1", "e2")) -> Laurent:
        names = list(names)
        return cls(tower, len(names), {tuple(int(it[n]) for n in names): tower.parse(it["value"]) for it in items})


def LaurentPoly2(tower: Tower, terms: Mapping[tuple[int, int], Scalar] | None = None) -> Laurent:
    return Laurent(tower, 2, terms)


def LaurentPoly1(tower: Tower, terms: Mapping[int, Scalar] | None = None) -> Laurent:
    return Laurent(tower, 1, {(k,): v for k, v in (terms or {}).items()})


def divexact_univariate(f: Laurent, divisor: Mapping[int, Scalar]) -> Laurent:
    """Exact quotient of a one-variable Laurent polynomial by a polynomial.

    ``divisor`` maps nonnegative exponents to coefficients.  A nonzero
    remainder raises :class:`NonExactDivision`.
    """
    if f.nvars != 1:
        raise ValueError("univariate division only")
    if f.is_zero():
        return f
    dv = {k: v for k, v in divisor.items() if not v.is_zero()}
    if not dv:
        raise ZeroDivisionError("division by zero polynomial")
    lo = min(dv)
    dv = {k - lo: v for k, v in dv.items()}
    ddeg = max(dv)
    lead_inv = dv[ddeg].inv()
    rem = {k[0]: v for k, v in f.terms.items()}
    quot: dict[int, Scalar] = {}
    low = min(rem)
    while rem:
        top = max(rem)
        if top - ddeg < low:
            break
        c = rem[top] * lead_inv
        shift = top - ddeg
        quot[shift] = c
        for k, v in dv.items():
            e = k + shift
            w = rem.get(e, f.tower.zero) - c * v
            if w.is_zero():
                rem.pop(e, None)
            else:
                rem[e] = w
    if rem:
        raise NonExactDivision(f"nonzero remainder dividing by {divisor}")
    return Laurent(f.tower, 1, {(k - lo,): v for k, v in quot.items()})
