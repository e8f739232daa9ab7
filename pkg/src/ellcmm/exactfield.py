"""Exact scalar fields: rational functions over Q in a few named generators.

A :class:`Tower` fixes which symbols are live generators and how the model
parameters are expressed through them:

* ``Q`` stands for q^(1/2); q is always ``Q**2``.
* ``S`` stands for s^(1/2), or ``s`` for s itself (after even-power projection).
* t is ``Q**(2*beta)`` for integer beta, or the free generator ``T``.
  With ``t_half=True`` the generator ``T`` means t^(1/2) instead.
* ``x`` and ``y`` are free symbols standing for q^i and q^j, ``z`` a free
  evaluation point, ``r`` the ratio x1/x2, ``p`` an auxiliary series variable.

Any generator may instead be bound to an exact rational (the evaluated
backend).  Elements are :class:`Scalar` values ``num/den`` with integer
polynomials kept coprime and the denominator's lex-leading coefficient
positive, so equal values have identical representations.
"""

from __future__ import annotations

import random
import re
from fractions import Fraction
from functools import cached_property
from typing import Callable, Iterable, Mapping, Sequence

import flint

from .errors import (
    DivisionByZero,
    EvaluationPole,
    OddPowerResidue,
    PoleAtOrigin,
    TowerMismatch,
)

CANONICAL_ORDER = ("Q", "S", "s", "T", "x", "y", "z", "r", "p")

Number = int | Fraction


def _canonical(gens: Iterable[str]) -> tuple[str, ...]:
    gens = set(gens)
    unknown = gens - set(CANONICAL_ORDER)
    if unknown:
        raise ValueError(f"unknown generators: {sorted(unknown)}")
    return tuple(g for g in CANONICAL_ORDER if g in gens)


class Tower:
    """Immutable description of a scalar field; hashable and comparable by value."""

    __slots__ = ("gens", "beta", "values", "t_half", "ctx", "_index", "_key", "__dict__")

    def __init__(
        self,
        gens: Iterable[str] = ("Q",),
        beta: int | None = None,
        values: Mapping[str, Number] | None = None,
        t_half: bool = False,
    ):
        gens = _canonical(gens)
        values = {k: Fraction(v) for k, v in (values or {}).items()}
        _canonical(values)
        if set(values) & set(gens):
            raise ValueError("a generator cannot be both symbolic and bound")
        if "S" in gens and "s" in gens:
            raise ValueError("a tower holds either S = s^(1/2) or s, not both")
        has_T = "T" in gens or "T" in values
        if beta is not None:
            if has_T:
                raise ValueError("a tower never contains both T and a beta-binding for t")
            if int(beta) != beta or beta < 1:
                raise ValueError("beta must be a positive integer")
            beta = int(beta)
        if t_half and not has_T:
            raise ValueError("t_half requires a T generator")
        self.gens = gens
        self.beta = beta
        self.values = values
        self.t_half = bool(t_half)
        self.ctx = flint.fmpz_mpoly_ctx.get(gens, "lex")
        self._index = {g: i for i, g in enumerate(gens)}
        self._key = (gens, beta, tuple(sorted(values.items())), self.t_half)

    def __eq__(self, other):
        return isinstance(other, Tower) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"Tower({self.fingerprint})"

    @cached_property
    def fingerprint(self) -> str:
        parts = [",".join(self.gens) or "-"]
        if self.beta is not None:
            parts.append(f"beta={self.beta}")
        if self.t_half:
            parts.append("T=t^1/2")
        for k, v in sorted(self.values.items(), key=lambda kv: CANONICAL_ORDER.index(kv[0])):
            parts.append(f"{k}={v}")
        return ";".join(parts)

    # -- derived towers -------------------------------------------------

    def with_gens(self, *extra: str) -> Tower:
        return Tower(self.gens + extra, self.beta, self.values, self.t_half)

    def without_gens(self, *drop: str) -> Tower:
        return Tower([g for g in self.gens if g not in drop], self.beta, self.values, self.t_half)

    def bind(self, **values: Number) -> Tower:
        new_values = dict(self.values)
        new_values.update({k: Fraction(v) for k, v in values.items()})
        gens = [g for g in self.gens if g not in values]
        return Tower(gens, self.beta, new_values, self.t_half)

    def replace_gen(self, old: str, new: str) -> Tower:
        gens = [new if g == old else g for g in self.gens]
        return Tower(gens, self.beta, self.values, self.t_half)

    # -- element construction --------------------------------------------

    def __call__(self, x) -> Scalar:
        if isinstance(x, Scalar):
            if x.tower == self:
                return x
            return x.map_to(self)
        if isinstance(x, (int, Fraction)):
            x = Fraction(x)
            return Scalar(self, self.ctx.constant(x.numerator), self.ctx.constant(x.denominator), True)
        raise TypeError(f"cannot coerce {type(x).__name__} into {self}")

    @cached_property
    def zero(self) -> Scalar:
        return self(0)

    @cached_property
    def one(self) -> Scalar:
        return self(1)

    def has(self, name: str) -> bool:
        return name in self._index or name in self.values

    def gen(self, name: str) -> Scalar:
        if name in self._index:
            return Scalar(self, self.ctx.gens()[self._index[name]], self.ctx.constant(1), True)
        if name in self.values:
            return self(self.values[name])
        raise TowerMismatch(f"{name} is not available in {self}")

    def monomial(self, **exps: int) -> Scalar:
        """Product of generator powers; exponents may be negative, e.g. ``monomial(Q=-3, S=1)``."""
        num = [0] * len(self.gens)
        den = [0] * len(self.gens)
        const = Fraction(1)
        for name, e in exps.items():
            if not e:
                continue
            if name in self._index:
                (num if e > 0 else den)[self._index[name]] += abs(e)
            elif name in self.values:
                const *= self.values[name] ** e
            else:
                raise TowerMismatch(f"{name} is not available in {self}")
        ctx = self.ctx
        n = ctx.from_dict({tuple(num): const.numerator})
        d = ctx.from_dict({tuple(den): const.denominator})
        if const < 0:
            n, d = -n, -d
        return Scalar(self, n, d, True)

    def qts(self, Q: int = 0, t: int = 0, S: int = 0) -> Scalar:
        """q^(Q/2) * t^t * s^(S/2) expressed through this tower's generators."""
        exps = {"Q": Q}
        if t:
            if self.beta is not None:
                exps["Q"] += 2 * self.beta * t
            else:
                exps["T"] = 2 * t if self.t_half else t
        if S:
            if self.has("S"):
                exps["S"] = S
            elif self.has("s"):
                if S % 2:
                    raise OddPowerResidue(f"odd power of s^(1/2) requested in {self}")
                exps["s"] = S // 2
            else:
                raise TowerMismatch(f"s is not available in {self}")
        return self.monomial(**exps)

    @property
    def Q(self) -> Scalar:
        return self.gen("Q")

    @property
    def q(self) -> Scalar:
        return self.qts(Q=2)

    @property
    def t(self) -> Scalar:
        return self.qts(t=1)

    @property
    def sqrt_t(self) -> Scalar:
        if self.beta is not None:
            return self.monomial(Q=self.beta)
        if self.t_half:
            return self.gen("T")
        raise TowerMismatch(f"t^(1/2) is not expressible in {self}")

    @property
    def s(self) -> Scalar:
        return self.qts(S=2)

    @property
    def S(self) -> Scalar:
        return self.gen("S")

    @property
    def z(self) -> Scalar:
        return self.gen("z")

    def one_minus(self, **exps: int) -> Scalar:
        """1 - monomial, built without a gcd."""
        m = self.monomial(**exps)
        return Scalar(self, m.den - m.num, m.den, False)

    def product(self, factors: Iterable[Scalar]) -> Scalar:
        """Multiply many elements with a single final reduction."""
        num = self.ctx.constant(1)
        den = self.ctx.constant(1)
        for f in factors:
            num *= f.num
            den *= f.den
        return Scalar(self, num, den)

    def parse(self, text: str) -> Scalar:
        return parse_scalar(text, self)


def _poly_str(poly, gens: Sequence[str]) -> str:
    items = sorted(poly.to_dict().items())
    if not items:
        return "0"
    out = []
    for exps, c in items:
        c = int(c)
        factors = []
        for g, e in zip(gens, exps):
            if e == 1:
                factors.append(g)
            elif e:
                factors.append(f"{g}^{e}")
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        body = "*".join(([str(mag)] if mag != 1 or not factors else []) + factors)
        out.append((sign, body))
    first_sign, first = out[0]
    text = ("-" if first_sign == "-" else "") + first
    for sign, body in out[1:]:
        text += sign + body
    return text


_TERM_RE = re.compile(r"([+-]?)([^+-]+)")


def _parse_poly(text: str, tower: Tower):
    text = text.strip().replace(" ", "")
    if text.startswith("(") and text.endswith(")"):
        text = text[1:-1]
    terms: dict[tuple[int, ...], int] = {}
    pos = 0
    for m in _TERM_RE.finditer(text):
        if m.start() != pos:
            raise ValueError(f"malformed polynomial {text!r}")
        pos = m.end()
        coeff = -1 if m.group(1) == "-" else 1
        exps = [0] * len(tower.gens)
        for factor in m.group(2).split("*"):
            if factor.isdigit():
                coeff *= int(factor)
                continue
            name, _, power = factor.partition("^")
            if name not in tower._index:
                raise ValueError(f"unknown generator {name!r} for {tower}")
            exps[tower._index[name]] += int(power) if power else 1
        key = tuple(exps)
        terms[key] = terms.get(key, 0) + coeff
    if pos != len(text):
        raise ValueError(f"malformed polynomial {text!r}")
    return tower.ctx.from_dict({k: v for k, v in terms.items() if v})


def parse_scalar(text: str, tower: Tower) -> Scalar:
    """Inverse of :meth:`Scalar.canonical`."""
    text = text.strip()
    if text.startswith("("):
        depth = 0
        for i, ch in enumerate(text):
            depth += ch == "("
            depth -= ch == ")"
            if depth == 0:
                break
        num_text, rest = text[: i + 1], text[i + 1 :]
        if not rest:
            return Scalar(tower, _parse_poly(num_text, tower), tower.ctx.constant(1))
        if not rest.startswith("/"):
            raise ValueError(f"malformed scalar {text!r}")
        return Scalar(tower, _parse_poly(num_text, tower), _parse_poly(rest[1:], tower))
    return Scalar(tower, _parse_poly(text, tower), tower.ctx.constant(1))


class Scalar:
    """Reduced rational function in the generators of a tower."""

    __slots__ = ("tower", "num", "den")

    def __init__(self, tower: Tower, num, den, reduced: bool = False):
        if den.is_zero():
            raise DivisionByZero("zero denominator")
        if not reduced:
            if num.is_zero():
                den = tower.ctx.constant(1)
            else:
                g = num.gcd(den)
                if not g.is_one():
                    num = num / g
                    den = den / g
        if den.leading_coefficient() < 0:
            num, den = -num, -den
        self.tower = tower
        self.num = num
        self.den = den

    # -- coercion ------------------------------------------------------

    def _coerce(self, other) -> Scalar | None:
        if isinstance(other, Scalar):
            if other.tower is not self.tower and other.tower != self.tower:
                raise TowerMismatch(f"{self.tower} vs {other.tower}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.tower(other)
        return None

    # -- arithmetic ----------------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.num.is_zero():
            return self
        if self.num.is_zero():
            return o
        if self.den == o.den:
            return Scalar(self.tower, self.num + o.num, self.den)
        g = self.den.gcd(o.den)
        if g.is_one():
            return Scalar(self.tower, self.num * o.den + o.num * self.den, self.den * o.den)
        a = o.den / g
        b = self.den / g
        return Scalar(self.tower, self.num * a + o.num * b, self.den * a)

    __radd__ = __add__

    def __neg__(self):
        return Scalar(self.tower, -self.num, self.den, True)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.num.is_zero() or o.num.is_zero():
            return self.tower.zero
        g1 = self.num.gcd(o.den)
        g2 = o.num.gcd(self.den)
        n1, d2 = (self.num, o.den) if g1.is_one() else (self.num / g1, o.den / g1)
        n2, d1 = (o.num, self.den) if g2.is_one() else (o.num / g2, self.den / g2)
        return Scalar(self.tower, n1 * n2, d1 * d2, True)

    __rmul__ = __mul__

    def inv(self) -> Scalar:
        if self.num.is_zero():
            raise DivisionByZero("inverse of zero")
        return Scalar(self.tower, self.den, self.num, True)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inv()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inv()

    def __pow__(self, n: int):
        if n < 0:
            return self.inv() ** (-n)
        return Scalar(self.tower, self.num**n, self.den**n, True)

    # -- predicates ----------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.tower(other)
        if not isinstance(other, Scalar) or other.tower != self.tower:
            return NotImplemented if not isinstance(other, Scalar) else False
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash(self.canonical())

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_one(self) -> bool:
        return self.num == self.den

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def to_fraction(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        n = int(self.num.coefficient(0)) if not self.num.is_zero() else 0
        return Fraction(n, int(self.den.coefficient(0)))

    def degree(self, name: str) -> tuple[int, int]:
        i = self.tower._index[name]
        return self.num.degrees()[i], self.den.degrees()[i]

    # -- presentation ----------------------------------------------------

    def canonical(self) -> str:
        n = _poly_str(self.num, self.tower.gens)
        if self.den.is_one():
            return n
        return f"({n})/({_poly_str(self.den, self.tower.gens)})"

    def __str__(self):
        return self.canonical()

    def __repr__(self):
        return f"Scalar({self.canonical()!r})"

    # -- structural maps -------------------------------------------------

    def map_to(self, tower: Tower, rename: Mapping[str, str] | None = None,
               exp_map: Callable[[str, int], int] | None = None) -> Scalar:
        """Re-express in another tower whose generators include ours (after renaming)."""
        src = self.tower
        if src.beta != tower.beta or src.t_half != tower.t_half:
            raise TowerMismatch(f"cannot map {src} into {tower}")
        for k, v in src.values.items():
            if tower.values.get(k) != v:
                raise TowerMismatch(f"cannot map {src} into {tower}")
        return self._reembed(tower, rename, exp_map)

    def _reembed(self, tower: Tower, rename=None, exp_map=None) -> Scalar:
        rename = rename or {}
        src = self.tower
        targets = []
        for g in src.gens:
            name = rename.get(g, g)
            targets.append((tower._index.get(name), g))
        width = len(tower.gens)

        def remap(poly):
            out = {}
            for exps, c in poly.to_dict().items():
                new = [0] * width
                for (j, g), e in zip(targets, exps):
                    if j is None:
                        if e:
                            raise TowerMismatch(f"{g} occurs in {self} but is missing in {tower}")
                        continue
                    new[j] = exp_map(g, int(e)) if exp_map else int(e)
                out[tuple(new)] = c
            return tower.ctx.from_dict(out)

        return Scalar(tower, remap(self.num), remap(self.den), True)

    def subs(self, name: str, value) -> Scalar:
        """Substitute a generator by an element of the same tower (or a number)."""
        tower = self.tower
        value = tower(value)
        if name in tower.values:
            return self
        idx = tower._index[name]
        pn, dn = _poly_subs(self.num, idx, value.num, value.den, tower.ctx)
        pd, dd = _poly_subs(self.den, idx, value.num, value.den, tower.ctx)
        if pd.is_zero():
            raise EvaluationPole(f"denominator of {self} vanishes at {name} = {value}")
        if dd > dn:
            pn *= value.den ** (dd - dn)
        elif dn > dd:
            pd *= value.den ** (dn - dd)
        return Scalar(tower, pn, pd)

    def coefficients_in(self, name: str) -> tuple[dict[int, Scalar], dict[int, Scalar]]:
        """Split numerator and denominator by powers of one generator."""
        idx = self.tower._index[name]
        return (_split(self.num, idx, self.tower), _split(self.den, idx, self.tower))


def _split(poly, idx: int, tower: Tower) -> dict[int, Scalar]:
    groups: dict[int, dict] = {}
    for exps, c in poly.to_dict().items():
        k = exps[idx]
        e = list(exps)
        e[idx] = 0
        groups.setdefault(k, {})[tuple(e)] = c
    one = tower.ctx.constant(1)
    return {k: Scalar(tower, tower.ctx.from_dict(d), one, True) for k, d in groups.items()}


def _poly_subs(poly, idx: int, vnum, vden, ctx):
    """poly(var = vnum/vden) = P / vden**deg; returns (P, deg)."""
    groups: dict[int, dict] = {}
    for exps, c in poly.to_dict().items():
        e = list(exps)
        k = e[idx]
        e[idx] = 0
        groups.setdefault(k, {})[tuple(e)] = c
    if not groups:
        return ctx.constant(0), 0
    deg = max(groups)
    total = ctx.constant(0)
    for k, d in groups.items():
        total += ctx.from_dict(d) * vnum**k * vden ** (deg - k)
    return total, deg


# -- operations on single elements --------------------------------------


def generic_t(tower: Tower) -> Tower:
    """Companion tower where t is the free generator T instead of q^beta."""
    if tower.beta is None:
        return tower
    return Tower(tower.gens + ("T",), None, tower.values, False)


def specialize_t(a: Scalar, tower: Tower) -> Scalar:
    """Bring an element of ``generic_t(tower)`` back into ``tower`` by setting t = q^beta.

    The element is reduced before the substitution, so removable
    singularities along t = q^beta cause no trouble.
    """
    if a.tower == tower:
        return a
    if generic_t(tower) != a.tower:
        raise TowerMismatch(f"{a.tower} is not the generic-t companion of {tower}")
    b = a.subs("T", a.tower.monomial(Q=2 * tower.beta))
    return b._reembed(tower)


def closed_form(tower: Tower, build: Callable[[Tower], Scalar]) -> Scalar:
    """Evaluate ``build`` with a free t, then specialize to ``tower``."""
    return specialize_t(build(generic_t(tower)), tower)


def eval_tower(a: Scalar, assignment: Mapping[str, Number]) -> Fraction:
    """Exact value of ``a`` with every generator replaced by a rational."""
    gens = a.tower.gens
    vals = []
    for g in gens:
        if g in assignment:
            vals.append(Fraction(assignment[g]))
        else:
            vals.append(None)

    def ev(poly) -> Fraction:
        total = Fraction(0)
        for exps, c in poly.to_dict().items():
            term = Fraction(int(c))
            for g, v, e in zip(gens, vals, exps):
                if e:
                    if v is None:
                        raise KeyError(f"no value assigned to {g}")
                    term *= v ** int(e)
            total += term
        return total

    den = ev(a.den)
    if den == 0:
        raise EvaluationPole(f"denominator of {a} vanishes at {dict(assignment)}")
    return ev(a.num) / den


def even_power_project(a: Scalar, var: str = "S") -> Scalar:
    """Rewrite an element that is even in ``S`` as a function of ``s = S**2``."""
    if var != "S":
        raise ValueError("only S = s^(1/2) is projected")
    src = a.tower
    if "S" not in src._index:
        raise TowerMismatch(f"S is not a generator of {src}")
    idx = src._index["S"]
    for poly in (a.num, a.den):
        for exps in poly.monoms():
            if exps[idx] % 2:
                raise OddPowerResidue(f"odd power of S in {a}")
    target = src.replace_gen("S", "s")
    return a.map_to(target, rename={"S": "s"}, exp_map=lambda g, e: e // 2 if g == "S" else e)


def valuation(r: Scalar, var: str) -> int:
    """Order of vanishing of ``r`` at ``var = 0`` (negative for a pole)."""
    if r.is_zero():
        raise ValueError("zero has no valuation")
    i = r.tower._index[var]
    return min(e[i] for e in r.num.monoms()) - min(e[i] for e in r.den.monoms())


def laurent_expand(r: Scalar, var: str, n: int) -> tuple[int, list[Scalar]]:
    """Expand ``r`` around ``var = 0``: returns ``(v, c)`` with r = var**v * sum c[k] var**k.

    ``c`` holds ``n + 1`` coefficients, free of ``var``.
    """
    num, den = r.coefficients_in(var)
    if not num:
        raise ValueError("cannot expand zero")
    vn, vd = min(num), min(den)
    num = {k - vn: c for k, c in num.items()}
    den = {k - vd: c for k, c in den.items()}
    d0inv = den[0].inv()
    out: list[Scalar] = []
    for m in range(n + 1):
        acc = num.get(m, r.tower.zero)
        for i in range(1, m + 1):
            if i in den:
                acc = acc - den[i] * out[m - i]
        out.append(acc * d0inv)
    return vn - vd, out


def taylor_expand(r: Scalar, var: str, n: int) -> list[Scalar]:
    """Coefficients c_0..c_n with r = sum c_k var**k mod var**(n+1)."""
    if r.is_zero():
        return [r.tower.zero] * (n + 1)
    v, coeffs = laurent_expand(r, var, n)
    if v < 0:
        raise PoleAtOrigin(f"{r} has a pole of order {-v} at {var} = 0")
    return ([r.tower.zero] * v + coeffs)[: n + 1]


# -- randomness ------------------------------------------------------------


def random_rational(rng: random.Random, height: int = 10**4) -> Fraction:
    """Small-height rational avoiding 0 and +-1."""
    while True:
        x = Fraction(rng.randint(1, height), rng.randint(1, height))
        if rng.random() < 0.5:
            x = -x
        if x not in (0, 1, -1):
            return x


def random_scalar(tower: Tower, rng: random.Random, terms: int = 3, degree: int = 3) -> Scalar:
    """Random element with small integer coefficients; used by property tests."""

    def poly():
        d = {}
        for _ in range(terms):
            e = tuple(rng.randint(0, degree) for _ in tower.gens)
            d[e] = d.get(e, 0) + rng.randint(-9, 9)
        p = tower.ctx.from_dict({k: v for k, v in d.items() if v})
        return p

    num = poly()
    den = poly()
    while den.is_zero():
        den = poly()
    return Scalar(tower, num, den)


# -- truncated power series in p -----------------------------------------------


class PSeries:
    """Truncated series c_0 + c_1 p + ... + c_n p^n (known modulo p^(n+1)).

    Coefficients may be anything supporting ring operations: Scalars,
    Laurent polynomials, ...
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable):
        coeffs = tuple(coeffs)
        if not coeffs:
            raise ValueError("a series needs at least the p^0 coefficient")
        self.coeffs = coeffs

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, d: int):
        return self.coeffs[d]

    def __iter__(self):
        return iter(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def _zero(self):
        c = self.coeffs[0]
        return c - c

    def truncate(self, n: int) -> PSeries:
        if n > self.order:
            raise ValueError(f"series known only to order {self.order}")
        return PSeries(self.coeffs[: n + 1])

    def map(self, fn: Callable) -> PSeries:
        return PSeries(fn(c) for c in self.coeffs)

    def __add__(self, other):
        if not isinstance(other, PSeries):
            return PSeries((self.coeffs[0] + other,) + self.coeffs[1:])
        n = min(self.order, other.order)
        return PSeries(a + b for a, b in zip(self.coeffs[: n + 1], other.coeffs[: n + 1]))

    __radd__ = __add__

    def __neg__(self):
        return PSeries(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, PSeries):
            return PSeries(c * other for c in self.coeffs)
        n = min(self.order, other.order)
        out = []
        for k in range(n + 1):
            acc = None
            for i in range(k + 1):
                term = self.coeffs[i] * other.coeffs[k - i]
                acc = term if acc is None else acc + term
            out.append(acc)
        return PSeries(out)

    def __rmul__(self, other):
        return PSeries(other * c for c in self.coeffs)

    def inverse(self) -> PSeries:
        a = self.coeffs
        if a[0].is_zero():
            raise DivisionByZero("series with vanishing p^0 coefficient is not invertible")
        b0 = a[0].inv()
        b = [b0]
        for k in range(1, len(a)):
            acc = a[1] * b[k - 1]
            for i in range(2, k + 1):
                acc = acc + a[i] * b[k - i]
            b.append(-acc * b0)
        return PSeries(b)

    def __truediv__(self, other):
        if isinstance(other, PSeries):
            return self * other.inverse()
        return self * other.inv()

    def scale_param(self, lam) -> PSeries:
        """Coefficient d times lam**d, i.e. p -> lam * p."""
        out = [self.coeffs[0]]
        power = None
        for c in self.coeffs[1:]:
            power = lam if power is None else power * lam
            out.append(c * power)
        return PSeries(out)

    def __eq__(self, other):
        if not isinstance(other, PSeries):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return "PSeries(" + ", ".join(f"[p^{d}] {c}" for d, c in enumerate(self.coeffs)) + ")"
