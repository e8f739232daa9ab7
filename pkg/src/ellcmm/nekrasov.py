"""Partition pairs and orbifolded Nekrasov factors for type-A1 Shiraishi sums.

Every Nekrasov factor is a product of terms ``1 - M`` where ``M`` is a
monomial q^a t^b S^c (S = s^(1/2)).  We carry monomials as exponent triples
``(a, b, c)`` so that identically vanishing terms and numerator/denominator
cancellations are detected exactly, before any polynomial arithmetic.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterator

from .errors import ZeroDenominator
from .exactfield import Scalar, Tower

Triple = tuple[int, int, int]


class Partition(tuple):
    """Weakly decreasing tuple of positive integers; ``part(a)`` is 0 past the end."""

    def __new__(cls, parts=()):
        parts = tuple(int(x) for x in parts)
        while parts and parts[-1] == 0:
            parts = parts[:-1]
        if any(x <= 0 for x in parts) or any(a < b for a, b in zip(parts, parts[1:])):
            raise ValueError(f"not a partition: {parts}")
        return super().__new__(cls, parts)

    def part(self, a: int) -> int:
        """1-based access with implicit trailing zeros."""
        return self[a - 1] if 1 <= a <= len(self) else 0

    @property
    def length(self) -> int:
        return len(self)

    def __str__(self):
        return "[" + ",".join(map(str, self)) + "]"

    __repr__ = __str__

    @classmethod
    def parse(cls, text: str) -> Partition:
        text = text.strip()
        if not (text.startswith("[") and text.endswith("]")):
            raise ValueError(f"malformed partition {text!r}")
        body = text[1:-1].strip()
        return cls(int(x) for x in body.split(",")) if body else cls()


EMPTY = Partition()


def p_degree(lam: Partition, mu: Partition) -> int:
    """Power of p carried by the pair: even-indexed parts of lam plus odd-indexed parts of mu."""
    return sum(lam[1::2]) + sum(mu[0::2])


def x_exponent(lam: Partition, mu: Partition) -> int:
    """Net power k of x2/x1 in the pair's monomial (before the global x1^j)."""
    return sum(lam[0::2]) - sum(lam[1::2]) + sum(mu[1::2]) - sum(mu[0::2])


def nekrasov_terms(P: Partition, R: Partition, k: int, u: Triple) -> list[Triple]:
    """Monomials M with N^{(k)}_{P,R}(u) = prod (1 - M)."""
    uq, ut, uS = u
    out = []
    for b in range(1, len(P) + 1):
        Pb1 = P.part(b + 1)
        for a in range(1, b + 1):
            if (b - a - k) % 2:
                continue
            base = uq - R.part(a) + Pb1
            for m in range(P.part(b) - Pb1):
                out.append((base + m, ut, uS + b - a))
    for b in range(1, len(R) + 1):
        Rb, Rb1 = R.part(b), R.part(b + 1)
        for a in range(1, b + 1):
            if (b - a + k + 1) % 2:
                continue
            base = uq + P.part(a) - Rb
            for m in range(Rb - Rb1):
                out.append((base + m, ut, uS + a - b - 1))
    return out


def nekrasov_factor(P: Partition, R: Partition, k: int, u: Scalar) -> Scalar:
    """N^{(k)}_{P,R}(u) for an arbitrary field element u (tower must contain S or s)."""
    tower = u.tower
    result = tower.one
    for a, _, c in nekrasov_terms(P, R, k, (0, 0, 0)):
        result = result * (1 - u * tower.qts(Q=2 * a, S=c))
    return result


def _trivial(tower: Tower, m: Triple) -> bool:
    """True when the monomial is identically 1 in the tower."""
    a, b, c = m
    if c:
        return False
    if tower.beta is not None:
        return a + tower.beta * b == 0
    return a == 0 and b == 0


def _key(tower: Tower, m: Triple) -> Triple:
    a, b, c = m
    if tower.beta is not None:
        return (a + tower.beta * b, 0, c)
    return m


@dataclass(frozen=True)
class PairContribution:
    lam: Partition
    mu: Partition
    p_degree: int
    coefficient: Scalar
    exponent1: int
    exponent2: int


def _weights(j: int) -> tuple[tuple[Triple, ...], tuple[Triple, ...]]:
    # y = S^-1 t^-1 q^-j
    q_over_t = (1, -1, 0)
    num = (q_over_t, (1 - j, -2, -1), (1 + j, 0, 1), q_over_t)
    den = ((0, 0, 0), (-j, -1, -1), (j, 1, 1), (0, 0, 0))
    return num, den


def pair_terms(lam: Partition, mu: Partition, j: int) -> tuple[list[Triple], list[Triple]]:
    """Numerator and denominator monomials of the four-factor Nekrasov ratio."""
    wn, wd = _weights(j)
    slots = ((lam, lam, 0), (lam, mu, 1), (mu, lam, -1), (mu, mu, 0))
    num: list[Triple] = []
    den: list[Triple] = []
    for (P, R, k), un, ud in zip(slots, wn, wd):
        num.extend(nekrasov_terms(P, R, k, un))
        den.extend(nekrasov_terms(P, R, k, ud))
    return num, den


def pair_contribution(lam: Partition, mu: Partition, j: int, tower: Tower) -> PairContribution:
    """One summand of the Shiraishi sum, with the (t/q)^{|lam|+|mu|} prefactor folded in."""
    lam, mu = Partition(lam), Partition(mu)
    num, den = pair_terms(lam, mu, j)
    d = p_degree(lam, mu)
    k = x_exponent(lam, mu)
    if any(_trivial(tower, m) for m in num):
        return PairContribution(lam, mu, d, tower.zero, -k, k)
    for m in den:
        if _trivial(tower, m):
            raise ZeroDenominator(f"denominator factor vanishes for lambda={lam}, mu={mu}, j={j}")
    cn = Counter(_key(tower, m) for m in num)
    cd = Counter(_key(tower, m) for m in den)
    common = cn & cd
    cn -= common
    cd -= common
    size = sum(lam) + sum(mu)
    factors = [tower.qts(Q=-2 * size, t=size)]
    factors += [_one_minus(tower, m) ** e for m, e in cn.items()]
    factors += [_one_minus(tower, m) ** -e for m, e in cd.items()]
    return PairContribution(lam, mu, d, tower.product(factors), -k, k)


def _one_minus(tower: Tower, m: Triple) -> Scalar:
    a, b, c = m
    mono = tower.qts(Q=2 * a, t=b, S=c)
    return Scalar(tower, mono.den - mono.num, mono.den, True)


def _bounded_partitions(first_max: int, budget: int, charged_parity: int) -> Iterator[Partition]:
    """Partitions whose parts at 1-based indices of the given parity sum to at most ``budget``.

    ``charged_parity`` is 0 for even indices (lambda) and 1 for odd indices (mu).
    """

    def rec(index: int, prev: int, left: int) -> Iterator[tuple[int, ...]]:
        yield ()
        charged = index % 2 == charged_parity
        top = min(prev, left) if charged else prev
        for v in range(1, top + 1):
            for rest in rec(index + 1, v, left - v if charged else left):
                yield (v,) + rest

    for parts in rec(1, first_max, budget):
        yield Partition(parts)


def enumerate_pairs(j: int, dmax: int) -> list[tuple[Partition, Partition]]:
    """Superset of the pairs with a nonvanishing summand and p-degree <= dmax.

    Uses only lam_1 <= mu_1 + j and the p-degree bound; pairs whose summand
    vanishes may be included.
    """
    if j < 0 or dmax < 0:
        raise ValueError("j and dmax must be nonnegative")
    pairs = []
    for mu in _bounded_partitions(dmax, dmax, 1):
        used = sum(mu[0::2])
        mu1 = mu.part(1)
        for lam in _bounded_partitions(mu1 + j, dmax - used, 0):
            pairs.append((lam, mu))
    pairs.sort(key=lambda pr: (p_degree(*pr), pr[0], pr[1]))
    return pairs
