"""Type-A1 Macdonald polynomials and the difference operators acting on them."""

from __future__ import annotations

from functools import lru_cache

from .errors import NonExactDivision, NotInSpan
from .exactfield import Scalar, Tower
from .laurent import Laurent, divexact_univariate


def macdonald_coefficients(j: int, tower: Tower) -> list[Scalar]:
    """Coefficients of x1^(j-n) x2^n in P_j, n = 0..j."""
    q, t = tower.q, tower.t
    coeffs = [tower.one]
    c = tower.one
    for i in range(j):
        c = c * (1 - q ** (j - i)) * (1 - t * q**i) / ((1 - t * q ** (j - i - 1)) * (1 - q ** (i + 1)))
        coeffs.append(c)
    return coeffs


@lru_cache(maxsize=None)
def macdonald_A1(j: int, tower: Tower) -> Laurent:
    if j < 0:
        raise ValueError("index must be nonnegative")
    return Laurent(tower, 2, {(j - n, n): c for n, c in enumerate(macdonald_coefficients(j, tower))})


def macdonald_on_circle(j: int, tower: Tower) -> Laurent:
    """P_j(z, 1/z) as a Laurent polynomial in z."""
    return macdonald_A1(j, tower).map_exponents(lambda k: (k[0] - k[1],), nvars=1)


def divide_by_x2_minus_x1(g: Laurent) -> Laurent:
    """Exact quotient g / (x2 - x1) for a two-variable Laurent polynomial."""
    tower = g.tower
    by_degree: dict[int, dict[tuple[int], Scalar]] = {}
    for (e1, e2), v in g.terms.items():
        by_degree.setdefault(e1 + e2, {})[(e2,)] = v
    out: dict[tuple[int, int], Scalar] = {}
    divisor = {0: -tower.one, 1: tower.one}  # u - 1 with u = x2/x1
    for d, terms in by_degree.items():
        quotient = divexact_univariate(Laurent(tower, 1, terms), divisor)
        for (e,), v in quotient.terms.items():
            out[(d - 1 - e, e)] = v
    return Laurent(tower, 2, out)


def trig_hamiltonian_apply(f: Laurent) -> Laurent:
    """H1 f = [(x2 - t x1) f(q x1, x2) - (x1 - t x2) f(x1, q x2)] / (x2 - x1)."""
    tower = f.tower
    q, t = tower.q, tower.t
    x1 = Laurent.monomial(tower, (1, 0))
    x2 = Laurent.monomial(tower, (0, 1))
    g = (x2 - x1 * t) * f.scale_vars(q, tower.one) - (x1 - x2 * t) * f.scale_vars(tower.one, q)
    return divide_by_x2_minus_x1(g)


def second_hamiltonian_apply(f: Laurent) -> Laurent:
    q = f.tower.q
    return f.scale_vars(q, q)


def principal_special(i: int, tower: Tower) -> Scalar:
    """Product formula for P_i(t^(1/2), t^(-1/2))."""
    q, t = tower.q, tower.t
    value = tower.sqrt_t ** (-i) * (1 - t * q**i) / (1 - t)
    for m in range(i):
        value = value * (1 - t**2 * q**m) / (1 - t * q ** (m + 1))
    return value


def special_point(i: int, tower: Tower) -> Scalar:
    """z_i = t^(1/2) q^(i/2)."""
    return tower.sqrt_t * tower.Q**i


def macdonald_expand(f: Laurent, j_min: int = 0, j_max: int | None = None) -> dict[int, Scalar]:
    """Coefficients a_j with f = sum_j a_j (X1 X2)^((deg f - j)/2) P_j.

    Peels off the term with the highest X1 power until nothing is left.
    """
    tower = f.tower
    rest = f
    out: dict[int, Scalar] = {}
    while not rest.is_zero():
        e1, e2 = max(rest.terms)
        j = e1 - e2
        if j < j_min or j < 0 or (j_max is not None and j > j_max):
            raise NotInSpan(f"leftover term x1^{e1} x2^{e2} outside indices [{j_min}, {j_max}]")
        a = rest.terms[(e1, e2)]
        out[j] = a
        rest = rest - macdonald_A1(j, tower).shift(e2, e2) * a
    return out


# -- operators in the single variable z --------------------------------------


def O_A_apply(f: Laurent) -> Laurent:
    """[(1 - t z^2) f(q^(1/2) z) - (z^2 - t) f(q^(-1/2) z)] / (1 - z^2)."""
    tower = f.tower
    Q, t = tower.Q, tower.t
    z2 = Laurent.monomial(tower, (2,))
    up = f.scale_vars(Q)
    down = f.scale_vars(Q.inv())
    g = (1 - z2 * t) * up - (z2 - t) * down
    try:
        return divexact_univariate(g, {0: tower.one, 2: -tower.one})
    except NonExactDivision as exc:
        raise NonExactDivision("O_A needs a z <-> 1/z symmetric input") from exc


def O_B_apply(f: Laurent) -> Laurent:
    tower = f.tower
    return f * Laurent(tower, 1, {(1,): tower.one, (-1,): tower.one})


def O_C_apply(f: Laurent) -> Laurent:
    tower = f.tower
    return O_A_apply(O_B_apply(f)) - O_B_apply(O_A_apply(f)) * tower.Q.inv()


def O_A_eigenvalue(j: int, tower: Tower) -> Scalar:
    """Scalar E_j with O_A P_j(z, 1/z) = E_j P_j(z, 1/z); raises if the image is not proportional."""
    pj = macdonald_on_circle(j, tower)
    image = O_A_apply(pj)
    top = max(pj.terms)
    e = image.coeff(*top) / pj.coeff(*top)
    if image != pj * e:
        raise NotInSpan(f"O_A P_{j} is not a multiple of P_{j}")
    return e
