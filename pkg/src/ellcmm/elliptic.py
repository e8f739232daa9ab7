"""Theta series, the elliptic Vandermonde weight and the elliptic Ruijsenaars operator.

Theta functions enter only through their p-expansions.  A one-variable
Laurent polynomial in ``r`` stands for a function of the ratio x1/x2; it is
turned into a two-variable object by ``r^k -> X1^k X2^-k``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import EvaluationPole, TowerMismatch
from .exactfield import PSeries, Scalar, Tower
from .laurent import Laurent
from .report import VerificationReport


def _one_minus_at(x: Laurent, k: int, n: int) -> PSeries:
    """1 - p^k x as a series truncated at p^n."""
    tower = x.tower
    coeffs = [Laurent.constant(tower, 1)] + [Laurent(tower, 1)] * n
    coeffs[k] = coeffs[k] - x
    return PSeries(coeffs)


def theta_series(c: Scalar, e: int, n: int) -> PSeries:
    """theta_p(c r^e) modulo p^(n+1), coefficients are Laurent polynomials in r."""
    if n < 0:
        raise ValueError("order must be nonnegative")
    tower = c.tower
    out = _one_minus_at(Laurent.monomial(tower, (e,), c), 0, n)
    for m in range(1, n + 1):
        out = out * _one_minus_at(Laurent.monomial(tower, (e,), c), m, n)
        out = out * _one_minus_at(Laurent.monomial(tower, (-e,), c.inv()), m, n)
    return out


def theta_ratio_series(c: Scalar, n: int) -> PSeries:
    """theta_p(c r) / theta_p(r) as a p-series of rational functions of r.

    The tower of ``c`` is extended by the generator ``r``; the p^0 term of
    the denominator, 1 - r, is a unit there.
    """
    rt = c.tower.with_gens("r")
    r = rt.gen("r")
    num = theta_series(rt(c), 1, n).map(lambda f: f.evaluate(r))
    den = theta_series(rt.one, 1, n).map(lambda f: f.evaluate(r))
    return num / den


def elliptic_vandermonde(tower: Tower, n: int, beta: int | None = None) -> PSeries:
    """prod_{m<beta} theta_p(q^m r) theta_p(q^m / r) modulo p^(n+1)."""
    beta = tower.beta if beta is None else beta
    if beta is None:
        raise TowerMismatch("the elliptic Vandermonde needs t = q^beta")
    if tower.beta is not None and tower.beta != beta:
        raise TowerMismatch(f"tower has beta={tower.beta}, asked for {beta}")
    q = tower.q
    out = None
    for m in range(beta):
        for e in (1, -1):
            th = theta_series(q**m, e, n)
            out = th if out is None else out * th
    return out


def trig_vandermonde(tower: Tower, beta: int | None = None) -> Laurent:
    return elliptic_vandermonde(tower, 0, beta)[0]


def lemma7_coefficient(tower: Tower) -> Scalar:
    """-(1-t)(t+q)/(t(1-q)), the p^1 weight of r + 1/r in the Vandermonde ratio."""
    q, t = tower.q, tower.t
    return -(1 - t) * (t + q) / (t * (1 - q))


def vandermonde_ratio_check(beta: int, tower: Tower | None = None) -> tuple[bool, str | None]:
    """Order-p check: V_1 == V_0 * c (r + 1/r), with V the elliptic Vandermonde."""
    tower = tower or Tower(("Q",), beta=beta)
    v = elliptic_vandermonde(tower, 1, beta)
    target = v[0] * Laurent(tower, 1, {(1,): lemma7_coefficient(tower), (-1,): lemma7_coefficient(tower)})
    if v[1] == target:
        return True, None
    return False, f"difference {(v[1] - target).canonical()}"


def ratio_to_xy(f: Laurent) -> Laurent:
    """r^k -> X1^k X2^-k."""
    return f.map_exponents(lambda k: (k[0], -k[0]), nvars=2)


# -- the elliptic Hamiltonian ---------------------------------------------------


@dataclass(frozen=True)
class ClearedImage:
    """H f = num / den with both sides p-series of two-variable Laurent polynomials."""

    num: PSeries
    den: PSeries


def ell_hamiltonian_apply(f: PSeries, n: int | None = None) -> ClearedImage:
    """Apply H1^(ell) to a p-series f of Laurent polynomials, with denominators cleared.

    H f = theta(t r)/theta(r) f(q x1, x2) + theta(t/r)/theta(1/r) f(x1, q x2), and
    the common denominator theta(r) theta(1/r) is returned separately.
    """
    n = f.order if n is None else n
    if f.order < n:
        raise ValueError(f"input known to order {f.order}, asked for {n}")
    f = f.truncate(n)
    tower = f[0].tower
    t, q = tower.t, tower.q
    a = theta_series(t, 1, n).map(ratio_to_xy)
    a2 = theta_series(t, -1, n).map(ratio_to_xy)
    b = theta_series(tower.one, 1, n).map(ratio_to_xy)
    b2 = theta_series(tower.one, -1, n).map(ratio_to_xy)
    up1 = f.map(lambda g: g.scale_vars(q, tower.one))
    up2 = f.map(lambda g: g.scale_vars(tower.one, q))
    num = a * b2 * up1 + a2 * b * up2
    return ClearedImage(num, b * b2)


def ell_hamiltonian_ratio_form(f: PSeries, n: int | None = None) -> PSeries:
    """Same operator with theta ratios expanded as rational functions of r.

    Only for homogeneous inputs; the coefficient of p^d is returned as a
    Scalar-valued function of r times the common factor x2^deg.
    """
    n = f.order if n is None else n
    tower = f[0].tower
    rt = tower.with_gens("r")
    r = rt.gen("r")
    q = rt.q
    degs = set().union(*(g.total_degrees() for g in f.coeffs[: n + 1]))
    if len(degs) > 1:
        raise ValueError("ratio form needs a homogeneous input")
    deg = degs.pop() if degs else 0
    phi = f.truncate(n).map(lambda g: g.map_exponents(lambda k: (k[0],), nvars=1).map_coeffs(rt, rt))
    ra = theta_ratio_series(tower.t, n)
    rinv = PSeries(c.subs("r", r.inv()) for c in ra)
    up = phi.map(lambda g: g.evaluate(q * r))
    down = phi.map(lambda g: g.evaluate(r / q) * q**deg)
    return ra * up + rinv * down


def _determine_eigenvalue(image: ClearedImage, f: PSeries, ref: tuple[int, int], n: int):
    """Solve num - E(p) den f = 0 order by order using the coefficient at ``ref``."""
    tower = f[0].tower
    df = image.den * f
    eig: list[Scalar] = []
    for k in range(n + 1):
        acc = image.num[k]
        for i, e in enumerate(eig):
            acc = acc - df[k - i] * e
        lead = df[0].coeff(*ref)
        if lead.is_zero():
            raise ValueError(f"reference monomial {ref} absent from the p^0 part")
        eig.append(acc.coeff(*ref) / lead)
    residual = image.num - df * PSeries([Laurent.constant(tower, 2, e) for e in eig])
    return eig, residual


def stationary_eigencheck(candidate: PSeries, n: int = 1, refs: tuple[tuple[int, int], ...] | None = None,
                          label: str = "candidate") -> VerificationReport:
    """Check that H1^(ell) candidate = E(p) candidate modulo p^(n+1) for a scalar series E."""
    tower = candidate[0].tower
    report = VerificationReport("eigen", tower.fingerprint)
    image = ell_hamiltonian_apply(candidate, n)
    lead = (image.den[0] * candidate[0])
    exps = sorted(lead.terms)
    refs = refs or (exps[-1], exps[len(exps) // 2])
    series = []
    with report.timed() as box:
        box.update(order=n, label=label)
        problems = []
        for ref in refs:
            eig, residual = _determine_eigenvalue(image, candidate, ref, n)
            series.append(eig)
            bad = [d for d in range(n + 1) if not residual[d].is_zero()]
            if bad:
                problems.append(f"ref {ref}: residual nonzero at p^{bad[0]}: {residual[bad[0]].canonical()[:400]}")
        if len(series) > 1 and any(s != series[0] for s in series[1:]):
            problems.append("eigenvalue series depends on the reference monomial")
        box["ok"] = not problems
        box["witness"] = "; ".join(problems) or None
    report.notes["eigenvalue"] = [e.canonical() for e in series[0]]
    return report


# -- stationary data quoted for j = 0, 1 ---------------------------------------------


def stationary_candidate(j: int, tower: Tower) -> PSeries:
    """The order-p stationary eigenfunctions for j = 0 and j = 1."""
    q, t = tower.q, tower.t
    if j == 0:
        c = q * (1 - t) * (1 - t**2) / (t * (1 - q * t) * (1 - q))
        return PSeries([Laurent.constant(tower, 2), Laurent(tower, 2, {(1, -1): c, (-1, 1): c})])
    if j == 1:
        c = q * (1 - t) * (1 - q * t**2) / (t * (1 - q**2 * t) * (1 - q))
        p0 = Laurent(tower, 2, {(1, 0): tower.one, (0, 1): tower.one})
        return PSeries([p0, Laurent(tower, 2, {(2, -1): c, (-1, 2): c})])
    raise ValueError("stationary data is available for j = 0 and j = 1 only")


def s_to_one_limit_check(j: int, tower: Tower, n: int = 1, stationary_j: int | None = None) -> VerificationReport:
    """Normalized Shiraishi function at s -> 1 against the normalized stationary eigenfunction.

    Forms P_j(x|p,s) P_j(pt|p) - P_j(x|p) P_j(pt|p,s) modulo p^(n+1), with
    pt = (t^(1/2), t^(-1/2)), and checks each coefficient vanishes at s = 1.
    """
    from .shiraishi import shiraishi_series

    stationary_j = j if stationary_j is None else stationary_j
    ser = shiraishi_series(j, n, tower)
    st = ser.tower
    report = VerificationReport("s-limit", st.fingerprint)
    stat = stationary_candidate(stationary_j, st).truncate(n) if n <= 1 else None
    if stat is None:
        raise ValueError("stationary data is known to order p only")
    with report.timed() as box:
        box.update(j=j, order=n, label=f"stationary j={stationary_j}")
        half = st.sqrt_t
        pt = (half, half.inv())
        shir_pt = ser.coeffs.map(lambda g: g.evaluate(*pt))
        stat_pt = stat.map(lambda g: g.evaluate(*pt))
        lhs = ser.coeffs * stat_pt
        rhs = stat * shir_pt
        diff = lhs - rhs
        problems = []
        for d in range(n + 1):
            for k, c in sorted(diff[d].terms.items()):
                try:
                    v = c.subs("s", 1)
                except EvaluationPole:
                    problems.append(f"p^{d} x^{k}: pole at s=1 in {c.canonical()[:300]}")
                    continue
                if not v.is_zero():
                    problems.append(f"p^{d} x^{k}: value {v.canonical()[:300]} at s=1")
        box["ok"] = not problems
        box["witness"] = "; ".join(problems[:3]) or None
    return report


