"""Other coefficient systems obtained from the principal-coefficient solution.

The separation formula turns the principal-coefficient answer ``T`` into the
answer for any coefficient choice ``y[i,j]`` in a semifield::

    T_y = T(c = y) / T(t = 1, c = y) evaluated in the semifield.

For tropical semifields (Speyer's coefficients, lambda-determinants) the
denominator is the componentwise-minimum monomial.  The pentagram map lives
in the universal semifield instead, where the denominator is an honest
rational function; its variables are therefore returned as :class:`Ratio`.

All of this is only set up over the fundamental surface.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .errors import InvalidKappa, SiteNotLocated, UnsupportedSurface
from .laurent import (
    Kind,
    LaurentPoly,
    Ratio,
    eval_t_one,
    substitute_c,
    sym,
    tropical_min_eval,
)
from .oracle import Instance, solve_oracle, solve_recurrence
from .surface import Point3, SteppedSurface, coeff_I, coeff_J, fund_height


@dataclass(frozen=True)
class CoeffScheme:
    """A rule ``(i, j) -> y[i,j]`` giving a Laurent monomial for every site."""

    name: str
    universe: str
    rule: Callable[[int, int], LaurentPoly]

    def __call__(self, i: int, j: int) -> LaurentPoly:
        y = self.rule(i, j)
        if not y.is_monomial():
            raise ValueError(f"scheme {self.name} gives a non-monomial at {(i, j)}")
        return y


def separation_eval(T: LaurentPoly, scheme: CoeffScheme) -> LaurentPoly:
    """``T(c = y)`` divided by its tropical value at ``t = 1``."""
    numerator = substitute_c(T, scheme)
    denominator = tropical_min_eval(eval_t_one(numerator))
    return numerator * denominator.as_poly().inverse()


def specialize(inst: Instance, scheme: CoeffScheme, solver=solve_oracle) -> LaurentPoly:
    """Solve ``inst`` with ``solver`` and apply :func:`separation_eval`."""
    if not inst.surface.is_fund():
        raise UnsupportedSurface("specialisation is only available over the fundamental surface")
    return separation_eval(solver(inst), scheme)


# -- Speyer's coefficients ---------------------------------------------------

def _A(i, j, e=1):
    return sym(Kind.A, i, j, e)


def _B(i, j, e=1):
    return sym(Kind.B, i, j, e)


def _C(i, j, e=1):
    return sym(Kind.SC, i, j, e)


def _D(i, j, e=1):
    return sym(Kind.D, i, j, e)


def speyer_scheme() -> CoeffScheme:
    """``BD/AC`` on even sites and ``A[i-1,j]C[i+1,j] / B[i,j-1]D[i,j+1]`` on odd ones."""

    def rule(i: int, j: int) -> LaurentPoly:
        if (i + j) % 2 == 0:
            return _B(i, j) * _D(i, j) * _A(i, j, -1) * _C(i, j, -1)
        return _A(i - 1, j) * _C(i + 1, j) * _B(i, j - 1, -1) * _D(i, j + 1, -1)

    return CoeffScheme("speyer", "A, B, C, D on even sites", rule)


def speyer_recurrence_sides(values: Callable[[int, int, int], LaurentPoly], i: int, j: int, k: int):
    """Both sides of ``T[k-1] T[k+1] = B[i,j+k] D[i,j-k] T T + A[i+k,j] C[i-k,j] T T``."""
    left = values(i, j, k - 1) * values(i, j, k + 1)
    right = _B(i, j + k) * _D(i, j - k) * values(i - 1, j, k) * values(i + 1, j, k)
    right = right + _A(i + k, j) * _C(i - k, j) * values(i, j - 1, k) * values(i, j + 1, k)
    return left, right


# -- lambda-determinants ------------------------------------------------------

def lambda_scheme() -> CoeffScheme:
    """``lam[i]/mu[j]`` on even sites and ``mu[j]/lam[i]`` on odd ones."""

    def rule(i: int, j: int) -> LaurentPoly:
        ratio = sym(Kind.LAM, i) * sym(Kind.MU, j, exp=-1)
        return ratio if (i + j) % 2 == 0 else ratio.inverse()

    return CoeffScheme("lambda", "lam[i], mu[j]", rule)


def lambda_recurrence_sides(values: Callable[[int, int, int], LaurentPoly], i: int, j: int, k: int):
    """Both sides of ``T[k-1] T[k+1] = lam[i] T[i-1] T[i+1] + mu[j] T[j-1] T[j+1]``."""
    left = values(i, j, k - 1) * values(i, j, k + 1)
    right = sym(Kind.LAM, i) * values(i - 1, j, k) * values(i + 1, j, k)
    right = right + sym(Kind.MU, j) * values(i, j - 1, k) * values(i, j + 1, k)
    return left, right


def specialized_values(scheme: CoeffScheme) -> Callable[[int, int, int], LaurentPoly]:
    """Memoised ``(i, j, k) -> T_y[i,j,k]`` over the fundamental surface."""
    memo: dict[tuple[int, int, int], LaurentPoly] = {}
    fund = SteppedSurface.fund()

    def value(i: int, j: int, k: int) -> LaurentPoly:
        key = (i, j, k)
        if key not in memo:
            memo[key] = separation_eval(solve_recurrence(fund, Point3(i, j, k)), scheme)
        return memo[key]

    return value


# -- pentagram map ------------------------------------------------------------

def _shifts(kappa: int) -> tuple[int, int]:
    """``r = floor((kappa-2)/2)`` and ``r' = ceil((kappa-2)/2)``."""
    return (kappa - 2) // 2, (kappa - 1) // 2


def _check_kappa(n: int, kappa: int) -> None:
    if not 3 <= kappa <= n - 1:
        raise InvalidKappa(f"kappa must satisfy 3 <= kappa <= n-1, got kappa={kappa}, n={n}")


def _wrap(index: int, n: int) -> int:
    """Representative of ``index`` mod ``n`` in ``1..n``."""
    return (index - 1) % n + 1


def pentagram_label(i: int, j: int, n: int, kappa: int) -> tuple[str, int]:
    """The pentagram variable sitting at site ``(i, j)``: ``("p", l)`` or ``("q", l)``.

    ``p[n]`` sits at the origin.  On even sites the index is
    ``n - (kappa-1)(i+j)/2 + (i-j)/2`` (mod ``n``): a diagonal step up-right
    lowers it by ``kappa - 1``, a diagonal step down-right raises it by one.
    An odd site carries ``q[l - r']`` where ``p[l]`` is its left neighbour.
    """
    _check_kappa(n, kappa)
    _, r_prime = _shifts(kappa)
    if (i + j) % 2 == 0:
        return "p", _wrap(n - (kappa - 1) * (i + j) // 2 + (i - j) // 2, n)
    left = _wrap(n - (kappa - 1) * (i - 1 + j) // 2 + (i - 1 - j) // 2, n)
    return "q", _wrap(left - r_prime, n)


def pentagram_scheme(n: int, kappa: int) -> CoeffScheme:
    """``c[i,j] -> pi(i, j)``, the periodic assignment of ``p``/``q`` variables."""
    _check_kappa(n, kappa)

    def rule(i: int, j: int) -> LaurentPoly:
        name, index = pentagram_label(i, j, n, kappa)
        return sym(Kind.P if name == "p" else Kind.Q, index)

    return CoeffScheme(f"pentagram(n={n}, kappa={kappa})", f"p[1..{n}], q[1..{n}]", rule)


def pentagram_site(ell: int, k: int, n: int, kappa: int) -> tuple[int, int]:
    """A site carrying the ``k``-th iterate of ``q[ell]``.

    The site must have height ``k`` one step above its four neighbours,
    which forces ``i + j + k`` odd.  For even ``k`` that is a site labelled
    ``q[ell]``; for odd ``k`` the labels have swapped roles (mutation turns
    ``p`` into ``1/p = q'``), so it is a site labelled ``p[ell]``.  Among the
    candidates the one closest to the origin is chosen (ties broken by
    coordinates); periodicity makes the answer independent of the choice.
    """
    _check_kappa(n, kappa)
    if k < 0:
        raise SiteNotLocated(f"pentagram iterates start at k = 0, got k = {k}")
    if not 1 <= ell <= n:
        raise SiteNotLocated(f"index {ell} is outside 1..{n}")
    want = ("q" if k % 2 == 0 else "p", ell)
    radius = 2 * n + kappa
    for dist in range(radius + 1):
        ring = sorted(
            (i, j)
            for i in range(-dist, dist + 1)
            for j in (dist - abs(i), abs(i) - dist)
            if abs(i) + abs(j) == dist
        )
        for i, j in dict.fromkeys(ring):
            if (i + j + k) % 2 and pentagram_label(i, j, n, kappa) == want:
                return i, j
    raise SiteNotLocated(f"no site for q[{ell}] at step {k} within distance {radius}")


def pentagram_q(ell: int, k: int, n: int, kappa: int) -> Ratio:
    """``q^(k)[ell] = (I/J)[i,j,k-1] * T[i,j-1]T[i,j+1] / (T[i-1,j]T[i+1,j])`` at ``t = 1, c = pi``.

    The four ``T`` values are at level ``k - 1`` and come from the recurrence
    over the fundamental surface.
    """
    scheme = pentagram_scheme(n, kappa)
    i, j = pentagram_site(ell, k, n, kappa)
    fund = SteppedSurface.fund()
    for x in ((i, j - 1), (i, j + 1), (i - 1, j), (i + 1, j)):
        if fund_height(*x) > k - 1:
            raise SiteNotLocated(f"neighbour {x} lies above level {k - 1}")

    def at_one(a: int, b: int) -> LaurentPoly:
        return substitute_c(eval_t_one(solve_recurrence(fund, Point3(a, b, k - 1))), scheme)

    ratio = Ratio(substitute_c(coeff_I(i, j, k - 1), scheme), substitute_c(coeff_J(i, j, k - 1), scheme))
    return ratio * Ratio(at_one(i, j - 1) * at_one(i, j + 1), at_one(i - 1, j) * at_one(i + 1, j))


def pentagram_p(ell: int, k: int, n: int, kappa: int) -> Ratio:
    """``p^(k)[ell] = 1 / q^(k+1)[ell]``."""
    return Ratio(1) / pentagram_q(ell, k + 1, n, kappa)


def pentagram_map_step(ell: int, n: int, kappa: int) -> tuple[Ratio, Ratio]:
    """One step of the higher pentagram map written directly in ``p``, ``q``.

    ``q'[i] = 1/p[i]`` and
    ``p'[i] = q[i] (1+p[i-r])(1+p[i+r']) / ((1+1/p[i-r-1])(1+1/p[i+r'+1]))``.
    Independent of the T-system; used to cross-check :func:`pentagram_p`.
    """
    _check_kappa(n, kappa)
    r, r_prime = _shifts(kappa)

    def p(x: int) -> Ratio:
        return Ratio(sym(Kind.P, _wrap(x, n)))

    q = Ratio(sym(Kind.Q, _wrap(ell, n)))
    p_next = q * (1 + p(ell - r)) * (1 + p(ell + r_prime))
    p_next = p_next / ((1 + Ratio(1) / p(ell - r - 1)) * (1 + Ratio(1) / p(ell + r_prime + 1)))
    return p_next, Ratio(1) / p(ell)


__all__ = [
    "CoeffScheme",
    "lambda_recurrence_sides",
    "lambda_scheme",
    "pentagram_label",
    "pentagram_map_step",
    "pentagram_p",
    "pentagram_q",
    "pentagram_scheme",
    "pentagram_site",
    "separation_eval",
    "specialize",
    "specialized_values",
    "speyer_recurrence_sides",
    "speyer_scheme",
]
