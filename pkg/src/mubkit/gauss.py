"""Generalized quadratic Gauss sums S(u, v, w) and their identities.

    S(u, v, w) = sum_{k=0}^{|w|-1} exp(i pi (u k^2 + v k) / w)

with u w != 0 and u w + v even.  Every term is a 2|w|-th root of unity; the
exponent is reduced mod 2|w| in integer arithmetic before evaluation.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Literal

from .errors import Inapplicable, ParityViolation, RangeError
from .phases import half_root


@dataclass(frozen=True)
class GaussSumSpec:
    u: int
    v: int
    w: int

    def __post_init__(self):
        if self.u * self.w == 0:
            raise ParityViolation(f"S({self.u},{self.v},{self.w}): need u*w != 0")
        if (self.u * self.w + self.v) % 2:
            raise ParityViolation(f"S({self.u},{self.v},{self.w}): u*w + v must be even")

    def __iter__(self):
        return iter((self.u, self.v, self.w))


def _phase(num: int, w: int) -> complex:
    """exp(i pi num / w) for integer num and nonzero w."""
    return half_root(num if w > 0 else -num, abs(w))


def _raw_sum(u: int, v: int, w: int) -> complex:
    W = abs(w)
    mod = 2 * W
    return sum(_phase((u * k * k + v * k) % mod, w) for k in range(W))


def gauss_sum(spec, v: int | None = None, w: int | None = None, *, force: bool = False) -> complex:
    """Evaluate S(u, v, w) by direct summation.

    Accepts a GaussSumSpec or three integers.  With force=True, triples that
    break the parity/nonzero conditions are summed anyway (with a warning);
    u = 0 or w = 0 are never accepted.
    """
    if isinstance(spec, GaussSumSpec):
        return _raw_sum(*spec)
    u = int(spec)
    try:
        return _raw_sum(*GaussSumSpec(u, int(v), int(w)))
    except ParityViolation:
        if not force or u * int(w) == 0:
            raise
        warnings.warn(f"S({u},{v},{w}) is outside the uw+v even domain; evaluating raw sum")
        return _raw_sum(u, int(v), int(w))


def _coerce(spec) -> GaussSumSpec:
    return spec if isinstance(spec, GaussSumSpec) else GaussSumSpec(*spec)


def translation_identity(spec, t: int) -> float:
    """|S(u,v,w) - q^((u t^2 + v t)/2) S(u, v + 2ut, w)| with q = exp(2 pi i/w)."""
    u, v, w = _coerce(spec)
    lhs = gauss_sum(GaussSumSpec(u, v, w))
    rhs = _phase((u * t * t + v * t) % (2 * abs(w)), w) * gauss_sum(GaussSumSpec(u, v + 2 * u * t, w))
    return abs(lhs - rhs)


def derived_relation_check(u: int, n: int, w: int) -> float:
    """Residual of S(u, 2n - uw, w) = q^(-(w-1)(w+1)u/8 + (w-1)n/2) S(u, 2n - u, w), w odd."""
    if w % 2 == 0:
        raise RangeError("derived relation needs odd w")
    # (w^2 - 1)/8 and (w - 1)/2 are integers for odd w
    x = -((w - 1) * (w + 1) // 8) * u + (w - 1) // 2 * n
    lhs = gauss_sum(GaussSumSpec(u, 2 * n - u * w, w))
    rhs = _phase(2 * x, w) * gauss_sum(GaussSumSpec(u, 2 * n - u, w))
    return abs(lhs - rhs)


def negation_identity(spec) -> float:
    """|S(u, v, w) - S(u, -v, w)|; holds unconditionally."""
    u, v, w = _coerce(spec)
    return abs(gauss_sum(GaussSumSpec(u, v, w)) - gauss_sum(GaussSumSpec(u, -v, w)))


def two_valuation(n: int) -> int:
    if n == 0:
        raise ValueError("2-valuation of 0 is infinite")
    n = abs(n)
    return (n & -n).bit_length() - 1


SignReason = Literal["odd-solution-low-valuation", "solution-high-valuation", "no-solution"]


@dataclass(frozen=True)
class SignCase:
    spec: GaussSumSpec
    predicted_sign: int
    reason: SignReason


def sign_case(spec) -> SignCase:
    """Predict the sign in S(u, v, w) = +-S(u, -v, w) from 2-valuations.

    The sign is minus when v2(u) <= v2(w) and u t + v = w (mod 2w) has an odd
    solution t, or when v2(u) >= v2(w) + 1 and it has any solution.
    """
    spec = _coerce(spec)
    u, v, w = spec
    W = abs(w)
    if not any((u * t + v) % W == 0 for t in range(W)):
        raise Inapplicable(f"no t with {u}t + {v} = 0 mod {w}")
    sols = [t for t in range(2 * W) if (u * t + v - w) % (2 * W) == 0]
    vu, vw = two_valuation(u), two_valuation(w)
    if vu <= vw and any(t % 2 for t in sols):
        return SignCase(spec, -1, "odd-solution-low-valuation")
    if vu >= vw + 1 and sols:
        return SignCase(spec, -1, "solution-high-valuation")
    return SignCase(spec, +1, "no-solution")


def translation_signs(spec) -> set[int]:
    """Signs (-1)^(t k) over all t with u t + v = k w, one period of t.

    Independent of the valuation rule: each solution t turns the translation
    identity into S(u,v,w) = (-1)^(tk) S(u,-v,w).
    """
    u, v, w = _coerce(spec)
    signs = set()
    for t in range(2 * abs(w)):
        if (u * t + v) % w == 0:
            k = (u * t + v) // w
            signs.add(-1 if (t * k) % 2 else 1)
    return signs


def minus_sign_values(u: int, w: int) -> list[int]:
    """Values v in 0..2|w|-1 (uw + v even) whose sign case is minus."""
    out = []
    for v in range(2 * abs(w)):
        if (u * w + v) % 2:
            continue
        try:
            if sign_case(GaussSumSpec(u, v, w)).predicted_sign == -1:
                out.append(v)
        except Inapplicable:
            pass
    return out


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_magnitude(u: int, v: int, w: int) -> float:
    """|S(u, v, w)| for w an odd prime, computed through index translation.

    Even u: with xi = u/2, eta = v/2 pick t solving 2 xi t + eta = 0 (mod w),
    which leaves |sum_k q^(xi k^2)|.  Odd u: sum over a full residue system
    mod 2w (the extra half equals the original sum) and translate by
    t = u^-1 (1 - v)/2 so the linear coefficient becomes 1.
    """
    if w < 3 or not is_prime(w):
        raise RangeError(f"w={w} must be an odd prime")
    if u % w == 0:
        raise RangeError("u must not vanish mod w")
    GaussSumSpec(u, v, w)
    if u % 2 == 0:
        return abs(even_u_reduced(u, w))
    mod = 2 * w
    t = (pow(u, -1, mod) * ((1 - v) // 2)) % mod
    assert (2 * u * t + v) % mod == 1
    doubled = sum(_phase((u * k * k + k) % mod, w) for k in range(mod))
    return abs(doubled) / 2


def even_u_reduced(u: int, w: int) -> complex:
    """sum_k q^(xi k^2), xi = u/2, the translated form of S(u, v, w) for even u."""
    if u % 2:
        raise RangeError("u must be even")
    return sum(_phase(u * k * k % (2 * abs(w)), w) for k in range(abs(w)))


def quadratic_phase_sum(d: int, lam: int, mu: int) -> complex:
    """sum_{k=0}^{d-1} exp(i pi [k(d-k) lam + 2 k mu] / d)."""
    if d < 2:
        raise RangeError("d must be >= 2")
    return sum(half_root(k * (d - k) * lam + 2 * k * mu, d) for k in range(d))


def quadratic_phase_grid(d: int):
    """Yield (lam, mu, |sum|) over |lam| = 1..d-1 and |mu| = 0..d-1."""
    for lam in [x for x in range(-(d - 1), d) if x != 0]:
        for mu in range(-(d - 1), d):
            yield lam, mu, abs(quadratic_phase_sum(d, lam, mu))


def overlap_gauss_params(two_j: int, a: int, b: int, alpha: int, beta: int) -> GaussSumSpec:
    w = two_j + 1
    u = a - b
    v = -(a - b) * w - 2 * (alpha - beta)
    return GaussSumSpec(u, v, w)


def overlap_via_gauss(two_j: int, r: float, a: int, b: int, alpha: int, beta: int) -> complex:
    """<j alpha; r a | j beta; r b> = S(u, v, w) / w for a != b.

    The value does not depend on r as long as both bases share it.
    """
    if a == b:
        raise RangeError("overlap via Gauss sums needs a != b")
    spec = overlap_gauss_params(two_j, a, b, alpha, beta)
    return gauss_sum(spec) / spec.w


def v_orbit(u: int, v: int, w: int) -> set[int]:
    """Residues of v + 2ut mod 2|w| as t ranges over the integers."""
    mod = 2 * abs(w)
    return {(v + 2 * u * t) % mod for t in range(mod)}
