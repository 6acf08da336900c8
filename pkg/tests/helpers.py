"""Shared builders for the test suite."""

from fractions import Fraction

from k3kit.exactpoly import BinaryForm
from k3kit.weierstrass import WeierstrassModel

S = BinaryForm.s()
T = BinaryForm.t()


def const(c) -> BinaryForm:
    return BinaryForm.from_coeffs([Fraction(c)])


def rank18_model(a, b, c) -> WeierstrassModel:
    """y^2 = x^3 + s^4 t^4 x + s^5 t^5 (a s^2 + b s t + c t^2)."""
    alpha = S**4 * T**4
    beta = S**5 * T**5 * (const(a) * S**2 + const(b) * S * T + const(c) * T**2)
    return WeierstrassModel(2, alpha, beta)


def rank19_model(l) -> WeierstrassModel:
    """y^2 = x^3 + (1/3)s^3 t^3 (48l(s+t)^2 - st) x
    - (2/27)s^5 t^5 (72l(s+t)^2 - st)."""
    st = S * T
    sq = (S + T) ** 2
    alpha = const(Fraction(1, 3)) * S**3 * T**3 * (const(48 * Fraction(l)) * sq - st)
    beta = const(Fraction(-2, 27)) * S**5 * T**5 * (const(72 * Fraction(l)) * sq - st)
    return WeierstrassModel(2, alpha, beta)


def random_rational(rng, lo=-9, hi=9) -> Fraction:
    num = 0
    while num == 0:
        num = rng.randint(lo, hi)
    return Fraction(num, rng.randint(1, 9))


def random_form(rng, degree, sparse=False) -> BinaryForm:
    while True:
        coeffs = [
            Fraction(rng.randint(-4, 4)) if (not sparse or rng.random() < 0.6) else Fraction(0)
            for _ in range(degree + 1)
        ]
        if any(coeffs):
            return BinaryForm.from_coeffs(coeffs)
