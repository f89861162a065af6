#!/usr/bin/env python3
"""Regenerate the committed pi/2 and 2/pi constant tables.

Computes pi with integer-only Machin arithmetic (16*atan(1/5) -
4*atan(1/239)), rounds pi/2 and 2/pi to 256-bit mantissas, and derives
the binary64 limb decompositions used by the range-reduction code.
Output is meant to be pasted verbatim into src/glitchprop/_constants.py;
an optional mpmath cross-check runs when mpmath is importable.

Usage: python tools/regen_constants.py
"""

from fractions import Fraction

GUARD_BITS = 384
MANT_BITS = 256
N_LIMBS = 5


def atan_inv_scaled(x: int, scale_bits: int) -> int:
    """floor(atan(1/x) * 2**scale_bits), accurate to a few ulps."""
    one = 1 << scale_bits
    term = one // x
    total = term
    k = 1
    x2 = x * x
    while term:
        term //= x2
        if not term:
            break
        total += -(term // (2 * k + 1)) if k % 2 else term // (2 * k + 1)
        k += 1
    return total


def pi_scaled(scale_bits: int) -> int:
    return 16 * atan_inv_scaled(5, scale_bits) - 4 * atan_inv_scaled(239, scale_bits)


def round_to_mantissa(value: Fraction, bits: int) -> tuple[int, int]:
    """Round value to a `bits`-bit mantissa m with value ~= m * 2**e."""
    assert value > 0
    e = 0
    while value >= 2 ** bits:
        value /= 2
        e += 1
    while value < 2 ** (bits - 1):
        value *= 2
        e -= 1
    m = int(value)
    if value - m >= Fraction(1, 2):
        m += 1
        if m == 2 ** bits:
            m //= 2
            e += 1
    return m, e


def limbs_of(value: Fraction, n: int) -> list[float]:
    out = []
    rest = value
    for _ in range(n):
        limb = float(rest)
        out.append(limb)
        rest = rest - Fraction(limb)
    return out


def main() -> None:
    pi_int = pi_scaled(GUARD_BITS)
    pi_frac = Fraction(pi_int, 1 << GUARD_BITS)

    half_pi = pi_frac / 2
    two_over_pi = Fraction(2) / pi_frac

    hp_m, hp_e = round_to_mantissa(half_pi, MANT_BITS)
    tp_m, tp_e = round_to_mantissa(two_over_pi, MANT_BITS)

    print(f"PI_OVER_2_MANT = {hex(hp_m)}")
    print(f"PI_OVER_2_EXP = {hp_e}")
    print(f"TWO_OVER_PI_MANT = {hex(tp_m)}")
    print(f"TWO_OVER_PI_EXP = {tp_e}")

    hp_exact = Fraction(hp_m, 1) * Fraction(2) ** hp_e
    tp_exact = Fraction(tp_m, 1) * Fraction(2) ** tp_e
    print("PI_OVER_2_LIMBS = (")
    for limb in limbs_of(hp_exact, N_LIMBS):
        print(f"    {limb.hex()!r},")
    print(")")
    print("TWO_OVER_PI_LIMBS = (")
    for limb in limbs_of(tp_exact, N_LIMBS):
        print(f"    {limb.hex()!r},")
    print(")")

    try:
        import mpmath
    except ImportError:
        print("# mpmath not available; cross-check skipped")
        return
    mpmath.mp.prec = GUARD_BITS + 16
    ref = mpmath.pi / 2
    got = mpmath.mpf(hp_m) * mpmath.mpf(2) ** hp_e
    err = abs(ref - got) / ref
    assert err < mpmath.mpf(2) ** (-MANT_BITS + 1), err
    print(f"# mpmath cross-check ok (rel err {mpmath.nstr(err, 5)})")


if __name__ == "__main__":
    main()
