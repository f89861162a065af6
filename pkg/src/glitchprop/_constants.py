"""Committed high-precision constants for pi/2 and 2/pi.

Generated by tools/regen_constants.py (integer Machin series, 384 guard
bits, rounded to 256-bit mantissas). Do not edit by hand; rerun the
script and paste its output. The limb tuples are exact binary64
decompositions of the 256-bit values, most significant first.
"""

# pi/2 = PI_OVER_2_MANT * 2**PI_OVER_2_EXP (256-bit mantissa)
PI_OVER_2_MANT = 0xC90FDAA22168C234C4C6628B80DC1CD129024E088A67CC74020BBEA63B139B22
PI_OVER_2_EXP = -255

# 2/pi = TWO_OVER_PI_MANT * 2**TWO_OVER_PI_EXP (256-bit mantissa)
TWO_OVER_PI_MANT = 0xA2F9836E4E441529FC2757D1F534DDC0DB6295993C439041FE5163ABDEBBC562
TWO_OVER_PI_EXP = -256

PI_OVER_2_LIMBS = (
    float.fromhex("0x1.921fb54442d18p+0"),
    float.fromhex("0x1.1a62633145c07p-54"),
    float.fromhex("-0x1.f1976b7ed8fbcp-110"),
    float.fromhex("0x1.4cf98e804177dp-164"),
    float.fromhex("0x1.31d89cd910000p-218"),
)

TWO_OVER_PI_LIMBS = (
    float.fromhex("0x1.45f306dc9c883p-1"),
    float.fromhex("-0x1.6b01ec5417056p-55"),
    float.fromhex("-0x1.6447e493ad4cep-109"),
    float.fromhex("0x1.e21c820ff28b2p-163"),
    float.fromhex("-0x1.508510ea78000p-218"),
)
