"""Dormand-Prince 5(4) coefficients, shared by both integrator backends.

The propagated solution is the fifth-order one; the embedded fourth-order
weights provide the local error estimate.  The D row builds the standard
fourth-order dense-output interpolant.  Values are exact rationals evaluated
in double precision, so the compiled and pure-Python kernels agree bitwise.
"""

from fractions import Fraction as F

C = tuple(float(x) for x in (0, F(1, 5), F(3, 10), F(4, 5), F(8, 9), 1, 1))

A = (
    (),
    (float(F(1, 5)),),
    (float(F(3, 40)), float(F(9, 40))),
    (float(F(44, 45)), float(F(-56, 15)), float(F(32, 9))),
    (
        float(F(19372, 6561)),
        float(F(-25360, 2187)),
        float(F(64448, 6561)),
        float(F(-212, 729)),
    ),
    (
        float(F(9017, 3168)),
        float(F(-355, 33)),
        float(F(46732, 5247)),
        float(F(49, 176)),
        float(F(-5103, 18656)),
    ),
    (
        float(F(35, 384)),
        0.0,
        float(F(500, 1113)),
        float(F(125, 192)),
        float(F(-2187, 6784)),
        float(F(11, 84)),
    ),
)

# fifth-order weights (identical to the last A row: FSAL scheme)
B = A[6] + (0.0,)

# fourth-order embedded weights
B_HAT = (
    float(F(5179, 57600)),
    0.0,
    float(F(7571, 16695)),
    float(F(393, 640)),
    float(F(-92097, 339200)),
    float(F(187, 2100)),
    float(F(1, 40)),
)

# error weights: fifth minus fourth order
E = tuple(b - bh for b, bh in zip(B, B_HAT))

# dense-output coefficients (rcont5 row)
D = (
    float(F(-12715105075, 11282082432)),
    0.0,
    float(F(87487479700, 32700410799)),
    float(F(-10690763975, 1880347072)),
    float(F(701980252875, 199316789632)),
    float(F(-1453857185, 822651844)),
    float(F(69997945, 29380423)),
)

ORDER = 5
ERROR_EXPONENT = -1.0 / 5.0
