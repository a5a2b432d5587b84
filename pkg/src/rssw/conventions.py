"""Fixed sign conventions for the quaternion model of the tangent fiber.

The tangent fiber V is the quaternions with the oriented orthonormal frame
``FRAME = (1, i, -j, k)``. With the plain frame ``(1, i, j, k)`` and Hamilton's
``ij = k``, the Clifford action of two-forms on the positive spinors sees the
anti-self-dual forms, and the positive spinors are the -1 eigenspace of the
volume element. Flipping the sign of the third frame vector is the one free
sign that repairs both; ``tests/test_clifford.py`` pins it.

Complex scalars act on spinors by *right* multiplication. In the complex-pair
picture this is exactly scalar multiplication of the column ``(z, w)``, it
commutes with the left Spin(4) action, and it makes every projection here
complex linear. The ``j`` branch of Pin(2) is then complex antilinear, so it
acts by -1 on imaginary-valued forms.
"""

from .scalars import ONE, I, J, K, Quaternion

FRAME_SIGNS = (1, 1, -1, 1)

FRAME: tuple[Quaternion, ...] = tuple(
    e.scale(s) for e, s in zip((ONE, I, J, K), FRAME_SIGNS)
)

# Self-dual basis as {(alpha, beta): coefficient} over frame indices 0..3:
# w1 = e1^e2 + e3^e4, w2 = e1^e3 - e2^e4, w3 = e1^e4 + e2^e3.
SELF_DUAL_BASIS = (
    {(0, 1): 1, (2, 3): 1},
    {(0, 2): 1, (1, 3): -1},
    {(0, 3): 1, (1, 2): 1},
)

ANTI_SELF_DUAL_BASIS = (
    {(0, 1): 1, (2, 3): -1},
    {(0, 2): 1, (1, 3): 1},
    {(0, 3): 1, (1, 2): -1},
)
