"""Spin-1/2 data: observables, eigenrays, and spectral projectors.

Everything here is Gaussian-rational.  Units put hbar = 1, so the spin
eigenvalues along any axis are +1/2 and -1/2.
"""

from .linalg import Matrix, Rational, vec

__all__ = [
    "HALF",
    "SPIN_X",
    "SPIN_Y",
    "SPIN_Z",
    "PROJ_X_UP",
    "PROJ_X_DOWN",
    "PROJ_Y_UP",
    "PROJ_Y_DOWN",
    "PROJ_Z_UP",
    "PROJ_Z_DOWN",
    "X_UP",
    "X_DOWN",
    "Y_UP",
    "Y_DOWN",
    "Z_UP",
    "Z_DOWN",
]

HALF = Rational(1, 2)

SPIN_X = Matrix([["0", "1/2"], ["1/2", "0"]])
SPIN_Y = Matrix([["0", "-1/2i"], ["1/2i", "0"]])
SPIN_Z = Matrix.diagonal("1/2", "-1/2")

# Eigenrays (unnormalized representatives).
X_UP = vec(1, 1)
X_DOWN = vec(1, -1)
Y_UP = vec(1, "i")
Y_DOWN = vec(1, "-i")
Z_UP = vec(1, 0)
Z_DOWN = vec(0, 1)

# Spectral projectors; rational, so measurements never leave the field.
PROJ_X_UP = Matrix([["1/2", "1/2"], ["1/2", "1/2"]])
PROJ_X_DOWN = Matrix([["1/2", "-1/2"], ["-1/2", "1/2"]])
PROJ_Y_UP = Matrix([["1/2", "-1/2i"], ["1/2i", "1/2"]])
PROJ_Y_DOWN = Matrix([["1/2", "1/2i"], ["-1/2i", "1/2"]])
PROJ_Z_UP = Matrix.diagonal(1, 0)
PROJ_Z_DOWN = Matrix.diagonal(0, 1)
