"""Physical constants (CODATA values, SI units).

Kept in one place so every module agrees on the numbers.
"""

HBAR = 1.054571817e-34  # reduced Planck constant [J s]
K_B = 1.380649e-23      # Boltzmann constant [J/K]
C_LIGHT = 299792458.0   # speed of light [m/s]

__all__ = ["HBAR", "K_B", "C_LIGHT"]
