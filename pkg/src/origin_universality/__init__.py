"""Numerical study of local eigenvalue statistics at the origin for unitary ensembles
with weight |det M|^(2 alpha) exp(-n tr V(M)).

The subpackages build the equilibrium measure, orthogonal polynomials for the
varying weight, special functions, the Szego function, the model Bessel
parametrix and the limit kernels, and compare finite-n kernels with the origin
Bessel kernel.
"""

__version__ = "0.1.0"
