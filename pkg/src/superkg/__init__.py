"""Superoscillations evolved under the 1-D Klein-Gordon equation.

Modules: ``special`` (Bessel, Hermite, quadrature), ``superosc`` (F_n and its
coefficients), ``kg_spectral`` (closed-form evolutions), ``kg_green``
(Green's-function quadrature solver), ``bargmann`` (Fock space and the
Segal-Bargmann transform), ``stochastic`` (the covariance kernel built on the
Dirac-source response), ``verify`` and ``checks`` (verification harness and
acceptance suite), ``export`` and ``cli`` (files and command line).
"""

__version__ = "0.1.0"
