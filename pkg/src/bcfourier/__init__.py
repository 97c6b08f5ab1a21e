"""Exact Fourier analysis over local fields and slope bookkeeping.

Submodules:
    arith      local fields, Galois rings, coefficient rings, the character psi
    schwartz   Bruhat-Schwartz functions, Fourier transform, convolution
    frobsolve  twisted Laurent polynomials and (F - 1) b = a
    ffcalc     slope calculus for coherent sheaves, duality, Ext table
    ramify     value-group slopes, Swan conductors, Herbrand transfer
    cli        command-line front end
"""
from .arith import (
    CoefficientSpec,
    LambdaElement,
    LambdaRing,
    LocalFieldSpec,
    WindowElement,
    char_eval,
    frobenius_trace,
    pair,
)
from .errors import ContractViolation
from .kernels import BACKEND
from .schwartz import (
    LocalMatrix,
    SchwartzFunction,
    affine_act,
    convolve,
    fourier,
    inverse_fourier,
    modulate,
    translate,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "CoefficientSpec",
    "ContractViolation",
    "LambdaElement",
    "LambdaRing",
    "LocalFieldSpec",
    "LocalMatrix",
    "SchwartzFunction",
    "WindowElement",
    "affine_act",
    "char_eval",
    "convolve",
    "fourier",
    "frobenius_trace",
    "inverse_fourier",
    "modulate",
    "pair",
    "translate",
]
