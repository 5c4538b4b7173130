"""Fourier analysis of Boolean functions in tail spaces."""
from .core import CubeFunction, FourierSpectrum, TailCertificate

__version__ = "0.1.0"

__all__ = ["CubeFunction", "FourierSpectrum", "TailCertificate", "__version__"]
