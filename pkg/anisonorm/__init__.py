"""Anisotropic Grand Lebesgue norms and weighted Riesz/Fourier operator toolkit."""

__version__ = "0.1.0"
