"""Numeric services: exponent algebra, quadrature, norms, operators and estimation."""
