"""Calderon-Toeplitz operators on Laguerre wavelet subspaces."""
