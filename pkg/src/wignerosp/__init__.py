"""Wigner quantization of x p and p^2/2 in the osp(1|2) positive discrete series."""

__version__ = "0.1.0"
