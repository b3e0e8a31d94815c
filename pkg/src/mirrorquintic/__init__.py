"""Point counts, Frobenius traces and quotient bookkeeping for the quintic
mirror pair and its cubic complete-intersection analogues over finite fields."""

__version__ = "0.1.0"
