"""Invariants of the nonsofic subshifts Z_N: lambda-graph matrices, K-theory, entropy and KMS data."""

__version__ = "0.1.0"
