"""Causal regularization toolkit: test-function smearing, finite-part extension,
the causal Schwinger-model polarization and the test-function regulated anomaly."""

__version__ = "0.1.0"
