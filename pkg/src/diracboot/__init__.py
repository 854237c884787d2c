"""Bootstrap bounds, Monte Carlo oracles and equilibrium measures for random
Dirac-operator ensembles built from finite spectral triples."""

__version__ = "0.1.0"
