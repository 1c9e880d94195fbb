"""
Computation layer: graph construction, weighting, edge-count moments,
inference and Monte Carlo studies.
"""
