"""
Utility package initialization: file I/O, RNG streams, output formatting.
"""
