"""
Worker fan-out and per-trial execution.
"""
