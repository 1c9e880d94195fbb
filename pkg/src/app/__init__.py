"""
Command-line application package: settings, argument parsing and subcommands.
"""

__version__ = "1.0.0"
