"""Question-answering robustness to interface noise: generators, metrics, repair."""

__version__ = "0.1.0"
