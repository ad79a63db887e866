"""Fox H-function calculus for anomalous-diffusion molecular timing channels."""

__version__ = "0.1.0"
