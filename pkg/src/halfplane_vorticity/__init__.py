"""halfplane-vorticity - vorticity solution operators on the half plane."""

__version__ = "0.1.0"
__all__ = ["__version__"]
