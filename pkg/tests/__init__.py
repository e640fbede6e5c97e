"""halfplane-vorticity test suite."""
