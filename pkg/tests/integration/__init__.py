"""Integration tests for halfplane-vorticity."""
