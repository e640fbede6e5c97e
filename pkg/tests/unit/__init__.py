"""Unit tests for halfplane-vorticity."""
