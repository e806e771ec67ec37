"""Integration tests for rational-ptc."""
