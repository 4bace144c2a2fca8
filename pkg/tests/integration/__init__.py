"""Integration tests for meanfield."""
