"""Unit tests for meanfield."""
