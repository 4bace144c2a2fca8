"""meanfield test suite."""
