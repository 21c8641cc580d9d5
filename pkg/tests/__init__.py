"""viscogp test suite."""
