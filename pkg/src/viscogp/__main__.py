"""Allow running viscogp as `python -m viscogp`."""

from viscogp.cli import main

main()
