# scripts/mobius_frobenius.py
"""Entry point oficial: PYTHONPATH=src python scripts/mobius_frobenius.py <comando> ..."""
import sys

from mobius_frobenius.cli import main


if __name__ == "__main__":
    sys.exit(main())
