"""
Entry point for python -m subshift_escape.

Usage:
    python -m subshift_escape escape --q 3 --hole aa,bb
    python -m subshift_escape --format csv table 2
"""

from subshift_escape.cli import main

if __name__ == "__main__":
    main()
