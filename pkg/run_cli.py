#!/usr/bin/env python3
"""
Command-line entry point: solve, reproduce, profile, list-problems.
Run `python run_cli.py --help` for the full list of flags.
"""

import sys
from pathlib import Path

# Add src to path
sys.path.insert(0, str(Path(__file__).parent))

from src.cli.main import main


if __name__ == "__main__":
    sys.exit(main())
