#!/usr/bin/env python3
"""Run the acceptance harness and print one line per criterion.

Exit status is pytest's: 0 when every criterion passes.
"""

import sys
from pathlib import Path

import pytest

if __name__ == "__main__":
    target = Path(__file__).resolve().parent.parent / "tests" / "test_acceptance.py"
    sys.exit(pytest.main(["-q", "--no-header", str(target), *sys.argv[1:]]))
