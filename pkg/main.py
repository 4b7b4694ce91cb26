#!/usr/bin/env python3
"""
Main entry point for irrmeter.

    python main.py mu --preset binomial --omega 1/3 --beta 9 --delta-mode bennett
    python main.py table --format csv
    python main.py verify --nmax 30
"""

import sys

from irrmeter.cli import main

if __name__ == "__main__":
    sys.exit(main())
