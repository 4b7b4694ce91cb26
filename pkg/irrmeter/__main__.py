"""
``python -m irrmeter``.
"""

import sys

from irrmeter.cli import main

if __name__ == "__main__":
    sys.exit(main())
