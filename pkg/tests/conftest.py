"""Keep the helper modules (markup, corpusgen, oracles) importable when the
suite is launched from any directory."""

import sys
from pathlib import Path

TESTS_DIR = str(Path(__file__).parent)
if TESTS_DIR not in sys.path:
    sys.path.insert(0, TESTS_DIR)
