"""Main entry point for planar-decomp."""

import sys
from pathlib import Path

# Add src directory to path
sys.path.insert(0, str(Path(__file__).parent / "src"))

from planar_decomp.cli import main

if __name__ == "__main__":
    sys.exit(main())
