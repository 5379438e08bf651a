"""Application entry point for the PSI trail toolkit."""

import sys
from pathlib import Path

# Add the repository root to the Python path so `src` imports resolve
sys.path.insert(0, str(Path(__file__).parent))

if __name__ == "__main__":
    from src.cli import main

    main()
