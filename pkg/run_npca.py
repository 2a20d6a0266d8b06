#!/usr/bin/env python3
"""
NPCA Toolkit Startup Script
Run this script to evaluate the throughput model or launch simulations.
"""

import sys
from pathlib import Path


def check_requirements():
    """Check if all required packages are installed."""
    try:
        import numpy
        import scipy
        import pandas
        return True
    except ImportError as e:
        print(f"❌ Missing required package: {e}", file=sys.stderr)
        print("Please install requirements with: pip install -r requirements.txt", file=sys.stderr)
        return False


def check_config_structure():
    """Check that the default run configuration is present."""
    if not Path("config/table3.json").exists():
        print("⚠️  config/table3.json not found; pass --config explicitly", file=sys.stderr)


def main():
    """Main startup function."""
    if not check_requirements():
        sys.exit(1)
    check_config_structure()

    from src.cli.main import main as cli_main

    try:
        sys.exit(cli_main(sys.argv[1:]))
    except KeyboardInterrupt:
        print("\n👋 Stopped by user", file=sys.stderr)
        sys.exit(130)


if __name__ == "__main__":
    main()
