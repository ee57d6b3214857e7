#!/usr/bin/env python3
"""
Main entry point for the CLI package.
"""

from . import run

if __name__ == "__main__":
    run()
