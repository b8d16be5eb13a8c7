#!/usr/bin/env python
"""
Reproduce the percentage-error tables for closed-form approximations of n!

    python bench.py table --which 3 --format csv
    python bench.py error --method R --n 10
    python bench.py selftest
"""
import sys

from gammabench.report import cli_main

if __name__ == "__main__":
    sys.exit(cli_main())
