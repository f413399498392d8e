"""Module entry point delegating to the CLI."""

import sys

from patchcalc.cli import main

if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
