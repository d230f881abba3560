import sys

from src.cli.app import main

# Paths stay relative to the invocation directory
sys.exit(main(sys.argv[1:]))
