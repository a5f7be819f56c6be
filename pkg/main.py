import sys

from src.cli import CubiPyCLI

if __name__ == "__main__":
    cli = CubiPyCLI()
    sys.exit(cli.main(sys.argv[1:]))
