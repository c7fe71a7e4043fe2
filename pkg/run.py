"""
This module starts the simulator's command-line interface when called
"""

from app import cli


if __name__ == "__main__":
    cli.interface(prog_name='olsrv2-sim')
