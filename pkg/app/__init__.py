"""
The olsrv2-sim package: a deterministic discrete-time OLSRv2 simulator

Config and TestConfig are re-exported so modules and tests share one import.
"""

from config import Config, TestConfig
