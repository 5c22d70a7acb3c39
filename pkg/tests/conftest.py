import os
import sys

# Project root on sys.path so `core`, `optimize`, ... import as in main.py
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long end-to-end optimizer or verification runs")
