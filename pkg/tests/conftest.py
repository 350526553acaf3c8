import pytest


def pytest_configure(config):
    config.addinivalue_line(
        "markers", "long: long-tier acceptance items (minutes-scale, run by default)"
    )
