#!/usr/bin/env python3
"""Setup shim for meanfield-maxima.

All configuration is in pyproject.toml.
"""

from setuptools import setup

setup()
