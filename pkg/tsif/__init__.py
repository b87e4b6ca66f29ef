# -*- coding: utf-8 -*-
"""Top-level package for tsif, the time-series invariant factory."""

__author__ = "tsif developers"
__email__ = "tsif-dev@users.noreply.github.com"
__version__ = "0.1.0"
