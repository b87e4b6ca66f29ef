# -*- coding: utf-8 -*-

"""Test package for tsif."""
