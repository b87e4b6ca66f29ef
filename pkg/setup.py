#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""The setup script."""
from pathlib import Path
from setuptools import setup, find_packages

root_path = Path(__file__).resolve().parent


def parse_requirements():
    """Reads the pinned runtime packages, skipping development tools."""
    development = ("black", "coverage", "flake8", "pytest", "hypothesis")
    requirements = []
    for line in (root_path / "requirements.txt").read_text().splitlines():
        line = line.split("#")[0].strip()
        if line and not line.startswith(development):
            requirements.append(line)
    return requirements


readme = (root_path / "README.md").read_text(encoding="utf-8")

setup_requirements = ["pytest-runner"]

setup(
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: MIT License",
        "Natural Language :: English",
        "Programming Language :: Python :: 3.10",
    ],
    description="Synthesis, proof and storage of linear and non-linear invariants between time-series constraints.",
    entry_points={"console_scripts": ["tsif = tsif.run:main"]},
    install_requires=parse_requirements(),
    license="MIT license",
    long_description=readme,
    long_description_content_type="text/markdown",
    include_package_data=True,
    package_data={"tsif": ["catalog/catalog.json"]},
    keywords="time-series constraints invariants automata register-automata constraint-programming",
    name="tsif",
    packages=find_packages(include=["tsif", "tsif.*"]),
    python_requires=">=3.10",
    setup_requires=setup_requirements,
    test_suite="tests",
    tests_require=["pytest", "hypothesis"],
    version="0.1.0",
    zip_safe=False,
)
