#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""Setup module for the probability tree causal induction package.
"""

import os
import setuptools

# Pull in the essential run-time requirements
with open("requirements.txt", "r", encoding="utf-8") as fh:
    requirements = fh.read().splitlines()

# Use the README.rst as the long description.
with open("README.rst", "r", encoding="utf-8") as fh:
    long_description = fh.read()

setuptools.setup(
    name="causal-ptree",
    version=os.environ.get("GITHUB_REF_SLUG", "1.0.0"),
    author="The ptree developers",
    license="MIT",
    description="Bayesian causal induction over probability trees",
    long_description=long_description,
    keywords="causality bayesian probability-tree intervention",
    platforms=["any"],
    # Our modules to package
    package_dir={"": "src"},
    packages=setuptools.find_packages(where="src"),
    include_package_data=True,
    # The command-line tool
    entry_points={"console_scripts": ["ptree=ptree.cli:main"]},
    # Project classification:
    # https://pypi.python.org/pypi?%3Aaction=list_classifiers
    classifiers=[
        "Development Status :: 4 - Beta",
        "Environment :: Console",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: MIT License",
        "Programming Language :: Python :: 3.10",
        "Topic :: Scientific/Engineering :: Mathematics",
        "Operating System :: POSIX :: Linux",
    ],
    install_requires=requirements,
    python_requires=">=3.8",
    zip_safe=False,
)
