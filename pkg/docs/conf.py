# Sphinx configuration for the ptree documentation.
import os
import sys

# The package is documented from its source tree
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), "../src")))

project = "Causal Probability Trees"
copyright = "2026, The ptree developers"
author = "The ptree developers"
release = "1.0"

extensions = ["sphinx.ext.autodoc"]
autodoc_member_order = "bysource"

html_theme = "sphinx_rtd_theme"
html_static_path = ["_static"]
