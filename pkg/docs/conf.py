# -*- coding: utf-8 -*-
#
# CoxFiber documentation build configuration file.

import sys
import os

# The package is imported from the repository root for autodoc.
sys.path.insert(0, os.path.abspath("../"))

# -- General configuration -----------------------------------------------------

extensions = ["sphinx.ext.autodoc", "sphinx.ext.mathjax"]
templates_path = ["_templates"]
source_suffix = ".rst"
master_doc = "index"

project = "CoxFiber"
copyright = "2026, TeamUp"

# The short X.Y version.
version = "0.1"
# The full version, including alpha/beta/rc tags.
release = "0.1.0"

exclude_patterns = ["_build"]
pygments_style = "sphinx"

# -- Options for HTML output ---------------------------------------------------

html_theme = "nature"
html_static_path = []
htmlhelp_basename = "CoxFiberdoc"

# -- Options for manual page output --------------------------------------------

man_pages = [("index", "coxfiber", "CoxFiber Documentation", ["TeamUp"], 1)]
