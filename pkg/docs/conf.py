"""Sphinx configuration for the moore-ca documentation."""

import os
import sys

sys.path.insert(0, os.path.abspath("../src"))

project = "moore-ca"
copyright = "2024, moore-ca contributors"
author = "moore-ca contributors"

# Kept in step with src/mooreca/_version.py by bump-my-version
release = "0.1.0"

extensions = [
    "sphinx.ext.autodoc",
    "sphinx.ext.mathjax",
    "sphinx.ext.napoleon",
    "sphinx.ext.intersphinx",
    "sphinx.ext.viewcode",
    "myst_parser",
    "sphinx_autodoc_typehints",
]

myst_enable_extensions = [
    "colon_fence",
    "dollarmath",
    "linkify",
]

source_suffix = [".md"]
master_doc = "index"
exclude_patterns = ["_build"]

html_theme = "sphinx_rtd_theme"
html_theme_options = {
    "navigation_depth": 3,
    "collapse_navigation": False,
}

autodoc_default_options = {
    "members": True,
    "member-order": "bysource",
    "exclude-members": "__weakref__, __hash__",
}
autodoc_typehints = "description"

napoleon_google_docstring = True
napoleon_numpy_docstring = False

intersphinx_mapping = {
    "python": ("https://docs.python.org/3", None),
    "numpy": ("https://numpy.org/doc/stable/", None),
}

typehints_fully_qualified = False
always_document_param_types = False
