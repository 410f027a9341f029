# Sphinx configuration for the rcnoise API documentation.
# Build with: sphinx-build -b html docs docs/_build

import os
import sys
sys.path.insert(0, os.path.abspath('../prototype'))

project = 'rcnoise'
copyright = '2021, The RCNoise Authors'
author = 'The RCNoise Authors'

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.mathjax',
    'sphinx.ext.napoleon',
]

# Google style docstrings only
napoleon_google_docstring = True
napoleon_numpy_docstring = False
napoleon_include_init_with_doc = True
napoleon_include_private_with_doc = False
napoleon_use_rtype = False

autodoc_member_order = 'bysource'
# the numeric stack is not needed to render the docs
autodoc_mock_imports = ['numpy', 'scipy', 'pandas', 'toml', 'xdg', 'progress']

templates_path = ['_templates']
exclude_patterns = ['_build', 'Thumbs.db', '.DS_Store']
master_doc = 'index'

html_theme = 'alabaster'
html_static_path = ['_static']
