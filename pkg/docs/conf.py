# Sphinx configuration for the pyQSDC docs.

import os
import sys
sys.path.insert(0, os.path.abspath('../'))

from pyQSDC import __version__  # noqa: E402

project = 'pyQSDC'
copyright = '2026, pyQSDC developers'
author = 'pyQSDC developers'
release = __version__
version = __version__

master_doc = 'index'

extensions = ['sphinx.ext.autodoc']
autodoc_member_order = 'bysource'

templates_path = ['_templates']
exclude_patterns = ['_build', 'Thumbs.db', '.DS_Store']

html_theme = 'sphinx_rtd_theme'
html_static_path = ['_static']
