# -*- coding: utf-8 -*-
#
# fsmx documentation build configuration file.

import os
import sys
sys.path.insert(0, os.path.abspath('..'))

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.mathjax',
    'sphinx.ext.viewcode',
]

templates_path = ['_templates']
source_suffix = '.rst'
master_doc = 'index'

project = u'fsmx'
copyright = u'2026, fsmx developers'
author = u'fsmx developers'

# The short X.Y version.
version = u'0.1'
# The full version, including alpha/beta/rc tags.
release = u'0.1.0.0'

language = None
exclude_patterns = ['_build', 'Thumbs.db', '.DS_Store']
pygments_style = 'sphinx'
todo_include_todos = False

html_theme = 'alabaster'
htmlhelp_basename = 'fsmxdoc'

latex_documents = [
    (master_doc, 'fsmx.tex', u'fsmx Documentation', author, 'manual'),
]
man_pages = [
    (master_doc, 'fsmx', u'fsmx Documentation', [author], 1)
]
