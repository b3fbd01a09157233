# -*- coding: utf-8 -*-
#
# bubbleflow documentation build configuration file.
#
# This file is execfile()d with the current directory set to its
# containing dir.

import sys
import os

# If extensions (or modules to document with autodoc) are in another directory,
# add these directories to sys.path here.
sys.path.insert(0, os.path.abspath('..'))

# -- General configuration ------------------------------------------------

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.todo',
    'sphinx.ext.viewcode',
    'sphinx.ext.mathjax',
]

templates_path = ['_templates']
source_suffix = '.rst'
master_doc = 'bubbleflow'

project = u'bubbleflow'
copyright = u'2026, bubbleflow team'
author = u'bubbleflow team'

version = ''
release = ''
language = 'en'

exclude_patterns = ['_build']
pygments_style = 'sphinx'
todo_include_todos = True

# -- Options for HTML output ----------------------------------------------

html_theme = 'bizstyle'
html_static_path = ['_static']
htmlhelp_basename = 'bubbleflowdoc'

# -- Options for LaTeX output ---------------------------------------------

latex_elements = {
}

latex_documents = [
  (master_doc, 'bubbleflow.tex', u'bubbleflow Documentation',
   u'bubbleflow team', 'manual'),
]

# -- Options for manual page output ---------------------------------------

man_pages = [
    (master_doc, 'bubbleflow', u'bubbleflow Documentation',
     [author], 1)
]
