# -*- coding: utf-8 -*-
#
# django-simplicity-lab documentation build configuration file.
#
# This file is execfile()d with the current directory set to its containing dir.

import os
import sys
import django

# If extensions (or modules to document with autodoc) are in another directory,
# add these directories to sys.path here.
sys.path.insert(0, os.path.abspath('_ext'))
sys.path.insert(0, os.path.abspath('..'))
os.environ['DJANGO_SETTINGS_MODULE'] = 'djangodummy.settings'
django.setup()

# -- General configuration -----------------------------------------------------

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.intersphinx',
    'sphinx.ext.mathjax',
    'djangoext.roles',
]

source_suffix = '.rst'
master_doc = 'index'

project = u'django-simplicity-lab'
copyright = u'2024, the django-simplicity-lab authors'

# The short X.Y version.
version = '0.3'
# The full version, including alpha/beta/rc tags.
release = '0.3.1'

exclude_patterns = ['_build']
pygments_style = 'sphinx'

# -- Options for HTML output ---------------------------------------------------

html_static_path = []
htmlhelp_basename = 'django-simplicity-labdoc'

intersphinx_mapping = {
    'python': ('https://docs.python.org/3', None),
    'numpy': ('https://numpy.org/doc/stable/', None),
    'scipy': ('https://docs.scipy.org/doc/scipy/', None),
    'django': ('https://docs.djangoproject.com/en/stable', 'https://docs.djangoproject.com/en/stable/_objects'),
}

# autodoc settings
autodoc_member_order = 'groupwise'
