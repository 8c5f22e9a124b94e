# Settings file to allow parsing API documentation of Django modules,
# and provide defaults to use in the documentation.
#
# This file is placed in a subdirectory,
# so the docs root won't be detected by find_packages()

# Required by Django
SECRET_KEY = 'foo'

INSTALLED_APPS = (
    'simplicity_lab',
)

# Absolute, as required by the app settings check.
SIMPLICITY_LAB_OUTPUT_DIR = '/tmp/simplicity-runs'
