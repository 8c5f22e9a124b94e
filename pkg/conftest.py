# Configure Django for pytest the same way runtests.py does.
from os import path

import django
from django.conf import settings

if not settings.configured:
    module_root = path.dirname(path.realpath(__file__))

    settings.configure(
        DATABASES = {
            'default': {
                'ENGINE': 'django.db.backends.sqlite3',
                'NAME': ':memory:'
            }
        },
        INSTALLED_APPS = (
            'simplicity_lab',
        ),
        TEST_RUNNER = 'django.test.runner.DiscoverRunner',
        SIMPLICITY_LAB_OUTPUT_DIR = path.join(module_root, '.simplicity-runs'),
        LOGGING = {
            'version': 1,
            'disable_existing_loggers': False,
            'handlers': {
                'console': {'class': 'logging.StreamHandler'},
            },
            'loggers': {
                'simplicity_lab': {'handlers': ['console'], 'level': 'ERROR'},
            },
        },
    )
    django.setup()
