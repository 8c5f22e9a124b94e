from os.path import join, dirname, realpath

# Add parent path,
# Allow starting the app without installing the module.
import sys
sys.path.insert(0, dirname(dirname(realpath(__file__))))

DEBUG = True

DATABASES = {
    'default': {
        'ENGINE': 'django.db.backends.sqlite3',
        'NAME': dirname(__file__) + '/demo.db',
    }
}

TIME_ZONE = 'Europe/Amsterdam'
LANGUAGE_CODE = 'en'
USE_TZ = True

# Make this unique, and don't share it with anybody.
SECRET_KEY = 'x!5m0b&3n4u^w9j#r2k=qz7v-ht(e8c*l@d1sfgp6yoa_i%'

INSTALLED_APPS = (
    'simplicity_lab',
)

DEFAULT_AUTO_FIELD = 'django.db.models.AutoField'

SIMPLICITY_LAB_OUTPUT_DIR = join(dirname(realpath(__file__)), "runs")
SIMPLICITY_LAB_WORKERS = 4
SIMPLICITY_LAB_DEFAULT_SEED = 20240611

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'simple': {
            'format': '%(levelname)s %(name)s: %(message)s',
        },
    },
    'handlers': {
        'console': {
            'level': 'DEBUG',
            'class': 'logging.StreamHandler',
            'formatter': 'simple',
        },
    },
    'loggers': {
        'simplicity_lab': {
            'handlers': ['console'],
            'level': 'INFO',
            'propagate': False,
        },
    },
}
