#!/usr/bin/env python
from setuptools import setup, find_packages
from os import path
import codecs
import re


def read(*parts):
    file_path = path.join(path.dirname(__file__), *parts)
    return codecs.open(file_path, encoding='utf-8').read()


def find_version(*parts):
    version_file = read(*parts)
    version_match = re.search(r"^__version__ = ['\"]([^'\"]*)['\"]", version_file, re.M)
    if version_match:
        return str(version_match.group(1))
    raise RuntimeError("Unable to find version string.")


setup(
    name='django-simplicity-lab',
    version=find_version('simplicity_lab', '__init__.py'),
    license='Apache 2.0',

    install_requires=[
        'Django>=3.2',
        'django-fluent-utils>=2.0',        # DRY utility code, app submodule discovery
        'mpmath>=1.2',                     # extended precision for ill-conditioned eigenpairs
        'numpy>=1.21',
        'scipy>=1.8',                      # integrate.trapezoid
    ],
    description='A numerical laboratory for the simplicity of eigenvalues in Anderson-type random models.',
    long_description=read('README.rst'),

    packages=find_packages(exclude=('example*',)),
    include_package_data=True,

    test_suite='runtests',

    zip_safe=False,
    classifiers=[
        'Development Status :: 4 - Beta',
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: Apache Software License',
        'Operating System :: OS Independent',
        'Programming Language :: Python',
        'Programming Language :: Python :: 3',
        'Programming Language :: Python :: 3.8',
        'Programming Language :: Python :: 3.9',
        'Programming Language :: Python :: 3.10',
        'Framework :: Django',
        'Framework :: Django :: 3.2',
        'Framework :: Django :: 4.2',
        'Topic :: Scientific/Engineering :: Mathematics',
        'Topic :: Scientific/Engineering :: Physics',
    ]
)
