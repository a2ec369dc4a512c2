"""A setuptools based setup module.

See:
https://packaging.python.org/tutorials/distributing-packages/#configuring-your-project
https://packaging.python.org/en/latest/distributing.html
https://github.com/pypa/sampleproject
"""

# Always prefer setuptools over distutils
from setuptools import setup, find_packages
# To use a consistent encoding
from codecs import open
from os import path

here = path.abspath(path.dirname(__file__))

# Get the long description from the README file
with open(path.join(here, 'README.rst'), encoding='utf-8') as f:
    long_description = f.read()

setup(
    name='spavs',

    # Versions should comply with PEP440.
    version='0.1.0',

    description='SpaVS is a Python library for criterion-based variable selection in spatial linear regression.',
    long_description=long_description,

    license='MIT',

    # See https://pypi.org/classifiers/
    classifiers=[
        'Development Status :: 3 - Alpha',

        'Intended Audience :: Science/Research',
        'Topic :: Scientific/Engineering :: Mathematics',

        'License :: OSI Approved :: MIT License',

        'Programming Language :: Python :: 3.8',
        'Programming Language :: Python :: 3.9',
        'Programming Language :: Python :: 3.10',

        'Operating System :: Unix',
    ],

    keywords='variable selection, spatial statistics, covariance operators, random fields, Monte Carlo',

    packages=find_packages(exclude=['contrib', 'docs', 'tests']),

    # List run-time dependencies here.
    install_requires=['numpy',
                      'scipy>=1.1.0',
                      'matplotlib',
                      'scikit-learn',
                      'joblib>=1.3',
                      'pandas'],

    # List additional groups of dependencies here, e.g.
    # $ pip install -e .[progress,tests,docs]
    # progress: progress bars of the Monte Carlo harness
    # tests: test runner and coverage
    # docs: Documentation bibliography and theme
    extras_require={
        'progress': ['tqdm'],
        'tests': ['pytest', 'pytest-cov'],
        'docs': ['sphinxcontrib-bibtex', 'sphinx_rtd_theme']
        },

    entry_points={
        'console_scripts': [
            'spavs=spavs.cli:main',
        ],
    },
)
