# -*- coding: utf-8 -*-
import re
try:
    from setuptools import setup
except ImportError:
    from distutils.core import setup


# extract version
_version_re = re.compile(r"__version__\s+=\s+\"(.*)\"")
with open("fde4py/__init__.py", "rb") as f:
    version = str(_version_re.search(
        f.read().decode('utf-8')).group(1))


setup(name = "fde4py",
      version = version,
      description = "Closed-form solutions of linear fractional differential equations with constant coefficients",
      packages = ['fde4py'],
      platforms = ["any"],
      license = 'BSD',
      long_description = "Symbolic solver for linear constant-coefficient fractional "
                         "differential equations under the Jumarie derivative, with "
                         "Mittag-Leffler closed forms and a Grunwald-Letnikov numeric check",
      python_requires = '>=3.8',
      install_requires = ['numpy>=1.17'],
      entry_points = {
          'console_scripts': ['fde4py = fde4py.cli:main'],
      },
      classifiers=[
          'Development Status :: 3 - Alpha',
          'Intended Audience :: Science/Research',
          'License :: OSI Approved :: BSD License',
          'Operating System :: OS Independent',
          'Programming Language :: Python',
          'Programming Language :: Python :: 3',
          'Programming Language :: Python :: 3.8',
          'Programming Language :: Python :: 3.9',
          'Programming Language :: Python :: Implementation :: CPython',
          'Topic :: Scientific/Engineering :: Mathematics',
          'Topic :: Software Development :: Libraries :: Python Modules'
      ],
     )
