# Copyright 2021 DeepMind Technologies Limited.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#    http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or  implied.
# See the License for the specific language governing permissions and
# limitations under the License.
# ============================================================================
"""Setup for pip package."""

import unittest
from setuptools import find_packages
from setuptools import setup


REQUIRED_PACKAGES = [
    'absl-py',
    'numpy',
    'scipy',
]


def duality_sampler_test_suite():
  test_loader = unittest.TestLoader()
  test_suite = test_loader.discover('duality_sampler/tests',
                                    pattern='*_test.py',
                                    top_level_dir='.')
  return test_suite

setup(
    name='duality_sampler',
    version='1.0',
    description=('Exact output distributions of bosons, fermions and '
                 'non-identical particles in unitary linear networks'),
    # Contained modules and scripts.
    packages=find_packages(exclude=['examples', 'examples.*']),
    install_requires=REQUIRED_PACKAGES,
    entry_points={
        'console_scripts': [
            'duality_sampler = duality_sampler.cli:run',
        ],
    },
    platforms=['any'],
    license='Apache 2.0',
    test_suite='setup.duality_sampler_test_suite',
)
