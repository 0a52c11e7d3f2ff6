# coding=utf-8
# Copyright 2022 DeepMind Technologies Limited.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Common test cases."""

HOM_CASES = [
    dict(
        testcase_name='bosonic',
        statistics='bosonic',
        expected={(2, 0): 0.5, (1, 1): 0.0, (0, 2): 0.5}),
    dict(
        testcase_name='fermionic',
        statistics='fermionic',
        expected={(1, 1): 1.0}),
]

# Orthonormal internal states, n = (1, 1), balanced splitter.
TABLE_ONE_CELLS = [
    dict(
        testcase_name='SS',
        eps1='S',
        eps2='S',
        verdict='bosonic',
        expected={(2, 0): 0.5, (1, 1): 0.0, (0, 2): 0.5}),
    dict(
        testcase_name='SA',
        eps1='S',
        eps2='A',
        verdict='fermionic',
        expected={(2, 0): 0.0, (1, 1): 1.0, (0, 2): 0.0}),
    dict(
        testcase_name='AS',
        eps1='A',
        eps2='S',
        verdict='fermionic',
        expected={(2, 0): 0.0, (1, 1): 1.0, (0, 2): 0.0}),
    dict(
        testcase_name='AA',
        eps1='A',
        eps2='A',
        verdict='bosonic',
        expected={(2, 0): 0.5, (1, 1): 0.0, (0, 2): 0.5}),
]

FLAG_PAIRS = [
    dict(testcase_name=f'{e1}{e2}_n{n}', eps1=e1, eps2=e2, num_particles=n)
    for e1 in 'SA' for e2 in 'SA' for n in (2, 3)
]
