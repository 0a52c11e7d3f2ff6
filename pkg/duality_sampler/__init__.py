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

"""Duality sampler: exact interference of particles with internal states.

Bosons and fermions whose internal degrees of freedom are symmetrized or
antisymmetrized interfere in a linear network according to the product of the
two symmetries. This package computes output distributions from permanents and
determinants, checks them against a brute-force first-quantization oracle and
simulates scattershot sampling with fermions.

See `src/fock.py` for the permanent/determinant path and `src/oracle.py` for
the oracle; its tensor work is compiled by `src/engine.py` and executed by the
numpy backend in `src/numpy/numpy_ops.py`.
"""

from duality_sampler.src.config import CapExceededError
from duality_sampler.src.config import ContractViolation
from duality_sampler.src.config import Settings
from duality_sampler.src.duality import DualityReport
from duality_sampler.src.duality import hom_curve
from duality_sampler.src.duality import run_duality_check
from duality_sampler.src.duality import run_table_one
from duality_sampler.src.fock import OccupationVector
from duality_sampler.src.fock import OutputDistribution
from duality_sampler.src.fock import PauliExclusionError
from duality_sampler.src.fock import output_distribution_fast
from duality_sampler.src.matrices import ComplexMatrix
from duality_sampler.src.matrices import NotUnitaryError
from duality_sampler.src.matrices import determinant
from duality_sampler.src.matrices import haar_random_unitary
from duality_sampler.src.matrices import permanent
from duality_sampler.src.oracle import InternalStateSet
from duality_sampler.src.oracle import LabeledStateVector
from duality_sampler.src.oracle import SymmetryFlag
from duality_sampler.src.oracle import VanishingStateError
from duality_sampler.src.oracle import oracle_distribution
from duality_sampler.src.scattershot import ScattershotConfig
from duality_sampler.src.scattershot import run_scattershot
