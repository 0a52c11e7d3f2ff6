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

"""Named numerical identity suites.

Each suite sweeps a small grid of sizes and flags and reports the largest
deviation it met against its tolerance.
"""

import itertools
from typing import Callable, Dict, List, Sequence

from absl import logging
import dataclasses
import numpy as np

from duality_sampler.src import config
from duality_sampler.src import duality
from duality_sampler.src import fock
from duality_sampler.src import matrices
from duality_sampler.src import oracle
from duality_sampler.src import scattershot


SymmetryFlag = oracle.SymmetryFlag

_FLAG_PAIRS = tuple(itertools.product(SymmetryFlag, repeat=2))
_SMALL_SIZES = (2, 3)


@dataclasses.dataclass(frozen=True)
class SuiteResult:
  name: str
  deviation: float
  tolerance: float

  @property
  def passed(self) -> bool:
    return self.deviation < self.tolerance

  def to_json(self) -> Dict[str, object]:
    return {
        'suite': self.name,
        'max_deviation': self.deviation,
        'tolerance': self.tolerance,
        'passed': self.passed,
    }


def projector_identity() -> float:
  return max(oracle.verify_projector_identity(e1, e2, 2, 2, n)
             for e1, e2 in _FLAG_PAIRS for n in _SMALL_SIZES)


def povm_completeness() -> float:
  return max(oracle.verify_povm_completeness(e, 2, 2, n)
             for e in SymmetryFlag for n in _SMALL_SIZES)


def povm_commutation() -> float:
  deviation = 0.0
  for n in _SMALL_SIZES:
    for m in fock.enumerate_configurations(2, n, fermionic=False):
      for e1, e2 in _FLAG_PAIRS:
        deviation = max(deviation, oracle.verify_povm_commutation(
            2, 2, n, m, povm_symmetry=e1, internal_symmetry=e2))
  return deviation


def fock_projector() -> float:
  return max(oracle.verify_fock_projector_identity(e, 2, 2, n)
             for e in SymmetryFlag for n in _SMALL_SIZES)


def network_commutation() -> float:
  u = matrices.haar_random_unitary(2, seed=0)
  return max(oracle.verify_network_commutation(e, u, 2, n)
             for e in SymmetryFlag for n in _SMALL_SIZES)


def table_one_inputs(num_modes: int,
                     num_particles: int) -> fock.OccupationVector:
  """One particle per mode from mode 1, or `(2, 1)` for three in two modes."""
  if num_particles <= num_modes:
    return fock.OccupationVector(
        (1,) * num_particles + (0,) * (num_modes - num_particles))
  return fock.OccupationVector.from_modes(
      [k % num_modes for k in range(num_particles)], num_modes)


def table_one(seeds: Sequence[int] = range(5)) -> float:
  deviation = 0.0
  for n_particles, n_modes, seed in itertools.product(
      _SMALL_SIZES, (2, 3, 4), seeds):
    u = matrices.haar_random_unitary(n_modes, seed)
    n = table_one_inputs(n_modes, n_particles)
    internal = oracle.InternalStateSet.orthonormal(n_particles)
    for report in duality.run_table_one(n, internal, u):
      if report.verdict != duality.verdict_of(report.eps1 * report.eps2):
        raise config.ContractViolation(
            f'Cell ({report.eps1.value}, {report.eps2.value}) gave verdict '
            f'{report.verdict}')
      deviation = max(deviation, report.max_abs_deviation)
  return deviation


def herald_uniformity() -> float:
  """Herald mass on non-bunched counts against the product formula."""
  deviation = 0.0
  for n_modes in range(1, 11):
    v = matrices.fourier_row_network(n_modes)
    for n_particles in range(1, min(4, n_modes) + 1):
      heralds = scattershot.herald_distribution(v, n_particles)
      single = [p for m, p in heralds.entries.items()
                if m.is_single_occupancy]
      estimate = scattershot.non_bunching_probability(n_modes, n_particles)
      falling = np.prod(np.arange(n_modes - n_particles + 1, n_modes + 1),
                        dtype=float) / n_modes ** n_particles
      expected = scattershot.single_herald_probability(n_modes, n_particles)
      deviation = max(deviation, abs(sum(single) - estimate.exact),
                      abs(falling - estimate.exact),
                      max(abs(p - expected) for p in single))
  return deviation


def scattershot_oracle() -> float:
  return scattershot.verify_scattershot_oracle(2, 2, 2, seed=0)


def _relative_error(value: complex, reference: complex,
                    a: np.ndarray) -> float:
  scale = abs(matrices.permanent_naive(matrices.ComplexMatrix(np.abs(a))))
  return abs(value - reference) / max(scale, np.finfo(float).tiny)


def permanent_kernel(samples: int = 100, seed: int = 0) -> float:
  """Ryser and Glynn against the permutation sum, relative to `per(|A|)`."""
  rng = np.random.default_rng(seed)
  deviation = 0.0
  for n in range(2, 9):
    for _ in range(samples):
      a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
      m = matrices.ComplexMatrix(a)
      reference = matrices.permanent_naive(m)
      for method in ('ryser', 'glynn'):
        deviation = max(deviation, _relative_error(
            matrices.permanent(m, method=method), reference, a))
  return deviation


def normalization() -> float:
  """Bosonic distributions of Haar networks sum to one."""
  deviation = 0.0
  for n_modes, n_particles in itertools.product((4, 8, 12), (2, 4)):
    u = matrices.haar_random_unitary(n_modes, seed=n_modes)
    n = table_one_inputs(n_modes, n_particles)
    dist = fock.output_distribution_fast(u, n, fock.BOSONIC)
    deviation = max(deviation, abs(sum(dist.entries.values()) - 1.0))
  return deviation


SUITES: Dict[str, Callable[[], float]] = {
    'projector-identity': projector_identity,
    'povm-completeness': povm_completeness,
    'povm-commutation': povm_commutation,
    'fock-projector': fock_projector,
    'network-commutation': network_commutation,
    'table-one': table_one,
    'herald-uniformity': herald_uniformity,
    'scattershot-oracle': scattershot_oracle,
    'permanent-kernel': permanent_kernel,
    'normalization': normalization,
}

TOLERANCES: Dict[str, float] = {
    'projector-identity': config.IDENTITY_TOLERANCE,
    'povm-completeness': config.IDENTITY_TOLERANCE,
    'povm-commutation': config.IDENTITY_TOLERANCE,
    'fock-projector': config.IDENTITY_TOLERANCE,
    'network-commutation': config.IDENTITY_TOLERANCE,
    'table-one': config.ORACLE_TOLERANCE,
    'herald-uniformity': config.IDENTITY_TOLERANCE,
    'scattershot-oracle': config.ORACLE_TOLERANCE,
    'permanent-kernel': config.IDENTITY_TOLERANCE,
    'normalization': config.NORMALIZATION_TOLERANCE,
}


def run_suite(name: str) -> SuiteResult:
  if name not in SUITES:
    raise ValueError(
        f'Unknown suite {name!r}, expected one of {sorted(SUITES)} or all')
  result = SuiteResult(name, float(SUITES[name]()), TOLERANCES[name])
  logging.info('Suite %s: max deviation %.3e (tolerance %.0e) %s', name,
               result.deviation, result.tolerance,
               'passed' if result.passed else 'FAILED')
  return result


def run_suites(selection: str) -> List[SuiteResult]:
  names = list(SUITES) if selection == 'all' else [selection]
  return [run_suite(name) for name in names]
