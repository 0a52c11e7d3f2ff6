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

"""Effective statistics of epsilon-symmetric inputs.

An input symmetrized with `S_e1` over whole particles and with `S_e2` over
internal states alone interferes like bosons when `e1 e2 = S` and like fermions
when `e1 e2 = A`, whatever the species `e1`. `run_duality_check` compares the
permanent or determinant distribution selected by `e1 e2` against the
first-quantization oracle.
"""

import itertools
from typing import Any, Dict, List, Optional, Sequence

from absl import logging
import dataclasses
import numpy as np

from duality_sampler.src import config
from duality_sampler.src import fock
from duality_sampler.src import matrices
from duality_sampler.src import oracle


SymmetryFlag = oracle.SymmetryFlag

_COINCIDENCE = fock.OccupationVector((1, 1))


def verdict_of(effective: SymmetryFlag) -> str:
  return fock.BOSONIC if effective is SymmetryFlag.S else fock.FERMIONIC


@dataclasses.dataclass(frozen=True, eq=False)
class DualityReport:
  """Fast path versus oracle for one `(e1, e2)` cell."""
  eps1: SymmetryFlag
  eps2: SymmetryFlag
  fast_distribution: fock.OutputDistribution
  oracle_distribution: fock.OutputDistribution
  max_abs_deviation: float

  @property
  def effective(self) -> SymmetryFlag:
    return self.eps1 * self.eps2

  @property
  def verdict(self) -> str:
    return verdict_of(self.effective)

  def to_json(self) -> Dict[str, Any]:
    return {
        'eps1': self.eps1.value,
        'eps2': self.eps2.value,
        'effective': self.effective.value,
        'verdict': self.verdict,
        'max_abs_deviation': self.max_abs_deviation,
        'fast_distribution': self.fast_distribution.to_json(),
        'oracle_distribution': self.oracle_distribution.to_json(),
    }


def run_duality_check(eps1: SymmetryFlag, eps2: SymmetryFlag,
                      n: fock.OccupationVector,
                      internal: oracle.InternalStateSet,
                      u: matrices.ComplexMatrix,
                      settings: Optional[config.Settings] = None
                      ) -> DualityReport:
  """Builds `|Psi^(e2)_e1(n)>`, runs it through `u` both ways and compares.

  Args:
    eps1: Species symmetry.
    eps2: Internal-state symmetry.
    n: Input configuration.
    internal: Internal states, one per particle.
    u: Network.
    settings: Thread settings for the fast path.

  Returns:
    The report; its verdict follows `e1 e2` alone.

  Raises:
    VanishingStateError: `e1 e2 = A` with a multiply occupied input, or
      dependent internal states with `e2 = A`.
  """
  source = oracle.EpsilonInput(n, internal, eps1, eps2)
  oracle_dist = oracle.oracle_distribution(source, u)
  fast = fock.output_distribution_fast(
      u, n, verdict_of(source.effective), settings)
  deviation = fast.max_abs_deviation(oracle_dist)
  logging.info('Duality (%s, %s) on %s: verdict %s, deviation %.3e',
               eps1.value, eps2.value, n, verdict_of(source.effective),
               deviation)
  return DualityReport(eps1, eps2, fast, oracle_dist, deviation)


def run_table_one(n: fock.OccupationVector,
                  internal: oracle.InternalStateSet,
                  u: matrices.ComplexMatrix,
                  settings: Optional[config.Settings] = None
                  ) -> List[DualityReport]:
  """All four `(e1, e2)` cells, in the order SS, SA, AS, AA.

  Cells whose effective symmetry is A are skipped for multiply occupied `n`.
  """
  cells = [(e1, e2) for e1, e2 in itertools.product(SymmetryFlag, repeat=2)
           if n.is_single_occupancy or e1 * e2 is SymmetryFlag.S]
  return config.worker_map(
      lambda cell: run_duality_check(cell[0], cell[1], n, internal, u),
      cells, settings)


@dataclasses.dataclass(frozen=True)
class HomPoint:
  """Coincidence probability `p(1,1)` on a balanced splitter at overlap `g`.

  Attributes:
    overlap: `g = <phi_1|phi_2>`.
    unentangled: Identical particles in `S_e1 |1,2; phi_1, phi_2>`.
    symmetric: The input symmetrized with `e2 = S`.
    antisymmetric: The input symmetrized with `e2 = A`.
    errors: Series name to message for points whose state vanishes.
  """
  overlap: float
  unentangled: Optional[float]
  symmetric: Optional[float]
  antisymmetric: Optional[float]
  errors: Dict[str, str] = dataclasses.field(default_factory=dict)

  def series(self, eps2: Optional[SymmetryFlag]) -> Optional[float]:
    if eps2 is None:
      return self.unentangled
    return self.symmetric if eps2 is SymmetryFlag.S else self.antisymmetric

  def to_json(self) -> Dict[str, Any]:
    return {
        'g': self.overlap,
        'unentangled': self.unentangled,
        'S': self.symmetric,
        'A': self.antisymmetric,
        'errors': dict(self.errors),
    }


def parse_grid(text: str) -> List[float]:
  """Parses 'start:stop:step' (inclusive) or a comma-separated list."""
  if ':' in text:
    try:
      start, stop, step = (float(x) for x in text.split(':'))
    except ValueError:
      raise ValueError(
          f'Grid must read start:stop:step, got {text!r}') from None
    if step <= 0 or stop < start:
      raise ValueError(f'Grid {text!r} has no points')
    count = int(np.floor((stop - start) / step + 1e-9)) + 1
    return [float(g) for g in np.linspace(start, start + (count - 1) * step,
                                          count)]
  try:
    return [float(x) for x in text.split(',')]
  except ValueError:
    raise ValueError(f'Malformed overlap grid {text!r}') from None


def _coincidence(build) -> float:
  state = build()
  return oracle.oracle_distribution(
      state, matrices.beam_splitter()).probability(_COINCIDENCE)


def hom_curve(overlap_grid: Sequence[float],
              eps1: SymmetryFlag = SymmetryFlag.S) -> List[HomPoint]:
  """Coincidence probabilities along an internal-overlap grid.

  Two particles enter the two ports of a balanced splitter with internal
  states of real overlap `g`. All series are computed by the oracle.

  Args:
    overlap_grid: Values of `g` in `[0, 1]`.
    eps1: Species symmetry.

  Returns:
    One point per grid value. A vanishing state, e.g. `g = 1` with `e2 = A`,
    leaves its series at None and records the message.
  """
  n = _COINCIDENCE
  points = []
  for g in overlap_grid:
    g = float(g)
    if not 0.0 <= g <= 1.0:
      raise ValueError(f'Overlaps must lie in [0, 1], got {g}')
    internal = oracle.InternalStateSet.pairwise_overlap(g)
    builders = {
        'unentangled': lambda: oracle.build_unentangled_state(
            n, internal, eps1),
        'S': lambda: oracle.build_epsilon_state(
            n, internal, eps1, SymmetryFlag.S),
        'A': lambda: oracle.build_epsilon_state(
            n, internal, eps1, SymmetryFlag.A),
    }
    values, errors = {}, {}
    for name, build in builders.items():
      try:
        values[name] = _coincidence(build)
      except oracle.VanishingStateError as e:
        logging.info('HOM point g=%.3f, series %s: %s', g, name, e)
        values[name] = None
        errors[name] = str(e)
    points.append(HomPoint(g, values['unentangled'], values['S'], values['A'],
                           errors))
  return points
