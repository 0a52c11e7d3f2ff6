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

"""Scattershot sampling with fermions in an internally antisymmetric state.

`N` fermions enter a single mode of a network `V` whose first row is flat. The
internal-state-blind count at `V`'s output heralds the input configuration of
a second network `U`; bunched heralds are discarded. A non-bunched herald
leaves an internal state antisymmetric and a mode state symmetric, so outputs
of `U` follow the bosonic permanent distribution.
"""

import collections
import json
import math
from typing import Any, Dict, Optional, Tuple

from absl import logging
import dataclasses
import numpy as np

from duality_sampler.src import config
from duality_sampler.src import fock
from duality_sampler.src import matrices
from duality_sampler.src import oracle


@dataclasses.dataclass(frozen=True, eq=False)
class ScattershotConfig:
  """A scattershot campaign.

  Attributes:
    num_modes: M.
    num_particles: N, at most M.
    v: Spreading network; `|V[0, k]| = 1/sqrt(M)` for every `k`.
    u: Sampled network.
    trials: Number of trials.
    seed: Non-negative master seed; trial `t` draws from `(seed, t)`.
  """
  num_modes: int
  num_particles: int
  v: matrices.ComplexMatrix
  u: matrices.ComplexMatrix
  trials: int
  seed: int

  def __post_init__(self):
    if self.num_particles < 1:
      raise ValueError(
          f'Need at least one particle, got {self.num_particles}')
    if self.num_particles > self.num_modes:
      raise ValueError(
          f'Scattershot needs N <= M, got N={self.num_particles}, '
          f'M={self.num_modes}')
    if self.trials < 0:
      raise ValueError(f'Trial count must be non-negative, got {self.trials}')
    if self.seed < 0:
      raise ValueError(f'Seed must be non-negative, got {self.seed}')
    for name, network in (('V', self.v), ('U', self.u)):
      if network.rows != self.num_modes or not network.is_square:
        raise ValueError(
            f'{name} has shape {network.rows}x{network.cols}, expected '
            f'{self.num_modes}x{self.num_modes}')
      deviation = matrices.unitarity_deviation(network.entries)
      if deviation >= config.UNITARY_TOLERANCE:
        raise matrices.NotUnitaryError(
            f'{name} is not unitary: |U^dag U - I|_F = {deviation:.3e}')
    if not matrices.has_flat_first_row(self.v):
      raise ValueError(
          f'First row of V must have entries of modulus 1/sqrt(M), got '
          f'{np.abs(self.v.entries[0])}')


def default_config(num_modes: int, num_particles: int, trials: int,
                   seed: int) -> ScattershotConfig:
  """Fourier `V` and a Haar `U` drawn from `seed`."""
  return ScattershotConfig(
      num_modes=num_modes,
      num_particles=num_particles,
      v=matrices.fourier_row_network(num_modes),
      u=matrices.haar_random_unitary(num_modes, seed),
      trials=trials,
      seed=seed)


def herald_distribution(v: matrices.ComplexMatrix,
                        num_particles: int) -> fock.OutputDistribution:
  """Counts at the output of `V` for `N` particles entering mode 1.

  `p(n) = (N!/mu(n)) prod_k |V[0, k]|^(2 n_k)`, the multinomial spread of a
  symmetric mode state; bunched configurations carry permanent weights.
  """
  weights = np.abs(v.entries[0]) ** 2
  entries = {}
  for n in fock.enumerate_configurations(v.cols, num_particles,
                                         fermionic=False):
    entries[n] = (math.factorial(num_particles) / fock.multiplicity(n)
                  * float(np.prod(weights ** np.array(n.counts))))
  return fock.OutputDistribution(entries, num_particles, v.cols, fock.BOSONIC)


@dataclasses.dataclass(frozen=True)
class BirthdayEstimate:
  """Probability that no mode is hit twice.

  Attributes:
    exact: `prod_{q=1}^{N-1} (1 - q/M)`.
    approximation: `1 - N(N-1)/(2M)`.
  """
  exact: float
  approximation: float


def non_bunching_probability(num_modes: int,
                             num_particles: int) -> BirthdayEstimate:
  if num_modes < 1 or num_particles < 1:
    raise ValueError(
        f'Need M, N >= 1, got M={num_modes}, N={num_particles}')
  exact = math.prod(1.0 - q / num_modes for q in range(1, num_particles))
  approximation = 1.0 - num_particles * (num_particles - 1) / (2 * num_modes)
  return BirthdayEstimate(exact, approximation)


def single_herald_probability(num_modes: int, num_particles: int) -> float:
  """`N!/M^N`, shared by every non-bunched herald."""
  return math.factorial(num_particles) / num_modes ** num_particles


def _inverse_cdf(distribution: fock.OutputDistribution):
  configurations = distribution.configurations()
  cdf = np.cumsum([distribution.entries[m] for m in configurations])
  cdf = cdf / cdf[-1]

  def sample(uniform: float) -> fock.OccupationVector:
    index = int(np.searchsorted(cdf, uniform, side='right'))
    return configurations[min(index, len(configurations) - 1)]

  return sample


@dataclasses.dataclass(frozen=True)
class TrialRecord:
  trial: int
  herald: fock.OccupationVector
  output: Optional[fock.OccupationVector]

  @property
  def bunched(self) -> bool:
    return not self.herald.is_single_occupancy

  def to_json(self) -> Dict[str, Any]:
    return {
        'trial': self.trial,
        'herald': list(self.herald.counts),
        'bunched': self.bunched,
        'output': None if self.output is None else list(self.output.counts),
    }


@dataclasses.dataclass(frozen=True, eq=False)
class ScattershotRun:
  """Trial log of a campaign with the exact distributions it sampled."""
  config: ScattershotConfig
  records: Tuple[TrialRecord, ...]
  conditionals: Dict[fock.OccupationVector, fock.OutputDistribution]

  @property
  def discard_rate(self) -> float:
    if not self.records:
      return 0.0
    return sum(r.bunched for r in self.records) / len(self.records)

  def herald_counts(self) -> Dict[fock.OccupationVector, int]:
    return dict(sorted(collections.Counter(
        r.herald for r in self.records).items()))

  def output_counts(self) -> Dict[fock.OccupationVector,
                                  Dict[fock.OccupationVector, int]]:
    counts = collections.defaultdict(collections.Counter)
    for r in self.records:
      if r.output is not None:
        counts[r.herald][r.output] += 1
    return {h: dict(sorted(c.items())) for h, c in sorted(counts.items())}

  def empirical(self, herald: fock.OccupationVector
                ) -> fock.OutputDistribution:
    return fock.OutputDistribution.from_counts(
        self.output_counts()[herald], self.config.num_particles,
        self.config.num_modes)

  def total_variation(self) -> Dict[fock.OccupationVector, float]:
    """Empirical versus exact output distribution, per observed herald."""
    return {h: self.empirical(h).total_variation(self.conditionals[h])
            for h in self.output_counts()}

  def summary(self) -> Dict[str, Any]:
    estimate = non_bunching_probability(self.config.num_modes,
                                        self.config.num_particles)
    return {
        'M': self.config.num_modes,
        'N': self.config.num_particles,
        'trials': len(self.records),
        'seed': self.config.seed,
        'discard_rate': self.discard_rate,
        'expected_discard_rate': 1.0 - estimate.exact,
        'herald_counts': {str(h): c for h, c in self.herald_counts().items()},
        'output_counts': {str(h): {str(m): c for m, c in counts.items()}
                          for h, counts in self.output_counts().items()},
        'total_variation': {str(h): tv
                            for h, tv in self.total_variation().items()},
    }

  def log_lines(self) -> str:
    return ''.join(json.dumps(r.to_json()) + '\n' for r in self.records)


def trial_rng(seed: int, trial: int) -> np.random.Generator:
  return np.random.default_rng(np.random.SeedSequence([seed, trial]))


def run_scattershot(scattershot: ScattershotConfig,
                    settings: Optional[config.Settings] = None
                    ) -> ScattershotRun:
  """Samples heralds and conditional outputs trial by trial.

  Each trial draws two uniforms from its own substream: one picks the herald
  by inverse CDF over the herald distribution, the other the output of `U`
  from the bosonic distribution conditioned on a non-bunched herald.

  Args:
    scattershot: Campaign configuration.
    settings: Thread settings; results do not depend on them.

  Returns:
    The run, with one record per trial in trial order.
  """
  heralds = herald_distribution(scattershot.v, scattershot.num_particles)
  pick_herald = _inverse_cdf(heralds)
  draws = [trial_rng(scattershot.seed, t).random(2)
           for t in range(scattershot.trials)]
  sampled = [pick_herald(d[0]) for d in draws]
  distinct = sorted({h for h in sampled if h.is_single_occupancy})
  exact = config.worker_map(
      lambda h: fock.output_distribution_fast(
          scattershot.u, h, fock.BOSONIC, config.Settings()),
      distinct, settings)
  conditionals = dict(zip(distinct, exact))
  samplers = {h: _inverse_cdf(d) for h, d in conditionals.items()}

  records = []
  for t, (herald, d) in enumerate(zip(sampled, draws)):
    output = samplers[herald](d[1]) if herald in samplers else None
    records.append(TrialRecord(t, herald, output))
  run = ScattershotRun(scattershot, tuple(records), conditionals)
  logging.info('Scattershot M=%d N=%d: %d trials, discard rate %.4f '
               '(expected %.4f)', scattershot.num_modes,
               scattershot.num_particles, len(records), run.discard_rate,
               1.0 - non_bunching_probability(
                   scattershot.num_modes, scattershot.num_particles).exact)
  return run


def verify_scattershot_oracle(
    num_modes: int, num_particles: int, internal_dim: int, seed: int,
    v: Optional[matrices.ComplexMatrix] = None,
    u: Optional[matrices.ComplexMatrix] = None) -> float:
  """Runs the full first-quantization pipeline and compares with the fast path.

  All fermions enter mode 1 with random internal states, antisymmetrized over
  particles and over internal states. After `V`, each non-bunched count is
  taken as a non-demolition measurement; the collapsed state is sent through
  `U` and its oracle distribution compared with the permanent distribution.
  Herald probabilities are compared with `herald_distribution` as well.

  Args:
    num_modes: M.
    num_particles: N, at most `internal_dim` for independent internal states.
    internal_dim: D.
    seed: Seeds the internal states and, when `u` is None, the Haar `U`.
    v: Spreading network; defaults to the Fourier network.
    u: Sampled network.

  Returns:
    Maximum absolute deviation over herald and output probabilities.
  """
  v = matrices.fourier_row_network(num_modes) if v is None else v
  u = matrices.haar_random_unitary(num_modes, seed) if u is None else u
  internal = oracle.InternalStateSet.random(num_particles, internal_dim, seed)
  start = fock.OccupationVector((num_particles,) + (0,) * (num_modes - 1))
  state = oracle.build_epsilon_state(start, internal, oracle.SymmetryFlag.A,
                                     oracle.SymmetryFlag.A)
  state = oracle.apply_network(state, v)
  expected_heralds = herald_distribution(v, num_particles)

  deviation = 0.0
  marginals = oracle.mode_marginals(state)
  for herald in fock.enumerate_configurations(num_modes, num_particles,
                                              fermionic=False):
    p = oracle.povm_probability(state, herald, marginals)
    deviation = max(deviation, abs(p - expected_heralds.probability(herald)))
    if not herald.is_single_occupancy:
      continue
    _, collapsed = oracle.povm_collapse(state, herald, oracle.SymmetryFlag.A)
    if collapsed.mode_symmetry is not oracle.SymmetryFlag.S:
      raise config.ContractViolation(
          f'Herald {herald} left a state without symmetric mode factor')
    simulated = oracle.oracle_distribution(collapsed, u)
    fast = fock.output_distribution_fast(u, herald, fock.BOSONIC)
    deviation = max(deviation, fast.max_abs_deviation(simulated))
  logging.info('Scattershot oracle M=%d N=%d D=%d: deviation %.3e',
               num_modes, num_particles, internal_dim, deviation)
  return deviation
