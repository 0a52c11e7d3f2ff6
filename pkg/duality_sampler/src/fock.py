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

"""Occupation numbers and the second-quantization path.

An input Fock state `||n>>` on modes `a` expands over output Fock states
`||m>>` on modes `b` with amplitudes `per(U[n|m]) / sqrt(mu(n) mu(m))` for
bosons and `det(U[n|m])` for fermions (single occupancy only, rows and columns
in ascending mode order). Output probabilities are the squared moduli.
"""

import csv
import io
import itertools
import json
import math
from typing import Any, Dict, Iterable, List, Mapping, Optional, Tuple

import dataclasses
import scipy.special

from duality_sampler.src import config
from duality_sampler.src import matrices


BOSONIC = 'bosonic'
FERMIONIC = 'fermionic'
GENERAL = 'general'
STATISTICS = (BOSONIC, FERMIONIC, GENERAL)

_INT64_MAX = 2 ** 63 - 1


class PauliExclusionError(ValueError):
  """Raised when a fermionic context meets an occupation number above one."""


@dataclasses.dataclass(frozen=True, order=True)
class OccupationVector:
  """Particle counts per mode.

  Attributes:
    counts: Non-negative occupation number of each of the `M` modes.
  """
  counts: Tuple[int, ...]

  def __post_init__(self):
    counts = tuple(int(c) for c in self.counts)
    if any(c < 0 for c in counts):
      raise ValueError(f'Occupation numbers must be non-negative: {counts}')
    object.__setattr__(self, 'counts', counts)

  @classmethod
  def parse(cls, text: str) -> 'OccupationVector':
    """Parses a comma-separated list such as '1,1,0'."""
    try:
      return cls(tuple(int(x) for x in text.split(',')))
    except ValueError:
      raise ValueError(f'Malformed occupation vector: {text!r}') from None

  @classmethod
  def from_modes(cls, modes: Iterable[int], num_modes: int
                 ) -> 'OccupationVector':
    """Counts how many of the (zero-based) `modes` fall on each mode."""
    counts = [0] * num_modes
    for k in modes:
      counts[k] += 1
    return cls(tuple(counts))

  @property
  def total(self) -> int:
    return sum(self.counts)

  @property
  def num_modes(self) -> int:
    return len(self.counts)

  @property
  def is_single_occupancy(self) -> bool:
    return all(c <= 1 for c in self.counts)

  def modes(self) -> Tuple[int, ...]:
    """Zero-based occupied modes `k_1 <= ... <= k_N`, repeated by count."""
    return tuple(k for k, c in enumerate(self.counts) for _ in range(c))

  def __str__(self):
    return '(' + ','.join(str(c) for c in self.counts) + ')'


def multiplicity(n: OccupationVector) -> int:
  """Returns `mu(n)`, the product of factorials of the occupation numbers."""
  result = 1
  for c in n.counts:
    result *= math.factorial(c)
  if result > _INT64_MAX:
    raise OverflowError(f'mu{n} = {result} overflows 64-bit integers')
  return result


def configuration_count(num_modes: int, num_particles: int,
                        fermionic: bool) -> int:
  """Number of output configurations, C(M+N-1, N) or C(M, N)."""
  if fermionic:
    return int(scipy.special.comb(num_modes, num_particles, exact=True))
  return int(scipy.special.comb(num_modes + num_particles - 1, num_particles,
                                exact=True))


def enumerate_configurations(num_modes: int, num_particles: int,
                             fermionic: bool) -> List[OccupationVector]:
  """Lists every configuration of `N` particles over `M` modes.

  Args:
    num_modes: M, at least 1.
    num_particles: N.
    fermionic: Restrict to occupation numbers at most one.

  Returns:
    Configurations in ascending lexicographic order of their counts.
  """
  if num_modes < 1:
    raise ValueError(f'Need at least one mode, got {num_modes}')
  if num_particles < 0:
    raise ValueError(f'Particle number must be non-negative, '
                     f'got {num_particles}')
  if fermionic:
    if num_particles > num_modes:
      raise PauliExclusionError(
          f'{num_particles} fermions do not fit in {num_modes} modes')
    groups = itertools.combinations(range(num_modes), num_particles)
  else:
    groups = itertools.combinations_with_replacement(range(num_modes),
                                                     num_particles)
  return sorted(OccupationVector.from_modes(g, num_modes) for g in groups)


def _check_transition(u: matrices.ComplexMatrix, n: OccupationVector,
                      m: OccupationVector):
  if not u.is_square:
    raise ValueError(f'Network must be square, got {u.rows}x{u.cols}')
  if n.num_modes != u.rows or m.num_modes != u.cols:
    raise ValueError(
        f'Configurations {n} and {m} do not match a {u.rows}-mode network')
  if n.total != m.total:
    raise ValueError(
        f'Particle number mismatch: input {n} has {n.total}, '
        f'output {m} has {m.total}')


def boson_amplitude(u: matrices.ComplexMatrix, n: OccupationVector,
                    m: OccupationVector,
                    settings: Optional[config.Settings] = None) -> complex:
  """Returns `per(U[n|m]) / sqrt(mu(n) mu(m))`."""
  _check_transition(u, n, m)
  if n.total == 0:
    return 1 + 0j
  sub = matrices.build_submatrix(
      u, matrices.SubmatrixSpec(n.counts, m.counts))
  return matrices.permanent(sub, settings=settings) / math.sqrt(
      multiplicity(n) * multiplicity(m))


def fermion_amplitude(u: matrices.ComplexMatrix, n: OccupationVector,
                      m: OccupationVector) -> complex:
  """Returns `det(U[n|m])` with rows and columns in ascending mode order."""
  _check_transition(u, n, m)
  for label, v in (('input', n), ('output', m)):
    if not v.is_single_occupancy:
      raise PauliExclusionError(
          f'Fermionic {label} configuration {v} has a mode occupied more '
          'than once, forbidden by Pauli exclusion')
  if n.total == 0:
    return 1 + 0j
  sub = matrices.build_submatrix(
      u, matrices.SubmatrixSpec(n.counts, m.counts))
  return matrices.determinant(sub)


@dataclasses.dataclass(frozen=True, eq=False)
class OutputDistribution:
  """Exact probabilities of output configurations.

  Attributes:
    entries: Probability per configuration, in lexicographic order.
    particle_total: N.
    mode_count: M.
    statistics: One of 'bosonic', 'fermionic', 'general'.
  """
  entries: Mapping[OccupationVector, float]
  particle_total: int
  mode_count: int
  statistics: str

  def __post_init__(self):
    if self.statistics not in STATISTICS:
      raise ValueError(f'Unknown statistics {self.statistics!r}, '
                       f'expected one of {STATISTICS}')
    entries = {m: float(p) for m, p in sorted(self.entries.items())}
    for m, p in entries.items():
      if m.num_modes != self.mode_count or m.total != self.particle_total:
        raise ValueError(
            f'Configuration {m} does not hold {self.particle_total} '
            f'particles in {self.mode_count} modes')
      if not -config.VANISHING_THRESHOLD <= p <= (
          1.0 + config.NORMALIZATION_TOLERANCE):
        raise ValueError(f'Probability {p} of {m} lies outside [0, 1]')
      if (self.statistics == FERMIONIC and not m.is_single_occupancy
          and p > config.NORMALIZATION_TOLERANCE):
        raise PauliExclusionError(
            f'Fermionic distribution supports {m} with probability {p}')
    total = sum(entries.values())
    if abs(total - 1.0) > config.NORMALIZATION_TOLERANCE:
      raise ValueError(
          f'Probabilities sum to {total!r}, not 1 within '
          f'{config.NORMALIZATION_TOLERANCE:.0e}')
    object.__setattr__(self, 'entries', entries)

  @classmethod
  def from_counts(cls, counts: Mapping[OccupationVector, int],
                  particle_total: int, mode_count: int,
                  statistics: str = GENERAL) -> 'OutputDistribution':
    """Empirical distribution of observed configurations."""
    total = sum(counts.values())
    if total == 0:
      raise ValueError('Cannot normalize an empty sample')
    return cls({m: c / total for m, c in counts.items()},
               particle_total, mode_count, statistics)

  def configurations(self) -> List[OccupationVector]:
    return list(self.entries)

  def probability(self, m: OccupationVector) -> float:
    return self.entries.get(m, 0.0)

  def max_abs_deviation(self, other: 'OutputDistribution') -> float:
    """Largest pointwise difference; missing configurations count as 0."""
    keys = set(self.entries) | set(other.entries)
    if not keys:
      return 0.0
    return max(abs(self.probability(m) - other.probability(m)) for m in keys)

  def total_variation(self, other: 'OutputDistribution') -> float:
    keys = set(self.entries) | set(other.entries)
    return 0.5 * sum(abs(self.probability(m) - other.probability(m))
                     for m in keys)

  def to_json(self) -> Dict[str, Any]:
    return {
        'M': self.mode_count,
        'N': self.particle_total,
        'statistics': self.statistics,
        'entries': [{'m': list(m.counts), 'p': p}
                    for m, p in self.entries.items()],
    }

  @classmethod
  def from_json(cls, obj: Dict[str, Any]) -> 'OutputDistribution':
    entries = {OccupationVector(tuple(e['m'])): e['p'] for e in obj['entries']}
    return cls(entries, obj['N'], obj['M'], obj['statistics'])

  def to_csv(self) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator='\n')
    writer.writerow([f'm_{i + 1}' for i in range(self.mode_count)] + ['p'])
    for m, p in self.entries.items():
      writer.writerow(list(m.counts) + [repr(p)])
    return out.getvalue()

  def dumps(self, fmt: str = 'json') -> str:
    if fmt == 'json':
      return json.dumps(self.to_json())
    if fmt == 'csv':
      return self.to_csv()
    raise ValueError(f'Unknown format {fmt!r}')


def output_distribution_fast(
    u: matrices.ComplexMatrix,
    n: OccupationVector,
    statistics: str,
    settings: Optional[config.Settings] = None,
) -> OutputDistribution:
  """Exact output distribution from permanents or determinants.

  Args:
    u: Unitary network on `M` modes.
    n: Input configuration.
    statistics: 'bosonic' or 'fermionic'.
    settings: Thread settings; configurations are evaluated in parallel and
      merged in lexicographic order.

  Returns:
    Distribution over every configuration with `|m| = |n|`.
  """
  if statistics not in (BOSONIC, FERMIONIC):
    raise ValueError(
        f'Statistics must be {BOSONIC!r} or {FERMIONIC!r}, got {statistics!r}')
  if n.num_modes != u.rows:
    raise ValueError(
        f'Input {n} does not match a {u.rows}-mode network')
  fermionic = statistics == FERMIONIC
  if fermionic and not n.is_single_occupancy:
    raise PauliExclusionError(
        f'Fermionic input {n} has a mode occupied more than once')
  configurations = enumerate_configurations(u.rows, n.total, fermionic)
  if fermionic:
    amplitude = lambda m: fermion_amplitude(u, n, m)
  else:
    # Parallelism is spent across configurations, not inside permanents.
    amplitude = lambda m: boson_amplitude(u, n, m, config.Settings())
  amplitudes = config.worker_map(amplitude, configurations, settings)
  entries = {m: float(abs(a) ** 2)
             for m, a in zip(configurations, amplitudes)}
  return OutputDistribution(entries, n.total, u.rows, statistics)


def bunched_probability(distribution: OutputDistribution) -> float:
  """Total probability of configurations with some mode occupied twice."""
  return sum(p for m, p in distribution.entries.items()
             if not m.is_single_occupancy)

