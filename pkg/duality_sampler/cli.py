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

"""Command-line front end.

Usage: duality_sampler SUBCOMMAND [--flags]

Subcommands are permanent, distribution, duality, hom, scattershot, verify and
bench. Artifacts go to --output, or stdout when it is unset. Exit status is 0
on success, 1 when a numerical identity exceeds its tolerance and 2 for
invalid requests.
"""

import csv
import io
import json
import sys
import time
from typing import Callable, Dict, List, Optional

from absl import app
from absl import flags
from absl import logging
import dataclasses
import numpy as np

from duality_sampler.src import config
from duality_sampler.src import duality
from duality_sampler.src import fock
from duality_sampler.src import matrices
from duality_sampler.src import oracle
from duality_sampler.src import scattershot
from duality_sampler.src import verification


SUBCOMMANDS = ('permanent', 'distribution', 'duality', 'hom', 'scattershot',
               'verify', 'bench')

FLAGS = flags.FLAGS

flags.DEFINE_integer('modes', None, 'Number of modes M.')
flags.DEFINE_integer('particles', None, 'Number of particles N.')
flags.DEFINE_integer('seed', 0, 'Non-negative RNG seed.')
flags.DEFINE_string('output', None, 'Artifact path; stdout when unset.')
flags.DEFINE_enum('format', 'json', ['json', 'csv'], 'Artifact format.')
flags.DEFINE_string('matrix', None, 'Matrix JSON file.')
flags.DEFINE_bool('naive', False, 'Use the permutation-sum permanent.')
flags.DEFINE_enum('method', 'ryser', ['ryser', 'glynn'], 'Permanent kernel.')
flags.DEFINE_string('input', None, 'Input configuration, e.g. "1,1,0".')
flags.DEFINE_enum('statistics', None, [fock.BOSONIC, fock.FERMIONIC],
                  'Particle statistics for `distribution`.')
flags.DEFINE_enum('eps1', None, ['S', 'A'], 'Species symmetry.')
flags.DEFINE_enum('eps2', None, ['S', 'A'], 'Internal-state symmetry.')
flags.DEFINE_bool('haar', False, 'Draw a Haar network from --seed.')
flags.DEFINE_float('overlap', None,
                   'Overlap of two internal states; orthonormal when unset.')
flags.DEFINE_string('internal', None, 'Internal-state set JSON file.')
flags.DEFINE_string('grid', '0:1:0.05', 'Overlap grid start:stop:step.')
flags.DEFINE_integer('trials', 10000, 'Scattershot trials.')
flags.DEFINE_string('suite', 'all', 'Verification suite name or "all".')
flags.DEFINE_integer('min', 8, 'Smallest benchmarked permanent size.')
flags.DEFINE_integer('max', 18, 'Largest benchmarked permanent size.')
flags.DEFINE_string('summary', None, 'Scattershot summary JSON path.')


@dataclasses.dataclass(frozen=True)
class CommandConfig:
  """A validated command line."""
  subcommand: str
  modes: Optional[int] = None
  particles: Optional[int] = None
  seed: int = 0
  output: Optional[str] = None
  fmt: str = 'json'
  matrix: Optional[str] = None
  naive: bool = False
  method: str = 'ryser'
  input: Optional[str] = None
  statistics: Optional[str] = None
  eps1: Optional[str] = None
  eps2: Optional[str] = None
  haar: bool = False
  overlap: Optional[float] = None
  internal: Optional[str] = None
  grid: str = '0:1:0.05'
  trials: int = 10000
  suite: str = 'all'
  bench_min: int = 8
  bench_max: int = 18
  summary: Optional[str] = None

  def __post_init__(self):
    if self.subcommand not in SUBCOMMANDS:
      raise ValueError(
          f'Unknown subcommand {self.subcommand!r}, expected one of '
          f'{SUBCOMMANDS}')
    if self.seed < 0:
      raise ValueError(f'--seed must be non-negative, got {self.seed}')
    for name in ('modes', 'particles'):
      value = getattr(self, name)
      if value is not None and value < 1:
        raise ValueError(f'--{name} must be positive, got {value}')
    getattr(self, f'_validate_{self.subcommand}')()

  def _require(self, *names: str):
    missing = [f'--{n}' for n in names if getattr(self, n) is None]
    if missing:
      raise ValueError(
          f'{self.subcommand} requires {", ".join(missing)}')

  def _validate_permanent(self):
    self._require('matrix')

  def _validate_distribution(self):
    self._require('matrix', 'input', 'statistics')

  def _validate_duality(self):
    self._require('eps1', 'eps2')
    if self.matrix is not None and self.haar:
      raise ValueError('--matrix and --haar are mutually exclusive')
    if self.input is None:
      self._require('modes', 'particles')
    elif self.particles is not None:
      total = fock.OccupationVector.parse(self.input).total
      if total != self.particles:
        raise ValueError(
            f'--input {self.input} holds {total} particles but --particles '
            f'is {self.particles}')
    if self.overlap is not None and self.internal is not None:
      raise ValueError('--overlap and --internal are mutually exclusive')
    if self.haar:
      self._require('modes')

  def _validate_hom(self):
    duality.parse_grid(self.grid)

  def _validate_scattershot(self):
    self._require('modes', 'particles')
    if self.trials < 0:
      raise ValueError(f'--trials must be non-negative, got {self.trials}')
    if self.fmt != 'json':
      raise ValueError('scattershot writes JSON lines only')

  def _validate_verify(self):
    if self.suite != 'all' and self.suite not in verification.SUITES:
      raise ValueError(
          f'Unknown suite {self.suite!r}, expected one of '
          f'{sorted(verification.SUITES)} or all')

  def _validate_bench(self):
    if not 1 <= self.bench_min <= self.bench_max <= (
        config.MAX_PERMANENT_SIZE):
      raise ValueError(
          f'Bench sizes must satisfy 1 <= --min <= --max <= '
          f'{config.MAX_PERMANENT_SIZE}, got {self.bench_min}..'
          f'{self.bench_max}')


def config_from_flags(subcommand: str) -> CommandConfig:
  return CommandConfig(
      subcommand=subcommand,
      modes=FLAGS.modes,
      particles=FLAGS.particles,
      seed=FLAGS.seed,
      output=FLAGS.output,
      fmt=FLAGS.format,
      matrix=FLAGS.matrix,
      naive=FLAGS.naive,
      method=FLAGS.method,
      input=FLAGS.input,
      statistics=FLAGS.statistics,
      eps1=FLAGS.eps1,
      eps2=FLAGS.eps2,
      haar=FLAGS.haar,
      overlap=FLAGS.overlap,
      internal=FLAGS.internal,
      grid=FLAGS.grid,
      trials=FLAGS.trials,
      suite=FLAGS.suite,
      bench_min=FLAGS.min,
      bench_max=FLAGS.max,
      summary=FLAGS.summary)


def _rows_to_csv(header: List[str], rows: List[List[object]]) -> str:
  out = io.StringIO()
  writer = csv.writer(out, lineterminator='\n')
  writer.writerow(header)
  writer.writerows(rows)
  return out.getvalue()


def _dumps(obj) -> str:
  return json.dumps(obj, sort_keys=True) + '\n'


def _permanent(cfg: CommandConfig) -> str:
  m = matrices.load_matrix(cfg.matrix)
  if cfg.naive:
    value = matrices.permanent_naive(m)
  else:
    value = matrices.permanent(m, method=cfg.method)
  if cfg.fmt == 'csv':
    return _rows_to_csv(['re', 'im'], [[repr(value.real), repr(value.imag)]])
  return _dumps({'permanent': [value.real, value.imag]})


def _distribution(cfg: CommandConfig) -> str:
  u = matrices.load_matrix(cfg.matrix, unitary=True)
  n = fock.OccupationVector.parse(cfg.input)
  dist = fock.output_distribution_fast(u, n, cfg.statistics)
  return dist.dumps(cfg.fmt) + ('\n' if cfg.fmt == 'json' else '')


def _network(cfg: CommandConfig, num_modes: int) -> matrices.ComplexMatrix:
  if cfg.matrix is not None:
    return matrices.load_matrix(cfg.matrix, unitary=True)
  if cfg.haar:
    return matrices.haar_random_unitary(num_modes, cfg.seed)
  return matrices.fourier_row_network(num_modes)


def _duality(cfg: CommandConfig) -> str:
  if cfg.input is not None:
    n = fock.OccupationVector.parse(cfg.input)
  else:
    n = verification.table_one_inputs(cfg.modes, cfg.particles)
  if cfg.modes is not None and cfg.modes != n.num_modes:
    raise ValueError(f'Input {n} does not have {cfg.modes} modes')
  if cfg.overlap is not None:
    if n.total != 2:
      raise ValueError('--overlap applies to two particles only')
    internal = oracle.InternalStateSet.pairwise_overlap(cfg.overlap)
  elif cfg.internal is not None:
    internal = oracle.load_internal_states(cfg.internal)
  else:
    internal = oracle.InternalStateSet.orthonormal(n.total)
  report = duality.run_duality_check(
      oracle.SymmetryFlag.parse(cfg.eps1), oracle.SymmetryFlag.parse(cfg.eps2),
      n, internal, _network(cfg, n.num_modes))
  if cfg.fmt == 'csv':
    header = [f'm_{i + 1}' for i in range(n.num_modes)] + ['fast', 'oracle']
    rows = [list(m.counts) + [repr(report.fast_distribution.probability(m)),
                              repr(p)]
            for m, p in report.oracle_distribution.entries.items()]
    return _rows_to_csv(header, rows)
  return _dumps(report.to_json())


def _hom(cfg: CommandConfig) -> str:
  eps1 = oracle.SymmetryFlag.parse(cfg.eps1 or 'S')
  points = duality.hom_curve(duality.parse_grid(cfg.grid), eps1)
  if cfg.eps2 is not None:
    eps2 = oracle.SymmetryFlag.parse(cfg.eps2)
    if cfg.fmt == 'csv':
      return _rows_to_csv(['g', 'unentangled', 'p'],
                          [[repr(p.overlap), p.unentangled, p.series(eps2)]
                           for p in points])
    return _dumps([{'g': p.overlap, 'unentangled': p.unentangled,
                    'p': p.series(eps2), 'errors': p.errors}
                   for p in points])
  if cfg.fmt == 'csv':
    return _rows_to_csv(['g', 'unentangled', 'S', 'A'],
                        [[repr(p.overlap), p.unentangled, p.symmetric,
                          p.antisymmetric] for p in points])
  return _dumps([p.to_json() for p in points])


def _scattershot(cfg: CommandConfig) -> str:
  run = scattershot.run_scattershot(scattershot.default_config(
      cfg.modes, cfg.particles, cfg.trials, cfg.seed))
  summary = run.summary()
  if cfg.summary is not None:
    with open(cfg.summary, 'w') as f:
      f.write(_dumps(summary))
  logging.info('Scattershot summary: %s', json.dumps(summary))
  return run.log_lines()


def _verify(cfg: CommandConfig) -> str:
  results = verification.run_suites(cfg.suite)
  failed = [r for r in results if not r.passed]
  artifact = _dumps([r.to_json() for r in results])
  if failed:
    _emit(artifact, cfg.output)
    raise config.ContractViolation('; '.join(
        f'{r.name}: deviation {r.deviation:.3e} exceeds {r.tolerance:.0e}'
        for r in failed))
  for r in results:
    print(f'{r.name}: max deviation {r.deviation:.3e}', file=sys.stderr)
  return artifact


def _bench(cfg: CommandConfig) -> str:
  rng = np.random.default_rng(cfg.seed)
  rows = []
  for n in range(cfg.bench_min, cfg.bench_max + 1):
    m = matrices.ComplexMatrix(rng.standard_normal((n, n))
                               + 1j * rng.standard_normal((n, n)))
    for method in ('ryser', 'glynn'):
      start = time.perf_counter()
      matrices.permanent(m, method=method)
      seconds = time.perf_counter() - start
      logging.info('per %s N=%d: %.4fs', method, n, seconds)
      rows.append([n, method, f'{seconds:.6f}'])
  return _rows_to_csv(['n', 'method', 'seconds'], rows)


_HANDLERS: Dict[str, Callable[[CommandConfig], str]] = {
    'permanent': _permanent,
    'distribution': _distribution,
    'duality': _duality,
    'hom': _hom,
    'scattershot': _scattershot,
    'verify': _verify,
    'bench': _bench,
}


def _emit(artifact: str, path: Optional[str]):
  if path is None:
    sys.stdout.write(artifact)
    return
  with open(path, 'w') as f:
    f.write(artifact)


def dispatch(cfg: CommandConfig) -> int:
  """Runs a validated command and writes its artifact.

  Args:
    cfg: The command.

  Returns:
    0 on success, 1 on a numerical contract violation, 2 on invalid input.
  """
  logging.info('Running %s.', cfg.subcommand)
  try:
    artifact = _HANDLERS[cfg.subcommand](cfg)
    _emit(artifact, cfg.output)
  except config.ContractViolation as e:
    logging.error('Contract violation: %s', e)
    print(f'contract violation: {e}', file=sys.stderr)
    return 1
  except (ValueError, OSError, OverflowError) as e:
    logging.error('%s failed: %s', cfg.subcommand, e)
    print(f'error: {e}', file=sys.stderr)
    return 2
  logging.info('Finished %s.', cfg.subcommand)
  return 0


def main(argv: List[str]) -> int:
  if len(argv) != 2:
    print(f'usage: duality_sampler {{{"|".join(SUBCOMMANDS)}}} [--flags]',
          file=sys.stderr)
    return 2
  try:
    cfg = config_from_flags(argv[1])
  except ValueError as e:
    print(f'error: {e}', file=sys.stderr)
    return 2
  return dispatch(cfg)


def run():
  app.run(main)


if __name__ == '__main__':
  run()
