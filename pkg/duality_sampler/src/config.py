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

"""Numerical tolerances, size caps and environment-driven settings."""

import concurrent.futures
import os
from typing import Callable, List, Optional, Sequence, TypeVar

import dataclasses
from absl import logging


T = TypeVar('T')
R = TypeVar('R')

THREADS_ENV_VAR = 'DUALITY_SAMPLER_THREADS'

# Tolerances.
UNITARY_TOLERANCE = 1e-12
NORMALIZATION_TOLERANCE = 1e-10
IDENTITY_TOLERANCE = 1e-12
ORACLE_TOLERANCE = 1e-10
VANISHING_THRESHOLD = 1e-14
INDEPENDENCE_THRESHOLD = 1e-10

# Size caps.
MAX_PERMANENT_SIZE = 20
MAX_NAIVE_PERMANENT_SIZE = 9
MAX_ORACLE_PARTICLES = 4
MAX_ORACLE_DIMENSION = 4096


class CapExceededError(ValueError):
  """Raised when a request exceeds one of the documented size caps."""


class ContractViolation(Exception):
  """Raised when an internal consistency check fails beyond tolerance."""


@dataclasses.dataclass(frozen=True)
class Settings:
  """Runtime settings.

  Attributes:
    threads: Upper bound on worker threads used by parallel library calls.
  """
  threads: int = 1

  def __post_init__(self):
    if self.threads < 1:
      raise ValueError(f'threads must be positive, got {self.threads}')


def settings_from_env(environ: Optional[dict] = None) -> Settings:
  """Builds `Settings` from environment variables.

  Args:
    environ: Mapping to read from; defaults to `os.environ`.

  Returns:
    Settings with `threads` taken from `DUALITY_SAMPLER_THREADS` when set.
  """
  environ = os.environ if environ is None else environ
  raw = environ.get(THREADS_ENV_VAR)
  if raw is None or not raw.strip():
    return Settings()
  try:
    threads = int(raw)
  except ValueError:
    raise ValueError(
        f'{THREADS_ENV_VAR} must be a positive integer, got {raw!r}'
    ) from None
  if threads < 1:
    raise ValueError(
        f'{THREADS_ENV_VAR} must be a positive integer, got {raw!r}')
  return Settings(threads=threads)


def worker_map(
    fn: Callable[[T], R],
    items: Sequence[T],
    settings: Optional[Settings] = None,
) -> List[R]:
  """Applies `fn` to every item, returning results in input order."""
  settings = settings or settings_from_env()
  if settings.threads == 1 or len(items) < 2:
    return [fn(item) for item in items]
  workers = min(settings.threads, len(items))
  logging.debug('Mapping %d items over %d worker threads.', len(items), workers)
  with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as pool:
    return list(pool.map(fn, items))
