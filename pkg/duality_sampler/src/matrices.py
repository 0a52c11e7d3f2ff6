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

"""Dense complex linear algebra for linear networks.

Networks are unitary matrices `U` acting on single-particle modes as
`|k> -> sum_l U[k, l] |l>`. Transition amplitudes of many-particle states are
permanents (bosons) or determinants (fermions) of submatrices `U[n|m]` built
by repeating rows and columns according to occupation numbers.
"""

import itertools
import json
from typing import Any, Dict, Optional, Sequence, Tuple

import dataclasses
from absl import logging
import numpy as np
import scipy.linalg

from duality_sampler.src import config


# Gray-code subset sums above this size are split into a fixed number of
# chunks, independently of the thread count, so results are bit-identical.
_CHUNKED_MIN_SIZE = 12
_NUM_CHUNKS = 16


class NotUnitaryError(ValueError):
  """Raised when a matrix flagged as unitary fails the unitarity check."""


def unitarity_deviation(a: np.ndarray) -> float:
  """Returns the Frobenius norm of `a^dagger a - I`."""
  a = np.asarray(a)
  return float(np.linalg.norm(a.conj().T @ a - np.eye(a.shape[1])))


@dataclasses.dataclass(frozen=True, eq=False)
class ComplexMatrix:
  """Immutable dense complex matrix.

  Attributes:
    entries: Complex128 array of shape `[rows, cols]`, read-only.
    unitary: Whether the matrix is a network; checked on construction.
  """
  entries: np.ndarray
  unitary: bool = False

  def __post_init__(self):
    entries = np.array(self.entries, dtype=np.complex128)
    if entries.ndim != 2:
      raise ValueError(
          f'Matrix entries must have rank 2, got rank {entries.ndim}')
    entries.setflags(write=False)
    object.__setattr__(self, 'entries', entries)
    if self.unitary:
      if entries.shape[0] != entries.shape[1]:
        raise NotUnitaryError(
            f'A unitary must be square, got shape {entries.shape}')
      deviation = unitarity_deviation(entries)
      if not deviation < config.UNITARY_TOLERANCE:
        raise NotUnitaryError(
            f'Matrix is not unitary: |U^dag U - I|_F = {deviation:.3e} '
            f'exceeds {config.UNITARY_TOLERANCE:.0e}')

  @property
  def rows(self) -> int:
    return self.entries.shape[0]

  @property
  def cols(self) -> int:
    return self.entries.shape[1]

  @property
  def is_square(self) -> bool:
    return self.rows == self.cols

  @classmethod
  def identity(cls, dim: int) -> 'ComplexMatrix':
    return cls(np.eye(dim), unitary=True)

  def to_json(self) -> Dict[str, Any]:
    flat = self.entries.reshape(-1)
    return {
        'rows': self.rows,
        'cols': self.cols,
        'entries': [[float(z.real), float(z.imag)] for z in flat],
    }

  @classmethod
  def from_json(cls, obj: Dict[str, Any], unitary: bool = False
                ) -> 'ComplexMatrix':
    """Parses `{"rows": R, "cols": C, "entries": [[re, im], ...]}`."""
    try:
      rows, cols, entries = int(obj['rows']), int(obj['cols']), obj['entries']
    except (KeyError, TypeError) as e:
      raise ValueError(f'Malformed matrix JSON: {e}') from None
    if not isinstance(entries, list):
      raise ValueError(
          f'Matrix JSON entries must be a list, got {type(entries).__name__}')
    if len(entries) != rows * cols:
      raise ValueError(
          f'Matrix JSON declares {rows}x{cols} but has {len(entries)} entries')
    pairs = []
    for i, entry in enumerate(entries):
      if not isinstance(entry, (list, tuple)) or len(entry) != 2:
        raise ValueError(
            f'Matrix JSON entry {i} must be an [re, im] pair, got {entry!r}')
      try:
        pairs.append(complex(float(entry[0]), float(entry[1])))
      except (TypeError, ValueError):
        raise ValueError(
            f'Matrix JSON entry {i} is not numeric: {entry!r}') from None
    values = np.array(pairs, dtype=np.complex128)
    return cls(values.reshape(rows, cols), unitary=unitary)


def load_matrix(path: str, unitary: bool = False) -> ComplexMatrix:
  with open(path, 'r') as f:
    return ComplexMatrix.from_json(json.load(f), unitary=unitary)


def save_matrix(matrix: ComplexMatrix, path: str):
  with open(path, 'w') as f:
    json.dump(matrix.to_json(), f)


@dataclasses.dataclass(frozen=True)
class SubmatrixSpec:
  """Row and column multiplicities selecting `U[n|m]`.

  Attributes:
    row_multiplicities: Occupation numbers `n`, one per source row.
    col_multiplicities: Occupation numbers `m`, one per source column.
  """
  row_multiplicities: Tuple[int, ...]
  col_multiplicities: Tuple[int, ...]

  def __post_init__(self):
    rows = tuple(int(x) for x in self.row_multiplicities)
    cols = tuple(int(x) for x in self.col_multiplicities)
    if any(x < 0 for x in rows + cols):
      raise ValueError('Multiplicities must be non-negative')
    if sum(rows) != sum(cols):
      raise ValueError(
          f'Row multiplicities sum to {sum(rows)} but column multiplicities '
          f'sum to {sum(cols)}')
    object.__setattr__(self, 'row_multiplicities', rows)
    object.__setattr__(self, 'col_multiplicities', cols)

  @property
  def size(self) -> int:
    return sum(self.row_multiplicities)


def build_submatrix(source: ComplexMatrix, spec: SubmatrixSpec
                    ) -> ComplexMatrix:
  """Returns `U[n|m]`.

  Row `k` of `source` appears `n_k` times consecutively, in ascending `k`;
  likewise column `l` appears `m_l` times in ascending `l`.

  Args:
    source: Matrix to draw rows and columns from.
    spec: Occupation numbers for rows and columns.

  Returns:
    The `N x N` submatrix, `N = |n| = |m|`.
  """
  if len(spec.row_multiplicities) != source.rows:
    raise ValueError(
        f'Row multiplicities have length {len(spec.row_multiplicities)} '
        f'but the source matrix has {source.rows} rows')
  if len(spec.col_multiplicities) != source.cols:
    raise ValueError(
        f'Column multiplicities have length {len(spec.col_multiplicities)} '
        f'but the source matrix has {source.cols} columns')
  if spec.size == 0:
    raise ValueError('Submatrix of zero particles requested')
  rows = np.repeat(np.arange(source.rows), spec.row_multiplicities)
  cols = np.repeat(np.arange(source.cols), spec.col_multiplicities)
  return ComplexMatrix(source.entries[np.ix_(rows, cols)])


def _square_entries(m: ComplexMatrix) -> np.ndarray:
  if not m.is_square:
    raise ValueError(
        f'Expected a square matrix, got {m.rows}x{m.cols}')
  return m.entries


def _ryser_partial(a: np.ndarray, start: int, stop: int) -> complex:
  """Sums Ryser terms for Gray-code indices `start <= k < stop`, `k >= 1`."""
  n = a.shape[0]
  gray = start ^ (start >> 1)
  columns = [j for j in range(n) if gray >> j & 1]
  row_sums = a[:, columns].sum(axis=1)
  sign = -1.0 if len(columns) % 2 else 1.0
  total = sign * np.prod(row_sums)
  for k in range(start + 1, stop):
    j = (k & -k).bit_length() - 1
    gray ^= 1 << j
    if gray >> j & 1:
      row_sums = row_sums + a[:, j]
    else:
      row_sums = row_sums - a[:, j]
    sign = -sign
    total += sign * np.prod(row_sums)
  return complex(total)


def _permanent_ryser(a: np.ndarray,
                     settings: Optional[config.Settings]) -> complex:
  n = a.shape[0]
  num_subsets = 1 << n
  if n < _CHUNKED_MIN_SIZE:
    bounds = [(1, num_subsets)]
  else:
    edges = np.linspace(1, num_subsets, _NUM_CHUNKS + 1).astype(np.int64)
    bounds = [(int(lo), int(hi)) for lo, hi in zip(edges[:-1], edges[1:])]
    logging.debug('Ryser permanent of size %d split into %d chunks.', n,
                  len(bounds))
  partials = config.worker_map(
      lambda b: _ryser_partial(a, *b), bounds, settings)
  total = 0j
  for partial in partials:
    total += partial
  return (-1) ** n * total


def _permanent_glynn(a: np.ndarray) -> complex:
  n = a.shape[0]
  col_sums = a.sum(axis=0)
  deltas = np.ones(n)
  sign = 1.0
  total = np.prod(col_sums)
  for k in range(1, 1 << (n - 1)):
    row = (k & -k).bit_length()
    col_sums = col_sums - 2.0 * deltas[row] * a[row]
    deltas[row] = -deltas[row]
    sign = -sign
    total += sign * np.prod(col_sums)
  return complex(total / 2 ** (n - 1))


def permanent(m: ComplexMatrix,
              method: str = 'ryser',
              settings: Optional[config.Settings] = None) -> complex:
  """Computes the permanent with Gray-code subset enumeration.

  Args:
    m: Square matrix of size at most `MAX_PERMANENT_SIZE`.
    method: 'ryser' (inclusion-exclusion over column subsets) or 'glynn'
      (sum over sign vectors).
    settings: Thread settings; large Ryser sums are split into chunks and
      reduced in chunk order.

  Returns:
    per(m); the empty matrix has permanent 1.
  """
  a = _square_entries(m)
  n = a.shape[0]
  if n > config.MAX_PERMANENT_SIZE:
    raise config.CapExceededError(
        f'Permanent of a {n}x{n} matrix exceeds the cap of '
        f'{config.MAX_PERMANENT_SIZE}')
  if n == 0:
    return 1 + 0j
  if method == 'ryser':
    return _permanent_ryser(a, settings)
  if method == 'glynn':
    return _permanent_glynn(a)
  raise ValueError(f'Unknown permanent method: {method!r}')


def permanent_naive(m: ComplexMatrix) -> complex:
  """Permanent as the plain sum over permutations; a reference oracle."""
  a = _square_entries(m)
  n = a.shape[0]
  if n > config.MAX_NAIVE_PERMANENT_SIZE:
    raise config.CapExceededError(
        f'Naive permanent of a {n}x{n} matrix exceeds the cap of '
        f'{config.MAX_NAIVE_PERMANENT_SIZE}')
  rows = np.arange(n)
  sigmas = np.array(list(itertools.permutations(range(n))), dtype=np.int64)
  return complex(np.sum(np.prod(a[rows, sigmas], axis=1)))


def determinant(m: ComplexMatrix) -> complex:
  """Determinant via LU decomposition with partial pivoting."""
  a = _square_entries(m)
  n = a.shape[0]
  if n == 0:
    return 1 + 0j
  lu, piv = scipy.linalg.lu_factor(a, check_finite=False)
  swaps = int(np.count_nonzero(piv != np.arange(n)))
  sign = -1.0 if swaps % 2 else 1.0
  return complex(sign * np.prod(np.diag(lu)))


def haar_random_unitary(dim: int, seed: Any) -> ComplexMatrix:
  """Samples a Haar-random unitary.

  QR decomposition of a complex Ginibre matrix, with the phases of `R`'s
  diagonal moved into `Q` so that the distribution is Haar.

  Args:
    dim: Matrix size, at least 1.
    seed: Anything accepted by `numpy.random.default_rng`.

  Returns:
    A `dim x dim` unitary, deterministic in `seed`.
  """
  if dim < 1:
    raise ValueError(f'Dimension must be positive, got {dim}')
  rng = np.random.default_rng(seed)
  z = (rng.standard_normal((dim, dim))
       + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2.0)
  q, r = scipy.linalg.qr(z)
  d = np.diag(r)
  q = q * (d / np.abs(d))
  return ComplexMatrix(q, unitary=True)


def fourier_row_network(dim: int) -> ComplexMatrix:
  """Discrete Fourier matrix `V[k, l] = exp(2 pi i k l / dim) / sqrt(dim)`.

  Every entry of the first row has modulus `1 / sqrt(dim)`.
  """
  if dim < 1:
    raise ValueError(f'Dimension must be positive, got {dim}')
  k = np.arange(dim)
  # Reduce the exponent modulo dim to keep phases exact for small dims.
  phases = np.outer(k, k) % dim
  v = np.exp(2j * np.pi * phases / dim) / np.sqrt(dim)
  return ComplexMatrix(v, unitary=True)


def beam_splitter() -> ComplexMatrix:
  """The balanced beam splitter `((1, 1), (1, -1)) / sqrt(2)`."""
  return ComplexMatrix(np.array([[1, 1], [1, -1]]) / np.sqrt(2.0),
                       unitary=True)


def has_flat_first_row(v: ComplexMatrix,
                       tolerance: float = config.IDENTITY_TOLERANCE) -> bool:
  """Whether `|V[0, k]| = 1 / sqrt(M)` for every column `k`."""
  target = 1.0 / np.sqrt(v.cols)
  return bool(np.max(np.abs(np.abs(v.entries[0]) - target)) < tolerance)


def permutation_matrix(perm: Sequence[int]) -> ComplexMatrix:
  """Network sending mode `k` to mode `perm[k]`."""
  n = len(perm)
  p = np.zeros((n, n))
  p[np.arange(n), list(perm)] = 1.0
  return ComplexMatrix(p, unitary=True)
