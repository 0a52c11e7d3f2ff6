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

"""Compiles particle permutations and network actions into tensor ops.

An `N`-particle state over `M` modes and a `D`-dimensional internal space is
stored as a flat vector of length `(M*D)**N`. The layout is particle-major and
mode-then-internal within a particle, i.e. the flat vector reshapes to the
factor shape `[M, D, M, D, ..., M, D]`, with the mode of particle `a` on axis
`2a` and its internal state on axis `2a + 1`.
"""

from typing import Any, List, Sequence

import dataclasses
import numpy as np

from duality_sampler.src import tensor_ops


MODES = 'modes'
INTERNAL = 'internal'
BOTH = 'both'
SPACES = (MODES, INTERNAL, BOTH)


@dataclasses.dataclass(frozen=True)
class FactorLayout:
  """Shape bookkeeping for first-quantization tensors.

  Attributes:
    num_particles: N.
    num_modes: M, dimension of the single-particle mode space.
    internal_dim: D, dimension of the single-particle internal space.
  """
  num_particles: int
  num_modes: int
  internal_dim: int

  def __post_init__(self):
    if self.num_particles < 1:
      raise ValueError(
          f'Need at least one particle, got {self.num_particles}')
    if self.num_modes < 1 or self.internal_dim < 1:
      raise ValueError(
          'Mode and internal dimensions must be positive, got '
          f'M={self.num_modes}, D={self.internal_dim}')

  @property
  def dimension(self) -> int:
    return (self.num_modes * self.internal_dim) ** self.num_particles

  @property
  def factor_shape(self) -> List[int]:
    return [self.num_modes, self.internal_dim] * self.num_particles

  @property
  def blocked_shape(self) -> List[int]:
    """All mode factors first, then all internal factors."""
    return ([self.num_modes] * self.num_particles
            + [self.internal_dim] * self.num_particles)

  def mode_axis(self, particle: int) -> int:
    return 2 * particle

  def internal_axis(self, particle: int) -> int:
    return 2 * particle + 1


def validate_permutation(sigma: Sequence[int], num_particles: int):
  """Checks that `sigma` permutes `0, ..., N-1`."""
  if len(sigma) != num_particles:
    raise ValueError(
        f'Permutation {tuple(sigma)} has length {len(sigma)} '
        f'but the state holds {num_particles} particles')
  if sorted(sigma) != list(range(num_particles)):
    raise ValueError(
        f'{tuple(sigma)} is not a permutation of {num_particles} elements')


def inverse_permutation(sigma: Sequence[int]) -> List[int]:
  inverse = [0] * len(sigma)
  for a, s in enumerate(sigma):
    inverse[s] = a
  return inverse


def permutation_ops(layout: FactorLayout, sigma: Sequence[int],
                    space: str) -> List[tensor_ops.TensorOp]:
  """Compiles `P_sigma` acting on the chosen factors.

  `P_sigma |k_1, ..., k_N> = |k_{sigma^-1(1)}, ..., k_{sigma^-1(N)}>`, so
  output slot `a` takes the factor of input particle `sigma^-1(a)`.

  Args:
    layout: Shape of the state.
    sigma: Permutation of particle labels, zero-based.
    space: 'modes', 'internal' or 'both'.

  Returns:
    Unoptimised ops mapping a flat state vector to the permuted flat vector.
  """
  if space not in SPACES:
    raise ValueError(f'Unknown space {space!r}, expected one of {SPACES}')
  validate_permutation(sigma, layout.num_particles)
  inverse = inverse_permutation(sigma)
  perm = []
  for a in range(layout.num_particles):
    source = inverse[a]
    perm.append(layout.mode_axis(source if space != INTERNAL else a))
    perm.append(layout.internal_axis(source if space != MODES else a))
  return [
      tensor_ops.Reshape(shape=layout.factor_shape),
      tensor_ops.Transpose(perm=perm),
      tensor_ops.Reshape(shape=[layout.dimension]),
  ]


def network_ops(layout: FactorLayout,
                network: np.ndarray) -> List[tensor_ops.TensorOp]:
  """Compiles `U^{(x)N} (x) I` for the single-particle map `|k> -> U[k,l]|l>`.

  Args:
    layout: Shape of the state.
    network: `M x M` matrix `U`.

  Returns:
    Unoptimised ops acting on a flat state vector.
  """
  network = np.asarray(network)
  if network.shape != (layout.num_modes, layout.num_modes):
    raise ValueError(
        f'Network of shape {network.shape} does not act on '
        f'{layout.num_modes} modes')
  # Amplitudes transform with the transpose: psi'[l] = sum_k U[k, l] psi[k].
  transposed = network.T
  ops: List[tensor_ops.TensorOp] = [
      tensor_ops.Reshape(shape=layout.factor_shape)]
  for a in range(layout.num_particles):
    ops.append(tensor_ops.Contract(matrix=transposed, axis=layout.mode_axis(a)))
  ops.append(tensor_ops.Reshape(shape=[layout.dimension]))
  return ops


def blocked_to_interleaved_ops(layout: FactorLayout
                               ) -> List[tensor_ops.TensorOp]:
  """Maps `|modes>|internal>` (modes block first) to the particle layout."""
  n = layout.num_particles
  perm = []
  for a in range(n):
    perm.extend([a, n + a])
  return [
      tensor_ops.Reshape(shape=layout.blocked_shape),
      tensor_ops.Transpose(perm=perm),
      tensor_ops.Reshape(shape=[layout.dimension]),
  ]


def interleaved_to_blocked_ops(layout: FactorLayout
                               ) -> List[tensor_ops.TensorOp]:
  """Maps the particle layout to a `[M**N, D**N]` modes-by-internal matrix."""
  n = layout.num_particles
  perm = ([layout.mode_axis(a) for a in range(n)]
          + [layout.internal_axis(a) for a in range(n)])
  return [
      tensor_ops.Reshape(shape=layout.factor_shape),
      tensor_ops.Transpose(perm=perm),
      tensor_ops.Reshape(shape=[layout.num_modes ** n,
                                layout.internal_dim ** n]),
  ]


def mode_index(layout: FactorLayout, modes: Sequence[Any]) -> int:
  """Row of `modes` in the `[M**N, D**N]` blocked matrix."""
  return int(np.ravel_multi_index(
      tuple(modes), [layout.num_modes] * layout.num_particles))
