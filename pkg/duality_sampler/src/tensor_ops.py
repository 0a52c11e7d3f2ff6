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

"""Abstract ops on first-quantization state tensors.

See `engine.py`. A particle permutation or a network action on an `N`-particle
state is compiled into a sequence of the framework-neutral operations defined
here. Backends interpret them into concrete array ops such as `np.transpose`.
"""

import abc
from typing import Any, Sequence, TypeVar

import dataclasses
import numpy as np


T = TypeVar('T')


class TensorOp(metaclass=abc.ABCMeta):
  """Abstract base class for framework-neutral ops on state tensors."""

  @abc.abstractmethod
  def transform_shape(self, input_shape: Sequence[Any]) -> Sequence[Any]:
    """Returns output shape of op given input shape."""
    raise NotImplementedError('Should be implemented by subclasses')

  @abc.abstractmethod
  def execute(self, backend, x: T) -> T:
    """Evaluates this op on a framework-specific backend.

    Args:
      backend: Provides framework-specific implementations of all ops.
      x: State tensor (or flat state vector).

    Returns:
      Transformed tensor.
    """
    raise NotImplementedError('Should be implemented by subclasses')


@dataclasses.dataclass
class Reshape(TensorOp):
  """Splits or merges tensor factors without reordering amplitudes.

  Attributes:
    shape: New shape for the tensor.
  """
  shape: Sequence[Any]

  def transform_shape(self, input_shape: Sequence[Any]) -> Sequence[Any]:
    del input_shape
    return self.shape

  def execute(self, backend, x: T) -> T:
    return backend.reshape(x, self)


@dataclasses.dataclass
class Transpose(TensorOp):
  """Reorders tensor factors, e.g. the mode factors of two particles.

  Attributes:
    perm: Output axis `i` is input axis `perm[i]`.
  """
  perm: Sequence[int]

  @property
  def is_identity(self) -> bool:
    return list(self.perm) == list(range(len(self.perm)))

  def transform_shape(self, input_shape: Sequence[Any]) -> Sequence[Any]:
    return [input_shape[i] for i in self.perm]

  def execute(self, backend, x: T) -> T:
    return backend.transpose(x, self)


@dataclasses.dataclass(eq=False)
class Contract(TensorOp):
  """Applies a single-factor linear map along one axis.

  Attributes:
    matrix: Square matrix `A`; the new amplitude at index `l` of `axis` is
      `sum_k A[l, k] x[..., k, ...]`.
    axis: Axis the map acts on.
  """
  matrix: np.ndarray
  axis: int

  def transform_shape(self, input_shape: Sequence[Any]) -> Sequence[Any]:
    return list(input_shape)

  def execute(self, backend, x: T) -> T:
    return backend.contract(x, self)
