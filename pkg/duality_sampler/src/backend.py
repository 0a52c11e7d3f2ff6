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

"""Abstract class of backend executing tensor ops."""

import abc

from typing import Generic, Sequence, TypeVar

from duality_sampler.src import optimizer
from duality_sampler.src import tensor_ops

T = TypeVar('T')


class Backend(Generic[T], metaclass=abc.ABCMeta):
  """The backend executes compiled tensor ops on a state tensor."""

  @abc.abstractmethod
  def reshape(self, x: T, op: tensor_ops.Reshape) -> T:
    """The realization of `tensor_ops.Reshape` in a defined backend."""

  @abc.abstractmethod
  def transpose(self, x: T, op: tensor_ops.Transpose) -> T:
    """The realization of `tensor_ops.Transpose` in a defined backend."""

  @abc.abstractmethod
  def contract(self, x: T, op: tensor_ops.Contract) -> T:
    """The realization of `tensor_ops.Contract` in a defined backend."""

  @abc.abstractmethod
  def shape(self, x: T) -> Sequence[int]:
    """Static shape of `x`."""

  def exec(self, ops: Sequence[tensor_ops.TensorOp], value: T) -> T:
    """Runs the optimised op sequence on `value`.

    Args:
      ops: Ops as produced by `engine`.
      value: Tensor or flat state vector.

    Returns:
      Transformed tensor.
    """
    ops = optimizer.optimize(ops, self.shape(value))
    for op in ops:
      value = op.execute(self, value)
    return value
