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

"""Tensor-op backend for numpy."""

from typing import Sequence

from duality_sampler.src import backend
from duality_sampler.src import tensor_ops
import numpy as np


class NumpyBackend(backend.Backend[np.ndarray]):
  """Numpy implementation of tensor ops."""

  def reshape(self, x: np.ndarray, op: tensor_ops.Reshape) -> np.ndarray:
    return np.reshape(x, op.shape)

  def transpose(
      self, x: np.ndarray, op: tensor_ops.Transpose) -> np.ndarray:
    return np.transpose(x, axes=op.perm)

  def contract(
      self, x: np.ndarray, op: tensor_ops.Contract) -> np.ndarray:
    y = np.tensordot(op.matrix, x, axes=([1], [op.axis]))
    return np.moveaxis(y, 0, op.axis)

  def shape(self, x: np.ndarray) -> Sequence[int]:
    return x.shape


def run(ops: Sequence[tensor_ops.TensorOp], value) -> np.ndarray:
  """Executes `ops` on `value`, converting it to an array first."""
  if not isinstance(value, np.ndarray):
    value = np.array(value)
  return NumpyBackend().exec(ops, value)
