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

"""Optimises a sequence of abstract `TensorOp`s."""

from typing import Any, List, Sequence

from duality_sampler.src import tensor_ops


def _are_contiguous(ops, op_type):
  return len(ops) > 1 and all(isinstance(op, op_type) for op in ops)


def _elide_intermediate_reshapes(ops):
  return [op for i, op in enumerate(ops)
          if not _are_contiguous(ops[i:i+2], tensor_ops.Reshape)]


def _fuse_transposes(ops):
  fused = []
  for op in ops:
    if fused and _are_contiguous([fused[-1], op], tensor_ops.Transpose):
      first = fused.pop()
      op = tensor_ops.Transpose(perm=[first.perm[i] for i in op.perm])
    fused.append(op)
  return fused


def _elide_identity_transposes(ops):
  return [op for op in ops
          if not (isinstance(op, tensor_ops.Transpose) and op.is_identity)]


def _is_noop_reshape(op, input_shape):
  if isinstance(op, tensor_ops.Reshape):
    return list(op.transform_shape(input_shape)) == list(input_shape)
  return False


def _elide_noop_reshapes(ops, input_shape):
  ops_filtered = []
  for op in ops:
    if not _is_noop_reshape(op, input_shape):
      ops_filtered.append(op)
    input_shape = op.transform_shape(input_shape)
  return ops_filtered


def optimize(
    ops: Sequence[tensor_ops.TensorOp],
    input_shape: Sequence[Any]
    ) -> List[tensor_ops.TensorOp]:
  """Returns an optimised copy of the given sequence of tensor ops.

  For example, the identity permutation compiles to reshape-transpose-reshape
  and optimises to no ops at all.

  Args:
    ops: Sequence of tensor ops.
    input_shape: Shape of tensor going into op sequence.

  Returns: Optimised sequence of tensor ops.
  """
  ops = _fuse_transposes(list(ops))
  ops = _elide_identity_transposes(ops)
  ops = _elide_intermediate_reshapes(ops)
  ops = _elide_noop_reshapes(ops, input_shape)
  return ops
