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

"""Tests for the tensor-op optimiser."""

from absl.testing import absltest
from duality_sampler.src import engine
from duality_sampler.src import optimizer
from duality_sampler.src import tensor_ops
import numpy as np


class OptimizerTest(absltest.TestCase):

  def test_redundant_reshape_skipped(self):
    ops = [tensor_ops.Reshape(shape=(2, 3)),
           tensor_ops.Reshape(shape=(6,))]
    opt_ops = optimizer.optimize(ops, (3, 2))

    self.assertLen(opt_ops, 1)
    self.assertEqual(opt_ops[0], ops[1])

  def test_nonredundant_reshape_retained(self):
    ops = [tensor_ops.Reshape(shape=(2, 3)),
           tensor_ops.Transpose(perm=(1, 0)),
           tensor_ops.Reshape(shape=(6,))]
    opt_ops = optimizer.optimize(ops, (6,))

    self.assertLen(opt_ops, 3)
    self.assertEqual(opt_ops, ops)

  def test_noop_reshape_skipped(self):
    ops = [tensor_ops.Reshape(shape=(3, 5))]
    self.assertEmpty(optimizer.optimize(ops, (3, 5)))

  def test_transposes_fused(self):
    ops = [tensor_ops.Transpose(perm=[1, 0, 2]),
           tensor_ops.Transpose(perm=[0, 2, 1])]
    opt_ops = optimizer.optimize(ops, (2, 3, 4))

    self.assertLen(opt_ops, 1)
    self.assertEqual([1, 2, 0], list(opt_ops[0].perm))
    x = np.arange(24).reshape(2, 3, 4)
    np.testing.assert_array_equal(
        np.transpose(np.transpose(x, [1, 0, 2]), [0, 2, 1]),
        np.transpose(x, opt_ops[0].perm))

  def test_inverse_transposes_cancel(self):
    ops = [tensor_ops.Transpose(perm=[1, 2, 0]),
           tensor_ops.Transpose(perm=[2, 0, 1])]
    self.assertEmpty(optimizer.optimize(ops, (2, 3, 4)))

  def test_identity_permutation_compiles_to_nothing(self):
    layout = engine.FactorLayout(3, 2, 2)
    ops = engine.permutation_ops(layout, [0, 1, 2], engine.BOTH)
    self.assertEmpty(optimizer.optimize(ops, (layout.dimension,)))

  def test_contract_retained(self):
    ops = [tensor_ops.Reshape(shape=(2, 2)),
           tensor_ops.Contract(matrix=np.eye(2), axis=0),
           tensor_ops.Reshape(shape=(4,))]
    opt_ops = optimizer.optimize(ops, (4,))

    self.assertLen(opt_ops, 3)
    self.assertIs(opt_ops[1], ops[1])


if __name__ == '__main__':
  absltest.main()
