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

"""Tests for the abstract tensor ops."""

from absl.testing import absltest
from duality_sampler.src import tensor_ops
import numpy as np


class TensorOpsTest(absltest.TestCase):

  def test_reshape_shape(self):
    op = tensor_ops.Reshape(shape=[2, 3, 2, 3])
    self.assertEqual([2, 3, 2, 3], list(op.transform_shape([36])))

  def test_transpose_shape(self):
    op = tensor_ops.Transpose(perm=[2, 3, 0, 1])
    self.assertEqual([4, 5, 2, 3], op.transform_shape([2, 3, 4, 5]))

  def test_identity_transpose(self):
    self.assertTrue(tensor_ops.Transpose(perm=[0, 1, 2]).is_identity)
    self.assertFalse(tensor_ops.Transpose(perm=[1, 0, 2]).is_identity)

  def test_contract_preserves_shape(self):
    op = tensor_ops.Contract(matrix=np.eye(3), axis=2)
    self.assertEqual([2, 1, 3], op.transform_shape([2, 1, 3]))


if __name__ == '__main__':
  absltest.main()
