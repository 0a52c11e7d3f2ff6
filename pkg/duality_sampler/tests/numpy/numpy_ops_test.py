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

"""Tests for the numpy backend."""

from absl.testing import absltest
from duality_sampler.src import tensor_ops
from duality_sampler.src.numpy import numpy_ops
import numpy as np


class NumpyOpsTest(absltest.TestCase):

  def test_contract_along_middle_axis(self):
    rng = np.random.default_rng(0)
    x = rng.standard_normal((2, 3, 4))
    a = rng.standard_normal((3, 3))
    y = numpy_ops.run([tensor_ops.Contract(matrix=a, axis=1)], x)
    np.testing.assert_allclose(y, np.einsum('lk,ikj->ilj', a, x))

  def test_transpose(self):
    x = np.arange(6).reshape(2, 3)
    y = numpy_ops.run([tensor_ops.Transpose(perm=[1, 0])], x)
    np.testing.assert_array_equal(y, x.T)

  def test_accepts_python_list(self):
    x = [3, 5]  # Python list, not an array.
    y = numpy_ops.run([tensor_ops.Reshape(shape=[2, 1])], x)
    np.testing.assert_array_equal(np.array([[3], [5]]), y)


if __name__ == '__main__':
  absltest.main()
