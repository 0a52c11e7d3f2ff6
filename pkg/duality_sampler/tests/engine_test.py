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

"""Tests for compiling particle permutations and network actions."""

from absl.testing import absltest
from absl.testing import parameterized
from duality_sampler.src import engine
from duality_sampler.src import matrices
from duality_sampler.src import tensor_ops
from duality_sampler.src.numpy import numpy_ops
import numpy as np


def _basis(layout, index):
  v = np.zeros(layout.dimension)
  v[index] = 1.0
  return v


class FactorLayoutTest(absltest.TestCase):

  def test_shapes(self):
    layout = engine.FactorLayout(num_particles=2, num_modes=3, internal_dim=2)
    self.assertEqual(layout.dimension, 36)
    self.assertEqual(layout.factor_shape, [3, 2, 3, 2])
    self.assertEqual(layout.blocked_shape, [3, 3, 2, 2])
    self.assertEqual(layout.mode_axis(1), 2)
    self.assertEqual(layout.internal_axis(1), 3)

  def test_rejects_empty(self):
    with self.assertRaises(ValueError):
      engine.FactorLayout(0, 2, 2)
    with self.assertRaises(ValueError):
      engine.FactorLayout(2, 0, 2)


class PermutationOpsTest(parameterized.TestCase):

  def test_op_sequence(self):
    layout = engine.FactorLayout(2, 2, 1)
    ops = engine.permutation_ops(layout, [1, 0], engine.MODES)
    self.assertIsInstance(ops[0], tensor_ops.Reshape)
    self.assertIsInstance(ops[1], tensor_ops.Transpose)
    self.assertEqual([2, 1, 0, 3], list(ops[1].perm))
    self.assertEqual([4], list(ops[2].shape))

  def test_swap_two_particles(self):
    layout = engine.FactorLayout(2, 2, 1)
    ops = engine.permutation_ops(layout, [1, 0], engine.BOTH)
    # |0, 1> -> |1, 0>.
    np.testing.assert_array_equal(numpy_ops.run(ops, _basis(layout, 1)),
                                  _basis(layout, 2))

  def test_three_cycle(self):
    layout = engine.FactorLayout(3, 3, 1)
    ops = engine.permutation_ops(layout, [1, 2, 0], engine.MODES)
    # Slot a takes particle sigma^-1(a): |0, 1, 2> -> |2, 0, 1>.
    np.testing.assert_array_equal(numpy_ops.run(ops, _basis(layout, 5)),
                                  _basis(layout, 19))

  @parameterized.parameters(
      (engine.MODES, (1, 1, 0, 0)),
      (engine.INTERNAL, (0, 0, 1, 1)),
      (engine.BOTH, (1, 0, 0, 1)),
  )
  def test_spaces(self, space, expected):
    # Particle 0 in |0, 1>, particle 1 in |1, 0> (mode, internal).
    layout = engine.FactorLayout(2, 2, 2)
    tensor = np.zeros(layout.factor_shape)
    tensor[0, 1, 1, 0] = 1.0
    out = numpy_ops.run(engine.permutation_ops(layout, [1, 0], space),
                        tensor.reshape(-1)).reshape(layout.factor_shape)
    self.assertEqual(out[expected], 1.0)
    self.assertEqual(np.sum(out), 1.0)

  def test_inverse_permutation(self):
    self.assertEqual(engine.inverse_permutation([1, 2, 0]), [2, 0, 1])

  def test_invalid_permutation(self):
    layout = engine.FactorLayout(2, 2, 1)
    with self.assertRaisesRegex(ValueError, 'not a permutation'):
      engine.permutation_ops(layout, [0, 0], engine.MODES)
    with self.assertRaisesRegex(ValueError, 'length'):
      engine.permutation_ops(layout, [0, 1, 2], engine.MODES)
    with self.assertRaisesRegex(ValueError, 'Unknown space'):
      engine.permutation_ops(layout, [0, 1], 'spin')


class NetworkOpsTest(absltest.TestCase):

  def test_single_particle(self):
    u = matrices.haar_random_unitary(3, seed=0).entries
    layout = engine.FactorLayout(1, 3, 2)
    psi = np.random.default_rng(1).standard_normal(6)
    out = numpy_ops.run(engine.network_ops(layout, u), psi)
    expected = np.kron(u.T, np.eye(2)) @ psi
    np.testing.assert_allclose(out, expected, atol=1e-14)

  def test_two_particles(self):
    u = matrices.haar_random_unitary(2, seed=3).entries
    layout = engine.FactorLayout(2, 2, 1)
    psi = np.random.default_rng(2).standard_normal(4)
    out = numpy_ops.run(engine.network_ops(layout, u), psi)
    np.testing.assert_allclose(out, np.kron(u.T, u.T) @ psi, atol=1e-14)

  def test_shape_mismatch(self):
    with self.assertRaisesRegex(ValueError, 'does not act'):
      engine.network_ops(engine.FactorLayout(1, 3, 1), np.eye(2))


class BlockingTest(absltest.TestCase):

  def test_round_trip(self):
    layout = engine.FactorLayout(2, 3, 2)
    mode_vec = np.arange(9.0)
    internal_vec = np.arange(4.0) + 1
    interleaved = numpy_ops.run(engine.blocked_to_interleaved_ops(layout),
                                np.kron(mode_vec, internal_vec))
    blocked = numpy_ops.run(engine.interleaved_to_blocked_ops(layout),
                            interleaved)
    np.testing.assert_array_equal(blocked, np.outer(mode_vec, internal_vec))

  def test_mode_index(self):
    layout = engine.FactorLayout(3, 4, 1)
    self.assertEqual(engine.mode_index(layout, (1, 0, 2)), 18)


if __name__ == '__main__':
  absltest.main()
