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

"""Tests for the scattershot simulation."""

import json
import math

from absl.testing import absltest
from absl.testing import parameterized
from duality_sampler.src import config
from duality_sampler.src import fock
from duality_sampler.src import matrices
from duality_sampler.src import scattershot
import numpy as np


def _occ(*counts):
  return fock.OccupationVector(counts)


class BirthdayTest(parameterized.TestCase):

  def test_hundred_modes(self):
    estimate = scattershot.non_bunching_probability(100, 3)
    self.assertAlmostEqual(estimate.exact, 0.9702, delta=1e-12)
    self.assertAlmostEqual(estimate.approximation, 0.97, delta=1e-12)
    self.assertLess(abs(estimate.exact - estimate.approximation), 2.1e-4)

  @parameterized.parameters(
      (5, 1, 1.0), (2, 2, 0.5), (2, 3, 0.0), (4, 2, 0.75))
  def test_values(self, num_modes, num_particles, expected):
    self.assertAlmostEqual(
        scattershot.non_bunching_probability(num_modes, num_particles).exact,
        expected, delta=1e-15)

  def test_falling_factorial(self):
    for num_modes in range(1, 11):
      for num_particles in range(1, num_modes + 1):
        falling = math.perm(num_modes, num_particles)
        self.assertAlmostEqual(
            scattershot.non_bunching_probability(
                num_modes, num_particles).exact,
            falling / num_modes ** num_particles, delta=1e-12)


class HeraldDistributionTest(parameterized.TestCase):

  def test_two_modes(self):
    heralds = scattershot.herald_distribution(
        matrices.fourier_row_network(2), 2)
    self.assertAlmostEqual(heralds.probability(_occ(1, 1)), 0.5, places=12)
    self.assertAlmostEqual(heralds.probability(_occ(2, 0)), 0.25, places=12)

  @parameterized.parameters(
      [(m, n) for m in range(1, 11) for n in range(1, min(4, m) + 1)])
  def test_non_bunched_mass_and_uniformity(self, num_modes, num_particles):
    heralds = scattershot.herald_distribution(
        matrices.fourier_row_network(num_modes), num_particles)
    single = [p for m, p in heralds.entries.items() if m.is_single_occupancy]
    self.assertLen(single, math.comb(num_modes, num_particles))
    self.assertAlmostEqual(
        sum(single),
        scattershot.non_bunching_probability(num_modes, num_particles).exact,
        delta=1e-12)
    expected = scattershot.single_herald_probability(num_modes, num_particles)
    for p in single:
      self.assertAlmostEqual(p, expected, delta=1e-12)


class ConfigTest(absltest.TestCase):

  def test_too_many_particles(self):
    with self.assertRaisesRegex(ValueError, 'N <= M'):
      scattershot.default_config(2, 3, trials=1, seed=0)

  def test_flat_first_row_required(self):
    with self.assertRaisesRegex(ValueError, 'First row'):
      scattershot.ScattershotConfig(
          num_modes=3, num_particles=2,
          v=matrices.ComplexMatrix.identity(3),
          u=matrices.ComplexMatrix.identity(3), trials=1, seed=0)

  def test_non_unitary_network(self):
    with self.assertRaises(matrices.NotUnitaryError):
      scattershot.ScattershotConfig(
          num_modes=2, num_particles=1, v=matrices.beam_splitter(),
          u=matrices.ComplexMatrix([[1, 1], [0, 1]]), trials=1, seed=0)

  def test_negative_seed(self):
    with self.assertRaises(ValueError):
      scattershot.default_config(3, 2, trials=1, seed=-1)


class RunTest(absltest.TestCase):

  def test_identity_network_reproduces_herald(self):
    run = scattershot.run_scattershot(scattershot.ScattershotConfig(
        num_modes=4, num_particles=2, v=matrices.fourier_row_network(4),
        u=matrices.ComplexMatrix.identity(4), trials=200, seed=3))
    self.assertLen(run.records, 200)
    for record in run.records:
      if record.bunched:
        self.assertIsNone(record.output)
      else:
        self.assertEqual(record.output, record.herald)

  def test_monte_carlo_against_exact(self):
    trials = 10000
    run = scattershot.run_scattershot(
        scattershot.default_config(4, 2, trials=trials, seed=0))
    non_bunched = 1.0 - run.discard_rate
    sigma = math.sqrt(0.75 * 0.25 / trials)
    self.assertLess(abs(non_bunched - 0.75), 3 * sigma)
    self.assertEqual(sum(run.herald_counts().values()), trials)

  def test_conditional_outputs_converge(self):
    run = scattershot.run_scattershot(
        scattershot.default_config(4, 2, trials=40000, seed=1))
    tv = run.total_variation()
    self.assertLen(tv, 6)
    for herald, distance in tv.items():
      self.assertLess(distance, 0.05, str(herald))
      self.assertEqual(run.conditionals[herald].statistics, fock.BOSONIC)

  def test_reproducible_and_thread_independent(self):
    cfg = scattershot.default_config(5, 3, trials=300, seed=7)
    serial = scattershot.run_scattershot(cfg, config.Settings(threads=1))
    threaded = scattershot.run_scattershot(cfg, config.Settings(threads=4))
    self.assertEqual(serial.log_lines(), threaded.log_lines())

  def test_log_and_summary(self):
    run = scattershot.run_scattershot(
        scattershot.default_config(3, 2, trials=50, seed=2))
    lines = run.log_lines().splitlines()
    self.assertLen(lines, 50)
    record = json.loads(lines[0])
    self.assertEqual(set(record), {'trial', 'herald', 'bunched', 'output'})
    self.assertEqual(record['trial'], 0)
    summary = run.summary()
    self.assertEqual(summary['trials'], 50)
    self.assertAlmostEqual(summary['expected_discard_rate'], 1 / 3)
    self.assertEqual(sum(summary['herald_counts'].values()), 50)
    json.dumps(summary)


class OracleTest(parameterized.TestCase):

  def test_two_modes(self):
    self.assertLess(
        scattershot.verify_scattershot_oracle(2, 2, 2, seed=0), 1e-10)

  def test_three_modes(self):
    self.assertLess(
        scattershot.verify_scattershot_oracle(3, 2, 2, seed=4), 1e-10)

  def test_pigeonhole(self):
    self.assertLess(
        scattershot.verify_scattershot_oracle(2, 3, 3, seed=1), 1e-10)

  def test_custom_networks(self):
    rng_u = matrices.haar_random_unitary(2, seed=5)
    self.assertLess(
        scattershot.verify_scattershot_oracle(
            2, 2, 3, seed=2, v=matrices.beam_splitter(), u=rng_u), 1e-10)

  def test_herald_probabilities_match(self):
    heralds = scattershot.herald_distribution(
        matrices.fourier_row_network(3), 2)
    self.assertAlmostEqual(sum(heralds.entries.values()), 1.0, delta=1e-12)
    np.testing.assert_allclose(
        [heralds.probability(_occ(1, 1, 0)), heralds.probability(_occ(2, 0, 0))],
        [2 / 9, 1 / 9], atol=1e-12)


if __name__ == '__main__':
  absltest.main()
