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

"""Tests for occupation numbers and the permanent/determinant path."""

from absl.testing import absltest
from absl.testing import parameterized
from duality_sampler.src import config
from duality_sampler.src import fock
from duality_sampler.src import matrices
from duality_sampler.tests import test_cases
import numpy as np


def _occ(*counts):
  return fock.OccupationVector(counts)


class OccupationVectorTest(absltest.TestCase):

  def test_parse(self):
    n = fock.OccupationVector.parse('1,1,0')
    self.assertEqual(n.counts, (1, 1, 0))
    self.assertEqual(n.total, 2)
    self.assertEqual(n.num_modes, 3)
    self.assertEqual(str(n), '(1,1,0)')

  def test_parse_malformed(self):
    with self.assertRaisesRegex(ValueError, 'Malformed'):
      fock.OccupationVector.parse('1,x')

  def test_negative(self):
    with self.assertRaises(ValueError):
      _occ(1, -1)

  def test_modes(self):
    self.assertEqual(_occ(2, 0, 1).modes(), (0, 0, 2))
    self.assertEqual(fock.OccupationVector.from_modes([2, 0, 0], 3),
                     _occ(2, 0, 1))

  def test_multiplicity(self):
    self.assertEqual(fock.multiplicity(_occ(2, 1, 0)), 2)
    self.assertEqual(fock.multiplicity(_occ(3)), 6)
    self.assertEqual(fock.multiplicity(_occ(0, 0)), 1)

  def test_multiplicity_overflow(self):
    with self.assertRaises(OverflowError):
      fock.multiplicity(_occ(21))


class EnumerationTest(parameterized.TestCase):

  def test_bosonic_lexicographic(self):
    self.assertEqual(fock.enumerate_configurations(2, 2, fermionic=False),
                     [_occ(0, 2), _occ(1, 1), _occ(2, 0)])

  def test_fermionic(self):
    self.assertEqual(fock.enumerate_configurations(3, 2, fermionic=True),
                     [_occ(0, 1, 1), _occ(1, 0, 1), _occ(1, 1, 0)])

  @parameterized.parameters(
      (1, 1), (3, 2), (4, 4), (6, 3), (5, 0))
  def test_counts(self, num_modes, num_particles):
    for fermionic in (False, True):
      configurations = fock.enumerate_configurations(
          num_modes, num_particles, fermionic)
      self.assertLen(configurations, fock.configuration_count(
          num_modes, num_particles, fermionic))
      self.assertLen(set(configurations), len(configurations))

  def test_too_many_fermions(self):
    with self.assertRaises(fock.PauliExclusionError):
      fock.enumerate_configurations(2, 3, fermionic=True)


class AmplitudeTest(absltest.TestCase):

  def test_bunched_boson_amplitudes(self):
    u = matrices.beam_splitter()
    self.assertAlmostEqual(fock.boson_amplitude(u, _occ(2, 0), _occ(2, 0)),
                           0.5)
    self.assertAlmostEqual(fock.boson_amplitude(u, _occ(2, 0), _occ(1, 1)),
                           2 ** -0.5)

  def test_fermion_amplitude_is_determinant(self):
    u = matrices.haar_random_unitary(3, seed=2)
    self.assertAlmostEqual(
        fock.fermion_amplitude(u, _occ(1, 0, 1), _occ(0, 1, 1)),
        np.linalg.det(u.entries[np.ix_([0, 2], [1, 2])]), places=12)

  def test_pauli_exclusion(self):
    with self.assertRaisesRegex(fock.PauliExclusionError, 'input'):
      fock.fermion_amplitude(matrices.beam_splitter(), _occ(2, 0),
                             _occ(1, 1))

  def test_particle_number_mismatch(self):
    with self.assertRaisesRegex(ValueError, 'Particle number mismatch'):
      fock.boson_amplitude(matrices.beam_splitter(), _occ(1, 1), _occ(1, 0))


class OutputDistributionTest(parameterized.TestCase):

  @parameterized.named_parameters(test_cases.HOM_CASES)
  def test_hong_ou_mandel(self, statistics, expected):
    dist = fock.output_distribution_fast(matrices.beam_splitter(),
                                         _occ(1, 1), statistics)
    self.assertEqual(dist.statistics, statistics)
    self.assertLen(dist.entries, len(expected))
    for counts, p in expected.items():
      self.assertAlmostEqual(dist.probability(_occ(*counts)), p, places=12)

  @parameterized.parameters(fock.BOSONIC, fock.FERMIONIC)
  def test_normalized_for_haar(self, statistics):
    u = matrices.haar_random_unitary(6, seed=5)
    dist = fock.output_distribution_fast(u, _occ(1, 0, 1, 1, 0, 0),
                                         statistics)
    self.assertAlmostEqual(sum(dist.entries.values()), 1.0, delta=1e-10)

  @parameterized.parameters(
      (fock.BOSONIC, (2, 1, 0), (1, 0, 2)),
      (fock.FERMIONIC, (1, 1, 0), (1, 0, 1)),
  )
  def test_permutation_network_is_point_mass(self, statistics, n, m):
    p = matrices.permutation_matrix([2, 0, 1])
    dist = fock.output_distribution_fast(p, _occ(*n), statistics)
    self.assertAlmostEqual(dist.probability(_occ(*m)), 1.0, places=12)
    for other, prob in dist.entries.items():
      if other != _occ(*m):
        self.assertAlmostEqual(prob, 0.0, places=12)

  def test_bunching_below_birthday_bound(self):
    num_modes, num_particles = 18, 3
    n = _occ(*([1] * num_particles + [0] * (num_modes - num_particles)))
    bunched = [
        fock.bunched_probability(fock.output_distribution_fast(
            matrices.haar_random_unitary(num_modes, seed=seed), n,
            fock.BOSONIC))
        for seed in range(30)]
    bound = num_particles * (num_particles - 1) / num_modes
    self.assertLess(np.mean(bunched), bound)

  def test_threads_do_not_change_result(self):
    u = matrices.haar_random_unitary(5, seed=7)
    n = _occ(2, 1, 0, 1, 0)
    serial = fock.output_distribution_fast(u, n, fock.BOSONIC,
                                           config.Settings(threads=1))
    threaded = fock.output_distribution_fast(u, n, fock.BOSONIC,
                                             config.Settings(threads=3))
    self.assertEqual(serial.entries, threaded.entries)

  def test_fermionic_bunched_input(self):
    with self.assertRaises(fock.PauliExclusionError):
      fock.output_distribution_fast(matrices.beam_splitter(), _occ(2, 0),
                                    fock.FERMIONIC)

  def test_bunched_probability(self):
    dist = fock.output_distribution_fast(matrices.beam_splitter(),
                                         _occ(1, 1), fock.BOSONIC)
    self.assertAlmostEqual(fock.bunched_probability(dist), 1.0)

  def test_rejects_unnormalized(self):
    with self.assertRaisesRegex(ValueError, 'sum to'):
      fock.OutputDistribution({_occ(1, 0): 0.5}, 1, 2, fock.GENERAL)

  def test_rejects_fermionic_bunching(self):
    with self.assertRaises(fock.PauliExclusionError):
      fock.OutputDistribution({_occ(2, 0): 1.0}, 2, 2, fock.FERMIONIC)

  def test_deviation_counts_missing_entries(self):
    a = fock.OutputDistribution({_occ(1, 0): 1.0}, 1, 2, fock.GENERAL)
    b = fock.OutputDistribution({_occ(1, 0): 0.25, _occ(0, 1): 0.75}, 1, 2,
                                fock.GENERAL)
    self.assertAlmostEqual(a.max_abs_deviation(b), 0.75)
    self.assertAlmostEqual(a.total_variation(b), 0.75)

  def test_from_counts(self):
    dist = fock.OutputDistribution.from_counts(
        {_occ(1, 0): 3, _occ(0, 1): 1}, 1, 2)
    self.assertEqual(dist.probability(_occ(1, 0)), 0.75)

  def test_json_and_csv(self):
    dist = fock.output_distribution_fast(matrices.beam_splitter(),
                                         _occ(1, 1), fock.BOSONIC)
    restored = fock.OutputDistribution.from_json(dist.to_json())
    self.assertEqual(restored.entries, dist.entries)
    lines = dist.to_csv().splitlines()
    self.assertEqual(lines[0], 'm_1,m_2,p')
    self.assertLen(lines, 4)
    self.assertTrue(lines[1].startswith('0,2,'))


if __name__ == '__main__':
  absltest.main()
