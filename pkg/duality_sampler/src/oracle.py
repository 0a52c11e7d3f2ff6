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

"""Brute-force first-quantization oracle.

States of `N` particles live in `H^{(x)N} (x) K^{(x)N}`, `H` the `M`-dimensional
mode space acted on by networks and `K` the `D`-dimensional internal space left
untouched. Symmetrizers, network action and the internal-state-blind particle
counting POVM are evaluated on dense vectors (see `engine.FactorLayout` for the
index layout); dense operators are only formed by the `verify_*` identities.
"""

import enum
import functools
import itertools
import json
import math
from typing import Any, Dict, Optional, Sequence, Tuple, Union

from absl import logging
import dataclasses
import numpy as np

from duality_sampler.src import config
from duality_sampler.src import engine
from duality_sampler.src import fock
from duality_sampler.src import matrices
from duality_sampler.src.numpy import numpy_ops


MODES = engine.MODES
INTERNAL = engine.INTERNAL
BOTH = engine.BOTH


class VanishingStateError(ValueError):
  """Raised when a symmetrized state has (numerically) zero norm."""


class SymmetryFlag(enum.Enum):
  """Permutation character: S (always +1) or A (the permutation's sign)."""
  S = 'S'
  A = 'A'

  def __mul__(self, other: 'SymmetryFlag') -> 'SymmetryFlag':
    return SymmetryFlag.S if self is other else SymmetryFlag.A

  @classmethod
  def parse(cls, text: str) -> 'SymmetryFlag':
    try:
      return cls(text.strip().upper())
    except ValueError:
      raise ValueError(f'Symmetry flag must be S or A, got {text!r}') from None

  def character(self, sigma: Sequence[int]) -> int:
    """`eps(sigma)`: 1 for S, `sgn(sigma)` for A."""
    if self is SymmetryFlag.S:
      return 1
    return permutation_sign(sigma)


def permutation_sign(sigma: Sequence[int]) -> int:
  inversions = sum(1 for i, j in itertools.combinations(range(len(sigma)), 2)
                   if sigma[i] > sigma[j])
  return -1 if inversions % 2 else 1


@functools.lru_cache(maxsize=None)
def _permutations(num_particles: int) -> Tuple[Tuple[int, ...], ...]:
  return tuple(itertools.permutations(range(num_particles)))


def _check_caps(layout: engine.FactorLayout):
  if layout.num_particles > config.MAX_ORACLE_PARTICLES:
    raise config.CapExceededError(
        f'Oracle holds at most {config.MAX_ORACLE_PARTICLES} particles, '
        f'got {layout.num_particles}')
  if layout.dimension > config.MAX_ORACLE_DIMENSION:
    raise config.CapExceededError(
        f'Oracle state dimension (M*D)^N = {layout.dimension} exceeds the '
        f'cap of {config.MAX_ORACLE_DIMENSION}')


@functools.lru_cache(maxsize=256)
def _permutation_index(layout: engine.FactorLayout, sigma: Tuple[int, ...],
                       space: str) -> np.ndarray:
  """Gather index `g` with `(P_sigma psi)[i] = psi[g[i]]`."""
  ops = engine.permutation_ops(layout, sigma, space)
  index = numpy_ops.run(ops, np.arange(layout.dimension))
  index.setflags(write=False)
  return index


@functools.lru_cache(maxsize=64)
def _interleave_index(layout: engine.FactorLayout) -> np.ndarray:
  """Gather index taking a modes-block-first vector to the particle layout."""
  ops = engine.blocked_to_interleaved_ops(layout)
  index = numpy_ops.run(ops, np.arange(layout.dimension))
  index.setflags(write=False)
  return index


@dataclasses.dataclass(frozen=True, eq=False)
class InternalStateSet:
  """Internal states `|phi_1>, ..., |phi_N>` and their Gram matrix.

  Attributes:
    vectors: `[N, D]` array of unit vectors, one row per particle.
    gram: `G[a, b] = <phi_a|phi_b>`.
  """
  vectors: np.ndarray
  gram: np.ndarray = dataclasses.field(init=False)

  def __post_init__(self):
    vectors = np.array(self.vectors, dtype=np.complex128)
    if vectors.ndim != 2 or vectors.shape[0] < 1:
      raise ValueError(
          f'Internal states must form an [N, D] array, got {vectors.shape}')
    norms = np.linalg.norm(vectors, axis=1)
    if np.max(np.abs(norms - 1.0)) > config.IDENTITY_TOLERANCE:
      raise ValueError(f'Internal states must be unit vectors, norms {norms}')
    vectors.setflags(write=False)
    gram = vectors.conj() @ vectors.T
    gram.setflags(write=False)
    object.__setattr__(self, 'vectors', vectors)
    object.__setattr__(self, 'gram', gram)

  @property
  def num_particles(self) -> int:
    return self.vectors.shape[0]

  @property
  def dimension(self) -> int:
    return self.vectors.shape[1]

  @classmethod
  def orthonormal(cls, num_particles: int,
                  dimension: Optional[int] = None) -> 'InternalStateSet':
    """Standard basis vectors `e_1, ..., e_N` of `C^D`, `D >= N`."""
    dimension = num_particles if dimension is None else dimension
    if dimension < num_particles:
      raise ValueError(
          f'{num_particles} orthonormal states need D >= {num_particles}, '
          f'got {dimension}')
    return cls(np.eye(num_particles, dimension))

  @classmethod
  def identical(cls, num_particles: int,
                dimension: int = 1) -> 'InternalStateSet':
    """Every particle in the same internal state `e_1`."""
    return cls(np.tile(np.eye(1, dimension), (num_particles, 1)))

  @classmethod
  def pairwise_overlap(cls, g: complex) -> 'InternalStateSet':
    """Two states in `C^2` with `<phi_1|phi_2> = g`, `|g| <= 1`."""
    if abs(g) > 1.0 + config.IDENTITY_TOLERANCE:
      raise ValueError(f'Overlap must satisfy |g| <= 1, got {g}')
    rest = math.sqrt(max(0.0, 1.0 - abs(g) ** 2))
    return cls(np.array([[1.0, 0.0], [g, rest]]))

  @classmethod
  def random(cls, num_particles: int, dimension: int,
             seed: Any) -> 'InternalStateSet':
    """Normalized complex Gaussian vectors; independent when `D >= N`."""
    rng = np.random.default_rng(seed)
    z = (rng.standard_normal((num_particles, dimension))
         + 1j * rng.standard_normal((num_particles, dimension)))
    return cls(z / np.linalg.norm(z, axis=1, keepdims=True))

  def to_json(self) -> Dict[str, Any]:
    return {
        'D': self.dimension,
        'vectors': [[[float(z.real), float(z.imag)] for z in row]
                    for row in self.vectors],
    }

  @classmethod
  def from_json(cls, obj: Dict[str, Any]) -> 'InternalStateSet':
    try:
      dimension = int(obj['D'])
      vectors = [[complex(float(re), float(im)) for re, im in row]
                 for row in obj['vectors']]
    except (KeyError, TypeError, ValueError) as e:
      raise ValueError(f'Malformed internal-state JSON: {e}') from None
    result = cls(np.array(vectors, dtype=np.complex128))
    if result.dimension != dimension:
      raise ValueError(
          f'Internal JSON declares D={obj["D"]} but vectors have dimension '
          f'{result.dimension}')
    return result


def load_internal_states(path: str) -> InternalStateSet:
  with open(path, 'r') as f:
    return InternalStateSet.from_json(json.load(f))


@dataclasses.dataclass(frozen=True, eq=False)
class LabeledStateVector:
  """Amplitudes over the product basis `|k_1 j_1> ... |k_N j_N>`.

  Attributes:
    amplitudes: Flat complex vector of length `(M*D)**N`.
    num_modes: M.
    internal_dim: D.
    num_particles: N.
    mode_symmetry: When known, the flag `e` with `(P_sigma (x) I)|psi> =
      e(sigma)|psi>` for all `sigma`; None for states of labelled particles.
  """
  amplitudes: np.ndarray
  num_modes: int
  internal_dim: int
  num_particles: int
  mode_symmetry: Optional[SymmetryFlag] = None

  def __post_init__(self):
    _check_caps(self.layout)
    amplitudes = np.array(self.amplitudes, dtype=np.complex128).reshape(-1)
    if amplitudes.shape[0] != self.layout.dimension:
      raise ValueError(
          f'State has {amplitudes.shape[0]} amplitudes, expected '
          f'(M*D)^N = {self.layout.dimension}')
    amplitudes.setflags(write=False)
    object.__setattr__(self, 'amplitudes', amplitudes)

  @property
  def layout(self) -> engine.FactorLayout:
    return engine.FactorLayout(self.num_particles, self.num_modes,
                               self.internal_dim)

  @property
  def norm(self) -> float:
    return float(np.linalg.norm(self.amplitudes))

  def replace(self, amplitudes: np.ndarray, **changes) -> 'LabeledStateVector':
    return dataclasses.replace(self, amplitudes=amplitudes, **changes)


def _product_vector(modes: Sequence[int], internal: InternalStateSet,
                    num_modes: int) -> np.ndarray:
  """`|k_1, phi_1> (x) ... (x) |k_N, phi_N>` in the particle layout."""
  vector = np.ones(1, dtype=np.complex128)
  for k, phi in zip(modes, internal.vectors):
    mode = np.zeros(num_modes)
    mode[k] = 1.0
    vector = np.kron(vector, np.kron(mode, phi))
  return vector


def _check_input(n: fock.OccupationVector, internal: InternalStateSet):
  if n.total != internal.num_particles:
    raise ValueError(
        f'Input {n} holds {n.total} particles but {internal.num_particles} '
        'internal states were given')


def build_product_state(n: fock.OccupationVector,
                        internal: InternalStateSet) -> LabeledStateVector:
  """Unsymmetrized `|k, phi>` of labelled (non-identical) particles."""
  _check_input(n, internal)
  return LabeledStateVector(
      _product_vector(n.modes(), internal, n.num_modes),
      n.num_modes, internal.dimension, n.total)


def permutation_operator(sigma: Sequence[int], space: str, num_modes: int,
                         internal_dim: int) -> np.ndarray:
  """Dense `P_sigma` on the modes, internal or both factors."""
  layout = engine.FactorLayout(len(sigma), num_modes, internal_dim)
  _check_caps(layout)
  index = _permutation_index(layout, tuple(sigma), space)
  return np.eye(layout.dimension, dtype=np.complex128)[index]


def permute(state: LabeledStateVector, sigma: Sequence[int],
            space: str) -> LabeledStateVector:
  """Applies `P_sigma` to the chosen factors of `state`."""
  index = _permutation_index(state.layout, tuple(sigma), space)
  return state.replace(state.amplitudes[index])


def symmetrizer(epsilon: SymmetryFlag, space: str, num_particles: int,
                num_modes: int, internal_dim: int) -> np.ndarray:
  """Dense `(1/N!) sum_sigma eps(sigma) P_sigma` on the chosen factors.

  Args:
    epsilon: Symmetry flag.
    space: 'modes' (S (x) I), 'internal' (I (x) S) or 'both' (S).
    num_particles: N.
    num_modes: M.
    internal_dim: D.

  Returns:
    Operator on the full `(M*D)**N`-dimensional space.
  """
  layout = engine.FactorLayout(num_particles, num_modes, internal_dim)
  _check_caps(layout)
  dim = layout.dimension
  rows = np.arange(dim)
  result = np.zeros((dim, dim), dtype=np.complex128)
  perms = _permutations(num_particles)
  for sigma in perms:
    index = _permutation_index(layout, sigma, space)
    result[rows, index] += epsilon.character(sigma)
  return result / len(perms)


def symmetrize(amplitudes: np.ndarray, layout: engine.FactorLayout,
               epsilon: SymmetryFlag, space: str) -> np.ndarray:
  """Applies the symmetrizer to a flat vector without forming it."""
  perms = _permutations(layout.num_particles)
  result = np.zeros(layout.dimension, dtype=np.complex128)
  for sigma in perms:
    index = _permutation_index(layout, sigma, space)
    result += epsilon.character(sigma) * amplitudes[index]
  return result / len(perms)


def verify_projector_identity(eps1: SymmetryFlag, eps2: SymmetryFlag,
                              num_modes: int, internal_dim: int,
                              num_particles: int) -> float:
  """Deviation of `(I (x) S_e2) S_e1` from `S_{e1 e2} (x) S_e2`.

  Also checks the intermediate form `(I (x) S_e2)(S_{e1 e2} (x) I)`; the
  larger Frobenius deviation is returned.
  """
  args = (num_particles, num_modes, internal_dim)
  internal = symmetrizer(eps2, INTERNAL, *args)
  whole = symmetrizer(eps1, BOTH, *args)
  modes = symmetrizer(eps1 * eps2, MODES, *args)
  lhs = internal @ whole
  deviation = max(np.linalg.norm(lhs - modes @ internal),
                  np.linalg.norm(lhs - internal @ modes))
  return float(deviation)


def normalization_constant(internal: InternalStateSet,
                           eps2: SymmetryFlag) -> float:
  """`c` with `c^-2 = (1/N!) sum_sigma eps2(sigma) prod_a G[a, sigma(a)]`."""
  gram = matrices.ComplexMatrix(internal.gram)
  if eps2 is SymmetryFlag.S:
    value = matrices.permanent(gram)
  else:
    value = matrices.determinant(gram)
  argument = value.real / math.factorial(internal.num_particles)
  if argument <= config.VANISHING_THRESHOLD:
    kind = 'per' if eps2 is SymmetryFlag.S else 'det'
    raise VanishingStateError(
        f'Vanishing symmetrized internal state: {kind}(G) = {value.real:.3e}')
  return argument ** -0.5


def fock_mode_state(n: fock.OccupationVector,
                    epsilon: SymmetryFlag) -> np.ndarray:
  """`||n^(e)>> = sqrt(N!/mu(n)) S_e |k>` on the mode space `H^{(x)N}` alone."""
  layout = engine.FactorLayout(n.total, n.num_modes, 1)
  basis = _product_vector(n.modes(), InternalStateSet.identical(n.total),
                          n.num_modes)
  scale = math.sqrt(math.factorial(n.total) / fock.multiplicity(n))
  return scale * symmetrize(basis, layout, epsilon, MODES)


def _symmetrized_internal(internal: InternalStateSet,
                          epsilon: SymmetryFlag) -> np.ndarray:
  """`|phi^(e)> = S_e |phi_1, ..., phi_N>` on `K^{(x)N}` alone."""
  n = internal.num_particles
  layout = engine.FactorLayout(n, internal.dimension, 1)
  vector = np.ones(1, dtype=np.complex128)
  for phi in internal.vectors:
    vector = np.kron(vector, phi)
  return symmetrize(vector, layout, epsilon, MODES)


def _interleave(mode_vector: np.ndarray, internal_vector: np.ndarray,
                layout: engine.FactorLayout) -> np.ndarray:
  blocked = np.kron(mode_vector, internal_vector)
  return blocked[_interleave_index(layout)]


def build_epsilon_state(n: fock.OccupationVector, internal: InternalStateSet,
                        eps1: SymmetryFlag,
                        eps2: SymmetryFlag) -> LabeledStateVector:
  """Builds `c_e2 sqrt(N!/mu(n)) (I (x) S_e2) S_e1 |k, phi>`.

  The result equals `c_e2 ||n^(e1 e2)>> |phi^(e2)>`; that factorized form is
  checked against the symmetrized construction.

  Args:
    n: Input configuration; single occupancy when `e1 e2 = A`.
    internal: One internal state per particle; linearly independent when
      `e2 = A`.
    eps1: Particle species symmetry (S bosons, A fermions).
    eps2: Symmetry of the internal-state factor.

  Returns:
    Unit-norm state with `mode_symmetry = e1 e2`.

  Raises:
    VanishingStateError: The symmetrized state is null.
  """
  _check_input(n, internal)
  layout = engine.FactorLayout(n.total, n.num_modes, internal.dimension)
  _check_caps(layout)
  effective = eps1 * eps2
  if effective is SymmetryFlag.A and not n.is_single_occupancy:
    doubled = [k + 1 for k, c in enumerate(n.counts) if c > 1]
    raise VanishingStateError(
        f'Vanishing symmetrized state: effective symmetry A with mode(s) '
        f'{doubled} of {n} occupied more than once')
  if eps2 is SymmetryFlag.A:
    det_g = matrices.determinant(matrices.ComplexMatrix(internal.gram)).real
    if det_g <= config.INDEPENDENCE_THRESHOLD:
      raise VanishingStateError(
          f'Vanishing symmetrized state: internal states are not linearly '
          f'independent, det(G) = {det_g:.3e}')
  c = normalization_constant(internal, eps2)
  scale = c * math.sqrt(math.factorial(n.total) / fock.multiplicity(n))
  amplitudes = _product_vector(n.modes(), internal, n.num_modes)
  amplitudes = symmetrize(amplitudes, layout, eps1, BOTH)
  amplitudes = scale * symmetrize(amplitudes, layout, eps2, INTERNAL)

  factorized = c * _interleave(fock_mode_state(n, effective),
                               _symmetrized_internal(internal, eps2), layout)
  deviation = float(np.linalg.norm(amplitudes - factorized))
  if deviation > config.IDENTITY_TOLERANCE:
    raise config.ContractViolation(
        f'Symmetrized state differs from its factorized form by '
        f'{deviation:.3e}')
  norm = float(np.linalg.norm(amplitudes))
  if norm <= config.VANISHING_THRESHOLD:
    raise VanishingStateError(f'Vanishing symmetrized state: norm {norm:.3e}')
  return LabeledStateVector(amplitudes / norm, n.num_modes,
                            internal.dimension, n.total,
                            mode_symmetry=effective)


def build_unentangled_state(n: fock.OccupationVector,
                            internal: InternalStateSet,
                            eps1: SymmetryFlag) -> LabeledStateVector:
  """Normalized `S_e1 |k, phi>`: identical particles, no internal entanglement.

  For `N = 2` with overlap `g` the coincidence probability on a balanced
  splitter is `(1 - e1 |g|^2) / 2`.
  """
  _check_input(n, internal)
  layout = engine.FactorLayout(n.total, n.num_modes, internal.dimension)
  _check_caps(layout)
  amplitudes = symmetrize(_product_vector(n.modes(), internal, n.num_modes),
                          layout, eps1, BOTH)
  norm = float(np.linalg.norm(amplitudes))
  if norm <= config.VANISHING_THRESHOLD:
    raise VanishingStateError(
        f'Vanishing symmetrized state: S_{eps1.value}|k, phi> has norm '
        f'{norm:.3e}')
  return LabeledStateVector(amplitudes / norm, n.num_modes,
                            internal.dimension, n.total)


def apply_network(state: LabeledStateVector,
                  u: matrices.ComplexMatrix) -> LabeledStateVector:
  """Applies `U^{(x)N} (x) I`; internal factors are untouched."""
  if u.rows != state.num_modes or not u.is_square:
    raise ValueError(
        f'Network of shape {u.rows}x{u.cols} does not act on '
        f'{state.num_modes} modes')
  if not u.unitary:
    deviation = matrices.unitarity_deviation(u.entries)
    if deviation >= config.UNITARY_TOLERANCE:
      raise matrices.NotUnitaryError(
          f'Network is not unitary: |U^dag U - I|_F = {deviation:.3e}')
  amplitudes = numpy_ops.run(engine.network_ops(state.layout, u.entries),
                             state.amplitudes)
  result = state.replace(amplitudes)
  drift = abs(result.norm - state.norm)
  if drift > config.NORMALIZATION_TOLERANCE:
    raise config.ContractViolation(
        f'Network action changed the norm by {drift:.3e}')
  return result


def mode_marginals(state: LabeledStateVector) -> np.ndarray:
  """`sum_j |<k, j|psi>|^2` as an `[M] * N` tensor over mode patterns."""
  blocked = numpy_ops.run(engine.interleaved_to_blocked_ops(state.layout),
                          state.amplitudes)
  weights = np.sum(np.abs(blocked) ** 2, axis=1)
  return weights.reshape([state.num_modes] * state.num_particles)


def _check_configuration(state: LabeledStateVector, m: fock.OccupationVector):
  if m.num_modes != state.num_modes:
    raise ValueError(
        f'Configuration {m} does not match {state.num_modes} modes')
  if m.total != state.num_particles:
    raise ValueError(
        f'Particle number mismatch: {m} has {m.total} particles, the state '
        f'holds {state.num_particles}')


def povm_probability(state: LabeledStateVector,
                     m: fock.OccupationVector,
                     marginals: Optional[np.ndarray] = None) -> float:
  """Probability of counting configuration `m` without resolving internals.

  For mode-symmetric states this is `<psi|Pi_l|psi>` with
  `Pi_l = (N!/mu(m)) |l><l| (x) I`. For labelled particles the particle labels
  are forgotten: the counts of every distinct ordering of `l` are summed.

  Args:
    state: Normalized state.
    m: Output configuration with `|m| = N`.
    marginals: Precomputed `mode_marginals(state)`, optional.

  Returns:
    The probability of `m`.
  """
  _check_configuration(state, m)
  if marginals is None:
    marginals = mode_marginals(state)
  pattern = m.modes()
  if state.mode_symmetry is not None:
    weight = math.factorial(m.total) / fock.multiplicity(m)
    return float(weight * marginals[pattern])
  orderings = set(itertools.permutations(pattern))
  return float(sum(marginals[l] for l in orderings))


def _pattern_mask(layout: engine.FactorLayout,
                  m: fock.OccupationVector) -> np.ndarray:
  """Indicator of basis states whose mode pattern is `l` (ascending)."""
  mask = np.zeros(layout.dimension)
  blocked = numpy_ops.run(engine.interleaved_to_blocked_ops(layout),
                          np.arange(layout.dimension))
  mask[blocked[engine.mode_index(layout, m.modes())]] = 1.0
  return mask


def pattern_projector(m: fock.OccupationVector,
                      internal_dim: int) -> np.ndarray:
  """Dense `Pi_l = (N!/mu(m)) |l><l| (x) I`."""
  layout = engine.FactorLayout(m.total, m.num_modes, internal_dim)
  _check_caps(layout)
  weight = math.factorial(m.total) / fock.multiplicity(m)
  return np.diag(weight * _pattern_mask(layout, m)).astype(np.complex128)


def povm_element(m: fock.OccupationVector, epsilon: SymmetryFlag,
                 internal_dim: int) -> np.ndarray:
  """Dense `Pi^(e)(m) = S_e Pi_l S_e`."""
  s = symmetrizer(epsilon, BOTH, m.total, m.num_modes, internal_dim)
  return s @ pattern_projector(m, internal_dim) @ s


def mode_symmetry_of(amplitudes: np.ndarray,
                     layout: engine.FactorLayout) -> Optional[SymmetryFlag]:
  """The flag `e` with `(P_tau (x) I)|psi> = e(tau)|psi>` for transpositions."""
  n = layout.num_particles
  transpositions = []
  for a in range(n - 1):
    sigma = list(range(n))
    sigma[a], sigma[a + 1] = a + 1, a
    transpositions.append(tuple(sigma))
  scale = max(float(np.linalg.norm(amplitudes)), 1.0)
  for flag in SymmetryFlag:
    if all(np.linalg.norm(
        amplitudes[_permutation_index(layout, tau, MODES)]
        - flag.character(tau) * amplitudes) <= config.IDENTITY_TOLERANCE * scale
           for tau in transpositions):
      return flag
  return None


def povm_collapse(state: LabeledStateVector, m: fock.OccupationVector,
                  epsilon: SymmetryFlag
                  ) -> Tuple[float, LabeledStateVector]:
  """Non-demolition count of `m`: returns `(p, Pi^(e)(m)|psi> / sqrt(p))`."""
  _check_configuration(state, m)
  layout = state.layout
  weight = math.factorial(m.total) / fock.multiplicity(m)
  projected = symmetrize(state.amplitudes, layout, epsilon, BOTH)
  projected = weight * _pattern_mask(layout, m) * projected
  projected = symmetrize(projected, layout, epsilon, BOTH)
  probability = float(np.vdot(state.amplitudes, projected).real)
  norm = float(np.linalg.norm(projected))
  if probability <= config.VANISHING_THRESHOLD or (
      norm <= config.VANISHING_THRESHOLD):
    raise VanishingStateError(
        f'Outcome {m} has vanishing probability {probability:.3e}')
  projected = projected / norm
  return probability, state.replace(
      projected, mode_symmetry=mode_symmetry_of(projected, layout))


def verify_povm_completeness(epsilon: SymmetryFlag, num_modes: int,
                             internal_dim: int, num_particles: int) -> float:
  """Deviation of `sum_m Pi^(e)(m)` from `S_e`."""
  total = sum(povm_element(m, epsilon, internal_dim)
              for m in fock.enumerate_configurations(
                  num_modes, num_particles, fermionic=False))
  s = symmetrizer(epsilon, BOTH, num_particles, num_modes, internal_dim)
  return float(np.linalg.norm(total - s))


def verify_povm_commutation(
    num_modes: int, internal_dim: int, num_particles: int,
    m: fock.OccupationVector,
    povm_symmetry: SymmetryFlag = SymmetryFlag.A,
    internal_symmetry: SymmetryFlag = SymmetryFlag.A) -> float:
  """Deviation of `[(I (x) S_e2), Pi^(e1)(m)]` from zero."""
  if m.num_modes != num_modes or m.total != num_particles:
    raise ValueError(
        f'Configuration {m} does not hold {num_particles} particles in '
        f'{num_modes} modes')
  s = symmetrizer(internal_symmetry, INTERNAL, num_particles, num_modes,
                  internal_dim)
  pi = povm_element(m, povm_symmetry, internal_dim)
  return float(np.linalg.norm(s @ pi - pi @ s))


def verify_fock_projector_identity(epsilon: SymmetryFlag, num_modes: int,
                                   internal_dim: int,
                                   num_particles: int) -> float:
  """Max deviation of `(S_e (x) I) Pi_l (S_e (x) I)` from `||m>><<m|| (x) I`."""
  layout = engine.FactorLayout(num_particles, num_modes, internal_dim)
  s = symmetrizer(epsilon, MODES, num_particles, num_modes, internal_dim)
  index = _interleave_index(layout)
  identity = np.eye(internal_dim ** num_particles)
  deviation = 0.0
  for m in fock.enumerate_configurations(num_modes, num_particles,
                                         fermionic=False):
    lhs = s @ pattern_projector(m, internal_dim) @ s
    v = fock_mode_state(m, epsilon)
    rhs = np.kron(np.outer(v, v.conj()), identity)[np.ix_(index, index)]
    deviation = max(deviation, float(np.linalg.norm(lhs - rhs)))
  return deviation


def network_operator(u: matrices.ComplexMatrix, internal_dim: int,
                     num_particles: int) -> np.ndarray:
  """Dense `U^{(x)N} (x) I` in the particle layout."""
  single = np.kron(u.entries.T, np.eye(internal_dim))
  result = np.ones((1, 1), dtype=np.complex128)
  for _ in range(num_particles):
    result = np.kron(result, single)
  return result


def verify_network_commutation(epsilon: SymmetryFlag,
                               u: matrices.ComplexMatrix, internal_dim: int,
                               num_particles: int) -> float:
  """Max deviation of `[U^{(x)N} (x) I, S_epsilon]` over all spaces."""
  w = network_operator(u, internal_dim, num_particles)
  deviation = 0.0
  for space in engine.SPACES:
    s = symmetrizer(epsilon, space, num_particles, u.rows, internal_dim)
    deviation = max(deviation, float(np.linalg.norm(w @ s - s @ w)))
  return deviation


def mode_state_expansion(u: matrices.ComplexMatrix, n: fock.OccupationVector,
                         epsilon: SymmetryFlag
                         ) -> Dict[fock.OccupationVector, complex]:
  """Coefficients of `U^{(x)N} ||n^(e)>>` over the states `||m^(e)>>`.

  These are `per(U[n|m]) / sqrt(mu(n) mu(m))` for S and `det(U[n|m])` for A.
  """
  layout = engine.FactorLayout(n.total, n.num_modes, 1)
  _check_caps(layout)
  image = numpy_ops.run(engine.network_ops(layout, u.entries),
                        fock_mode_state(n, epsilon))
  fermionic = epsilon is SymmetryFlag.A
  return {m: complex(np.vdot(fock_mode_state(m, epsilon), image))
          for m in fock.enumerate_configurations(n.num_modes, n.total,
                                                 fermionic)}


@dataclasses.dataclass(frozen=True)
class EpsilonInput:
  """Recipe for an input state `|Psi^(e2)_e1(n)>`."""
  n: fock.OccupationVector
  internal: InternalStateSet
  eps1: SymmetryFlag
  eps2: SymmetryFlag

  @property
  def effective(self) -> SymmetryFlag:
    return self.eps1 * self.eps2

  def build(self) -> LabeledStateVector:
    return build_epsilon_state(self.n, self.internal, self.eps1, self.eps2)


def statistics_of(flag: Optional[SymmetryFlag]) -> str:
  if flag is None:
    return fock.GENERAL
  return fock.BOSONIC if flag is SymmetryFlag.S else fock.FERMIONIC


def oracle_distribution(source: Union[EpsilonInput, LabeledStateVector],
                        u: matrices.ComplexMatrix) -> fock.OutputDistribution:
  """Output distribution computed entirely in first quantization.

  Args:
    source: A recipe for an epsilon-symmetric input, or a raw state.
    u: Network.

  Returns:
    Distribution over all configurations with `|m| = N`, tagged by the
    state's effective mode symmetry ('general' for labelled particles).
  """
  state = source.build() if isinstance(source, EpsilonInput) else source
  output = apply_network(state, u)
  marginals = mode_marginals(output)
  entries = {}
  for m in fock.enumerate_configurations(output.num_modes,
                                         output.num_particles,
                                         fermionic=False):
    entries[m] = povm_probability(output, m, marginals)
    logging.debug('Oracle p(%s) = %.3e', m, entries[m])
  return fock.OutputDistribution(entries, output.num_particles,
                                 output.num_modes,
                                 statistics_of(state.mode_symmetry))
