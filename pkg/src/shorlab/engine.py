"""Exact simulation of the quantum period-finding subroutine.

Two independent routes to the same measurement statistics:

* a sparse two-register state vector evolved through the actual circuit
  (initialize -> Fourier transform -> modular-exponentiation entangler ->
  Fourier transform -> measure register 1), and
* the closed-form outcome distribution derived from the decomposition
  Q = P*q + r of the register size by the period.

The two must agree entrywise to 1e-9; the test suite enforces this.

The joint state is a sparse map keyed by (register-1 index, register-2
value).  Register 2 never holds more than P distinct values, so the state
has at most Q*P nonzero amplitudes; the dense Q*Q joint space is never
materialized.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .numtheory import DEFAULT_MAX_N, gcd_euclid, smallest_magnitude_residue

Amplitudes = dict[tuple[int, int], complex]


class CapacityError(Exception):
    """Input exceeds the configured desk-scale size cap."""


@dataclass(frozen=True)
class RegisterGeometry:
    """Two L-qubit registers sized for the modulus N: Q = 2**L, N^2 <= Q < 2N^2."""

    N: int
    Q: int
    L: int

    @property
    def omega_angle(self) -> float:
        """Angle 2*pi/Q of the primitive Q-th root of unity used by the transform."""
        return 2.0 * math.pi / self.Q


@dataclass(frozen=True)
class ModExpFunction:
    """The entangler's classical core a -> m**a mod N, periodic in the order of m."""

    m: int
    N: int

    def __post_init__(self) -> None:
        if self.N < 2:
            raise ValueError("modulus must be >= 2")
        if gcd_euclid(self.m % self.N, self.N) != 1:
            raise ValueError(f"base and modulus must be coprime: gcd({self.m}, {self.N}) != 1")

    def __call__(self, a: int) -> int:
        return pow(self.m, a, self.N)


@dataclass
class JointState:
    """Sparse two-register state: amplitudes[(x, v)] with unit 2-norm."""

    geometry: RegisterGeometry
    amplitudes: Amplitudes

    def norm(self) -> float:
        return math.sqrt(sum((a * a.conjugate()).real for a in self.amplitudes.values()))

    def register2_values(self) -> set[int]:
        return {v for (_, v) in self.amplitudes}


@dataclass
class OutcomeDistribution:
    """Measurement distribution over register-1 outcomes y in {0..Q-1}."""

    geometry: RegisterGeometry
    probs: np.ndarray


@dataclass(frozen=True)
class ClosedFormParams:
    """Decomposition Q = P*q + r with 0 <= r < P, and Q0 = P*q."""

    P: int
    Q: int
    q: int
    r: int
    Q0: int


def choose_geometry(n: int, max_n: int = DEFAULT_MAX_N) -> RegisterGeometry:
    """The unique (Q, L) with Q = 2**L and n^2 <= Q < 2n^2."""
    if n < 2:
        raise ValueError("modulus must be >= 2")
    if n > max_n:
        raise CapacityError(f"modulus {n} exceeds the desk-scale cap {max_n}")
    L = (n * n - 1).bit_length()
    Q = 1 << L
    return RegisterGeometry(N=n, Q=Q, L=L)


def geometry_for(n: int, q: int) -> RegisterGeometry:
    """Geometry with an explicit register size; q must be an admissible power of 2."""
    if q < 1 or q & (q - 1):
        raise ValueError(f"register size {q} is not a power of 2")
    if not n * n <= q < 2 * n * n:
        raise ValueError(f"register size {q} violates N^2 <= Q < 2N^2 for N={n}")
    return RegisterGeometry(N=n, Q=q, L=q.bit_length() - 1)


def initialize(geometry: RegisterGeometry) -> JointState:
    """Both registers in |0>: a single unit amplitude at (0, 0)."""
    return JointState(geometry=geometry, amplitudes={(0, 0): 1.0 + 0.0j})


def apply_qft_reg1(state: JointState) -> JointState:
    """Q-point Fourier transform on register 1, one register-2 slice at a time.

    For each fixed register-2 value v the register-1 amplitude slice is
    mapped through Q**-0.5 * sum_x amp[x] * omega**(x*y) with
    omega = e^(2*pi*i/Q).  numpy's inverse FFT uses exactly this positive
    sign convention, so the transform is sqrt(Q) * ifft per slice; the
    test suite pins it against the dense unitary matrix.
    """
    Q = state.geometry.Q
    slices: dict[int, list[tuple[int, complex]]] = {}
    for (x, v), amp in state.amplitudes.items():
        slices.setdefault(v, []).append((x, amp))
    sqrt_q = math.sqrt(Q)
    out: Amplitudes = {}
    for v, entries in slices.items():
        vec = np.zeros(Q, dtype=np.complex128)
        for x, amp in entries:
            vec[x] = amp
        transformed = np.fft.ifft(vec) * sqrt_q
        for y in range(Q):
            out[(y, v)] = complex(transformed[y])
    return JointState(geometry=state.geometry, amplitudes=out)


def apply_hadamard_reg1(state: JointState) -> JointState:
    """One 2-point transform per register-1 qubit (the L-fold Hadamard).

    On |0> this produces the same uniform superposition as the full
    Q-point transform; on other inputs the two differ.
    """
    geometry = state.geometry
    inv_sqrt2 = 1.0 / math.sqrt(2.0)
    amplitudes = dict(state.amplitudes)
    for bit in range(geometry.L):
        mask = 1 << bit
        out: Amplitudes = {}
        for (x, v), amp in amplitudes.items():
            lo, hi = (x & ~mask, v), (x | mask, v)
            sign = -1.0 if x & mask else 1.0
            out[lo] = out.get(lo, 0.0 + 0.0j) + inv_sqrt2 * amp
            out[hi] = out.get(hi, 0.0 + 0.0j) + sign * inv_sqrt2 * amp
        amplitudes = out
    return JointState(geometry=geometry, amplitudes=amplitudes)


def apply_modexp_entangler(state: JointState, f: ModExpFunction) -> JointState:
    """The involutive entangler |x>|l> -> |x>|f(x) - l mod N>.

    A pure basis permutation: amplitudes are re-keyed, never combined, so
    the norm is preserved exactly and applying it twice is the identity.
    On register-2 value 0 it reduces to |x>|0> -> |x>|f(x)>.
    """
    n = f.N
    out: Amplitudes = {}
    for (x, level), amp in state.amplitudes.items():
        if level >= n:
            raise ValueError(f"register-2 value {level} out of range for modulus {n}")
        out[(x, (f(x) - level) % n)] = amp
    return JointState(geometry=state.geometry, amplitudes=out)


def reg1_distribution(state: JointState) -> OutcomeDistribution:
    """Probability of each register-1 outcome: column sums of |amplitude|^2."""
    probs = np.zeros(state.geometry.Q)
    for (x, _), amp in state.amplitudes.items():
        probs[x] += (amp * amp.conjugate()).real
    return OutcomeDistribution(geometry=state.geometry, probs=probs)


def collapse_reg1(state: JointState, y0: int) -> JointState:
    """Project register 1 onto |y0> and renormalize the surviving column."""
    column = {key: amp for key, amp in state.amplitudes.items() if key[0] == y0}
    norm = math.sqrt(sum((a * a.conjugate()).real for a in column.values()))
    if norm == 0.0:
        raise ValueError(f"outcome {y0} has zero probability; collapse undefined")
    return JointState(
        geometry=state.geometry,
        amplitudes={key: amp / norm for key, amp in column.items()},
    )


def measure_reg1(state: JointState, rng: np.random.Generator) -> tuple[int, JointState]:
    """Sample a register-1 outcome by inverse CDF and collapse onto it.

    Zero-probability outcomes are never selected: their cumulative mass is
    flat, so the searchsorted step cannot land on them.
    """
    dist = reg1_distribution(state)
    cumulative = np.cumsum(dist.probs)
    u = rng.random() * cumulative[-1]
    y0 = int(np.searchsorted(cumulative, u, side="right"))
    if y0 >= dist.probs.size or dist.probs[y0] == 0.0:
        y0 = int(np.max(np.nonzero(dist.probs)))
    return y0, collapse_reg1(state, y0)


def period_finding_state(geometry: RegisterGeometry, f: ModExpFunction) -> JointState:
    """Run the full circuit (init, transform, entangle, transform) and return the state."""
    state = initialize(geometry)
    state = apply_qft_reg1(state)
    state = apply_modexp_entangler(state, f)
    return apply_qft_reg1(state)


def simulated_distribution(geometry: RegisterGeometry, f: ModExpFunction) -> OutcomeDistribution:
    """Measurement distribution of the simulated circuit (the stochastic source)."""
    return reg1_distribution(period_finding_state(geometry, f))


def closed_form_params(period: int, q_total: int) -> ClosedFormParams:
    """Split Q = P*q + r, 0 <= r < P, and record Q0 = P*q."""
    if period < 1 or q_total < 1:
        raise ValueError("period and register size must be >= 1")
    q, r = divmod(q_total, period)
    return ClosedFormParams(P=period, Q=q_total, q=q, r=r, Q0=period * q)


def _sin2_pi_ratio(num: int, den: int) -> float:
    # sin^2(pi * num/den) with the integer num reduced mod den first.  The
    # reduction is exact (sin^2 has period pi), keeps the argument in
    # [-pi/2, pi/2], and returns exactly 0.0 whenever den divides num.
    return math.sin(math.pi * smallest_magnitude_residue(num, den) / den) ** 2


def closed_form_prob(y: int, params: ClosedFormParams) -> float:
    """Probability of measuring y, from the two-branch closed form.

    With t = {P*y}_Q (smallest-magnitude residue):

      t != 0:  [r*sin^2(pi*t*(q+1)/Q) + (P-r)*sin^2(pi*t*q/Q)]
                 / (Q^2 * sin^2(pi*t/Q))
      t == 0:  [r*(Q0+P)^2 + (P-r)*Q0^2] / (Q^2 * P^2)

    All sine arguments are integer multiples of pi/Q and are reduced
    exactly before evaluation; unreduced arguments near N*Q would cost
    ~10 digits of precision.
    """
    P, Q, q, r, Q0 = params.P, params.Q, params.q, params.r, params.Q0
    if not 0 <= y < Q:
        raise ValueError(f"outcome {y} outside the sample space of size {Q}")
    t = smallest_magnitude_residue(P * y, Q)
    if t == 0:
        return (r * (Q0 + P) ** 2 + (P - r) * Q0**2) / (Q * Q * P * P)
    numerator = r * _sin2_pi_ratio(t * (q + 1), Q) + (P - r) * _sin2_pi_ratio(t * q, Q)
    return numerator / (Q * Q * _sin2_pi_ratio(t, Q))


def closed_form_distribution(
    params: ClosedFormParams, geometry: RegisterGeometry | None = None
) -> OutcomeDistribution:
    """The closed form evaluated over the whole sample space.

    When no geometry is supplied a placeholder with the largest admissible
    modulus for this register size is attached.
    """
    if geometry is None:
        n = math.isqrt(params.Q)
        geometry = RegisterGeometry(N=n, Q=params.Q, L=params.Q.bit_length() - 1)
    elif geometry.Q != params.Q:
        raise ValueError(f"geometry register size {geometry.Q} != params register size {params.Q}")
    probs = np.array([closed_form_prob(y, params) for y in range(params.Q)])
    return OutcomeDistribution(geometry=geometry, probs=probs)
