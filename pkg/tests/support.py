"""Shared oracles and property checks for the test suite.

The oracles here are deliberately independent of the library's own
implementations: naive repeated multiplication instead of
square-and-multiply, bottom-up nested fractions instead of the convergent
recurrence, the dense transform matrix instead of the FFT path.  Property
checks raise AssertionError on violation; the acceptance gate re-runs
them under its time budget.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from shorlab import contfrac, engine
from shorlab.engine import (
    ModExpFunction,
    apply_modexp_entangler,
    apply_qft_reg1,
    choose_geometry,
    initialize,
)

# The (N, m) pairs every distribution-level check sweeps.
PAIRS = [(15, 2), (15, 7), (21, 2), (35, 2), (91, 3)]


def naive_mod_pow(base: int, exponent: int, modulus: int) -> int:
    """e-fold product, no squaring tricks."""
    result = 1
    for _ in range(exponent):
        result = result * base % modulus
    return result


def brute_order(m: int, n: int) -> int:
    x = m % n
    order = 1
    while x != 1:
        x = x * m % n
        order += 1
    return order


def sieve_primes(limit: int) -> list[int]:
    flags = np.ones(limit, dtype=bool)
    flags[:2] = False
    for p in range(2, int(limit**0.5) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    return [int(p) for p in np.nonzero(flags)[0]]


def nested_fraction_value(coefficients) -> Fraction:
    """Evaluate [a0; a1, ..., aN] bottom-up as a nested fraction."""
    value = Fraction(coefficients[-1])
    for a in reversed(coefficients[:-1]):
        value = a + 1 / value
    return value


def dense_transform_matrix(q: int) -> np.ndarray:
    """The Q-point transform as an explicit unitary matrix (test oracle)."""
    indices = np.arange(q)
    return np.exp(2j * np.pi / q * np.outer(indices, indices)) / math.sqrt(q)


def random_sparse_state(geometry, rng, n_entries=24, n_reg2=3):
    """Normalized random state with a few register-2 values occupied."""
    amplitudes = {}
    reg2_values = rng.choice(geometry.N, size=n_reg2, replace=False)
    for v in reg2_values:
        for x in rng.choice(geometry.Q, size=n_entries, replace=False):
            amplitudes[(int(x), int(v))] = complex(
                rng.standard_normal(), rng.standard_normal()
            )
    norm = math.sqrt(sum(abs(a) ** 2 for a in amplitudes.values()))
    return engine.JointState(
        geometry=geometry, amplitudes={k: a / norm for k, a in amplitudes.items()}
    )


def state_as_slices(state) -> dict[int, np.ndarray]:
    slices: dict[int, np.ndarray] = {}
    for (x, v), amp in state.amplitudes.items():
        slices.setdefault(v, np.zeros(state.geometry.Q, dtype=np.complex128))[x] = amp
    return slices


def max_state_diff(a, b) -> float:
    keys = set(a.amplitudes) | set(b.amplitudes)
    return max(abs(a.amplitudes.get(k, 0.0) - b.amplitudes.get(k, 0.0)) for k in keys)


# --- property checks (module tests and the acceptance gate both run these) ---


def check_cf_round_trip_and_determinant(count: int, seed: int = 20260808) -> None:
    """Expansion -> nested evaluation reproduces the input exactly, and
    consecutive convergents satisfy p_n*q_{n-1} - p_{n-1}*q_n = (-1)^(n-1)."""
    rng = np.random.default_rng(seed)
    for _ in range(count):
        den = int(rng.integers(1, 1 << 20))
        num = int(rng.integers(0, 4 * den))
        expansion = contfrac.cf_expand(num, den)
        assert nested_fraction_value(expansion.coefficients) == Fraction(num, den)
        convergents = expansion.convergents
        for n in range(1, len(convergents)):
            p_n, q_n = convergents[n]
            p_prev, q_prev = convergents[n - 1]
            assert p_n * q_prev - p_prev * q_n == (-1) ** (n - 1)


def check_close_approximations_are_convergents(count: int, seed: int = 7) -> None:
    """Any a/b with |c/d - a/b| <= 1/(2b^2) and gcd(a,b)=1 appears among the
    convergents of c/d."""
    rng = np.random.default_rng(seed)
    produced = 0
    while produced < count:
        b = int(rng.integers(1, 1000))
        a = int(rng.integers(0, b + 1))
        if math.gcd(a, b) != 1:
            continue
        # d >= b^2 makes the rounded c satisfy |c/d - a/b| <= 1/(2d) <= 1/(2b^2)
        d = int(rng.integers(b * b, 2 * b * b + 2))
        c = round(a * d / b)
        assert abs(Fraction(c, d) - Fraction(a, b)) <= Fraction(1, 2 * b * b)
        assert contfrac.is_convergent(a, b, c, d)
        produced += 1


def check_qft_unitarity_and_fourth_power(seed: int = 11) -> None:
    """Norm preservation to 1e-12 and F^4 = identity to 1e-9, Q <= 256."""
    rng = np.random.default_rng(seed)
    for n in (4, 9, 15):
        geometry = choose_geometry(n)
        assert geometry.Q <= 256
        for _ in range(3):
            state = random_sparse_state(geometry, rng, n_entries=min(16, geometry.Q // 2))
            once = apply_qft_reg1(state)
            assert abs(once.norm() - state.norm()) < 1e-12
            four = apply_qft_reg1(apply_qft_reg1(apply_qft_reg1(once)))
            assert max_state_diff(four, state) < 1e-9


def check_entangler_involution() -> None:
    """Applying the entangler twice restores the state exactly."""
    for n, m in ((15, 2), (91, 3)):
        geometry = choose_geometry(n)
        f = ModExpFunction(m, n)
        state = apply_qft_reg1(initialize(geometry))
        entangled = apply_modexp_entangler(state, f)
        restored = apply_modexp_entangler(entangled, f)
        assert restored.amplitudes == state.amplitudes
        assert sorted(entangled.amplitudes.values(), key=abs) == sorted(
            state.amplitudes.values(), key=abs
        )


def check_every_factor_divides(seeds=range(4)) -> None:
    """shor_factor never reports a non-divisor."""
    from shorlab import pipeline

    for n in (15, 21, 33, 35):
        for seed in seeds:
            outcome, _ = pipeline.shor_factor(n, pipeline.ShorConfig(rng_seed=seed))
            if outcome.factor is not None:
                assert 1 < outcome.factor < n and n % outcome.factor == 0
