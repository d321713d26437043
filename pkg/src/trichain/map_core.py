"""Core state, parameters, and map of the three-species food chain.

One generation advances prey ``x``, predator ``y`` and top-predator ``z``
densities (normalized to the prey carrying capacity) through

    x' = mu * x * (1 - x - y - z)
    y' = beta * y * (x - z)
    z' = gamma * y * z

Populations are biologically meaningful on the closed simplex
``x, y, z >= 0 and x + y + z <= 1``.  The map itself is total on R^3:
iterates that leave the simplex are reported as escaped and kept exactly
as computed, with no clamping or projection, so callers can inspect the
overshoot.  Membership predicates use exact closed inequalities, no
epsilon.

All arithmetic is plain IEEE-754 double precision and every function here
is pure, so results are bit-reproducible and freely shareable across
threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, NamedTuple

__all__ = [
    "Params",
    "State",
    "Mat3",
    "Trajectory",
    "step",
    "in_simplex",
    "in_domain_E",
    "iterate",
    "iterate_streaming",
    "jacobian",
    "mat3_det",
    "mat3_apply",
    "logistic",
    "damped_logistic",
]

# Parameter cuboid with the biologically interesting dynamics:
# mu in (0, 4], beta in [2.5, 5], gamma in [5, 9.4].
CUBOID_MU_MAX = 4.0
CUBOID_BETA = (2.5, 5.0)
CUBOID_GAMMA = (5.0, 9.4)


class State(NamedTuple):
    """Population triple (prey, predator, top predator)."""

    x: float
    y: float
    z: float


@dataclass(frozen=True)
class Params:
    """Growth/predation rates; all three must be strictly positive.

    ``mu`` is the prey growth rate, ``beta`` the predation/growth rate of
    the mid-level predator, ``gamma`` the predation/growth rate of the top
    predator.
    """

    mu: float
    beta: float
    gamma: float

    def __post_init__(self) -> None:
        if not (self.mu > 0.0 and self.beta > 0.0 and self.gamma > 0.0):
            raise ValueError(
                f"parameters must be strictly positive, got "
                f"({self.mu}, {self.beta}, {self.gamma})"
            )

    def in_cuboid(self) -> bool:
        """True iff (mu, beta, gamma) lies in (0,4] x [2.5,5] x [5,9.4]."""
        return (
            self.mu <= CUBOID_MU_MAX
            and CUBOID_BETA[0] <= self.beta <= CUBOID_BETA[1]
            and CUBOID_GAMMA[0] <= self.gamma <= CUBOID_GAMMA[1]
        )


# Nine entries, row-major.
Mat3 = tuple


def step(s, p: Params) -> State:
    """Apply one generation of the map; no clamping of the result."""
    x, y, z = s
    return State(
        p.mu * x * (1.0 - x - y - z),
        p.beta * y * (x - z),
        p.gamma * y * z,
    )


def in_simplex(s) -> bool:
    """True iff all coordinates are >= 0 and their sum is <= 1 (closed)."""
    x, y, z = s
    return x >= 0.0 and y >= 0.0 and z >= 0.0 and (x + y + z) <= 1.0


def in_domain_E(s) -> bool:
    """Membership in the working domain: the y=0 wall of the simplex plus
    the simplex points with y > 0 and x >= z.

    Points with y > 0 and z > x are excluded; they leave the simplex in a
    single iterate (the predator coordinate turns negative).
    """
    x, y, z = s
    if not in_simplex(s):
        return False
    return y == 0.0 or x >= z


@dataclass(frozen=True)
class Trajectory:
    """Orbit record: the visited states, including the exit state if the
    orbit escaped the simplex.

    ``escape_index`` is the index of the first state outside the simplex
    (at least 1 for orbits started inside); ``None`` if the orbit survived
    the requested number of iterates.
    """

    states: tuple
    escaped: bool
    escape_index: int | None

    def __len__(self) -> int:
        return len(self.states)


def iterate(s0, p: Params, n: int) -> Trajectory:
    """Iterate up to ``n`` generations, stopping at the first simplex exit.

    The returned record holds states s_0 .. s_k where either k == n (the
    orbit survived) or k is the first index outside the simplex.  The
    escaping state is kept as computed for diagnostics.
    """
    if n < 0:
        raise ValueError("iteration count must be >= 0")
    s = State(*s0)
    states = [s]
    if not in_simplex(s):
        return Trajectory(tuple(states), True, 0)
    mu, beta, gamma = p.mu, p.beta, p.gamma
    x, y, z = s
    for k in range(1, n + 1):
        x, y, z = (
            mu * x * (1.0 - x - y - z),
            beta * y * (x - z),
            gamma * y * z,
        )
        states.append(State(x, y, z))
        if not (x >= 0.0 and y >= 0.0 and z >= 0.0 and (x + y + z) <= 1.0):
            return Trajectory(tuple(states), True, k)
    return Trajectory(tuple(states), False, None)


def iterate_streaming(s0, p: Params, n: int) -> Iterator[tuple[int, State]]:
    """Generator form of :func:`iterate` for long runs with bounded memory.

    Yields ``(k, state)`` pairs starting at ``(0, s0)`` and stops after
    yielding the first out-of-simplex state (or after ``n`` iterates).
    """
    s = State(*s0)
    yield 0, s
    if not in_simplex(s):
        return
    mu, beta, gamma = p.mu, p.beta, p.gamma
    x, y, z = s
    for k in range(1, n + 1):
        x, y, z = (
            mu * x * (1.0 - x - y - z),
            beta * y * (x - z),
            gamma * y * z,
        )
        yield k, State(x, y, z)
        if not (x >= 0.0 and y >= 0.0 and z >= 0.0 and (x + y + z) <= 1.0):
            return


def jacobian(s, p: Params) -> Mat3:
    """Jacobian matrix of the map at ``s``, row-major."""
    x, y, z = s
    mu, beta, gamma = p.mu, p.beta, p.gamma
    return (
        mu * (1.0 - 2.0 * x - y - z), -mu * x, -mu * x,
        beta * y, beta * (x - z), -beta * y,
        0.0, gamma * z, gamma * y,
    )


def mat3_det(m: Mat3) -> float:
    """Determinant by cofactor expansion along the first row."""
    a, b, c, d, e, f, g, h, i = m
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)


def mat3_apply(m: Mat3, v) -> tuple[float, float, float]:
    """Matrix-vector product for a row-major 3x3 matrix."""
    a, b, c, d, e, f, g, h, i = m
    vx, vy, vz = v
    return (
        a * vx + b * vy + c * vz,
        d * vx + e * vy + f * vz,
        g * vx + h * vy + i * vz,
    )


def logistic(sigma: float, mu: float) -> float:
    """One step of the logistic map mu * sigma * (1 - sigma)."""
    return mu * sigma * (1.0 - sigma)


def damped_logistic(sigma: float, mu: float, s: float) -> float:
    """Logistic step scaled by a damping factor s in (0, 1].

    For 1 < mu < 2 and 1/mu < s < 1 this map has the single stable fixed
    point 1 - 1/(mu*s), approached monotonically from below; the global
    convergence tests lean on it as a comparison map.
    """
    return s * mu * sigma * (1.0 - sigma)
