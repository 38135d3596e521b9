"""Domains, operators, and their closed-form eigenpairs.

Three geometries are supported: an open interval (0, L), a box (product of
intervals), and the d-torus with period 2*pi per axis.  On the interval/box the
operator is the Dirichlet Laplacian; on the torus either the Laplacian acting
on scalars (or componentwise on vectors) or the Stokes operator acting on
divergence-free vector fields.  All eigenpairs are available in closed form,
which is what the rest of the toolkit leans on.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .errors import ConfigError, ResourceLimitError

DEFAULT_MODE_CAP = 1_000_000


def sinpi(y):
    """sin(pi*y) with exact zeros at integer y.

    Plain np.sin(np.pi * y) returns ~1e-16 garbage at integers; Dirichlet
    eigenfunctions must vanish on the boundary exactly, so reduce the argument
    to [-1/2, 1/2] first (the reduction is exact in floating point).
    """
    y = np.asarray(y, dtype=float)
    r = y - 2.0 * np.round(0.5 * y)  # exact; lands in [-1, 1]
    r = np.where(r > 0.5, 1.0 - r, r)
    r = np.where(r < -0.5, -1.0 - r, r)
    return np.sin(np.pi * r)


# ---------------------------------------------------------------------------
# domains


@dataclass(frozen=True)
class Interval:
    """The open interval (0, length)."""

    length: float

    def __post_init__(self):
        if not (isinstance(self.length, (int, float)) and math.isfinite(self.length) and self.length > 0):
            raise ConfigError(f"interval length must be a positive finite number, got {self.length!r}")
        object.__setattr__(self, "length", float(self.length))

    @property
    def dim(self) -> int:
        return 1

    @property
    def lengths(self) -> tuple:
        return (self.length,)

    @property
    def periodic(self) -> bool:
        return False


@dataclass(frozen=True)
class Box:
    """A product of open intervals (0, L_1) x ... x (0, L_d), d in {1, 2, 3}."""

    lengths: tuple

    def __post_init__(self):
        try:
            ls = tuple(float(v) for v in self.lengths)
        except TypeError:
            raise ConfigError(f"box lengths must be a sequence, got {self.lengths!r}")
        if not 1 <= len(ls) <= 3:
            raise ConfigError(f"box dimension must be 1..3, got {len(ls)}")
        if any(not (math.isfinite(v) and v > 0) for v in ls):
            raise ConfigError(f"box lengths must be positive and finite, got {ls}")
        object.__setattr__(self, "lengths", ls)

    @property
    def dim(self) -> int:
        return len(self.lengths)

    @property
    def periodic(self) -> bool:
        return False


@dataclass(frozen=True)
class Torus:
    """The d-torus [0, 2*pi)^d."""

    dim: int

    def __post_init__(self):
        if not (isinstance(self.dim, int) and 1 <= self.dim <= 3):
            raise ConfigError(f"torus dimension must be an int in 1..3, got {self.dim!r}")

    @property
    def lengths(self) -> tuple:
        return (2.0 * math.pi,) * self.dim

    @property
    def periodic(self) -> bool:
        return True


DomainSpec = Union[Interval, Box, Torus]


# ---------------------------------------------------------------------------
# mode indices and eigenpairs


@dataclass(frozen=True)
class ModeIndex:
    """Multi-index of a mode; `polarization` is 0 except for Stokes eigenpairs,
    where it runs 1..d-1 and selects a tangential basis vector of k-perp."""

    k: tuple
    polarization: int = 0

    def __post_init__(self):
        k = self.k
        if isinstance(k, (int, np.integer)):
            k = (int(k),)
        else:
            k = tuple(int(v) for v in k)
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "polarization", int(self.polarization))

    @property
    def dim(self) -> int:
        return len(self.k)

    def sort_key(self):
        return (self.k, self.polarization)


@dataclass(frozen=True)
class EigenPair:
    """One eigenpair: index, eigenvalue, and a point evaluator.

    The evaluator maps an (n, d) array of points to (n,) values (scalar modes)
    or (n, d) values (Stokes modes).  Eigenfunctions are orthonormal in L^2.
    """

    index: ModeIndex
    eigenvalue: float
    evaluator: Callable


# ---------------------------------------------------------------------------
# operators


@dataclass(frozen=True)
class DirichletLaplacian:
    """-Laplace with zero boundary values on an interval or box."""

    domain: Union[Interval, Box]

    def __post_init__(self):
        if not isinstance(self.domain, (Interval, Box)):
            raise ConfigError("DirichletLaplacian needs an Interval or Box domain")

    @property
    def dim(self) -> int:
        return self.domain.dim

    @property
    def vector_valued(self) -> bool:
        return False

    def eigenvalue(self, k) -> float:
        ks = k.k if isinstance(k, ModeIndex) else k
        return float(sum((ki * math.pi / L) ** 2 for ki, L in zip(ks, self.domain.lengths)))

    def lambda_min(self) -> float:
        """Smallest eigenvalue (all-ones multi-index)."""
        return self.eigenvalue(tuple(1 for _ in self.domain.lengths))

    def validate_index(self, idx: ModeIndex):
        if idx.dim != self.dim or any(ki < 1 for ki in idx.k):
            raise ConfigError(f"Dirichlet mode indices must be >= 1 per axis, got {idx.k}")
        if idx.polarization != 0:
            raise ConfigError("scalar operator modes carry no polarization")


@dataclass(frozen=True)
class TorusLaplacian:
    """-Laplace on the torus (scalar fields, or vectors componentwise)."""

    domain: Torus

    def __post_init__(self):
        if not isinstance(self.domain, Torus):
            raise ConfigError("TorusLaplacian needs a Torus domain")

    @property
    def dim(self) -> int:
        return self.domain.dim

    @property
    def vector_valued(self) -> bool:
        return False

    def eigenvalue(self, k) -> float:
        ks = k.k if isinstance(k, ModeIndex) else k
        return float(sum(ki * ki for ki in ks))

    def lambda_min(self) -> float:
        """Smallest positive eigenvalue (the k=0 mode sits outside the scale)."""
        return 1.0

    def validate_index(self, idx: ModeIndex):
        if idx.dim != self.dim:
            raise ConfigError(f"mode index dimension {idx.dim} != operator dimension {self.dim}")
        if idx.polarization != 0:
            raise ConfigError("scalar operator modes carry no polarization")


@dataclass(frozen=True)
class TorusStokes:
    """Stokes operator on the torus: -Laplace restricted to divergence-free
    vector fields with zero mean.  Requires d >= 2."""

    domain: Torus

    def __post_init__(self):
        if not isinstance(self.domain, Torus):
            raise ConfigError("TorusStokes needs a Torus domain")
        if self.domain.dim < 2:
            raise ConfigError("TorusStokes requires dimension >= 2")

    @property
    def dim(self) -> int:
        return self.domain.dim

    @property
    def vector_valued(self) -> bool:
        return True

    def eigenvalue(self, k) -> float:
        ks = k.k if isinstance(k, ModeIndex) else k
        return float(sum(ki * ki for ki in ks))

    def lambda_min(self) -> float:
        return 1.0

    def validate_index(self, idx: ModeIndex):
        if idx.dim != self.dim:
            raise ConfigError(f"mode index dimension {idx.dim} != operator dimension {self.dim}")
        if not 0 <= idx.polarization <= self.dim - 1:
            raise ConfigError(
                f"polarization must lie in 0..{self.dim - 1} (0 = vector amplitude), got {idx.polarization}"
            )
        if all(ki == 0 for ki in idx.k):
            # the spectrum excludes k=0; fields may still carry the mean there
            if idx.polarization != 0:
                raise ConfigError("the Stokes operator has no k=0 eigenmode")


OperatorSpec = Union[DirichletLaplacian, TorusLaplacian, TorusStokes]


def polarization_basis(k) -> np.ndarray:
    """Orthonormal basis of the plane orthogonal to k, shape (d-1, d).

    d=2: k rotated by 90 degrees.  d=3: Gram-Schmidt of e_x against k-hat,
    falling back to e_y when k is within ~25 degrees of the x-axis, then the
    cross product for the second vector.  Deterministic by construction.
    """
    kv = np.asarray(k, dtype=float)
    norm = float(np.linalg.norm(kv))
    if norm == 0.0:
        raise ConfigError("polarization basis undefined for k = 0")
    khat = kv / norm
    d = kv.size
    if d == 2:
        return np.array([[-khat[1], khat[0]]])
    if d == 3:
        ref = np.array([1.0, 0.0, 0.0])
        if abs(float(khat @ ref)) > 0.9:
            ref = np.array([0.0, 1.0, 0.0])
        e1 = ref - (ref @ khat) * khat
        e1 = e1 / np.linalg.norm(e1)
        e2 = np.cross(khat, e1)
        return np.array([e1, e2])
    raise ConfigError(f"polarization basis only defined for d in {{2, 3}}, got d={d}")


# ---------------------------------------------------------------------------
# evaluators


def mode_evaluator(operator: OperatorSpec, index: ModeIndex) -> Callable:
    """Point evaluator for one eigenfunction of `operator`."""
    d = operator.dim

    def _points(points):
        pts = np.asarray(points, dtype=float)
        if pts.ndim == 1:
            pts = pts.reshape(-1, 1) if d == 1 else pts.reshape(1, -1)
        if pts.shape[1] != d:
            raise ConfigError(f"points must have shape (n, {d})")
        return pts

    if isinstance(operator, DirichletLaplacian):
        operator.validate_index(index)
        ks = index.k
        lengths = operator.domain.lengths

        def ev(points):
            pts = _points(points)
            vals = np.ones(pts.shape[0])
            for i, (ki, L) in enumerate(zip(ks, lengths)):
                vals = vals * (math.sqrt(2.0 / L) * sinpi(ki * pts[:, i] / L))
            return vals

        return ev

    if isinstance(operator, TorusLaplacian):
        operator.validate_index(index)
        kv = np.asarray(index.k, dtype=float)
        scale = (2.0 * math.pi) ** (-d / 2.0)

        def ev(points):
            pts = _points(points)
            return scale * np.exp(1j * (pts @ kv))

        return ev

    if isinstance(operator, TorusStokes):
        operator.validate_index(index)
        if not 1 <= index.polarization <= d - 1:
            raise ConfigError(f"Stokes polarization must be in 1..{d - 1}, got {index.polarization}")
        kv = np.asarray(index.k, dtype=float)
        e = polarization_basis(index.k)[index.polarization - 1]
        scale = (2.0 * math.pi) ** (-d / 2.0)

        def ev(points):
            pts = _points(points)
            return scale * np.exp(1j * (pts @ kv))[:, None] * e[None, :]

        return ev

    raise ConfigError(f"unknown operator {operator!r}")


# ---------------------------------------------------------------------------
# enumeration


def _check_cap(count: int, cap: int):
    if count > cap:
        raise ResourceLimitError(f"mode enumeration would produce {count} modes, over the cap of {cap}")


def enumerate_modes(operator: OperatorSpec, lambda_max: float, cap: int = DEFAULT_MODE_CAP) -> list:
    """All eigenpairs with eigenvalue <= lambda_max, sorted by (eigenvalue, index).

    Raises ResourceLimitError if the enumeration would exceed `cap` modes.
    For the torus operators the k=0 mode is included only for TorusLaplacian
    (the Stokes operator lives on the zero-mean subspace).
    """
    if not (math.isfinite(lambda_max) and lambda_max > 0):
        raise ConfigError(f"lambda_max must be positive and finite, got {lambda_max!r}")

    indices = []
    if isinstance(operator, DirichletLaplacian):
        lengths = operator.domain.lengths
        kmaxes = [int(math.floor(L * math.sqrt(lambda_max) / math.pi)) for L in lengths]
        if any(km < 1 for km in kmaxes):
            return []
        _check_cap(int(np.prod([km for km in kmaxes])), cap)
        for ks in itertools.product(*[range(1, km + 1) for km in kmaxes]):
            if operator.eigenvalue(ks) <= lambda_max:
                indices.append(ModeIndex(ks))
    elif isinstance(operator, (TorusLaplacian, TorusStokes)):
        d = operator.dim
        bound = int(math.floor(math.sqrt(lambda_max)))
        npol = (d - 1) if isinstance(operator, TorusStokes) else 1
        _check_cap((2 * bound + 1) ** d * npol, cap)
        for ks in itertools.product(range(-bound, bound + 1), repeat=d):
            if sum(ki * ki for ki in ks) > lambda_max:
                continue
            if isinstance(operator, TorusStokes):
                if all(ki == 0 for ki in ks):
                    continue
                for m in range(1, d):
                    indices.append(ModeIndex(ks, m))
            else:
                indices.append(ModeIndex(ks))
    else:
        raise ConfigError(f"unknown operator {operator!r}")

    _check_cap(len(indices), cap)
    pairs = [
        EigenPair(idx, operator.eigenvalue(idx), mode_evaluator(operator, idx))
        for idx in indices
    ]
    pairs.sort(key=lambda p: (p.eigenvalue, p.index.sort_key()))
    return pairs
