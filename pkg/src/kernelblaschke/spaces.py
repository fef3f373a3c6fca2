"""Hilbert space models on the unit disk and the reproducibility structure of points.

A space is described by its monomial inner products ``<z^m, z^n>``.  The built-in
variants are:

* ``DirichletType(alpha)`` -- diagonal weights ``w_k = (k+1)^alpha``; ``alpha = 0``
  is the Hardy space, ``alpha = -1`` the Bergman space, ``alpha = 1`` the
  Dirichlet space.
* ``WeightedHardy(weight_rule)`` -- diagonal with user-supplied positive weights.
* ``LocalDirichlet(zeta)`` -- Hardy norm plus the local Dirichlet integral at a
  unimodular point ``zeta``; monomial Gram has the closed form
  ``<z^m, z^n> = delta_{mn} + min(m, n) * zeta^(m-n)``.
* ``CustomGram(gram_rule, reproducibility_table)`` -- arbitrary Hermitian monomial
  Gram; reproducibility of points must be declared explicitly.

A point ``beta`` is *reproducible of order m* when ``f -> f^(m)(beta)`` extends to
a bounded functional.  ``reproducible_order`` reports the top such order, and
``reproducible_multiset`` caps the zero multiset of a polynomial accordingly:
a zero of order ``m`` at ``beta`` is kept with multiplicity
``min(m, ro(beta) + 1)`` (the ``+1`` counts the bounded functionals of orders
``0..ro``, which is what the derivative-kernel constructions consume).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import InadmissibleMultiset, MissingReproducibility
from .jsonio import complex_pair, pair_complex

ORIGIN_TOL = 1e-12
BOUNDARY_TOL = 1e-12
POINT_MATCH_TOL = 1e-9


# ---------------------------------------------------------------------------
# Reproducible order
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ReproducibleOrder:
    """Top derivative order with a bounded evaluation functional at a point.

    ``kind`` is one of ``"infinite"``, ``"finite"``, ``"none"``.  For
    ``"finite"`` the field ``order`` holds the largest bounded order r, so the
    functionals of orders 0..r are exactly the bounded ones (never a gapped
    set).
    """

    kind: str
    order: int | None = None

    def __post_init__(self):
        if self.kind not in ("infinite", "finite", "none"):
            raise ValueError(f"bad reproducible-order kind {self.kind!r}")
        if self.kind == "finite":
            if self.order is None or self.order < 0:
                raise ValueError("finite reproducible order needs order >= 0")
        elif self.order is not None:
            raise ValueError("order is only meaningful for kind='finite'")

    @classmethod
    def infinite(cls) -> "ReproducibleOrder":
        return cls("infinite")

    @classmethod
    def finite(cls, r: int) -> "ReproducibleOrder":
        return cls("finite", int(r))

    @classmethod
    def not_reproducible(cls) -> "ReproducibleOrder":
        return cls("none")

    def admits(self, m: int) -> bool:
        """Whether the order-m derivative functional is bounded at the point."""
        if self.kind == "infinite":
            return True
        if self.kind == "none":
            return False
        return 0 <= m <= self.order

    @property
    def cap(self) -> float:
        """Number of bounded derivative functionals: inf, order + 1, or 0."""
        if self.kind == "infinite":
            return math.inf
        if self.kind == "none":
            return 0
        return self.order + 1

    def to_json(self):
        if self.kind == "finite":
            return self.order
        return self.kind

    @classmethod
    def from_json(cls, obj) -> "ReproducibleOrder":
        if obj == "infinite":
            return cls.infinite()
        if obj == "none":
            return cls.not_reproducible()
        return cls.finite(int(obj))


# ---------------------------------------------------------------------------
# Space variants
# ---------------------------------------------------------------------------

class SpaceSpec:
    """Base class: a space is its monomial Gram plus reproducibility data.

    All variants live on the unit disk (``domain_radius = 1``), are immutable,
    and every method is pure, so instances are safe to share across threads.
    """

    domain_radius = 1.0
    diagonal = False

    def monomial_inner(self, m: int, n: int) -> complex:
        raise NotImplementedError

    def reproducible_order(self, beta: complex) -> ReproducibleOrder:
        raise NotImplementedError

    def weight(self, k: int) -> float:
        raise TypeError(f"{type(self).__name__} has no diagonal weight sequence")

    def weights(self, upto: int) -> np.ndarray:
        """Weights w_0..w_upto as a vector (diagonal variants only)."""
        return np.array([self.weight(k) for k in range(upto + 1)], dtype=float)

    def gram(self, upto: int) -> np.ndarray:
        """Dense monomial Gram ``G[m, n] = <z^m, z^n>`` for m, n <= upto."""
        size = upto + 1
        if self.diagonal:
            return np.diag(self.weights(upto)).astype(complex)
        out = np.empty((size, size), dtype=complex)
        for m in range(size):
            for n in range(m, size):
                v = complex(self.monomial_inner(m, n))
                out[m, n] = v
                out[n, m] = v.conjugate()
        return out

    def to_json(self) -> dict:
        raise NotImplementedError

    def label(self) -> str:
        return type(self).__name__


@dataclass(frozen=True)
class DirichletType(SpaceSpec):
    """Diagonal space with weights ``w_k = (k+1)^alpha``."""

    alpha: float

    diagonal = True

    def weight(self, k: int) -> float:
        return float(k + 1) ** self.alpha

    def weights(self, upto: int) -> np.ndarray:
        return (np.arange(upto + 1, dtype=float) + 1.0) ** self.alpha

    def monomial_inner(self, m: int, n: int) -> complex:
        return complex(self.weight(m)) if m == n else 0j

    def reproducible_order(self, beta: complex) -> ReproducibleOrder:
        r = abs(complex(beta))
        if r < 1.0 - BOUNDARY_TOL:
            return ReproducibleOrder.infinite()
        if r > 1.0 + BOUNDARY_TOL:
            return ReproducibleOrder.not_reproducible()
        # |beta| = 1: order-m functionals are bounded exactly when alpha > 2m+1,
        # so the top order is the largest integer strictly below (alpha-1)/2.
        half = (self.alpha - 1.0) / 2.0
        if half <= 0.0:
            return ReproducibleOrder.not_reproducible()
        r_top = math.floor(half)
        if r_top == half:
            r_top -= 1
        if r_top < 0:
            return ReproducibleOrder.not_reproducible()
        return ReproducibleOrder.finite(int(r_top))

    def to_json(self) -> dict:
        return {"type": "dirichlet", "alpha": self.alpha}

    def label(self) -> str:
        return f"D_{self.alpha:g}"


def hardy_space() -> DirichletType:
    return DirichletType(0.0)


def bergman_space() -> DirichletType:
    return DirichletType(-1.0)


def dirichlet_space() -> DirichletType:
    return DirichletType(1.0)


@dataclass(frozen=True)
class WeightedHardy(SpaceSpec):
    """Diagonal space with a user-supplied weight rule ``k -> w_k > 0``.

    ``weight_rule`` may be a callable or a sequence (then truncation degrees are
    limited by its length).  The rule is assumed to satisfy
    ``lim w_k / w_{k+1} = 1``; this is a documented precondition, spot-checked on
    the first 10^3 indices (a drift beyond 10^-3 at the end of that window only
    warns, it does not raise).  ``boundary_order`` optionally declares the
    reproducible order of unimodular points; by default they are treated as not
    reproducible, since boundedness cannot be decided numerically from a bare
    rule.
    """

    weight_rule: object
    boundary_order: int | None = None

    diagonal = True

    def __post_init__(self):
        probe = min(1000, self._rule_len() - 2) if self._rule_len() is not None else 1000
        for k in (0, 1, 2, probe // 2, probe):
            if k < 0:
                continue
            w = self.weight(k)
            if not (w > 0.0) or not math.isfinite(w):
                raise ValueError(f"weight w_{k} = {w!r} is not strictly positive")
        if probe >= 16:
            # lim w_k/w_{k+1} = 1 is a documented precondition; warn when the
            # deviation at the end of the probe window exceeds 1e-3 and is not
            # shrinking across the window (a 1/k-type drift passes).
            half = abs(self.weight(probe // 2) / self.weight(probe // 2 + 1) - 1.0)
            drift = abs(self.weight(probe) / self.weight(probe + 1) - 1.0)
            if drift > 1e-3 and drift > 0.7 * half:
                warnings.warn(
                    f"weight ratio w_k/w_(k+1) is {1 + drift:.6g} at k={probe} "
                    "and not drifting to 1 (documented precondition)",
                    stacklevel=2,
                )

    def _rule_len(self) -> int | None:
        if callable(self.weight_rule):
            return None
        return len(self.weight_rule)

    def weight(self, k: int) -> float:
        if callable(self.weight_rule):
            return float(self.weight_rule(k))
        table = self.weight_rule
        if k >= len(table):
            raise IndexError(
                f"weight table of length {len(table)} cannot serve index {k}; "
                "supply a longer table or a callable rule"
            )
        return float(table[k])

    def weights(self, upto: int) -> np.ndarray:
        return np.array([self.weight(k) for k in range(upto + 1)], dtype=float)

    def monomial_inner(self, m: int, n: int) -> complex:
        return complex(self.weight(m)) if m == n else 0j

    def reproducible_order(self, beta: complex) -> ReproducibleOrder:
        r = abs(complex(beta))
        if r < 1.0 - BOUNDARY_TOL:
            return ReproducibleOrder.infinite()
        if r > 1.0 + BOUNDARY_TOL:
            return ReproducibleOrder.not_reproducible()
        if self.boundary_order is None:
            return ReproducibleOrder.not_reproducible()
        return ReproducibleOrder.finite(self.boundary_order)

    def to_json(self) -> dict:
        if callable(self.weight_rule):
            raise TypeError("callable weight rules do not serialize; use a table")
        out = {"type": "weights", "rule": "table",
               "values": [float(v) for v in self.weight_rule]}
        if self.boundary_order is not None:
            out["boundary_order"] = self.boundary_order
        return out

    def label(self) -> str:
        return "H2_w"


@dataclass(frozen=True)
class LocalDirichlet(SpaceSpec):
    """Hardy norm plus the local Dirichlet integral at a unimodular point.

    The monomial Gram has the closed form
    ``<z^m, z^n> = delta_{mn} + min(m, n) * zeta^(m-n)``
    (the second summand reads as 0 when ``min(m, n) = 0``).  Point evaluation is
    bounded at ``zeta`` but at no other point of the circle.
    """

    zeta: complex

    diagonal = False

    def __post_init__(self):
        z = complex(self.zeta)
        if abs(abs(z) - 1.0) > 1e-9:
            raise ValueError(f"zeta must be unimodular, got |zeta| = {abs(z)}")
        object.__setattr__(self, "zeta", z / abs(z))

    def monomial_inner(self, m: int, n: int) -> complex:
        base = 1.0 if m == n else 0.0
        k = min(m, n)
        if k == 0:
            return complex(base)
        return base + k * self.zeta ** (m - n)

    def gram(self, upto: int) -> np.ndarray:
        idx = np.arange(upto + 1)
        mins = np.minimum.outer(idx, idx).astype(complex)
        powers = np.power(self.zeta, np.subtract.outer(idx, idx))
        return np.eye(upto + 1, dtype=complex) + mins * powers

    def reproducible_order(self, beta: complex) -> ReproducibleOrder:
        b = complex(beta)
        r = abs(b)
        if r < 1.0 - BOUNDARY_TOL:
            return ReproducibleOrder.infinite()
        if r > 1.0 + BOUNDARY_TOL:
            return ReproducibleOrder.not_reproducible()
        if abs(b - self.zeta) <= POINT_MATCH_TOL:
            return ReproducibleOrder.finite(0)
        return ReproducibleOrder.not_reproducible()

    def to_json(self) -> dict:
        return {"type": "local_dirichlet", "zeta": complex_pair(self.zeta)}

    def label(self) -> str:
        return f"D_local({self.zeta:g})"


@dataclass(frozen=True)
class CustomGram(SpaceSpec):
    """Arbitrary Hermitian monomial Gram with declared reproducibility.

    ``gram_rule`` is a callable ``(m, n) -> complex`` or a square array.
    Whether a point has bounded derivative functionals cannot be decided
    numerically in general, so every queried point must appear in
    ``reproducibility_table`` -- a sequence of ``(point, ReproducibleOrder)``
    pairs; a missing entry raises ``MissingReproducibility``.

    The leading principal minors up to ``probe_size`` are checked positive at
    construction.
    """

    gram_rule: object
    reproducibility_table: tuple = ()
    probe_size: int = 8

    diagonal = False

    def __post_init__(self):
        table = tuple(
            (complex(point), order if isinstance(order, ReproducibleOrder)
             else ReproducibleOrder.from_json(order))
            for point, order in self.reproducibility_table
        )
        object.__setattr__(self, "reproducibility_table", table)
        if not callable(self.gram_rule):
            arr = np.asarray(self.gram_rule, dtype=complex)
            if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
                raise ValueError("gram table must be square")
            object.__setattr__(self, "gram_rule", arr)
        probe = self.gram(min(self.probe_size, self._table_limit()) - 1)
        if not np.allclose(probe, probe.conj().T, atol=1e-10):
            raise ValueError("gram rule is not Hermitian on the probe window")
        try:
            np.linalg.cholesky(probe)
        except np.linalg.LinAlgError as exc:
            raise ValueError("gram probe has a nonpositive leading minor") from exc

    def _table_limit(self) -> int:
        if callable(self.gram_rule):
            return 1 << 30
        return self.gram_rule.shape[0]

    def monomial_inner(self, m: int, n: int) -> complex:
        if callable(self.gram_rule):
            return complex(self.gram_rule(m, n))
        arr = self.gram_rule
        if m >= arr.shape[0] or n >= arr.shape[0]:
            raise IndexError(f"gram table of size {arr.shape[0]} cannot serve ({m},{n})")
        return complex(arr[m, n])

    def reproducible_order(self, beta: complex) -> ReproducibleOrder:
        b = complex(beta)
        for point, order in self.reproducibility_table:
            if abs(point - b) <= POINT_MATCH_TOL:
                return order
        raise MissingReproducibility(
            f"custom space has no reproducibility entry for point {b}"
        )

    def to_json(self) -> dict:
        if callable(self.gram_rule):
            raise TypeError("callable gram rules do not serialize; use a table")
        return {
            "type": "custom",
            "gram": "table",
            "values": [[complex_pair(v) for v in row] for row in self.gram_rule],
            "reproducibility": [
                {"point": complex_pair(p), "order": o.to_json()}
                for p, o in self.reproducibility_table
            ],
            "probe_size": self.probe_size,
        }


def space_from_json(obj: dict) -> SpaceSpec:
    kind = obj.get("type")
    if kind == "dirichlet":
        return DirichletType(float(obj["alpha"]))
    if kind == "weights":
        if obj.get("rule") != "table":
            raise ValueError(f"unsupported weight rule {obj.get('rule')!r}")
        return WeightedHardy(tuple(float(v) for v in obj["values"]),
                             boundary_order=obj.get("boundary_order"))
    if kind == "local_dirichlet":
        return LocalDirichlet(pair_complex(obj["zeta"]))
    if kind == "custom":
        values = np.array([[pair_complex(v) for v in row] for row in obj["values"]],
                          dtype=complex)
        table = tuple(
            (pair_complex(e["point"]), ReproducibleOrder.from_json(e["order"]))
            for e in obj.get("reproducibility", ())
        )
        return CustomGram(values, table, probe_size=int(obj.get("probe_size", 8)))
    raise ValueError(f"unknown space type {kind!r}")


# ---------------------------------------------------------------------------
# Factored polynomials
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FactoredPoly:
    """Polynomial in factored form: ``leading * prod (z - point)^mult``.

    Duplicate root entries are merged; roots within ``ORIGIN_TOL`` of 0 are
    snapped to 0 so the origin multiplicity is unambiguous.
    """

    leading: complex
    roots: tuple = ()

    def __post_init__(self):
        lead = complex(self.leading)
        if lead == 0:
            raise ValueError("leading coefficient must be nonzero")
        merged: dict[complex, int] = {}
        for point, mult in self.roots:
            point = complex(point)
            mult = int(mult)
            if mult < 1:
                raise ValueError("root multiplicities must be positive")
            if abs(point) <= ORIGIN_TOL:
                point = 0j
            merged[point] = merged.get(point, 0) + mult
        ordered = tuple(sorted(merged.items(), key=lambda it: (it[0].real, it[0].imag)))
        object.__setattr__(self, "leading", lead)
        object.__setattr__(self, "roots", ordered)

    @property
    def degree(self) -> int:
        return sum(m for _, m in self.roots)

    @property
    def origin_multiplicity(self) -> int:
        for point, mult in self.roots:
            if point == 0:
                return mult
        return 0

    def coefficients(self) -> np.ndarray:
        """Ascending-degree coefficient vector (length degree + 1)."""
        coeffs = np.array([self.leading], dtype=complex)
        for point, mult in self.roots:
            factor = np.array([-point, 1.0], dtype=complex)
            for _ in range(mult):
                coeffs = np.convolve(coeffs, factor)
        return coeffs

    def __call__(self, z: complex) -> complex:
        out = complex(self.leading)
        for point, mult in self.roots:
            out *= (z - point) ** mult
        return out

    def derivative_at(self, z: complex, order: int = 1) -> complex:
        c = self.coefficients()
        for _ in range(order):
            c = np.polynomial.polynomial.polyder(c)
        return complex(np.polynomial.polynomial.polyval(z, c)) if len(c) else 0j

    def to_json(self) -> dict:
        return {
            "leading": complex_pair(self.leading),
            "roots": [{"point": complex_pair(p), "mult": m} for p, m in self.roots],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "FactoredPoly":
        return cls(
            pair_complex(obj["leading"]),
            tuple((pair_complex(r["point"]), int(r["mult"])) for r in obj.get("roots", ())),
        )


# ---------------------------------------------------------------------------
# Reproducible multisets
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ReproducibleMultiset:
    """Finite multiset of points with derivative multiplicities.

    The origin is recorded separately as ``origin_multiplicity`` (possibly 0,
    always recorded explicitly); ``entries`` hold the distinct nonzero points
    with their multiplicities, sorted for deterministic serialization.
    """

    origin_multiplicity: int = 0
    entries: tuple = ()

    def __post_init__(self):
        m0 = int(self.origin_multiplicity)
        if m0 < 0:
            raise ValueError("origin multiplicity must be >= 0")
        normalized = []
        for point, mult in self.entries:
            point = complex(point)
            mult = int(mult)
            if abs(point) <= ORIGIN_TOL:
                raise ValueError("the origin is recorded via origin_multiplicity only")
            if mult < 1:
                raise ValueError("multiplicities must be >= 1")
            normalized.append((point, mult))
        ordered = tuple(sorted(normalized, key=lambda it: (it[0].real, it[0].imag)))
        for (a, _), (b, _) in zip(ordered, ordered[1:]):
            if a == b:
                raise ValueError(f"point {a} listed twice; merge multiplicities")
        object.__setattr__(self, "origin_multiplicity", m0)
        object.__setattr__(self, "entries", ordered)

    @property
    def size(self) -> int:
        return self.origin_multiplicity + sum(m for _, m in self.entries)

    def as_list(self) -> list[complex]:
        """Flat listing with repetitions, origin first."""
        out = [0j] * self.origin_multiplicity
        for point, mult in self.entries:
            out.extend([point] * mult)
        return out

    def polynomial(self) -> FactoredPoly:
        """Monic polynomial whose zero multiset is exactly this multiset."""
        roots = list(self.entries)
        if self.origin_multiplicity:
            roots.append((0j, self.origin_multiplicity))
        if not roots:
            return FactoredPoly(1.0, ())
        return FactoredPoly(1.0, tuple(roots))

    def validate_for(self, space: SpaceSpec) -> None:
        """Raise InadmissibleMultiset unless every multiplicity fits its cap."""
        for point, mult in self.entries:
            cap = space.reproducible_order(point).cap
            if mult > cap:
                raise InadmissibleMultiset(
                    f"point {point} admits at most {cap} derivative functionals, "
                    f"multiset asks for {mult}"
                )

    def approx_equal(self, other: "ReproducibleMultiset", tol: float = 1e-9) -> bool:
        if self.origin_multiplicity != other.origin_multiplicity:
            return False
        if len(self.entries) != len(other.entries):
            return False
        return all(
            abs(p - q) <= tol and mp == mq
            for (p, mp), (q, mq) in zip(self.entries, other.entries)
        )

    def to_json(self) -> dict:
        return {
            "origin": self.origin_multiplicity,
            "points": [{"point": complex_pair(p), "mult": m} for p, m in self.entries],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "ReproducibleMultiset":
        return cls(
            int(obj.get("origin", 0)),
            tuple((pair_complex(e["point"]), int(e["mult"])) for e in obj.get("points", ())),
        )


# ---------------------------------------------------------------------------
# Module operations
# ---------------------------------------------------------------------------

def monomial_inner(space: SpaceSpec, m: int, n: int) -> complex:
    """Inner product ``<z^m, z^n>`` in the given space."""
    if m < 0 or n < 0:
        raise ValueError("monomial degrees must be nonnegative")
    return space.monomial_inner(int(m), int(n))


def reproducible_order(space: SpaceSpec, beta: complex) -> ReproducibleOrder:
    """Top bounded derivative order of the point ``beta`` in the space."""
    return space.reproducible_order(complex(beta))


def reproducible_multiset(space: SpaceSpec, p: FactoredPoly) -> ReproducibleMultiset:
    """Zero multiset of ``p`` with multiplicities capped by reproducibility.

    A zero of order m at beta contributes ``min(m, cap(beta))`` where the cap
    counts bounded functionals (infinite inside the disk, ``ro + 1`` at a
    finitely reproducible point, 0 at a non-reproducible one).
    """
    m0 = 0
    entries = []
    for point, mult in p.roots:
        if point == 0:
            m0 += mult
            continue
        cap = space.reproducible_order(point).cap
        keep = mult if cap == math.inf else min(mult, int(cap))
        if keep >= 1:
            entries.append((point, keep))
    return ReproducibleMultiset(m0, tuple(entries))
