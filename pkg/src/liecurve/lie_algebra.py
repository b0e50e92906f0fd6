"""Three-dimensional Lie algebras with a bi-invariant metric.

An algebra is given by structure constants ``c[i, j, k]`` in an orthonormal,
oriented basis ``e_1, e_2, e_3`` so that ``[e_i, e_j] = sum_k c[i, j, k] e_k``.
The metric is the identity on that basis. Algebra vectors are plain numpy
arrays with a trailing axis of length 3; every function here broadcasts over
leading axes so a whole curve's worth of frames can be processed at once.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import AlgebraError

BI_INVARIANCE_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class LieAlgebra3:
    name: str
    c: np.ndarray
    orientation: int = 1
    # integer-valued constants compare exactly; user tensors get a tolerance
    exact: bool = False
    description: str = field(default="", compare=False)

    def __post_init__(self):
        c = np.array(self.c, dtype=float)
        if c.shape != (3, 3, 3):
            raise AlgebraError(f"structure constants must have shape (3, 3, 3), got {c.shape}")
        if not np.all(np.isfinite(c)):
            raise AlgebraError("structure constants must be finite")
        if self.orientation not in (1, -1):
            raise AlgebraError(f"orientation must be +1 or -1, got {self.orientation!r}")
        c.setflags(write=False)
        object.__setattr__(self, "c", c)

    @property
    def is_abelian(self) -> bool:
        return not np.any(self.c)

    @property
    def bracket_scale(self) -> float:
        """The scalar k with ``c = k * epsilon`` (valid for bi-invariant algebras)."""
        return float(self.c[0, 1, 2])

    @property
    def lie_torsion(self) -> float:
        """Constant value of ``1/2 <[T, N], B>`` for any oriented orthonormal frame."""
        return 0.5 * self.bracket_scale * self.orientation

    def to_json(self) -> dict:
        entries = []
        for i, j, k in itertools.product(range(3), repeat=3):
            if i < j and self.c[i, j, k] != 0.0:
                entries.append({"i": i + 1, "j": j + 1, "k": k + 1, "value": float(self.c[i, j, k])})
        return {"name": self.name, "orientation": self.orientation, "brackets": entries}


def _levi_civita() -> np.ndarray:
    eps = np.zeros((3, 3, 3))
    for i, j, k in itertools.permutations(range(3)):
        eps[i, j, k] = np.linalg.det(np.eye(3)[[i, j, k]])
    return np.rint(eps)


EPSILON = _levi_civita()

PRESETS: dict[str, LieAlgebra3] = {
    "abelian": LieAlgebra3(
        "abelian", np.zeros((3, 3, 3)), exact=True,
        description="commutative algebra (R^3 under addition); all brackets vanish",
    ),
    "su2": LieAlgebra3(
        "su2", 2.0 * EPSILON, exact=True,
        description="[e_i, e_j] = 2 eps_ijk e_k; unit quaternions with basis i, j, k",
    ),
    "so3": LieAlgebra3(
        "so3", EPSILON.copy(), exact=True,
        description="[e_i, e_j] = eps_ijk e_k; rotation algebra with the cross product",
    ),
}


def get_algebra(spec) -> LieAlgebra3:
    """Resolve a preset name, an inline definition dict, or a LieAlgebra3."""
    if isinstance(spec, LieAlgebra3):
        return spec
    if isinstance(spec, dict):
        return algebra_from_json(spec)
    if isinstance(spec, str):
        try:
            return PRESETS[spec]
        except KeyError:
            raise AlgebraError(
                f"unknown algebra {spec!r}; available presets: {', '.join(sorted(PRESETS))}"
            ) from None
    raise AlgebraError(f"cannot interpret {spec!r} as an algebra")


def algebra_from_json(data: dict) -> LieAlgebra3:
    """Build an algebra from the definition-file format.

    Only nonzero entries are listed, with 1-based indices. The entry for
    ``(i, j, k)`` also fixes ``(j, i, k)`` by antisymmetry; entries that
    disagree with one another are rejected.
    """
    if not isinstance(data, dict):
        raise AlgebraError("algebra definition must be a JSON object")
    for key in ("name", "brackets"):
        if key not in data:
            raise AlgebraError(f"algebra definition is missing key {key!r}")
    orientation = data.get("orientation", 1)
    if orientation not in (1, -1):
        raise AlgebraError(f"key 'orientation' must be +1 or -1, got {orientation!r}")
    if not isinstance(data["brackets"], list):
        raise AlgebraError("key 'brackets' must be a list")

    c = np.zeros((3, 3, 3))
    assigned = np.zeros((3, 3, 3), dtype=bool)
    exact = True

    def put(i, j, k, value, n):
        if assigned[i, j, k] and c[i, j, k] != value:
            raise AlgebraError(
                f"brackets[{n}] contradicts an earlier entry at "
                f"(i, j, k) = ({i + 1}, {j + 1}, {k + 1})"
            )
        c[i, j, k] = value
        assigned[i, j, k] = True

    for n, entry in enumerate(data["brackets"]):
        try:
            i, j, k = (int(entry[key]) - 1 for key in ("i", "j", "k"))
            value = float(entry["value"])
        except KeyError as exc:
            raise AlgebraError(f"brackets[{n}] is missing key {exc.args[0]!r}") from None
        except (TypeError, ValueError):
            raise AlgebraError(f"brackets[{n}] has a non-numeric field") from None
        if not all(0 <= idx < 3 for idx in (i, j, k)):
            raise AlgebraError(f"brackets[{n}] has an index outside 1..3")
        if i == j and value != 0.0:
            raise AlgebraError(f"brackets[{n}]: [e_{i + 1}, e_{i + 1}] must vanish")
        exact &= float(value).is_integer()
        put(i, j, k, value, n)
        put(j, i, k, -value, n)

    return LieAlgebra3(str(data["name"]), c, orientation=orientation, exact=exact)


def load_algebra(path) -> LieAlgebra3:
    with open(Path(path)) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise AlgebraError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    return algebra_from_json(data)


def bracket(X, Y, g: LieAlgebra3) -> np.ndarray:
    """Lie bracket of algebra vectors, expanded through the structure constants."""
    return np.einsum("...i,...j,ijk->...k", np.asarray(X, float), np.asarray(Y, float), g.c)


def cross(X, Y, orientation: int = 1) -> np.ndarray:
    """Metric cross product in the oriented orthonormal basis."""
    return orientation * np.cross(np.asarray(X, float), np.asarray(Y, float))


def inner(X, Y) -> np.ndarray:
    return np.einsum("...i,...i->...", np.asarray(X, float), np.asarray(Y, float))


@dataclass(frozen=True)
class BiInvarianceReport:
    ok: bool
    violations: list[tuple[tuple[int, int, int], tuple[int, int, int]]]
    tolerance: float

    def __bool__(self):
        return self.ok


def check_bi_invariance(g: LieAlgebra3, tol: float | None = None) -> BiInvarianceReport:
    """Test total antisymmetry of the structure constants.

    ``<X, [Y, Z]> = <[X, Y], Z>`` for all X, Y, Z is equivalent to
    ``c[i, j, k]`` changing sign under every transposition of indices. Each
    violation is reported as a pair of 1-based index triples whose entries
    disagree: ``((i, j, k), (j, k, i))`` for a broken cyclic symmetry and
    ``((i, j, k), (j, i, k))`` for broken antisymmetry in the first pair.
    """
    if tol is None:
        tol = 0.0 if g.exact else BI_INVARIANCE_TOL
    c = g.c
    scale = max(1.0, float(np.max(np.abs(c))))
    violations = []
    for i, j, k in itertools.product(range(3), repeat=3):
        one = (i + 1, j + 1, k + 1)
        if abs(c[i, j, k] - c[j, k, i]) > tol * scale:
            violations.append((one, (j + 1, k + 1, i + 1)))
        if (i, j, k) < (j, i, k) and abs(c[i, j, k] + c[j, i, k]) > tol * scale:
            violations.append((one, (j + 1, i + 1, k + 1)))
    return BiInvarianceReport(not violations, violations, tol)


def jacobi_residual(g: LieAlgebra3) -> float:
    """Largest component of [[e_i,e_j],e_k] + cyclic over all basis triples."""
    e = np.eye(3)
    worst = 0.0
    for i, j, k in itertools.product(range(3), repeat=3):
        total = (
            bracket(bracket(e[i], e[j], g), e[k], g)
            + bracket(bracket(e[j], e[k], g), e[i], g)
            + bracket(bracket(e[k], e[i], g), e[j], g)
        )
        worst = max(worst, float(np.max(np.abs(total))))
    return worst
