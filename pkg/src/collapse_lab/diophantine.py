"""Badly-approximable collapse directions and their orthonormal frames."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidParameter

GOLDEN = (1.0 + 5.0 ** 0.5) / 2.0
PARALLEL_TOL = 1e-8
DEFAULT_VERIFY_Q = 10_000
DEFAULT_VERIFY_FLOOR = 1e-3


@dataclass(frozen=True, eq=False)
class CollapseDirection:
    """A vector ``y`` in R^{k-1} and an orthonormal frame whose first row is
    the unit vector along ``(1, y)``.

    ``label`` is one of ``golden``, ``cubic`` or ``custom``.  Directions built
    from literature constructions are marked verified; custom ones only after
    :func:`verify_direction` succeeds.
    """

    y: np.ndarray
    frame: np.ndarray
    label: str = "custom"
    verified: bool = False
    notes: dict = field(default_factory=dict)

    @property
    def k(self) -> int:
        return self.frame.shape[0]

    def orthogonality_residual(self) -> float:
        return float(np.max(np.abs(self.frame @ self.frame.T - np.eye(self.k))))


def direction_frame(y, label: str = "custom", verified: bool = False) -> CollapseDirection:
    """Complete ``(1, y)/|(1, y)|`` to an orthonormal basis of R^k.

    The completion is Gram-Schmidt over the standard basis vectors in order,
    skipping any candidate whose residual norm is below 1e-8.  Each candidate
    is orthogonalised twice, which keeps the frame orthonormal to ~1e-16.
    """
    y = np.atleast_1d(np.asarray(y, dtype=float))
    if y.ndim != 1 or y.size < 1:
        raise InvalidParameter("y must be a nonempty vector")
    if not np.all(np.isfinite(y)):
        raise InvalidParameter("y must be finite")
    k = y.size + 1
    first = np.concatenate([[1.0], y])
    rows = [first / np.linalg.norm(first)]
    for i in range(k):
        if len(rows) == k:
            break
        cand = np.zeros(k)
        cand[i] = 1.0
        for _ in range(2):
            for r in rows:
                cand = cand - (cand @ r) * r
        n = np.linalg.norm(cand)
        if n < PARALLEL_TOL:
            continue
        rows.append(cand / n)
    y.flags.writeable = False
    frame = np.array(rows)
    frame.flags.writeable = False
    return CollapseDirection(y=y, frame=frame, label=label, verified=verified)


def golden_direction() -> CollapseDirection:
    """k = 2 direction along ``(1, phi)`` with phi the golden ratio."""
    return direction_frame([GOLDEN], label="golden", verified=True)


def plastic_number(tol: float = 1e-15, max_iter: int = 100) -> float:
    """Real root of x^3 - x - 1 by Newton iteration."""
    x = 1.3
    for _ in range(max_iter):
        f = x ** 3 - x - 1.0
        step = f / (3.0 * x ** 2 - 1.0)
        x -= step
        if abs(step) < tol:
            break
    return x


def cubic_direction() -> CollapseDirection:
    """k = 3 direction ``(theta, theta^2)``, theta real root of x^3 - x - 1.

    Badly approximable since ``1, theta, theta^2`` is a basis of a cubic
    number field; verified here only up to finite Q.
    """
    theta = plastic_number()
    d = direction_frame([theta, theta * theta], label="cubic", verified=True)
    d.notes["theta"] = theta
    d.notes["residual"] = theta ** 3 - theta - 1.0
    return d


def approx_constant(direction, Q: int, q_min: int = 1, chunk: int = 1 << 18) -> float:
    """Finite-range diophantine constant

        c_Q(y) = min_{q_min <= q <= Q} |p_q - q y|^{k-1} * q,

    with ``p_q`` the componentwise nearest integer vector (half to even) and
    the Euclidean norm.  ``q_min > 1`` measures the tail infimum, which for
    the golden ratio approaches 1/sqrt(5).

    ``direction`` may be a :class:`CollapseDirection` or a raw ``y`` vector.
    """
    if Q < 1 or q_min < 1 or q_min > Q:
        raise InvalidParameter("need 1 <= q_min <= Q")
    y = np.atleast_1d(np.asarray(getattr(direction, "y", direction), dtype=float))
    k = y.size + 1
    best = np.inf
    for lo in range(q_min, Q + 1, chunk):
        q = np.arange(lo, min(lo + chunk, Q + 1), dtype=float)
        qy = q[:, None] * y[None, :]
        dist = np.sqrt(np.sum((qy - np.rint(qy)) ** 2, axis=1))
        best = min(best, float(np.min(dist ** (k - 1) * q)))
    return best


def verify_direction(
    direction: CollapseDirection,
    Q: int = DEFAULT_VERIFY_Q,
    floor: float = DEFAULT_VERIFY_FLOOR,
) -> CollapseDirection:
    """Return a copy flagged verified iff ``c_Q(y) > floor`` (or already verified)."""
    c = approx_constant(direction, Q)
    notes = dict(direction.notes, c_Q=c, verify_Q=Q, verify_floor=floor)
    return CollapseDirection(
        y=direction.y,
        frame=direction.frame,
        label=direction.label,
        verified=direction.verified or c > floor,
        notes=notes,
    )
