"""Shapley-family bimatrix games and their simplex geometry.

The one-parameter 3x3 family

    A_beta = [[1, 0, b], [b, 1, 0], [0, b, 1]]
    B_beta = [[-b, 1, 0], [0, -b, 1], [1, 0, -b]]

has a unique interior equilibrium at the barycenter pair for every
beta in (0, 1).  At beta = SIGMA = (sqrt(5)-1)/2 the game is equivalent
to a zero-sum game (rescaling B by sigma*(B - ones) cancels A exactly).

Conventions used throughout the package:

* strategies are indexed 0..2 internally; user-facing labels are 1-based,
  with -k encoding the mixed label "indifferent between everything but k";
* p^A is a row vector acting on the left of B, p^B a column vector acting
  on the right of A, so the payoff vectors are v^A = A p^B and v^B = p^A B;
* distances on the simplex product are sum-distances (L1).

Landmark points: every pairwise-indifference condition cuts a line through
the equilibrium across the opponent's simplex.  Its two boundary endpoints
are called R (the indifferent pair is payoff-maximal there) and Q (the
third strategy strictly dominates there).  The hexagonal mixed-play orbit
threads the R points, which is why they get the shorter name.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace

import numpy as np

SIGMA = (math.sqrt(5.0) - 1.0) / 2.0

BARYCENTER = (1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0)

# canonical unordered strategy pairs, 1-based
PAIRS = ((1, 2), (2, 3), (1, 3))

SIMPLEX_TOL = 1e-12
TIE_TOL = 1e-10


class GameError(ValueError):
    """Invalid game data or game-domain precondition failure."""


class DegenerateGameError(GameError):
    """The game lacks the interior-equilibrium line structure."""


def clamp_simplex(p, tol=SIMPLEX_TOL):
    """Clamp tiny negatives and renormalize a probability 3-vector.

    Coordinates below -tol or a sum off 1.0 by more than 1e-9 indicate a
    logic error upstream and raise instead of being papered over.
    """
    a, b, c = p
    lo = min(a, b, c)
    if lo < -tol:
        raise GameError(f"point left the simplex: {p}")
    if lo < 0.0:
        a = a if a > 0.0 else 0.0
        b = b if b > 0.0 else 0.0
        c = c if c > 0.0 else 0.0
    s = a + b + c
    if abs(s - 1.0) > 1e-9:
        raise GameError(f"probabilities sum to {s}: {p}")
    if s != 1.0:
        a /= s
        b /= s
        c /= s
    return (a, b, c)


def sum_dist(p, q):
    """Sum-distance between two 3-vectors."""
    return abs(p[0] - q[0]) + abs(p[1] - q[1]) + abs(p[2] - q[2])


def joint_dist(pA, pB, qA, qB):
    """Sum-distance between two joint states (all six coordinates)."""
    return sum_dist(pA, qA) + sum_dist(pB, qB)


@dataclass(frozen=True)
class JointState:
    """A pair of mixed strategies plus both clock readings (s = e^t)."""

    pA: tuple
    pB: tuple
    time_t: float = 0.0
    time_s: float = 1.0

    def dist_to(self, other):
        return joint_dist(self.pA, self.pB, other.pA, other.pB)


@dataclass(frozen=True)
class Landmarks:
    """Boundary landmarks of the pairwise-indifference lines.

    R_A[(i,j)] / Q_A[(i,j)] are the endpoints in the A-simplex of the line
    where player B is indifferent between i and j; R_B / Q_B live in the
    B-simplex on the lines where player A is indifferent.  f_A / f_B are
    the turning points of the hexagonal orbit on the double-indifference
    set and are filled in by the induced-flow module when that orbit is a
    genuine periodic orbit (beta > SIGMA).
    """

    R_A: dict
    Q_A: dict
    R_B: dict
    Q_B: dict
    f_A: dict | None = None
    f_B: dict | None = None
    sigma: float = SIGMA
    tau_estimate: float | None = None


@dataclass(frozen=True)
class GamePair:
    """Payoff matrices with the derived interior equilibrium.

    A and B are row-major 3x3 tuples of tuples; beta is set when the game
    was built by the family constructor.
    """

    A: tuple
    B: tuple
    beta: float | None
    equilibrium: JointState

    def payoff_vectors(self, pA, pB):
        """Return (v^A, v^B) = (A p^B, p^A B) as float tuples."""
        A, B = self.A, self.B
        vA = (
            A[0][0] * pB[0] + A[0][1] * pB[1] + A[0][2] * pB[2],
            A[1][0] * pB[0] + A[1][1] * pB[1] + A[1][2] * pB[2],
            A[2][0] * pB[0] + A[2][1] * pB[1] + A[2][2] * pB[2],
        )
        vB = (
            pA[0] * B[0][0] + pA[1] * B[1][0] + pA[2] * B[2][0],
            pA[0] * B[0][1] + pA[1] * B[1][1] + pA[2] * B[2][1],
            pA[0] * B[0][2] + pA[1] * B[1][2] + pA[2] * B[2][2],
        )
        return vA, vB


def _as_matrix_tuple(M):
    M = np.asarray(M, dtype=float)
    if M.shape != (3, 3):
        raise GameError(f"expected a 3x3 matrix, got shape {M.shape}")
    return tuple(tuple(float(x) for x in row) for row in M)


def family_matrices(beta):
    """The family payoff matrices for a parameter beta in (0, 1)."""
    if not (0.0 < beta < 1.0):
        raise GameError(f"family parameter must lie in (0, 1), got {beta}")
    A = ((1.0, 0.0, beta), (beta, 1.0, 0.0), (0.0, beta, 1.0))
    B = ((-beta, 1.0, 0.0), (0.0, -beta, 1.0), (1.0, 0.0, -beta))
    return A, B


def shapley_family(beta):
    """Build the family game; its equilibrium is the barycenter pair."""
    A, B = family_matrices(beta)
    eq = JointState(BARYCENTER, BARYCENTER)
    return GamePair(A=A, B=B, beta=float(beta), equilibrium=eq)


def nash_equilibrium(A, B, interior_tol=1e-9):
    """Solve for the unique interior equilibrium of a 3x3 bimatrix game.

    p^B makes player A totally indifferent (A p^B proportional to ones)
    and p^A does the same for B; each is one 4x4 linear solve with the
    normalization row appended.  Raises DegenerateGameError when the
    system is singular or the solution is not strictly interior.
    """
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)

    def solve_side(M):
        # unknowns: 3 probabilities and the common payoff value
        sys = np.zeros((4, 4))
        sys[:3, :3] = M
        sys[:3, 3] = -1.0
        sys[3, :3] = 1.0
        rhs = np.array([0.0, 0.0, 0.0, 1.0])
        try:
            sol = np.linalg.solve(sys, rhs)
        except np.linalg.LinAlgError as exc:
            raise DegenerateGameError("no interior equilibrium (singular system)") from exc
        return sol[:3]

    pB = solve_side(A)
    pA = solve_side(B.T)
    if min(pA.min(), pB.min()) <= interior_tol:
        raise DegenerateGameError("no interior equilibrium (solution not interior)")
    return JointState(tuple(pA), tuple(pB))


def from_matrices(A, B, beta=None):
    """Build a GamePair from explicit matrices, solving for the equilibrium."""
    At = _as_matrix_tuple(A)
    Bt = _as_matrix_tuple(B)
    eq = nash_equilibrium(At, Bt)
    return GamePair(A=At, B=Bt, beta=beta, equilibrium=eq)


def perturbed_family(beta, dA, dB):
    """Family game plus entrywise perturbations (max-entry norm)."""
    A, B = family_matrices(beta)
    An = np.asarray(A) + np.asarray(dA, dtype=float)
    Bn = np.asarray(B) + np.asarray(dB, dtype=float)
    return from_matrices(An, Bn, beta=beta)


def payoff_vectors(game, state):
    """Payoff vectors (v^A, v^B) at a JointState or (pA, pB) pair."""
    if isinstance(state, JointState):
        return game.payoff_vectors(state.pA, state.pB)
    pA, pB = state
    return game.payoff_vectors(pA, pB)


def best_response_set(v, tol=TIE_TOL):
    """Indices (1-based) within tol*max(1, |v_max|) of the maximum."""
    m = max(v)
    cut = m - tol * max(1.0, abs(m))
    return tuple(k + 1 for k in range(3) if v[k] >= cut)


def _indifference_functional(game, side, pair):
    """Linear functional whose kernel is the (i,j)-indifference line.

    side "A" means the line lives in the A-simplex (player B indifferent,
    functional w with w . p^A = v^B_i - v^B_j); side "B" is the mirror.
    """
    i, j = pair[0] - 1, pair[1] - 1
    if side == "A":
        B = game.B
        return tuple(B[r][i] - B[r][j] for r in range(3))
    A = game.A
    return tuple(A[i][c] - A[j][c] for c in range(3))


_VERTICES = ((1.0, 0.0, 0.0), (0.0, 1.0, 0.0), (0.0, 0.0, 1.0))


def _line_boundary_points(w, residual_tol=1e-12):
    """Boundary intersections of {p : w . p = 0} with the simplex edges."""
    pts = []
    for k in range(3):
        u, v = (k + 1) % 3, (k + 2) % 3
        wu, wv = w[u], w[v]
        if wu == wv:
            continue
        t = wu / (wu - wv)
        if -1e-14 <= t <= 1.0 + 1e-14:
            p = [0.0, 0.0, 0.0]
            p[u] = 1.0 - t
            p[v] = t
            pts.append(clamp_simplex(tuple(p)))
    # drop duplicates from a line passing through a vertex
    uniq = []
    for p in pts:
        if all(sum_dist(p, q) > 1e-12 for q in uniq):
            uniq.append(p)
    for p in uniq:
        if abs(sum(w[k] * p[k] for k in range(3))) > residual_tol:
            raise DegenerateGameError("indifference endpoint residual too large")
    return uniq


def landmarks(game):
    """Compute the R/Q boundary endpoints of all six indifference lines.

    For each line the endpoint where the indifferent pair is payoff-maximal
    is R, the endpoint where the excluded strategy strictly wins is Q; a
    line that does not separate the two is degenerate.
    """
    R_A, Q_A, R_B, Q_B = {}, {}, {}, {}
    for pair in PAIRS:
        i, j = pair[0] - 1, pair[1] - 1
        k = 3 - i - j
        for side, Rd, Qd in (("A", R_A, Q_A), ("B", R_B, Q_B)):
            w = _indifference_functional(game, side, pair)
            pts = _line_boundary_points(w)
            if len(pts) != 2:
                raise DegenerateGameError(
                    f"indifference line {side}{pair} meets the boundary "
                    f"in {len(pts)} points"
                )
            r_pt = q_pt = None
            for p in pts:
                if side == "A":
                    _, v = game.payoff_vectors(p, BARYCENTER)
                else:
                    v, _ = game.payoff_vectors(BARYCENTER, p)
                if v[i] > v[k]:
                    r_pt = p
                elif v[i] < v[k]:
                    q_pt = p
            if r_pt is None or q_pt is None:
                raise DegenerateGameError(
                    f"indifference line {side}{pair} does not cross the interior"
                )
            Rd[pair] = r_pt
            Qd[pair] = q_pt
    return Landmarks(R_A=R_A, Q_A=Q_A, R_B=R_B, Q_B=Q_B)


def cyclic_relabel(p, shift=1):
    """Apply the strategy relabeling k -> k+shift (mod 3) to a 3-vector.

    The family matrices are circulant, so relabeling both players this way
    is a symmetry of the game; new coordinate k holds old coordinate
    k-shift.
    """
    return tuple(p[(k - shift) % 3] for k in range(3))


def load_game_config(source):
    """Build a GamePair from a config mapping or a JSON file path.

    Accepted shapes: {"family_beta": x} or {"A": [[..]], "B": [[..]]}
    with row-major matrices, row player = A.
    """
    if isinstance(source, (str, bytes)):
        with open(source) as fh:
            cfg = json.load(fh)
    else:
        cfg = dict(source)
    if "family_beta" in cfg:
        return shapley_family(float(cfg["family_beta"]))
    if "A" in cfg and "B" in cfg:
        return from_matrices(cfg["A"], cfg["B"])
    raise GameError("game config needs either family_beta or A and B")


def attach_landmark_turns(lm, f_A, f_B, tau_estimate=None):
    """Return a Landmarks copy with hexagon turning points filled in."""
    return replace(lm, f_A=f_A, f_B=f_B, tau_estimate=tau_estimate)
