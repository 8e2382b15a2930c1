"""Continuous selections by successive approximation.

Starting from ``f_0 = g`` with ``d(g(x), phi(x)) < r0``, each step replaces
``f_n(x)`` by its nearest point in ``conv(phi(x) & B(f_n(x), rho_n))``. With
``rho_n = gamma**n * r0`` the residual must drop below ``rho_{n+1}`` after every
step; the run records and certifies that, together with the step bound
``|f_n(x) - f_{n+1}(x)| <= rho_n``. The limit stays within
``r0 * sum(gamma**i)`` of ``g``.
"""
import csv
import io
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    InputError,
    NonConvergenceError,
    ParaconvexityViolation,
    ParaselectError,
    PreconditionError,
    ResolutionError,
)
from .geometry import TOL_GEO, ball_mask, distance_to_cloud, distance_to_hull
from .multimap import DomainComplex, VertexFunction, is_whole_space
from .paraconvexity import is_alpha_paraconvex


@dataclass(frozen=True)
class SelectionConfig:
    """Parameters of a successive-approximation run.

    ``gamma`` defaults to ``(1 + alpha) / 2`` and ``delta`` to
    ``1 / (1 - gamma) + 0.01``.
    """

    alpha: float = 0.0
    gamma: float = None
    r0: float = 1.0
    delta: float = None
    tol_stop: float = 1e-8
    max_iters: int = 10_000
    tol_geo: float = TOL_GEO

    def __post_init__(self):
        alpha = float(self.alpha)
        gamma = (1.0 + alpha) / 2.0 if self.gamma is None else float(self.gamma)
        delta = 1.0 / (1.0 - gamma) + 0.01 if self.delta is None and gamma < 1 else self.delta
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "gamma", gamma)
        object.__setattr__(self, "delta", None if delta is None else float(delta))
        if not 0.0 <= alpha < 1.0:
            raise InputError(f"alpha must lie in [0, 1), got {alpha}")
        if not alpha < gamma < 1.0:
            raise InputError(f"need alpha < gamma < 1, got alpha={alpha}, gamma={gamma}")
        if not self.delta > 1.0 / (1.0 - gamma):
            raise InputError(f"delta must exceed 1/(1-gamma) = {1.0 / (1.0 - gamma):.6g}")
        if not self.r0 > 0 or not self.tol_stop > 0 or not self.max_iters > 0:
            raise InputError("r0, tol_stop and max_iters must be positive")

    @classmethod
    def from_gamma(cls, gamma, **kw):
        """Config with ``alpha = max(0, 2 gamma - 1)``, the inverse of the default."""
        return cls(alpha=max(0.0, 2.0 * float(gamma) - 1.0), gamma=gamma, **kw)

    def to_dict(self):
        return {k: getattr(self, k) for k in
                ("alpha", "gamma", "r0", "delta", "tol_stop", "max_iters", "tol_geo")}


@dataclass
class SelectionTrace:
    """Iterates ``f_0 = g, f_1, ..., f_N`` of one run and their bounds.

    ``radii[n]`` is the bound attached to iterate ``n``: its residual must
    stay below it and the step out of it may not exceed it. ``vertices``
    lists the domain vertices the iterates refer to (all of them for a plain
    run, one level's worth for a glued piece).
    """

    radii: np.ndarray
    iterates: list
    residuals: list
    steps: list
    r0: float
    delta: float
    vertices: np.ndarray
    config: SelectionConfig = None
    certified: bool = True
    failure: dict = None
    paraconvex_slack: list = field(default_factory=list)

    @property
    def per_iter(self):
        """Pairs ``(max residual of f_n, max |f_n - f_{n+1}|)``."""
        return list(zip(self.residuals, self.steps))

    @property
    def final(self):
        return self.iterates[-1]

    @property
    def n_steps(self):
        return len(self.iterates) - 1

    def final_drift(self):
        """``max_x |g(x) - f(x)|``."""
        return float(np.linalg.norm(self.iterates[-1] - self.iterates[0], axis=1).max(initial=0.0))

    def to_dict(self):
        return {
            "r0": self.r0,
            "delta": self.delta,
            "config": None if self.config is None else self.config.to_dict(),
            "vertices": [int(v) for v in self.vertices],
            "radii": [float(r) for r in self.radii],
            "iterates": [f.tolist() for f in self.iterates],
            "residuals": [float(r) for r in self.residuals],
            "steps": [float(s) for s in self.steps],
            "certified": bool(self.certified),
            "failure": self.failure,
        }

    @classmethod
    def from_dict(cls, data):
        try:
            cfg = data.get("config")
            return cls(
                radii=np.asarray(data["radii"], dtype=float),
                iterates=[np.asarray(f, dtype=float) for f in data["iterates"]],
                residuals=list(data["residuals"]),
                steps=list(data["steps"]),
                r0=float(data["r0"]),
                delta=float(data["delta"]),
                vertices=np.asarray(data["vertices"], dtype=int),
                config=None if cfg is None else SelectionConfig(**cfg),
                certified=bool(data.get("certified", True)),
                failure=data.get("failure"),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed trace: {exc}") from exc

    def to_csv(self):
        """Columns ``iteration, max_residual, max_step, bound_gamma_n_r``."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["iteration", "max_residual", "max_step", "bound_gamma_n_r"])
        for n, res in enumerate(self.residuals):
            step = repr(float(self.steps[n])) if n < len(self.steps) else ""
            w.writerow([n, repr(float(res)), step, repr(float(self.radii[n]))])
        return buf.getvalue()


def _project_vertex(value, q, radius, index):
    if is_whole_space(value):
        return q
    mask = ball_mask(value, q, radius)
    if not mask.any():
        raise PreconditionError(
            f"vertex {index}: no point of phi(x) within {radius:.6g} of f_n(x)", vertex=index)
    inside = value.points[mask]
    if len(inside) == 1:
        return inside[0].copy()
    _, nearest = distance_to_hull(q, inside)
    return nearest


def _step_values(phi, F, radius, vertices):
    out = np.empty_like(F)
    for row, i in enumerate(vertices):
        out[row] = _project_vertex(phi.values[i], F[row], radius, int(i))
    return out


def step(phi, f_n, radius):
    """One successive-approximation step.

    Parameters
    ----------
    phi : SetValuedMap
    f_n : VertexFunction
        Current approximation, one value per domain vertex.
    radius : float
        Radius of the balls ``B(f_n(x), radius)`` cut out of ``phi(x)``.

    Returns
    -------
    VertexFunction
        ``f_{n+1}``; ``|f_n(x) - f_{n+1}(x)| <= radius`` because the convex
        hull of points of a ball stays in its closure.

    Raises
    ------
    PreconditionError
        If some ``phi(x)`` has no point within ``radius`` of ``f_n(x)``.
    """
    if not radius > 0:
        raise InputError("radius must be positive")
    F = np.asarray(f_n.values if isinstance(f_n, VertexFunction) else f_n, dtype=float)
    if len(F) != len(phi):
        raise InputError("f_n needs one value per domain vertex")
    values = _step_values(phi, F, float(radius), np.arange(len(phi)))
    return VertexFunction(values, phi.domain)


def _residuals(phi, F, vertices):
    return np.array([phi.distance(int(i), F[row]) for row, i in enumerate(vertices)])


def _gamma_schedule(r0, gamma):
    power = 1.0
    while True:
        yield power * r0
        power *= gamma


def successive_approximation(phi, g, schedule, *, r0, delta, tol_stop, max_iters,
                             tol_geo=TOL_GEO, vertices=None, config=None, strict=True,
                             paraconvex_bound=None):
    """Shared driver behind :func:`run` and the functional variant.

    ``schedule`` yields the radii ``rho_0 = r0, rho_1, ...``; step ``n`` uses
    ``rho_n`` and the new residual must not exceed ``rho_{n+1}``. Iteration
    stops once ``rho_n < tol_stop``. ``paraconvex_bound(n, rho_n)``, when
    given, is the residual the paraconvexity hypothesis promises after step
    ``n``; its slack is recorded but never enforced.
    """
    G = np.asarray(g.values if isinstance(g, VertexFunction) else g, dtype=float)
    if G.ndim == 1:
        G = G.reshape(-1, 1)
    if len(G) != len(phi) or G.shape[1] != phi.ambient_dim:
        raise InputError("g needs one ambient-dimension value per domain vertex")
    vertices = np.arange(len(phi)) if vertices is None else np.asarray(sorted(vertices), dtype=int)
    schedule = iter(schedule)
    radii = [float(next(schedule))]
    if not math.isclose(radii[0], r0, rel_tol=1e-15, abs_tol=0.0):
        raise InputError("the radius schedule must start at r0")
    F = G[vertices].copy()
    res = _residuals(phi, F, vertices)
    if np.any(res >= r0):
        bad = int(vertices[int(res.argmax())])
        raise InputError(f"hypothesis d(g(x), phi(x)) < r0 fails at vertex {bad}: "
                         f"{res.max():.6g} >= {r0:.6g}")
    trace = SelectionTrace(np.array(radii), [F], [float(res.max(initial=0.0))], [],
                           float(r0), float(delta), vertices, config)
    n = 0
    while radii[n] >= tol_stop:
        if n >= max_iters:
            trace.radii = np.array(radii)
            trace.certified = False
            raise NonConvergenceError(f"no convergence within {max_iters} iterations", trace=trace)
        rho = radii[n]
        F_next = _step_values(phi, F, rho, vertices)
        rho_next = float(next(schedule))
        radii.append(rho_next)
        res = _residuals(phi, F_next, vertices)
        moved = np.linalg.norm(F_next - F, axis=1)
        trace.iterates.append(F_next)
        trace.residuals.append(float(res.max(initial=0.0)))
        trace.steps.append(float(moved.max(initial=0.0)))
        trace.radii = np.array(radii)
        if paraconvex_bound is not None:
            trace.paraconvex_slack.append(float(paraconvex_bound(n, rho) - res.max(initial=0.0)))
        failure = None
        if np.any(res > rho_next + tol_geo):
            k = int(res.argmax())
            failure = {"inequality": "residual", "iterate": n + 1, "vertex": int(vertices[k]),
                       "value": float(res[k]), "bound": rho_next}
        elif np.any(moved > rho + tol_geo):
            k = int(moved.argmax())
            failure = {"inequality": "step", "iterate": n, "vertex": int(vertices[k]),
                       "value": float(moved[k]), "bound": rho}
        if failure is not None:
            trace.certified = False
            trace.failure = failure
            if strict:
                raise ParaconvexityViolation(
                    f"{failure['inequality']} bound fails at iterate {failure['iterate']}, "
                    f"vertex {failure['vertex']}: {failure['value']:.6g} > {failure['bound']:.6g}",
                    iteration=failure["iterate"], vertex=failure["vertex"],
                    residual=failure["value"], bound=failure["bound"], trace=trace)
            return trace
        F = F_next
        n += 1
    return trace


def run(phi, g, config, *, strict=True, check_paraconvexity=False, sampling_radius=0.0):
    """Successive approximation with radii ``gamma**n * r0``.

    Parameters
    ----------
    phi : SetValuedMap
    g : VertexFunction or array
        Starting map with ``d(g(x), phi(x)) < config.r0`` everywhere.
    config : SelectionConfig
    strict : bool
        Raise on the first failed bound (default) or return the partial,
        uncertified trace.
    check_paraconvexity : bool
        Estimate the defect of every distinct cloud value and warn when it
        exceeds ``config.alpha``. Advisory and comparatively expensive.
    sampling_radius : float
        Covering radius of the sampled values, passed to the advisory check.

    Returns
    -------
    SelectionTrace

    Raises
    ------
    InputError
        If the proximity hypothesis on ``g`` fails.
    ParaconvexityViolation
        If some step leaves a residual above ``gamma**(n+1) * r0``.
    NonConvergenceError
        If ``config.max_iters`` steps do not bring the radius below
        ``config.tol_stop``.
    """
    if check_paraconvexity:
        _warn_paraconvexity(phi, config.alpha, sampling_radius)
    alpha, gamma = config.alpha, config.gamma
    return successive_approximation(
        phi, g, _gamma_schedule(config.r0, gamma), r0=config.r0, delta=config.delta,
        tol_stop=config.tol_stop, max_iters=config.max_iters, tol_geo=config.tol_geo,
        config=config, strict=strict, paraconvex_bound=lambda n, rho: alpha * rho)


def _warn_paraconvexity(phi, alpha, sampling_radius=0.0):
    seen = {}
    for i, v in enumerate(phi.values):
        if is_whole_space(v):
            continue
        key = v.points.tobytes()
        if key not in seen:
            seen[key] = is_alpha_paraconvex(v, alpha, sampling_radius=sampling_radius)[0]
        if not seen[key]:
            warnings.warn(f"value at vertex {i} looks more than {alpha}-paraconvex",
                          RuntimeWarning, stacklevel=3)


@dataclass
class DiscontinuityWitness:
    """Vertices approaching a point along which the function keeps oscillating."""

    vertices: list
    coords: list
    values: list
    oscillation: float

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["vertex", "x", "value"])
        for v, x, y in zip(self.vertices, self.coords, self.values):
            w.writerow([v, repr(float(x)), repr(float(y))])
        return buf.getvalue()


@dataclass
class GluePiece:
    level: int
    vertices: list
    values: np.ndarray
    trace: SelectionTrace = None


@dataclass
class GlueReport:
    """Outcome of gluing partial selections defined on increasing vertex sets."""

    pieces: list
    glued: VertexFunction
    continuity_moduli: np.ndarray
    piece_moduli: np.ndarray
    discontinuity_witness: DiscontinuityWitness = None
    certified: bool = True

    def to_dict(self):
        w = self.discontinuity_witness
        return {
            "certified": bool(self.certified),
            "levels": [p.level for p in self.pieces],
            "piece_sizes": [len(p.vertices) for p in self.pieces],
            "glued": self.glued.to_list(),
            "max_continuity_modulus": float(self.continuity_moduli.max(initial=0.0)),
            "max_piece_modulus": float(np.nanmax(self.piece_moduli, initial=0.0)),
            "discontinuity_witness": None if w is None else {
                "vertices": [int(v) for v in w.vertices],
                "coords": [float(x) for x in w.coords],
                "values": [float(y) for y in w.values],
                "oscillation": float(w.oscillation),
            },
        }


def _stretch(domain, F):
    e = domain.edges
    return np.linalg.norm(F[e[:, 0]] - F[e[:, 1]], axis=1) / domain.lengths


def glue(chain, phi, g, config):
    """Selections on the levels of ``chain``, each extending the previous one.

    Level ``n`` runs successive approximation on ``A_n`` minus ``A_{n-1}``
    with the earlier values held fixed; the glued function is certified when
    its per-edge stretch never exceeds the stretch of the first piece that
    contains the edge.

    Raises
    ------
    ParaselectError
        Whatever the level's run raises, with ``level`` set on the exception.
    """
    G = np.asarray(g.values if isinstance(g, VertexFunction) else g, dtype=float)
    glued = G.copy()
    done = frozenset()
    pieces = []
    for lvl in chain.levels:
        new = sorted(lvl.A - done)
        trace = None
        if new:
            try:
                trace = run_on(phi, G, config, new)
            except ParaselectError as exc:
                exc.level = lvl.n
                raise
            glued[new] = trace.final
        done = done | lvl.A
        members = sorted(lvl.A)
        pieces.append(GluePiece(lvl.n, members, glued[members].copy(), trace))
    moduli = _stretch(phi.domain, glued)
    bound = _piece_bounds(phi.domain, pieces)
    certified = bool(np.all(moduli <= bound + config.tol_geo))
    return GlueReport(pieces, VertexFunction(glued, phi.domain), moduli, bound, None, certified)


def run_on(phi, g, config, vertices):
    """:func:`run` restricted to a subset of vertices."""
    return successive_approximation(
        phi, g, _gamma_schedule(config.r0, config.gamma), r0=config.r0, delta=config.delta,
        tol_stop=config.tol_stop, max_iters=config.max_iters, tol_geo=config.tol_geo,
        vertices=vertices, config=config,
        paraconvex_bound=lambda n, rho: config.alpha * rho)


def _piece_bounds(domain, pieces, exclude=()):
    """Edge stretch in the first piece containing both endpoints (``nan`` if none)."""
    bound = np.full(len(domain.edges), np.nan)
    for piece in pieces:
        pos = {v: k for k, v in enumerate(piece.vertices)}
        for k, (i, j) in enumerate(domain.edges):
            if not np.isnan(bound[k]) or k in exclude or i not in pos or j not in pos:
                continue
            a, b = piece.values[pos[i]], piece.values[pos[j]]
            bound[k] = np.linalg.norm(a - b) / domain.lengths[k]
    return bound


def _sin_inv(x):
    out = np.zeros_like(x)
    pos = x > 0
    out[pos] = np.sin(1.0 / x[pos])
    return out


def witness_at_origin(x, f, oscillation_tol=0.1):
    """Look for non-vanishing oscillation of sampled ``f`` as ``x`` decreases to 0.

    ``x`` is sorted with ``x[0] == 0``. The innermost shell
    ``[x[1], 2 x[1]]`` is inspected: the witness oscillation is the larger of
    the range of ``f`` on the shell and the jump ``|f(x[1]) - f(0)|``.
    Returns ``None`` when that is at most ``oscillation_tol``.
    """
    x = np.asarray(x, dtype=float)
    f = np.asarray(f, dtype=float)
    x_min = x[1]
    shell = np.flatnonzero((x >= x_min) & (x <= 2.0 * x_min * (1 + 1e-12)))
    spread = float(f[shell].max() - f[shell].min())
    jump = float(abs(f[1] - f[0]))
    osc = max(spread, jump)
    if osc <= oscillation_tol:
        return None
    if spread >= jump:
        # sampled local extrema in the shell, ordered towards the origin
        idx = [int(i) for i in shell
               if 0 < i < len(f) - 1 and (f[i] - f[i - 1]) * (f[i + 1] - f[i]) <= 0]
        idx = sorted(idx, key=lambda i: -x[i]) + [0]
    else:
        idx = [1, 0]
    return DiscontinuityWitness(idx, x[idx].tolist(), f[idx].tolist(), osc)


def _shell_samples(x_min, sample_step):
    count = int(round((1.0 - x_min) / sample_step))
    return np.linspace(x_min, 1.0, count + 1)


def demo_glue_failure(n_max, sample_step, oscillation_tol=0.1):
    """Glue ``sin(1/x)`` over the closed sets ``{0} | [1/n, 1]``.

    Every piece is continuous on its own set, yet the glued function has no
    limit at 0. The returned report carries the discontinuity witness and is
    uncertified whenever one is found.

    Raises
    ------
    ResolutionError
        If ``sample_step`` cannot resolve the oscillation near ``1/n_max``
        (fewer than about four samples per half period).
    """
    if n_max < 2:
        raise InputError("n_max must be at least 2")
    x_min = 1.0 / n_max
    if not 0 < sample_step <= math.pi * x_min ** 2 / 4.0:
        raise ResolutionError(
            f"sample step {sample_step:.3g} is too coarse near x = {x_min:.3g}; "
            f"need at most {math.pi * x_min ** 2 / 4.0:.3g}")
    x = np.concatenate([[0.0], _shell_samples(x_min, sample_step)])
    domain = DomainComplex.path(x)
    f = _sin_inv(x)
    pieces = []
    gap_edges = {0}
    for n in range(2, n_max + 1):
        members = [0] + [int(i) for i in np.flatnonzero(x >= 1.0 / n - 1e-12) if i > 0]
        pieces.append(GluePiece(n, members, f[members].reshape(-1, 1)))
    bound = _piece_bounds(domain, pieces, exclude=gap_edges)
    moduli = _stretch(domain, f.reshape(-1, 1))
    witness = witness_at_origin(x, f, oscillation_tol)
    return GlueReport(pieces, VertexFunction(f.reshape(-1, 1), domain), moduli, bound,
                      witness, certified=witness is None)


def demo_glue_repaired(n_max, sample_step, oscillation_tol=0.1):
    """Same gluing over closures of an open cover, with ``f`` made continuous.

    The cover is ``U_n = [0, 2c) | (1/(n+1), 1]`` with ``c = 1/(n_max+1)``;
    below ``c`` the function is the linear ramp from 0 to ``sin(1/c)``, so
    every point has a neighbourhood on which a single continuous piece
    applies and no witness appears.
    """
    if n_max < 2:
        raise InputError("n_max must be at least 2")
    if not sample_step > 0:
        raise InputError("sample_step must be positive")
    c = 1.0 / (n_max + 1)
    x = np.linspace(0.0, 1.0, int(round(1.0 / sample_step)) + 1)
    f = np.where(x >= c, _sin_inv(np.maximum(x, c)), x / c * math.sin(1.0 / c))
    domain = DomainComplex.path(x)
    pieces = []
    for n in range(1, n_max + 1):
        members = [int(i) for i in np.flatnonzero((x < 2.0 * c) | (x > 1.0 / (n + 1)))]
        pieces.append(GluePiece(n, members, f[members].reshape(-1, 1)))
    bound = _piece_bounds(domain, pieces)
    moduli = _stretch(domain, f.reshape(-1, 1))
    witness = witness_at_origin(x, f, oscillation_tol)
    certified = witness is None and bool(np.all(moduli <= bound + TOL_GEO))
    return GlueReport(pieces, VertexFunction(f.reshape(-1, 1), domain), moduli, bound,
                      witness, certified)


@dataclass
class Violation:
    inequality: str
    iterate: int
    vertex: int
    slack: float


@dataclass
class CertificationReport:
    """Worst slack of every inequality replayed by :func:`verify_trace`.

    Slack is ``bound - observed``; an inequality is violated when its slack
    drops below ``-tol_geo``.
    """

    residual_slack: float
    step_slack: float
    telescoping_slack: float
    final_bound_slack: float
    final_residual: float
    violations: list

    @property
    def ok(self):
        return not self.violations

    def to_dict(self):
        return {
            "ok": self.ok,
            "residual_slack": self.residual_slack,
            "step_slack": self.step_slack,
            "telescoping_slack": self.telescoping_slack,
            "final_bound_slack": self.final_bound_slack,
            "final_residual": self.final_residual,
            "violations": [vars(v) for v in self.violations],
        }


def verify_trace(trace, phi, tol_geo=TOL_GEO):
    """Replay every inequality of ``trace`` from scratch.

    Checks, at each vertex: ``d(f_n, phi) <= radii[n]``;
    ``|f_n - f_{n+1}| <= radii[n]``, also at simplex midpoints of the domain
    for full-domain traces; ``|g - f_{n+1}| <= sum(radii[:n+1])``; and
    ``|g - f| < delta * r0`` for the last iterate.
    """
    verts = np.asarray(trace.vertices, dtype=int)
    iters = [np.asarray(f, dtype=float) for f in trace.iterates]
    if iters[0].shape[1] != phi.ambient_dim or len(iters[0]) != len(verts):
        raise InputError("trace and map are dimensionally inconsistent")
    radii = np.asarray(trace.radii, dtype=float)
    violations = []
    worst = {"residual": np.inf, "step": np.inf, "telescoping": np.inf}

    def record(name, n, slack_vec):
        k = int(np.argmin(slack_vec))
        worst[name] = min(worst[name], float(slack_vec[k]))
        if slack_vec[k] < -tol_geo:
            violations.append(Violation(name, n, int(verts[k]), float(slack_vec[k])))

    full = len(verts) == len(phi) and phi.domain.simplices
    g = iters[0]
    for n, F in enumerate(iters):
        res = np.empty(len(verts))
        for row, i in enumerate(verts):
            v = phi.values[i]
            res[row] = 0.0 if is_whole_space(v) else distance_to_cloud(F[row], v)
        record("residual", n, radii[n] - res)
        if n + 1 < len(iters):
            moved = np.linalg.norm(iters[n + 1] - F, axis=1)
            record("step", n, radii[n] - moved)
            if full:
                a = VertexFunction(F, phi.domain).midpoint_values()
                b = VertexFunction(iters[n + 1], phi.domain).midpoint_values()
                mid = np.linalg.norm(b - a, axis=1)
                if len(mid) and mid.max() > radii[n] + tol_geo:
                    violations.append(Violation("step_midpoint", n, -1, float(radii[n] - mid.max())))
                    worst["step"] = min(worst["step"], float(radii[n] - mid.max()))
            drift = np.linalg.norm(iters[n + 1] - g, axis=1)
            record("telescoping", n + 1, radii[:n + 1].sum() - drift)
    final_drift = float(np.linalg.norm(iters[-1] - g, axis=1).max(initial=0.0))
    final_slack = trace.delta * trace.r0 - final_drift
    if final_slack <= 0:
        violations.append(Violation("final_bound", len(iters) - 1, -1, final_slack))
    final_res = 0.0
    for row, i in enumerate(verts):
        v = phi.values[i]
        if not is_whole_space(v):
            final_res = max(final_res, distance_to_cloud(iters[-1][row], v))
    return CertificationReport(
        worst["residual"], worst["step"] if len(iters) > 1 else math.inf,
        worst["telescoping"] if len(iters) > 1 else math.inf,
        float(final_slack), float(final_res), violations)
