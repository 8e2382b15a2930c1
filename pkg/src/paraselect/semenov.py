"""Radius-resolved paraconvexity and the damping recursion behind it.

A set is ``h``-paraconvex when the local defect at radius ``r`` is at most
``h(r)``. Given a dominating ``H`` the radii of successive approximation are
``H_n(t) * t`` with

    H_0(t) = 1,    H_{n+1}(t) = H(H_n(t) * t) * H_n(t),

and the scheme works when ``h < H`` and ``sum_n H_n(t)`` converges, which
is what :func:`check_ps` probes. Constant ``h = alpha``, ``H = gamma`` gives
back the geometric radii ``gamma**n * t``.
"""
import ast
import math
import operator
from dataclasses import dataclass, field

import numpy as np

from .errors import ContractError, InputError
from .geometry import TOL_GEO
from .selection import successive_approximation

TABLE_CAP = 1.0 - 1e-9


class ScalarFunction:
    """A function from the positive reals into ``[0, 1)`` with a JSON form.

    Build one with :meth:`constant`, :meth:`table`, :meth:`expression` or
    :meth:`from_spec`; any callable can be wrapped directly, in which case the
    object has no serialised form.

    >>> ScalarFunction.expression("min(s, 0.9)")(2.0)
    0.9
    """

    def __init__(self, fn, description="", spec=None):
        self._fn = fn
        self.description = description or getattr(fn, "__name__", "callable")
        self.spec = spec

    def __call__(self, s):
        return float(self._fn(float(s)))

    def __repr__(self):
        return f"ScalarFunction({self.description})"

    @classmethod
    def constant(cls, c):
        c = float(c)
        if not 0.0 <= c < 1.0:
            raise InputError(f"constant must lie in [0, 1), got {c}")
        return cls(lambda s: c, f"constant {c:g}", {"constant": c})

    @classmethod
    def table(cls, pairs):
        """Piecewise-linear interpolation of ``(r, value)`` pairs.

        Flat outside the table; values are clamped to ``[0, 1 - 1e-9]``.
        """
        arr = np.asarray(pairs, dtype=float)
        if arr.ndim != 2 or arr.shape[1] != 2 or len(arr) == 0:
            raise InputError("table needs a list of (r, value) pairs")
        arr = arr[np.argsort(arr[:, 0], kind="stable")]
        r, v = arr[:, 0], np.clip(arr[:, 1], 0.0, TABLE_CAP)
        if np.any(r <= 0):
            raise InputError("table arguments must be positive")
        return cls(lambda s: float(np.interp(s, r, v)), f"table of {len(r)} points",
                   {"table": [[float(a), float(b)] for a, b in zip(r, v)]})

    @classmethod
    def expression(cls, text):
        """Parse ``+ - *``, ``min``, ``max``, numbers and the variable ``s``."""
        code = _compile_expression(text)
        return cls(code, text, {"expression": text})

    @classmethod
    def from_spec(cls, spec):
        """Build from a number, an expression string or a one-key dict."""
        if isinstance(spec, ScalarFunction):
            return spec
        if isinstance(spec, (int, float)) and not isinstance(spec, bool):
            return cls.constant(spec)
        if isinstance(spec, str):
            try:
                return cls.constant(float(spec))
            except ValueError:
                return cls.expression(spec)
        if isinstance(spec, dict) and len(spec) == 1:
            (kind, arg), = spec.items()
            if kind == "constant":
                return cls.constant(arg)
            if kind == "table":
                return cls.table(arg)
            if kind == "expression":
                return cls.expression(arg)
        raise InputError(f"cannot build a scalar function from {spec!r}")

    def to_dict(self):
        if self.spec is None:
            raise InputError("this function has no serialised form")
        return dict(self.spec)


_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul}
_UNOPS = {ast.USub: operator.neg, ast.UAdd: operator.pos}
_CALLS = {"min": min, "max": max}


def _compile_expression(text):
    try:
        tree = ast.parse(text, mode="eval")
    except SyntaxError as exc:
        raise InputError(f"bad expression {text!r}: {exc.msg}") from None

    def build(node):
        if isinstance(node, ast.Expression):
            return build(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)) \
                and not isinstance(node.value, bool):
            v = float(node.value)
            return lambda s: v
        if isinstance(node, ast.Name) and node.id == "s":
            return lambda s: s
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            op, a, b = _BINOPS[type(node.op)], build(node.left), build(node.right)
            return lambda s: op(a(s), b(s))
        if isinstance(node, ast.UnaryOp) and type(node.op) in _UNOPS:
            op, a = _UNOPS[type(node.op)], build(node.operand)
            return lambda s: op(a(s))
        if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) \
                and node.func.id in _CALLS and len(node.args) >= 2 and not node.keywords:
            fn, args = _CALLS[node.func.id], [build(a) for a in node.args]
            return lambda s: fn(a(s) for a in args)
        raise InputError(f"unsupported construct in expression {text!r}: {ast.dump(node)}")

    return build(tree)


def _checked(fn, s, name="H"):
    v = fn(s)
    if not (0.0 <= v < 1.0):
        raise ContractError(f"{name}({s!r}) = {v!r} is outside [0, 1)")
    return v


@dataclass
class HSeries:
    """Iterates ``H_0(t), ..., H_N(t)`` and their running sums.

    ``tail_bound`` bounds ``sum_{n > N} H_n(t)`` from the worst ratio
    ``ratio_bound`` seen over the second half of the run; ``total`` adds it
    to the last partial sum.
    """

    t: float
    iterates: list
    partial_sums: list
    converged: bool
    tail_bound: float
    ratio_bound: float = math.nan

    @property
    def total(self):
        return self.partial_sums[-1] + self.tail_bound

    def to_dict(self):
        return {"t": self.t, "iterates": list(self.iterates),
                "partial_sums": list(self.partial_sums), "converged": self.converged,
                "tail_bound": self.tail_bound, "ratio_bound": self.ratio_bound,
                "total": self.total}

    def to_csv(self):
        rows = ["n,H_n,partial_sum"]
        rows += [f"{n},{h!r},{p!r}" for n, (h, p) in enumerate(zip(self.iterates, self.partial_sums))]
        return "\n".join(rows) + "\n"


def h_iterates(H, t, n_max=10_000, tail_tol=1e-10):
    """Run the damping recursion for ``n_max`` steps at argument ``t``.

    Stops early when an iterate underflows to zero, in which case the tail
    is exactly zero. The series counts as converged when the tail bound is
    at most ``tail_tol`` times the partial sum.

    >>> h_iterates(ScalarFunction.constant(0.5), 1.0, 4).iterates
    [1.0, 0.5, 0.25, 0.125, 0.0625]
    """
    H = ScalarFunction.from_spec(H)
    t = float(t)
    if not t > 0:
        raise InputError("t must be positive")
    if n_max < 0:
        raise InputError("n_max must be non-negative")
    iters, sums, ratios = [1.0], [1.0], []
    for _ in range(int(n_max)):
        ratio = _checked(H, iters[-1] * t)
        ratios.append(ratio)
        nxt = ratio * iters[-1]
        iters.append(nxt)
        sums.append(sums[-1] + nxt)
        if nxt == 0.0:
            return HSeries(t, iters, sums, True, 0.0, ratio)
    if not ratios:
        return HSeries(t, iters, sums, False, math.inf)
    q = max(ratios[len(ratios) // 2:])
    tail = iters[-1] * q / (1.0 - q)
    return HSeries(t, iters, sums, bool(tail <= tail_tol * sums[-1]), tail, q)


@dataclass
class PSReport:
    """Outcome of :func:`check_ps`."""

    holds: bool
    min_gap: float
    witness: float
    deltas: dict
    series: list = field(default_factory=list)
    reason: str = ""

    @property
    def max_delta(self):
        return max(self.deltas.values()) if self.deltas else math.nan

    def to_dict(self):
        return {"holds": self.holds, "min_gap": self.min_gap, "witness": self.witness,
                "deltas": {repr(t): d for t, d in self.deltas.items()},
                "max_delta": self.max_delta, "reason": self.reason}


def check_ps(h, H, t_grid, n_max=10_000, samples=64):
    """Probe property (PS): ``h < H`` strictly and ``sum H_n(t) < inf``.

    Dominance is tested on the arguments the recursion visits, on
    ``t_grid`` and on ``samples`` log-spaced points between the smallest
    visited argument and the largest ``t``. The report carries the smallest
    gap ``H - h`` with its argument, and ``delta(t) = sum_n H_n(t)`` per ``t``.
    """
    h, H = ScalarFunction.from_spec(h), ScalarFunction.from_spec(H)
    ts = [float(t) for t in np.atleast_1d(np.asarray(t_grid, dtype=float))]
    if not ts:
        raise InputError("t_grid must not be empty")
    series, deltas, args = [], {}, set(ts)
    converged = True
    for t in ts:
        hs = h_iterates(H, t, n_max)
        series.append(hs)
        deltas[t] = hs.total
        converged &= hs.converged
        args.update(x * t for x in hs.iterates if x * t > 0)
    lo, hi = min(args), max(args)
    if hi > lo:
        args.update(np.geomspace(lo, hi, samples).tolist())
    gap, witness = math.inf, None
    for s in sorted(args):
        g = _checked(H, s) - _checked(h, s, "h")
        if g < gap:
            gap, witness = g, s
    holds = gap > 0 and converged
    reason = ""
    if gap <= 0:
        reason = f"h is not strictly below H at s = {witness!r}"
    elif not converged:
        reason = "sum of H_n did not converge"
    return PSReport(holds, float(gap), float(witness), deltas, series, reason)


def functional_schedule(H, r0):
    """Radii ``H_n(r0) * r0`` for ``n = 0, 1, ...`` (an endless iterator)."""
    H = ScalarFunction.from_spec(H)
    hn = 1.0
    while True:
        yield hn * r0
        hn = _checked(H, hn * r0) * hn


def run_functional(phi, g, h, H, r0, tol_stop=1e-8, *, delta=None, max_iters=10_000,
                   n_max=10_000, tol_geo=TOL_GEO, strict=True):
    """Successive approximation with the radii ``H_n(r0) * r0``.

    Checks (PS) at ``t = r0`` first and raises :class:`InputError` when it
    fails. ``delta`` defaults to ``sum_n H_n(r0)`` (partial sum plus tail
    bound). The residual after step ``n`` is certified against
    ``H_{n+1}(r0) * r0``; its slack against ``h(rho_n) * rho_n`` is recorded in
    ``trace.paraconvex_slack``.
    """
    h, H = ScalarFunction.from_spec(h), ScalarFunction.from_spec(H)
    r0 = float(r0)
    if not r0 > 0:
        raise InputError("r0 must be positive")
    ps = check_ps(h, H, [r0], n_max)
    if not ps.holds:
        raise InputError(f"property (PS) fails: {ps.reason}")
    if delta is None:
        delta = ps.deltas[r0]
    return successive_approximation(
        phi, g, functional_schedule(H, r0), r0=r0, delta=float(delta), tol_stop=tol_stop,
        max_iters=max_iters, tol_geo=tol_geo, strict=strict,
        paraconvex_bound=lambda n, rho: h(rho) * rho)
