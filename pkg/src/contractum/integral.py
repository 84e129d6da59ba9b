"""Nonlinear Fredholm solver: x(t) = lambda * int_a^b K(t, r, x(r)) dr.

The equation is discretized on a uniform grid and solved by successive
approximation of the integral operator, using the powered sup metric
d(x, y) = (max_i |x_i - y_i|)^s that makes the underlying space a
b-rectangular metric space with coefficient derived from s. The operator
is a contraction (and the solution unique) when the kernel satisfies a
Lipschitz-type bound in its third argument and |lambda| (b - a) <= e^(-s);
both hypotheses are checkable here, the kernel one only by sampling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import simpson

from .errors import NumericError
from .picard import FixedPointResult, IterationConfig, iterate

#: grid functions are plain float arrays on the problem's uniform grid
GridFunction = np.ndarray

DEFAULT_SOLVER_TOL = 1e-10  # on the powered metric: keeps s-th powers meaningful


@dataclass(frozen=True)
class IntegralProblem:
    """Interval, strength, kernel, coefficient, and grid resolution.

    The kernel is a scalar callable K(t, r, x). Quadrature is composite
    trapezoid by default; "simpson" is available when m is odd.
    """

    a: float
    b: float
    lam: float
    kernel: Callable[[float, float, float], float]
    s: float
    m: int = 65
    quadrature: str = "trapezoid"

    def __post_init__(self):
        if not self.a < self.b:
            raise ValueError(f"need a < b, got a={self.a}, b={self.b}")
        if self.m < 2:
            raise ValueError(f"grid size must be >= 2, got {self.m}")
        if not self.s > 1:
            raise ValueError(f"coefficient s must be > 1, got {self.s}")
        if self.quadrature not in ("trapezoid", "simpson"):
            raise ValueError(f"unknown quadrature {self.quadrature!r}")
        if self.quadrature == "simpson" and self.m % 2 == 0:
            raise ValueError("composite Simpson needs an odd grid size")

    def grid(self, m: int | None = None) -> np.ndarray:
        return np.linspace(self.a, self.b, self.m if m is None else m)

    def metric(self, x: GridFunction, y: GridFunction) -> float:
        """The powered sup metric (max |x_i - y_i|)^s."""
        return float(np.max(np.abs(np.asarray(x) - np.asarray(y)))) ** self.s

    def _integrate(self, values: np.ndarray, grid: np.ndarray) -> float:
        if self.quadrature == "simpson" and len(grid) % 2 == 1:
            return float(simpson(values, x=grid))
        return float(np.trapezoid(values, grid))


def lambda_bound(a: float, b: float, s: float) -> float:
    """Largest |lambda| admitted by the contraction argument: e^(-s) / (b - a)."""
    if not a < b:
        raise ValueError(f"need a < b, got a={a}, b={b}")
    if not s > 1:
        raise ValueError(f"coefficient s must be > 1, got {s}")
    return math.exp(-s) / (b - a)


def kernel_condition_rhs(s: float, gap: float) -> float:
    """The admissible kernel increment for |x - y| = gap:
    s^-(2+s) * e^(-1/(gap+1)) * gap."""
    return s ** (-(2.0 + s)) * math.exp(-1.0 / (gap + 1.0)) * gap


@dataclass
class KernelConditionReport:
    """Sampled check of the kernel's Lipschitz-type bound. advisory is
    always True: sampling cannot certify the condition."""

    checked: int
    violations: list[tuple[float, float, float, float, float, float]]
    advisory: bool = True

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {"checked": self.checked, "passed": self.passed,
                "advisory": self.advisory,
                "violations": [
                    {"t": t, "r": r, "x": x, "y": y, "lhs": lhs, "rhs": rhs}
                    for t, r, x, y, lhs, rhs in self.violations]}


def default_kernel_sampler(problem: IntegralProblem,
                           value_range: tuple[float, float] = (-3.0, 3.0)):
    """Uniform (t, r) over the interval and (x, y) over value_range, with
    x != y enforced by redraw."""
    lo, hi = value_range

    def draw(rng: np.random.Generator):
        t = float(rng.uniform(problem.a, problem.b))
        r = float(rng.uniform(problem.a, problem.b))
        x = float(rng.uniform(lo, hi))
        y = float(rng.uniform(lo, hi))
        while y == x:
            y = float(rng.uniform(lo, hi))
        return t, r, x, y

    return draw


def verify_kernel_condition(problem: IntegralProblem, sampler=None,
                            n: int = 1000, seed: int = 0) -> KernelConditionReport:
    """Check |K(t,r,x) - K(t,r,y)| <= s^-(2+s) e^(-1/(|x-y|+1)) |x-y| on
    ``n`` sampled tuples with x != y. The report is advisory."""
    if n < 1:
        raise ValueError(f"sample count must be >= 1, got {n}")
    if sampler is None:
        sampler = default_kernel_sampler(problem)
    rng = np.random.default_rng(seed)
    violations = []
    for _ in range(n):
        t, r, x, y = sampler(rng)
        kx = problem.kernel(t, r, x)
        ky = problem.kernel(t, r, y)
        if math.isnan(kx) or math.isnan(ky):
            raise NumericError(f"kernel returned NaN", where=(t, r, x, y))
        lhs = abs(kx - ky)
        rhs = kernel_condition_rhs(problem.s, abs(x - y))
        if lhs > rhs + 1e-12:
            violations.append((t, r, x, y, lhs, rhs))
    return KernelConditionReport(checked=n, violations=violations)


def apply_operator(problem: IntegralProblem, x: GridFunction) -> GridFunction:
    """One application of T(x)(t) = lambda * Q(K(t, ., x(.))) with the
    problem's composite quadrature on its m-point grid."""
    x = np.asarray(x, dtype=float)
    grid = problem.grid()
    if x.shape != grid.shape:
        raise ValueError(f"grid function has length {x.shape}, expected {grid.shape}")
    K = problem.kernel
    out = np.empty_like(grid)
    for i, t in enumerate(grid):
        integrand = np.array([K(t, r, xr) for r, xr in zip(grid, x)])
        out[i] = problem.lam * problem._integrate(integrand, grid)
    if np.isnan(out).any():
        bad = int(np.argwhere(np.isnan(out))[0])
        raise NumericError(f"operator value is NaN at t={grid[bad]!r}",
                           where=(grid[bad],))
    return out


@dataclass
class IntegralSolution:
    """A fixed-point run over grid functions, plus the hypothesis flag.

    lambda_bound_exceeded is a warning, not a refusal: the bound is
    sufficient for the contraction argument, not necessary."""

    result: FixedPointResult
    problem: IntegralProblem
    lambda_bound_exceeded: bool

    @property
    def values(self) -> GridFunction:
        return self.result.point

    @property
    def grid(self) -> np.ndarray:
        return self.problem.grid()

    def to_dict(self) -> dict:
        return {"result": self.result.to_dict(),
                "lambda_bound_exceeded": self.lambda_bound_exceeded,
                "sup_norm": float(np.max(np.abs(self.values)))}

    def write_csv(self, path) -> None:
        import csv
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["t", "x"])
            for t, v in zip(self.grid, self.values):
                writer.writerow([float(t), float(v)])


def solve(problem: IntegralProblem, config: IterationConfig | None = None,
          x0: float | Sequence[float] = 0.0) -> IntegralSolution:
    """Picard iteration of the integral operator under the powered sup
    metric. x0 may be a constant or a grid function. A lambda beyond
    lambda_bound triggers the warning flag, and iteration proceeds."""
    if config is None:
        config = IterationConfig(tol=DEFAULT_SOLVER_TOL)
    grid = problem.grid()
    if np.isscalar(x0):
        start = np.full_like(grid, float(x0))
    else:
        start = np.asarray(x0, dtype=float)
        if start.shape != grid.shape:
            raise ValueError(f"x0 has length {start.shape}, expected {grid.shape}")
    exceeded = abs(problem.lam) > lambda_bound(problem.a, problem.b, problem.s) + 1e-15
    result = iterate(lambda x: apply_operator(problem, x), start,
                     problem.metric, config)
    return IntegralSolution(result=result, problem=problem,
                            lambda_bound_exceeded=exceeded)


def refined_residual(problem: IntegralProblem, values: GridFunction,
                     refine: int = 2) -> float:
    """Self-consistency oracle: substitute the solution back into the
    equation using a finer quadrature (refine=2 gives 2m-1 points, the
    original grid with midpoints inserted) and return the sup-norm of
    x(t) - lambda * Q_fine(K(t, ., x(.))). The solution is interpolated
    linearly onto the fine grid."""
    if refine < 1:
        raise ValueError(f"refine must be >= 1, got {refine}")
    values = np.asarray(values, dtype=float)
    coarse = problem.grid()
    m_fine = refine * (problem.m - 1) + 1
    fine = problem.grid(m_fine)
    x_fine = np.interp(fine, coarse, values)
    K = problem.kernel
    worst = 0.0
    for i, t in enumerate(fine):
        integrand = np.array([K(t, r, xr) for r, xr in zip(fine, x_fine)])
        lhs = x_fine[i] - problem.lam * problem._integrate(integrand, fine)
        worst = max(worst, abs(float(lhs)))
    return worst
