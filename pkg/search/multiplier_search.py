"""
Multiplier Search — iterfix

Multi-start Nelder–Mead minimisation of M_n over monic centered polynomials
of degree d, parametrised by the real and imaginary parts of their free
coefficients.  A value below the conjectured floor is a counterexample
candidate for the B/C bounds and must go through re-verification.

Design:
  1. Starts are uniform in the polydisk of ``domain_radius``; start i uses
     ``sample_rng(seed, i)``
  2. Each start runs its own simplex; starts run in parallel
  3. Root-finding failures score the penalty value instead of aborting
  4. The best start wins; ties go to the lowest start index
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

import config
from bounds.bound_checks import Flavor, sample_rng, threshold_for
from dynamics.periodic_points import max_multiplier
from errors import BadLength, DegreeOverflow, NoConvergence
from poly.polynomial import Polynomial
from rootfind.aberth import RootFindConfig

logger = logging.getLogger(__name__)

# Reflection, expansion, contraction and shrink coefficients.
_ALPHA, _GAMMA, _RHO, _SIGMA = 1.0, 2.0, 0.5, 0.5


@dataclass(frozen=True)
class SearchConfig:
    d: int
    n: int
    starts: int = config.SEARCH_STARTS
    iters_per_start: int = config.SEARCH_ITERS
    seed: int = 0
    simplex_init_scale: float = config.SIMPLEX_INIT_SCALE
    objective_tol: float = config.OBJECTIVE_TOL
    domain_radius: float = config.DOMAIN_RADIUS
    flavor: Flavor = Flavor.C

    def __post_init__(self) -> None:
        object.__setattr__(self, "flavor", Flavor(self.flavor))
        if self.d < 2:
            raise ValueError(f"d must be at least 2, got {self.d}")
        if self.n < 2:
            raise ValueError(f"n must be at least 2, got {self.n}")
        if self.seed < 0:
            raise ValueError(f"seed must be non-negative, got {self.seed}")
        if self.starts < 1 or self.iters_per_start < 0:
            raise ValueError("starts must be positive and iters_per_start non-negative")
        if min(self.simplex_init_scale, self.objective_tol, self.domain_radius) <= 0:
            raise ValueError("simplex_init_scale, objective_tol and domain_radius must be positive")
        if self.flavor is Flavor.THEOREM3:
            raise ValueError("search flavor must be B or C")
        if self.d ** self.n > config.MAX_DEGREE:
            raise DegreeOverflow(
                f"iterated degree {self.d}**{self.n} exceeds max_degree {config.MAX_DEGREE}"
            )

    @property
    def dimension(self) -> int:
        return 2 * (self.d - 1)


@dataclass(frozen=True)
class SearchResult:
    best_value: float
    best_params: tuple[float, ...]
    best_polynomial: Polynomial
    evaluations: int
    per_start_bests: tuple[float, ...]
    conjecture_floor: float
    config: SearchConfig = field(repr=False)

    @property
    def below_floor(self) -> bool:
        return self.best_value < self.conjecture_floor - config.FLOOR_SLACK


def encode(params: Sequence[float], d: int | None = None) -> Polynomial:
    """
    Build z^d + a_{d−2}z^{d−2} + … + a₀ from interleaved (re, im) pairs.

    Pair j holds the coefficient of z^{d−2−j}, so for d = 3 the vector
    [1, 0, 0, 1] encodes z³ + z + i.

    Raises:
        BadLength: if len(params) ≠ 2(d − 1).
    """
    values = np.asarray(params, dtype=float).ravel()
    if d is None:
        if len(values) < 2 or len(values) % 2:
            raise BadLength(f"parameter vector of length {len(values)} encodes no degree")
        d = len(values) // 2 + 1
    if len(values) != 2 * (d - 1):
        raise BadLength(f"degree {d} needs {2 * (d - 1)} parameters, got {len(values)}")
    pairs = values[0::2] + 1j * values[1::2]
    free = tuple(pairs[::-1])            # constant term first
    return Polynomial(free + (0j, 1 + 0j))


def objective(
    params: Sequence[float],
    cfg: SearchConfig,
    root_cfg: RootFindConfig | None = None,
) -> float:
    """M_n(encode(params)); ``config.PENALTY`` when the root finder gives up."""
    p = encode(params, cfg.d)
    try:
        value = max_multiplier(p, cfg.n, root_cfg)
    except NoConvergence as exc:
        logger.debug("penalty at %s: %s", p, exc)
        return config.PENALTY
    return value if math.isfinite(value) else config.PENALTY


def nelder_mead(
    func: Callable[[np.ndarray], float],
    x0: Sequence[float],
    scale: float,
    tol: float,
    max_iter: int,
) -> tuple[np.ndarray, float, int]:
    """
    Minimise *func* from *x0*.

    The initial simplex adds *scale* along each axis.  Iteration stops when
    every vertex lies within *tol* of the best one or after *max_iter*
    iterations.  Returns (best point, best value, evaluations).
    """
    x0 = np.asarray(x0, dtype=float)
    if max_iter == 0:
        return x0, func(x0), 1

    dim = len(x0)
    simplex = np.vstack([x0] + [x0 + scale * np.eye(dim)[i] for i in range(dim)])
    values = np.array([func(x) for x in simplex])
    evaluations = dim + 1

    for _ in range(max_iter):
        order = np.argsort(values, kind="stable")
        simplex, values = simplex[order], values[order]
        if np.max(np.linalg.norm(simplex[1:] - simplex[0], axis=1)) < tol:
            break

        centroid = simplex[:-1].mean(axis=0)
        worst = simplex[-1]
        reflected = centroid + _ALPHA * (centroid - worst)
        f_reflected = func(reflected)
        evaluations += 1

        if values[0] <= f_reflected < values[-2]:
            simplex[-1], values[-1] = reflected, f_reflected
            continue

        if f_reflected < values[0]:
            expanded = centroid + _GAMMA * (reflected - centroid)
            f_expanded = func(expanded)
            evaluations += 1
            if f_expanded < f_reflected:
                simplex[-1], values[-1] = expanded, f_expanded
            else:
                simplex[-1], values[-1] = reflected, f_reflected
            continue

        # contraction: outside when the reflection beat the worst vertex
        if f_reflected < values[-1]:
            contracted = centroid + _RHO * (reflected - centroid)
            f_contracted = func(contracted)
            evaluations += 1
            if f_contracted <= f_reflected:
                simplex[-1], values[-1] = contracted, f_contracted
                continue
        else:
            contracted = centroid + _RHO * (worst - centroid)
            f_contracted = func(contracted)
            evaluations += 1
            if f_contracted < values[-1]:
                simplex[-1], values[-1] = contracted, f_contracted
                continue

        # shrink toward the best vertex
        for i in range(1, dim + 1):
            simplex[i] = simplex[0] + _SIGMA * (simplex[i] - simplex[0])
            values[i] = func(simplex[i])
        evaluations += dim

    best = int(np.argmin(values))
    return simplex[best], float(values[best]), evaluations


def start_point(cfg: SearchConfig, index: int) -> np.ndarray:
    """Uniform point of the polydisk, one disk per free coefficient."""
    rng = sample_rng(cfg.seed, index)
    count = cfg.d - 1
    moduli = cfg.domain_radius * np.sqrt(rng.random(count))
    angles = 2 * math.pi * rng.random(count)
    params = np.empty(2 * count)
    params[0::2] = moduli * np.cos(angles)
    params[1::2] = moduli * np.sin(angles)
    return params


def minimize(
    cfg: SearchConfig,
    root_cfg: RootFindConfig | None = None,
    workers: int | None = None,
) -> SearchResult:
    """Multi-start Nelder–Mead over the monic centered coefficients of degree cfg.d."""
    workers = workers or config.worker_count()

    def run_start(index: int) -> tuple[np.ndarray, float, int]:
        x, value, evaluations = nelder_mead(
            lambda params: objective(params, cfg, root_cfg),
            start_point(cfg, index),
            cfg.simplex_init_scale,
            cfg.objective_tol,
            cfg.iters_per_start,
        )
        logger.debug("start %d: %.12g after %d evaluations", index, value, evaluations)
        return x, value, evaluations

    with ThreadPoolExecutor(max_workers=workers) as executor:
        outcomes = list(executor.map(run_start, range(cfg.starts)))

    best_index = 0
    for i, (_, value, _) in enumerate(outcomes):
        if value < outcomes[best_index][1]:
            best_index = i
    best_x, best_value, _ = outcomes[best_index]
    floor = threshold_for(cfg.flavor, cfg.d, cfg.n)

    result = SearchResult(
        best_value=best_value,
        best_params=tuple(float(v) for v in best_x),
        best_polynomial=encode(best_x, cfg.d),
        evaluations=sum(ev for _, _, ev in outcomes),
        per_start_bests=tuple(value for _, value, _ in outcomes),
        conjecture_floor=floor,
        config=cfg,
    )
    if result.below_floor:
        logger.warning("search d=%d n=%d found %.12g below floor %g at %s",
                       cfg.d, cfg.n, best_value, floor, result.best_polynomial)
    else:
        logger.info("search d=%d n=%d: best %.12g (floor %g) over %d starts",
                    cfg.d, cfg.n, best_value, floor, cfg.starts)
    return result
