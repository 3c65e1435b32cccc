"""Partition counts, reduced characters, Dedekind eta and the nuclearity probe.

Conventions: ``eta(i beta / 2 pi) = exp(-beta/24) prod_{m>=1} (1 - exp(-beta m))``,
so the U(1) character is ``p(e^{-beta}) = exp(-beta/24) / eta(i beta / 2 pi)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Sequence, Tuple

import mpmath
import numpy as np

DEFAULT_DPS = 30


def partition_series(N_max: int) -> List[int]:
    """``p(0), ..., p(N_max)`` by Euler's pentagonal-number recurrence."""
    if N_max < 0:
        raise ValueError("N_max must be non-negative")
    p = [1] + [0] * N_max
    for N in range(1, N_max + 1):
        total = 0
        k = 1
        while True:
            g1 = k * (3 * k - 1) // 2
            if g1 > N:
                break
            sign = 1 if k % 2 else -1
            total += sign * p[N - g1]
            g2 = k * (3 * k + 1) // 2
            if g2 <= N:
                total += sign * p[N - g2]
            k += 1
        p[N] = total
    return p


def partitions_min_part(N_max: int, smallest: int) -> List[int]:
    """Coefficients of ``prod_{m >= smallest} (1 - x^m)^{-1}`` up to ``x^N_max``."""
    d = [1] + [0] * N_max
    for part in range(max(smallest, 1), N_max + 1):
        for N in range(part, N_max + 1):
            d[N] += d[N - part]
    return d


@dataclass(frozen=True)
class CharacterSeries:
    n: int
    N_max: int
    coefficients: Tuple[int, ...]

    def to_dict(self) -> dict:
        return {"n": self.n, "N_max": self.N_max, "coefficients": list(self.coefficients)}


def reduced_character(n: int, N_max: int) -> CharacterSeries:
    """Level multiplicities after removing null vectors: partitions into parts ``>= n + 1``."""
    return CharacterSeries(n, N_max, tuple(partitions_min_part(N_max, n + 1)))


def generating_identity_holds(series: CharacterSeries) -> bool:
    """``sum d_N x^N * prod_{m >= n+1} (1 - x^m) == 1`` modulo ``x^{N_max + 1}``."""
    N_max = series.N_max
    poly = list(series.coefficients)
    for m in range(series.n + 1, N_max + 1):
        poly = [poly[i] - (poly[i - m] if i >= m else 0) for i in range(N_max + 1)]
    return poly == [1] + [0] * N_max


@dataclass(frozen=True)
class EtaValue:
    beta: float
    value: mpmath.mpf
    error_bound: mpmath.mpf
    terms: int


def _product_terms(x: mpmath.mpf, dps: int) -> Tuple[int, mpmath.mpf]:
    # |log prod_{m>M}(1 - x^m)| <= x^{M+1} / ((1 - x)(1 - x^{M+1}))
    target = mpmath.mpf(10) ** (-(dps + 5))
    M = 0
    while True:
        tail = x ** (M + 1) / ((1 - x) * (1 - x ** (M + 1)))
        if tail < target:
            return M, 2 * tail
        M = max(M + 1, int(M * 1.5))


def eta(beta, precision: int = DEFAULT_DPS) -> EtaValue:
    """``eta(i beta / 2 pi)`` from the truncated product with a certified tail.

    The error bound is relative: ``|value / exact - 1| <= error_bound``.
    """
    if not beta > 0:
        raise ValueError("beta must be positive")
    with mpmath.workdps(precision + 10):
        b = mpmath.mpf(beta)
        x = mpmath.exp(-b)
        M, err = _product_terms(x, precision)
        prod = mpmath.mpf(1)
        xm = mpmath.mpf(1)
        for _ in range(M):
            xm *= x
            prod *= 1 - xm
        value = mpmath.exp(-b / 24) * prod
        return EtaValue(float(beta), +value, +err, M)


def modular_check(beta, precision: int = DEFAULT_DPS) -> mpmath.mpf:
    """Residual ``|sqrt(beta / 2 pi) eta(i beta / 2 pi) - eta(2 pi i / beta)|``."""
    with mpmath.workdps(precision + 10):
        b = mpmath.mpf(beta)
        dual = 4 * mpmath.pi ** 2 / b  # i 2pi/beta = i beta'/2pi with beta' = 4 pi^2 / beta
        lhs = mpmath.sqrt(b / (2 * mpmath.pi)) * eta(b, precision).value
        rhs = eta(dual, precision).value
        return abs(lhs - rhs)


def partition_generating_value(beta, precision: int = DEFAULT_DPS) -> mpmath.mpf:
    """``p(e^{-beta}) = sum_N p(N) e^{-beta N}`` through eta.

    Below ``beta = 0.5`` the dual argument ``4 pi^2 / beta`` is used, where the
    product converges in a handful of factors.
    """
    with mpmath.workdps(precision + 10):
        b = mpmath.mpf(beta)
        if b < 0.5:
            dual = 4 * mpmath.pi ** 2 / b
            eta_b = eta(dual, precision).value / mpmath.sqrt(b / (2 * mpmath.pi))
        else:
            eta_b = eta(b, precision).value
        return +(mpmath.exp(-b / 24) / eta_b)


def log_partition_generating_value(beta, precision: int = DEFAULT_DPS) -> mpmath.mpf:
    with mpmath.workdps(precision + 10):
        return +mpmath.log(partition_generating_value(beta, precision))


def partition_sum_direct(beta, N_max: int, precision: int = DEFAULT_DPS) -> Tuple[mpmath.mpf, mpmath.mpf]:
    """Truncated ``sum_{N <= N_max} p(N) e^{-beta N}`` and a bound on the omitted tail.

    Uses ``p(N) <= exp(pi sqrt(2N/3))``; the tail bound is only meaningful once
    ``beta`` dominates that growth.
    """
    p = partition_series(N_max)
    with mpmath.workdps(precision + 10):
        b = mpmath.mpf(beta)
        s = mpmath.fsum(mpmath.mpf(pN) * mpmath.exp(-b * N) for N, pN in enumerate(p))
        tail = mpmath.nsum(
            lambda N: mpmath.exp(mpmath.pi * mpmath.sqrt(2 * N / 3) - b * N), [N_max + 1, mpmath.inf]
        )
        return +s, +tail


def default_beta_grid(start: float = 0.5, stop: float = 0.02, count: int = 25) -> List[float]:
    return [float(x) for x in np.geomspace(start, stop, count)]


@dataclass
class NuclearityReport:
    beta0: float
    n_exp: int
    betas: List[float]
    values: List[mpmath.mpf]
    log_values: List[mpmath.mpf]
    partition_values: List[mpmath.mpf]
    verdict: str
    tail_start: int
    growth_constant: float
    notes: List[str] = field(default_factory=list)

    def rows(self):
        for b, p, f, lf in zip(self.betas, self.partition_values, self.values, self.log_values):
            yield b, p, f, lf

    def to_dict(self, digits: int = 17) -> dict:
        return {
            "beta0": self.beta0,
            "n_exp": self.n_exp,
            "verdict": self.verdict,
            "tail_start": self.tail_start,
            "growth_constant": self.growth_constant,
            "table": [
                {
                    "beta": b,
                    "p": mpmath.nstr(p, digits),
                    "f": mpmath.nstr(f, digits),
                    "log_f": mpmath.nstr(lf, digits),
                }
                for b, p, f, lf in self.rows()
            ],
            "notes": list(self.notes),
        }


PUBLISHED_THRESHOLD = -1 + math.pi ** 2 / 6


def estimate_growth_constant(betas: Sequence[float], precision: int = DEFAULT_DPS) -> float:
    """Fit ``log p(e^{-beta}) ~ A / beta + B log beta + C + D beta`` and return ``A``.

    ``A`` is the coefficient the exponent ``beta0 / beta`` has to beat when the
    exponent power is 1.
    """
    bs = np.asarray(sorted(betas), dtype=float)
    if len(bs) < 4:
        raise ValueError("need at least four grid points")
    y = np.array([float(log_partition_generating_value(b, precision)) for b in bs])
    design = np.column_stack([1 / bs, np.log(bs), np.ones_like(bs), bs])
    coef, *_ = np.linalg.lstsq(design, y, rcond=None)
    return float(coef[0])


def nuclearity_probe(beta0: float, n_exp: int, beta_grid: Sequence[float] | None = None,
                     precision: int = DEFAULT_DPS, tail_fraction: float = 0.25) -> NuclearityReport:
    """Sample ``p(e^{-beta}) exp(-(beta0/beta)^n_exp)`` along a decreasing grid.

    The verdict looks at the last ``tail_fraction`` of the grid: ``"vanishing"``
    if the values strictly decrease there, ``"diverging"`` if they strictly
    increase, ``"inconclusive"`` otherwise.
    """
    betas = [float(b) for b in (beta_grid if beta_grid is not None else default_beta_grid())]
    if n_exp < 1:
        raise ValueError("n_exp must be a positive integer")
    if len(betas) < 3 or any(b <= 0 for b in betas) or any(b2 >= b1 for b1, b2 in zip(betas, betas[1:])):
        raise ValueError("beta grid must be positive, strictly decreasing, with at least 3 points")
    values, logs, parts = [], [], []
    with mpmath.workdps(precision + 10):
        for b in betas:
            lp = log_partition_generating_value(b, precision)
            lf = lp - (mpmath.mpf(beta0) / mpmath.mpf(b)) ** n_exp
            parts.append(mpmath.exp(lp))
            logs.append(lf)
            values.append(mpmath.exp(lf))
    tail_start = min(len(betas) - 3, int(len(betas) * (1 - tail_fraction)))
    tail = logs[tail_start:]
    diffs = [b - a for a, b in zip(tail, tail[1:])]
    if all(d < 0 for d in diffs):
        verdict = "vanishing"
    elif all(d > 0 for d in diffs):
        verdict = "diverging"
    else:
        verdict = "inconclusive"
    growth = estimate_growth_constant(betas, precision)
    notes = []
    if n_exp == 1:
        notes.append(
            f"open question: fitted growth constant {growth:.10f} (pi^2/6 = {math.pi ** 2 / 6:.10f}) "
            f"sets the beta0 threshold for n_exp = 1; the published threshold -1 + pi^2/6 = "
            f"{PUBLISHED_THRESHOLD:.10f} lies below it"
        )
        if PUBLISHED_THRESHOLD < beta0 < growth and verdict != "vanishing":
            notes.append("beta0 satisfies the published threshold but the probe does not vanish")
    return NuclearityReport(beta0, n_exp, betas, values, logs, parts, verdict, tail_start, growth, notes)
