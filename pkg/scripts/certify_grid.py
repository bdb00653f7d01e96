#!/usr/bin/env python3
"""Certify the analytic pipeline against the quadrature oracle on a grid.

Sweeps every parity-valid order tuple up to --order-max over a list of
momentum pairs, evaluates both paths, and reports the discrepancy
distribution plus the slowest evaluations. Exits nonzero if any cell
exceeds the tolerance.

Example:
    python scripts/certify_grid.py --order-max 3 --k-pairs 1:2,2:5 --tolerance 1e-6
"""
from __future__ import annotations

import argparse
import itertools
import sys
import time
from dataclasses import dataclass

from fourbessel import (
    IntegralSpec,
    NoValidBridge,
    QuadratureConfig,
    evaluate,
    quad_bessel_numeric,
)


@dataclass(frozen=True)
class GridConfig:
    order_max: int = 3
    momentum_pairs: tuple[tuple[float, float], ...] = ((1.0, 2.0), (2.0, 5.0))
    tolerance: float = 1e-6
    rel_tol: float = 1e-8


@dataclass
class CellResult:
    spec: IntegralSpec
    analytic: float
    oracle: float
    discrepancy: float
    seconds: float


def parse_momentum_pairs(text: str) -> tuple[tuple[float, float], ...]:
    pairs = []
    for chunk in text.split(","):
        k1_text, k2_text = chunk.strip().split(":")
        pairs.append((float(k1_text), float(k2_text)))
    return tuple(pairs)


def run_grid(config: GridConfig) -> tuple[list[CellResult], int]:
    oracle_config = QuadratureConfig(rel_tol=config.rel_tol)
    results: list[CellResult] = []
    skipped = 0
    for orders in itertools.product(range(config.order_max + 1), repeat=4):
        for k1, k2 in config.momentum_pairs:
            spec = IntegralSpec(*orders, k1, k2)
            start = time.perf_counter()
            try:
                analytic = evaluate(spec).value
            except NoValidBridge:
                skipped += 1
                continue
            oracle, _ = quad_bessel_numeric(spec, oracle_config)
            seconds = time.perf_counter() - start
            scale = max(abs(oracle), 1e-300)
            results.append(
                CellResult(spec, analytic, oracle, abs(analytic - oracle) / scale, seconds)
            )
    return results, skipped


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--order-max", type=int, default=3)
    parser.add_argument("--k-pairs", type=parse_momentum_pairs, default=((1.0, 2.0), (2.0, 5.0)))
    parser.add_argument("--tolerance", type=float, default=1e-6)
    parser.add_argument("--rel-tol", type=float, default=1e-8)
    parser.add_argument("--top", type=int, default=10, help="how many worst cells to list")
    args = parser.parse_args(argv)

    config = GridConfig(args.order_max, tuple(args.k_pairs), args.tolerance, args.rel_tol)
    started = time.perf_counter()
    results, skipped = run_grid(config)
    elapsed = time.perf_counter() - started

    results.sort(key=lambda cell: cell.discrepancy, reverse=True)
    print(f"evaluated {len(results)} cells ({skipped} skipped, no parity-valid "
          f"bridge) in {elapsed:.1f}s")
    print(f"{'orders':>14} {'k1':>6} {'k2':>6} {'analytic':>15} {'oracle':>15} "
          f"{'rel disc':>10} {'sec':>7}")
    for cell in results[: args.top]:
        spec = cell.spec
        print(f"{str(spec.orders):>14} {spec.k1:>6.3g} {spec.k2:>6.3g} "
              f"{cell.analytic:>15.8e} {cell.oracle:>15.8e} "
              f"{cell.discrepancy:>10.2e} {cell.seconds:>7.3f}")
    worst = results[0].discrepancy if results else 0.0
    print(f"worst relative discrepancy: {worst:.3e} (tolerance {config.tolerance:g})")
    if worst > config.tolerance:
        print("FAIL: tolerance exceeded", file=sys.stderr)
        return 1
    print("OK")
    return 0


if __name__ == "__main__":
    sys.exit(main())
