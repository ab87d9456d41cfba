"""The strategy-by-scenario grid: how many assignments each strategy keeps."""

from __future__ import annotations

import dataclasses
import time
from dataclasses import dataclass

from .changes import apply_changes
from .encoder import WeightConfig
from .errors import GenerationFailed
from .generator import GeneratorConfig, generate_instance, generate_scenario, solve_original
from .reopt import ReoptStatus, Strategy, reoptimise

SCENARIOS = (1, 2, 3)


@dataclass(frozen=True)
class BenchCell:
    status: ReoptStatus
    kept: int
    total: int
    seconds: float

    def text(self) -> str:
        return f"{self.kept}/{self.total}" if self.status is ReoptStatus.SOLVED else "-"


@dataclass(frozen=True)
class BenchReport:
    seed: int
    total: int
    cells: dict  # (Strategy, scenario) -> BenchCell

    def cell(self, strategy: Strategy, scenario: int) -> BenchCell:
        return self.cells[strategy, scenario]

    def render(self, times: bool = False) -> str:
        header = ["Strategy"] + [f"Scenario {k}" for k in SCENARIOS]
        rows = [[s.title] + [self.cells[s, k].text() for k in SCENARIOS] for s in Strategy]
        if times:
            header.append("Seconds")
            for row, s in zip(rows, Strategy):
                row.append(f"{sum(self.cells[s, k].seconds for k in SCENARIOS):.2f}")
        widths = [max(len(r[i]) for r in [header] + rows) for i in range(len(header))]

        def line(r):
            return "  ".join(c.ljust(w) if i == 0 else c.rjust(w)
                             for i, (c, w) in enumerate(zip(r, widths))).rstrip()

        out = [f"seed {self.seed}, original solution has {self.total} assignments", line(header)]
        out += [line(r) for r in rows]
        return "\n".join(out) + "\n"


def run_bench(seed: int, config: GeneratorConfig | None = None,
              weights: WeightConfig = WeightConfig(), time_limit: float | None = 60.0
              ) -> BenchReport:
    """Generate the instance for ``seed``, derive scenarios 1 to 3 and run every strategy."""
    config = dataclasses.replace(config or GeneratorConfig(), seed=seed)
    instance = generate_instance(config)
    original = solve_original(instance, weights, config.time_limit)
    if original is None:
        raise GenerationFailed(f"seed {seed}: original problem not solvable within the limit")
    cells = {}
    for kind in SCENARIOS:
        changed = apply_changes(instance, generate_scenario(instance, original, kind, seed), original)
        for strategy in Strategy:
            start = time.perf_counter()
            r = reoptimise(changed, original, strategy, weights, time_limit)
            cells[strategy, kind] = BenchCell(r.status, r.kept_count, r.total_count,
                                              time.perf_counter() - start)
    return BenchReport(seed, len(original), cells)
