"""
Experiment execution: one run, or a plan of seeded runs fanned out over
worker processes. Results come back in seed order regardless of the number
of workers.
"""
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

from adversary.strategies import build_strategy
from experiments.aggregate import build_report
from experiments.inputs import build_inputs
from experiments.metrics import collect_metrics
from experiments.schema import validate_report
from netsim.config import SEED_LIMIT
from netsim.network import Network
from protocols.host import Runtime

logger = logging.getLogger(__name__)


@dataclass
class RunResult:
    config: object
    trace: object
    metrics: object
    network: object = field(default=None, repr=False)


@dataclass(frozen=True)
class ExperimentPlan:
    """
    A base configuration and the seeds to run it with. With an input
    pattern, every seed draws its own inputs.
    """
    config: object
    seeds: tuple
    inputs_pattern: str = None

    @property
    def configs(self):
        configs = []
        for seed in self.seeds:
            config = self.config.with_seed(seed)
            if self.inputs_pattern:
                inputs = build_inputs(self.inputs_pattern, config.protocol, config.params.n, seed)
                config = replace(config, inputs=inputs)
            configs.append(config)
        return configs


def seeds_for(base_seed, runs):
    return tuple((base_seed + index) % SEED_LIMIT for index in range(runs))


def execute(config, strategy=None):
    """Run ``config`` once; returns its trace and metrics."""
    if strategy is None:
        strategy = build_strategy(config.adversary, config.seed)
    network = Network(config, None, strategy)
    runtime = Runtime(network)
    network.process_factory = runtime.host_factory
    trace = network.run()
    metrics = collect_metrics(network)
    trace.metrics = metrics
    return RunResult(config=config, trace=trace, metrics=metrics, network=network)


def _run_detached(config, keep_trace):
    result = execute(config)
    return result.metrics, result.trace.to_jsonl() if keep_trace else None


def run_plan(plan, workers=1, keep_traces=False):
    """[(metrics, trace JSONL or None)] for every seed of ``plan``, in seed order."""
    configs = plan.configs
    logger.info('running %d %s runs at n=%d with %d worker(s)',
                len(configs), plan.config.protocol, plan.config.params.n, workers)
    if workers <= 1 or len(configs) <= 1:
        return [_run_detached(config, keep_traces) for config in configs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_run_detached, configs, [keep_traces] * len(configs)))


def run_experiment(plans, workers=1, keep_traces=False):
    """
    Run every plan and aggregate them into one validated report.

    Returns (report, groups, traces) where ``groups`` pairs each base config
    with its per-run metrics and ``traces`` maps (n, seed) to trace JSONL
    when ``keep_traces`` is set.
    """
    if not plans:
        raise ValueError('run_experiment needs at least one plan')
    groups = []
    traces = {}
    for plan in plans:
        results = run_plan(plan, workers=workers, keep_traces=keep_traces)
        groups.append((plan.config, [metrics for metrics, _ in results]))
        if keep_traces:
            for metrics, jsonl in results:
                traces[(metrics.n, metrics.seed)] = jsonl
    report = validate_report(build_report(plans[0].config.protocol, groups))
    logger.info('experiment finished: %d runs, %d violations, exit_ok=%s',
                report['totals']['runs'], report['totals']['violations'], report['exit_ok'])
    return report, groups, traces
