from netsim.config import RunConfig
from netsim.network import Network
from params.engine import SystemParams
from protocols.host import Runtime


def full_committee_params(n=4, W=3, B=0, f=0):
    """lambda = n: every process sits on every committee."""
    return SystemParams.custom(n, n, W, B, f=f)


def run_with_runtime(protocol, inputs, params=None, adversary=None, seed=1, **kwargs):
    params = params or full_committee_params(len(inputs))
    config = RunConfig(params=params, seed=seed, protocol=protocol, inputs=tuple(inputs), **kwargs)
    network = Network(config, None, adversary)
    runtime = Runtime(network)
    network.process_factory = runtime.host_factory
    return network, network.run(), runtime


def run_protocol(protocol, inputs, params=None, adversary=None, seed=1, **kwargs):
    network, trace, _ = run_with_runtime(protocol, inputs, params, adversary, seed, **kwargs)
    return network, trace


def decided_values(trace):
    return {pid: record['value'] for pid, record in trace.decisions.items()}
