from netsim.config import RunConfig
from params.engine import SystemParams

# every process on every committee, small enough to trace by hand
SMALL_REQUEST = {'protocol': 'approver', 'n': [4], 'lambda': 4, 'W': 3, 'B': 0, 'd': 0}


def small_config(protocol='approver', inputs=None, seed=0):
    params = SystemParams.custom(4, 4, 3, 0)
    if inputs is None:
        inputs = (1,) * 4 if protocol == 'binary' else (b'v',) * 4
    return RunConfig(params=params, seed=seed, protocol=protocol, inputs=tuple(inputs))
