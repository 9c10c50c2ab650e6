"""Minimal protocol used to exercise the network on its own."""
from dataclasses import dataclass
from functools import cached_property

from committee.tags import digest, encode_parts
from netsim.config import RunConfig
from params.engine import SystemParams


@dataclass(frozen=True, eq=False)
class Ping:
    kind = 'ping'
    sender: int

    @cached_property
    def digest(self):
        return digest(encode_parts('ping', self.sender))

    def words(self, W):
        return 1


class PingHost:
    """Broadcasts one ping and decides the number of pings once it has heard from everyone correct."""

    def __init__(self, ctx, expected):
        self.ctx = ctx
        self.expected = expected
        self.heard = set()

    def start(self):
        self.ctx.broadcast(Ping(self.ctx.pid))

    def on_message(self, envelope):
        self.heard.add(envelope.payload.sender)
        if len(self.heard) == self.expected:
            self.ctx.decide(len(self.heard))
            self.ctx.finish()


def ping_factory(expected):
    return lambda ctx: PingHost(ctx, expected)


def small_config(n=4, seed=1, f=0, **kwargs):
    params = SystemParams.custom(n, n, n - max(f, 1), f, f=f)
    kwargs.setdefault('protocol', 'coin')
    return RunConfig(params=params, seed=seed, inputs=(0,) * n, **kwargs)
