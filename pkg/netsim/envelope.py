from dataclasses import dataclass, field


@dataclass(eq=False)
class MessageEnvelope:
    """
    One point-to-point delivery.

    ``payload`` is never replaced once sent; ``delivery_step`` is filled in by
    the scheduler when the envelope is handed to its recipient.
    """
    seq: int
    sender: int
    to: int
    payload: object
    send_step: int
    scheduled: int
    delivery_step: int = None
    sender_correct: bool = True
    digest: bytes = field(default=None, repr=False)

    def __post_init__(self):
        if self.digest is None:
            self.digest = self.payload.digest

    @property
    def kind(self):
        return self.payload.kind

    def sort_key(self):
        return self.scheduled, self.seq

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()
