from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True, order=True)
class Violation:
    """A failed instance of some universally quantified law.

    ``config`` holds the offending configuration as ``(role, value)`` pairs
    rendered to strings, so a witness can be re-checked by hand or re-parsed.
    """

    kind: str
    config: tuple = field(default=())
    message: str = ""

    @classmethod
    def of(cls, kind, message="", **config):
        return cls(kind, tuple((k, str(v)) for k, v in config.items()), message)

    def as_dict(self):
        return {"kind": self.kind, "config": dict(self.config), "message": self.message}

    def __str__(self):
        parts = ", ".join(f"{k}={v}" for k, v in self.config)
        return f"{self.kind}({parts})" + (f": {self.message}" if self.message else "")


def kinds(violations):
    return sorted({v.kind for v in violations})
