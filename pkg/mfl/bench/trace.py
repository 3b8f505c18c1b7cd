"""
Replayable run traces.

A trace file holds one JSON object per line: a ``header`` record, one
``event`` record per algorithm event and a ``final`` record with the cost
breakdown and a checksum of the final solution. Replaying a trace
rebuilds the solution from its ``open`` and ``serve`` events without
drawing a single random number.
"""
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from mfl.core.evaluation import priced
from mfl.core.exceptions import TraceMismatch
from mfl.core.instance import Instance, Solution
from mfl.core.serialization import stable_hash

PURCHASE_SUFFIX = "_purchase"


def solution_checksum(sol: Solution) -> str:
    return stable_hash(sol.as_dict())


@dataclass
class RunTrace:
    header: dict
    events: list[dict] = field(default_factory=list)
    final: dict | None = None

    @classmethod
    def start(cls, inst: Instance, algorithm: str, seed: int | None, arrival_order, **extra) -> "RunTrace":
        header = {
            "instance_hash": inst.content_hash,
            "algorithm": algorithm,
            "seed": seed,
            "k": inst.scalar_k if inst.scalar_k is not None else list(inst.requirement),
            "n": inst.n,
            "m": inst.m,
            "arrival_order": list(arrival_order),
        }
        header.update(extra)
        return cls(header=header)

    def emit(self, event: str, **payload) -> None:
        self.events.append({"event": event, **payload})

    def finish(self, sol: Solution, paid: float, **extra) -> None:
        self.final = {
            "cost": sol.cost_breakdown.as_dict(),
            "paid": paid,
            "checksum": solution_checksum(sol),
            **extra,
        }

    def events_of(self, *names: str) -> list[dict]:
        return [e for e in self.events if e["event"] in names]

    def purchase_costs(self) -> dict[str, float]:
        """Edge cost charged per purchase reason."""
        costs = {}
        for e in self.events:
            if e["event"].endswith(PURCHASE_SUFFIX):
                costs.setdefault(e["event"].removesuffix(PURCHASE_SUFFIX), []).append(e["cost"])
        return {reason: math.fsum(values) for reason, values in costs.items()}

    def records(self):
        yield {"record": "header", **self.header}
        for event in self.events:
            yield {"record": "event", **event}
        if self.final is not None:
            yield {"record": "final", **self.final}

    def dump(self, path: Path | str) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8") as fh:
            for record in self.records():
                fh.write(json.dumps(record, sort_keys=True) + "\n")
        return path

    @classmethod
    def load(cls, path: Path | str) -> "RunTrace":
        trace = None
        with open(path, encoding="utf-8") as fh:
            for line_no, line in enumerate(fh, start=1):
                if not line.strip():
                    continue
                try:
                    record = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise TraceMismatch(reason=f"line {line_no} is not JSON ({exc})") from exc
                kind = record.pop("record", None)
                if kind == "header":
                    trace = cls(header=record)
                elif trace is None:
                    raise TraceMismatch(reason="trace does not start with a header record")
                elif kind == "event":
                    trace.events.append(record)
                elif kind == "final":
                    trace.final = record
                else:
                    raise TraceMismatch(reason=f"unknown record type {kind!r} on line {line_no}")
        if trace is None:
            raise TraceMismatch(reason="empty trace file")
        return trace


def replay(trace: RunTrace, inst: Instance) -> Solution:
    """
    Rebuild the final solution of a traced run. Raises ``TraceMismatch``
    when the trace belongs to another instance or when the rebuilt solution,
    its cost or the paid edge cost differ from the final record.
    """
    if trace.header.get("instance_hash") != inst.content_hash:
        raise TraceMismatch(reason="instance hash differs from the trace header")

    sol = Solution()
    for event in trace.events:
        if event["event"] == "open":
            sol.open(event["facility"])
        elif event["event"] == "serve":
            sol.assign(event["client"], event["facility"])
    priced(inst, sol)

    if trace.final is not None:
        if solution_checksum(sol) != trace.final["checksum"]:
            raise TraceMismatch(reason="replayed solution differs from the recorded final state")
        if sol.cost_breakdown.as_dict() != trace.final["cost"]:
            raise TraceMismatch(reason="replayed cost breakdown differs from the recorded one")
        purchases = [e["cost"] for e in trace.events if e["event"].endswith(PURCHASE_SUFFIX)]
        if purchases and math.fsum(purchases) != trace.final["paid"]:
            raise TraceMismatch(reason="purchase events do not add up to the recorded paid cost")
    return sol
