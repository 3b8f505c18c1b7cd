"""
Instance documents.

An instance file is a JSON object with the keys ``facilities`` (array of
``{id, opening_cost}``), ``clients`` (array of ``{id, costs}``), ``k``
(integer or array), ``metric`` (boolean) and ``arrival_order`` (array of
client ids).
"""
import hashlib
import json
from pathlib import Path
from typing import Any

from django.core.exceptions import ValidationError

from .instance import Instance


def canonical_json(value: Any) -> str:
    return json.dumps(value, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def stable_hash(value: Any) -> str:
    return hashlib.sha256(canonical_json(value).encode("utf-8")).hexdigest()


def instance_to_dict(inst: Instance) -> dict:
    k = inst.scalar_k
    return {
        "facilities": [{"id": f.id, "opening_cost": f.opening_cost} for f in inst.facilities],
        "clients": [{"id": c.id, "costs": dict(c.costs)} for c in inst.clients],
        "k": k if k is not None else list(inst.requirement),
        "metric": inst.metric,
        "arrival_order": list(inst.arrival_order),
    }


def instance_from_dict(data: dict) -> Instance:
    try:
        return Instance.build(
            facilities=[(f["id"], f["opening_cost"]) for f in data["facilities"]],
            clients=[(c["id"], c["costs"]) for c in data["clients"]],
            k=data["k"],
            metric=data.get("metric", False),
            arrival_order=data.get("arrival_order"),
        )
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise ValidationError(f"Malformed instance document: {exc!r}", code="malformed_instance") from exc


def instance_hash(inst: Instance) -> str:
    return stable_hash(instance_to_dict(inst))


def load_instance(path: Path | str) -> Instance:
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"Instance file `{path}` is not valid JSON: {exc}", code="malformed_instance") from exc
    return instance_from_dict(data)


def dump_instance(inst: Instance, path: Path | str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(instance_to_dict(inst), indent=2) + "\n", encoding="utf-8")
    return path
