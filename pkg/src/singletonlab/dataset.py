"""Loading of HumanEval-X style task files (UTF-8 JSON lines, one task each)."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path

from .source_model import parse_compilation_unit

DEFAULT_FIELD_MAP = {
    "task_id": "task_id",
    "description": "prompt",
    "declaration": "declaration",
    "test_code": "test",
    "example_test": "example_test",
}

_MANDATORY = ("task_id", "description", "declaration", "test_code")


class DatasetError(Exception):
    pass


@dataclass(frozen=True)
class Task:
    task_id: str
    description: str
    declaration: str
    expected_class_name: str
    test_code: str
    example_test: str | None = None


@dataclass(frozen=True)
class TaskSet:
    tasks: tuple[Task, ...]
    source_digest: str

    def __len__(self) -> int:
        return len(self.tasks)

    def __iter__(self):
        return iter(self.tasks)


def load_tasks(
    path: str | Path,
    field_map: dict[str, str] | None = None,
    warnings: list[str] | None = None,
) -> TaskSet:
    """Read one Task per JSONL line; non-Java tasks are skipped with a warning."""
    mapping = dict(DEFAULT_FIELD_MAP)
    if field_map:
        mapping.update(field_map)
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise DatasetError(f"cannot read {path}: {exc}") from exc
    digest = hashlib.sha256(raw).hexdigest()

    tasks: list[Task] = []
    seen_ids: set[str] = set()
    for lineno, line in enumerate(raw.decode("utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise DatasetError(f"{path}: line {lineno}: not valid JSON: {exc}") from exc
        if not isinstance(obj, dict):
            raise DatasetError(f"{path}: line {lineno}: not a JSON object")
        values: dict[str, str] = {}
        for fieldname in _MANDATORY:
            key = mapping[fieldname]
            value = obj.get(key)
            if not isinstance(value, str) or not value:
                raise DatasetError(
                    f"{path}: line {lineno}: missing or empty field '{key}'"
                )
            values[fieldname] = value
        task_id = values["task_id"]
        lang = task_id.split("/", 1)[0] if "/" in task_id else ""
        if lang and lang.lower() != "java":
            _warn(warnings, f"line {lineno}: skipped non-Java task {task_id!r}")
            continue
        if task_id in seen_ids:
            raise DatasetError(f"{path}: line {lineno}: duplicate task_id {task_id!r}")
        seen_ids.add(task_id)
        example = obj.get(mapping["example_test"])
        classes = parse_compilation_unit(values["declaration"])
        expected = classes[0].class_name if classes else ""
        if not expected:
            _warn(warnings, f"line {lineno}: no class found in declaration of {task_id!r}")
        tasks.append(
            Task(
                task_id=task_id,
                description=values["description"],
                declaration=values["declaration"],
                expected_class_name=expected,
                test_code=values["test_code"],
                example_test=example if isinstance(example, str) else None,
            )
        )
    if not tasks:
        _warn(warnings, f"{path}: no tasks loaded")
    return TaskSet(tuple(tasks), digest)


def _warn(warnings: list[str] | None, message: str) -> None:
    if warnings is not None:
        warnings.append(message)
