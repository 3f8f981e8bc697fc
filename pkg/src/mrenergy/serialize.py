"""JSON instance files and CSV schedule files."""

from __future__ import annotations

import csv
import io
import json
from collections import defaultdict
from pathlib import Path

from .model import Instance, Job, Kind, Schedule, ScheduleEntry, Task, task_energy
from .errors import ScheduleError

SCHEDULE_HEADER = ["job_id", "kind", "processor", "start", "duration", "speed", "energy", "completion"]


def instance_to_dict(inst: Instance) -> dict:
    d = {
        "beta": inst.beta,
        "energy_budget": inst.energy_budget,
        "num_processors": inst.num_processors,
        "jobs": [
            {
                "id": j.id,
                "weight": j.weight,
                "release": j.release,
                "tasks": [
                    {"processor": t.processor, "kind": t.kind.value, "volume": t.volume}
                    for t in j.tasks
                ],
            }
            for j in inst.jobs
        ],
    }
    if not inst.strict:
        d["strict"] = False
    return d


def instance_from_dict(d: dict) -> Instance:
    jobs = tuple(
        Job(
            int(j["id"]),
            float(j["weight"]),
            float(j.get("release", 0.0)),
            tuple(Task(int(t["processor"]), Kind(t["kind"]), float(t["volume"])) for t in j["tasks"]),
        )
        for j in d["jobs"]
    )
    return Instance(
        float(d["beta"]),
        float(d["energy_budget"]),
        int(d["num_processors"]),
        jobs,
        bool(d.get("strict", True)),
    )


def dumps_instance(inst: Instance) -> str:
    return json.dumps(instance_to_dict(inst), indent=2, sort_keys=True) + "\n"


def save_instance(inst: Instance, path) -> None:
    Path(path).write_text(dumps_instance(inst))


def load_instance(path) -> Instance:
    return instance_from_dict(json.loads(Path(path).read_text()))


def dumps_schedule(inst: Instance, sched: Schedule) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SCHEDULE_HEADER)
    for e in sorted(sched.entries, key=lambda e: (e.start, e.processor)):
        task = inst.task(e.ref)
        w.writerow([
            e.job_id, task.kind.value, e.processor, repr(e.start), repr(e.duration),
            repr(e.speed), repr(task_energy(task.volume, e.duration, inst.beta)),
            repr(e.completion),
        ])
    return buf.getvalue()


def save_schedule(inst: Instance, sched: Schedule, path) -> None:
    Path(path).write_text(dumps_schedule(inst, sched))


def loads_schedule(inst: Instance, text: str) -> Schedule:
    """Parse schedule CSV; rows are matched to tasks by (job, processor, kind)."""
    slots: dict[tuple, list[int]] = defaultdict(list)
    for job in inst.jobs:
        for k, t in enumerate(job.tasks):
            slots[(job.id, t.processor, t.kind)].append(k)
    entries = []
    for row in csv.DictReader(io.StringIO(text)):
        key = (int(row["job_id"]), int(row["processor"]), Kind(row["kind"]))
        if not slots.get(key):
            raise ScheduleError(f"row does not match any unscheduled task: {key}")
        k = slots[key].pop(0)
        entries.append(
            ScheduleEntry(key[0], k, key[1], float(row["start"]), float(row["duration"]),
                          float(row["speed"]))
        )
    return Schedule(tuple(entries))


def load_schedule(inst: Instance, path) -> Schedule:
    return loads_schedule(inst, Path(path).read_text())
