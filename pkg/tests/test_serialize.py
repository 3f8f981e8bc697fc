import json

import pytest

from conftest import small_random
from mrenergy.alpha import run_algomr
from mrenergy.model import objective
from mrenergy.serialize import (
    dumps_instance, dumps_schedule, instance_from_dict, instance_to_dict, load_instance,
    load_schedule, loads_schedule, save_instance, save_schedule,
)


def test_instance_round_trip(tmp_path):
    inst = small_random(5)
    path = tmp_path / "inst.json"
    save_instance(inst, path)
    assert load_instance(path) == inst
    d = json.loads(dumps_instance(inst))
    assert set(d) >= {"beta", "energy_budget", "num_processors", "jobs"}
    assert d["jobs"][0]["tasks"][0]["kind"] in ("map", "reduce")
    assert instance_from_dict(instance_to_dict(inst)) == inst


def test_schedule_round_trip(tmp_path):
    inst = small_random(2, m=3, n=2)
    sched = run_algomr(inst).schedule
    text = dumps_schedule(inst, sched)
    lines = text.splitlines()
    assert lines[0] == "job_id,kind,processor,start,duration,speed,energy,completion"
    keys = [(float(l.split(",")[3]), int(l.split(",")[2])) for l in lines[1:]]
    assert keys == sorted(keys)
    back = loads_schedule(inst, text)
    assert back.by_ref.keys() == sched.by_ref.keys()
    assert objective(inst, back) == pytest.approx(objective(inst, sched), rel=1e-15)
    path = tmp_path / "s.csv"
    save_schedule(inst, sched, path)
    assert load_schedule(inst, path) == back
