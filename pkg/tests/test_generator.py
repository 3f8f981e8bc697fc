import numpy as np
import pytest

from mrenergy.errors import ParameterError
from mrenergy.generator import RNG_NAME, GenConfig, generate_instance, release_dates
from mrenergy.model import validate_instance
from mrenergy.serialize import dumps_instance


def test_paper_configuration_ranges():
    inst = generate_instance(GenConfig.full_scale(5, seed=3))
    maps = [t for j in inst.jobs for t in j.tasks if t.is_map]
    reduces = [t for j in inst.jobs for t in j.tasks if not t.is_map]
    assert (len(maps), len(reduces)) == (100, 50)
    assert all(1 <= t.volume <= 10 for t in maps)
    assert all(4 <= t.volume <= 40 for t in reduces)
    assert validate_instance(inst) == []


def test_reduce_volume_rule():
    inst = generate_instance(GenConfig(seed=9))
    for job in inst.jobs:
        mean_map = np.mean([job.tasks[k].volume for k in job.maps])
        for k in job.reduces:
            assert 1 <= job.tasks[k].volume - 3 * mean_map <= 10


def test_same_seed_same_file():
    a = dumps_instance(generate_instance(GenConfig(seed=42)))
    b = dumps_instance(generate_instance(GenConfig(seed=42)))
    assert a == b
    assert a != dumps_instance(generate_instance(GenConfig(seed=43)))


def test_desk_configuration():
    inst = generate_instance(GenConfig(m=10, n=4, maps_per_job=3, reduces_per_job=2))
    assert sum(len(j.maps) for j in inst.jobs) == 12
    assert sum(len(j.reduces) for j in inst.jobs) == 8
    for job in inst.jobs:
        procs = [t.processor for t in job.tasks]
        assert len(set(procs)) == len(procs) and all(1 <= p <= 10 for p in procs)
    assert all(1 <= j.weight <= 10 for j in inst.jobs)


def test_release_protocol():
    rng = np.random.Generator(np.random.PCG64(0))
    rel = release_dates(rng, 50)
    assert all(a < b for a, b in zip(rel, rel[1:]))
    # each release sits in its own unit interval (t, t + 1]
    cells = [int(np.ceil(r)) - 1 for r in rel]
    assert len(set(cells)) == len(cells)
    assert all(t < r <= t + 1 for t, r in zip(cells, rel))
    # with acceptance probability one half, the last accepted interval lands near 2n
    assert 60 < rel[-1] < 140


def test_zero_releases():
    inst = generate_instance(GenConfig(release="zero"))
    assert all(j.release == 0 for j in inst.jobs)


def test_config_errors_and_metadata():
    with pytest.raises(ParameterError):
        GenConfig(m=4, maps_per_job=3, reduces_per_job=2)
    with pytest.raises(ParameterError):
        GenConfig(release="poisson")
    assert GenConfig().as_dict()["rng"] == RNG_NAME
