# Copyright 2026 The floorloc Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.


import math

import numpy as np
import pytest

import floorloc


@pytest.fixture(scope="module")
def plan():
    return floorloc.gen_floorplan(7, uniform_rooms=False)


def test_plan_round_trip(plan, tmp_path):
    path = tmp_path / "plan.json"
    floorloc.write_plan(str(path), plan)
    back = floorloc.read_plan(str(path))
    assert back.to_json() == plan.to_json()
    assert np.array_equal(back.traversable, plan.traversable)
    assert plan.walls.shape[1] == 4
    with pytest.raises(floorloc.ParseError):
        floorloc.plan_from_json('{"units": "feet"}')


def test_ray_cast_square_room():
    room = floorloc.plan_from_json(
        '{"units": "meters", "resolution": 0.1, "seed": [5, 5], "doors": [],'
        ' "walls": [[0, 0, 10, 0], [10, 0, 10, 10], [10, 10, 0, 10], [0, 10, 0, 0]]}'
    )
    angles, ranges = floorloc.ray_cast(room, floorloc.Pose(5, 5, 0), 4, 10.0)
    assert len(angles) == 4
    assert all(abs(r - 5.0) < 1e-9 for r in ranges)
    _, corner = floorloc.ray_cast(room, floorloc.Pose(1, 1, math.pi / 4), 1, 10.0)
    assert math.isinf(corner[0])


def test_nn_distance_and_scales():
    rng = np.random.default_rng(0)
    # Points on the six faces of a 6 x 3 x 4 m room.
    half = np.array([3.0, 1.5, 2.0])
    cloud = rng.uniform(-1, 1, size=(1200, 3)) * half
    face = rng.integers(0, 6, size=len(cloud))
    cloud[np.arange(len(cloud)), face % 3] = np.where(face < 3, -1, 1) * half[face % 3]
    assert floorloc.nn_distance(cloud, cloud) == 0.0
    lambdas = floorloc.optimize_scales([cloud, 0.5 * cloud], [(0, 1)])
    assert lambdas[0] == 1.0
    assert abs(lambdas[1] - 2.0) < 0.04


def test_config_validation():
    cfg = floorloc.default_config()
    assert cfg["matching"]["alpha"] == 10.0
    cfg["matching"]["alpha"] = -3
    with pytest.raises(floorloc.InputError, match="matching.alpha"):
        floorloc.validate_config(cfg)
    with pytest.raises(floorloc.ParseError):
        floorloc.validate_config({"nope": 1})


def test_eval_match_perfect_observations(plan):
    poses = floorloc.sample_poses(plan, 5, 3)
    preds = floorloc.eval_match(plan, poses)
    report = floorloc.evaluate(preds, poses)
    assert report["count"] == 5
    same = floorloc.evaluate(poses, poses)
    assert all(row["accuracy"] == 1.0 for row in same["rows"])


def test_localize_synthetic_bundle(plan, tmp_path):
    pose = floorloc.sample_poses(plan, 1, 2, 1.0)[0]
    corruptions = floorloc.render_scan(plan, pose, str(tmp_path / "bundle"), seed=4, scale_min=0.8, scale_max=1.25)
    assert len(corruptions) == 6
    out = floorloc.localize(tmp_path / "bundle", plan, {"mode": "full"}, orientations=4)
    maps = out["maps"]
    assert maps.ndim == 3 and maps.shape[0] == 4
    assert out["valid"].shape == maps.shape[1:]
    assert out["scale_report"]["mode"] == "full"
    assert math.isfinite(out["pose"].x)


def test_effective_sample_size():
    assert floorloc.effective_sample_size([0.5, 0.5, 0.0, 0.0]) == pytest.approx(2.0)
