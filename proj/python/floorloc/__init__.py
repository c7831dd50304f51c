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

"""Floor-plan localization from stationary depth scans."""

import json as _json

from . import _floorloc
from ._floorloc import (
    DegenerateGeometryError,
    EmptyExtractionError,
    Error,
    FloorPlan,
    InputError,
    NoGroundError,
    NoSolutionError,
    ParseError,
    Pose,
    effective_sample_size,
    gen_floorplan,
    nn_distance,
    optimize_scales,
    perfect_segments,
    plan_from_json,
    ray_cast,
    read_plan,
    render_scan,
    sample_poses,
    write_plan,
)

__all__ = [
    "DegenerateGeometryError",
    "EmptyExtractionError",
    "Error",
    "FloorPlan",
    "InputError",
    "NoGroundError",
    "NoSolutionError",
    "ParseError",
    "Pose",
    "default_config",
    "effective_sample_size",
    "eval_match",
    "evaluate",
    "gen_floorplan",
    "localize",
    "nn_distance",
    "optimize_scales",
    "perfect_segments",
    "plan_from_json",
    "ray_cast",
    "read_plan",
    "render_scan",
    "sample_poses",
    "validate_config",
    "write_plan",
]


def _dump(config):
    if config is None:
        return ""
    return config if isinstance(config, str) else _json.dumps(config)


def default_config():
    """Every tunable with its default value, as a dict."""
    return _json.loads(_floorloc.default_config())


def validate_config(config):
    """Fills defaults and checks ranges; raises ParseError or InputError."""
    return _json.loads(_floorloc.validate_config(_dump(config)))


def localize(bundle_dir, plan, config=None, orientations=0):
    out = _floorloc.localize(str(bundle_dir), plan, _dump(config), orientations)
    out["scale_report"] = _json.loads(out["scale_report"])
    return out


def eval_match(plan, poses, method="kernel", rays=36, config=None):
    return _floorloc.eval_match(plan, poses, method, rays, _dump(config))


def evaluate(predictions, truths):
    return _json.loads(_floorloc.evaluate(predictions, truths))
