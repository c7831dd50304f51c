// Copyright 2026 The floorloc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <string>
#include <utility>
#include <vector>

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "floorloc/config.hpp"
#include "floorloc/error.hpp"
#include "floorloc/evaluation.hpp"
#include "floorloc/io.hpp"
#include "floorloc/particle_filter.hpp"
#include "floorloc/pipeline.hpp"
#include "floorloc/ray_casting.hpp"
#include "floorloc/scale_alignment.hpp"
#include "floorloc/synthetic.hpp"

namespace py = pybind11;
using namespace floorloc;

namespace {

using FloatArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

PointCloud cloud_from_array(const FloatArray& a) {
  if (a.ndim() != 2 || a.shape(1) != 3) throw InputError("expected an (N, 3) array of points");
  PointCloud cloud;
  auto r = a.unchecked<2>();
  cloud.points.reserve(static_cast<std::size_t>(r.shape(0)));
  for (py::ssize_t i = 0; i < r.shape(0); ++i) cloud.points.emplace_back(r(i, 0), r(i, 1), r(i, 2));
  return cloud;
}

py::array_t<double> raster_to_array(const Raster2D& raster) {
  py::array_t<double> out({raster.height, raster.width});
  std::copy(raster.values.begin(), raster.values.end(), out.mutable_data());
  return out;
}

py::array_t<double> segments_to_array(const SegmentSet& set) {
  py::array_t<double> out({static_cast<py::ssize_t>(set.size()), py::ssize_t{4}});
  auto w = out.mutable_unchecked<2>();
  for (std::size_t i = 0; i < set.size(); ++i) {
    const auto& s = set.segments[i];
    const auto row = static_cast<py::ssize_t>(i);
    w(row, 0) = s.a.x();
    w(row, 1) = s.a.y();
    w(row, 2) = s.b.x();
    w(row, 3) = s.b.y();
  }
  return out;
}

py::dict stack_to_dict(const HeatmapStack& stack) {
  const auto o = static_cast<py::ssize_t>(stack.size());
  const py::ssize_t h = stack.valid.height;
  const py::ssize_t w = stack.valid.width;
  py::array_t<double> maps({o, h, w});
  double* dst = maps.mutable_data();
  for (const auto& m : stack.maps) dst = std::copy(m.values.begin(), m.values.end(), dst);
  py::dict d;
  d["maps"] = maps;
  d["thetas"] = stack.thetas;
  d["valid"] = raster_to_array(stack.valid);
  d["resolution"] = stack.valid.resolution;
  d["origin"] = std::vector<double>{stack.valid.origin.x(), stack.valid.origin.y()};
  return d;
}

RunConfig config_from_text(const std::string& text) {
  if (text.empty()) return RunConfig{};
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
  return config_from_json(j);
}

}  // namespace

PYBIND11_MODULE(_floorloc, m) {
  m.doc() = "Floor-plan localization core";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InputError>(m, "InputError", base.ptr());
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<NoSolutionError>(m, "NoSolutionError", base.ptr());
  py::register_exception<EmptyExtractionError>(m, "EmptyExtractionError", base.ptr());
  auto degenerate = py::register_exception<DegenerateGeometryError>(m, "DegenerateGeometryError", base.ptr());
  py::register_exception<NoGroundError>(m, "NoGroundError", degenerate.ptr());

  py::class_<PoseEstimate>(m, "Pose")
      .def(py::init([](double x, double y, double theta, double score) { return PoseEstimate{x, y, theta, score}; }),
           py::arg("x") = 0.0, py::arg("y") = 0.0, py::arg("theta") = 0.0, py::arg("score") = 0.0)
      .def_readwrite("x", &PoseEstimate::x)
      .def_readwrite("y", &PoseEstimate::y)
      .def_readwrite("theta", &PoseEstimate::theta)
      .def_readwrite("score", &PoseEstimate::score)
      .def("__repr__", [](const PoseEstimate& p) {
        return "Pose(x=" + std::to_string(p.x) + ", y=" + std::to_string(p.y) + ", theta=" + std::to_string(p.theta) +
               ")";
      });

  py::class_<FloorPlan>(m, "FloorPlan")
      .def_property_readonly("resolution", &FloorPlan::resolution)
      .def_property_readonly("walls", [](const FloorPlan& p) { return segments_to_array(p.walls); })
      .def_property_readonly("doors",
                             [](const FloorPlan& p) { return segments_to_array({p.doors, SegmentFrame::kFloorPlan}); })
      .def_property_readonly("traversable", [](const FloorPlan& p) { return raster_to_array(p.traversable); })
      .def_property_readonly("origin",
                             [](const FloorPlan& p) {
                               return std::vector<double>{p.raster.origin.x(), p.raster.origin.y()};
                             })
      .def("is_traversable", [](const FloorPlan& p, double x, double y) { return p.is_traversable(Vec2(x, y)); })
      .def("to_json", [](const FloorPlan& p) { return io::plan_to_json(p).dump(); });

  m.def("plan_from_json", [](const std::string& text) { return io::plan_from_json(nlohmann::json::parse(text)); });
  m.def("read_plan", [](const std::string& path) { return io::read_plan(path); });
  m.def("write_plan", [](const std::string& path, const FloorPlan& plan) { io::write_plan(path, plan); });

  m.def(
      "gen_floorplan",
      [](std::uint64_t seed, int rooms, int corridors, bool uniform_rooms) {
        GenSpec spec;
        spec.rooms = rooms;
        spec.corridors = corridors;
        spec.uniform_rooms = uniform_rooms;
        return gen_floorplan(seed, spec);
      },
      py::arg("seed"), py::arg("rooms") = 6, py::arg("corridors") = 1, py::arg("uniform_rooms") = true);
  m.def("sample_poses", &sample_poses, py::arg("plan"), py::arg("count"), py::arg("seed"),
        py::arg("clearance") = 0.3);

  m.def(
      "render_scan",
      [](const FloorPlan& plan, const PoseEstimate& pose, const std::string& bundle_dir, std::uint64_t seed,
         double scale_min, double scale_max, int tables) {
        ScanSpec spec;
        spec.scale_min = scale_min;
        spec.scale_max = scale_max;
        spec.tables = tables;
        const SyntheticScan scan = render_scan(plan, pose, spec, seed);
        io::write_bundle(bundle_dir, scan.bundle);
        return scan.corruptions;
      },
      py::arg("plan"), py::arg("pose"), py::arg("bundle_dir"), py::arg("seed") = 0, py::arg("scale_min") = 1.0,
      py::arg("scale_max") = 1.0, py::arg("tables") = 0,
      "Renders a synthetic scan into a bundle directory; returns the per-view depth corruptions.");

  m.def(
      "ray_cast",
      [](const FloorPlan& plan, const PoseEstimate& pose, int n_rays, double max_range) {
        const RayScan scan = ray_cast(plan, pose, n_rays, max_range);
        return std::make_pair(scan.angles, scan.ranges);
      },
      py::arg("plan"), py::arg("pose"), py::arg("n_rays") = 36, py::arg("max_range") = 10.0);
  m.def(
      "perfect_segments",
      [](const FloorPlan& plan, const PoseEstimate& pose, double max_range) {
        return segments_to_array(perfect_segments(plan, pose, max_range));
      },
      py::arg("plan"), py::arg("pose"), py::arg("max_range") = 10.0);

  m.def("nn_distance", [](const FloatArray& p, const FloatArray& q) {
    return nn_distance(cloud_from_array(p), cloud_from_array(q));
  });
  m.def(
      "optimize_scales",
      [](const std::vector<FloatArray>& clouds, const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
        std::vector<PointCloud> converted;
        for (const auto& c : clouds) converted.push_back(cloud_from_array(c));
        return optimize_scales(converted, pairs).lambdas;
      },
      py::arg("clouds"), py::arg("pairs"));

  m.def("default_config", []() { return to_json(RunConfig{}).dump(); });
  m.def(
      "validate_config", [](const std::string& text) { return to_json(config_from_text(text)).dump(); },
      py::arg("config_json"));

  m.def(
      "localize",
      [](const std::string& bundle_dir, const FloorPlan& plan, const std::string& config_json, int orientations) {
        const RunConfig cfg = config_from_text(config_json);
        const LocalizeResult result = localize(io::read_bundle(bundle_dir), plan, cfg, orientations);
        py::dict d = stack_to_dict(result.stack);
        d["pose"] = result.pose;
        d["segments"] = segments_to_array(result.segments);
        d["scale_report"] = io::scale_report_to_json(result.scale_report).dump();
        return d;
      },
      py::arg("bundle_dir"), py::arg("plan"), py::arg("config_json") = "", py::arg("orientations") = 0);

  m.def(
      "eval_match",
      [](const FloorPlan& plan, const std::vector<PoseEstimate>& poses, const std::string& method, int rays,
         const std::string& config_json) {
        const RunConfig cfg = config_from_text(config_json);
        if (method == "kernel") return kernel_predictions(plan, poses, cfg);
        if (method == "rays") return ray_predictions(plan, poses, cfg, rays);
        throw InputError("method must be 'kernel' or 'rays'");
      },
      py::arg("plan"), py::arg("poses"), py::arg("method") = "kernel", py::arg("rays") = 36,
      py::arg("config_json") = "");

  m.def(
      "evaluate",
      [](const std::vector<PoseEstimate>& predictions, const std::vector<PoseEstimate>& truths) {
        return io::report_to_json(evaluate(predictions, truths)).dump();
      },
      py::arg("predictions"), py::arg("truths"));

  m.def("effective_sample_size", [](const std::vector<double>& weights) {
    ParticleSet set;
    for (double w : weights) set.push_back({0.0, 0.0, 0.0, w});
    return effective_sample_size(set);
  });
}
