// Copyright contributors to the epiwarp project
// SPDX-License-Identifier: Apache-2.0

#include "epiwarp/camera.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

namespace epiwarp {

bool is_rotation(const Eigen::Matrix3d& r, double tol) {
  const Eigen::Matrix3d gram = r.transpose() * r - Eigen::Matrix3d::Identity();
  return gram.cwiseAbs().maxCoeff() < tol && r.determinant() > 0.0;
}

void validate(const Pose& pose) {
  if (!pose.rotation.allFinite() || !pose.translation.allFinite())
    throw_domain("pose contains non-finite values");
  if (!is_rotation(pose.rotation))
    throw_domain("pose rotation is not orthonormal with determinant +1");
}

void validate(const Camera& camera) {
  validate(camera.pose);
  if (camera.width <= 0 || camera.height <= 0) throw_domain("camera resolution must be positive");
  const Intrinsics& k = camera.intrinsics;
  if (!(k.fx > 0.0) || !(k.fy > 0.0)) throw_domain("focal lengths must be positive");
  if (k.cx < 0.0 || k.cx > camera.width || k.cy < 0.0 || k.cy > camera.height)
    throw_domain("principal point outside image bounds");
}

Intrinsics fov_to_intrinsics(double fov_deg, int width, int height) {
  if (!(fov_deg > 0.0) || !(fov_deg < 180.0))
    throw_domain("field of view must be in (0, 180) degrees");
  if (width <= 0 || height <= 0) throw_domain("resolution must be positive");
  const double half = fov_deg * std::numbers::pi / 360.0;
  const double f = (width / 2.0) / std::tan(half);
  return Intrinsics{f, f, width / 2.0, height / 2.0};
}

Eigen::Vector3d unproject(const Eigen::Vector2d& pixel, double depth, const Camera& camera) {
  if (!(depth > 0.0) || !std::isfinite(depth)) throw_domain("unproject requires positive depth");
  const Intrinsics& k = camera.intrinsics;
  const Eigen::Vector3d ray((pixel.x() - k.cx) / k.fx, (pixel.y() - k.cy) / k.fy, 1.0);
  return camera.pose.to_world(depth * ray);
}

bool try_project(const Eigen::Vector3d& world_point, const Camera& camera, Projection& out) {
  const Eigen::Vector3d p = camera.pose.to_camera(world_point);
  if (!p.allFinite() || p.z() <= kBehindCameraEps) return false;
  const Intrinsics& k = camera.intrinsics;
  out.pixel = Eigen::Vector2d(k.fx * p.x() / p.z() + k.cx, k.fy * p.y() / p.z() + k.cy);
  out.depth = p.z();
  return true;
}

Projection project(const Eigen::Vector3d& world_point, const Camera& camera) {
  Projection result;
  if (!try_project(world_point, camera, result))
    throw Error("behind_camera", "point is at or behind the camera plane");
  return result;
}

Pose relative_transform(const Pose& source, const Pose& target) {
  Pose rel;
  rel.rotation = target.rotation.transpose() * source.rotation;
  rel.translation = target.rotation.transpose() * (source.translation - target.translation);
  return rel;
}

Pose compose(const Pose& outer, const Pose& inner) {
  Pose result;
  result.rotation = outer.rotation * inner.rotation;
  result.translation = outer.rotation * inner.translation + outer.translation;
  return result;
}

namespace {

nlohmann::json camera_to_json(const Camera& camera) {
  nlohmann::json j;
  j["intrinsics"] = {{"fx", camera.intrinsics.fx},
                     {"fy", camera.intrinsics.fy},
                     {"cx", camera.intrinsics.cx},
                     {"cy", camera.intrinsics.cy}};
  std::vector<double> r(9);
  for (int row = 0; row < 3; ++row)
    for (int col = 0; col < 3; ++col) r[static_cast<size_t>(row * 3 + col)] = camera.pose.rotation(row, col);
  j["pose"] = {{"R", r},
               {"T", {camera.pose.translation.x(), camera.pose.translation.y(),
                      camera.pose.translation.z()}}};
  j["resolution"] = {camera.width, camera.height};
  return j;
}

Camera camera_from_json(const nlohmann::json& j) {
  Camera camera;
  const auto& k = j.at("intrinsics");
  camera.intrinsics = {k.at("fx").get<double>(), k.at("fy").get<double>(), k.at("cx").get<double>(),
                       k.at("cy").get<double>()};
  const auto& pose = j.at("pose");
  const auto r = pose.at("R").get<std::vector<double>>();
  const auto t = pose.at("T").get<std::vector<double>>();
  if (r.size() != 9 || t.size() != 3) throw_io("camera JSON: R must have 9 entries, T must have 3");
  for (int row = 0; row < 3; ++row)
    for (int col = 0; col < 3; ++col) camera.pose.rotation(row, col) = r[static_cast<size_t>(row * 3 + col)];
  camera.pose.translation = Eigen::Vector3d(t[0], t[1], t[2]);
  const auto res = j.at("resolution").get<std::vector<int>>();
  if (res.size() != 2) throw_io("camera JSON: resolution must be [w, h]");
  camera.width = res[0];
  camera.height = res[1];
  validate(camera);
  return camera;
}

}  // namespace

Camera load_camera_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw_io("cannot open camera file: " + path.string());
  nlohmann::json j;
  try {
    in >> j;
    return camera_from_json(j);
  } catch (const nlohmann::json::exception& e) {
    throw_io("malformed camera JSON in " + path.string() + ": " + e.what());
  }
}

void save_camera_json(const std::filesystem::path& path, const Camera& camera) {
  std::ofstream out(path);
  if (!out) throw_io("cannot write camera file: " + path.string());
  out << camera_to_json(camera).dump(2) << "\n";
}

std::string camera_to_json_string(const Camera& camera) { return camera_to_json(camera).dump(2); }

Camera camera_from_json_string(const std::string& text) {
  try {
    return camera_from_json(nlohmann::json::parse(text));
  } catch (const nlohmann::json::exception& e) {
    throw_io(std::string("malformed camera JSON: ") + e.what());
  }
}

}  // namespace epiwarp
