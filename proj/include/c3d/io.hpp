#pragma once

#include <c3d/datagen.hpp>
#include <c3d/geometry.hpp>
#include <c3d/kernels.hpp>
#include <c3d/refine.hpp>

#include <json.hpp>

#include <filesystem>
#include <string>

namespace c3d::io {

namespace fs = std::filesystem;

/// 16-bit grayscale PNG, stored value = round(depth * 256), 0 = invalid.
/// Depths above 65535/256 m are saturated.
void write_depth_png(const fs::path& path, const DepthMap& depth);
DepthMap read_depth_png(const fs::path& path);

/// Rounds depths to the 1/256 m grid the PNG stores.
DepthMap quantize_depth(const DepthMap& depth);

/// HSV image as a 3-channel little-endian PFM (float32).
void write_hsv_pfm(const fs::path& path, const HsvImage& image);
/// Reads a .pfm written by write_hsv_pfm, or converts an 8-bit RGB(A) .png.
HsvImage read_hsv_image(const fs::path& path);

/// Binary little-endian PLY. Writes x,y,z and, when present, h,s,v and
/// nx,ny,nz,residual, all float32. Reading accepts any float/double vertex
/// properties in any order and requires x,y,z.
void write_ply(const fs::path& path, const PointCloud& cloud);
PointCloud read_ply(const fs::path& path);

/// Rounds every attribute through float32, the precision write_ply keeps.
PointCloud quantize_cloud(const PointCloud& cloud);

/// Key-value calibration file: one `name = value` (or `name: value`) per
/// line, `#` comments. Required: fx fy cx cy width height.
CameraIntrinsics read_calibration(const fs::path& path);
void write_calibration(const fs::path& path, const CameraIntrinsics& K);

/// JSON scene: {"primitives": [{"type": "plane"|"sphere"|"box", ...}]}.
Scene parse_scene(const nlohmann::json& j, const std::string& source = "scene");
Scene read_scene(const fs::path& path);
nlohmann::json scene_to_json(const Scene& scene);

nlohmann::json to_json(const KernelConfig& c);
KernelConfig kernel_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const LidarSpec& s);
LidarSpec lidar_spec_from_json(const nlohmann::json& j);
nlohmann::json to_json(const RefineConfig& c);
nlohmann::json to_json(const MetricsReport& m);

/// Text of a JSON document with a trailing newline, key order preserved by
/// nlohmann's sorted map so output is stable.
void write_json(const fs::path& path, const nlohmann::json& j);
nlohmann::json read_json(const fs::path& path);

/// Shortest decimal text that reads back to the same double.
std::string format_double(double v);

}  // namespace c3d::io
