#include <c3d/features.hpp>
#include <c3d/io.hpp>

#include <png.h>

#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>

namespace c3d::io {

using nlohmann::json;

namespace {

static_assert(std::endian::native == std::endian::little, "binary writers assume a little-endian host");

struct FileCloser {
  void operator()(std::FILE* f) const { std::fclose(f); }
};
using File = std::unique_ptr<std::FILE, FileCloser>;

File open_file(const fs::path& path, const char* mode) {
  File f(std::fopen(path.c_str(), mode));
  if (!f) throw std::runtime_error("cannot open " + path.string());
  return f;
}

[[noreturn]] void png_fail(png_structp png, png_const_charp msg) {
  (void)png;
  throw ParseError(std::string("png: ") + msg);
}

void png_warn(png_structp, png_const_charp) {}

struct PngRead {
  png_structp png = nullptr;
  png_infop info = nullptr;
  PngRead() {
    png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, png_fail, png_warn);
    if (!png) throw std::runtime_error("png_create_read_struct failed");
    info = png_create_info_struct(png);
  }
  ~PngRead() { png_destroy_read_struct(&png, &info, nullptr); }
};

struct PngWrite {
  png_structp png = nullptr;
  png_infop info = nullptr;
  PngWrite() {
    png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, png_fail, png_warn);
    if (!png) throw std::runtime_error("png_create_write_struct failed");
    info = png_create_info_struct(png);
  }
  ~PngWrite() { png_destroy_write_struct(&png, &info); }
};

// Decoded PNG, expanded to 8 or 16 bit samples.
struct RawImage {
  int width = 0, height = 0, channels = 0, bit_depth = 0;
  std::vector<std::uint8_t> bytes;
  int sample(int r, int c, int ch) const {
    const std::size_t idx = (std::size_t(r) * width + c) * channels + ch;
    if (bit_depth == 16) return (bytes[2 * idx] << 8) | bytes[2 * idx + 1];
    return bytes[idx];
  }
};

RawImage read_png(const fs::path& path) {
  auto file = open_file(path, "rb");
  PngRead rd;
  png_init_io(rd.png, file.get());
  png_read_info(rd.png, rd.info);
  const int color = png_get_color_type(rd.png, rd.info);
  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(rd.png);
  if (png_get_bit_depth(rd.png, rd.info) < 8) png_set_expand(rd.png);
  png_read_update_info(rd.png, rd.info);

  RawImage img;
  img.width = static_cast<int>(png_get_image_width(rd.png, rd.info));
  img.height = static_cast<int>(png_get_image_height(rd.png, rd.info));
  img.channels = png_get_channels(rd.png, rd.info);
  img.bit_depth = png_get_bit_depth(rd.png, rd.info);
  const std::size_t stride = png_get_rowbytes(rd.png, rd.info);
  img.bytes.resize(stride * img.height);
  std::vector<png_bytep> rows(img.height);
  for (int r = 0; r < img.height; ++r) rows[r] = img.bytes.data() + stride * r;
  png_read_image(rd.png, rows.data());
  png_read_end(rd.png, nullptr);
  return img;
}

}  // namespace

// ---------------------------------------------------------------------------
// depth PNG

void write_depth_png(const fs::path& path, const DepthMap& depth) {
  auto file = open_file(path, "wb");
  PngWrite wr;
  png_init_io(wr.png, file.get());
  png_set_IHDR(wr.png, wr.info, depth.cols(), depth.rows(), 16, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(wr.png, wr.info);
  std::vector<std::uint8_t> row(std::size_t(depth.cols()) * 2);
  for (int r = 0; r < depth.rows(); ++r) {
    for (int c = 0; c < depth.cols(); ++c) {
      std::uint16_t v = 0;
      if (depth.valid(r, c)) v = static_cast<std::uint16_t>(std::clamp(std::lround(depth.depths(r, c) * 256.0), 1L, 65535L));
      row[2 * c] = static_cast<std::uint8_t>(v >> 8);
      row[2 * c + 1] = static_cast<std::uint8_t>(v & 0xff);
    }
    png_write_row(wr.png, row.data());
  }
  png_write_end(wr.png, nullptr);
}

DepthMap read_depth_png(const fs::path& path) {
  const RawImage img = read_png(path);
  if (img.channels != 1 || img.bit_depth != 16)
    throw ParseError(path.string() + ": depth PNG must be 16-bit grayscale");
  DepthMap depth(img.height, img.width);
  for (int r = 0; r < img.height; ++r) {
    for (int c = 0; c < img.width; ++c) {
      const int v = img.sample(r, c, 0);
      if (v == 0) continue;
      depth.depths(r, c) = v / 256.0;
      depth.valid(r, c) = true;
    }
  }
  return depth;
}

DepthMap quantize_depth(const DepthMap& depth) {
  DepthMap out = depth;
  for (int r = 0; r < out.rows(); ++r)
    for (int c = 0; c < out.cols(); ++c)
      if (out.valid(r, c))
        out.depths(r, c) = static_cast<double>(std::clamp(std::lround(out.depths(r, c) * 256.0), 1L, 65535L)) / 256.0;
      else
        out.depths(r, c) = 0.0;
  return out;
}

// ---------------------------------------------------------------------------
// HSV image

void write_hsv_pfm(const fs::path& path, const HsvImage& image) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << "PF\n" << image.cols << " " << image.rows << "\n-1.0\n";
  std::vector<float> row(std::size_t(image.cols) * 3);
  for (int r = image.rows - 1; r >= 0; --r) {  // PFM stores bottom row first
    for (int c = 0; c < image.cols; ++c)
      for (int ch = 0; ch < 3; ++ch) row[3 * c + ch] = static_cast<float>(image.at(r, c)(ch));
    out.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row.size() * sizeof(float)));
  }
}

namespace {

HsvImage read_pfm(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string magic;
  int cols = 0, rows = 0;
  double scale = 0;
  in >> magic >> cols >> rows >> scale;
  in.get();
  if (magic != "PF") throw ParseError(path.string() + ": expected a 3-channel PFM ('PF')");
  if (cols <= 0 || rows <= 0) throw ParseError(path.string() + ": bad PFM size");
  if (scale >= 0) throw ParseError(path.string() + ": only little-endian PFM is supported");
  HsvImage image(rows, cols);
  std::vector<float> row(std::size_t(cols) * 3);
  for (int r = rows - 1; r >= 0; --r) {
    in.read(reinterpret_cast<char*>(row.data()), static_cast<std::streamsize>(row.size() * sizeof(float)));
    if (!in) throw ParseError(path.string() + ": truncated PFM data");
    for (int c = 0; c < cols; ++c) image.set(r, c, Vec3(row[3 * c], row[3 * c + 1], row[3 * c + 2]));
  }
  return image;
}

}  // namespace

HsvImage read_hsv_image(const fs::path& path) {
  if (path.extension() == ".pfm") return read_pfm(path);
  const RawImage img = read_png(path);
  if (img.channels < 3) throw ParseError(path.string() + ": color PNG must be RGB or RGBA");
  const double maxv = img.bit_depth == 16 ? 65535.0 : 255.0;
  HsvImage image(img.height, img.width);
  for (int r = 0; r < img.height; ++r)
    for (int c = 0; c < img.width; ++c)
      image.set(r, c, rgb_to_hsv(Vec3(img.sample(r, c, 0), img.sample(r, c, 1), img.sample(r, c, 2)) / maxv));
  return image;
}

// ---------------------------------------------------------------------------
// PLY

void write_ply(const fs::path& path, const PointCloud& cloud) {
  cloud.validate();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << "ply\nformat binary_little_endian 1.0\nelement vertex " << cloud.size() << "\n";
  std::vector<std::string> names{"x", "y", "z"};
  if (cloud.hsv) names.insert(names.end(), {"h", "s", "v"});
  if (cloud.normals) names.insert(names.end(), {"nx", "ny", "nz"});
  if (cloud.residuals) names.emplace_back("residual");
  for (const auto& n : names) out << "property float " << n << "\n";
  out << "end_header\n";
  std::vector<float> rec;
  for (Eigen::Index i = 0; i < cloud.size(); ++i) {
    rec.clear();
    for (int a = 0; a < 3; ++a) rec.push_back(static_cast<float>(cloud.points(a, i)));
    if (cloud.hsv)
      for (int a = 0; a < 3; ++a) rec.push_back(static_cast<float>((*cloud.hsv)(a, i)));
    if (cloud.normals)
      for (int a = 0; a < 3; ++a) rec.push_back(static_cast<float>((*cloud.normals)(a, i)));
    if (cloud.residuals) rec.push_back(static_cast<float>((*cloud.residuals)(i)));
    out.write(reinterpret_cast<const char*>(rec.data()), static_cast<std::streamsize>(rec.size() * sizeof(float)));
  }
}

PointCloud read_ply(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  const std::string where = path.string();
  std::string line;
  int lineno = 0;
  auto next = [&] {
    if (!std::getline(in, line)) throw ParseError(where + ": unexpected end of PLY header");
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
  };
  next();
  if (line != "ply") throw ParseError(where + ":1: not a PLY file");

  struct Prop {
    std::string name;
    int size = 4;
    bool is_double = false;
  };
  std::vector<Prop> props;
  Eigen::Index count = -1;
  bool in_vertex = false;
  for (;;) {
    next();
    std::istringstream ss(line);
    std::string word;
    ss >> word;
    if (word == "end_header") break;
    if (word == "format") {
      std::string fmt;
      ss >> fmt;
      if (fmt != "binary_little_endian")
        throw ParseError(where + ":" + std::to_string(lineno) + ": format '" + fmt + "' unsupported (binary_little_endian only)");
    } else if (word == "element") {
      std::string name;
      ss >> name;
      in_vertex = name == "vertex";
      if (in_vertex) ss >> count;
      else if (count >= 0)
        throw ParseError(where + ":" + std::to_string(lineno) + ": only a vertex element is supported");
    } else if (word == "property" && in_vertex) {
      std::string type, name;
      ss >> type >> name;
      if (type == "list") throw ParseError(where + ":" + std::to_string(lineno) + ": list properties unsupported");
      if (type == "float" || type == "float32")
        props.push_back({name, 4, false});
      else if (type == "double" || type == "float64")
        props.push_back({name, 8, true});
      else
        throw ParseError(where + ":" + std::to_string(lineno) + ": property '" + name + "' has unsupported type " + type);
    }
  }
  if (count < 0) throw ParseError(where + ": no vertex element");

  std::map<std::string, int> index;
  for (std::size_t k = 0; k < props.size(); ++k) index[props[k].name] = static_cast<int>(k);
  auto has = [&](std::initializer_list<const char*> names) {
    for (auto n : names)
      if (!index.count(n)) return false;
    return true;
  };
  if (!has({"x", "y", "z"})) throw ParseError(where + ": vertex element lacks x, y or z");

  std::size_t rec_size = 0;
  for (const auto& p : props) rec_size += p.size;
  std::vector<char> rec(rec_size);
  std::vector<double> values(props.size());

  PointCloud cloud;
  cloud.points.resize(3, count);
  const bool with_hsv = has({"h", "s", "v"});
  const bool with_normals = has({"nx", "ny", "nz"});
  const bool with_residual = has({"residual"});
  if (with_hsv) cloud.hsv = Points(3, count);
  if (with_normals) cloud.normals = Points(3, count);
  if (with_residual) cloud.residuals = Eigen::VectorXd(count);
  for (Eigen::Index i = 0; i < count; ++i) {
    in.read(rec.data(), static_cast<std::streamsize>(rec_size));
    if (!in) throw ParseError(where + ": truncated vertex data at vertex " + std::to_string(i));
    std::size_t off = 0;
    for (std::size_t k = 0; k < props.size(); ++k) {
      if (props[k].is_double) {
        double d;
        std::memcpy(&d, rec.data() + off, 8);
        values[k] = d;
      } else {
        float f;
        std::memcpy(&f, rec.data() + off, 4);
        values[k] = f;
      }
      off += props[k].size;
    }
    cloud.points.col(i) << values[index["x"]], values[index["y"]], values[index["z"]];
    if (with_hsv) cloud.hsv->col(i) << values[index["h"]], values[index["s"]], values[index["v"]];
    if (with_normals) cloud.normals->col(i) << values[index["nx"]], values[index["ny"]], values[index["nz"]];
    if (with_residual) (*cloud.residuals)(i) = values[index["residual"]];
  }
  if (with_normals) {
    // float32 storage: restore unit length so the cloud invariant holds exactly
    for (Eigen::Index i = 0; i < count; ++i) {
      const double len = cloud.normals->col(i).norm();
      if (len > 0) cloud.normals->col(i) /= len;
    }
  }
  if (with_normals != with_residual)
    throw ParseError(where + ": normals and residual must be stored together");
  return cloud;
}

PointCloud quantize_cloud(const PointCloud& cloud) {
  auto q = [](auto m) { return m.template cast<float>().template cast<double>().eval(); };
  PointCloud out = cloud;
  out.points = q(cloud.points);
  if (cloud.hsv) out.hsv = q(*cloud.hsv);
  if (cloud.normals) {
    Points n = q(*cloud.normals);
    for (Eigen::Index i = 0; i < n.cols(); ++i) {
      const double len = n.col(i).norm();
      if (len > 0) n.col(i) /= len;
    }
    out.normals = std::move(n);
  }
  if (cloud.residuals) out.residuals = q(*cloud.residuals);
  return out;
}

// ---------------------------------------------------------------------------
// calibration

CameraIntrinsics read_calibration(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::map<std::string, double> fields;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto sep = line.find_first_of("=:");
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    if (trim(line).empty()) continue;
    if (sep == std::string::npos)
      throw ParseError(path.string() + ":" + std::to_string(lineno) + ": expected 'name = value'");
    const std::string key = trim(line.substr(0, sep));
    const std::string text = trim(line.substr(sep + 1));
    double value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size())
      throw ParseError(path.string() + ":" + std::to_string(lineno) + ": field '" + key + "' has non-numeric value '" + text + "'");
    fields[key] = value;
  }
  auto need = [&](const char* name) {
    auto it = fields.find(name);
    if (it == fields.end()) throw ParseError(path.string() + ": missing calibration field '" + std::string(name) + "'");
    return it->second;
  };
  CameraIntrinsics K;
  K.fx = need("fx");
  K.fy = need("fy");
  K.cx = need("cx");
  K.cy = need("cy");
  const double w = need("width"), h = need("height");
  if (w != std::floor(w) || h != std::floor(h))
    throw ParseError(path.string() + ": width and height must be integers");
  K.width = static_cast<int>(w);
  K.height = static_cast<int>(h);
  K.validate();
  return K;
}

void write_calibration(const fs::path& path, const CameraIntrinsics& K) {
  std::ofstream out(path);
  out << "fx = " << format_double(K.fx) << "\nfy = " << format_double(K.fy) << "\ncx = " << format_double(K.cx)
      << "\ncy = " << format_double(K.cy) << "\nwidth = " << K.width << "\nheight = " << K.height << "\n";
}

// ---------------------------------------------------------------------------
// scene / config JSON

namespace {

Vec3 vec3(const json& j, const std::string& ctx) {
  if (!j.is_array() || j.size() != 3) throw ParseError(ctx + ": expected an array of 3 numbers");
  Vec3 v;
  for (int a = 0; a < 3; ++a) {
    if (!j[a].is_number()) throw ParseError(ctx + ": expected an array of 3 numbers");
    v(a) = j[a].get<double>();
  }
  return v;
}

json vec_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

const json& field(const json& j, const char* name, const std::string& ctx) {
  if (!j.contains(name)) throw ParseError(ctx + ": missing field '" + name + "'");
  return j.at(name);
}

double number(const json& j, const char* name, const std::string& ctx) {
  const json& v = field(j, name, ctx);
  if (!v.is_number()) throw ParseError(ctx + ": field '" + std::string(name) + "' must be a number");
  return v.get<double>();
}

}  // namespace

Scene parse_scene(const json& j, const std::string& source) {
  const json& prims = field(j, "primitives", source);
  if (!prims.is_array()) throw ParseError(source + ": 'primitives' must be an array");
  Scene scene;
  for (std::size_t k = 0; k < prims.size(); ++k) {
    const json& p = prims[k];
    const std::string ctx = source + ": primitives[" + std::to_string(k) + "]";
    const std::string type = field(p, "type", ctx).get<std::string>();
    ScenePrimitive prim;
    if (type == "plane") {
      prim.shape = Plane{vec3(field(p, "point", ctx), ctx + ".point"), vec3(field(p, "normal", ctx), ctx + ".normal").normalized(),
                         number(p, "extent", ctx)};
    } else if (type == "sphere") {
      prim.shape = Sphere{vec3(field(p, "center", ctx), ctx + ".center"), number(p, "radius", ctx)};
    } else if (type == "box") {
      Box b;
      b.center = vec3(field(p, "center", ctx), ctx + ".center");
      b.half_extents = vec3(field(p, "half_extents", ctx), ctx + ".half_extents");
      if (p.contains("rotation")) b.orientation = Pose::from_axis_angle(vec3(p["rotation"], ctx + ".rotation"), Vec3::Zero()).rotation;
      prim.shape = b;
    } else {
      throw ParseError(ctx + ": unknown primitive type '" + type + "'");
    }
    prim.hsv = vec3(field(p, "hsv", ctx), ctx + ".hsv");
    prim.reflective = p.value("reflective", false);
    try {
      prim.validate();
    } catch (const InputError& e) {
      throw ParseError(ctx + ": " + e.what());
    }
    scene.push_back(prim);
  }
  return scene;
}

Scene read_scene(const fs::path& path) {
  json j;
  try {
    j = read_json(path);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  return parse_scene(j, path.string());
}

json scene_to_json(const Scene& scene) {
  json prims = json::array();
  for (const auto& prim : scene) {
    json p;
    std::visit(
        [&](const auto& s) {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, Plane>) {
            p = {{"type", "plane"}, {"point", vec_json(s.point)}, {"normal", vec_json(s.normal)}, {"extent", s.extent}};
          } else if constexpr (std::is_same_v<T, Sphere>) {
            p = {{"type", "sphere"}, {"center", vec_json(s.center)}, {"radius", s.radius}};
          } else {
            const Eigen::AngleAxisd aa(s.orientation);
            p = {{"type", "box"}, {"center", vec_json(s.center)}, {"half_extents", vec_json(s.half_extents)},
                 {"rotation", vec_json(aa.axis() * aa.angle())}};
          }
        },
        prim.shape);
    p["hsv"] = vec_json(prim.hsv);
    p["reflective"] = prim.reflective;
    prims.push_back(p);
  }
  return {{"primitives", prims}};
}

json to_json(const KernelConfig& c) {
  json s0;
  if (c.s0_law.kind == S0Law::Kind::fixed)
    s0 = {{"law", "fixed"}, {"value", c.s0_law.value}};
  else
    s0 = {{"law", "sampled"}, {"offset", c.s0_law.offset}, {"spread", c.s0_law.spread}};
  return {{"sigma_g", c.sigma_g},
          {"s0", s0},
          {"scale_mode", c.scale_mode == ScaleMode::constant ? "constant" : "depth_proportional"},
          {"sigma_v", c.sigma_v},
          {"s_v", c.s_v},
          {"epsilon", c.epsilon},
          {"use_hsv_kernel", c.use_hsv_kernel},
          {"use_normal_kernel", c.use_normal_kernel},
          {"prune_radius", c.prune_radius},
          {"normal_grad_mode", c.normal_grad_mode == NormalGradMode::full ? "full" : "detached"},
          {"normal_window_radius", c.normal_window_radius},
          {"lidar_normal_k", c.lidar_normal_k},
          {"mean_reduction", c.mean_reduction}};
}

KernelConfig kernel_config_from_json(const json& j) {
  KernelConfig c;
  try {
    c.sigma_g = j.value("sigma_g", c.sigma_g);
    if (j.contains("s0")) {
      const json& s0 = j["s0"];
      const std::string law = s0.value("law", "sampled");
      if (law == "fixed")
        c.s0_law = S0Law::fixed(s0.at("value").get<double>());
      else if (law == "sampled")
        c.s0_law = S0Law{S0Law::Kind::sampled, 0.02, s0.value("offset", 0.01), s0.value("spread", 0.02)};
      else
        throw ParseError("kernel config: unknown s0 law '" + law + "'");
    }
    const std::string scale = j.value("scale_mode", "depth_proportional");
    if (scale == "constant")
      c.scale_mode = ScaleMode::constant;
    else if (scale != "depth_proportional")
      throw ParseError("kernel config: unknown scale_mode '" + scale + "'");
    c.sigma_v = j.value("sigma_v", c.sigma_v);
    c.s_v = j.value("s_v", c.s_v);
    c.epsilon = j.value("epsilon", c.epsilon);
    c.use_hsv_kernel = j.value("use_hsv_kernel", c.use_hsv_kernel);
    c.use_normal_kernel = j.value("use_normal_kernel", c.use_normal_kernel);
    c.prune_radius = j.value("prune_radius", c.prune_radius);
    const std::string mode = j.value("normal_grad_mode", "detached");
    if (mode == "full")
      c.normal_grad_mode = NormalGradMode::full;
    else if (mode != "detached")
      throw ParseError("kernel config: unknown normal_grad_mode '" + mode + "'");
    c.normal_window_radius = j.value("normal_window_radius", c.normal_window_radius);
    c.lidar_normal_k = j.value("lidar_normal_k", c.lidar_normal_k);
    c.mean_reduction = j.value("mean_reduction", c.mean_reduction);
  } catch (const json::exception& e) {
    throw ParseError(std::string("kernel config: ") + e.what());
  }
  return c;
}

json to_json(const LidarSpec& s) {
  return {{"elevations", s.elevations},           {"azimuth_step", s.azimuth_step},
          {"azimuth_min", s.azimuth_min},         {"azimuth_max", s.azimuth_max},
          {"range_noise_std", s.range_noise_std}, {"reflective_dropout", s.reflective_dropout},
          {"max_range", s.max_range}};
}

LidarSpec lidar_spec_from_json(const json& j) {
  LidarSpec s;
  try {
    s.elevations = j.at("elevations").get<std::vector<double>>();
    s.azimuth_step = j.at("azimuth_step").get<double>();
    s.azimuth_min = j.at("azimuth_min").get<double>();
    s.azimuth_max = j.at("azimuth_max").get<double>();
    s.range_noise_std = j.value("range_noise_std", 0.0);
    s.reflective_dropout = j.value("reflective_dropout", 1.0);
    s.max_range = j.value("max_range", s.max_range);
  } catch (const json::exception& e) {
    throw ParseError(std::string("lidar spec: ") + e.what());
  }
  s.validate();
  return s;
}

json to_json(const RefineConfig& c) {
  return {{"iterations", c.iterations},       {"step_size", c.step_size},
          {"backtracking", c.backtracking},   {"max_backtracks", c.max_backtracks},
          {"kernel", to_json(c.kernel)},      {"anchor_weight", c.anchor_weight},
          {"anchor_delta", c.anchor_delta},   {"seed", c.seed}};
}

json to_json(const MetricsReport& m) {
  return {{"abs_rel", m.abs_rel}, {"sq_rel", m.sq_rel}, {"rmse", m.rmse},       {"rmse_log", m.rmse_log},
          {"delta1", m.delta1},   {"delta2", m.delta2}, {"delta3", m.delta3},   {"count", m.count}};
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << j.dump(2) << "\n";
}

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return json::parse(in);
}

std::string format_double(double v) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

}  // namespace c3d::io
