#include "fcns/field_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

#include "json.hpp"

namespace fcns {

namespace {

using nlohmann::json;

json radius_to_json(double r) { return std::isinf(r) ? json(nullptr) : json(r); }

double radius_from_json(const json& j) { return j.is_null() ? kInfinity : j.get<double>(); }

json parse_line(const std::string& line, const std::string& what) {
  try {
    return json::parse(line);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, what + ": " + e.what());
  }
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorCode::kParse, "cannot write " + path.string());
  return os;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorCode::kParse, "cannot read " + path.string());
  return is;
}

}  // namespace

std::string degree_key(double d) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", d);
  // Prefer the shortest representation that round-trips.
  for (int prec = 1; prec <= 17; ++prec) {
    char shorter[32];
    std::snprintf(shorter, sizeof shorter, "%.*g", prec, d);
    if (std::stod(shorter) == d) return shorter;
  }
  return buf;
}

void write_field(std::ostream& os, const FourierField& field) {
  json header = {{"n", field.dimension()}, {"trunc", radius_to_json(field.truncation_radius())}};
  os << header.dump() << '\n';
  const int n = field.dimension();
  for (const auto& m : field.modes()) {
    json k = json::array(), re = json::array(), im = json::array();
    for (int i = 0; i < n; ++i) {
      k.push_back(m.k[i]);
      re.push_back(m.a[i].real());
      im.push_back(m.a[i].imag());
    }
    json line;
    line["k"] = std::move(k);
    line["re"] = std::move(re);
    line["im"] = std::move(im);
    os << line.dump() << '\n';
  }
}

FourierField read_field(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw Error(ErrorCode::kParse, "empty field snapshot");
  const json header = parse_line(line, "field header");
  int n = 0;
  double trunc = kInfinity;
  try {
    n = header.at("n").get<int>();
    trunc = radius_from_json(header.at("trunc"));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("field header: ") + e.what());
  }
  if (n < 1 || n > kMaxDim) throw Error(ErrorCode::kParse, "unsupported dimension " + std::to_string(n));
  std::vector<Mode> modes;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const json j = parse_line(line, "field mode");
    try {
      const auto& k = j.at("k");
      const auto& re = j.at("re");
      const auto& im = j.at("im");
      if (k.size() != static_cast<std::size_t>(n) || re.size() != k.size() || im.size() != k.size()) {
        throw Error(ErrorCode::kParse, "mode entry of the wrong length");
      }
      Mode m{WaveVector(n), CVector(n)};
      for (int i = 0; i < n; ++i) {
        m.k[i] = k[i].get<int>();
        m.a[i] = Complex(re[i].get<double>(), im[i].get<double>());
      }
      modes.push_back(m);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kParse, std::string("field mode: ") + e.what());
    }
  }
  return FourierField::from_modes(n, trunc, std::move(modes));
}

void write_field_file(const std::filesystem::path& path, const FourierField& field) {
  auto os = open_out(path);
  write_field(os, field);
}

FourierField read_field_file(const std::filesystem::path& path) {
  auto is = open_in(path);
  return read_field(is);
}

std::filesystem::path write_trajectory(const std::filesystem::path& dir, const std::string& stem,
                                       const Trajectory& trajectory) {
  std::filesystem::create_directories(dir);
  const auto path = dir / (stem + ".jsonl");
  auto os = open_out(path);
  const double trunc = trajectory.final_field.truncation_radius();
  for (std::size_t i = 0; i < trajectory.points.size(); ++i) {
    const auto& p = trajectory.points[i];
    json rec;
    rec["t"] = p.t;
    json norms = json::object();
    for (const auto& [d, v] : p.norms.values) norms[degree_key(d)] = v;
    rec["seminorms"] = std::move(norms);
    rec["a0_abs"] = p.norms.a0_abs;
    rec["trunc_loss"] = p.truncation_loss;
    rec["trunc"] = radius_to_json(trunc);
    if (p.field) {
      char name[64];
      std::snprintf(name, sizeof name, "_snap_%06zu.jsonl", i);
      const std::string ref = stem + name;
      write_field_file(dir / ref, *p.field);
      rec["field_ref"] = ref;
    } else {
      rec["field_ref"] = nullptr;
    }
    os << rec.dump() << '\n';
  }
  return path;
}

Trajectory read_trajectory(const std::filesystem::path& path) {
  auto is = open_in(path);
  Trajectory traj;
  traj.scheme = "file";
  double trunc = kInfinity;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const json rec = parse_line(line, "trajectory record");
    TrajectoryPoint p;
    try {
      p.t = rec.at("t").get<double>();
      p.norms.time = p.t;
      for (const auto& [key, value] : rec.at("seminorms").items()) {
        p.norms.values[std::stod(key)] = value.get<double>();
      }
      p.norms.a0_abs = rec.value("a0_abs", 0.0);
      p.truncation_loss = rec.value("trunc_loss", 0.0);
      if (rec.contains("trunc")) trunc = radius_from_json(rec["trunc"]);
      const json& ref = rec.at("field_ref");
      if (!ref.is_null()) p.field = read_field_file(path.parent_path() / ref.get<std::string>());
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kParse, std::string("trajectory record: ") + e.what());
    }
    traj.points.push_back(std::move(p));
  }
  if (traj.points.empty()) throw Error(ErrorCode::kParse, "empty trajectory " + path.string());
  traj.last_valid_time = traj.points.back().t;
  traj.truncation_loss = traj.points.back().truncation_loss;
  for (auto it = traj.points.rbegin(); it != traj.points.rend(); ++it) {
    if (it->field) {
      traj.final_field = *it->field;
      traj.dimension = it->field->dimension();
      break;
    }
  }
  if (traj.dimension == 0) traj.final_field = FourierField(0, trunc);
  return traj;
}

}  // namespace fcns
