#include "srgkit/io.h"

#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "srgkit/errors.h"

namespace srgkit {

using Eigen::MatrixXd;
using nlohmann::json;

namespace {

[[noreturn]] void Fail(const std::string& source, const std::string& what) {
  throw SchemaError(source + ": " + what);
}

json Parse(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    Fail(source, e.what());
  }
}

// Row-major nested array. An empty array is 0 x 0.
MatrixXd ReadMatrix(const json& j, const std::string& source,
                    const std::string& field) {
  const std::string where = "field \"" + field + "\"";
  if (!j.is_array()) Fail(source, where + " must be an array of rows");
  if (j.empty()) return MatrixXd(0, 0);
  const size_t cols = j[0].is_array() ? j[0].size() : 0;
  MatrixXd M(j.size(), cols);
  for (size_t r = 0; r < j.size(); ++r) {
    const json& row = j[r];
    if (!row.is_array() || row.size() != cols) {
      Fail(source, where + " row " + std::to_string(r) + " must be an array of " +
                       std::to_string(cols) + " numbers");
    }
    for (size_t c = 0; c < cols; ++c) {
      if (!row[c].is_number()) {
        Fail(source, where + " entry [" + std::to_string(r) + "][" +
                         std::to_string(c) + "] is not a number");
      }
      M(r, c) = row[c].get<double>();
    }
  }
  return M;
}

MatrixXd Field(const json& j, const std::string& source, const std::string& key,
               bool required = true) {
  if (!j.contains(key)) {
    if (required) Fail(source, "missing field \"" + key + "\"");
    return MatrixXd(0, 0);
  }
  return ReadMatrix(j.at(key), source, key);
}

json WriteMatrix(const MatrixXd& M) {
  json rows = json::array();
  for (int r = 0; r < M.rows(); ++r) {
    json row = json::array();
    for (int c = 0; c < M.cols(); ++c) row.push_back(M(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string Lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

bool EndsWith(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         Lower(s.substr(s.size() - suffix.size())) == suffix;
}

}  // namespace

StateSpace parse_model_json(const std::string& text, const std::string& source) {
  const json j = Parse(text, source);
  if (!j.is_object()) Fail(source, "expected a JSON object");
  const MatrixXd D = Field(j, source, "D");
  MatrixXd A = Field(j, source, "A", false);
  MatrixXd B = Field(j, source, "B", false);
  MatrixXd C = Field(j, source, "C", false);
  const int m = static_cast<int>(D.rows());
  if (A.size() == 0) {
    A.resize(0, 0);
    if (B.size() == 0) B.resize(0, m);
    if (C.size() == 0) C.resize(m, 0);
  }
  try {
    return StateSpace(A, B, C, D);
  } catch (const DimensionError& e) {
    Fail(source, e.what());
  }
}

std::string model_to_json(const StateSpace& ss) {
  json j;
  j["A"] = WriteMatrix(ss.A());
  j["B"] = WriteMatrix(ss.B());
  j["C"] = WriteMatrix(ss.C());
  j["D"] = WriteMatrix(ss.D());
  return j.dump(2) + "\n";
}

Trajectory parse_trajectory_json(const std::string& text,
                                 const std::string& source) {
  const json j = Parse(text, source);
  if (!j.is_object()) Fail(source, "expected a JSON object");
  Trajectory t{Field(j, source, "u"), Field(j, source, "y")};
  try {
    t.Validate();
  } catch (const DimensionError& e) {
    Fail(source, e.what());
  }
  return t;
}

Trajectory parse_trajectory_csv(const std::string& text,
                                const std::string& source) {
  std::istringstream is(text);
  std::string line;
  std::vector<std::vector<double>> rows;
  int lineno = 0;
  size_t width = 0;
  bool header = false;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ls(line);
    std::string f;
    while (std::getline(ls, f, ',')) fields.push_back(f);
    if (!header) {
      header = true;
      width = fields.size();
      if (width == 0 || width % 2 != 0) {
        Fail(source, "line 1: header needs u_1..u_m,y_1..y_m columns");
      }
      const size_t m = width / 2;
      for (size_t k = 0; k < width; ++k) {
        const std::string want =
            (k < m ? "u_" : "y_") + std::to_string(k % m + 1);
        if (fields[k] != want) {
          Fail(source, "line 1: column " + std::to_string(k + 1) + " is \"" +
                           fields[k] + "\", expected \"" + want + "\"");
        }
      }
      continue;
    }
    if (fields.size() != width) {
      Fail(source, "line " + std::to_string(lineno) + ": expected " +
                       std::to_string(width) + " fields");
    }
    std::vector<double> row;
    for (size_t k = 0; k < width; ++k) {
      try {
        size_t used = 0;
        row.push_back(std::stod(fields[k], &used));
        if (used != fields[k].size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        Fail(source, "line " + std::to_string(lineno) + ", column " +
                         std::to_string(k + 1) + ": not a number");
      }
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) Fail(source, "no data rows");
  const int m = static_cast<int>(width / 2);
  Trajectory t{MatrixXd(rows.size(), m), MatrixXd(rows.size(), m)};
  for (size_t r = 0; r < rows.size(); ++r) {
    for (int k = 0; k < m; ++k) {
      t.u(r, k) = rows[r][k];
      t.y(r, k) = rows[r][m + k];
    }
  }
  return t;
}

std::string trajectory_to_json(const Trajectory& traj) {
  json j;
  j["u"] = WriteMatrix(traj.u);
  j["y"] = WriteMatrix(traj.y);
  return j.dump() + "\n";
}

std::string trajectory_to_csv(const Trajectory& traj) {
  std::ostringstream os;
  const int m = traj.channels();
  for (int k = 0; k < m; ++k) os << (k ? "," : "") << "u_" << k + 1;
  for (int k = 0; k < m; ++k) os << ",y_" << k + 1;
  os << '\n';
  os.precision(17);
  for (int r = 0; r < traj.length(); ++r) {
    for (int k = 0; k < m; ++k) os << (k ? "," : "") << traj.u(r, k);
    for (int k = 0; k < m; ++k) os << ',' << traj.y(r, k);
    os << '\n';
  }
  return os.str();
}

NoiseModel NoiseSpec::Resolve(int N, int l, int m) const {
  if (ball_v_bar) return ball_noise_model(*ball_v_bar, N, l, m);
  if (!model) throw SchemaError("noise: no noise model given");
  if (model->columns() != N - l || model->Bv.rows() != m) {
    std::ostringstream msg;
    msg << "noise: model is for " << model->columns() << " columns and "
        << model->Bv.rows() << " outputs, data have N - l = " << N - l
        << " and m = " << m;
    throw SchemaError(msg.str());
  }
  return *model;
}

std::string NoiseSpec::Describe() const {
  if (ball_v_bar) {
    std::ostringstream os;
    os.precision(17);
    os << "ball:" << *ball_v_bar;
    return os.str();
  }
  return model ? "explicit" : "none";
}

NoiseSpec parse_noise_json(const std::string& text, const std::string& source) {
  const json j = Parse(text, source);
  if (!j.is_object()) Fail(source, "expected a JSON object");
  NoiseSpec spec;
  if (j.contains("ball")) {
    const json& b = j.at("ball");
    if (!b.is_object() || !b.contains("v_bar") || !b.at("v_bar").is_number()) {
      Fail(source, "field \"ball\" must be {\"v_bar\": number}");
    }
    const double v = b.at("v_bar").get<double>();
    if (!(v > 0.0)) Fail(source, "field \"ball.v_bar\" must be positive");
    spec.ball_v_bar = v;
    return spec;
  }
  NoiseModel nm;
  nm.Q = Field(j, source, "Q");
  nm.S = Field(j, source, "S");
  nm.R = Field(j, source, "R");
  nm.Bv = Field(j, source, "Bv");
  try {
    nm.Validate();
  } catch (const std::invalid_argument& e) {
    Fail(source, e.what());
  }
  spec.model = std::move(nm);
  return spec;
}

NoiseSpec parse_noise_flag(const std::string& flag) {
  if (flag.rfind("ball:", 0) == 0) {
    const std::string v = flag.substr(5);
    NoiseSpec spec;
    try {
      size_t used = 0;
      spec.ball_v_bar = std::stod(v, &used);
      if (used != v.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw SchemaError("--noise: \"" + v + "\" is not a number");
    }
    if (!(*spec.ball_v_bar > 0.0)) throw SchemaError("--noise: v_bar must be positive");
    return spec;
  }
  if (flag.rfind("file:", 0) == 0) {
    const std::string path = flag.substr(5);
    return parse_noise_json(read_text_file(path), path);
  }
  throw SchemaError("--noise: expected ball:V_BAR or file:PATH, got \"" + flag + "\"");
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError(path + ": cannot open file");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": cannot write file");
  out << content;
  if (!out) throw std::runtime_error(path + ": write failed");
}

StateSpace load_model(const std::string& path) {
  return parse_model_json(read_text_file(path), path);
}

Trajectory load_trajectory(const std::string& path) {
  const std::string text = read_text_file(path);
  if (EndsWith(path, ".csv")) return parse_trajectory_csv(text, path);
  return parse_trajectory_json(text, path);
}

MatrixXd make_input(const std::string& spec, int N, int m, std::uint64_t seed) {
  if (N < 1 || m < 1) throw std::invalid_argument("input needs N >= 1 and m >= 1");
  std::mt19937_64 rng(seed);
  MatrixXd u = MatrixXd::Zero(N, m);
  if (spec == "prbs") {
    std::bernoulli_distribution coin(0.5);
    for (int k = 0; k < N; ++k)
      for (int c = 0; c < m; ++c) u(k, c) = coin(rng) ? 1.0 : -1.0;
  } else if (spec == "gaussian") {
    std::normal_distribution<double> normal;
    for (int k = 0; k < N; ++k)
      for (int c = 0; c < m; ++c) u(k, c) = normal(rng);
  } else if (spec == "impulse") {
    u.row(0).setOnes();
  } else if (spec.rfind("file:", 0) == 0) {
    const Trajectory t = load_trajectory(spec.substr(5));
    if (t.channels() != m) {
      throw SchemaError(spec.substr(5) + ": input has " +
                        std::to_string(t.channels()) + " channels, model has " +
                        std::to_string(m));
    }
    return t.u;
  } else {
    throw SchemaError("input spec must be prbs, gaussian, impulse or file:PATH, got \"" +
                      spec + "\"");
  }
  return u;
}

}  // namespace srgkit
