#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "srgkit/gains_robust.h"
#include "srgkit/lti.h"

namespace srgkit {

// All parsers throw SchemaError with the source name and the offending field.

/// {"A": [[...]], "B": [[...]], "C": [[...]], "D": [[...]]}, row-major. For a
/// static gain A, B, C may be omitted or empty.
StateSpace parse_model_json(const std::string& text,
                            const std::string& source = "model");
std::string model_to_json(const StateSpace& ss);

/// {"u": [[...]], "y": [[...]]} with one row of m entries per time step.
Trajectory parse_trajectory_json(const std::string& text,
                                 const std::string& source = "trajectory");
/// Header u_1..u_m,y_1..y_m, then one row per time step.
Trajectory parse_trajectory_csv(const std::string& text,
                                const std::string& source = "trajectory");
std::string trajectory_to_json(const Trajectory& traj);
std::string trajectory_to_csv(const Trajectory& traj);

/// Either the per-step ball shortcut or an explicit model. The ball form
/// needs N, l and m before it becomes a NoiseModel.
struct NoiseSpec {
  std::optional<double> ball_v_bar;
  std::optional<NoiseModel> model;

  NoiseModel Resolve(int N, int l, int m) const;
  std::string Describe() const;
};

/// {"Q":[[...]],"S":[[...]],"R":[[...]],"Bv":[[...]]} or {"ball": {"v_bar": x}}.
NoiseSpec parse_noise_json(const std::string& text,
                           const std::string& source = "noise");
/// "ball:V_BAR" or "file:PATH".
NoiseSpec parse_noise_flag(const std::string& flag);

/// Whole file; SchemaError when it cannot be read.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

/// By extension: .csv is CSV, anything else JSON.
StateSpace load_model(const std::string& path);
Trajectory load_trajectory(const std::string& path);

/// N x m input: "prbs" (random +-1), "gaussian" (standard normal), "impulse"
/// (1 at k = 0 on every channel) or "file:PATH" (a trajectory file's u).
/// Deterministic in seed.
Eigen::MatrixXd make_input(const std::string& spec, int N, int m,
                           std::uint64_t seed);

}  // namespace srgkit
