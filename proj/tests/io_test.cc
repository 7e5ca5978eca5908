#include "srgkit/io.h"

#include <gtest/gtest.h>

#include "srgkit/errors.h"
#include "srgkit/fixtures.h"

namespace srgkit {
namespace {

using Eigen::MatrixXd;

TEST(ModelJsonTest, RoundTrip) {
  const StateSpace ss = fixtures::unstable_mimo();
  const StateSpace back = parse_model_json(model_to_json(ss));
  EXPECT_EQ(back.A(), ss.A());
  EXPECT_EQ(back.B(), ss.B());
  EXPECT_EQ(back.C(), ss.C());
  EXPECT_EQ(back.D(), ss.D());
}

TEST(ModelJsonTest, StaticGainShortForm) {
  const StateSpace ss = parse_model_json(R"({"D": [[2.0]]})");
  EXPECT_EQ(ss.num_states(), 0);
  EXPECT_EQ(ss.D()(0, 0), 2.0);
  const StateSpace empty = parse_model_json(R"({"A": [], "B": [], "C": [], "D": [[1, 0], [0, 1]]})");
  EXPECT_EQ(empty.num_channels(), 2);
}

TEST(ModelJsonTest, Diagnostics) {
  auto message = [](const std::string& text) {
    try {
      parse_model_json(text, "m.json");
    } catch (const SchemaError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  EXPECT_NE(message(R"({"A": [[1]], "B": [[1]], "C": [[1]]})").find("missing field \"D\""),
            std::string::npos);
  EXPECT_NE(message(R"({"A": [[1, 2], [3]], "B": [[1]], "C": [[1]], "D": [[0]]})")
                .find("field \"A\" row 1"),
            std::string::npos);
  EXPECT_NE(message(R"({"A": [[1]], "B": [["x"]], "C": [[1]], "D": [[0]]})")
                .find("entry [0][0]"),
            std::string::npos);
  EXPECT_NE(message(R"({"A": [[1]], "B": [[1, 1]], "C": [[1]], "D": [[0]]})"),
            "no error");
  EXPECT_NE(message("{\"A\": \n [[1]],,}").find("m.json"), std::string::npos);
}

TEST(TrajectoryIoTest, JsonAndCsvRoundTrip) {
  Trajectory t{MatrixXd(3, 2), MatrixXd(3, 2)};
  t.u << 1, 2, 3, 4, 5, 6;
  t.y << 0.1, 1.0 / 3.0, -7, 8e-20, 9, 10;
  const Trajectory a = parse_trajectory_json(trajectory_to_json(t));
  EXPECT_EQ(a.u, t.u);
  EXPECT_EQ(a.y, t.y);
  const std::string csv = trajectory_to_csv(t);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "u_1,u_2,y_1,y_2");
  const Trajectory b = parse_trajectory_csv(csv);
  EXPECT_EQ(b.u, t.u);
  EXPECT_EQ(b.y, t.y);
}

TEST(TrajectoryIoTest, Diagnostics) {
  EXPECT_THROW(parse_trajectory_csv("u_1,y_2\n1,2\n"), SchemaError);
  EXPECT_THROW(parse_trajectory_csv("u_1,y_1\n1,2\n3\n"), SchemaError);
  EXPECT_THROW(parse_trajectory_csv("u_1,y_1\n1,abc\n"), SchemaError);
  EXPECT_THROW(parse_trajectory_csv("u_1,y_1\n"), SchemaError);
  EXPECT_THROW(parse_trajectory_json(R"({"u": [[1]], "y": [[1], [2]]})"), SchemaError);
  EXPECT_THROW(parse_trajectory_json(R"({"u": [[1]]})"), SchemaError);
}

TEST(NoiseIoTest, BallShortcut) {
  const NoiseSpec spec = parse_noise_json(R"({"ball": {"v_bar": 0.05}})");
  ASSERT_TRUE(spec.ball_v_bar);
  const NoiseModel nm = spec.Resolve(100, 2, 1);
  EXPECT_NEAR(nm.R(0, 0), 0.0025 * 98, 1e-12);
  EXPECT_EQ(parse_noise_flag("ball:0.01").ball_v_bar.value(), 0.01);
  EXPECT_THROW(parse_noise_flag("ball:abc"), SchemaError);
  EXPECT_THROW(parse_noise_flag("ball:-1"), SchemaError);
  EXPECT_THROW(parse_noise_flag("gauss:1"), SchemaError);
  EXPECT_THROW(parse_noise_json(R"({"ball": {"radius": 1}})"), SchemaError);
}

TEST(NoiseIoTest, ExplicitModel) {
  const NoiseSpec spec = parse_noise_json(
      R"({"Q": [[-1, 0], [0, -1]], "S": [[0], [0]], "R": [[0.5]], "Bv": [[1]]})");
  ASSERT_TRUE(spec.model);
  EXPECT_EQ(spec.Resolve(3, 1, 1).R(0, 0), 0.5);
  EXPECT_THROW(spec.Resolve(4, 1, 1), SchemaError);
  EXPECT_THROW(parse_noise_json(R"({"Q": [[1]], "S": [[0]], "R": [[0.5]], "Bv": [[1]]})"),
               SchemaError);
}

TEST(InputSpecTest, Kinds) {
  const MatrixXd p = make_input("prbs", 50, 2, 3);
  EXPECT_TRUE((p.array().abs() == 1.0).all());
  EXPECT_EQ(p, make_input("prbs", 50, 2, 3));
  EXPECT_NE(p, make_input("prbs", 50, 2, 4));
  const MatrixXd g = make_input("gaussian", 200, 2, 1);
  EXPECT_TRUE(is_persistently_exciting(g, 7));
  const MatrixXd i = make_input("impulse", 5, 1, 0);
  EXPECT_EQ(i.col(0).sum(), 1.0);
  EXPECT_EQ(i(0, 0), 1.0);
  EXPECT_THROW(make_input("sine", 5, 1, 0), SchemaError);
  EXPECT_THROW(make_input("file:/nonexistent/x.json", 5, 1, 0), SchemaError);
}

TEST(FileIoTest, LoadByExtension) {
  const std::string dir = ::testing::TempDir();
  Trajectory t = simulate(fixtures::low_pass(), make_input("gaussian", 10, 1, 2));
  write_text_file(dir + "t.csv", trajectory_to_csv(t));
  write_text_file(dir + "t.json", trajectory_to_json(t));
  EXPECT_EQ(load_trajectory(dir + "t.csv").y, t.y);
  EXPECT_EQ(load_trajectory(dir + "t.json").y, t.y);
  write_text_file(dir + "m.json", model_to_json(fixtures::low_pass()));
  EXPECT_EQ(load_model(dir + "m.json").C(), fixtures::low_pass().C());
  EXPECT_THROW(load_model(dir + "missing.json"), SchemaError);
}

}  // namespace
}  // namespace srgkit
