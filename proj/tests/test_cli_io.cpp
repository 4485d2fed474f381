#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "enscribe/cli.hpp"
#include "enscribe/random.hpp"

using namespace enscribe;
namespace fs = std::filesystem;

namespace {

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("enscribe_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write_text(const std::string& name, const QuantumText& t) {
    const std::string path = (dir_ / name).string();
    io::write_json_file(path, io::text_to_json(t));
    return path;
  }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  int run(cli::RunConfig c, std::string* out = nullptr, std::string* err = nullptr) {
    std::ostringstream o, e;
    const int code = cli::run_command(c, o, e);
    if (out) *out = o.str();
    if (err) *err = e.str();
    return code;
  }

  static cli::RunConfig config(const std::string& command, const std::string& input = "") {
    cli::RunConfig c;
    c.command = command;
    c.input_path = input;
    c.starts = 16;
    return c;
  }

  fs::path dir_;
};

QuantumText qubit_pair(double z) {
  const double ap = std::sqrt((1.0 + z) / 2.0), am = std::sqrt((1.0 - z) / 2.0);
  return make_text(2, {{ap, am}, {ap, -am}});
}

QuantumText one_zero_overlap() {
  const double s = 1.0 / std::sqrt(3.0);
  return make_text(3, {{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {s, s, s}});
}

}  // namespace

TEST(Io, TextRoundTripIsBitExact) {
  random::Engine rng(61);
  const QuantumText t = random::random_text(4, 3, rng);
  const std::string dumped = io::text_to_json(t).dump();
  const QuantumText back = io::text_from_json(nlohmann::json::parse(dumped));
  EXPECT_EQ((back.states() - t.states()).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Io, CertificateAndProcedureRoundTrip) {
  const QubitExample ex = qubit_example();
  const auto cert = io::certificate_from_json(nlohmann::json::parse(io::certificate_to_json(ex.certificate).dump()));
  EXPECT_EQ(cert.params.Q, ex.certificate.params.Q);
  EXPECT_EQ(cert.params.q, ex.certificate.params.q);
  EXPECT_EQ(cert.flavor, ex.certificate.flavor);
  EXPECT_EQ(cert.residual, ex.certificate.residual);
  EXPECT_EQ((cert.params.tablet - ex.certificate.params.tablet).norm(), 0.0);
  const Matrix u = io::procedure_from_json(nlohmann::json::parse(io::procedure_to_json(ex.procedure).dump()));
  EXPECT_EQ((u - ex.procedure).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Io, MalformedInputsRaiseParseError) {
  for (const char* bad : {R"({"states": []})", R"({"dimension": 2, "states": [[[1, 0], [0]]]})",
                          R"({"dimension": "2", "states": []})", R"([1, 2])"}) {
    try {
      io::text_from_json(nlohmann::json::parse(bad));
      FAIL() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::ParseError) << bad;
    }
  }
  EXPECT_THROW(io::certificate_from_json(nlohmann::json::parse(R"({"Q": 0.5})")), Error);
  EXPECT_THROW(io::procedure_from_json(nlohmann::json::parse(R"({"dim": 2, "matrix": [[]]})")), Error);
  EXPECT_THROW(io::read_json_file("/nonexistent/enscribe.json"), Error);
}

TEST_F(CliTest, ClassifyExitCodes) {
  std::string out;
  EXPECT_EQ(run(config("classify", write_text("pair.json", make_text(Matrix::Identity(2, 2)))), &out), 0);
  const auto j = nlohmann::json::parse(out);
  EXPECT_TRUE(j["classification"]["classical"].get<bool>());
  EXPECT_EQ(j["illegibility"]["verdict"], "possibly_enscribable");

  EXPECT_EQ(run(config("classify", write_text("ozo.json", one_zero_overlap())), &out), 2);
  EXPECT_EQ(nlohmann::json::parse(out)["illegibility"]["verdict"], "illegible(overlap_pattern)");

  EXPECT_EQ(run(config("classify", write_text("uni.json", make_real_uniform(3, -0.3))), &out), 2);
  EXPECT_EQ(nlohmann::json::parse(out)["illegibility"]["verdict"], "illegible(uniform_threshold)");
}

TEST_F(CliTest, ErrorsExitOne) {
  std::string err;
  EXPECT_EQ(run(config("classify", path("missing.json")), nullptr, &err), 1);
  EXPECT_NE(err.find("FileNotFound"), std::string::npos);

  std::ofstream(path("garbage.json")) << "{not json";
  EXPECT_EQ(run(config("solve", path("garbage.json")), nullptr, &err), 1);
  EXPECT_NE(err.find("ParseError"), std::string::npos);

  std::ofstream(path("colinear.json")) << R"({"dimension": 2, "states": [[[1,0],[0,0]], [[0,1],[0,0]]]})";
  EXPECT_EQ(run(config("gram", path("colinear.json"))), 1);

  auto c = config("solve", write_text("p.json", qubit_pair(0.2)));
  c.tolerance = -1.0;
  EXPECT_EQ(run(c), 1);
  c = config("nonsense", path("p.json"));
  EXPECT_EQ(run(c), 1);
  c = config("clone", path("p.json"));
  EXPECT_EQ(run(c), 1);
}

TEST_F(CliTest, SolveDispatch) {
  std::string out;
  EXPECT_EQ(run(config("solve", write_text("half.json", qubit_pair(0.5))), &out), 0);
  EXPECT_NEAR(nlohmann::json::parse(out)["Q"].get<double>(), -4.0 / 9.0, 1e-14);

  auto c = config("solve", write_text("qubit.json", qubit_pair(std::sqrt(3.0) - 2.0)));
  c.q = 1.0;
  EXPECT_EQ(run(c, &out), 0);
  const auto cert = io::certificate_from_json(nlohmann::json::parse(out));
  EXPECT_NEAR(std::abs(cert.params.tablet(0)), 1.0, 1e-10);
  EXPECT_NEAR(cert.params.Q, 1.0, 1e-12);

  // A Q away from the closed form goes to the fixed-Q search.
  c = config("solve", path("half.json"));
  c.q = 0.7;  // Q = 1.4 / 1.49
  EXPECT_EQ(run(c, &out), 0);
  EXPECT_NEAR(nlohmann::json::parse(out)["Q"].get<double>(), 1.4 / 1.49, 1e-12);

  c = config("solve", write_text("ill.json", make_real_uniform(3, -0.3)));
  EXPECT_EQ(run(c, &out), 2);
  EXPECT_GT(nlohmann::json::parse(out)["best_residual"].get<double>(), 1e-4);

  c = config("solve", path("half.json"));
  c.search = true;
  EXPECT_EQ(run(c, &out), 0);
  EXPECT_LT(nlohmann::json::parse(out)["residual"].get<double>(), 1e-8);
}

TEST_F(CliTest, OutputIsDeterministic) {
  random::Engine rng(62);
  const std::string in = write_text("eq.json", apply_equivalence(make_real_uniform(3, 0.3), random::random_equivalence(3, 3, rng)));
  auto c = config("solve", in);
  c.search = true;
  c.seed = 5;
  std::string a, b;
  EXPECT_EQ(run(c, &a), 0);
  EXPECT_EQ(run(c, &b), 0);
  EXPECT_EQ(a, b);
  c.output_path = path("out1.json");
  EXPECT_EQ(run(c), 0);
  std::stringstream file;
  file << std::ifstream(path("out1.json")).rdbuf();
  EXPECT_EQ(file.str(), a);
}

TEST_F(CliTest, ProcedureAndClone) {
  const std::string in = write_text("neg.json", qubit_pair(-0.5));
  auto c = config("solve", in);
  c.output_path = path("cert.json");
  ASSERT_EQ(run(c), 0);

  c = config("build-procedure", in);
  c.certificate_path = path("cert.json");
  std::string out;
  ASSERT_EQ(run(c, &out), 0);
  const Matrix u = io::procedure_from_json(nlohmann::json::parse(out));
  EXPECT_LT(unitarity_defect(u), 1e-10);

  c.command = "clone";
  ASSERT_EQ(run(c, &out), 0);
  const auto reports = nlohmann::json::parse(out)["reports"];
  ASSERT_EQ(reports.size(), 2u);
  for (const auto& r : reports) {
    EXPECT_NEAR(r["p_success"].get<double>(), 2.0 / 3.0, 1e-10);
    EXPECT_NEAR(r["p_formula_real_q"].get<double>(), 2.0 / 3.0, 1e-10);
    EXPECT_NEAR(r["fidelity"].get<double>(), 1.0, 1e-8);
    EXPECT_EQ(r["failure_symmetry"], "-1");
  }

  // A certificate for a different text is rejected.
  c.input_path = write_text("other.json", qubit_pair(0.3));
  EXPECT_EQ(run(c), 1);
}

TEST_F(CliTest, QRange) {
  std::string out;
  EXPECT_EQ(run(config("qrange", write_text("half.json", qubit_pair(0.5))), &out), 0);
  auto j = nlohmann::json::parse(out);
  EXPECT_EQ(j["method"], "two_text_formula");
  EXPECT_NEAR(j["intervals"][1]["lo"].get<double>(), 0.8, 1e-15);

  EXPECT_EQ(run(config("qrange", write_text("uni.json", make_real_uniform(3, 0.5))), &out), 0);
  j = nlohmann::json::parse(out);
  EXPECT_EQ(j["method"], "uniform_formula");
  EXPECT_NEAR(j["intervals"][0]["hi"].get<double>(), -0.5, 1e-12);

  EXPECT_EQ(run(config("qrange", write_text("ill.json", make_real_uniform(3, -0.3))), &out), 2);

  auto c = config("qrange", write_text("cls.json", make_text(Matrix::Identity(3, 3).leftCols(2))));
  c.q_grid = 0.25;
  c.starts = 4;
  EXPECT_EQ(run(c, &out), 0);
  j = nlohmann::json::parse(out);
  EXPECT_EQ(j["method"], "sweep");
  ASSERT_EQ(j["intervals"].size(), 1u);
  EXPECT_EQ(j["intervals"][0]["lo"].get<double>(), -1.0);
  EXPECT_EQ(j["intervals"][0]["hi"].get<double>(), 1.0);
}

TEST_F(CliTest, VerifyTheoremsSingleCriterion) {
  auto c = config("verify-theorems");
  c.only = "z0";
  std::string out;
  EXPECT_EQ(run(c, &out), 0);
  const auto j = nlohmann::json::parse(out);
  ASSERT_EQ(j["criteria"].size(), 1u);
  EXPECT_NEAR(j["criteria"][0]["measured"]["z0_3"].get<double>(), -0.203785, 1e-5);
  c.only = "qubit-example";
  EXPECT_EQ(run(c, &out), 0);
  EXPECT_LT(nlohmann::json::parse(out)["criteria"][0]["measured"]["action_residual"].get<double>(), 1e-10);
  c.only = "no-such-criterion";
  EXPECT_EQ(run(c), 1);
}
