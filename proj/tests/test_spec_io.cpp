// SPDX-License-Identifier: MIT
#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "hessborn/spec_io.hpp"

using namespace hessborn;

namespace {

std::string spec_error(const std::string& text) {
  try {
    parse_spec(text, "t");
  } catch (const SpecError& e) {
    return e.what();
  }
  return "";
}

const char* kValid = R"({
  "dimension": 2, "coordinates": ["u", "v"],
  "metric": {"components": [["1", "u"], ["0", "1"]]},
  "connection": {"kind": "levi-civita"},
  "sample_box": [[-0.5, 0.5], [-0.5, 0.5]]
})";

class TempDir {
 public:
  TempDir() {
    path_ = std::filesystem::temp_directory_path() /
            ("hessborn_test_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
             ::testing::UnitTest::GetInstance()->current_test_info()->name());
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  const std::filesystem::path& path() const { return path_; }
  void write(const std::string& name, const std::string& text) const { std::ofstream(path_ / name) << text; }

 private:
  std::filesystem::path path_;
};

}  // namespace

TEST(Builtins, NamesAndKinds) {
  const auto names = list_examples();
  ASSERT_EQ(names.size(), 6u);
  EXPECT_EQ(names[0], "euclidean2");
  const auto corpus = builtin_corpus();
  ASSERT_EQ(corpus.size(), 6u);
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    EXPECT_EQ(corpus[i].name, names[i]);
    EXPECT_EQ(corpus[i].dimension(), 2);
  }
  const auto sphere = builtin_example("sphere2");
  EXPECT_EQ(sphere.connection, ConnectionKind::LeviCivita);
  EXPECT_EQ(sphere.coords, (std::vector<std::string>{"theta", "phi"}));
  EXPECT_TRUE(builtin_example("hessian-exp2").potential.has_value());
  EXPECT_EQ(builtin_example("pullback-flat").gamma.size(), 8u);
}

TEST(Builtins, UnknownName) {
  try {
    builtin_example("torus");
    FAIL();
  } catch (const SpecError& e) {
    EXPECT_NE(std::string(e.what()).find("torus"), std::string::npos);
  }
  EXPECT_THROW(load_spec("no-such-example"), SpecError);
}

TEST(Parse, DimensionMismatchNamesTheField) {
  const auto msg = spec_error(R"({
    "dimension": 3, "coordinates": ["u", "v", "w"],
    "metric": {"components": [["1", "0"], ["0", "1"]]},
    "connection": {"kind": "flat"},
    "sample_box": [[0, 1], [0, 1], [0, 1]]
  })");
  EXPECT_EQ(msg.rfind("metric.components: dimension mismatch", 0), 0u) << msg;
}

TEST(Parse, FieldPathsInErrors) {
  EXPECT_EQ(spec_error(R"({"dimension": 2, "coordinates": ["u"]})").rfind("coordinates: dimension mismatch", 0), 0u);
  EXPECT_EQ(spec_error(R"({"dimension": 5})").rfind("dimension:", 0), 0u);
  const auto bad_expr = spec_error(R"({
    "dimension": 1, "coordinates": ["u"],
    "metric": {"components": [["1 + w"]]},
    "connection": {"kind": "flat"}, "sample_box": [[0, 1]]
  })");
  EXPECT_EQ(bad_expr.rfind("metric.components[0][0]: ", 0), 0u) << bad_expr;
  EXPECT_NE(bad_expr.find("offset 4"), std::string::npos) << bad_expr;
  const auto bad_kind = spec_error(R"({
    "dimension": 1, "coordinates": ["u"], "metric": {"potential": "u^2"},
    "connection": {"kind": "affine"}, "sample_box": [[0, 1]]
  })");
  EXPECT_EQ(bad_kind.rfind("connection.kind: ", 0), 0u) << bad_kind;
  const auto bad_box = spec_error(R"({
    "dimension": 1, "coordinates": ["u"], "metric": {"potential": "u^2"},
    "connection": {"kind": "flat"}, "sample_box": [[1, 0]]
  })");
  EXPECT_EQ(bad_box.rfind("sample_box[0]: ", 0), 0u) << bad_box;
  EXPECT_EQ(spec_error(R"({"dimension": 1, "coordinates": ["u"], "metric": {}})").rfind("metric: ", 0), 0u);
}

TEST(Parse, JsonSyntaxErrorHasByteOffset) {
  const auto msg = spec_error("{\"dimension\": 2,,}");
  EXPECT_NE(msg.find("JSON syntax error at byte 17"), std::string::npos) << msg;
}

TEST(Parse, AsymmetricMetricIsAveraged) {
  const auto spec = parse_spec(std::string(kValid), "t");
  const std::vector<double> p{0.4, 0.0};
  EXPECT_DOUBLE_EQ(spec.metric_components[1].evaluate(p), 0.2);
  EXPECT_DOUBLE_EQ(spec.metric_components[2].evaluate(p), 0.2);
}

TEST(Parse, NameFallback) {
  EXPECT_EQ(parse_spec(std::string(kValid), "fallback").name, "fallback");
}

TEST(Json, RoundTrip) {
  for (const auto& spec : builtin_corpus()) {
    const auto doc = spec_to_json(spec);
    const auto again = parse_spec(doc, "ignored");
    EXPECT_EQ(again.name, spec.name);
    EXPECT_EQ(spec_to_json(again), doc) << spec.name;
  }
}

TEST(Files, LoadSpecAndCorpus) {
  TempDir dir;
  dir.write("b.json", kValid);
  dir.write("a.json", R"({"name": "line", "dimension": 1, "coordinates": ["t"],
                          "metric": {"potential": "t^2"}, "connection": {"kind": "flat"},
                          "sample_box": [[0, 1]]})");
  dir.write("notes.txt", "ignored");
  EXPECT_EQ(load_spec((dir.path() / "b.json").string()).name, "b");
  const auto corpus = load_corpus(dir.path());
  ASSERT_EQ(corpus.size(), 2u);
  EXPECT_EQ(corpus[0].name, "line");
  EXPECT_EQ(corpus[1].name, "b");
  dir.write("c.json", "{");
  try {
    load_corpus(dir.path());
    FAIL();
  } catch (const SpecError& e) {
    EXPECT_NE(std::string(e.what()).find("c.json"), std::string::npos);
  }
  EXPECT_THROW(load_corpus(dir.path() / "missing"), SpecError);
}
