#include "intrvfl/data.hpp"
#include "intrvfl/error.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <map>

using namespace intrvfl;

TEST_CASE("labels are re-indexed in first-appearance order") {
  testutil::TempDir dir;
  const auto p = dir.write("tiny.csv", "1.0,2.0,a\n3.0,4.0,b\n5.0,6.0,a\n");
  const auto ds = load_csv(p);
  CHECK(ds.labels == std::vector<int>{0, 1, 0});
  CHECK(ds.n_classes == 2);
  CHECK(ds.class_names == std::vector<std::string>{"a", "b"});
  CHECK(ds.n_features() == 2);
  CHECK(ds.name == "tiny");
}

TEST_CASE("parse error names the offending row") {
  testutil::TempDir dir;
  std::string text;
  for (int r = 1; r <= 9; ++r) text += (r == 7 ? std::string("x") : std::to_string(r)) + ",1," + (r % 2 ? "a" : "b") + "\n";
  const auto p = dir.write("bad.csv", text);
  try {
    (void)load_csv(p);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.row() == 7);
    CHECK(std::string(e.what()).find("row 7") != std::string::npos);
  }
}

TEST_CASE("ragged rows, single class, header names, quoting, delimiters") {
  testutil::TempDir dir;
  CHECK_THROWS_AS(load_csv(dir.write("ragged.csv", "1,2,a\n1,b\n")), ParseError);
  CHECK_THROWS_AS(load_csv(dir.write("one.csv", "1,2,a\n3,4,a\n")), ValidationError);
  CHECK_THROWS_AS(load_csv(dir.path / "missing.csv"), ValidationError);

  const auto named = load_csv(dir.write("named.csv", "species,x,y\nsetosa,1,2\nvirginica,3,4\n"),
                              CsvOptions{',', std::string("species")});
  CHECK(named.n_samples() == 2);
  CHECK(named.features(1, 0) == 3.0);
  CHECK(named.class_names[1] == "virginica");

  const auto first = load_csv(dir.write("first.csv", "a;1;2\nb;3;4\n"), CsvOptions{';', 0});
  CHECK(first.features(0, 1) == 2.0);

  const auto quoted = load_csv(dir.write("quoted.csv", "f1,f2,class\n1,2,\"x, y\"\n3,4,z\n"));
  CHECK(quoted.class_names[0] == "x, y");
  CHECK(quoted.n_samples() == 2);
}

TEST_CASE("bundled iris export has the expected shape") {
  const auto path = std::filesystem::path(INTRVFL_DATA_DIR) / "iris.csv";
  const auto ds = load_csv(path);
  CHECK(ds.n_samples() == 150);
  CHECK(ds.n_features() == 4);
  CHECK(ds.n_classes == 3);
}

TEST_CASE("normalizer fit and apply") {
  Eigen::MatrixXd col(3, 1);
  col << 2, 4, 6;
  const auto n = Normalizer::fit(col);
  CHECK(n.min()[0] == 2.0);
  CHECK(n.max()[0] == 6.0);
  CHECK(n.apply(std::vector<double>{4.0})[0] == 0.5);
  CHECK(n.apply(std::vector<double>{8.0})[0] == 1.0);
  CHECK(n.apply(std::vector<double>{-8.0})[0] == 0.0);

  Eigen::MatrixXd constant(2, 1);
  constant << 5, 5;
  const auto c = Normalizer::fit(constant);
  CHECK(c.apply(std::vector<double>{5.0})[0] == 0.0);
  CHECK(c.constant_features() == std::vector<std::size_t>{0});

  Eigen::MatrixXd two(2, 2);
  two << 0, 10, 1, 20;
  const auto t = Normalizer::fit(two);
  CHECK(t.min() == std::vector<double>{0, 10});
  CHECK(t.max() == std::vector<double>{1, 20});

  const auto ds = testutil::gaussian_classes(50, 4, 3, 1);
  const Eigen::MatrixXd applied = Normalizer::fit(ds.features).apply(ds.features);
  CHECK(applied.minCoeff() >= 0.0);
  CHECK(applied.maxCoeff() <= 1.0);
}

TEST_CASE("one_hot") {
  const std::vector<int> a{0, 2};
  Eigen::MatrixXd e(2, 3);
  e << 1, 0, 0, 0, 0, 1;
  CHECK(one_hot(a, 3) == e);
  const std::vector<int> b{1};
  CHECK(one_hot(b, 2) == Eigen::RowVector2d(0, 1));
  const std::vector<int> bad{3};
  CHECK_THROWS_AS(one_hot(bad, 3), ValidationError);
}

TEST_CASE("stratified folds") {
  Dataset eight;
  eight.features = Eigen::MatrixXd::Zero(8, 1);
  eight.labels = {0, 0, 0, 0, 1, 1, 1, 1};
  eight.n_classes = 2;
  const auto plan = make_folds(eight, 4, 3);
  for (int f = 0; f < 4; ++f) {
    const auto rows = plan.test_rows(f);
    REQUIRE(rows.size() == 2);
    CHECK(eight.labels[rows[0]] != eight.labels[rows[1]]);
  }
  CHECK(make_folds(eight, 4, 3).assignment == plan.assignment);

  Dataset hundred;
  hundred.features = Eigen::MatrixXd::Zero(100, 1);
  for (int i = 0; i < 100; ++i) hundred.labels.push_back(i < 60 ? 0 : 1);
  hundred.n_classes = 2;
  const auto p100 = make_folds(hundred, 4, 9);
  std::map<std::pair<int, int>, int> counts;
  for (std::size_t i = 0; i < 100; ++i) ++counts[{hundred.labels[i], p100.assignment[i]}];
  for (int f = 0; f < 4; ++f) {
    CHECK(counts[{0, f}] == 15);
    CHECK(counts[{1, f}] == 10);
  }

  // uneven class sizes: per class at most one apart, folds overall too
  const auto ds = testutil::gaussian_classes(103, 2, 3, 4);
  const auto p = make_folds(ds, 4, 1);
  for (int c = 0; c < 3; ++c) {
    std::vector<int> sizes(4, 0);
    for (std::size_t i = 0; i < ds.n_samples(); ++i)
      if (ds.labels[i] == c) ++sizes[static_cast<std::size_t>(p.assignment[i])];
    CHECK(*std::max_element(sizes.begin(), sizes.end()) - *std::min_element(sizes.begin(), sizes.end()) <= 1);
  }
  std::vector<std::size_t> totals(4);
  for (int f = 0; f < 4; ++f) totals[static_cast<std::size_t>(f)] = p.test_rows(f).size();
  CHECK(*std::max_element(totals.begin(), totals.end()) - *std::min_element(totals.begin(), totals.end()) <= 1);

  Dataset small;
  small.features = Eigen::MatrixXd::Zero(5, 1);
  small.labels = {0, 0, 0, 0, 1};
  small.n_classes = 2;
  small.class_names = {"big", "rare"};
  try {
    (void)make_folds(small, 4, 1);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("rare") != std::string::npos);
  }
}
