#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "axbench/dataset.hpp"
#include "axbench/errors.hpp"
#include "axbench/glyph.hpp"
#include "axbench/mechanism.hpp"
#include "axbench/stats.hpp"

using namespace axbench;

namespace {

std::size_t hue_bin(double h, std::size_t bins) { return std::min<std::size_t>(static_cast<std::size_t>(h * bins), bins - 1); }

}  // namespace

TEST_CASE("unconfounded hue is uniform over ten bins") {
  const auto draws = sample_parents(ScmKind::unconfounded(), 10000, 1);
  std::vector<int> counts(10, 0), digits(10, 0);
  for (const auto& pa : draws.parents) {
    ++counts[hue_bin(pa[1], 10)];
    ++digits[static_cast<int>(pa[0])];
  }
  for (int i = 0; i < 10; ++i) {
    CHECK(std::abs(counts[i] / 10000.0 - 0.10) <= 0.015);
    CHECK(std::abs(digits[i] / 10000.0 - 0.10) <= 0.015);
  }
}

TEST_CASE("confounded hue centres on digit/10 + 0.05") {
  const auto draws = sample_parents(ScmKind::confounded_no_support(), 10000, 2);
  double sum = 0.0;
  int n = 0;
  for (const auto& pa : draws.parents) {
    if (pa[0] == 3) {
      sum += pa[1];
      ++n;
    }
  }
  CHECK(n > 800);
  CHECK(std::abs(sum / n - 0.35) <= 0.005);
}

TEST_CASE("full-support outliers occur with probability p") {
  const auto kind = ScmKind::confounded_full_support();
  const auto draws = sample_parents(kind, 100000, 3);
  std::size_t flagged = 0, far = 0;
  for (std::size_t i = 0; i < draws.parents.size(); ++i) {
    const auto noise = ColourDigitNoise::decode(draws.exogenous[i]);
    if (noise.hue_outlier) ++flagged;
    const double mu = draws.parents[i][0] / 10.0 + 0.05;
    if (std::abs(draws.parents[i][1] - mu) > 4 * kind.sigma) ++far;
  }
  CHECK(std::abs(flagged / 1e5 - 0.01) <= 0.003);
  // A uniform outlier lands inside the 4-sigma window (width 0.4, cut by the
  // unit interval for the edge digits) with probability 0.36 averaged over
  // digits, so only 64% of outliers are visible as far from the mean.
  CHECK(std::abs(far / 1e5 - 0.01 * 0.64) <= 0.0015);
}

TEST_CASE("full-support hue covers all five bins") {
  const auto draws = sample_parents(ScmKind::confounded_full_support(), 5000, 4);
  std::vector<int> counts(5, 0);
  for (const auto& pa : draws.parents) ++counts[hue_bin(pa[1], 5)];
  for (int c : counts) CHECK(c > 0);
}

TEST_CASE("no-support hue leaves cells empty") {
  const auto draws = sample_parents(ScmKind::confounded_no_support(), 10000, 4);
  bool nine_low = false;
  for (const auto& pa : draws.parents) nine_low = nine_low || (pa[0] == 9 && pa[1] < 0.2);
  CHECK_FALSE(nine_low);
}

TEST_CASE("sampling is reproducible and prefix stable") {
  const auto a = sample_dataset(ScmKind::confounded_full_support(), 50, 9);
  const auto b = sample_dataset(ScmKind::confounded_full_support(), 50, 9);
  const auto prefix = sample_dataset(ScmKind::confounded_full_support(), 20, 9);
  for (std::size_t i = 0; i < 50; ++i) {
    REQUIRE(a.observation(i) == b.observation(i));
    REQUIRE(a.parents(i) == b.parents(i));
    REQUIRE(a.exogenous(i) == b.exogenous(i));
  }
  for (std::size_t i = 0; i < 20; ++i) REQUIRE(prefix.observation(i) == a.observation(i));
  const auto draws = sample_parents(ScmKind::confounded_full_support(), 50, 9);
  for (std::size_t i = 0; i < 50; ++i) REQUIRE(draws.parents[i] == a.parents(i));
  CHECK_FALSE(sample_dataset(ScmKind::confounded_full_support(), 1, 10).observation(0) == a.observation(0));
}

TEST_CASE("exogenous records reproduce every observation") {
  const auto d = sample_dataset(ScmKind::unconfounded(), 200, 12);
  CHECK_FALSE(d.first_unreproducible(*colour_digit_mechanism()).has_value());
  for (std::size_t i = 0; i < 20; ++i) {
    const auto noise = ColourDigitNoise::decode(d.exogenous(i));
    const auto direct = colourise(render_digit(static_cast<int>(d.parents(i)[0]), noise.style), d.parents(i)[1]);
    REQUIRE(direct == d.observation(i));
  }
}

TEST_CASE("colour-digit noise round-trips through its record") {
  ColourDigitNoise n;
  n.style = {1.5, -0.1, 0.9, {0.5, -1.5}};
  n.hue_outlier = true;
  n.hue_draw = -0.75;
  const auto back = ColourDigitNoise::decode(n.encode());
  CHECK(back.style == n.style);
  CHECK(back.hue_outlier);
  CHECK(back.hue_draw == -0.75);
  CHECK_THROWS(ColourDigitNoise::decode(ExogenousRecord{{1, 2, 3}}));
}

TEST_CASE("reflection folds into the unit interval") {
  CHECK(reflect_unit(0.3) == 0.3);
  CHECK(reflect_unit(-0.1) == doctest::Approx(0.1));
  CHECK(reflect_unit(1.2) == doctest::Approx(0.8));
  CHECK(reflect_unit(2.3) == doctest::Approx(0.3));
  CHECK(reflect_unit(-1.25) == doctest::Approx(0.75));
  CHECK(reflect_unit(1.0) == 1.0);
}

TEST_CASE("scm kinds validate and parse") {
  CHECK(ScmKind::parse("confounded-full").type == ScmKind::Type::confounded_full_support);
  CHECK(ScmKind::parse("confounded").name() == "confounded");
  CHECK_THROWS_AS(ScmKind::parse("other"), ContractError);
  CHECK_THROWS_AS(ScmKind::confounded_no_support(0.0).validate(), ContractError);
  CHECK_THROWS_AS(ScmKind::confounded_full_support(0.05, 1.0).validate(), ContractError);
  CHECK_THROWS_AS(sample_parents(ScmKind::unconfounded(), 0, 1), ContractError);
}

TEST_CASE("shapes parents are pairwise independent") {
  const auto parents = sample_shapes_parents(10000, 5);
  const std::size_t levels[] = {8, 8, 3, 4};
  for (std::size_t a = 0; a < 4; ++a) {
    for (std::size_t b = a + 1; b < 4; ++b) {
      std::vector<std::size_t> x, y;
      for (const auto& pa : parents) {
        x.push_back(static_cast<std::size_t>(pa[a]));
        y.push_back(static_cast<std::size_t>(pa[b]));
      }
      CAPTURE(a);
      CAPTURE(b);
      CHECK(chi_square_independence(contingency(x, levels[a], y, levels[b])).p_value > 0.01);
    }
  }
}

TEST_CASE("shapes cover all 768 combinations at n = 100000") {
  const auto parents = sample_shapes_parents(100000, 6);
  std::set<std::vector<double>> seen;
  for (const auto& pa : parents) seen.insert({pa.values().begin(), pa.values().end()});
  CHECK(seen.size() == 8 * 8 * 3 * 4);
}

TEST_CASE("shapes rendering is a pure function of the parents") {
  const auto d = sample_shapes_dataset(400, 7);
  CHECK(d.shape() == Shape{64, 64, 3});
  CHECK_FALSE(d.first_unreproducible(*shapes_mechanism()).has_value());
  const auto& mech = *shapes_mechanism();
  for (std::size_t i = 0; i < 20; ++i) REQUIRE(mech.render({}, d.parents(i)) == d.observation(i));
  bool duplicate_checked = false;
  for (std::size_t i = 0; i < d.size() && !duplicate_checked; ++i) {
    for (std::size_t j = i + 1; j < d.size(); ++j) {
      if (d.parents(i) == d.parents(j)) {
        CHECK(d.observation(i) == d.observation(j));
        duplicate_checked = true;
        break;
      }
    }
  }
  CHECK(duplicate_checked);
}

TEST_CASE("mechanisms are recognised from shape and space") {
  CHECK(find_mechanism(kColourGlyphShape, colour_digit_mechanism()->space()) != nullptr);
  CHECK(find_mechanism({64, 64, 3}, shapes_mechanism()->space())->name() == "shapes");
  CHECK(find_mechanism(kGlyphShape, colour_digit_mechanism()->space()) == nullptr);
}

TEST_CASE("parent csv uses integer classes and nine significant digits") {
  const auto d = sample_dataset(ScmKind::unconfounded(), 3, 1);
  std::ostringstream os;
  write_parents_csv(d, os);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "digit,hue");
  for (std::size_t i = 0; i < 3; ++i) {
    std::getline(is, line);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%d,%.9g", static_cast<int>(d.parents(i)[0]), d.parents(i)[1]);
    CHECK(line == buf);
  }
}

TEST_CASE("train/test split is a fixed 90/10 partition") {
  const auto s = train_test_split(10000, 0);
  const auto again = train_test_split(10000, 0);
  CHECK(s.train == again.train);
  CHECK(s.test == again.test);
  CHECK(s.train.size() + s.test.size() == 10000);
  CHECK(std::abs(static_cast<double>(s.test.size()) - 1000.0) < 100.0);
  std::set<std::size_t> all(s.train.begin(), s.train.end());
  for (auto i : s.test) CHECK(all.insert(i).second);
}

TEST_CASE("dataset rejects inconsistent inputs") {
  const auto d = sample_dataset(ScmKind::unconfounded(), 4, 1);
  std::vector<LabeledDataset::ObservationPtr> obs{d.observation_ptr(0)};
  CHECK_THROWS_AS(LabeledDataset(d.shape(), d.space(), obs, {d.parents(0), d.parents(1)}, std::nullopt, {}),
                  ContractError);
  CHECK_THROWS_AS(LabeledDataset(d.shape(), d.space(), obs, {ParentAssignment({12, 0.5})}, std::nullopt, {}),
                  ContractError);
  const std::size_t idx[] = {2, 0};
  const auto sub = d.subset(idx);
  CHECK(sub.size() == 2);
  CHECK(sub.observation(0) == d.observation(2));
  CHECK(sub.exogenous(1) == d.exogenous(0));
}
