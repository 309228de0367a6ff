#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "axbench/errors.hpp"
#include "axbench/mechanism.hpp"
#include "axbench/model.hpp"
#include "axbench/zoo.hpp"
#include "fixtures.hpp"

using namespace axbench;

namespace {

ParentSpace two_parents() {
  return ParentSpace({ParentDescriptor::discrete("digit", 10), ParentDescriptor::continuous("hue", 0.0, 1.0)});
}

// Records every call so lowering can be checked against the full call it should become.
class RecordingModel final : public CounterfactualModel {
 public:
  std::string id() const override { return "recording"; }
  Shape shape() const override { return {2, 2, 1}; }
  const ParentSpace& space() const override { return space_; }
  ModelCapabilities capabilities() const override { return {false, true, true}; }
  Observation counterfactual(const Observation&, const ParentAssignment& pa, const ParentAssignment& pa_star,
                             std::uint64_t) const override {
    last_pa = pa;
    last_pa_star = pa_star;
    return Observation::filled(shape(), static_cast<float>(pa_star[1]));
  }

  mutable ParentAssignment last_pa, last_pa_star;

 private:
  ParentSpace space_ = two_parents();
};

}  // namespace

TEST_CASE("observation validates its pixels") {
  const Shape s{2, 3, 1};
  CHECK_NOTHROW(Observation(s, std::vector<float>(6, 0.5f)));
  CHECK_THROWS_AS(Observation(s, std::vector<float>(5, 0.5f)), ContractError);
  CHECK_THROWS_AS(Observation(s, std::vector<float>{0, 0, 0, 0, 0, 1.5f}), ContractError);
  CHECK_THROWS_AS(Observation(s, std::vector<float>{0, 0, 0, 0, 0, -0.1f}), ContractError);
  CHECK_THROWS_AS(Observation(s, std::vector<float>{0, 0, 0, 0, 0, std::numeric_limits<float>::quiet_NaN()}),
                  ContractError);
  CHECK_THROWS_AS(validate_shape({2, 2, 2}), ContractError);
  CHECK_THROWS_AS(validate_shape({0, 2, 1}), ContractError);
  CHECK(Shape{28, 28, 3}.to_string() == "28x28x3");
}

TEST_CASE("clamped reports the largest change") {
  double change = 0.0;
  const auto x = Observation::clamped({1, 3, 1}, {-0.25f, 0.5f, 1.5f}, &change);
  CHECK(x.pixels()[0] == 0.0f);
  CHECK(x.pixels()[1] == 0.5f);
  CHECK(x.pixels()[2] == 1.0f);
  CHECK(change == doctest::Approx(0.5));
  const auto n = Observation::clamped({1, 1, 1}, {std::numeric_limits<float>::quiet_NaN()});
  CHECK(n.pixels()[0] == 0.0f);
}

TEST_CASE("content hash and equality are bit-level") {
  const auto a = fixtures::random_observation({4, 4, 3}, 1);
  const auto b = fixtures::random_observation({4, 4, 3}, 1);
  const auto c = fixtures::random_observation({4, 4, 3}, 2);
  CHECK(a == b);
  CHECK(a.content_hash() == b.content_hash());
  CHECK_FALSE(a == c);
  CHECK(a.content_hash() != c.content_hash());
  CHECK(Observation::zeros({2, 2, 1}).content_hash() != Observation::zeros({1, 4, 1}).content_hash());
}

TEST_CASE("parent space invariants") {
  CHECK_THROWS_AS(ParentSpace({ParentDescriptor::discrete("a", 2), ParentDescriptor::discrete("a", 3)}),
                  ContractError);
  CHECK_THROWS_AS(ParentSpace({ParentDescriptor::discrete("a", 1)}), ContractError);
  CHECK_THROWS_AS(ParentSpace({ParentDescriptor::continuous("h", 1.0, 1.0)}), ContractError);
  CHECK_THROWS_AS(ParentSpace({ParentDescriptor::discrete("", 2)}), ContractError);
  const auto s = two_parents();
  CHECK(s.index_of("hue") == 1);
  CHECK_FALSE(s.find("shape").has_value());
  CHECK_THROWS_AS(s.index_of("shape"), ContractError);
}

TEST_CASE("parent assignment conformance") {
  const auto s = two_parents();
  CHECK(ParentAssignment({3, 0.25}).conforms(s));
  CHECK(ParentAssignment({9, 1.0}).conforms(s));
  CHECK_FALSE(ParentAssignment({3.5, 0.25}).conforms(s));
  CHECK_FALSE(ParentAssignment({10, 0.25}).conforms(s));
  CHECK_FALSE(ParentAssignment({3, 1.25}).conforms(s));
  CHECK_FALSE(ParentAssignment({3}).conforms(s));
  CHECK_THROWS_AS(ParentAssignment({-1, 0.5}).validate(s), ContractError);
  CHECK(ParentAssignment({3, 0.25}).with(1, 0.75) == ParentAssignment({3, 0.75}));
}

TEST_CASE("apply checks its contract") {
  const auto model = identity_model({2, 2, 1}, two_parents());
  const auto x = Observation::zeros({2, 2, 1});
  const ParentAssignment pa({1, 0.5});
  CHECK(apply(*model, x, pa, pa, 0) == x);
  CHECK_THROWS_AS(apply(*model, Observation::zeros({2, 2, 3}), pa, pa, 0), ContractError);
  CHECK_THROWS_AS(apply(*model, x, ParentAssignment({11, 0.5}), pa, 0), ContractError);
  CHECK_THROWS_AS(apply(*model, x, pa, ParentAssignment({1, 2.0}), 0), ContractError);
  CHECK_THROWS_AS(apply_partial(*model, x, 2, 0.0, 1.0, 0), ContractError);
}

TEST_CASE("identity returns x for any request") {
  const auto model = identity_model({3, 3, 3}, two_parents());
  const auto x = fixtures::random_observation({3, 3, 3}, 9);
  CHECK(apply(*model, x, ParentAssignment({1, 0.5}), ParentAssignment({7, 0.1}), 123) == x);
  CHECK(apply_partial(*model, x, 0, 1, 4, 5) == x);
  const std::size_t order[] = {1, 0};
  CHECK(decompose_full(*model, x, ParentAssignment({1, 0.5}), ParentAssignment({7, 0.1}), order, 3) == x);
}

TEST_CASE("partial calls lower to a one-coordinate full call") {
  RecordingModel model;
  const auto x = Observation::zeros({2, 2, 1});
  const ParentAssignment pa({4, 0.2});
  const auto out = apply_partial(model, x, pa, 1, 0.7, 1);
  CHECK(model.last_pa == pa);
  CHECK(model.last_pa_star == ParentAssignment({4, 0.7}));
  CHECK(out == apply(model, x, pa, pa.with(1, 0.7), 1));
  CHECK_THROWS_AS(apply_partial(model, x, 1, 0.2, 0.7, 1), ContractError);
}

TEST_CASE("decompose_full validates the order") {
  RecordingModel model;
  const auto x = Observation::zeros({2, 2, 1});
  const ParentAssignment pa({4, 0.2}), pa_star({5, 0.7});
  const std::size_t missing[] = {1};
  const std::size_t twice[] = {0, 0, 1};
  const std::size_t both[] = {0, 1};
  CHECK_THROWS_AS(decompose_full(model, x, pa, pa_star, missing, 0), ContractError);
  CHECK_THROWS_AS(decompose_full(model, x, pa, pa_star, twice, 0), ContractError);
  const auto out = decompose_full(model, x, pa, pa_star, both, 0);
  CHECK(out == Observation::filled({2, 2, 1}, 0.7f));
  CHECK(model.last_pa_star == ParentAssignment({5, 0.7}));
}

TEST_CASE("single changed coordinate: decompose_full equals apply_partial") {
  const auto& d = fixtures::small_unconfounded();
  const auto gt = ground_truth_model(d);
  const auto& pa = d.parents(0);
  const auto pa_star = pa.with(1, 0.6);
  const std::size_t order[] = {1};
  CHECK(decompose_full(*gt, d.observation(0), pa, pa_star, order, 4) ==
        apply_partial(*gt, d.observation(0), pa, 1, 0.6, 4));
}

TEST_CASE("every zoo model is deterministic and shape preserving") {
  const auto& d = fixtures::small_unconfounded();
  for (const char* id : {"identity", "ground-truth", "no-abduction", "entangled:0.5", "blend:0.5", "offset:0.2",
                         "noise:0.1"}) {
    CAPTURE(id);
    const auto model = make_zoo_model(id, d, 3);
    const auto& x = d.observation(5);
    const auto& pa = d.parents(5);
    const auto pa_star = ParentAssignment({static_cast<double>((static_cast<int>(pa[0]) + 3) % 10), 0.42});
    const auto first = apply(*model, x, pa, pa_star, 77);
    CHECK(first.shape() == x.shape());
    for (int i = 0; i < 100; ++i) REQUIRE(apply(*model, x, pa, pa_star, 77) == first);
  }
}

TEST_CASE("only stochastic models react to the function seed") {
  const auto& d = fixtures::small_unconfounded();
  const auto& x = d.observation(2);
  const auto& pa = d.parents(2);
  const auto pa_star = pa.with(1, 0.9);
  for (const char* id : {"identity", "ground-truth", "no-abduction", "entangled:0.5", "blend:0.5", "blend:1",
                         "offset:0.2", "noise:0.1"}) {
    CAPTURE(id);
    const auto model = make_zoo_model(id, d, 3);
    bool changed = false;
    const auto ref = apply(*model, x, pa, pa_star, 0);
    for (std::uint64_t s = 1; s < 6; ++s) changed = changed || !(apply(*model, x, pa, pa_star, s) == ref);
    CHECK(changed == !model->capabilities().deterministic);
  }
}

TEST_CASE("offset model output is clamp(x + delta) with one delta") {
  const Shape s{6, 6, 1};
  const auto model = offset_model(s, two_parents(), 0.3);
  std::vector<float> ramp(s.size());
  for (std::size_t i = 0; i < ramp.size(); ++i) ramp[i] = static_cast<float>(i) / (ramp.size() - 1);
  const Observation x(s, ramp);
  const ParentAssignment pa({1, 0.5});
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto out = apply(*model, x, pa, pa, seed);
    // The ramp's middle pixel never clamps for |delta| <= 0.3.
    const std::size_t mid = ramp.size() / 2;
    const float delta = out.pixels()[mid] - x.pixels()[mid];
    CHECK(std::abs(delta) <= 0.3f + 1e-6f);
    for (std::size_t i = 0; i < ramp.size(); ++i) {
      const float expect = std::clamp(ramp[i] + delta, 0.0f, 1.0f);
      REQUIRE(std::abs(out.pixels()[i] - expect) <= 1e-6f);
    }
  }
}
