#include <doctest.h>

#include "gfl/error.hpp"
#include "gfl/fields.hpp"
#include "gfl/models.hpp"
#include "support.hpp"

using namespace gfl;
using gfl::testing::TableOracle;

TEST_CASE("finite distributions reject negative or unnormalized tables") {
  const Volume v{Site{0}};
  const Alphabet bin = Alphabet::binary();
  CHECK_NOTHROW(FiniteDistribution(v, bin, {Scalar::ratio(1, 3), Scalar::ratio(2, 3)}));
  CHECK_THROWS_AS(FiniteDistribution(v, bin, {Scalar::ratio(1, 3), Scalar::ratio(1, 3)}), ValidationError);
  CHECK_THROWS_AS(FiniteDistribution(v, bin, {Scalar(-1), Scalar(2)}), ValidationError);
  CHECK_THROWS_AS(FiniteDistribution(v, bin, {Scalar(1)}), ValidationError);
  CHECK_NOTHROW(FiniteDistribution(v, bin, {Scalar(0.3), Scalar(0.7 + 1e-15)}));
  CHECK_THROWS_AS(FiniteDistribution(v, bin, {Scalar(0.3), Scalar(0.71)}), ValidationError);

  const auto problems = distribution_violations(v, bin, {Scalar(-1), Scalar(3)});
  REQUIRE(problems.size() == 2);
  CHECK(problems[0].find("nonnegativity") != std::string::npos);
  CHECK(problems[1].find("normalization") != std::string::npos);

  const auto w = FiniteDistribution::from_weights(v, bin, {Scalar(1), Scalar(3)});
  CHECK(w[1] == Scalar::ratio(3, 4));
  CHECK_THROWS_AS(FiniteDistribution::from_weights(v, bin, {Scalar(0), Scalar(0)}), ValidationError);
}

TEST_CASE("marginals agree with brute-force summation") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto field = gfl::testing::random_positive_table(gfl::testing::line(4), 2, seed);
    const TableOracle oracle(*field);
    for (const auto& v : gfl::testing::all_subsets(field->window())) {
      if (v.empty()) continue;
      const auto m = field->marginal(v);
      for (const auto& c : enumerate_configurations(v, field->alphabet())) {
        CHECK(m.prob(c).rational() == oracle.prob(TableOracle::as_map(c)));
      }
    }
  }
}

TEST_CASE("marginal consistency holds for nested volumes of any table") {
  const auto field = gfl::testing::random_positive_table(gfl::testing::line(5), 2, 99);
  for (const auto& s : gfl::testing::all_subsets(field->window())) {
    for (const auto& v : gfl::testing::all_subsets(s)) {
      if (v.empty() || v == s) continue;
      CHECK(check_marginal_consistency(*field, s, v));
    }
  }
  CHECK_THROWS_AS(check_marginal_consistency(*field, Volume{Site{0}}, Volume{Site{1}}), DomainError);
}

TEST_CASE("three-letter alphabets marginalize exactly") {
  const auto field = gfl::testing::random_positive_table(gfl::testing::line(3), 3, 5);
  const TableOracle oracle(*field);
  const Volume v{Site{2}};
  const auto m = field->marginal(v);
  Scalar total;
  for (const auto& c : enumerate_configurations(v, field->alphabet())) {
    CHECK(m.prob(c).rational() == oracle.prob(TableOracle::as_map(c)));
    total += m.prob(c);
  }
  CHECK(total == Scalar(1));
}

TEST_CASE("product field marginals factorize") {
  const auto m = bernoulli_product(gfl::testing::line(4), Scalar::ratio(1, 3));
  const auto c = Configuration::parse("(0)=1;(2)=0;(3)=1", m->alphabet());
  CHECK(m->probability(c) == Scalar::ratio(2, 27));
  CHECK(m->marginal(c.volume()).prob(c) == Scalar::ratio(2, 27));
  CHECK(check_marginal_consistency(*m, m->window(), Volume{Site{1}}));
  CHECK(is_positive(m->marginal(Volume{Site{0}})));
}

TEST_CASE("table comparison helpers") {
  const std::vector<Scalar> a{Scalar::ratio(1, 4), Scalar::ratio(3, 4)};
  const std::vector<Scalar> b{Scalar::ratio(1, 2), Scalar::ratio(1, 2)};
  CHECK(sup_difference(a, b) == Scalar::ratio(1, 4));
  CHECK(sup_distance(a, b) == 0.25);
  CHECK(tables_equal(a, a));
  CHECK_FALSE(tables_equal(a, b));
  CHECK_THROWS_AS(sup_difference(a, {Scalar(1)}), DomainError);
}

TEST_CASE("volumes outside the window are rejected") {
  const auto field = gfl::testing::random_positive_table(gfl::testing::line(3), 2, 1);
  CHECK_THROWS_AS(field->marginal(Volume{Site{7}}), DomainError);
}
