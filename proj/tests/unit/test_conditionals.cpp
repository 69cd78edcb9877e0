#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "gfl/conditionals.hpp"
#include "gfl/error.hpp"
#include "gfl/models.hpp"
#include "support.hpp"

using namespace gfl;
using gfl::testing::TableOracle;

namespace {

std::vector<Configuration> conditions_on(const Volume& lambda, const Alphabet& a) {
  if (lambda.empty()) return {Configuration{}};
  return enumerate_configurations(lambda, a);
}

}  // namespace

TEST_CASE("finite conditionals equal joint over marginal, checked against the brute-force oracle") {
  for (std::uint64_t seed = 11; seed <= 15; ++seed) {
    const auto field = gfl::testing::random_positive_table(gfl::testing::line(4), 2, seed);
    const TableOracle oracle(*field);
    const Alphabet& a = field->alphabet();
    for (const auto& v : gfl::testing::all_subsets(field->window())) {
      if (v.empty()) continue;
      for (const auto& lambda : gfl::testing::all_subsets(field->window().minus(v))) {
        for (const auto& z : conditions_on(lambda, a)) {
          const auto k = finite_conditional(*field, v, z);
          const auto xs = enumerate_configurations(v, a);
          for (std::size_t i = 0; i < xs.size(); ++i) CHECK(k[i].rational() == oracle.conditional(xs[i], z));
        }
      }
    }
  }
}

TEST_CASE("finite conditional preconditions") {
  const auto field = gfl::testing::random_positive_table(gfl::testing::line(3), 2, 3);
  const auto z = Configuration::parse("(0)=1", field->alphabet());
  CHECK_THROWS_AS(finite_conditional(*field, Volume{Site{0}}, z), DomainError);
  CHECK_THROWS_AS(finite_conditional(*field, Volume{}, z), DomainError);
  const auto zero = table_field(Volume{Site{0}, Site{1}}, Alphabet::binary(),
                                {Scalar::ratio(1, 2), Scalar::ratio(1, 2), Scalar(0), Scalar(0)});
  CHECK_THROWS_AS(finite_conditional(*zero, Volume{Site{1}}, Configuration::parse("(0)=1", zero->alphabet())),
                  NullConditionError);
}

TEST_CASE("product field conditionals ignore the condition") {
  const auto m = bernoulli_product(gfl::testing::line(4), Scalar::ratio(1, 5));
  for (const auto& z : enumerate_configurations(Volume{Site{1}, Site{3}}, m->alphabet())) {
    const auto k = finite_conditional(*m, Volume{Site{2}}, z);
    CHECK(k[0] == Scalar::ratio(4, 5));
    CHECK(k[1] == Scalar::ratio(1, 5));
  }
}

TEST_CASE("pair consistency holds for every admissible (I, V, z)") {
  for (std::uint64_t seed = 21; seed <= 24; ++seed) {
    const auto field = gfl::testing::random_positive_table(gfl::testing::line(4), 2, seed);
    for (const auto& v : gfl::testing::all_subsets(field->window())) {
      for (const auto& inner : gfl::testing::all_subsets(v)) {
        if (inner.empty() || inner == v) continue;
        for (const auto& lambda : gfl::testing::all_subsets(field->window().minus(v))) {
          for (const auto& z : conditions_on(lambda, field->alphabet())) {
            CHECK(check_pair_consistency(*field, inner, v, z));
          }
        }
      }
    }
  }
}

TEST_CASE("one-point consistency holds for every pair of sites and condition") {
  const auto field = gfl::testing::random_positive_table(gfl::testing::line(5), 2, 31);
  const Volume& w = field->window();
  for (const auto& t : w) {
    for (const auto& s : w) {
      if (!(t < s)) continue;
      const Volume rest = w.minus(Volume{t, s});
      for (const auto& lambda : gfl::testing::all_subsets(rest)) {
        for (const auto& z : conditions_on(lambda, field->alphabet())) {
          CHECK(check_one_point_consistency(*field, t, s, z));
        }
      }
    }
  }
  CHECK_THROWS_AS(check_one_point_consistency(*field, Site{0}, Site{0}, Configuration{}), DomainError);
}

TEST_CASE("reconstruction from one-point kernels reproduces every multi-point kernel") {
  for (std::uint64_t seed = 41; seed <= 43; ++seed) {
    const auto field = gfl::testing::random_positive_table(gfl::testing::line(4), 2, seed);
    const auto q = one_point_kernels(field);
    for (const auto& v : gfl::testing::all_subsets(field->window())) {
      if (v.empty()) continue;
      const Volume rest = field->window().minus(v);
      for (const auto& z : conditions_on(rest, field->alphabet())) {
        const auto direct = finite_conditional(*field, v, z);
        const auto rebuilt = reconstruct_from_one_point(q, field->alphabet(), v, z);
        CHECK(rebuilt.probs() == direct.probs());
      }
    }
  }
}

TEST_CASE("reconstruction does not depend on the reference configuration or the site order") {
  const auto field = gfl::testing::random_positive_table(gfl::testing::line(4), 2, 47);
  const auto q = one_point_kernels(field);
  const Volume v{Site{0}, Site{1}, Site{3}};
  const auto z = Configuration::parse("(2)=1", field->alphabet());
  const auto baseline = reconstruct_from_one_point(q, field->alphabet(), v, z).probs();
  for (const auto& u : enumerate_configurations(v, field->alphabet())) {
    CHECK(reconstruct_from_one_point(q, field->alphabet(), v, z, u).probs() == baseline);
  }
  std::vector<Site> order(v.begin(), v.end());
  do {
    CHECK(reconstruct_from_one_point(q, field->alphabet(), v, z, std::nullopt, order).probs() == baseline);
  } while (std::next_permutation(order.begin(), order.end()));
  const std::vector<Site> bad{Site{0}, Site{1}};
  CHECK_THROWS_AS(reconstruct_from_one_point(q, field->alphabet(), v, z, std::nullopt, bad), DomainError);
}

TEST_CASE("single-site reconstruction returns the one-point kernel") {
  const auto field = gfl::testing::random_positive_table(gfl::testing::line(3), 3, 5);
  const auto q = one_point_kernels(field);
  const auto z = Configuration::parse("(0)=s2;(2)=s0", field->alphabet());
  CHECK(reconstruct_from_one_point(q, field->alphabet(), Volume{Site{1}}, z).probs() == q(Site{1}, z));
}

TEST_CASE("a vanishing one-point probability is reported with its factor") {
  const OnePointKernelFn degenerate = [](const Site&, const Configuration&) {
    return std::vector<Scalar>{Scalar(0), Scalar(1)};
  };
  CHECK_THROWS_AS(reconstruct_from_one_point(degenerate, Alphabet::binary(), Volume{Site{0}, Site{1}},
                                             Configuration{}),
                  PositivityError);
}

TEST_CASE("Example 1 interior conditional: both neighbours up with c = 1/2 gives 9/10") {
  auto [plus, minus] = example1_pair(8, Scalar::ratio(1, 2), Scalar::ratio(1, 2));
  const Alphabet& a = plus->alphabet();
  const auto z = Configuration::parse("(3)=+1;(5)=+1", a);
  CHECK(finite_conditional(*plus, Volume{Site{4}}, z)[1] == Scalar::ratio(9, 10));
  CHECK(finite_conditional(*minus, Volume{Site{4}}, z)[1] == Scalar::ratio(9, 10));
  CHECK(check_one_point_consistency(*plus, Site{3}, Site{6}, Configuration::parse("(1)=-1;(8)=+1", a)));
}

TEST_CASE("limits along a filtration stabilize past the Markov radius of the Ising chain") {
  const double beta = 0.4;
  const auto m = ising_demo(beta, 0.0, 1, 11);
  const Site t{5};
  const std::vector<int> radii{1, 2, 3, 4, 5};
  const auto f = box_filtration(m->window(), t, radii);
  const auto gen = random_boundary(17);
  const auto boundary = gen.realize(f, Volume{t}, m->alphabet());
  const auto est = limit_along_filtration(*m, Volume{t}, boundary, f, Scalar(1e-12));
  CHECK(est.converged);
  const int yl = m->alphabet().numeric_value(boundary.at(Site{4}));
  const int yr = m->alphabet().numeric_value(boundary.at(Site{6}));
  const double expected_up = std::exp(beta * (yl + yr)) / (2 * std::cosh(beta * (yl + yr)));
  for (const auto& st : est.stages) CHECK(st.values[1].to_double() == doctest::Approx(expected_up).epsilon(1e-12));
  REQUIRE(est.final_gap.has_value());
  CHECK(est.final_gap->to_double() < 1e-12);
}

TEST_CASE("Example 2 constant-density boundary follows (k + tau)/(n + tau + 1) at every stage") {
  for (long tau : {1L, 2L, 3L}) {
    const auto m = example2_model(Scalar(tau), window_box(1, 41));
    const Site t{20};
    std::vector<int> radii;
    for (int r = 1; r <= 20; r += 3) radii.push_back(r);
    const auto f = box_filtration(m->window(), t, radii);
    const auto gen = constant_density_boundary(mpq_class(1, 3), 1, 0);
    const auto boundary = gen.realize(f, Volume{t}, m->alphabet());
    const auto est = limit_along_filtration(*m, Volume{t}, boundary, f, Scalar(0));
    for (std::size_t n = 0; n < f.size(); ++n) {
      const Volume cond = f[n].minus(t);
      const auto k = static_cast<long>(restrict(boundary, cond).count(1));
      const auto sites = static_cast<long>(cond.size());
      CHECK(est.stages[n].values[1] == Scalar::ratio(k + tau, sites + tau + 1));
    }
  }
}

TEST_CASE("Example 2 oscillating-density boundary keeps a gap of at least 0.4") {
  const auto m = example2_model(Scalar(1), window_box(1, 163));
  const Site t{81};
  const std::vector<int> radii{1, 3, 9, 27, 81};
  const auto f = box_filtration(m->window(), t, radii);
  const auto gen = oscillating_density_boundary(mpq_class(1, 4), mpq_class(3, 4), 1, 0);
  const auto est = limit_along_filtration(*m, Volume{t}, gen.realize(f, Volume{t}, m->alphabet()), f, Scalar(0));
  CHECK_FALSE(est.converged);
  REQUIRE(est.final_gap.has_value());
  CHECK(*est.final_gap >= Scalar::ratio(2, 5));
  CHECK(*est.final_gap == Scalar::ratio(81, 164));
}

TEST_CASE("boundary generators are nested across stages and filtration-independent where promised") {
  const Volume w = window_box(1, 21);
  const Site t{10};
  const std::vector<int> r1{1, 2, 5, 10};
  const std::vector<int> r2{2, 4, 10};
  const auto f1 = box_filtration(w, t, r1);
  const auto f2 = box_filtration(w, t, r2);
  const Alphabet bin = Alphabet::binary();
  const auto rnd = random_boundary(5);
  CHECK(rnd.realize(f1, Volume{t}, bin) == rnd.realize(f2, Volume{t}, bin));
  CHECK(constant_boundary(1, bin).realize(f1, Volume{t}, bin).count(1) == 20);
  const auto dens = density_boundary({mpq_class(1, 2), mpq_class(1, 4)}, 1, 0, "d");
  const auto b = dens.realize(f1, Volume{t}, bin);
  CHECK(b.volume() == w.minus(t));
  CHECK_THROWS_AS(density_boundary({}, 1, 0, "x"), ArgumentError);
  CHECK_THROWS_AS(density_boundary({mpq_class(3, 2)}, 1, 0, "x"), ArgumentError);
  const auto ex = explicit_boundary(Configuration::constant(Volume{Site{0}}, 1), "tiny");
  CHECK_THROWS_AS(ex.realize(f1, Volume{t}, bin), GeometryError);
  CHECK(standard_family(bin, 3, 1).size() == 5);
}

TEST_CASE("splice takes the inner configuration on the region and the outer one elsewhere") {
  const Alphabet bin = Alphabet::binary();
  const auto inner = Configuration::constant(Volume{Site{0}, Site{1}, Site{2}}, 1);
  const auto outer = Configuration::constant(Volume{Site{0}, Site{1}, Site{2}}, 0);
  const auto s = splice(inner, outer, Volume{Site{1}});
  CHECK(s.str(bin) == "(0)=0;(1)=1;(2)=0");
}

TEST_CASE("spliced kernels of a product field never move") {
  const auto m = bernoulli_product(window_box(1, 9), Scalar::ratio(1, 3));
  const Site t{4};
  const std::vector<int> radii{1, 2, 3, 4};
  const auto f = box_filtration(m->window(), t, radii);
  for (const auto& p : spliced_kernels(one_point_kernels(m), t, f, standard_family(m->alphabet(), 2, 9), m->alphabet())) {
    CHECK(p.base == p.spliced);
  }
}

TEST_CASE("Markov radius of the nearest-neighbour chain is one, of a product field zero") {
  CHECK(markov_radius(*ising_demo(0.4, 0.0, 1, 9), Site{4}, 3) == 1);
  CHECK(markov_radius(*bernoulli_product(window_box(1, 7), Scalar::ratio(1, 2)), Site{3}, 2) == 0);
  CHECK_THROWS_AS(markov_radius(*bernoulli_product(window_box(1, 7), Scalar::ratio(1, 2)), Site{0}, 2),
                  GeometryError);
}

TEST_CASE("limit estimates serialize to CSV") {
  const auto m = bernoulli_product(window_box(1, 5), Scalar::ratio(1, 2));
  const std::vector<int> radii{1, 2};
  const auto f = box_filtration(m->window(), Site{2}, radii);
  const auto est = limit_along_filtration(*m, Volume{Site{2}}, constant_boundary(0, m->alphabet()).realize(
                                                                    f, Volume{Site{2}}, m->alphabet()),
                                          f, Scalar(0));
  CHECK(est.to_csv(m->alphabet()) ==
        "stage,volume_size,(2)=0,(2)=1,sup_gap_to_previous\n1,2,1/2,1/2,\n2,4,1/2,1/2,0\n");
}
