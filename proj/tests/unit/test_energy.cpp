#include <doctest.h>

#include <cmath>
#include <limits>

#include "gfl/conditionals.hpp"
#include "gfl/energy.hpp"
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

TEST_CASE("transition energy ratios are quotients of conditional probabilities") {
  const auto field = gfl::testing::random_positive_table(gfl::testing::line(4), 2, 101);
  const TableOracle oracle(*field);
  const Volume v{Site{1}, Site{2}};
  const auto z = Configuration::parse("(0)=1;(3)=0", field->alphabet());
  const auto e = transition_energy(finite_conditional(*field, v, z));
  const auto xs = enumerate_configurations(v, field->alphabet());
  REQUIRE(e.states() == 4);
  for (std::size_t x = 0; x < 4; ++x) {
    for (std::size_t u = 0; u < 4; ++u) {
      CHECK(e.ratio(x, u).rational() == oracle.conditional(xs[x], z) / oracle.conditional(xs[u], z));
      CHECK(e.value(x, u) == doctest::Approx(std::log(e.ratio(x, u).to_double())));
    }
  }
}

TEST_CASE("antisymmetry and cocycle hold exactly on random kernels") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const auto field = gfl::testing::random_positive_table(gfl::testing::line(4), 2, seed);
    for (const auto& v : gfl::testing::all_subsets(field->window())) {
      if (v.empty()) continue;
      for (const auto& z : conditions_on(field->window().minus(v), field->alphabet())) {
        const auto e = transition_energy(finite_conditional(*field, v, z));
        CHECK(check_antisymmetry(e));
        CHECK(check_cocycle(e));
      }
    }
  }
}

TEST_CASE("a tampered energy breaks the cocycle and is refused by the Gibbs form") {
  const Volume v{Site{0}};
  const Alphabet a({"a", "b", "c"});
  std::vector<Scalar> r(9, Scalar(1));
  r[0 * 3 + 1] = Scalar(2);
  r[1 * 3 + 0] = Scalar::ratio(1, 2);
  const TransitionEnergy e(v, Configuration{}, a, r);
  CHECK(check_antisymmetry(e));
  CHECK_FALSE(check_cocycle(e));
  CHECK_THROWS_AS(gibbs_form_from_energy(e, Configuration::constant(v, 0)), InconsistentError);
  CHECK_THROWS_AS(TransitionEnergy(v, Configuration{}, a, std::vector<Scalar>(9, Scalar(0))), PositivityError);
}

TEST_CASE("decomposition and one-point exchange identities hold exactly") {
  for (std::uint64_t seed = 7; seed <= 10; ++seed) {
    const auto field = gfl::testing::random_positive_table(gfl::testing::line(4), 2, seed);
    const Volume& w = field->window();
    for (const auto& v : gfl::testing::all_subsets(w)) {
      if (v.empty()) continue;
      for (const auto& i : gfl::testing::all_subsets(w.minus(v))) {
        if (i.empty()) continue;
        for (const auto& z : conditions_on(w.minus(v).minus(i), field->alphabet())) {
          CHECK(check_decomposition(*field, v, i, z));
          CHECK(check_hamiltonian_consistency(*field, v, i, z, 1, 0));
        }
      }
    }
    for (const auto& t : w) {
      for (const auto& s : w) {
        if (!(t < s)) continue;
        for (const auto& z : conditions_on(w.minus(Volume{t, s}), field->alphabet())) {
          CHECK(check_one_point_exchange(*field, t, s, z));
        }
      }
    }
  }
  const auto field = gfl::testing::random_positive_table(gfl::testing::line(3), 2, 1);
  CHECK_THROWS_AS(check_decomposition(*field, Volume{Site{0}}, Volume{Site{0}}, Configuration{}), DomainError);
}

TEST_CASE("kernel to energy to Gibbs form and kernel to Hamiltonian to Gibbs form are exact identities") {
  for (std::uint64_t seed = 12; seed <= 16; ++seed) {
    const auto field = gfl::testing::random_positive_table(gfl::testing::line(4), 2, seed);
    const Volume v{Site{0}, Site{2}};
    for (const auto& z : conditions_on(Volume{Site{1}, Site{3}}, field->alphabet())) {
      const auto k = finite_conditional(*field, v, z);
      const auto e = transition_energy(k);
      for (const auto& ref : enumerate_configurations(v, field->alphabet())) {
        CHECK(gibbs_form_from_energy(e, ref).probs() == k.probs());
        const auto h = hamiltonian_from_energy(e, ref);
        CHECK(h.weight(configuration_index(ref, 2)) == Scalar(1));
        CHECK(gibbs_form_from_hamiltonian(h).probs() == k.probs());
        CHECK(energy_from_hamiltonian(h).ratios() == e.ratios());
      }
    }
  }
}

TEST_CASE("Hamiltonians differ by the energy: H(u) - H(x) = delta(x, u)") {
  const auto field = gfl::testing::random_positive_table(gfl::testing::line(3), 3, 3);
  const auto k = finite_conditional(*field, Volume{Site{1}}, Configuration::parse("(0)=s1", field->alphabet()));
  const auto e = transition_energy(k);
  const auto h = hamiltonian_from_energy(e, Configuration::constant(Volume{Site{1}}, 2));
  for (std::size_t x = 0; x < 3; ++x) {
    for (std::size_t u = 0; u < 3; ++u) {
      CHECK(h.value(u) - h.value(x) == doctest::Approx(e.value(x, u)).epsilon(1e-12));
    }
  }
}

TEST_CASE("infinite Hamiltonian entries become zero weights and block the Gibbs form") {
  const double inf = std::numeric_limits<double>::infinity();
  const auto h = HamiltonianTable::from_energies(Volume{Site{0}}, Configuration{}, Alphabet::binary(), {0.0, inf});
  CHECK_FALSE(h.is_finite());
  CHECK(h.weight(1).is_zero());
  CHECK(std::isinf(h.value(1)));
  CHECK_THROWS_AS(gibbs_form_from_hamiltonian(h), PositivityError);
  CHECK_THROWS_AS(energy_from_hamiltonian(h), PositivityError);
  CHECK_THROWS_AS(HamiltonianTable::from_energies(Volume{Site{0}}, Configuration{}, Alphabet::binary(), {0.0, -inf}),
                  ArgumentError);
}

TEST_CASE("float kernels give energies within tolerance") {
  const auto m = ising_demo(0.7, 0.2, 1, 6);
  const auto z = Configuration::parse("(0)=+1;(2)=-1;(5)=+1", m->alphabet());
  const auto k = finite_conditional(*m, Volume{Site{1}, Site{3}, Site{4}}, z);
  const auto e = transition_energy(k);
  CHECK(check_antisymmetry(e));
  CHECK(check_cocycle(e));
  const auto g = gibbs_form_from_energy(e, Configuration::constant(k.target(), 1));
  for (std::size_t i = 0; i < k.size(); ++i) CHECK(approx_equal(g[i], k[i]));
}

TEST_CASE("the limiting Hamiltonian of the Bernoulli mixture has the three-case form") {
  const double inf = std::numeric_limits<double>::infinity();
  CHECK(example2_limiting_hamiltonian(Scalar::ratio(1, 4), 1) == doctest::Approx(std::log(4.0)));
  CHECK(example2_limiting_hamiltonian(Scalar::ratio(1, 4), 0) == doctest::Approx(-std::log(0.75)));
  CHECK(example2_limiting_hamiltonian(Scalar(0), 0) == 0.0);
  CHECK(example2_limiting_hamiltonian(Scalar(0), 1) == inf);
  CHECK(example2_limiting_hamiltonian(Scalar(1), 1) == 0.0);
  CHECK(example2_limiting_hamiltonian(Scalar(1), 0) == inf);
}

TEST_CASE("energy moduli vanish for Markov fields") {
  const auto m = ising_demo(0.4, 0.0, 1, 9);
  const Site t{4};
  const std::vector<int> radii{1, 2, 3, 4};
  const auto f = box_filtration(m->window(), t, radii);
  for (double x : energy_quasilocality_modulus(m, t, f, standard_family(m->alphabet(), 3, 2))) CHECK(x < 1e-12);
}

TEST_CASE("energy moduli stay large for the Bernoulli mixture under oscillating boundaries") {
  const auto m = example2_model(Scalar(1), window_box(1, 163));
  const Site t{81};
  const std::vector<int> radii{1, 3, 9, 27, 81};
  const auto f = box_filtration(m->window(), t, radii);
  BoundaryFamily fam;
  fam.generators.push_back(oscillating_density_boundary(mpq_class(1, 4), mpq_class(3, 4), 1, 0));
  fam.generators.push_back(oscillating_density_boundary(mpq_class(3, 4), mpq_class(1, 4), 1, 0));
  const auto mod = energy_quasilocality_modulus(m, t, f, fam);
  REQUIRE(mod.size() == 5);
  CHECK(mod[3] > 1.0);
  CHECK(mod[4] == 0.0);
}
