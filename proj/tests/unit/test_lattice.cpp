#include <doctest.h>

#include <random>

#include "gfl/error.hpp"
#include "gfl/lattice.hpp"
#include "gfl/parallel.hpp"
#include "gfl/scalar.hpp"
#include "gfl/tables.hpp"
#include "gfl/text.hpp"

using namespace gfl;

TEST_CASE("exact arithmetic stays exact and floats are contagious") {
  const Scalar a = Scalar::ratio(1, 3);
  const Scalar b = Scalar::ratio(1, 6);
  CHECK((a + b) == Scalar::ratio(1, 2));
  CHECK((a + b).is_exact());
  CHECK((a * b) == Scalar::ratio(1, 18));
  CHECK((a / b) == Scalar(2));
  const Scalar f = a + Scalar(0.5);
  CHECK_FALSE(f.is_exact());
  CHECK(approx_equal(f, Scalar(5.0 / 6.0)));
  CHECK_THROWS_AS((void)(a / Scalar(0)), DomainError);
}

TEST_CASE("scalar parsing canonicalizes and prints minimal forms") {
  CHECK(Scalar::parse("2/4") == Scalar::ratio(1, 2));
  CHECK(Scalar::parse("2/4").str() == "1/2");
  CHECK(Scalar::parse("+3").str() == "3");
  CHECK(Scalar::parse(" -0 ").str() == "0");
  CHECK(Scalar::parse("0.25").to_double() == 0.25);
  CHECK_FALSE(Scalar::parse("1e-3").is_exact());
  CHECK(Scalar(-0.0).str() == "0");
  CHECK(Scalar(0.1).str() == "0.10000000000000001");
  CHECK_THROWS_AS(Scalar::parse("1/0"), ParseError);
  CHECK_THROWS_AS(Scalar::parse("abc"), ParseError);
  CHECK_THROWS_AS(Scalar::parse(""), ParseError);
}

TEST_CASE("approximate equality is exact on rationals and relative on floats") {
  CHECK(approx_equal(Scalar::ratio(1, 3), Scalar::ratio(2, 6)));
  CHECK_FALSE(approx_equal(Scalar::ratio(1, 3), Scalar::ratio(333333, 1000000)));
  CHECK(approx_equal(Scalar(1e6), Scalar(1e6 + 1e-7)));
  CHECK_FALSE(approx_equal(Scalar(1.0), Scalar(1.0 + 1e-9)));
  CHECK(distance(Scalar::ratio(1, 4), Scalar::ratio(3, 4)) == 0.5);
}

TEST_CASE("sites, volumes and their set algebra") {
  const Site a{0, 1};
  CHECK(a.str() == "(0,1)");
  CHECK(Site::parse("( 0 , 1 )") == a);
  CHECK(a.linf_distance(Site{3, -1}) == 3);
  CHECK(a.l1_distance(Site{3, -1}) == 5);
  CHECK_THROWS_AS(Site::parse("0,1"), ParseError);

  const Volume v{Site{2}, Site{0}, Site{1}, Site{0}};
  CHECK(v.size() == 3);
  CHECK(v.str() == "(0),(1),(2)");
  CHECK(Volume::parse("(2),(0),(1)") == v);
  const Volume w{Site{1}, Site{3}};
  CHECK(v.unite(w).size() == 4);
  CHECK(v.minus(w) == Volume{Site{0}, Site{2}});
  CHECK(v.intersect(w) == Volume{Site{1}});
  CHECK(Volume{Site{1}}.is_subset_of(v));
  CHECK(v.is_disjoint_from(Volume{Site{5}}));
  CHECK(Volume::interval(1, 4).size() == 4);
  CHECK(Volume::box(Site{0, 0}, Site{1, 2}).size() == 6);
  CHECK_THROWS_AS((Volume{Site{0}, Site{0, 1}}), ArgumentError);
}

TEST_CASE("configurations parse, print and index with the first site most significant") {
  const Alphabet spins = Alphabet::spins();
  const auto c = Configuration::parse("(0,0)=+1;(0,1)=-1", spins);
  CHECK(c.str(spins) == "(0,0)=+1;(0,1)=-1");
  CHECK(spins.numeric_value(c.at(Site{0, 0})) == 1);
  CHECK(spins.numeric_value(c.at(Site{0, 1})) == -1);
  CHECK(configuration_index(c, 2) == 2);
  CHECK_THROWS_AS(Configuration::parse("(0)=+1;(0)=-1", spins), ParseError);
  CHECK_THROWS_AS(Configuration::parse("(0)=2", spins), ParseError);

  const Alphabet three({"a", "b", "c"});
  const Volume v{Site{0}, Site{1}, Site{2}};
  const auto all = enumerate_configurations(v, three);
  REQUIRE(all.size() == 27);
  for (std::uint64_t i = 0; i < all.size(); ++i) {
    CHECK(configuration_index(all[i], 3) == i);
    CHECK(configuration_at(v, 3, i) == all[i]);
    CHECK(all[i][0] * 9 + all[i][1] * 3 + all[i][2] == i);
  }
}

TEST_CASE("concatenation and restriction are inverse on disjoint pieces") {
  std::mt19937_64 rng(7);
  const Alphabet bin = Alphabet::binary();
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Symbol> s(6);
    for (auto& x : s) x = static_cast<Symbol>(rng() % 2);
    const Configuration c(Volume{Site{0}, Site{1}, Site{2}, Site{3}, Site{4}, Site{5}}, s);
    const Volume left{Site{0}, Site{2}, Site{4}};
    const Volume right{Site{1}, Site{3}, Site{5}};
    CHECK(concat(restrict(c, left), restrict(c, right)) == c);
  }
  const auto a = Configuration::parse("(0)=1", bin);
  CHECK_THROWS_AS(concat(a, a), DomainError);
  CHECK_THROWS_AS(restrict(a, Volume{Site{3}}), DomainError);
}

TEST_CASE("enumeration cap guards exponential blow-up") {
  const auto saved = enumeration_cap();
  set_enumeration_cap(1000);
  CHECK(configuration_count(Volume::interval(0, 8), Alphabet::binary()) == 512);
  CHECK_THROWS_AS(configuration_count(Volume::interval(0, 9), Alphabet::binary()), CapacityError);
  set_enumeration_cap(saved);
  CHECK(configuration_count(Volume::interval(0, 9), Alphabet::binary()) == 1024);
}

TEST_CASE("filtrations must increase strictly inside the window") {
  const Volume w = Volume::interval(0, 6);
  const std::vector<int> radii{0, 1, 2, 3};
  const auto f = box_filtration(w, Site{3}, radii);
  CHECK(f.str() == "[1,3,5,7]");
  CHECK(f.exhausts_window());
  CHECK(ball(Site{0}, 2, w).size() == 3);
  CHECK_THROWS_AS(Filtration(w, {Volume{Site{1}}, Volume{Site{1}}}), ArgumentError);
  CHECK_THROWS_AS(Filtration(w, {Volume{Site{1}}, Volume{Site{2}, Site{3}}}), ArgumentError);
  CHECK_THROWS_AS(Filtration(w, {Volume{Site{9}}}), ArgumentError);
  const std::vector<int> bad{2, 1};
  CHECK_THROWS_AS(box_filtration(w, Site{3}, bad), ArgumentError);
}

TEST_CASE("nearest neighbour systems are symmetric") {
  const auto nn = NeighborhoodSystem::nearest_neighbor(Volume::box(Site{0, 0}, Site{2, 2}));
  CHECK(nn.is_symmetric());
  CHECK(nn.neighbors(Site{1, 1}).size() == 4);
  CHECK(nn.neighbors(Site{0, 0}).size() == 2);
}

TEST_CASE("text helpers") {
  CHECK(text::trim("  a b \t") == "a b");
  CHECK(text::split("a,b,,c", ',').size() == 4);
  const auto parts = text::split_top_level("(0,1),(2,3)", ',');
  REQUIRE(parts.size() == 2);
  CHECK(parts[1] == "(2,3)");
  const auto lines = text::content_lines("# c\n\nx = 1 # trailing\n  y\n");
  REQUIRE(lines.size() == 2);
  CHECK(lines[0] == "x = 1");
}

TEST_CASE("distribution tables round-trip and keep exact ratios") {
  const Volume v{Site{0}, Site{1}};
  const Alphabet bin = Alphabet::binary();
  const std::vector<Scalar> vals{Scalar::ratio(1, 8), Scalar::ratio(3, 8), Scalar(0), Scalar::ratio(1, 2)};
  const std::string body = format_table(v, bin, vals, {"# note"});
  CHECK(body.find("(0)=1;(1)=0\t0/1") != std::string::npos);
  CHECK(body.find("(0)=0;(1)=0\t1/8") != std::string::npos);
  const auto raw = parse_table(body);
  CHECK(raw.volume == v);
  CHECK(raw.alphabet == bin);
  CHECK(raw.values == vals);
  const std::vector<Scalar> fl{Scalar(0.1), Scalar(0.2), Scalar(0.3), Scalar(0.4)};
  CHECK(format_table(v, bin, fl).find("0.10000000000000001") != std::string::npos);
  CHECK_THROWS_AS(parse_table("volume (0)\nalphabet 0,1\n(0)=0\t1/2\n(0)=0\t1/2\n"), ParseError);
  CHECK_THROWS_AS(parse_table("alphabet 0,1\n"), ParseError);
}

TEST_CASE("parallel_map returns results in index order under any thread cap") {
  for (unsigned threads : {1U, 2U, 5U}) {
    set_max_threads(threads);
    const auto out = parallel_map<std::size_t>(1000, [](std::size_t i) { return i * i; });
    for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i] == i * i);
  }
  set_max_threads(3);
  CHECK_THROWS_AS(parallel_for(10, [](std::size_t i) {
                    if (i == 7) throw ArgumentError("boom");
                  }),
                  ArgumentError);
  set_max_threads(0);
}
