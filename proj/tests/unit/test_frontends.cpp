#include <catch2/catch_amalgamated.hpp>

#include "../support/generators.hpp"
#include "sppfix/json_io.hpp"

using namespace sppfix;

namespace {
BackButtonModel three_pages() {
  BackButtonModel m;
  m.pages = {"1", "2", "3"};
  m.back_prob = {{"1", Rational(3, 5)}, {"2", Rational(3, 10)}, {"3", Rational(7, 10)}};
  m.links["1"]["2"] = Rational(2, 5);
  m.links["2"]["1"] = Rational(3, 10);
  m.links["2"]["3"] = Rational(2, 5);
  m.links["3"]["1"] = Rational(3, 10);
  return m;
}
const scalar_config_t<BigFloat> kF256{256};
}  // namespace

TEST_CASE("three-page model translates to the worked example", "[frontends]") {
  auto sys = back_button_to_spp(three_pages());
  CHECK(sys == parse_system(
                   "X1 = 0.4*X2*X1 + 0.6\n"
                   "X2 = 0.3*X1*X2 + 0.4*X3*X2 + 0.3\n"
                   "X3 = 0.3*X1*X3 + 0.7\n"));
  CHECK(sys.constant_terms_positive());
  CHECK(sys.maps_ones_below_ones());
  CHECK(sys.is_quadratic());
}

TEST_CASE("single page with back probability one", "[frontends]") {
  BackButtonModel m;
  m.pages = {"1"};
  m.back_prob = {{"1", Rational(1)}};
  auto sys = back_button_to_spp(m);
  CHECK(sys == parse_system("X1 = 1"));
  auto trace = newton_run<Rational>(sys, StopRule::iterations(1));
  CHECK(trace.last() == std::vector<Rational>{1});
}

TEST_CASE("probability mass must be exactly one", "[frontends]") {
  auto m = three_pages();
  m.links["1"]["2"] = Rational(3, 10);  // 0.6 + 0.3 = 0.9
  try {
    back_button_to_spp(m);
    FAIL("expected mass mismatch");
  } catch (const Error& e) {
    CHECK(e.code() == errc::probability_mass_mismatch);
  }

  auto missing_back = three_pages();
  missing_back.back_prob["2"] = Rational(0);
  CHECK_THROWS_AS(back_button_to_spp(missing_back), Error);
}

TEST_CASE("self-links square the variable", "[frontends]") {
  BackButtonModel m;
  m.pages = {"A"};
  m.back_prob = {{"A", Rational(1, 2)}};
  m.links["A"]["A"] = Rational(1, 2);
  auto sys = back_button_to_spp(m);
  CHECK(sys == parse_system("A = 0.5*A^2 + 0.5"));
}

TEST_CASE("pushdown translation of the half/half automaton", "[frontends]") {
  Ppda ppda;
  ppda.states = {"p"};
  ppda.alphabet = {"X"};
  ppda.rules = {{"p", "X", "p", {"X", "X"}, Rational(1, 2)},
                {"p", "X", "p", {}, Rational(1, 2)}};
  auto tr = ppda_to_spp(ppda);
  REQUIRE(tr.system.size() == 1);
  CHECK(tr.system.equations[0] == parse_system("V = 0.5*V^2 + 0.5").equations[0]);
  REQUIRE(tr.legend.size() == 1);
  CHECK(tr.legend[0].from_state == "p");
  CHECK(tr.legend[0].symbol == "X");
  CHECK(tr.legend[0].to_state == "p");
  CHECK_FALSE(tr.legend[0].removed);

  auto trace = newton_run<BigFloat>(tr.system, StopRule::iterations(40), kF256);
  CHECK(trace.last()[0].to_double() == Catch::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("sub- and supercritical one-symbol automata", "[frontends]") {
  Ppda sub;
  sub.states = {"p"};
  sub.alphabet = {"X"};
  sub.rules = {{"p", "X", "p", {"X", "X"}, Rational(1, 3)},
               {"p", "X", "p", {}, Rational(2, 3)}};
  auto sub_sys = ppda_to_spp(sub).system;
  auto sub_trace = newton_run<BigFloat>(sub_sys, StopRule::iterations(60), kF256);
  CHECK(sub_trace.last()[0].to_double() == Catch::Approx(1.0).epsilon(1e-9));

  Ppda super;
  super.states = {"p"};
  super.alphabet = {"X"};
  super.rules = {{"p", "X", "p", {"X", "X"}, Rational(2, 3)},
                 {"p", "X", "p", {}, Rational(1, 3)}};
  auto super_sys = ppda_to_spp(super).system;
  auto super_trace = newton_run<BigFloat>(super_sys, StopRule::iterations(60), kF256);
  CHECK(super_trace.last()[0].to_double() == Catch::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("rule validation", "[frontends]") {
  Ppda bad;
  bad.states = {"p"};
  bad.alphabet = {"X"};
  bad.rules = {{"p", "X", "p", {"X", "X", "X"}, Rational(1)}};
  try {
    ppda_to_spp(bad);
    FAIL("expected invalid rule");
  } catch (const Error& e) {
    CHECK(e.code() == errc::invalid_rule);
  }

  Ppda short_mass;
  short_mass.states = {"p"};
  short_mass.alphabet = {"X"};
  short_mass.rules = {{"p", "X", "p", {}, Rational(1, 2)}};
  CHECK_THROWS_AS(ppda_to_spp(short_mass), Error);
}

TEST_CASE("cleaning removes unreachable triples and records them", "[frontends]") {
  Ppda ppda;
  ppda.states = {"p", "q"};
  ppda.alphabet = {"X"};
  ppda.rules = {{"p", "X", "q", {}, Rational(1)}};  // always pop into q
  auto tr = ppda_to_spp(ppda);
  REQUIRE(tr.system.size() == 1);
  CHECK(tr.system.equations[0].constant == 1);
  int removed = 0, kept = 0;
  for (const auto& e : tr.legend) (e.removed ? removed : kept) += 1;
  CHECK(kept == 1);
  CHECK(removed == 3);

  // legend round trip: surviving variables map bijectively to triples
  std::set<std::string> names;
  for (const auto& e : tr.legend)
    if (!e.removed) names.insert(e.variable);
  CHECK(names.size() == static_cast<size_t>(kept));
  for (const auto& v : tr.system.variables) CHECK(names.count(v) == 1);
}

TEST_CASE("strictness of the transition relation", "[frontends]") {
  Ppda half;
  half.states = {"p"};
  half.alphabet = {"X"};
  half.rules = {{"p", "X", "p", {"X", "X"}, Rational(1, 2)},
                {"p", "X", "p", {}, Rational(1, 2)}};
  CHECK(is_strict(half));

  Ppda push_only;
  push_only.states = {"p"};
  push_only.alphabet = {"X"};
  push_only.rules = {{"p", "X", "p", {"X", "X"}, Rational(1)}};
  CHECK_FALSE(is_strict(push_only));

  // the translation of any back-button model: single state, pop rule per page
  auto model = three_pages();
  Ppda translated;
  translated.states = {"s"};
  for (const auto& page : model.pages) translated.alphabet.push_back(page);
  for (const auto& page : model.pages) {
    translated.rules.push_back({"s", page, "s", {}, model.back_prob.at(page)});
    auto row = model.links.find(page);
    if (row != model.links.end())
      for (auto& [to, p] : row->second)
        translated.rules.push_back({"s", page, "s", {to, page}, p});
  }
  CHECK(is_strict(translated));
  // and its termination system is the same equation system again
  auto sys = ppda_to_spp(translated).system;
  auto direct = back_button_to_spp(model);
  REQUIRE(sys.size() == direct.size());
  for (size_t i = 0; i < sys.size(); ++i) CHECK(sys.equations[i] == direct.equations[i]);
}

TEST_CASE("model json loaders", "[frontends]") {
  auto bb_json = Json::parse(R"({
    "pages": ["1", "2", "3"],
    "back": {"1": "3/5", "2": "0.3", "3": "7/10"},
    "links": {"1": {"2": "2/5"}, "2": {"1": "3/10", "3": "2/5"}, "3": {"1": "3/10"}}
  })");
  CHECK(detect_model_kind(bb_json) == ModelKind::back_button);
  CHECK(back_button_to_spp(back_button_from_json(bb_json)) == back_button_to_spp(three_pages()));

  auto ppda_json = Json::parse(R"({
    "states": ["p"],
    "alphabet": ["X"],
    "rules": [
      {"from": ["p", "X"], "to": ["p", "XX"], "prob": "1/2"},
      {"from": ["p", "X"], "to": ["p", ""], "prob": "1/2"}
    ]
  })");
  CHECK(detect_model_kind(ppda_json) == ModelKind::ppda);
  auto ppda = ppda_from_json(ppda_json);
  CHECK(is_strict(ppda));
  CHECK(ppda_to_spp(ppda).system.size() == 1);

  auto multi_char = Json::parse(R"({"states": ["p"], "alphabet": ["XY"], "rules": []})");
  CHECK_THROWS_AS(ppda_from_json(multi_char), Error);
}

TEST_CASE("translated systems keep probabilistic mass", "[frontends]") {
  testing::Rng rng(31337);
  for (int rep = 0; rep < 40; ++rep) {
    // random model: per page, random link weights plus a positive back weight
    BackButtonModel m;
    int pages = static_cast<int>(testing::rand_int(rng, 1, 5));
    for (int i = 0; i < pages; ++i) m.pages.push_back("p" + std::to_string(i));
    for (const auto& page : m.pages) {
      std::vector<long> w{testing::rand_int(rng, 1, 8)};
      std::vector<std::string> to;
      for (const auto& other : m.pages)
        if (testing::rand_int(rng, 0, 1)) {
          to.push_back(other);
          w.push_back(testing::rand_int(rng, 0, 6));
        }
      long total = 0;
      for (long x : w) total += x;
      m.back_prob[page] = make_rational(w[0], total);
      for (size_t t = 0; t < to.size(); ++t) m.links[page][to[t]] = make_rational(w[t + 1], total);
    }
    auto sys = back_button_to_spp(m);
    CHECK(sys.maps_ones_below_ones());
    for (const auto& eq : sys.equations) {
      Rational mass = eq.constant;
      for (const auto& mono : eq.monomials) mass += mono.coeff;
      CHECK(mass <= 1);
    }
    // feasibility in practice: a short run stays at or below one
    auto trace = newton_run<BigFloat>(sys, StopRule::iterations(12), kF256);
    for (const auto& v : trace.last()) CHECK(v <= BigFloat::from_long(1, 256));
  }
}

TEST_CASE("simulated revocation frequencies match the certified interval", "[frontends]") {
  auto model = three_pages();
  auto sys = back_button_to_spp(model);
  auto outcome = decomposed_certify<BigFloat>(sys, 20, 40, kF256);
  REQUIRE(outcome.globally_certified);
  const long trials = 1000000;
  for (size_t i = 0; i < model.pages.size(); ++i) {
    auto est = testing::monte_carlo_revocation(model, model.pages[i], trials, 0xC0FFEE + i);
    // the certified interval must meet [low, high] widened by 3 standard errors
    CHECK(est.high() >= outcome.lower[i].to_double() - est.three_sigma());
    CHECK(est.low() <= outcome.upper[i].to_double() + est.three_sigma());
    // truncated trials are dominated by the genuine non-termination mass
    // (1 - mu, up to ~2.6% here) plus a small near-critical tail
    CHECK(est.truncated < trials / 20);
  }
}
