#include <catch2/catch_amalgamated.hpp>

#include "../support/generators.hpp"

using namespace sppfix;

namespace {
SppSystem back_button() {
  return parse_system(
      "X1 = 0.4*X2*X1 + 0.6\n"
      "X2 = 0.3*X1*X2 + 0.4*X3*X2 + 0.3\n"
      "X3 = 0.3*X1*X3 + 0.7\n");
}
const scalar_config_t<BigFloat> kF256{256};
}  // namespace

TEST_CASE("valid-bit counting", "[certify]") {
  std::vector<Rational> lower{Rational(3, 4)}, upper{Rational(1)};
  CHECK(certified_bits<Rational>(lower, upper) == 1);  // gap/lower = 1/3 <= 2^-1

  CHECK(certified_bits<Rational>(lower, lower, 99) == 99);  // zero width hits the cap

  std::vector<Rational> wide{Rational(2)};
  CHECK(certified_bits<Rational>(std::vector<Rational>{Rational(1, 2)}, wide) == 0);

  CHECK_THROWS_AS(certified_bits<Rational>(std::vector<Rational>{0}, upper), Error);
  CHECK_THROWS_AS(certified_bits<Rational>(upper, lower), Error);

  // antitone in the upper bound: tightening never loses bits
  std::vector<Rational> tighter{Rational(7, 8)};
  CHECK(certified_bits<Rational>(lower, tighter) >= certified_bits<Rational>(lower, upper));
}

TEST_CASE("a-posteriori enclosure on the three-page system", "[certify]") {
  auto bb = back_button();
  auto trace = newton_run<BigFloat>(bb, StopRule::iterations(10), kF256);
  auto cert = upper_bound_scspp<BigFloat>(bb, trace.iterates[9], trace.iterates[10], kF256);
  auto bound = cert.upper[0] - cert.lower[0];
  CHECK(bound <= BigFloat::from_rational(Rational(9, 100000), 256));
  auto one = BigFloat::from_long(1, 256);
  for (size_t j = 0; j < 3; ++j) CHECK(cert.upper[j] < one);
  CHECK(componentwise_le(cert.upper, std::vector<BigFloat>{
                                         BigFloat::from_rational(Rational(983, 1000), 256),
                                         BigFloat::from_rational(Rational(974, 1000), 256),
                                         BigFloat::from_rational(Rational(993, 1000), 256)}));
  CHECK(cert.certified_bits >= 13);
  CHECK(cert.justification == Justification::proximity2);
  CHECK(cert.params.c_min == Rational(3, 10));
}

TEST_CASE("enclosure at an exact fixed point has zero width", "[certify]") {
  auto linear = parse_system("X = 0.5*X + 0.25");  // reaches 1/2 after one step
  auto trace = newton_run<Rational>(linear, StopRule::iterations(2));
  CHECK(trace.last() == std::vector<Rational>{Rational(1, 2)});
  auto cert = upper_bound_scspp<Rational>(linear, trace.iterates[1], trace.iterates[2]);
  CHECK(cert.lower == cert.upper);
  CHECK(cert.certified_bits == scalar_traits<Rational>::certified_bits_cap({}));
  CHECK(cert.params.step_diff == 0);
}

TEST_CASE("enclosure sound against the closed-form error", "[certify]") {
  auto sys = parse_system("X = 0.5*X^2 + 0.5");
  auto trace = newton_run<Rational>(sys, StopRule::iterations(20));
  auto cert = upper_bound_scspp<Rational>(sys, trace.iterates[19], trace.iterates[20]);
  Rational nu20 = Rational(1) - pow2(-20);
  Rational width = cert.upper[0] - cert.lower[0];
  CHECK(width == pow2(-20) / (Rational(1, 2) * nu20));
  CHECK(width >= pow2(-20));  // true error of nu_20
  CHECK(cert.upper[0] >= Rational(1));
}

TEST_CASE("enclosure soundness against all-ones references", "[certify]") {
  // systems rescaled so f(1) = 1; when a 200-step run pins the fixed point
  // at 1 within 2^-100 the enclosure must straddle 1
  testing::Rng rng(4242);
  scalar_config_t<BigFloat> cfg{256};
  auto one = BigFloat::from_long(1, 256);
  auto close = BigFloat::from_rational(pow2(-100), 256);
  int used = 0;
  for (int rep = 0; rep < 80; ++rep) {
    testing::GenOptions opt;
    opt.strongly_connected = true;
    auto sys = testing::random_probabilistic_system(rng, opt);
    for (auto& eq : sys.equations) {
      Rational mass = eq.constant;
      for (auto& m : eq.monomials) mass += m.coeff;
      eq.constant /= mass;
      for (auto& m : eq.monomials) m.coeff /= mass;
    }
    IterationTrace<BigFloat> trace;
    try {
      StopRule stop = StopRule::iterations(200);
      stop.residual_below = pow2(-180);
      trace = newton_run<BigFloat>(sys, stop, cfg);
    } catch (const Error& e) {
      // critical draws collapse the pivot near convergence; not usable as
      // a 2^-100 reference
      if (e.code() != errc::singular_system) throw;
      continue;
    }
    if (trace.steps() < 20) continue;
    bool at_one = true;
    for (const auto& v : trace.last()) at_one = at_one && abs(v - one) <= close;
    if (!at_one) continue;  // least fixed point is below 1 for this draw
    ++used;
    auto cert = upper_bound_scspp<BigFloat>(sys, trace.iterates[19], trace.iterates[20], cfg);
    CHECK(cert.certified_bits >= 0);
    for (size_t j = 0; j < sys.size(); ++j) {
      // pads absorb final-ulp rounding of near-critical float iterates
      CHECK(cert.lower[j] <= one + close);
      CHECK(cert.upper[j] + close >= one);
    }
  }
  CHECK(used >= 5);
}

TEST_CASE("more iterations never certify fewer bits", "[certify]") {
  auto bb = back_button();
  auto trace = newton_run<BigFloat>(bb, StopRule::iterations(20), kF256);
  long previous = 0;
  for (size_t k = 5; k <= 20; ++k) {
    auto cert = upper_bound_scspp<BigFloat>(bb, trace.iterates[k - 1], trace.iterates[k], kF256);
    CHECK(cert.certified_bits >= previous);
    previous = cert.certified_bits;
  }
}

TEST_CASE("enclosure preconditions", "[certify]") {
  auto cubic = parse_system("X = 0.5*X^3 + 0.5");
  std::vector<Rational> v{Rational(1, 2)};
  CHECK_THROWS_AS((upper_bound_scspp<Rational>(cubic, v, v)), Error);

  auto split = worst_case_family(2);
  std::vector<Rational> v2{Rational(1, 2), Rational(1, 2)};
  try {
    upper_bound_scspp<Rational>(split, v2, v2);
    FAIL("expected rejection");
  } catch (const Error& e) {
    CHECK(e.code() == errc::not_strongly_connected);
  }

  std::vector<Rational> with_zero{Rational(0)};
  auto half_square = parse_system("X = 0.5*X^2 + 0.5");
  CHECK_THROWS_AS((upper_bound_scspp<Rational>(half_square, with_zero, with_zero)), Error);
}

TEST_CASE("threshold from fixed-point bounds", "[certify]") {
  auto th = threshold_estimate(back_button(), Rational(97, 100), Rational(1));
  CHECK(th.value == 6);
  CHECK(th.kind == ThresholdKind::estimate);

  // weaker bounds never decrease the threshold
  auto weaker = threshold_estimate(back_button(), Rational(9, 10), Rational(3, 2));
  CHECK(weaker.value >= th.value);

  auto one_dim = threshold_estimate(parse_system("X = 0.5*X^2 + 0.5"), Rational(1), Rational(1));
  CHECK(one_dim.value == 1);

  CHECK_THROWS_AS(threshold_estimate(back_button(), Rational(0), Rational(1)), Error);
}

TEST_CASE("after the threshold every iteration certifies one more bit", "[certify]") {
  auto bb = back_button();
  auto trace = newton_run<BigFloat>(bb, StopRule::iterations(30), kF256);
  const auto& reference = trace.iterates[30];
  for (int i = 1; i <= 8; ++i) {
    const auto& nu = trace.iterates[static_cast<size_t>(6 + i)];
    BigFloat worst(256);
    for (size_t j = 0; j < 3; ++j) {
      auto rel = abs(reference[j] - nu[j]) / reference[j];
      if (rel > worst) worst = rel;
    }
    CHECK(worst <= BigFloat::from_rational(pow2(-i), 256));
  }
}

TEST_CASE("syntactic thresholds", "[certify]") {
  auto bb = back_button();
  CHECK(threshold_syntactic(bb, ThresholdKind::syntactic_2mn_plus_m).value == 28);
  CHECK(threshold_syntactic(bb, ThresholdKind::syntactic_4mn2n).value == 384);
  CHECK(threshold_syntactic(bb, ThresholdKind::syntactic_7mn).value == 84);
  CHECK(threshold_syntactic(bb, ThresholdKind::estimate_with_mu_min, Rational(97, 100)).value ==
        49);

  auto no_constant = parse_system("X1 = 0.5*X2*X1 + 0.5\nX2 = 0.5*X1*X2 + 0.5*X1");
  try {
    threshold_syntactic(no_constant, ThresholdKind::syntactic_7mn);
    FAIL("expected a side-condition failure");
  } catch (const Error& e) {
    CHECK(e.code() == errc::side_condition_unmet);
  }

  // f(1) > 1: the 2mn+m mode needs an explicit assertion
  auto heavy = parse_system("X = 0.7*X^2 + 0.7");
  CHECK_THROWS_AS(threshold_syntactic(heavy, ThresholdKind::syntactic_2mn_plus_m), Error);
  CHECK(threshold_syntactic(heavy, ThresholdKind::syntactic_2mn_plus_m, std::nullopt, true).value >
        0);
}

TEST_CASE("cone direction diagnostic", "[certify]") {
  auto half_square = parse_system("X = 0.5*X^2 + 0.5");
  auto est = cone_vector_estimate(half_square, std::vector<Rational>{Rational(1, 2)});
  CHECK(est.vector == std::vector<Rational>{Rational(1)});
  CHECK(est.residual == 0);

  auto symmetric = parse_system("X1 = 0.5*X2^2 + 0.25\nX2 = 0.5*X1^2 + 0.25");
  auto kl = kleene_run<Rational>(symmetric, StopRule::iterations(3));
  auto sym_est = cone_vector_estimate(symmetric, kl.last());
  CHECK(sym_est.vector == std::vector<Rational>{1, 1});

  auto bb = back_button();
  auto trace = newton_run<BigFloat>(bb, StopRule::iterations(10), kF256);
  auto bb_est = cone_vector_estimate(bb, trace.last(), kF256);
  BigFloat one = BigFloat::from_long(1, 256);
  bool any_one = false;
  for (const auto& v : bb_est.vector) {
    CHECK(v > BigFloat(256));
    CHECK(v <= one);
    if (v == one) any_one = true;
  }
  CHECK(any_one);
}

TEST_CASE("informational rate bounds", "[certify]") {
  auto rb = general_rate_bound(worst_case_family(3));
  CHECK(rb.general == 24);
  CHECK(rb.by_height == 12);

  auto one_dim = general_rate_bound(parse_system("X = 0.5"));
  CHECK(one_dim.general == 2);
  CHECK(one_dim.by_height == 1);

  auto bb = general_rate_bound(back_button());
  CHECK(bb.general == 24);
  CHECK(bb.by_height == 1);
}

TEST_CASE("all-ones upper bound when f(1) <= 1", "[certify]") {
  auto bb = back_button();
  auto trace = newton_run<BigFloat>(bb, StopRule::iterations(5), kF256);
  auto cert = certificate_at_one<BigFloat>(bb, trace.last(), kF256);
  CHECK(cert.justification == Justification::known_fixed_point_at_one);
  for (const auto& v : cert.upper) CHECK(v == BigFloat::from_long(1, 256));

  auto heavy = parse_system("X = 0.5*X^2 + 0.6");
  CHECK_THROWS_AS(certificate_at_one<Rational>(heavy, std::vector<Rational>{Rational(1, 2)}),
                  Error);
}

TEST_CASE("decomposed certification of a single component", "[certify]") {
  auto outcome = decomposed_certify<BigFloat>(back_button(), 13, 50, kF256);
  CHECK(outcome.globally_certified);
  CHECK(outcome.target_reached);
  CHECK(outcome.certified_bits >= 13);
  REQUIRE(outcome.sccs.size() == 1);
  CHECK(outcome.sccs[0].iterations <= 10);
  auto one = BigFloat::from_long(1, 256);
  for (const auto& v : outcome.upper) CHECK(v < one);
}

TEST_CASE("decomposed certification across components", "[certify]") {
  auto outcome = decomposed_certify<BigFloat>(worst_case_family(3), 5, 60, kF256);
  CHECK_FALSE(outcome.globally_certified);
  CHECK(outcome.sccs.size() == 3);
  CHECK(outcome.target_reached);
  // the family's fixed point is the all-ones vector; enclosures must respect it
  for (size_t i = 0; i < 3; ++i) {
    CHECK(outcome.lower[i] <= BigFloat::from_long(1, 256));
  }
}

TEST_CASE("certification auto-reduces higher degrees", "[certify]") {
  auto outcome = decomposed_certify<BigFloat>(parse_system("X = 0.5*X^3 + 0.25"), 10, 60, kF256);
  CHECK(outcome.globally_certified);  // X and its auxiliary share one component
  CHECK(outcome.target_reached);
  REQUIRE(outcome.lower.size() == 1);  // reported in original variables only
  double root = testing::univariate_least_root(parse_system("X = 0.5*X^3 + 0.25"));
  CHECK(outcome.lower[0].to_double() <= root + 1e-12);
  CHECK(outcome.upper[0].to_double() >= root - 1e-12);
}

TEST_CASE("certification budget can be exhausted", "[certify]") {
  auto outcome = decomposed_certify<BigFloat>(back_button(), 1000, 5, kF256);
  CHECK_FALSE(outcome.target_reached);
}
