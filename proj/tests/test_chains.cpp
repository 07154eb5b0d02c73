#include "fairdisc/chains.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <string>
#include <vector>

#include "fairdisc/rng.hpp"

using namespace fairdisc;

namespace {

const BoundReport* find_link(const std::vector<BoundReport>& links,
                             const std::string& label) {
  for (const auto& l : links)
    if (l.label == label) return &l;
  return nullptr;
}

void expect_gated_links_hold(const ChainReport& rep) {
  for (const auto& l : rep.links)
    EXPECT_TRUE(l.holds || !l.preconditions_met) << rep.chain << ": " << l.label;
  for (const auto& l : rep.tail_links)
    EXPECT_TRUE(l.holds || !l.preconditions_met) << rep.chain << ": " << l.label;
}

}  // namespace

TEST(DiscChain, DeskScaleFlagsAndTails) {
  // n=50, k=3 at unit budget constant: m = 133, d = sqrt(m/k).
  const auto rep = disc_chain_report(50.0L, 3.0L, 133.0L,
                                     std::sqrt(133.0L / 3.0L));
  EXPECT_EQ(rep.chain, "disc");

  // The window hypothesis genuinely fails below m = 49k.
  const auto* eps = find_link(rep.links, "claim-eps-window");
  ASSERT_NE(eps, nullptr);
  EXPECT_TRUE(eps->preconditions_met);
  EXPECT_FALSE(eps->holds);

  // Links tied to the theorem's scale constant are flagged, not asserted.
  for (const char* label : {"exponent-constant", "complement-exp",
                            "halves-union", "base-two-vs-e", "scale-margin",
                            "target-exponent"}) {
    const auto* l = find_link(rep.links, label);
    ASSERT_NE(l, nullptr) << label;
    EXPECT_FALSE(l->preconditions_met) << label;
  }

  const auto* identity = find_link(rep.links, "power-identity");
  ASSERT_NE(identity, nullptr);
  EXPECT_TRUE(identity->holds);

  // Desk-scale m is small enough for exact tails, and the probabilistic
  // links are true regardless of the failed analytic window.
  EXPECT_TRUE(rep.tails_evaluated);
  EXPECT_FALSE(rep.tail_links.empty());
  for (const auto& l : rep.tail_links) EXPECT_TRUE(l.holds) << l.label;
  EXPECT_NE(find_link(rep.tail_links, "event-covers-window-tail-low@s=38"),
            nullptr);
  EXPECT_NE(find_link(rep.tail_links, "event-floor-high@s=50"), nullptr);
}

TEST(DiscChain, TheoremScaleAllAnalyticHold) {
  const long double z = expl(-48.0L);
  const long double k = 3.0L + 6.0L / z;
  const long double n = 1.0L + 148.0L / z * logl(k);
  const long double m = floorl((n - 1.0L) * k / ((3.0L / z) * logl(k)));
  const auto rep = disc_chain_report(n, k, m, sqrtl(m / k));
  EXPECT_FALSE(rep.tails_evaluated);
  for (const auto& l : rep.links) {
    EXPECT_TRUE(l.preconditions_met) << l.label;
    EXPECT_TRUE(l.holds) << l.label;
  }
  EXPECT_TRUE(rep.analytic_hold());
  EXPECT_TRUE(rep.all_hold());
}

TEST(DiscChain, ParameterErrors) {
  EXPECT_THROW(disc_chain_report(50, 1, 10, 1), ParameterError);
  EXPECT_THROW(disc_chain_report(1, 2, 10, 1), ParameterError);
  EXPECT_THROW(disc_chain_report(50, 2, 0, 1), ParameterError);
  EXPECT_THROW(disc_chain_report(50, 2, 10, 0), ParameterError);
}

TEST(DiscChain, WindowClaimBoundaryExactlyAt49k) {
  const auto at = disc_window_claim_links(98, 2);  // m = 49k
  ASSERT_EQ(at.size(), 2u);
  EXPECT_TRUE(at[0].holds);
  EXPECT_TRUE(at[1].holds);

  const auto below = disc_window_claim_links(97, 2);
  EXPECT_FALSE(below[0].holds);  // eps hypothesis needs m/k >= 49
  EXPECT_TRUE(below[1].holds);   // mass hypothesis needs only m/k >= 4
}

TEST(EfChain, DeskScaleExactLinks) {
  const auto rep =
      ef_event_chain_report(2000, 2, 242, {121, 121}, 0, 1);
  EXPECT_EQ(rep.chain, "ef");
  expect_gated_links_hold(rep);

  // m = 121k sits exactly on the scale boundary, so everything except the
  // astronomically large n requirement is live and must hold.
  for (const char* label :
       {"rival-size-floor", "own-threshold-shift", "claim-eps", "claim-mass",
        "tail-exponent-window", "tail-exponent-constant",
        "constant-below-final", "complement-exp", "power-identity"}) {
    const auto* l = find_link(rep.links, label);
    ASSERT_NE(l, nullptr) << label;
    EXPECT_TRUE(l->preconditions_met) << label;
    EXPECT_TRUE(l->holds) << label;
  }
  const auto* target = find_link(rep.links, "target-exponent");
  ASSERT_NE(target, nullptr);
  EXPECT_FALSE(target->preconditions_met);

  // At balanced sizes the window bound is tight: both sides are 2475/20.
  const auto* constant = find_link(rep.links, "tail-exponent-constant");
  EXPECT_NEAR((double)constant->lhs_log, 123.75, 1e-9);
  EXPECT_NEAR((double)constant->rhs_log, 123.75, 1e-9);

  EXPECT_TRUE(rep.tails_evaluated);
  for (const auto& l : rep.tail_links) EXPECT_TRUE(l.holds) << l.label;
}

TEST(EfChain, RejectsOutOfWindowBundles) {
  try {
    ef_event_chain_report(2000, 2, 242, {109, 133}, 0, 1);
    FAIL() << "expected precondition rejection";
  } catch (const PreconditionError& e) {
    EXPECT_NE(std::string(e.what()).find("bundle 0"), std::string::npos);
  }
  EXPECT_THROW(ef_event_chain_report(2000, 2, 242, {121}, 0, 1),
               DimensionError);
  EXPECT_THROW(ef_event_chain_report(2000, 2, 242, {120, 122}, 1, 1),
               ParameterError);
  EXPECT_THROW(ef_event_chain_report(2, 2, 242, {121, 121}, 0, 1),
               ParameterError);
}

TEST(EfChain, RandomAdmissibleShapes) {
  const CounterRng rng(2026);
  for (std::uint64_t job = 0; job < 200; ++job) {
    const long long k = 2 + static_cast<long long>(rng.below(job, 0, 3));
    const long long q = 121 + static_cast<long long>(rng.below(job, 1, 100));
    const long long m = k * q;
    const long long shift = static_cast<long long>(
        rng.below(job, 2, static_cast<std::uint64_t>(std::sqrt((double)q)) + 1));
    std::vector<long long> sizes(k, q);
    const int own = static_cast<int>(rng.below(job, 3, k));
    const int rival = static_cast<int>((own + 1) % k);
    sizes[own] += shift;
    sizes[rival] -= shift;
    const auto rep = ef_event_chain_report(100 * k, k, m, sizes, own, rival);
    expect_gated_links_hold(rep);
    const auto* target = find_link(rep.links, "target-exponent");
    EXPECT_FALSE(target->preconditions_met);
  }
}

TEST(PropChain, DeskScaleExactLinks) {
  const auto rep = prop_event_chain_report(2000, 2, 200, {100, 100}, 0);
  EXPECT_EQ(rep.chain, "prop");
  expect_gated_links_hold(rep);
  for (const char* label :
       {"own-size-ceiling", "claim-eps", "claim-mass", "own-size-main-floor",
        "tail-exponent-main", "exponent-constant", "deficit-floor",
        "deficit-positive", "power-identity"}) {
    const auto* l = find_link(rep.links, label);
    ASSERT_NE(l, nullptr) << label;
    EXPECT_TRUE(l->preconditions_met) << label;
    EXPECT_TRUE(l->holds) << label;
  }
  EXPECT_FALSE(find_link(rep.links, "target-exponent")->preconditions_met);
  EXPECT_TRUE(rep.tails_evaluated);
  for (const auto& l : rep.tail_links) EXPECT_TRUE(l.holds) << l.label;
}

TEST(PropChain, RejectsBundlesBelowFloor) {
  // d = sqrt(200/8) = 5, so 94 sits below the floor 95.
  EXPECT_THROW(prop_event_chain_report(2000, 2, 200, {94, 106}, 0),
               PreconditionError);
  EXPECT_THROW(prop_event_chain_report(2000, 2, 200, {100, 100, 0}, 0),
               DimensionError);
}

TEST(PropChain, DeficitAlgebraOverRandomShapes) {
  // The deficit floor (exact surd arithmetic) must hold for every admissible
  // own-bundle size, not just balanced ones.
  const CounterRng rng(515);
  for (std::uint64_t job = 0; job < 1000; ++job) {
    const long long k = 2 + static_cast<long long>(rng.below(job, 0, 4));
    const long long q = 81 + static_cast<long long>(rng.below(job, 1, 200));
    const long long m = k * q;
    const long long d_floor = static_cast<long long>(
        std::floor(std::sqrt((double)m / (double)(k * k * k))));
    const long long shift =
        static_cast<long long>(rng.below(job, 2, d_floor + 1));
    const int own = static_cast<int>(rng.below(job, 3, k));
    std::vector<long long> sizes(k, q);
    sizes[own] += shift;
    sizes[(own + 1) % k] -= shift;
    const auto rep = prop_event_chain_report(100 * k, k, m, sizes, own);
    for (const char* label : {"deficit-floor", "deficit-positive",
                              "own-size-ceiling", "claim-eps", "claim-mass"}) {
      const auto* l = find_link(rep.links, label);
      ASSERT_NE(l, nullptr) << label;
      EXPECT_TRUE(l->holds) << label << " job=" << job;
    }
  }
}

TEST(PropnewChain, BalancedShapeIsTight) {
  const auto rep =
      propnew_event_chain_report(50, 4, 1024, {256, 256, 256, 256}, 0);
  EXPECT_EQ(rep.chain, "group-prop");
  expect_gated_links_hold(rep);
  for (const char* label :
       {"zeta-sum", "zeta-ceiling", "own-threshold-identity", "claim-eps",
        "claim-mass", "tail-exponent-simplify", "outside-threshold-ceiling",
        "jensen-floor", "complement-exp", "power-identity"}) {
    const auto* l = find_link(rep.links, label);
    ASSERT_NE(l, nullptr) << label;
    EXPECT_TRUE(l->preconditions_met) << label;
    EXPECT_TRUE(l->holds) << label;
  }
  EXPECT_FALSE(find_link(rep.links, "target-exponent")->preconditions_met);

  // Uniform zetas make Jensen an equality: log k - 96 on both sides.
  const auto* jensen = find_link(rep.links, "jensen-floor");
  EXPECT_NEAR((double)jensen->lhs_log, (double)jensen->rhs_log, 1e-12);

  EXPECT_TRUE(rep.tails_evaluated);
  for (const auto& l : rep.tail_links) EXPECT_TRUE(l.holds) << l.label;
}

TEST(PropnewChain, UnbalancedZetasStillSumExactly) {
  const auto rep =
      propnew_event_chain_report(50, 4, 1024, {255, 257, 241, 271}, 2);
  const auto* zsum = find_link(rep.links, "zeta-sum");
  ASSERT_NE(zsum, nullptr);
  EXPECT_TRUE(zsum->holds);
  const auto* ident = find_link(rep.links, "own-threshold-identity");
  ASSERT_NE(ident, nullptr);
  EXPECT_TRUE(ident->holds);
  expect_gated_links_hold(rep);
}

TEST(PropnewChain, ValidationAndFlags) {
  EXPECT_THROW(
      propnew_event_chain_report(50, 4, 1024, {239, 273, 256, 256}, 0),
      PreconditionError);
  EXPECT_THROW(propnew_event_chain_report(1, 4, 1024, {256, 256, 256, 256}, 0),
               ParameterError);
  EXPECT_THROW(propnew_event_chain_report(50, 4, 1000, {256, 256, 256, 256}, 0),
               DimensionError);

  // k = 3 is below the argument's reach: reported, but gated off.
  const auto rep = propnew_event_chain_report(50, 3, 432, {144, 144, 144}, 0);
  EXPECT_FALSE(find_link(rep.links, "claim-eps")->preconditions_met);
  EXPECT_TRUE(find_link(rep.links, "zeta-sum")->holds);
}

TEST(JensenLink, RandomZetaVectors) {
  const CounterRng rng(606);
  for (std::uint64_t job = 0; job < 1000; ++job) {
    const int k = 4 + static_cast<int>(rng.below(job, 0, 5));
    std::vector<long double> zetas(k);
    long double total = 0;
    for (int h = 0; h < k; ++h) {
      zetas[h] = (long double)rng.unit(job, h + 1) + 1e-6L;
      total += zetas[h];
    }
    for (auto& z : zetas) z *= (long double)k / total;
    const auto link = jensen_convexity_link(zetas, 6.0L);
    EXPECT_TRUE(link.preconditions_met);
    EXPECT_TRUE(link.holds) << "job=" << job;
  }
}

TEST(JensenLink, BoundariesAndValidation) {
  // All mass on one group: strict slack.
  const auto corner = jensen_convexity_link({4.0L, 0.0L, 0.0L, 0.0L}, 6.0L);
  EXPECT_TRUE(corner.holds);
  EXPECT_LT(corner.lhs_log + 1.0L, corner.rhs_log);

  // Uniform vector: equality up to rounding.
  const auto uniform = jensen_convexity_link({1.0L, 1.0L, 1.0L, 1.0L}, 6.0L);
  EXPECT_TRUE(uniform.holds);
  EXPECT_NEAR((double)uniform.lhs_log, (double)uniform.rhs_log, 1e-15);

  // Below the convexity threshold the link is reported but gated.
  const auto gated = jensen_convexity_link({1.0L, 1.0L}, 1.0L / 36.0L);
  EXPECT_FALSE(gated.preconditions_met);

  EXPECT_THROW(jensen_convexity_link({-0.5L, 4.5L}, 6.0L), ParameterError);
  EXPECT_THROW(jensen_convexity_link({1.0L, 1.5L}, 6.0L), ParameterError);
  EXPECT_THROW(jensen_convexity_link({}, 6.0L), ParameterError);
}
