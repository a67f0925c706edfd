#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "pidlab/harness.hpp"
#include "pidlab/info.hpp"
#include "pidlab/suites.hpp"

using namespace pidlab;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidArgument;
}

JointDist gate(std::vector<double> m) { return oracle::to_dist(oracle::make(2, 2, 2, std::move(m))); }
JointDist xor_gate() { return gate({0.25, 0, 0, 0.25, 0, 0.25, 0.25, 0}); }
JointDist and_gate() { return gate({0.25, 0.25, 0.25, 0, 0, 0, 0, 0.25}); }
JointDist rdn_gate() { return gate({0.5, 0, 0, 0, 0, 0, 0, 0.5}); }
JointDist uniform() { return gate(std::vector<double>(8, 0.125)); }

// S = (Y,Z) for independent uniform bits
JointDist copy_gate() {
  std::vector<double> m(16, 0.0);
  for (std::size_t y = 0; y < 2; ++y) {
    for (std::size_t z = 0; z < 2; ++z) m[((2 * y + z) * 2 + y) * 2 + z] = 0.25;
  }
  return oracle::to_dist(oracle::make(4, 2, 2, m));
}

const double kAndSi = oracle::binary_entropy(0.25) - 0.5;

void check_components(const PidResult& r, double si, double ui_y, double ui_z, double ci, double tol) {
  CHECK(std::abs(r.si - si) <= tol);
  CHECK(std::abs(r.ui_y - ui_y) <= tol);
  CHECK(std::abs(r.ui_z - ui_z) <= tol);
  CHECK(std::abs(r.ci - ci) <= tol);
}

}  // namespace

TEST_CASE("complete decomposition") {
  check_components(complete_decomposition(xor_gate(), SharedAnchor{0.0}, MeasureId::Mmi), 0, 0, 0, 1, 1e-14);
  const JointDist r = rdn_gate();
  const double isy = mutual_information(r, {"S"}, {"Y"});
  check_components(complete_decomposition(r, SharedAnchor{isy}, MeasureId::Mmi), 1, 0, 0, 0, 1e-14);
  const JointDist p = oracle::to_dist(oracle::dirichlet(2, 2, 2, 1));
  const oracle::Cube c = oracle::from(p);
  const double ok_y = oracle::i_sy_given_z(c) * 0.5;
  const double ok_z = ok_y - oracle::i_sy(c) + oracle::i_sz(c);
  if (ok_z >= 0.0) {
    const PidResult u = complete_decomposition(p, UniqueAnchor{ok_y, ok_z}, MeasureId::Broja);
    CHECK(std::abs(u.si + u.ui_y - oracle::i_sy(c)) <= 1e-12);
  }
  CHECK(code_of([&] { complete_decomposition(p, UniqueAnchor{ok_y, ok_z + 0.1}, MeasureId::Broja); }) ==
        ErrorCode::InconsistentAnchor);
  const PidResult s = complete_decomposition(p, SynergyAnchor{0.05}, MeasureId::Broja);
  CHECK(std::abs(s.si + s.ui_y + s.ui_z + s.ci - oracle::i_syz(c)) <= 1e-12);
}

TEST_CASE("specific information") {
  const JointDist u = uniform();
  CHECK(std::abs(specific_information(u, "0", "Y").value) <= 1e-15);
  CHECK(std::abs(specific_information(u, "1", "Z").value) <= 1e-15);
  CHECK(specific_information(rdn_gate(), "0", "Y").value == doctest::Approx(1.0).epsilon(1e-14));
  // zero-probability outcome
  CHECK(code_of([] { specific_information(gate({0.5, 0.5, 0, 0, 0, 0, 0, 0}), "1", "Y"); }) ==
        ErrorCode::ZeroProbabilityOutcome);
  // additive on product outcomes
  const JointDist a = oracle::to_dist(oracle::dirichlet(2, 2, 2, 3)), b = oracle::to_dist(oracle::dirichlet(2, 2, 2, 4));
  const JointDist t = tensor_product(a, b);
  for (std::size_t s1 = 0; s1 < 2; ++s1) {
    for (std::size_t s2 = 0; s2 < 2; ++s2) {
      const std::string label = "(" + std::to_string(s1) + "," + std::to_string(s2) + ")";
      const double sum = oracle::specific_information(oracle::from(a), s1, true) +
                         oracle::specific_information(oracle::from(b), s2, true);
      CHECK(std::abs(specific_information(t, label, "Y").value - sum) <= 1e-12);
    }
  }
  for (unsigned seed = 0; seed < 10; ++seed) {
    const oracle::Cube c = oracle::dirichlet(3, 2, 3, seed);
    const JointDist p = oracle::to_dist(c);
    for (std::size_t s = 0; s < 3; ++s) {
      CHECK(std::abs(specific_information(p, std::to_string(s), "Z").value -
                     oracle::specific_information(c, s, false)) <= 1e-12);
    }
  }
}

TEST_CASE("minimum specific information") {
  check_components(si_min(xor_gate()), 0, 0, 0, 1, 1e-14);
  CHECK(si_min(rdn_gate()).si == doctest::Approx(1.0).epsilon(1e-14));
  const JointDist half = generate(RedDiscontinuity{0.5});
  const double v = si_min(half).si;
  CHECK(v >= -1e-12);
  CHECK(v <= 0.5 + 1e-12);
  for (unsigned seed = 0; seed < 10; ++seed) {
    const oracle::Cube c = oracle::dirichlet(3, 3, 2, seed);
    CHECK(std::abs(si_min(oracle::to_dist(c)).si - oracle::si_min(c)) <= 1e-12);
  }
}

TEST_CASE("minimum mutual information") {
  CHECK(si_mmi(xor_gate()).si == 0.0);
  CHECK(si_mmi(and_gate()).si == doctest::Approx(kAndSi).epsilon(1e-12));
  CHECK(std::abs(kAndSi - 0.3113) <= 1e-4);
  const PidResult r = si_mmi(and_gate());
  CHECK(std::abs(r.ui_y) <= 1e-14);
  CHECK(std::abs(r.ui_z) <= 1e-14);
}

TEST_CASE("projection information") {
  const double boundary = 0.75 * (1 - oracle::binary_entropy(1.0 / 3)) + 0.25 * (1 - std::log2(1.5));
  CHECK(std::abs(boundary - 0.1650) <= 1e-4);
  for (double a : {0.5, 0.1, 1e-3}) {
    const JointDist p = oracle::to_dist(oracle::red_family(a));
    CHECK(std::abs(i_searrow(p, "Y", "Z").value - oracle::i_sy(oracle::from(p))) <= 1e-6);
  }
  const JointDist p0 = oracle::to_dist(oracle::red_family(0.0));
  CHECK(std::abs(i_searrow(p0, "Y", "Z").value - boundary) <= 1e-6);
  CHECK(std::abs(oracle::i_sy(oracle::from(p0)) - kAndSi) <= 1e-12);
  // one Z symbol carrying the prior: the hull is the prior itself
  const JointDist flat = oracle::to_dist(oracle::make(2, 2, 1, {0.3, 0.2, 0.1, 0.4}));
  CHECK(std::abs(i_searrow(flat, "Y", "Z").value) <= 1e-12);
}

TEST_CASE("projection information against a segment oracle") {
  // binary Z: the hull is a segment, so each term has a 1-D reference
  for (unsigned seed = 0; seed < 10; ++seed) {
    const oracle::Cube c = oracle::dirichlet(3, 3, 2, seed);
    const JointDist p = oracle::to_dist(c);
    std::vector<double> ps(3, 0.0), py(3, 0.0), pz(2, 0.0);
    std::vector<std::vector<double>> sy(3, std::vector<double>(3, 0.0)), sz(2, std::vector<double>(3, 0.0));
    for (std::size_t s = 0; s < 3; ++s) {
      for (std::size_t y = 0; y < 3; ++y) {
        for (std::size_t z = 0; z < 2; ++z) {
          const double v = c(s, y, z);
          ps[s] += v;
          py[y] += v;
          pz[z] += v;
          sy[y][s] += v;
          sz[z][s] += v;
        }
      }
    }
    double expected = 0.0;
    for (std::size_t y = 0; y < 3; ++y) {
      for (auto& v : sy[y]) v /= py[y];
      std::vector<double> a0 = sz[0], a1 = sz[1];
      for (auto& v : a0) v /= pz[0];
      for (auto& v : a1) v /= pz[1];
      expected += py[y] * (oracle::kl(sy[y], ps) - oracle::segment_projection(sy[y], a0, a1).value);
    }
    CHECK(std::abs(i_searrow(p, "Y", "Z").value - expected) <= 1e-8);
  }
}

TEST_CASE("redundancy by projection") {
  CHECK(si_red(generate(RedDiscontinuity{0.5})).si == doctest::Approx(0.5).epsilon(1e-6));
  const double boundary = 0.75 * (1 - oracle::binary_entropy(1.0 / 3)) + 0.25 * (1 - std::log2(1.5));
  CHECK(std::abs(si_red(generate(RedDiscontinuity{0.0})).si - boundary) <= 1e-6);
  for (unsigned seed = 0; seed < 5; ++seed) {
    const JointDist p = oracle::to_dist(oracle::dirichlet(2, 3, 3, seed, 1e-3));
    const JointDist q = perturb(p, 1e-6, seed);
    const PidResult a = si_red(p), b = si_red(q);
    CHECK(std::abs(a.si - b.si) <= 1e-4);
  }
}

TEST_CASE("unique information by Delta_P minimisation") {
  const PidResult a = ui_broja(and_gate());
  check_components(a, kAndSi, 0, 0, 0.5, 1e-6);
  check_components(ui_broja(xor_gate()), 0, 0, 0, 1, 1e-8);
  check_components(ui_broja(copy_gate()), 0, 1, 1, 0, 1e-8);
  for (unsigned seed = 0; seed < 10; ++seed) {
    const oracle::Cube c = oracle::dirichlet(2, 2, 2, seed);
    const PidResult r = ui_broja(oracle::to_dist(c));
    CHECK(std::abs(r.ui_y - oracle::broja_2x2x2(c)) <= 1e-4);
    CHECK(r.ui_y <= std::min(oracle::i_sy(c), oracle::i_sy_given_z(c)) + 1e-7);
    CHECK(std::abs(consistency_check(oracle::to_dist(c), r).max_abs()) <= 1e-7);
  }
}

TEST_CASE("dependency decomposition") {
  check_components(ui_dep(xor_gate()), 0, 0, 0, 1, 1e-9);
  // a Markov chain Y - S - Z is its own closed-form candidate
  oracle::Cube m = oracle::markov_chain(oracle::dirichlet(2, 3, 2, 5));
  const JointDist p = oracle::to_dist(m);
  const PidResult r = ui_dep(p);
  CHECK(std::abs(r.ui_y - oracle::i_sy_given_z(m)) <= 1e-9);
  for (unsigned seed = 0; seed < 10; ++seed) {
    const oracle::Cube c = oracle::dirichlet(2, 2, 3, seed);
    const PidResult d = ui_dep(oracle::to_dist(c));
    // the closed-form candidate bounds it
    CHECK(d.ui_y <= oracle::i_sy_given_z(oracle::markov_chain(c)) + 1e-9);
    CHECK(consistency_check(oracle::to_dist(c), d).max_abs() <= 1e-7);
  }
}

TEST_CASE("information-geometric decomposition") {
  check_components(decomp_ig(uniform()), 0, 0, 0, 0, 1e-12);
  CHECK(code_of([] { decomp_ig(xor_gate()); }) == ErrorCode::NotFullSupport);
  // xor mixed with the uniform distribution
  std::vector<double> mix(8);
  for (std::size_t i = 0; i < 8; ++i) mix[i] = 0.9 * xor_gate()[i] + 0.1 * 0.125;
  for (const auto& c : {oracle::make(2, 2, 2, mix), oracle::dirichlet(2, 2, 2, 1, 1e-3),
                        oracle::dirichlet(3, 2, 2, 2, 1e-3)}) {
    const JointDist p = oracle::to_dist(c);
    const PidResult r = decomp_ig(p);
    auto f = [&](double t) { return oracle::ig_divergence(c, t); };
    const oracle::ArgMin g = oracle::grid_argmin(f, -20, 20, 1e-4);
    const oracle::Cube star = oracle::ig_member(c, g.x);
    CHECK(std::abs(r.ci - g.value) <= 1e-4);
    CHECK(std::abs(r.ui_y - oracle::kl(star.m, oracle::ig_member(c, 0).m)) <= 1e-4);
    CHECK(std::abs(r.ui_z - oracle::kl(star.m, oracle::ig_member(c, 1).m)) <= 1e-4);
    CHECK(std::abs(oracle::ig_divergence(c, 0) - r.ci - r.ui_y) <= 1e-7);
    CHECK(std::abs(oracle::ig_divergence(c, 1) - r.ci - r.ui_z) <= 1e-7);
    // endpoints of the family are the two Markov chains
    const JointDist sz = ig_member(p, 0.0);
    for (std::size_t i = 0; i < p.size(); ++i) CHECK(std::abs(sz[i] - oracle::ig_member(c, 0).m[i]) <= 1e-14);
  }
}

TEST_CASE("common information of the sources") {
  const JointDist same = gate({0.25, 0, 0, 0.25, 0.25, 0, 0, 0.25});
  CHECK(gacs_korner_common(same, "Y", "Z").common_information == 1.0);
  CHECK(gacs_korner_common(same, "Y", "Z").components == 2);
  CHECK(gacs_korner_common(uniform(), "Y", "Z").common_information == 0.0);
  // two uniform blocks, then mass eps across
  for (double eps : {0.0, 1e-3}) {
    std::vector<double> yz{0.25, 0.25, 0, 0, 0.25, 0.25, 0, 0, 0, 0, 0.25, 0.25, 0, 0, 0.25, 0.25};
    if (eps > 0) {
      yz[2] = eps;
      yz[0] -= eps;
    }
    std::vector<double> m(16);
    for (std::size_t i = 0; i < 16; ++i) m[i] = yz[i] / 4.0;
    std::vector<double> full(32);
    for (std::size_t s = 0; s < 2; ++s) {
      for (std::size_t i = 0; i < 16; ++i) full[s * 16 + i] = m[i];
    }
    const GacsKorner g = gacs_korner_common(oracle::to_dist(oracle::make(2, 4, 4, full)), "Y", "Z");
    CHECK(g.common_information == (eps == 0.0 ? 1.0 : 0.0));
  }
}

TEST_CASE("shared information from the common variable") {
  const JointDist c = copy_gate();
  CHECK(si_cap_wedge(c).si == 0.0);  // independent uniform sources: one component
  CHECK(si_cap_wedge(generate(GkDiscontinuity{0.0})).si == 1.0);
  CHECK(si_cap_wedge(generate(GkDiscontinuity{1e-3})).si == 0.0);
  CHECK(si_cap_wedge(rdn_gate()).si == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(si_cap_wedge(oracle::to_dist(oracle::dirichlet(2, 2, 2, 0))).si == 0.0);
}

TEST_CASE("decomposition from unique-information lower bounds") {
  for (unsigned seed = 0; seed < 10; ++seed) {
    const oracle::Cube c = oracle::dirichlet(2, 3, 2, seed);
    const JointDist p = oracle::to_dist(c);
    const double isy = oracle::i_sy(c), isz = oracle::i_sz(c);
    const double cy = oracle::i_sy_given_z(c), cz = oracle::i_sz_given_y(c);
    const PidResult zero = ui_construction(p, 0, 0);
    CHECK(std::abs(zero.ui_y - std::max(0.0, isy - isz)) <= 1e-12);
    CHECK(std::abs(zero.si - std::min(isy, isz)) <= 1e-12);
    // the conditional informations are admissible only when they do not exceed the plain ones
    if (cy <= isy && cz <= isz) {
      const PidResult full = ui_construction(p, cy, cz);
      CHECK(std::abs(full.ci) <= 1e-12);
      CHECK(consistency_check(p, full).max_abs() <= 1e-9);
    } else {
      CHECK(code_of([&] { ui_construction(p, cy, cz); }) == ErrorCode::DeltaOutOfRange);
    }
    // a consistent pair is returned unchanged
    const PidResult b = ui_broja(p);
    // rounding dust below zero is not a valid delta
    const double dy = std::max(0.0, b.ui_y), dz = std::max(0.0, b.ui_z);
    const PidResult same = ui_construction(p, dy, dz);
    CHECK(std::abs(same.ui_y - dy) <= 1e-9);
    CHECK(std::abs(same.ui_z - dz) <= 1e-9);
    CHECK(code_of([&] { ui_construction(p, std::min(isy, cy) + 1e-6, 0); }) == ErrorCode::DeltaOutOfRange);
    CHECK(code_of([&] { ui_construction(p, -1e-6, 0); }) == ErrorCode::DeltaOutOfRange);
  }
}

TEST_CASE("decomposition with conditional informations as lower bounds") {
  // redundancy-dominated: copy gate mixed with uniform noise
  std::vector<double> m(8);
  for (std::size_t i = 0; i < 8; ++i) m[i] = 0.8 * rdn_gate()[i] + 0.2 * 0.125;
  const oracle::Cube c = oracle::make(2, 2, 2, m);
  const JointDist p = oracle::to_dist(c);
  REQUIRE(oracle::i_sy_given_z(c) <= oracle::i_sy(c));
  const PidResult r = ui_construction(p, oracle::i_sy_given_z(c), oracle::i_sz_given_y(c));
  CHECK(std::abs(r.ci) <= 1e-12);
  CHECK(consistency_check(p, r).max_abs() <= 1e-9);
}

TEST_CASE("catalogue invariants") {
  const std::vector<JointDist> inputs{oracle::to_dist(oracle::dirichlet(2, 2, 2, 21, 1e-4)),
                                      oracle::to_dist(oracle::dirichlet(3, 3, 3, 22, 1e-5)),
                                      oracle::to_dist(oracle::dirichlet(2, 3, 2, 23, 1e-4))};
  for (const auto& p : inputs) {
    const double mmi = std::min(mutual_information(p, {"S"}, {"Y"}), mutual_information(p, {"S"}, {"Z"}));
    for (auto id : catalogue()) {
      CAPTURE(to_string(id));
      const PidResult r = compute_measure(id, p);
      CHECK(consistency_check(p, r).max_abs() <= 1e-7);
      CHECK(r.si <= mmi + 1e-7);
      for (double v : {r.si, r.ui_y, r.ui_z}) CHECK(v >= -1e-7);
      if (id != MeasureId::CapWedge) CHECK(r.ci >= -1e-7);
      // exchanging the sources
      const PidResult s = compute_measure(id, swap_sources(p));
      CHECK(std::abs(s.si - r.si) <= 1e-7);
      CHECK(std::abs(s.ui_y - r.ui_z) <= 1e-7);
      // relabelling S
      std::vector<std::size_t> perm(p.dim(0));
      for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = perm.size() - 1 - i;
      const PidResult q = compute_measure(id, permute_alphabet(p, "S", perm));
      CHECK(std::abs(q.si - r.si) <= 1e-12);
      CHECK(std::abs(q.ci - r.ci) <= 1e-12);
    }
  }
}
