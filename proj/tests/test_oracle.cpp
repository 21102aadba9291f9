#include "doctest.h"

#include <functional>
#include <vector>

#include "beldi/diagram.hpp"
#include "beldi/errors.hpp"
#include "beldi/oracle.hpp"
#include "beldi/transform.hpp"
#include "fixtures.hpp"

using beldi::BeliefDiagram;
using beldi::DiagramError;
using beldi::Errc;
using beldi::JointTable;
using beldi::NodeId;

namespace {

Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const DiagramError& e) {
    return e.code();
  }
  FAIL("expected a DiagramError");
  return Errc::invalid_diagram;
}

}  // namespace

TEST_CASE("joint of the two-node chain matches the hand computation") {
  BeliefDiagram d = fixtures::chain2();
  JointTable j = beldi::enumerate_joint(d);
  REQUIRE(j.order == std::vector<NodeId>{0, 1});
  REQUIRE(j.table.size() == 4);
  // flat order (x1, x2): aa=0.14 at=... laid out as x1 slow, x2 fast
  CHECK(j.table.entries()[0] == doctest::Approx(0.14).epsilon(1e-12));
  CHECK(j.table.entries()[1] == doctest::Approx(0.06).epsilon(1e-12));
  CHECK(j.table.entries()[2] == doctest::Approx(0.24).epsilon(1e-12));
  CHECK(j.table.entries()[3] == doctest::Approx(0.56).epsilon(1e-12));

  std::vector<double> m1 = beldi::marginal_from_joint(j, 0);
  CHECK(m1[0] == doctest::Approx(0.2).epsilon(1e-12));
  std::vector<double> m2 = beldi::marginal_from_joint(j, 1);
  CHECK(m2[0] == doctest::Approx(0.38).epsilon(1e-12));
}

TEST_CASE("marginals are invariant under per-table scaling") {
  BeliefDiagram d = fixtures::poly10();
  JointTable base = beldi::enumerate_joint(d);

  BeliefDiagram scaled = d;
  for (double& v : scaled.node(scaled.find("3")).table.entries()) v *= 1000.0;
  for (double& v : scaled.node(scaled.find("9")).table.entries()) v *= 0.001;
  JointTable j = beldi::enumerate_joint(scaled);

  for (const beldi::NodeRecord& rec : d.nodes()) {
    CHECK(fixtures::linf(beldi::marginal_from_joint(base, rec.id),
                         beldi::marginal_from_joint(j, rec.id)) <= 1e-12);
  }
}

TEST_CASE("conditioning slices the joint in place") {
  BeliefDiagram d = fixtures::chain2();
  JointTable j = beldi::enumerate_joint(d);
  beldi::condition_joint(j, 1, 0);  // X2 = t
  std::vector<double> m = beldi::marginal_from_joint(j, 0);
  CHECK(m[0] == doctest::Approx(7.0 / 19.0).epsilon(1e-12));
  CHECK(m[1] == doctest::Approx(12.0 / 19.0).epsilon(1e-12));

  // conditioning is idempotent
  beldi::condition_joint(j, 1, 0);
  CHECK(fixtures::linf(beldi::marginal_from_joint(j, 0), m) == 0.0);

  // contradictory second observation empties the joint
  CHECK(code_of([&] { beldi::condition_joint(j, 1, 1); }) == Errc::impossible_evidence);
}

TEST_CASE("absorbed tables enter as likelihood factors") {
  BeliefDiagram d = fixtures::chain2();
  beldi::absorb_evidence(d, fixtures::ev(d, "X2", "t"));
  JointTable j = beldi::enumerate_joint(d);
  REQUIRE(j.order == std::vector<NodeId>{0});
  std::vector<double> m = beldi::marginal_from_joint(j, 0);
  CHECK(m[0] == doctest::Approx(7.0 / 19.0).epsilon(1e-12));
}

TEST_CASE("oracle error paths") {
  BeliefDiagram d = fixtures::chain2();
  CHECK(code_of([&] { beldi::enumerate_joint(d, 2); }) == Errc::state_space_too_large);

  JointTable j = beldi::enumerate_joint(d);
  CHECK(code_of([&] { beldi::condition_joint(j, 99, 0); }) == Errc::unknown_node);
  CHECK(code_of([&] { beldi::condition_joint(j, 0, 9); }) == Errc::outcome_out_of_range);
  CHECK(code_of([&] { beldi::marginal_from_joint(j, 99); }) == Errc::unknown_node);

  BeliefDiagram z = fixtures::chain2();
  z.node(0).table.entries() = {0.0, 0.0};
  CHECK(code_of([&] { beldi::enumerate_joint(z); }) == Errc::impossible_evidence);
}
