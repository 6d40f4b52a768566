#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "brute_force.hpp"
#include "fixtures.hpp"
#include "hadamard/conjugacy.hpp"
#include "hadamard/errors.hpp"

using namespace hadamard;

namespace {

const Alphabet kXY("xy");

ConjugacyInstance instance(std::vector<std::string> a, std::vector<std::string> b) {
  ConjugacyInstance inst;
  inst.alphabet = kXY;
  for (const auto& s : a) inst.a.push_back(kXY.parse(s));
  for (const auto& s : b) inst.b.push_back(kXY.parse(s));
  return inst;
}

ConjugacyInstance random_conjugate_instance(std::mt19937_64& rng, int max_n, int max_a,
                                            int max_g) {
  std::uniform_int_distribution<int> n(1, max_n);
  ConjugacyInstance inst;
  inst.alphabet = kXY;
  const Word g = fixtures::random_word(rng, 2, max_g);
  for (int i = n(rng); i > 0; --i) {
    inst.a.push_back(fixtures::random_word(rng, 2, max_a));
    inst.b.push_back(g.inverse() * inst.a.back() * g);
  }
  return inst;
}

}  // namespace

TEST_CASE("verify") {
  auto same = instance({"xy", "x"}, {"xy", "x"});
  CHECK(verify(Word(2), same).ok);

  const auto conj = instance({"x"}, {"Yxy"});
  const auto v = verify(kXY.parse("y"), conj);
  CHECK(v.ok);
  REQUIRE(v.transcript.size() == 1);
  CHECK(v.transcript[0].conjugate == kXY.parse("Yxy"));
  CHECK(v.transcript[0].equal);

  const auto apart = instance({"x"}, {"y"});
  BallEnumerator ball(2, 6);
  int checked = 0;
  while (auto g = ball.next()) {
    CHECK(!verify(*g, apart).ok);
    ++checked;
  }
  CHECK(checked == 1457);

  CHECK_THROWS_AS(verify(Word(3), apart), AlphabetMismatch);
  CHECK_THROWS_AS(verify(Word(2), instance({"x"}, {})), InvalidStructure);
}

TEST_CASE("search_radius") {
  auto inst = instance({"x"}, {"x"});
  inst.search.policy = RadiusPolicy::Bound;
  inst.search.cstar = 1.0;
  inst.search.c = 0.0;
  CHECK(search_radius(inst) == 2);

  auto ten = instance({"xyxyx"}, {"yxyxy"});
  ten.search.policy = RadiusPolicy::Bound;
  ten.search.cstar = 0.5;
  ten.search.c = 3.0;
  CHECK(search_radius(ten) == 8);
  ten.search.max_radius = 5;
  CHECK(search_radius(ten) == 5);

  auto trivial = instance({""}, {""});
  trivial.search.policy = RadiusPolicy::Bound;
  trivial.search.cstar = 7.0;
  trivial.search.c = 0.0;
  CHECK(search_radius(trivial) == 0);
  const auto cert = solve(trivial);
  CHECK(cert.verdict == Verdict::Conjugate);
  CHECK(cert.enumerated == 1);

  inst.search.c.reset();
  CHECK_THROWS_AS(search_radius(inst), ConfigError);

  auto inc = instance({"x"}, {"x"});
  inc.search.max_radius = 10;
  std::vector<int> schedule{search_radius(inc)};
  for (int i = 0; i < 5; ++i) schedule.push_back(search_radius(inc, schedule.back()));
  CHECK(schedule == std::vector<int>{1, 2, 4, 8, 10, 10});
}

TEST_CASE("solve examples") {
  const auto same = solve(instance({"xyX", "yy"}, {"xyX", "yy"}));
  CHECK(same.verdict == Verdict::Conjugate);
  CHECK(same.g->is_identity());

  const auto one = solve(instance({"x"}, {"Yxy"}));
  CHECK(one.verdict == Verdict::Conjugate);
  CHECK(*one.g == kXY.parse("y"));

  const auto both = instance({"x", "y"}, {"x", "y"});
  const auto cert = solve(both);
  CHECK(cert.verdict == Verdict::Conjugate);
  CHECK(cert.g->is_identity());
  const auto all = brute::all_conjugators(both, 6);
  REQUIRE(all.size() == 1);
  CHECK(all[0].is_identity());

  const auto apart = solve(instance({"x"}, {"y"}));
  CHECK(apart.verdict == Verdict::NotConjugate);
  CHECK(!apart.proof.empty());
}

TEST_CASE("solve without an exact oracle stops at the radius") {
  // Integral matrices generating a free group: distinct words stay distinct.
  const auto rho = Representation::matrices(
      {MatrixIsometry{{1.0, 2.0, 0.0, 1.0}}, MatrixIsometry{{1.0, 0.0, 2.0, 1.0}}});
  auto inst = instance({"x"}, {"y"});
  inst.rho = rho;
  inst.word_problem = WordProblem::Matrix;
  inst.search.max_radius = 4;
  const auto cert = solve(inst);
  CHECK(cert.verdict == Verdict::NotConjugateUpTo);
  CHECK(cert.radius == 4);
  CHECK(cert.enumerated == ball_size(2, 4));
  CHECK_THROWS_AS(free_group_oracle(inst), CapabilityError);

  auto conj = instance({"xy"}, {"yx"});
  conj.rho = rho;
  conj.word_problem = WordProblem::Matrix;
  const auto found = solve(conj);
  CHECK(found.verdict == Verdict::Conjugate);
  CHECK(*found.g == kXY.parse("x"));
}

TEST_CASE("matrix word problem sees relations the free group does not") {
  // Both generators are -I, which is the identity of PSL(2, R).
  const auto rho = Representation::matrices(
      {MatrixIsometry{{-1.0, 0.0, 0.0, -1.0}}, MatrixIsometry{{-1.0, 0.0, 0.0, -1.0}}});
  auto inst = instance({"x"}, {"y"});
  inst.rho = rho;
  inst.word_problem = WordProblem::Matrix;
  const auto cert = solve(inst);
  CHECK(cert.verdict == Verdict::Conjugate);
  CHECK(cert.g->is_identity());
  REQUIRE(cert.transcript.size() == 1);
  CHECK(cert.transcript[0].equal);
  CHECK(cert.transcript[0].conjugate == kXY.parse("x"));

  // Non-integral entries go through the tolerance comparison.
  const double c = std::cos(0.3), s = std::sin(0.3);
  const auto rot = Representation::matrices(
      {MatrixIsometry{{c, -s, s, c}}, MatrixIsometry{{c, -s, s, c}}});
  inst.rho = rot;
  CHECK(verify(Word(2), inst).ok);
}

TEST_CASE("budget") {
  auto inst = instance({"x"}, {"y"});
  inst.search.budget = 100;
  try {
    solve(inst);
    FAIL("expected BudgetExceeded");
  } catch (const BudgetExceeded& e) {
    // ball(2, 2) = 17 fits, ball(2, 4) = 161 does not.
    CHECK(e.radius_completed == 2);
    CHECK(e.enumerated == 17);
  }
}

TEST_CASE("free_group_oracle examples") {
  const auto rot = free_group_oracle(instance({"xy"}, {"yx"}));
  CHECK(rot.verdict == Verdict::Conjugate);
  CHECK(verify(*rot.g, instance({"xy"}, {"yx"})).ok);
  CHECK(free_group_oracle(instance({"x"}, {"y"})).verdict == Verdict::NotConjugate);
  CHECK(free_group_oracle(instance({"x", ""}, {"x", "y"})).verdict == Verdict::NotConjugate);
  CHECK(free_group_oracle(instance({"", ""}, {"", ""})).verdict == Verdict::Conjugate);
  // Conjugate one at a time but not simultaneously.
  CHECK(free_group_oracle(instance({"x", "y"}, {"x", "Xyx"})).verdict == Verdict::Conjugate);
  CHECK(free_group_oracle(instance({"x", "y"}, {"x", "Yxy"})).verdict == Verdict::NotConjugate);
}

TEST_CASE("cyclic reduction and primitive roots") {
  const auto cr = cyclic_reduction(kXY.parse("xyxyX"));
  CHECK(cr.conjugator == kXY.parse("x"));
  CHECK(cr.core == kXY.parse("yxy"));
  CHECK(cyclic_reduction(Word(2)).core.is_identity());
  CHECK(primitive_root(kXY.parse("xyxy")) == kXY.parse("xy"));
  CHECK(primitive_root(kXY.parse("Xyyyx")) == kXY.parse("Xyx"));
  CHECK(primitive_root(kXY.parse("xxy")) == kXY.parse("xxy"));
  CHECK(primitive_root(kXY.parse("XXX")) == kXY.parse("X"));

  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 500; ++trial) {
    const Word w = fixtures::random_word(rng, 2, 8);
    const auto c = cyclic_reduction(w);
    CHECK(c.conjugator * c.core * c.conjugator.inverse() == w);
    const auto l = c.core.letters();
    if (l.size() > 1) CHECK(l.front() != -l.back());
    const Word r = primitive_root(w);
    bool is_power = w.is_identity();
    for (long k = 1; k <= 8 && !is_power; ++k) is_power = r.power(k) == w;
    CHECK(is_power);
  }
}

TEST_CASE("oracle window against exhaustive scan") {
  std::mt19937_64 rng(77);
  int conjugate = 0;
  for (int trial = 0; trial < 300; ++trial) {
    auto inst = random_conjugate_instance(rng, 2, 4, 3);
    if (trial % 3 == 0) inst.b[0] = fixtures::random_word(rng, 2, 4);
    const auto d = brute::window_discrepancy(inst, 6);
    CAPTURE(trial);
    CHECK(d.empty());
    if (free_group_oracle(inst).verdict == Verdict::Conjugate) ++conjugate;
  }
  CHECK(conjugate > 150);
  // Commuting lists have infinitely many conjugators.
  CHECK(brute::window_discrepancy(instance({"xy", "xyxy"}, {"yx", "yxyx"}), 6).empty());
  CHECK(brute::window_discrepancy(instance({"xyX"}, {"yyY"}), 6).empty());
}

TEST_CASE("solve agrees with the oracle and returns a shortest conjugator") {
  std::mt19937_64 rng(1234);
  for (int trial = 0; trial < 200; ++trial) {
    auto inst = random_conjugate_instance(rng, 3, 5, 4);
    if (trial % 4 == 0) inst.b.back() = fixtures::random_word(rng, 2, 5);
    const auto cert = solve(inst);
    const auto oracle = free_group_oracle(inst);
    CAPTURE(trial);
    CHECK(cert.verdict == oracle.verdict);
    if (cert.verdict != Verdict::Conjugate) continue;
    CHECK(verify(*cert.g, inst).ok);
    CHECK(verify(*oracle.g, inst).ok);
    const auto all = brute::all_conjugators(inst, static_cast<int>(cert.g->length()));
    REQUIRE(!all.empty());
    CHECK(all.front() == *cert.g);
  }
}

TEST_CASE("parallel solve matches serial") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 60; ++trial) {
    auto inst = random_conjugate_instance(rng, 2, 5, 5);
    const auto serial = solve(inst);
    inst.search.threads = 3;
    const auto parallel = solve(inst);
    CHECK(serial.verdict == parallel.verdict);
    CHECK(serial.g == parallel.g);
    CHECK(serial.enumerated == parallel.enumerated);
    CHECK(serial.radius == parallel.radius);
  }
}

TEST_CASE("conjugating the A list translates the conjugator") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    const auto inst = random_conjugate_instance(rng, 2, 4, 3);
    const auto cert = solve(inst);
    REQUIRE(cert.verdict == Verdict::Conjugate);
    const Word h = fixtures::random_word(rng, 2, 2);
    auto moved = inst;
    for (auto& w : moved.a) w = h * w * h.inverse();
    CHECK(verify(h * *cert.g, moved).ok);
  }
}

TEST_CASE("orbit_bound_report") {
  auto inst = instance({"xy", "X"}, {"yx", "Yxy"});
  inst.rho = Representation::free_on_cayley_tree(2);
  const Point root = CayleyPoint{Word(2), 0, 0.0};
  const auto free = orbit_bound_report(inst, root, kXY.parse("x"));
  CHECK(free.orbit_sum == static_cast<double>(free.word_sum));
  CHECK(free.word_sum == 8);
  REQUIRE(free.ratio.has_value());
  CHECK(*free.ratio == 1.0 / 8.0);

  auto trivial = instance({""}, {""});
  trivial.rho = Representation::free_on_cayley_tree(2);
  const auto t = orbit_bound_report(trivial, root, Word(2));
  CHECK(t.orbit_sum == 0.0);
  CHECK(!t.ratio.has_value());

  auto hyp = instance({"xy"}, {"yx"});
  hyp.rho = Representation::matrices(
      {MatrixIsometry{{1.0, 2.0, 0.0, 1.0}}, MatrixIsometry{{1.0, 0.0, 2.0, 1.0}}});
  const auto h = orbit_bound_report(hyp, HyperbolicPoint{{1.0, 0.0, 0.0}}, kXY.parse("x"));
  REQUIRE(h.ratio.has_value());
  CHECK(std::isfinite(*h.ratio));
  CHECK(*h.ratio > 0.0);

  CHECK_THROWS_AS(orbit_bound_report(instance({"x"}, {"x"}), root), InvalidStructure);
}
