#include <gtest/gtest.h>

#include <random>

#include "fuzzylim/certalg.hpp"
#include "fuzzylim/certio.hpp"
#include "support/brute.hpp"

using namespace fuzzylim;
using namespace fuzzylim::certalg;

namespace {

Scalar q(long n, long d = 1) { return Scalar(n, d); }

ModelRef table_model(const std::string& id, long lo, long hi, long den, const Expr& f) {
  PointMap m;
  for (long k = lo * den; k <= hi * den; ++k) m.emplace(Scalar(k, den), *f.evaluate(Scalar(k, den)));
  return make_model(id, DiscreteTable(m));
}

ModelRef identity_on_integers() { return table_model("id", -10, 10, 1, parse_expr("x")); }
ModelRef gen(const std::string& id, const char* text) { return make_model(id, Generator(parse_expr(text))); }

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::invariant_violation;  // sentinel: nothing thrown
}

}  // namespace

TEST(Check, Examples) {
  auto c = check(identity_on_integers(), q(3), q(1), q(1), q(3), Kind::strong);
  EXPECT_TRUE(verify(c));
  EXPECT_EQ(c.provenance.defect, q(1));
  EXPECT_EQ(c.provenance.method, "discrete");

  auto s = check(gen("sign", "sign(x)"), q(0), q(0), q(1), q(0), Kind::strong);
  EXPECT_TRUE(verify(s));
  EXPECT_EQ(s.provenance.method, "estimator");

  try {
    check(identity_on_integers(), q(3), q(1), q(1, 2), q(3), Kind::strong);
    FAIL();
  } catch (const ClaimRefuted& e) {
    EXPECT_EQ(e.code(), ErrorCode::claim_refuted);
    EXPECT_EQ(e.defect(), q(1));
  }
  EXPECT_EQ(code_of([] { check(identity_on_integers(), q(5), q(1, 2), q(1), q(5), Kind::strong); }),
            ErrorCode::no_admissible_sequence);
  EXPECT_EQ(code_of([] { check(nullptr, q(0), q(0), q(1), q(0), Kind::strong); }), ErrorCode::unknown_model);
}

TEST(Check, WeakKind) {
  auto c = check(identity_on_integers(), q(3), q(1), q(0), q(4), Kind::weak);
  EXPECT_TRUE(verify(c));
  EXPECT_EQ(code_of([] { check(identity_on_integers(), q(3), q(1), q(0), q(3), Kind::weak); }),
            ErrorCode::claim_refuted);
}

TEST(Verify, ForgedCertificateFails) {
  LimitCertificate forged{gen("sign", "sign(x)"), q(0), q(0), q(1, 2), q(0), Kind::strong, funlim::default_schedule(), {}};
  forged.provenance.rule = "checked";
  EXPECT_FALSE(verify(forged));
  forged.model = nullptr;
  EXPECT_EQ(code_of([&] { verify(forged); }), ErrorCode::unknown_model);
}

TEST(Widen, Examples) {
  auto halves = table_model("id-halves", -10, 10, 2, parse_expr("x"));
  auto c = check(halves, q(3), q(1), q(2), q(3), Kind::strong);
  auto w = widen(c, q(1, 2), q(3));
  EXPECT_EQ(w.q, q(1, 2));
  EXPECT_EQ(w.r, q(3));
  EXPECT_TRUE(verify(w));
  EXPECT_EQ(w.provenance.rule, "widen");
  EXPECT_EQ(code_of([&] { widen(c, q(2), q(2)); }), ErrorCode::invalid_widening);
  EXPECT_EQ(code_of([&] { widen(c, q(1), q(1)); }), ErrorCode::invalid_widening);

  auto weak = check(halves, q(3), q(1), q(2), q(3), Kind::weak);
  auto ww = widen(weak, q(2), q(2));
  EXPECT_TRUE(verify(ww));
  EXPECT_EQ(code_of([&] { widen(weak, q(1, 2), q(2)); }), ErrorCode::invalid_widening);
}

TEST(Combine, Examples) {
  auto sign = check(gen("sign", "sign(x)"), q(0), q(0), q(1), q(0), Kind::strong);
  auto five = check(gen("five", "5"), q(0), q(0), q(0), q(5), Kind::strong);
  auto sum = combine(sign, five, CombineOp::plus);
  EXPECT_EQ(sum.q, q(0));
  EXPECT_EQ(sum.r, q(1));
  EXPECT_EQ(sum.b, q(5));
  EXPECT_EQ(defect_of(sum), q(1));
  EXPECT_EQ(sum.model->id, "sum(sign, five)");

  auto zero = check(gen("zero", "0"), q(0), q(0), q(0), q(0), Kind::strong);
  for (auto op : {CombineOp::plus, CombineOp::minus}) {
    auto same = combine(sign, zero, op);
    EXPECT_EQ(same.r, sign.r);
    EXPECT_EQ(same.b, sign.b);
  }

  auto c = check(identity_on_integers(), q(3), q(1), q(1), q(3), Kind::strong);
  auto self = combine(c, c, CombineOp::minus);
  EXPECT_EQ(self.b, q(0));
  EXPECT_EQ(self.r, q(2));
  EXPECT_EQ(defect_of(self), q(0));

  auto elsewhere = check(identity_on_integers(), q(4), q(1), q(1), q(4), Kind::strong);
  EXPECT_EQ(code_of([&] { combine(c, elsewhere, CombineOp::plus); }), ErrorCode::incompatible_certificates);
  auto odd = table_model("odd", 20, 30, 1, parse_expr("x"));
  auto far = check(odd, q(25), q(1), q(1), q(25), Kind::strong);
  far.a = q(3);
  EXPECT_EQ(code_of([&] { combine(c, far, CombineOp::plus); }), ErrorCode::no_admissible_sequence);
}

TEST(Scale, Examples) {
  auto sign = check(gen("sign", "sign(x)"), q(0), q(0), q(1), q(0), Kind::strong);
  auto neg = scale(sign, q(-2));
  EXPECT_EQ(neg.r, q(2));
  EXPECT_EQ(neg.b, q(0));
  auto flat = scale(sign, q(0));
  EXPECT_EQ(flat.r, q(0));
  EXPECT_EQ(flat.b, q(0));
  auto c = check(identity_on_integers(), q(3), q(1), q(3), q(4), Kind::strong);
  auto half = scale(c, q(1, 2));
  EXPECT_EQ(half.q, q(1));
  EXPECT_EQ(half.r, q(3, 2));
  EXPECT_EQ(half.b, q(2));
  EXPECT_TRUE(verify(half));
}

TEST(Squeeze, Examples) {
  auto f = identity_on_integers();
  auto cf = check(f, q(3), q(1), q(1), q(3), Kind::strong);
  auto same = squeeze(cf, cf, f);
  EXPECT_TRUE(verify(same));

  auto g = table_model("lower", -10, 10, 1, parse_expr("x - abs(x - 3)"));
  auto h = table_model("upper", -10, 10, 1, parse_expr("x + abs(x - 3)"));
  auto cg = check(g, q(3), q(1), q(2), q(3), Kind::strong);
  auto ch = check(h, q(3), q(1), q(2), q(3), Kind::strong);
  auto out = squeeze(cg, ch, f);
  EXPECT_EQ(out.r, q(2));
  EXPECT_EQ(defect_of(out), q(1));
  EXPECT_EQ(code_of([&] { squeeze(ch, cg, f); }), ErrorCode::domination_failure);
  EXPECT_EQ(code_of([&] { squeeze(cg, cf, f); }), ErrorCode::incompatible_certificates);
}

TEST(Squeeze, GeneratorsAreCheckedOnSamples) {
  auto f = gen("f", "x * x");
  auto g = gen("g", "0 - abs(x)");
  auto h = gen("h", "abs(x)");
  auto cg = check(g, q(0), q(1, 2), q(1, 2) + q(1, 10), q(0), Kind::strong);
  auto ch = check(h, q(0), q(1, 2), q(1, 2) + q(1, 10), q(0), Kind::strong);
  EXPECT_TRUE(verify(squeeze(cg, ch, f)));
  auto wild = gen("wild", "2 * abs(x)");
  EXPECT_EQ(code_of([&] { squeeze(cg, ch, wild); }), ErrorCode::domination_failure);
}

TEST(MonotoneMapTest, EvaluatesInvertsAndRenders) {
  MonotoneMap g({q(0), q(2)}, {q(1), q(3), q(1, 2)}, q(1));
  EXPECT_EQ(g(q(-1)), q(0));
  EXPECT_EQ(g(q(1)), q(4));
  EXPECT_EQ(g(q(2)), q(7));
  EXPECT_EQ(g(q(4)), q(8));
  auto e = g.as_expr();
  for (long k = -12; k <= 12; ++k) {
    Scalar x(k, 3);
    EXPECT_EQ(e.evaluate(x), g(x));
    EXPECT_EQ(g.inverse(g(x)), x);
  }
  MonotoneMap down({q(1)}, {q(-1), q(-2)}, q(0));
  for (long k = -6; k <= 6; ++k) EXPECT_EQ(down.inverse(down(q(k, 2))), q(k, 2));
  EXPECT_EQ(code_of([] { MonotoneMap({}, {q(0)}, q(0)); }), ErrorCode::invalid_parameter);
  EXPECT_EQ(code_of([] { MonotoneMap({q(0)}, {q(1), q(-1)}, q(0)); }), ErrorCode::invalid_parameter);
}

TEST(ChangeOfVariable, Examples) {
  auto sign = check(gen("sign", "sign(x)"), q(0), q(0), q(1), q(0), Kind::strong);
  auto doubled = change_of_variable(sign, MonotoneMap::affine(q(2), q(0)));
  EXPECT_EQ(doubled.a, q(0));
  EXPECT_EQ(doubled.r, q(1));
  EXPECT_EQ(doubled.b, q(0));
  EXPECT_EQ(doubled.model->fn.evaluate(q(1, 4)), q(1));

  auto same = change_of_variable(sign, MonotoneMap::affine(q(1), q(0)));
  EXPECT_EQ(same.a, sign.a);
  EXPECT_EQ(same.r, sign.r);

  auto floor3 = check(gen("floor", "floor(x)"), q(3), q(0), q(1, 2), q(5, 2), Kind::strong);
  auto shifted = change_of_variable(floor3, MonotoneMap::affine(q(1), q(5)));
  EXPECT_EQ(shifted.a, q(-2));
  EXPECT_EQ(shifted.model->fn.evaluate(q(-21, 10)), q(2));
  EXPECT_TRUE(verify(shifted));

  auto bounded = MonotoneMap::affine(q(2), q(0), Interval(q(0), q(1)));
  EXPECT_EQ(code_of([&] { change_of_variable(floor3, bounded); }), ErrorCode::point_not_in_range);
}

TEST(ChangeOfVariable, TablesShrinkQBySlope) {
  auto halves = table_model("id-halves", -10, 10, 2, parse_expr("x"));
  auto c = check(halves, q(3), q(1), q(1), q(3), Kind::strong);
  auto out = change_of_variable(c, MonotoneMap::affine(q(2), q(1)));
  EXPECT_EQ(out.a, q(1));
  EXPECT_EQ(out.q, q(1, 2));
  EXPECT_TRUE(verify(out));
}

TEST(LowerBound, Examples) {
  auto floor3 = check(gen("floor", "floor(x)"), q(3), q(0), q(1, 2), q(5, 2), Kind::strong);
  auto claim = lower_bound(floor3, q(19, 10));
  EXPECT_TRUE(claim.holds);
  EXPECT_EQ(claim.level, "sampled");
  EXPECT_GT(claim.points, 0u);
  EXPECT_EQ(code_of([&] { lower_bound(floor3, q(2)); }), ErrorCode::bound_not_implied);

  auto c = check(identity_on_integers(), q(3), q(1), q(1), q(3), Kind::strong);
  auto on_table = lower_bound(c, q(1));
  EXPECT_TRUE(on_table.holds);
  EXPECT_EQ(on_table.points, 2u);
  EXPECT_EQ(on_table.level, "exhaustive");
}

TEST(Witness, BoundedVariationGivesFuzzyLimit) {
  auto c = fuzzy_convergence_witness(gen("floor", "floor(x)"), q(9, 10), q(1, 5));
  EXPECT_EQ(c.r, q(1));
  EXPECT_EQ(c.b, q(0));
  EXPECT_TRUE(verify(c));
  auto t = fuzzy_convergence_witness(identity_on_integers(), q(0), q(2));
  EXPECT_EQ(t.r, q(2));
  EXPECT_EQ(t.q, q(2));
}

TEST(Export, RoundTripsAndDetectsTampering) {
  auto sign = check(gen("sign", "sign(x)"), q(0), q(0), q(1), q(0), Kind::strong);
  auto five = check(gen("five", "5"), q(0), q(0), q(0), q(5), Kind::strong);
  auto derived = change_of_variable(scale(combine(sign, five, CombineOp::plus), q(-1, 2)),
                                    MonotoneMap::affine(q(3), q(0)));
  std::string text = certio::export_text(derived);
  EXPECT_EQ(certio::export_text(derived), text);
  auto report = certio::replay_text(text);
  ASSERT_TRUE(report.ok());
  EXPECT_EQ(report.entries.size(), 5u);
  EXPECT_EQ(report.root->r, derived.r);
  EXPECT_EQ(report.root->b, derived.b);

  std::string tampered = text;
  auto at = tampered.find("r: 1/2");
  ASSERT_NE(at, std::string::npos);
  tampered.replace(at, 6, "r: 1/4");
  auto bad = certio::replay_text(tampered);
  EXPECT_FALSE(bad.ok());
}

// ---- properties ----

namespace {

DiscreteTable random_grid_table(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> ys(-16, 16);
  std::bernoulli_distribution keep(0.8);
  PointMap m;
  for (int k = -8; k <= 8; ++k)
    if (keep(rng)) m.emplace(Scalar(k, 2), Scalar(ys(rng), 4));
  if (m.empty()) m.emplace(Scalar(0), Scalar(0));
  return DiscreteTable(m);
}

std::optional<LimitCertificate> random_checked(std::mt19937_64& rng, const ModelRef& f, const Scalar& a,
                                               const Scalar& qq) {
  if (funlim::admissible_points(f->fn.table(), a, qq).empty()) return std::nullopt;
  Scalar b = fuzzylim::testing::random_scalar(rng, -4, 4, 4);
  Scalar d = funlim::qr_defect_discrete(f->fn.table(), a, qq, b);
  return check(f, a, qq, d + fuzzylim::testing::random_scalar(rng, 0, 1, 4), b, Kind::strong);
}

}  // namespace

TEST(CertProperties, ThousandDerivedCertificatesVerify) {
  std::mt19937_64 rng(51);
  int derived_count = 0;
  std::map<std::string, int> by_rule;
  for (int round = 0; derived_count < 1000; ++round) {
    auto f = make_model("f", random_grid_table(rng));
    auto g = make_model("g", random_grid_table(rng));
    Scalar a = Scalar(std::uniform_int_distribution<int>(-4, 4)(rng), 2);
    Scalar qq = Scalar(std::uniform_int_distribution<int>(1, 4)(rng), 2);
    auto c1 = random_checked(rng, f, a, qq);
    auto c2 = random_checked(rng, g, a, qq - Scalar(std::uniform_int_distribution<int>(0, 1)(rng), 2));
    if (!c1 || !c2) continue;
    std::vector<LimitCertificate> outs;
    try {
      switch (round % 6) {
        case 0: outs.push_back(combine(*c1, *c2, CombineOp::plus)); break;
        case 1: outs.push_back(combine(*c1, *c2, CombineOp::minus)); break;
        case 2: outs.push_back(scale(*c1, fuzzylim::testing::random_scalar(rng, -3, 3, 4))); break;
        case 3: {
          Scalar u = c1->q * fuzzylim::testing::random_scalar(rng, 0, 1, 2);
          if (funlim::admissible_points(f->fn.table(), a, u).empty()) u = c1->q;
          outs.push_back(widen(*c1, u, c1->r + fuzzylim::testing::random_scalar(rng, 0, 2, 4)));
          break;
        }
        case 4: {
          // Bracket f between f - s and f + t, certify both at a common r.
          Scalar s = fuzzylim::testing::random_scalar(rng, 0, 1, 4), t = fuzzylim::testing::random_scalar(rng, 0, 1, 4);
          PointMap lower, upper;
          for (const auto& [x, y] : f->fn.table().entries()) lower.emplace(x, y - s), upper.emplace(x, y + t);
          auto lm = make_model("lo", DiscreteTable(lower));
          auto um = make_model("hi", DiscreteTable(upper));
          Scalar b = c1->b;
          Scalar r = std::max(funlim::qr_defect_discrete(lm->fn.table(), a, c1->q, b),
                              funlim::qr_defect_discrete(um->fn.table(), a, c1->q, b));
          outs.push_back(squeeze(check(lm, a, c1->q, r, b, Kind::strong), check(um, a, c1->q, r, b, Kind::strong), f));
          break;
        }
        default: {
          Scalar k = fuzzylim::testing::random_scalar(rng, 1, 4, 2) * (rng() % 2 ? 1 : -1);
          Scalar h = fuzzylim::testing::random_scalar(rng, -2, 2, 2);
          outs.push_back(change_of_variable(*c1, MonotoneMap::affine(k, h)));
          break;
        }
      }
      // One more level of derivation on top.
      outs.push_back(scale(outs.back(), q(-1)));
    } catch (const Error& e) {
      // Narrowed derivations may leave no admissible point; anything else is
      // a soundness failure.
      ASSERT_EQ(e.code(), ErrorCode::no_admissible_sequence) << e.what();
      continue;
    }
    for (const auto& c : outs) {
      ASSERT_TRUE(verify(c));
      ASSERT_LE(defect_of(c), c.r);
      ++by_rule[c.provenance.rule];
      ++derived_count;
    }
  }
  EXPECT_GE(by_rule["combine-plus"], 50);
  EXPECT_GE(by_rule["squeeze"], 50);
  EXPECT_GE(by_rule["change-of-variable"], 50);
}

TEST(CertProperties, CertifiedValuesLieInShortInterval) {
  std::mt19937_64 rng(52);
  for (int t = 0; t < 150; ++t) {
    auto f = make_model("f", random_grid_table(rng));
    Scalar a = Scalar(std::uniform_int_distribution<int>(-4, 4)(rng), 2);
    Scalar qq = Scalar(std::uniform_int_distribution<int>(1, 4)(rng), 2);
    if (funlim::admissible_points(f->fn.table(), a, qq).empty()) continue;
    Scalar r = fuzzylim::testing::random_scalar(rng, 0, 4, 4);
    std::optional<Scalar> lo, hi;
    for (const auto& b : fuzzylim::testing::scalar_grid(q(-6), q(1, 8), 97)) {
      try {
        check(f, a, qq, r, b, Kind::strong);
        if (!lo) lo = b;
        hi = b;
      } catch (const ClaimRefuted&) {
      }
    }
    if (lo) {
      EXPECT_LE(*hi - *lo, 2 * r);
      EXPECT_LE(*hi - *lo, 2 * qq + 2 * r);
    }
  }
}

TEST(CertProperties, ZeroFuzzinessPinsClassicalLimits) {
  for (const char* text : {"floor(x)", "7", "sign(x - 1)", "floor(2 * x + 1/2) / 2"}) {
    auto f = gen("f", text);
    std::vector<Scalar> values;
    for (const auto& b : fuzzylim::testing::scalar_grid(q(-3), q(1, 4), 41)) {
      try {
        check(f, q(5, 2), q(0), q(0), b, Kind::strong);
        values.push_back(b);
      } catch (const ClaimRefuted&) {
      }
    }
    ASSERT_EQ(values.size(), 1u) << text;
    EXPECT_EQ(values.front(), *f->fn.evaluate(q(5, 2))) << text;
  }
}

TEST(CertProperties, ExportReplayOnRandomDerivations) {
  std::mt19937_64 rng(53);
  int done = 0;
  while (done < 60) {
    auto f = make_model("f", random_grid_table(rng));
    auto g = make_model("g", random_grid_table(rng));
    Scalar a = Scalar(std::uniform_int_distribution<int>(-4, 4)(rng), 2);
    auto c1 = random_checked(rng, f, a, q(1));
    auto c2 = random_checked(rng, g, a, q(1));
    if (!c1 || !c2) continue;
    LimitCertificate c = combine(*c1, *c2, done % 2 ? CombineOp::plus : CombineOp::minus);
    c = change_of_variable(scale(c, q(3, 2)), MonotoneMap::affine(q(-1), q(1, 2)));
    auto report = certio::replay_text(certio::export_text(c));
    ASSERT_TRUE(report.ok());
    EXPECT_EQ(report.root->a, c.a);
    EXPECT_EQ(report.root->model->fn, c.model->fn);
    ++done;
  }
}
