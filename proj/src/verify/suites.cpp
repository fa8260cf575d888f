#include "ultradiff/verify/suites.hpp"

#include <chrono>
#include <functional>
#include <map>

#include "ultradiff/diff/checks.hpp"
#include "ultradiff/gallery/thm41.hpp"
#include "ultradiff/probe/probe.hpp"

namespace ultradiff {

namespace {

constexpr std::size_t kMaxListedFailures = 25;

struct RationalPhi {
  std::vector<mpq_class> x;
  std::vector<std::vector<mpq_class>> v;
  std::vector<mpq_class> t;
  PhiPoint lift(const Field& f) const { return PhiPoint::from_rationals(f, x, v, t); }
};

RationalPhi random_phi(const Generators& gen, Rng& rng, std::size_t m, std::size_t n,
                       bool nonzero_directions = false) {
  RationalPhi r;
  r.x = gen.vector(rng, m);
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<mpq_class> d;
    for (std::size_t i = 0; i < m; ++i) d.push_back(nonzero_directions ? gen.nonzero(rng) : gen.any(rng));
    r.v.push_back(d);
    r.t.push_back(gen.nonzero(rng));
  }
  return r;
}

std::vector<mpq_class> random_upsilon_flat(const Generators& gen, Rng& rng, std::size_t m,
                                           std::size_t order) {
  while (true) {
    std::vector<mpq_class> flat(upsilon_flat_size(m, order));
    for (auto& q : flat) q = gen.nonzero(rng);
    if (upsilon_point_valid(m, order, flat)) return flat;
  }
}

// x^n added to the first output of u: its order-n quotient is n! times the
// product of the directions, so the perturbation is always visible.
MultiPolynomial perturbed(const MultiPolynomial& u, std::size_t n) {
  Exponent e(u.inputs(), 0);
  e[0] = static_cast<unsigned>(n);
  RationalVector c(u.outputs(), mpq_class(0));
  c[0] = 1;
  MultiPolynomial out = u;
  out.add_term(e, c);
  return out;
}

class Tally {
 public:
  explicit Tally(SuiteResult& r) : r_(r) {}

  void identity(const std::string& label, const std::function<PadicVector()>& lhs,
                const std::function<PadicVector()>& rhs) {
    ++r_.samples;
    std::optional<PadicVector> a, b;
    try {
      a = lhs();
      b = rhs();
    } catch (const PrecisionExhausted&) {
      a.reset();
      b.reset();
    }
    r_.values.push_back(a);
    r_.values.push_back(b);
    if (!a || !b) {
      ++r_.indeterminate;
      return;
    }
    if (!a->agrees_with(*b)) fail(label);
  }

  void report(const std::string& label, const CheckReport& rep) {
    for (const auto& s : rep.samples) {
      ++r_.samples;
      if (s.indeterminate) {
        ++r_.indeterminate;
        r_.values.emplace_back();
        r_.values.emplace_back();
        continue;
      }
      r_.values.emplace_back(s.lhs);
      r_.values.emplace_back(s.rhs);
      if (!s.ok) fail(label + "/" + rep.identity);
    }
  }

  void fail(const std::string& label) {
    ++r_.failures;
    if (r_.failing_checks.size() < kMaxListedFailures) r_.failing_checks.push_back(label);
  }

 private:
  SuiteResult& r_;
};

std::string label(const std::string& suite, std::size_t index, const std::string& extra = "") {
  std::string s = suite + "[" + std::to_string(index) + "]";
  if (!extra.empty()) s += "/" + extra;
  return s;
}

void leibniz_suite(SuiteResult& r, const SuiteOptions& o) {
  const Field& F = o.field;
  Generators gen{F.p()};
  Rng rng(o.seed);
  Tally tally(r);
  for (std::size_t i = 0; i < 100; ++i) {
    MultiPolynomial f = gen.univariate(rng, 4);
    MultiPolynomial g = gen.univariate(rng, 4);
    for (std::size_t n = 1; n <= 3; ++n) {
      PhiPoint pt = random_phi(gen, rng, 1, n, true).lift(F);
      MultiPolynomial product = f * g;
      if (o.inject_fault && i == 0) product = perturbed(product, n);
      tally.identity(label("leibniz", i, "n=" + std::to_string(n)),
                     [&] { return phi(FunctionExpr::poly(product), pt); },
                     [&] { return leibniz_phi(FunctionExpr::poly(f), FunctionExpr::poly(g), pt); });
    }
  }
  r.details = {{"pairs", 100}, {"orders", {1, 2, 3}}, {"max_degree", 4}};
}

void closed_form_suite(SuiteResult& r, const SuiteOptions& o) {
  const Field& F = o.field;
  Generators gen{F.p()};
  Rng rng(o.seed + 1);
  Tally tally(r);
  for (std::size_t i = 0; i < 200; ++i) {
    MultiPolynomial u = gen.univariate(rng, 4);
    if (rng.coin()) {
      std::vector<RationalVector> coeffs;
      unsigned degree = static_cast<unsigned>(rng.range(0, 4));
      for (unsigned d = 0; d <= degree; ++d) coeffs.push_back({gen.unit_bounded(rng), gen.unit_bounded(rng)});
      u = MultiPolynomial::univariate_vector(coeffs);
    }
    std::size_t n = static_cast<std::size_t>(rng.range(1, 3));
    PhiPoint pt = random_phi(gen, rng, 1, n, true).lift(F);
    MultiPolynomial closed = (o.inject_fault && i == 0) ? perturbed(u, n) : u;
    tally.identity(label("closed_form.phi", i, "n=" + std::to_string(n)),
                   [&] { return phi_poly_closed(closed, pt); },
                   [&] { return phi(FunctionExpr::poly(u), pt); });
  }
  for (std::size_t i = 0; i < 100; ++i) {
    MultiPolynomial u = gen.univariate(rng, 4);
    std::size_t order = 1 + i % 2;
    UpsilonPoint pt =
        UpsilonPoint::from_flat(1, order, PadicVector::lift(F, random_upsilon_flat(gen, rng, 1, order)));
    tally.identity(label("closed_form.upsilon", i, "q=" + std::to_string(order)),
                   [&] { return upsilon_poly_closed_low(u, pt); },
                   [&] { return upsilon(FunctionExpr::poly(u), pt); });
  }
  r.details = {{"phi_cases", 200}, {"upsilon_cases", 100}, {"upsilon_orders", {1, 2}}};
}

void symmetry_scaling_suite(SuiteResult& r, const SuiteOptions& o) {
  const Field& F = o.field;
  Generators gen{F.p()};
  Rng rng(o.seed + 2);
  Tally tally(r);
  for (std::size_t i = 0; i < 100; ++i) {
    std::size_t m = static_cast<std::size_t>(rng.range(1, 2));
    FunctionExpr f = FunctionExpr::poly(gen.poly(rng, m, 4));
    std::size_t n = 2 + i % 2;
    tally.report(label("symmetry", i), transposition_symmetry_check(f, random_phi(gen, rng, m, n).lift(F)));
  }
  for (std::size_t i = 0; i < 100; ++i) {
    std::size_t m = static_cast<std::size_t>(rng.range(1, 2));
    FunctionExpr f = FunctionExpr::poly(gen.poly(rng, m, 4));
    PhiPoint pt = random_phi(gen, rng, m, 1).lift(F);
    PadicScalar a = F.lift(gen.nonzero(rng));
    PadicScalar T = F.lift(gen.exact_nonzero(rng));
    tally.report(label("scaling", i), scaling_identity_check(f, pt, a, T));
  }
  r.details = {{"transposition_cases", 100}, {"transposition_orders", {2, 3}}, {"scaling_cases", 100}};
}

void sup_bound_suite(SuiteResult& r, const SuiteOptions& o) {
  Rng rng(o.seed + 3);
  Corpus corpus = Corpus::standard(o.field.p());
  json per_order = json::array();
  std::map<std::size_t, mpq_class> worst;
  for (std::size_t q = 1; q <= 3; ++q) worst[q] = 0;
  Tally tally(r);
  for (std::size_t i = 0; i < corpus.polys.size(); ++i) {
    for (std::size_t q = 1; q <= 3; ++q) {
      std::vector<PadicVector> values;
      SupBoundReport rep = upsilon_sup_bound_check(corpus.polys[i], q, 17, o.field, rng, &values);
      r.samples += rep.samples;
      r.indeterminate += rep.indeterminate;
      for (std::size_t k = 0; k < rep.violations; ++k) tally.fail(label("sup_bound", i, "q=" + std::to_string(q)));
      for (auto& v : values) {
        if (v.dim() == 0)
          r.values.emplace_back();
        else
          r.values.emplace_back(std::move(v));
      }
      if (rep.bound > 0) worst[q] = std::max(worst[q], mpq_class(rep.max_attained / rep.bound));
    }
  }
  for (const auto& [q, w] : worst) per_order.push_back({{"order", q}, {"max_ratio_to_bound", rational_to_json(w)}});
  r.details = {{"corpus", corpus.polys.size()}, {"samples_per_case", 17}, {"orders", per_order}};
}

void restriction_suite(SuiteResult& r, const SuiteOptions& o) {
  const Field& F = o.field;
  Generators gen{F.p()};
  Rng rng(o.seed + 4);
  Corpus corpus = Corpus::standard(F.p());
  Tally tally(r);
  for (std::size_t i = 0; i < corpus.polys.size(); ++i) {
    FunctionExpr f = FunctionExpr::poly(corpus.polys[i]);
    for (std::size_t n = 1; n <= 3; ++n)
      for (int s = 0; s < 4; ++s) {
        PhiPoint pt = random_phi(gen, rng, corpus.polys[i].inputs(), n).lift(F);
        tally.identity(label("restriction", i, "n=" + std::to_string(n)),
                       [&] { return upsilon(f, embed_phi_point(pt)); }, [&] { return phi(f, pt); });
      }
  }
  r.details = {{"corpus", corpus.polys.size()}, {"orders", {1, 2, 3}}, {"points_per_order", 4}};
}

void chain_suite(SuiteResult& r, const SuiteOptions& o) {
  const Field& F = o.field;
  Generators gen{F.p()};
  Rng rng(o.seed + 5);
  Tally tally(r);
  for (std::size_t i = 0; i < 50; ++i) {
    std::size_t m = static_cast<std::size_t>(rng.range(1, 2));
    FunctionExpr f = FunctionExpr::poly(gen.poly(rng, m, 3));
    Curve u = Curve::polynomial(gen.curve_coefficients(rng, m, 3));
    FunctionExpr composed = compose(f, u);
    for (std::size_t n = 1; n <= 2; ++n) {
      PhiPoint pt = random_phi(gen, rng, 1, n).lift(F);
      tally.identity(label("chain", i, "n=" + std::to_string(n)), [&] { return chain_phi_low(f, u, n, pt); },
                     [&] { return phi(composed, pt); });
    }
  }
  r.details = {{"pairs", 50}, {"orders", {1, 2}}};
}

void rank_suite(SuiteResult& r, const SuiteOptions& o) {
  const Field& F = o.field;
  Generators gen{F.p()};
  Rng rng(o.seed + 6);
  Corpus corpus = Corpus::standard(F.p());
  Tally tally(r);
  json ranks = json::array();
  for (std::size_t i = 0; i < corpus.polys.size(); ++i) {
    std::size_t b = corpus.polys[i].inputs();
    FunctionExpr f = FunctionExpr::poly(corpus.polys[i]);
    for (std::size_t n = 1; n <= 2; ++n) {
      std::size_t bound = directional_span_bound(b, n);
      std::vector<RankSample> grid;
      for (std::size_t s = 0; s < bound + 3; ++s) {
        RankSample sample;
        sample.x = gen.vector(rng, b);
        for (std::size_t k = 0; k < n; ++k) sample.increments.push_back(gen.nonzero(rng));
        grid.push_back(sample);
      }
      ++r.samples;
      long rank = -1;
      try {
        rank = static_cast<long>(directional_span_rank(f, n, grid, F));
      } catch (const IndeterminateRank&) {
        ++r.indeterminate;
      } catch (const PrecisionExhausted&) {
        ++r.indeterminate;
      }
      r.integers.push_back(rank);
      ranks.push_back({{"function", i}, {"b", b}, {"n", n}, {"rank", rank}, {"bound", bound}});
      if (rank < 0) continue;
      std::string where = "b=" + std::to_string(b) + ",n=" + std::to_string(n);
      if (static_cast<std::size_t>(rank) > bound) tally.fail(label("rank", i, where + "/bound"));
      if (b == 1 && n == 1 && rank != 1) tally.fail(label("rank", i, where + "/exactly_one"));
    }
  }
  r.details = {{"ranks", ranks}};
}

void thm41_suite(SuiteResult& r, const SuiteOptions& o) {
  const Field& F = o.field;
  Generators gen{F.p()};
  Rng rng(o.seed + 7);
  Tally tally(r);
  CounterexampleF cf;

  WitnessReport w = discontinuity_witness(cf, F, 10);
  auto as_vector = [](const std::optional<PadicScalar>& s) -> std::optional<PadicVector> {
    if (!s) return std::nullopt;
    return PadicVector::scalar(*s);
  };
  if (w.points.size() != 10) tally.fail("thm41/witness/count");
  for (const auto& pt : w.points) {
    ++r.samples;
    r.values.push_back(as_vector(pt.value));
    r.values.push_back(as_vector(pt.shifted_value));
    if (!pt.value || !pt.shifted_value) {
      ++r.indeterminate;
      continue;
    }
    if (pt.value->norm() != 1) tally.fail(label("thm41.witness", pt.k, "value"));
    if (!pt.shifted_value->is_zero()) tally.fail(label("thm41.witness", pt.k, "shifted"));
  }
  if (!w.certifies_discontinuity()) tally.fail("thm41/witness/certificate");
  json witness_norms = json::array();
  for (const auto& pt : w.points)
    witness_norms.push_back({{"k", pt.k}, {"x", rational_to_json(pt.x_norm)}, {"y", rational_to_json(pt.y_norm)}});

  for (std::size_t i = 0; i < 100; ++i) {
    ++r.samples;
    PadicVector x = PadicVector::lift(F, {gen.any(rng)});
    PadicScalar v = thm41_eval(cf, x, F.zero());
    r.values.emplace_back(PadicVector::scalar(v));
    if (!v.is_exact_zero()) tally.fail(label("thm41.axis", i));
  }

  std::size_t flat_curves = 0, clean_curves = 0;
  json flatness = json::array();
  for (const auto& nc : default_flatness_curves(cf.family.m)) {
    FlatnessReport fr = curve_flatness_check(cf, nc.curve, 0, 2, 20, F, rng);
    for (const auto& s : fr.samples) {
      ++r.samples;
      r.values.push_back(as_vector(s.value));
    }
    r.indeterminate += fr.indeterminate;
    for (std::size_t k = 0; k < fr.violations; ++k) tally.fail("thm41.flatness/" + nc.name);
    if (fr.passed()) ++flat_curves;
    if (fr.violations == 0) ++clean_curves;
    flatness.push_back({{"curve", nc.name}, {"passed", fr.passed()}, {"indeterminate", fr.indeterminate}});
  }
  // Curves left undecided by the precision budget are already counted as
  // indeterminate; only curves with violations make this a failure.
  if (clean_curves < 5) tally.fail("thm41.flatness/too_few_curves");
  r.details = {{"witness_points", w.points.size()},
               {"witness_norms", witness_norms},
               {"axis_points", 100},
               {"flat_curves", flat_curves},
               {"flatness", flatness}};
}

long verdict_code(Verdict v) {
  switch (v) {
    case Verdict::ContinuousExtension:
      return 0;
    case Verdict::LocallyBounded:
      return 1;
    case Verdict::Unbounded:
      return 2;
    case Verdict::Indeterminate:
      return -1;
  }
  return -1;
}

ProbeConfig probe_config(std::size_t order, std::size_t dim, std::uint64_t seed) {
  ProbeConfig c;
  c.order = order;
  c.region = Ball(RationalVector(dim, mpq_class(0)), 0);
  c.samples = 4;
  c.seed = seed;
  return c;
}

void probe_suite(SuiteResult& r, const SuiteOptions& o) {
  const Field& F = o.field;
  Corpus corpus = Corpus::standard(F.p());
  Tally tally(r);
  for (std::size_t i = 0; i < corpus.polys.size(); ++i) {
    const MultiPolynomial& u = corpus.polys[i];
    SmoothnessReport rep =
        continuity_probe(FunctionExpr::poly(u), probe_config(3, u.inputs(), o.seed + i), F);
    for (std::size_t k = 0; k < rep.verdicts.size(); ++k) {
      ++r.samples;
      r.integers.push_back(verdict_code(rep.verdicts[k]));
      if (rep.verdicts[k] == Verdict::Indeterminate)
        ++r.indeterminate;
      else if (rep.verdicts[k] != Verdict::ContinuousExtension)
        tally.fail(label("probe.corpus", i, "order=" + std::to_string(k)));
    }
  }

  CounterexampleF cf;
  SmoothnessReport t = continuity_probe(cf.expr(), probe_config(0, cf.input_dim(), o.seed), F);
  ++r.samples;
  Verdict v = t.verdicts.at(0);
  r.integers.push_back(verdict_code(v));
  r.integers.push_back(v == Verdict::Indeterminate ? -1 : (t.witnesses.empty() ? 0 : 1));
  if (v == Verdict::Indeterminate)
    ++r.indeterminate;
  else if (v == Verdict::ContinuousExtension || t.witnesses.empty())
    tally.fail("probe.thm41/order=0");

  LipschitzFit fit = lipschitz_fit(FunctionExpr::identity(1), probe_config(0, 1, o.seed), F);
  ++r.samples;
  r.integers.push_back(fit.r == 1 && !fit.degenerate ? 1 : 0);
  if (fit.r != 1 || fit.degenerate) tally.fail("probe.lipschitz/identity");

  json witness = t.witnesses.empty() ? json(nullptr) : t.witnesses.back().to_json();
  r.details = {{"corpus", corpus.polys.size()},
               {"corpus_orders", 3},
               {"thm41_verdict", verdict_name(v)},
               {"thm41_witness", witness},
               {"identity_lipschitz", fit.to_json()}};
}

struct SuiteEntry {
  std::string description;
  void (*run)(SuiteResult&, const SuiteOptions&);
};

const std::map<std::string, SuiteEntry>& registry() {
  static const std::map<std::string, SuiteEntry> r = {
      {"leibniz", {"product rule expansion equals the quotient of the product", leibniz_suite}},
      {"closed_form", {"closed forms equal recursive quotients for polynomials", closed_form_suite}},
      {"symmetry_scaling", {"permutation invariance and rescaling identities", symmetry_scaling_suite}},
      {"sup_bound", {"full quotients on the unit polydisk stay below the coefficient norm", sup_bound_suite}},
      {"restriction", {"full quotient at an embedded point equals the partial quotient", restriction_suite}},
      {"chain", {"chain rule expansion at orders 1 and 2", chain_suite}},
      {"rank", {"directional span rank stays below (2^b - 1)^n", rank_suite}},
      {"thm41", {"discontinuous function that is flat along analytic curves", thm41_suite}},
      {"probe", {"smoothness probe verdicts on known functions", probe_suite}},
  };
  return r;
}

}  // namespace

json SuiteResult::to_json() const {
  return {{"name", name},
          {"description", description},
          {"samples", samples},
          {"failures", failures},
          {"indeterminate", indeterminate},
          {"passed", passed},
          {"failing_checks", failing_checks},
          {"details", details}};
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"leibniz", "closed_form", "symmetry_scaling",
                                                 "sup_bound", "restriction", "chain",
                                                 "rank", "thm41", "probe"};
  return names;
}

SuiteResult run_suite(const std::string& name, const SuiteOptions& opts) {
  auto it = registry().find(name);
  if (it == registry().end()) throw InvalidArgument("unknown suite: " + name);
  SuiteResult r;
  r.name = name;
  r.description = it->second.description;
  auto start = std::chrono::steady_clock::now();
  it->second.run(r, opts);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  r.passed = r.failures == 0 && r.indeterminate == 0;
  return r;
}

json BackendComparison::to_json() const {
  return {{"suite", suite},       {"compared", compared}, {"mismatches", mismatches},
          {"undecided", undecided}, {"passed", passed()},  {"notes", notes}};
}

BackendComparison compare_backends(const SuiteResult& exact, const SuiteResult& truncated) {
  BackendComparison c;
  c.suite = exact.name;
  auto note = [&](std::string s) {
    if (c.notes.size() < kMaxListedFailures) c.notes.push_back(std::move(s));
  };
  if (exact.values.size() != truncated.values.size() || exact.integers.size() != truncated.integers.size()) {
    ++c.mismatches;
    note("result shapes differ");
    return c;
  }
  for (std::size_t i = 0; i < exact.values.size(); ++i) {
    const auto& e = exact.values[i];
    const auto& t = truncated.values[i];
    if (!t) {
      ++c.undecided;
      continue;
    }
    if (!e) {
      // The exact backend never runs out of precision.
      ++c.mismatches;
      note("value " + std::to_string(i) + " undecided in the exact run");
      continue;
    }
    ++c.compared;
    bool ok = e->dim() == t->dim();
    for (std::size_t k = 0; ok && k < e->dim(); ++k) ok = (*t)[k].congruent_to((*e)[k].to_rational());
    if (!ok) {
      ++c.mismatches;
      note("value " + std::to_string(i) + " not congruent");
    }
  }
  for (std::size_t i = 0; i < exact.integers.size(); ++i) {
    long e = exact.integers[i], t = truncated.integers[i];
    if (t < 0) {
      ++c.undecided;
      continue;
    }
    ++c.compared;
    if (e != t) {
      ++c.mismatches;
      note("outcome " + std::to_string(i) + ": exact " + std::to_string(e) + ", truncated " +
           std::to_string(t));
    }
  }
  return c;
}

}  // namespace ultradiff
