#include "ultradiff/probe/probe.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "ultradiff/diff/engine.hpp"

namespace ultradiff {

namespace {

constexpr unsigned kDigits = 10;
constexpr std::size_t kMaxWitnessesPerOrder = 2;

int severity(Verdict v) {
  switch (v) {
    case Verdict::ContinuousExtension:
      return 0;
    case Verdict::Indeterminate:
      return 1;
    case Verdict::LocallyBounded:
      return 2;
    case Verdict::Unbounded:
      return 3;
  }
  return 3;
}

mpq_class p_power(std::uint32_t p, long e) {
  mpz_class z;
  mpz_ui_pow_ui(z.get_mpz_t(), p, static_cast<unsigned long>(e < 0 ? -e : e));
  return e < 0 ? mpq_class(1, z) : mpq_class(z);
}

// Valuation of a difference. Inexact zeros report their precision as a
// lower bound and are flagged.
struct DiffVal {
  Valuation v = kInfinite;
  bool exact_zero = false;
  bool inexact_zero = false;
};

DiffVal diff_valuation(const PadicVector& d) {
  DiffVal out;
  if (!d.is_zero()) {
    out.v = d.valuation();
    return out;
  }
  Valuation prec = kInfinite;
  for (const auto& e : d.entries()) prec = std::min(prec, e.precision());
  if (is_infinite(prec)) {
    out.exact_zero = true;
  } else {
    out.inexact_zero = true;
    out.v = prec;
  }
  return out;
}

std::string diff_string(const DiffVal& d) {
  if (d.exact_zero) return "inf";
  if (d.inexact_zero) return ">=" + std::to_string(d.v);
  return std::to_string(d.v);
}

enum class Tail { Pass, Fail, Indeterminate };

std::size_t tail_length(std::size_t n) { return std::min(n, std::max<std::size_t>(2, (n + 1) / 2)); }

// Cauchy test on the last part of a difference sequence: the final
// valuation must exceed the window minimum by delta per step. Exact zeros
// count as infinite; a nonzero difference after an exact zero fails.
Tail cauchy_tail(const std::vector<DiffVal>& d, long delta) {
  if (d.empty()) return Tail::Indeterminate;
  const std::size_t len = tail_length(d.size());
  const std::size_t first = d.size() - len;
  bool seen_zero = false, uncertain = false;
  Valuation lowest = kInfinite;
  for (std::size_t i = first; i < d.size(); ++i) {
    if (d[i].exact_zero) {
      seen_zero = true;
      continue;
    }
    if (seen_zero) return Tail::Fail;
    uncertain = uncertain || d[i].inexact_zero;
    lowest = std::min(lowest, d[i].v);
  }
  if (d.back().exact_zero) return Tail::Pass;
  if (len < 2) return uncertain ? Tail::Indeterminate : Tail::Fail;
  if (d.back().v >= vadd(lowest, delta * static_cast<long>(len - 1))) return Tail::Pass;
  return uncertain ? Tail::Indeterminate : Tail::Fail;
}

// A failing sequence is unbounded when its norms strictly grow over the
// tail and end beyond p^ceiling.
bool grows_past(const std::vector<mpq_class>& norms, long ceiling, std::uint32_t p) {
  if (norms.size() < 2) return false;
  const std::size_t len = tail_length(norms.size());
  for (std::size_t i = norms.size() - len + 1; i < norms.size(); ++i)
    if (norms[i] <= norms[i - 1]) return false;
  return norms.back() > p_power(p, ceiling);
}

PadicVector eval_quotient(const FunctionExpr& f, const PadicVector& x,
                          const std::vector<PadicVector>& dirs, const std::vector<PadicScalar>& ts) {
  if (dirs.empty()) return f.eval(x);
  return phi(f, PhiPoint(x, dirs, ts));
}

json point_json(const PadicVector& x, const std::vector<PadicVector>& dirs,
                const std::vector<PadicScalar>& ts) {
  json d = json::array(), t = json::array();
  for (const auto& v : dirs) d.push_back(vector_to_json(v));
  for (const auto& s : ts) t.push_back(scalar_to_json(s));
  return json{{"x", vector_to_json(x)}, {"directions", d}, {"increments", t}};
}

struct SampleBasis {
  PadicVector x;
  std::vector<PadicVector> dirs;
  std::vector<PadicScalar> units;  // per-slot increment multipliers
};

SampleBasis draw_basis(const ProbeConfig& cfg, const Field& field, Rng& rng, std::size_t k,
                       bool random_units) {
  SampleBasis b;
  const std::uint32_t p = field.p();
  const std::size_t dim = cfg.region.dim();
  b.x = PadicVector::lift(field, sample_rationals(cfg.region, p, rng, kDigits));
  const std::size_t slots = std::max<std::size_t>(k, 1);
  for (std::size_t i = 0; i < slots; ++i)
    b.dirs.push_back(PadicVector::lift(field, sample_unit_sphere(rng, p, dim, kDigits)));
  for (std::size_t i = 0; i < slots; ++i)
    b.units.push_back(random_units ? field.lift(random_unit_rational(rng, p, 30)) : field.one());
  return b;
}

struct StageOutcome {
  Verdict verdict = Verdict::ContinuousExtension;
  std::optional<Witness> witness;
};

// Runs one sample of a grid stage at order k and appends its rows.
StageOutcome run_grid_sample(const FunctionExpr& f, const ProbeConfig& cfg, const Field& field,
                             const SampleBasis& b, std::size_t k, const std::string& stage,
                             std::size_t sample, std::vector<ProbeRow>& rows) {
  const std::uint32_t p = field.p();
  StageOutcome out;
  std::vector<PadicVector> values;
  std::vector<json> points;
  std::vector<mpq_class> norms;
  std::vector<DiffVal> diffs;
  std::optional<PadicVector> base;
  try {
    if (k == 0) base = f.eval(b.x);
    for (long j = cfg.j0; j <= cfg.j1; ++j) {
      PadicScalar t = field.uniformizer_power(j);
      PadicVector value;
      json pt;
      if (k == 0) {
        PadicVector moved = b.x + (t * b.units[0]) * b.dirs[0];
        value = f.eval(moved);
        pt = json{{"x", vector_to_json(moved)}};
      } else {
        std::vector<PadicScalar> ts;
        for (std::size_t i = 0; i < k; ++i) ts.push_back(t * b.units[i]);
        std::vector<PadicVector> dirs(b.dirs.begin(), b.dirs.begin() + static_cast<long>(k));
        value = eval_quotient(f, b.x, dirs, ts);
        pt = point_json(b.x, dirs, ts);
      }
      ProbeRow row{stage, k, sample, j, value.norm().get_str(), ""};
      // Order 0 compares against f(x); higher orders compare successive steps.
      if (k == 0) {
        diffs.push_back(diff_valuation(value - *base));
        row.difference = diff_string(diffs.back());
      } else if (!values.empty()) {
        diffs.push_back(diff_valuation(value - values.back()));
        row.difference = diff_string(diffs.back());
      }
      rows.push_back(row);
      norms.push_back(value.norm());
      points.push_back(pt);
      values.push_back(std::move(value));
    }
  } catch (const PrecisionExhausted& e) {
    rows.push_back(ProbeRow{stage, k, sample, 0, "indeterminate", e.what()});
    out.verdict = Verdict::Indeterminate;
    return out;
  } catch (const DomainError& e) {
    rows.push_back(ProbeRow{stage, k, sample, 0, "undefined", e.what()});
    out.verdict = Verdict::Indeterminate;
    return out;
  }
  Tail tail = cauchy_tail(diffs, cfg.delta);
  if (tail == Tail::Pass) return out;
  if (tail == Tail::Indeterminate) {
    out.verdict = Verdict::Indeterminate;
    return out;
  }
  bool unbounded = grows_past(norms, cfg.ceiling, p);
  out.verdict = unbounded ? Verdict::Unbounded : Verdict::LocallyBounded;
  Witness w;
  w.kind = unbounded ? "unbounded" : (k == 0 ? "oscillation" : "non-cauchy");
  w.order = k;
  w.points = points;
  w.norms = norms;
  w.detail = stage + " stage: difference valuations do not grow by " + std::to_string(cfg.delta) +
             " per step";
  out.witness = std::move(w);
  return out;
}

// Order 0 only: f along construction hints must approach f(center).
StageOutcome run_hint_stage(const FunctionExpr& f, const ProbeConfig& cfg, const Field& field,
                            std::vector<ProbeRow>& rows) {
  StageOutcome out;
  const std::uint32_t p = field.p();
  auto hints = f.approach_hints(cfg.region.center(), cfg.hints, p);
  if (hints.empty()) return out;
  std::vector<DiffVal> diffs;
  std::vector<json> points;
  std::vector<mpq_class> norms;
  try {
    PadicVector at_center = f.eval(PadicVector::lift(field, cfg.region.center()));
    for (std::size_t i = 0; i < hints.size(); ++i) {
      PadicVector q = PadicVector::lift(field, hints[i]);
      PadicVector value = f.eval(q);
      diffs.push_back(diff_valuation(value - at_center));
      norms.push_back(value.norm());
      points.push_back(json{{"x", vector_to_json(q)}});
      rows.push_back(ProbeRow{"hint", 0, 0, static_cast<long>(i + 1), value.norm().get_str(),
                              diff_string(diffs.back())});
    }
    norms.push_back(at_center.norm());
    points.push_back(json{{"x", vector_to_json(PadicVector::lift(field, cfg.region.center()))},
                          {"limit", true}});
  } catch (const PrecisionExhausted& e) {
    rows.push_back(ProbeRow{"hint", 0, 0, 0, "indeterminate", e.what()});
    out.verdict = Verdict::Indeterminate;
    return out;
  } catch (const DomainError& e) {
    rows.push_back(ProbeRow{"hint", 0, 0, 0, "undefined", e.what()});
    out.verdict = Verdict::Indeterminate;
    return out;
  }
  Tail tail = cauchy_tail(diffs, cfg.delta);
  if (tail == Tail::Pass) return out;
  if (tail == Tail::Indeterminate) {
    out.verdict = Verdict::Indeterminate;
    return out;
  }
  std::vector<mpq_class> seq(norms.begin(), norms.end() - 1);
  bool unbounded = grows_past(seq, cfg.ceiling, p);
  out.verdict = unbounded ? Verdict::Unbounded : Verdict::LocallyBounded;
  Witness w;
  w.kind = unbounded ? "unbounded" : "oscillation";
  w.order = 0;
  w.points = points;
  w.norms = norms;
  w.detail = "values along points approaching the region center stay away from the value at the center";
  out.witness = std::move(w);
  return out;
}

void require_region(const FunctionExpr& f, const ProbeConfig& cfg) {
  cfg.validate(f.input_dim());
}

}  // namespace

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::ContinuousExtension:
      return "ContinuousExtension";
    case Verdict::LocallyBounded:
      return "LocallyBounded";
    case Verdict::Unbounded:
      return "Unbounded";
    case Verdict::Indeterminate:
      return "Indeterminate";
  }
  return "Indeterminate";
}

Verdict worse(Verdict a, Verdict b) { return severity(a) >= severity(b) ? a : b; }

void ProbeConfig::validate(std::size_t input_dim) const {
  if (j0 >= j1) throw InvalidArgument("probe grid needs j0 < j1");
  if (samples < 1) throw InvalidArgument("probe needs at least one sample");
  if (delta < 1) throw InvalidArgument("probe delta must be positive");
  if (region.dim() != input_dim)
    throw DimensionMismatch("probe region dimension differs from the function's input");
}

json ProbeConfig::to_json() const {
  json c = json::array();
  for (const auto& q : region.center()) c.push_back(rational_to_json(q));
  return json{{"order", order},
              {"region", json{{"center", c}, {"min_valuation", region.min_valuation()}}},
              {"j0", j0},
              {"j1", j1},
              {"samples", samples},
              {"delta", delta},
              {"seed", seed},
              {"ceiling", ceiling},
              {"hints", hints}};
}

ProbeConfig ProbeConfig::from_json(const json& j) {
  if (!j.is_object()) throw InvalidArgument("probe config must be an object");
  static const std::vector<std::string> keys = {"order", "region", "j0",      "j1",   "samples",
                                                "delta", "seed",   "ceiling", "hints"};
  for (auto it = j.begin(); it != j.end(); ++it)
    if (std::find(keys.begin(), keys.end(), it.key()) == keys.end())
      throw InvalidArgument("unknown probe key: " + it.key());
  ProbeConfig c;
  try {
    if (j.contains("order")) c.order = j.at("order").get<std::size_t>();
    if (j.contains("j0")) c.j0 = j.at("j0").get<long>();
    if (j.contains("j1")) c.j1 = j.at("j1").get<long>();
    if (j.contains("samples")) c.samples = j.at("samples").get<std::size_t>();
    if (j.contains("delta")) c.delta = j.at("delta").get<long>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("ceiling")) c.ceiling = j.at("ceiling").get<long>();
    if (j.contains("hints")) c.hints = j.at("hints").get<unsigned>();
    if (j.contains("region")) {
      const json& r = j.at("region");
      if (!r.is_object()) throw InvalidArgument("probe region must be an object");
      for (auto it = r.begin(); it != r.end(); ++it)
        if (it.key() != "center" && it.key() != "min_valuation")
          throw InvalidArgument("unknown region key: " + it.key());
      if (!r.contains("center")) throw InvalidArgument("probe region needs a center");
      c.region = Ball(rationals_from_json(r.at("center")),
                      r.contains("min_valuation") ? r.at("min_valuation").get<long>() : 0);
    }
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("malformed probe config: ") + e.what());
  }
  if (c.j0 >= c.j1) throw InvalidArgument("probe grid needs j0 < j1");
  if (c.samples < 1) throw InvalidArgument("probe needs at least one sample");
  if (c.delta < 1) throw InvalidArgument("probe delta must be positive");
  return c;
}

json Witness::to_json() const {
  json n = json::array();
  for (const auto& q : norms) n.push_back(q.get_str());
  return json{{"kind", kind}, {"order", order}, {"points", points}, {"norms", n}, {"detail", detail}};
}

json LipschitzFit::to_json() const {
  json b = json::array();
  for (const auto& w : binding) b.push_back(w.to_json());
  return json{{"r", r.get_str()},
              {"C", C.get_str()},
              {"degenerate", degenerate},
              {"samples", samples},
              {"min_slack", valuation_to_json(min_slack)},
              {"binding", b}};
}

json CnNorm::to_json() const {
  json s = json::array();
  for (const auto& q : sup_per_order) s.push_back(q.get_str());
  return json{{"value", value ? json(value->get_str()) : json("unbounded")},
              {"sup_per_order", s},
              {"lipschitz_constant", lipschitz_constant.get_str()}};
}

json SmoothnessReport::to_json() const {
  json v = json::array(), raw = json::array(), w = json::array();
  for (auto x : verdicts) v.push_back(verdict_name(x));
  for (auto x : raw_verdicts) raw.push_back(verdict_name(x));
  for (const auto& x : witnesses) w.push_back(x.to_json());
  json lip = lipschitz ? json{{"r", lipschitz->r.get_str()}, {"C", lipschitz->C.get_str()},
                              {"fit", lipschitz->to_json()}}
                       : json(nullptr);
  json nrm = nullptr;
  if (norm) nrm = norm->value ? json(norm->value->get_str()) : json("unbounded");
  return json{{"function", function},
              {"order", order},
              {"verdicts", v},
              {"raw_verdicts", raw},
              {"witnesses", w},
              {"lipschitz", lip},
              {"norm", nrm},
              {"norm_detail", norm ? norm->to_json() : json(nullptr)},
              {"indeterminate_samples", indeterminate_samples},
              {"config", config}};
}

std::string SmoothnessReport::to_csv() const {
  std::ostringstream os;
  os << "stage,order,sample,step,norm,difference_valuation\n";
  for (const auto& r : rows) {
    std::string diff = r.difference;
    std::replace(diff.begin(), diff.end(), ',', ';');
    os << r.stage << ',' << r.order << ',' << r.sample << ',' << r.step << ',' << r.norm << ','
       << diff << '\n';
  }
  return os.str();
}

SmoothnessReport continuity_probe(const FunctionExpr& f, const ProbeConfig& cfg,
                                  const Field& field) {
  require_region(f, cfg);
  SmoothnessReport r;
  r.function = f.describe();
  r.order = cfg.order;
  r.config = cfg.to_json();
  Rng root(cfg.seed);
  for (std::size_t k = 0; k <= cfg.order; ++k) {
    Verdict v = Verdict::ContinuousExtension;
    std::size_t kept = 0;
    auto absorb = [&](StageOutcome o) {
      v = worse(v, o.verdict);
      if (o.verdict == Verdict::Indeterminate) ++r.indeterminate_samples;
      if (o.witness && kept < kMaxWitnessesPerOrder) {
        r.witnesses.push_back(std::move(*o.witness));
        ++kept;
      }
    };
    Rng line = root.fork(1000 + k), random = root.fork(2000 + k);
    for (std::size_t s = 0; s < cfg.samples; ++s)
      absorb(run_grid_sample(f, cfg, field, draw_basis(cfg, field, line, k, false), k, "line", s,
                             r.rows));
    for (std::size_t s = 0; s < cfg.samples; ++s)
      absorb(run_grid_sample(f, cfg, field, draw_basis(cfg, field, random, k, true), k, "random",
                             s, r.rows));
    if (k == 0) absorb(run_hint_stage(f, cfg, field, r.rows));
    r.raw_verdicts.push_back(v);
  }
  Verdict running = Verdict::ContinuousExtension;
  for (auto v : r.raw_verdicts) {
    running = worse(running, v);
    r.verdicts.push_back(running);
  }
  return r;
}

json BoundednessResult::to_json() const {
  return json{{"verdict", verdict_name(verdict)},
              {"bound", bound.get_str()},
              {"witness", witness ? witness->to_json() : json(nullptr)},
              {"indeterminate", indeterminate}};
}

BoundednessResult local_boundedness_probe(const FunctionExpr& f, const ProbeConfig& cfg,
                                          const Field& field) {
  require_region(f, cfg);
  const std::uint32_t p = field.p();
  const std::size_t n = cfg.order;
  const std::size_t dim = cfg.region.dim();
  BoundednessResult out;
  Rng rng = Rng(cfg.seed).fork(3000 + n);
  auto consider = [&](const mpq_class& norm) { out.bound = std::max(out.bound, norm); };

  // Grid points.
  for (std::size_t s = 0; s < cfg.samples; ++s) {
    SampleBasis b = draw_basis(cfg, field, rng, n, true);
    std::vector<PadicVector> dirs(b.dirs.begin(), b.dirs.begin() + static_cast<long>(n));
    for (long j = std::max(cfg.j0, 0L); j <= cfg.j1; ++j) {
      std::vector<PadicScalar> ts;
      for (std::size_t i = 0; i < n; ++i) ts.push_back(field.uniformizer_power(j) * b.units[i]);
      try {
        consider(eval_quotient(f, b.x, dirs, ts).norm());
      } catch (const PrecisionExhausted&) {
        ++out.indeterminate;
      } catch (const DomainError&) {
        ++out.indeterminate;
      }
    }
  }

  // Refining sequences toward the center, then the construction hints.
  std::vector<std::vector<PadicVector>> sequences;
  const PadicVector center = PadicVector::lift(field, cfg.region.center());
  for (std::size_t s = 0; s < cfg.samples; ++s) {
    PadicVector u = PadicVector::lift(field, sample_unit_sphere(rng, p, dim, kDigits));
    std::vector<PadicVector> seq;
    for (long j = std::max(cfg.j0, cfg.region.min_valuation()); j <= cfg.j1; ++j)
      seq.push_back(center + field.uniformizer_power(j) * u);
    sequences.push_back(std::move(seq));
  }
  if (n == 0) {
    std::vector<PadicVector> seq;
    for (const auto& q : f.approach_hints(cfg.region.center(), cfg.hints, p))
      seq.push_back(PadicVector::lift(field, q));
    if (!seq.empty()) sequences.push_back(std::move(seq));
  }
  std::vector<PadicVector> dirs;
  for (std::size_t i = 0; i < n; ++i)
    dirs.push_back(PadicVector::lift(field, sample_unit_sphere(rng, p, dim, kDigits)));
  for (const auto& seq : sequences) {
    std::vector<mpq_class> norms;
    std::vector<json> points;
    long j = std::max(cfg.j0, cfg.region.min_valuation());
    for (const auto& x : seq) {
      // Increments shrink one step faster than the distance to the center.
      std::vector<PadicScalar> ts(n, field.uniformizer_power(j + 1));
      ++j;
      try {
        mpq_class norm = eval_quotient(f, x, dirs, ts).norm();
        consider(norm);
        norms.push_back(norm);
        points.push_back(point_json(x, dirs, ts));
      } catch (const PrecisionExhausted&) {
        ++out.indeterminate;
      } catch (const DomainError&) {
        ++out.indeterminate;
      }
    }
    if (!out.witness && grows_past(norms, cfg.ceiling, p)) {
      Witness w;
      w.kind = "unbounded";
      w.order = n;
      w.points = points;
      w.norms = norms;
      w.detail = "norms grow strictly along a sequence refining toward the region center";
      out.witness = std::move(w);
    }
  }
  if (out.witness)
    out.verdict = Verdict::Unbounded;
  else if (out.bound == 0 && out.indeterminate > 0)
    out.verdict = Verdict::Indeterminate;
  else
    out.verdict = Verdict::LocallyBounded;
  return out;
}

LipschitzFit lipschitz_fit(const FunctionExpr& f, const ProbeConfig& cfg, const Field& field,
                           const std::optional<RationalVector>& direction) {
  require_region(f, cfg);
  const std::uint32_t p = field.p();
  const std::size_t dim = cfg.region.dim();
  if (direction) {
    if (direction->size() != dim) throw DimensionMismatch("direction dimension differs");
    if (std::all_of(direction->begin(), direction->end(), [](const mpq_class& q) { return q == 0; }))
      throw InvalidArgument("direction must be nonzero");
  }
  Rng rng = Rng(cfg.seed).fork(4000);
  struct Pair {
    PadicVector x, y;
    Valuation vy;
    Valuation d;
    mpq_class diff_norm;
  };
  std::vector<Pair> data;
  LipschitzFit fit;
  for (long k = cfg.j0; k <= cfg.j1; ++k) {
    for (std::size_t s = 0; s < cfg.samples; ++s) {
      PadicVector x = PadicVector::lift(field, sample_rationals(cfg.region, p, rng, kDigits));
      RationalVector yq;
      if (direction) {
        mpq_class scale = p_power(p, k) * random_unit_rational(rng, p, 30);
        for (const auto& c : *direction) yq.push_back(scale * c);
      } else {
        yq = sample_unit_sphere(rng, p, dim, kDigits);
        for (auto& c : yq) c *= p_power(p, k);
      }
      PadicVector y = PadicVector::lift(field, yq);
      ++fit.samples;
      try {
        PadicVector diff = f.eval(x + y) - f.eval(x);
        DiffVal dv = diff_valuation(diff);
        if (dv.exact_zero) continue;
        data.push_back(Pair{x, y, y.valuation(), dv.v, diff.norm()});
      } catch (const PrecisionExhausted&) {
      } catch (const DomainError&) {
      }
    }
  }
  if (data.empty()) {
    fit.r = 1;
    fit.C = 0;
    fit.degenerate = true;
    return fit;
  }
  // Lower envelope of the difference valuations per level of val(y).
  std::map<Valuation, Valuation> level_min;
  for (const auto& d : data) {
    auto it = level_min.find(d.vy);
    if (it == level_min.end() || d.d < it->second) level_min[d.vy] = d.d;
  }
  std::vector<std::pair<Valuation, Valuation>> envelope(level_min.begin(), level_min.end());
  for (std::size_t i = envelope.size(); i-- > 1;)
    envelope[i - 1].second = std::min(envelope[i - 1].second, envelope[i].second);
  long r = 1;
  if (envelope.size() > 1) {
    Valuation rise = envelope.back().second - envelope.front().second;
    Valuation run = envelope.back().first - envelope.front().first;
    r = std::clamp<long>(static_cast<long>(rise / run), 0, 1);
  }
  Valuation logC = std::numeric_limits<Valuation>::min();
  for (const auto& d : data) logC = std::max(logC, r * d.vy - d.d);
  fit.r = r;
  fit.C = p_power(p, logC);
  for (const auto& d : data) {
    Valuation slack = d.d - (r * d.vy - logC);
    fit.min_slack = std::min(fit.min_slack, slack);
    if (slack == 0 && fit.binding.size() < 3) {
      Witness w;
      w.kind = "lipschitz-binding";
      w.points = {json{{"x", vector_to_json(d.x)}, {"y", vector_to_json(d.y)}}};
      w.norms = {d.diff_norm};
      w.detail = "pair attaining the fitted bound";
      fit.binding.push_back(std::move(w));
    }
  }
  return fit;
}

json DirectionalResult::to_json() const {
  json s = json::array();
  for (auto v : sup_valuations) s.push_back(valuation_to_json(v));
  return json{{"converges", converges},
              {"indeterminate", indeterminate},
              {"sup_valuations", s},
              {"witness", witness ? witness->to_json() : json(nullptr)}};
}

DirectionalResult directional_continuity_probe(const FunctionExpr& f, const RationalVector& v,
                                               const ProbeConfig& cfg, const Field& field,
                                               const std::vector<RationalVector>& bases) {
  require_region(f, cfg);
  const std::uint32_t p = field.p();
  if (v.size() != cfg.region.dim()) throw DimensionMismatch("direction dimension differs");
  if (std::all_of(v.begin(), v.end(), [](const mpq_class& q) { return q == 0; }))
    throw InvalidArgument("direction must be nonzero");
  Rng rng = Rng(cfg.seed).fork(5000);
  std::vector<RationalVector> fixed = bases;
  std::vector<RationalVector> hints;
  if (bases.empty()) {
    for (std::size_t s = 0; s < cfg.samples; ++s)
      fixed.push_back(sample_rationals(cfg.region, p, rng, kDigits));
    hints = f.approach_hints(cfg.region.center(), cfg.hints, p);
  }
  const PadicVector dir = PadicVector::lift(field, v);
  DirectionalResult out;
  std::vector<DiffVal> sups;
  std::vector<json> points;
  std::vector<mpq_class> norms;
  for (long j = cfg.j0; j <= cfg.j1; ++j) {
    const mpq_class t = p_power(p, j);
    std::vector<RationalVector> xs = fixed;
    for (const auto& q : hints) {
      RationalVector b = q;
      for (std::size_t i = 0; i < b.size(); ++i) b[i] -= t * v[i];
      xs.push_back(std::move(b));
    }
    DiffVal worst;
    worst.exact_zero = true;
    json worst_point = nullptr;
    mpq_class worst_norm = 0;
    for (const auto& xq : xs) {
      try {
        PadicVector x = PadicVector::lift(field, xq);
        PadicVector d = f.eval(x + field.lift(t) * dir) - f.eval(x);
        DiffVal dv = diff_valuation(d);
        bool lower = worst.exact_zero ? !dv.exact_zero : (!dv.exact_zero && dv.v < worst.v);
        if (lower) {
          worst = dv;
          worst_point = json{{"x", vector_to_json(x)}, {"t", rational_to_json(t)}};
          worst_norm = d.norm();
        }
      } catch (const PrecisionExhausted&) {
        out.indeterminate = true;
      } catch (const DomainError&) {
        out.indeterminate = true;
      }
    }
    sups.push_back(worst);
    out.sup_valuations.push_back(worst.exact_zero ? kInfinite : worst.v);
    points.push_back(worst_point);
    norms.push_back(worst_norm);
  }
  Tail tail = cauchy_tail(sups, cfg.delta);
  out.converges = tail == Tail::Pass;
  out.indeterminate = out.indeterminate || tail == Tail::Indeterminate;
  if (tail == Tail::Fail) {
    Witness w;
    w.kind = "directional";
    w.points = points;
    w.norms = norms;
    w.detail = "sup over base points of |f(x + t v) - f(x)| does not shrink along the grid";
    out.witness = std::move(w);
  }
  return out;
}

CnNorm cn_norm_estimate(const FunctionExpr& f, std::size_t n, const ProbeConfig& cfg,
                        const Field& field) {
  require_region(f, cfg);
  const std::uint32_t p = field.p();
  const std::size_t dim = cfg.region.dim();
  CnNorm out;
  bool unbounded = false;
  Rng rng = Rng(cfg.seed).fork(6000 + n);
  for (std::size_t k = 0; k <= n; ++k) {
    ProbeConfig at = cfg;
    at.order = k;
    if (local_boundedness_probe(f, at, field).verdict == Verdict::Unbounded) unbounded = true;
    mpq_class sup = 0;
    for (std::size_t s = 0; s < cfg.samples; ++s) {
      PadicVector x = PadicVector::lift(field, sample_rationals(cfg.region, p, rng, kDigits));
      std::vector<PadicVector> dirs;
      for (std::size_t i = 0; i < k; ++i)
        dirs.push_back(PadicVector::lift(field, sample_unit_sphere(rng, p, dim, kDigits)));
      for (long j = std::max(cfg.j0, 0L); j <= cfg.j1; ++j) {
        std::vector<PadicScalar> ts;
        for (std::size_t i = 0; i < k; ++i)
          ts.push_back(field.uniformizer_power(j) *
                       (s % 2 == 0 ? field.one() : field.lift(random_unit_rational(rng, p, 30))));
        try {
          sup = std::max(sup, eval_quotient(f, x, dirs, ts).norm());
        } catch (const PrecisionExhausted&) {
        } catch (const DomainError&) {
        }
      }
    }
    out.sup_per_order.push_back(sup);
  }
  out.lipschitz_constant = lipschitz_fit(f, cfg, field).C;
  if (!unbounded) {
    mpq_class v = out.lipschitz_constant;
    for (const auto& s : out.sup_per_order) v = std::max(v, s);
    out.value = v;
  }
  return out;
}

SmoothnessReport smoothness_probe(const FunctionExpr& f, const ProbeConfig& cfg,
                                  const Field& field) {
  SmoothnessReport r = continuity_probe(f, cfg, field);
  for (std::size_t k = 0; k <= cfg.order; ++k) {
    ProbeConfig at = cfg;
    at.order = k;
    BoundednessResult b = local_boundedness_probe(f, at, field);
    if (b.verdict == Verdict::Unbounded) {
      r.raw_verdicts[k] = Verdict::Unbounded;
      r.witnesses.push_back(*b.witness);
    }
  }
  r.verdicts.clear();
  Verdict running = Verdict::ContinuousExtension;
  for (auto v : r.raw_verdicts) {
    running = worse(running, v);
    r.verdicts.push_back(running);
  }
  r.lipschitz = lipschitz_fit(f, cfg, field);
  r.norm = cn_norm_estimate(f, cfg.order, cfg, field);
  return r;
}

json BomanReport::to_json() const {
  json entries = json::array();
  for (const auto& e : compositions)
    entries.push_back(json{{"curve", e.curve},
                           {"tag", e.tag},
                           {"smooth", e.smooth},
                           {"report", e.report.to_json()}});
  return json{{"direct", direct.to_json()},
              {"direct_smooth", direct_smooth},
              {"compositions", entries},
              {"all_compositions_smooth", all_compositions_smooth},
              {"hypothesis_gap", hypothesis_gap},
              {"consistent", consistent},
              {"note", note}};
}

BomanReport boman_experiment(const FunctionExpr& f, const std::vector<BomanCurve>& curves,
                             const ProbeConfig& cfg, const Field& field) {
  auto smooth = [](const SmoothnessReport& r) {
    return std::all_of(r.verdicts.begin(), r.verdicts.end(),
                       [](Verdict v) { return v == Verdict::ContinuousExtension; });
  };
  BomanReport out;
  out.direct = continuity_probe(f, cfg, field);
  out.direct_smooth = smooth(out.direct);
  out.all_compositions_smooth = true;
  for (std::size_t i = 0; i < curves.size(); ++i) {
    const auto& c = curves[i];
    ProbeConfig along = cfg;
    along.region = Ball({c.center}, c.min_valuation);
    along.seed = cfg.seed + 7919 * (i + 1);
    BomanEntry e;
    e.curve = c.name;
    e.tag = curve_tag_name(c.curve.tag());
    e.report = continuity_probe(compose(f, c.curve), along, field);
    e.smooth = smooth(e.report);
    out.all_compositions_smooth = out.all_compositions_smooth && e.smooth;
    out.compositions.push_back(std::move(e));
  }
  out.hypothesis_gap = out.all_compositions_smooth && !out.direct_smooth;
  out.consistent = out.all_compositions_smooth == out.direct_smooth;
  if (out.hypothesis_gap)
    out.note = "every sampled curve composition passed while f itself failed: the smoothness "
               "criterion quantifies over all smooth curves, and this finite family misses the "
               "bad ones";
  else if (!out.all_compositions_smooth && !out.direct_smooth)
    out.note = "a composition detected the failure of f";
  else if (out.consistent)
    out.note = "compositions and f agree";
  else
    out.note = "a composition failed although f passed its own probe";
  return out;
}

}  // namespace ultradiff
