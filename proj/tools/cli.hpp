#pragma once

// Command-line front end. Every subcommand fills a Report: checks, summary values and
// one table; the table is written as JSON records or as CSV with '#' metadata lines.

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "commutant/commutant.hpp"

namespace commutant::cli {

using Json = nlohmann::ordered_json;

struct RunConfig {
  std::string command;
  std::size_t n = 2;
  std::vector<std::uint64_t> p{3};
  std::vector<std::int64_t> T{1};
  std::string mode = "exhaustive";
  std::optional<std::uint64_t> seed;
  std::uint64_t samples = 200;
  unsigned threads = 1;
  std::uint64_t budget = Limits{}.budget;
  std::string format = "json";
  std::string output;  // empty: stdout

  std::vector<std::int64_t> M, A, B, V, U, x;
  std::size_t k = 0;     // 0: every admissible k
  int variant = 0;       // 0: every variant / part
  std::int64_t N = 0, D = 0;
  std::string L = "0";
  double T_real = 0;     // poisson / optimize-p accept a real T; 0 means use T[0]
  std::int64_t R = 100000;
  double tolerance = 1e-3;
};

enum class Status { exact, certified, empirical };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::exact: return "exact";
    case Status::certified: return "certified";
    default: return "empirical";
  }
}

struct Check {
  std::string name;
  Status status;
  bool passed;
  std::string detail;
};

struct Report {
  std::vector<Check> checks;
  Json summary = Json::object();
  std::vector<std::string> columns;
  std::vector<std::vector<Json>> rows;
  Json errors = Json::array();

  void check(std::string name, Status s, bool ok, std::string detail = {}) {
    checks.push_back({std::move(name), s, ok, std::move(detail)});
  }
  void row(std::vector<Json> r) {
    if (r.size() != columns.size()) throw std::logic_error("report row does not match columns");
    rows.push_back(std::move(r));
  }
};

namespace detail {

inline std::string join(const std::vector<std::int64_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

inline std::string fraction(const Rational& r) {
  return r.denominator() == 1 ? std::to_string(r.numerator())
                              : std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

inline std::string flat(const MatF& m) {
  std::string s;
  for (std::size_t i = 0; i < m.entries().size(); ++i) s += (i ? "," : "") + std::to_string(m.entries()[i]);
  return s;
}

inline std::uint64_t single_p(const RunConfig& c) {
  if (c.p.size() != 1) throw std::invalid_argument(c.command + ": expects a single --p");
  return c.p[0];
}

// A length-1 list c is the scalar matrix cI; otherwise n^2 entries, row-major.
inline MatF matrix_arg(const FieldCtx& ctx, std::size_t n, const std::vector<std::int64_t>& v, const char* name) {
  if (v.size() == 1) return MatF::scalar(ctx, n, ctx.reduce(v[0]));
  if (v.size() != n * n)
    throw std::invalid_argument(std::string("--") + name + " needs n^2 = " + std::to_string(n * n) + " entries");
  return MatF::from_signed(ctx, n, n, v);
}

// "1", "1.5" or "3/2" -> 2L
inline std::int64_t twice_half_integer(const std::string& s) {
  Rational r;
  if (auto slash = s.find('/'); slash != std::string::npos) {
    r = Rational(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
  } else if (auto dot = s.find('.'); dot != std::string::npos) {
    const std::string frac = s.substr(dot + 1);
    std::int64_t scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    const std::int64_t whole = std::stoll(s.substr(0, dot).empty() ? "0" : s.substr(0, dot));
    const std::int64_t part = frac.empty() ? 0 : std::stoll(frac);
    r = Rational(whole * scale + (s[0] == '-' ? -part : part), scale);
  } else {
    r = Rational(std::stoll(s));
  }
  const Rational twice = r * 2;
  if (twice.denominator() != 1) throw std::invalid_argument("--L must be a multiple of 1/2");
  return twice.numerator();
}

}  // namespace detail

using Handler = std::function<void(const RunConfig&, const Limits&, Report&)>;

inline void cmd_count_integer(const RunConfig& c, const Limits& lim, Report& rep) {
  const auto sr = scaling_report(c.n, c.T, lim);
  rep.summary["upper_exponent"] = detail::fraction(Rational(sr.upper_num, sr.upper_den));
  rep.columns = {"T", "count", "lower_bound", "upper_curve", "slope"};
  bool ok = true;
  for (const auto& r : sr.rows) {
    ok = ok && r.count >= r.lower_bound;
    rep.row({r.T, r.count, r.lower_bound, r.upper_curve, r.slope ? Json(*r.slope) : Json(nullptr)});
  }
  rep.check("count >= (2T+1)^(n^2+1)", Status::exact, ok);
}

inline void cmd_congruence(const RunConfig& c, const Limits& lim, Report& rep) {
  rep.columns = {"T", "p", "congruence_count", "integer_count"};
  bool ok = true;
  for (auto T : c.T) {
    const auto n_int = count_N(c.n, T, lim);
    for (auto p : c.p) {
      const auto cc = congruence_count(c.n, T, p, lim);
      ok = ok && cc >= n_int;
      rep.row({T, p, cc, n_int});
    }
  }
  rep.check("congruence_count >= integer count", Status::exact, ok);
}

inline void cmd_expsum(const RunConfig& c, const Limits& lim, Report& rep) {
  FieldCtx ctx(detail::single_p(c));
  const MatF a = detail::matrix_arg(ctx, c.n, c.A, "A"), b = detail::matrix_arg(ctx, c.n, c.B, "B");
  const auto s = exp_sum(a, b, lim);
  const auto nv = s.normalized();
  rep.summary["A"] = detail::flat(a);
  rep.summary["B"] = detail::flat(b);
  rep.summary["magnitude"] = magnitude(s);
  if (auto v = s.as_integer()) rep.summary["integer_value"] = *v;
  rep.columns = {"residue", "count", "normalized_count"};
  for (std::size_t r = 0; r < s.p(); ++r) rep.row({r, s.counts()[r], nv.counts()[r]});
  if (a.trace() != 0 || b.trace() != 0) rep.check("S = 0 when p does not divide tr A or tr B", Status::exact, s.is_zero());
  const std::uint64_t side = checked_pow(ctx.p(), static_cast<unsigned>(c.n * c.n));
  if (side <= 4096 && side * side * side <= lim.budget)
    rep.check("equals the triple-sum definition", Status::exact, exp_sum_triple_oracle(a, b, lim) == s);
}

inline void cmd_lemma_exp(const RunConfig& c, const Limits& lim, Report& rep) {
  const bool sample = c.mode == "sample";
  const auto r = lemma_exp_report(c.n, detail::single_p(c), sample ? Mode::sample : Mode::exhaustive,
                                  c.seed.value_or(0), sample ? c.samples : 0, false, lim);
  rep.columns = {"n", "p", "mode", "tested", "nonzero_sums", "trace_violations", "bound_violations", "max_ratio",
                 "argmax_A", "argmax_B"};
  FieldCtx ctx(r.p);
  rep.row({r.n, r.p, c.mode, r.tested, r.nonzero_sums, r.violations, r.bound_violations, r.max_ratio,
           detail::flat(MatF::from_index(ctx, r.n, r.argmax_a)), detail::flat(MatF::from_index(ctx, r.n, r.argmax_b))});
  rep.check("S = 0 unless p | tr A and p | tr B", Status::exact, r.violations == 0);
  rep.check("|S(A,B)| <= S(A,0)", Status::exact, r.bound_violations == 0);
  rep.check("max |S|/p^(n^2+1) <= 4", Status::empirical, r.max_ratio <= 4);
}

inline void cmd_classes(const RunConfig& c, const Limits& lim, Report& rep) {
  const std::uint64_t p = detail::single_p(c);
  const auto cls = enumerate_classes(c.n, p, lim);
  rep.columns = {"index", "canonical_form", "representative", "dim_centralizer", "dim_formula", "units", "orbit",
                 "radical_degree"};
  std::uint64_t orbit_sum = 0;
  bool dims = true;
  for (std::size_t i = 0; i < cls.size(); ++i) {
    const auto& r = cls[i];
    orbit_sum += r.orbit;
    dims = dims && r.dim_centralizer == r.cf.centralizer_dim_formula();
    rep.row({i, r.cf.to_string(), detail::flat(r.representative), r.dim_centralizer, r.cf.centralizer_dim_formula(),
             r.units, r.orbit, r.rad_deg});
  }
  rep.summary["class_count"] = cls.size();
  rep.summary["commuting_count"] = commuting_count_classes(cls, p);
  rep.check("sum of orbits = p^(n^2)", Status::exact, orbit_sum == checked_pow(p, static_cast<unsigned>(c.n * c.n)));
  rep.check("ad-kernel dimension = min-sum formula", Status::exact, dims);
}

inline void cmd_fibre(const RunConfig& c, const Limits& lim, Report& rep) {
  rep.columns = {"p", "count", "normalized"};
  for (auto p : c.p) {
    FieldCtx ctx(p);
    const MatF m = detail::matrix_arg(ctx, c.n, c.M, "M");
    const auto f = fibre_count(m, lim);
    rep.row({p, f.count, f.normalized});
    if (m.trace() != 0) rep.check("fibre empty when tr M != 0 (p=" + std::to_string(p) + ")", Status::exact, f.count == 0);
    if (m.is_zero())
      rep.check("fibre over 0 = commuting_count (p=" + std::to_string(p) + ")", Status::exact,
                f.count == commuting_count(c.n, p, lim));
  }
}

inline void cmd_sigma(const RunConfig& c, const Limits& lim, Report& rep) {
  FieldCtx ctx(detail::single_p(c));
  const auto s = sigma(detail::matrix_arg(ctx, c.n, c.M, "M"), lim);
  rep.columns = {"M", "direct", "closed_form", "orbit_collapsed", "normalized"};
  rep.row({detail::flat(s.m), s.direct, s.closed_form, detail::fraction(s.orbit_collapsed), s.normalized});
  rep.check("direct = closed form = orbit-collapsed", Status::exact, s.agree);
}

inline void cmd_lvm(const RunConfig& c, const Limits& lim, Report& rep) {
  FieldCtx ctx(detail::single_p(c));
  const MatF v = detail::matrix_arg(ctx, c.n, c.V, "V"), m = detail::matrix_arg(ctx, c.n, c.M, "M");
  const auto r = lvm(v, m, lim);
  rep.columns = {"V", "M", "hits", "group_order", "L"};
  rep.row({detail::flat(v), detail::flat(m), r.numerator, r.denominator, detail::fraction(r.average())});
  if (m.trace() != 0) rep.check("L(V,M) = 0 when tr M != 0", Status::exact, r.numerator == 0);
}

inline std::vector<std::size_t> k_range(const RunConfig& c) {
  if (c.k != 0) return {c.k};
  std::vector<std::size_t> ks;
  for (std::size_t k = 1; k < c.n; ++k) ks.push_back(k);
  return ks;
}

inline void cmd_e_avg(const RunConfig& c, const Limits&, Report& rep) {
  FieldCtx ctx(detail::single_p(c));
  const MatF m = detail::matrix_arg(ctx, c.n, c.M, "M");
  rep.columns = {"k", "variant", "average", "bound", "holds", "ratio"};
  bool ok = true;
  for (auto k : k_range(c))
    for (int v = 1; v <= 3; ++v) {
      if (c.variant != 0 && v != c.variant) continue;
      const auto r = e_average(m, k, v);
      ok = ok && r.holds;
      rep.row({k, v, detail::fraction(r.average()), detail::fraction(r.bound), r.holds, detail::fraction(r.ratio)});
    }
  rep.check("average <= bound", Status::exact, ok);
}

inline void cmd_aux_avg(const RunConfig& c, const Limits& lim, Report& rep) {
  FieldCtx ctx(detail::single_p(c));
  const MatF m = detail::matrix_arg(ctx, c.n, c.M, "M");
  const auto group = make_gl(ctx, c.n, lim);
  rep.columns = {"k", "part", "average", "decay_exponent", "ratio"};
  Rational worst(0);
  for (auto k : k_range(c))
    for (int part = 1; part <= 7; ++part) {
      if (c.variant != 0 && part != c.variant) continue;
      const auto r = aux_average(m, k, part, group);
      worst = std::max(worst, r.ratio);
      rep.row({k, part, detail::fraction(r.average()), r.decay_exponent, detail::fraction(r.ratio)});
    }
  rep.summary["max_ratio"] = detail::fraction(worst);
  rep.check("average * p^decay <= 8", Status::empirical, worst <= Rational(8));
}

inline void cmd_main_lem(const RunConfig& c, const Limits& lim, Report& rep) {
  const auto r = main_lem_report(c.n, detail::single_p(c), lim);
  rep.columns = {"class_index", "radical_degree", "M", "L", "ratio"};
  for (const auto& row : r.rows)
    rep.row({row.class_index, row.rad_deg, detail::flat(row.m), detail::fraction(row.l), detail::fraction(row.ratio)});
  rep.summary["sup_ratio"] = detail::fraction(r.sup_ratio);
  rep.summary["nonzero_trace_checked"] = r.nonzero_trace_checked;
  rep.check("L(V,M) = 0 when tr M != 0", Status::exact, r.nonzero_trace_violations == 0);
  rep.check("sup L(V,M) p^(deg f_V - 1) <= 8", Status::empirical, r.sup_ratio <= Rational(8));
}

inline void cmd_kcomb(const RunConfig& c, const Limits&, Report& rep) {
  FieldCtx ctx(detail::single_p(c));
  std::vector<Residue> x;
  for (auto v : c.x) x.push_back(ctx.reduce(v));
  rep.columns = {"k", "indices", "sum"};
  bool ok = true;
  const bool x_zero = std::all_of(x.begin(), x.end(), [](Residue v) { return v == 0; });
  RunConfig cc = c;
  cc.n = x.size();
  for (auto k : k_range(cc)) {
    const auto w = kcomb_witness(ctx, x, k);
    if (!w) {
      ok = ok && x_zero;
      rep.row({k, nullptr, nullptr});
      continue;
    }
    Residue s = 0;
    std::string idx;
    for (std::size_t i = 0; i < w->size(); ++i) {
      s = ctx.add(s, x[(*w)[i]]);
      idx += (i ? "," : "") + std::to_string((*w)[i]);
    }
    ok = ok && s != 0 && w->size() == k;
    rep.row({k, idx, s});
  }
  rep.check("witness exists with non-zero sum", Status::exact, ok);
}

inline void cmd_poisson(const RunConfig& c, const Limits&, Report& rep) {
  WeightParams prm{c.n, c.T_real > 0 ? c.T_real : static_cast<double>(c.T.at(0)), detail::single_p(c), c.R, c.tolerance};
  std::vector<std::int64_t> u = c.U;
  if (u.size() <= 1) {  // scalar matrix
    const std::int64_t s = u.empty() ? 0 : u[0];
    u.assign(c.n * c.n, 0);
    for (std::size_t i = 0; i < c.n; ++i) u[i * c.n + i] = s;
  }
  const auto r = poisson_check(u, prm);
  rep.columns = {"lhs", "rhs", "rhs_imag", "tail_bound", "difference"};
  rep.row({r.lhs, r.rhs, r.rhs_imag, r.tail_bound, r.difference});
  rep.check("|lhs - rhs| <= tail bound + 1e-6, rhs real", Status::certified, r.passed);
}

inline void cmd_exponent(const RunConfig& c, const Limits&, Report& rep) {
  const auto r = exponent_general({c.N, c.D, detail::twice_half_integer(c.L)});
  rep.columns = {"N", "D", "L", "exponent", "exponent_decimal", "dimension_growth"};
  rep.row({c.N, c.D, detail::fraction(Rational(detail::twice_half_integer(c.L), 2)), detail::fraction(r.exponent),
           to_double(r.exponent), r.dimension_growth});
}

inline void cmd_optimize_p(const RunConfig& c, const Limits&, Report& rep) {
  const double T = c.T_real > 0 ? c.T_real : static_cast<double>(c.T.at(0));
  const auto r = optimize_p(c.n, T);
  rep.columns = {"n", "T", "exponent", "target", "p", "term_main", "term_error", "total"};
  rep.row({c.n, T, detail::fraction(r.exponent), r.target, r.p, r.term_main, r.term_error, r.total()});
  rep.check("p prime in [T, 2T^2]", Status::exact,
            is_prime(r.p) && static_cast<double>(r.p) >= T && static_cast<double>(r.p) <= 2 * T * T);
}

inline void cmd_strata_probe(const RunConfig& c, const Limits& lim, Report& rep) {
  const auto h = strata_probe(c.n, detail::single_p(c), lim);
  rep.columns = {"bin", "count"};
  for (const auto& [bin, count] : h) rep.row({bin, count});
}

inline const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> h{
      {"count-integer", cmd_count_integer}, {"congruence", cmd_congruence}, {"expsum", cmd_expsum},
      {"lemma-exp", cmd_lemma_exp},         {"classes", cmd_classes},       {"fibre", cmd_fibre},
      {"sigma", cmd_sigma},                 {"lvm", cmd_lvm},               {"e-avg", cmd_e_avg},
      {"aux-avg", cmd_aux_avg},             {"main-lem", cmd_main_lem},     {"kcomb", cmd_kcomb},
      {"poisson", cmd_poisson},             {"exponent", cmd_exponent},     {"optimize-p", cmd_optimize_p},
      {"strata-probe", cmd_strata_probe}};
  return h;
}

// The thread count and output path are left out so that reports do not depend on them.
inline Json config_json(const RunConfig& c) {
  Json j;
  j["command"] = c.command;
  j["n"] = c.n;
  j["p"] = c.p;
  j["T"] = c.T;
  j["mode"] = c.mode;
  j["seed"] = c.seed ? Json(*c.seed) : Json(nullptr);
  if (c.mode == "sample") j["samples"] = c.samples;
  j["budget"] = c.budget;
  j["format"] = c.format;
  auto opt = [&](const char* name, const std::vector<std::int64_t>& v) {
    if (!v.empty()) j[name] = detail::join(v);
  };
  opt("M", c.M);
  opt("A", c.A);
  opt("B", c.B);
  opt("V", c.V);
  opt("U", c.U);
  opt("x", c.x);
  if (c.k) j["k"] = c.k;
  if (c.variant) j["variant"] = c.variant;
  if (c.command == "exponent") {
    j["N"] = c.N;
    j["D"] = c.D;
    j["L"] = c.L;
  }
  if (c.T_real > 0) j["T_real"] = c.T_real;
  if (c.command == "poisson") {
    j["R"] = c.R;
    j["tolerance"] = c.tolerance;
  }
  return j;
}

namespace detail {

inline std::string csv_cell(const Json& v) {
  if (v.is_null()) return "";
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_float()) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v.get<double>());
    return std::string(buf, res.ptr);
  }
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return q + "\"";
  }
  return v.dump();
}

}  // namespace detail

inline void write_report(std::ostream& os, const RunConfig& c, const Report& rep, const std::string& status) {
  Json checks = Json::array();
  for (const auto& ch : rep.checks) {
    Json j{{"name", ch.name}, {"status", to_string(ch.status)}, {"passed", ch.passed}};
    if (!ch.detail.empty()) j["detail"] = ch.detail;
    checks.push_back(j);
  }
  if (c.format == "csv") {
    os << "# command: " << c.command << "\n# version: " << kVersion << "\n# status: " << status << "\n";
    os << "# config: " << config_json(c).dump() << "\n";
    for (const auto& ch : checks) os << "# check: " << ch.dump() << "\n";
    for (const auto& [key, val] : rep.summary.items()) os << "# " << key << ": " << detail::csv_cell(val) << "\n";
    for (const auto& e : rep.errors) os << "# error: " << e.dump() << "\n";
    if (rep.columns.empty()) return;
    for (std::size_t i = 0; i < rep.columns.size(); ++i) os << (i ? "," : "") << rep.columns[i];
    os << "\n";
    for (const auto& r : rep.rows) {
      for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << detail::csv_cell(r[i]);
      os << "\n";
    }
    return;
  }
  Json out;
  out["command"] = c.command;
  out["version"] = kVersion;
  out["status"] = status;
  out["config"] = config_json(c);
  out["checks"] = checks;
  out["summary"] = rep.summary;
  out["columns"] = rep.columns;
  Json rows = Json::array();
  for (const auto& r : rep.rows) {
    Json rec = Json::object();
    for (std::size_t i = 0; i < r.size(); ++i) rec[rep.columns[i]] = r[i];
    rows.push_back(rec);
  }
  out["rows"] = rows;
  out["errors"] = rep.errors;
  os << out.dump(2) << "\n";
}

// Exit codes: 0 success, 1 usage error, 2 a exact or certified check failed, 3 budget exceeded.
inline int run(const RunConfig& c, std::ostream& os) {
  Report rep;
  std::string status = "ok";
  int code = 0;
  const Limits lim{c.budget, c.threads};
  try {
    const auto it = handlers().find(c.command);
    if (it == handlers().end()) throw std::invalid_argument("unknown command " + c.command);
    if (c.mode == "sample" && !c.seed) throw std::invalid_argument("sample mode requires --seed");
    it->second(c, lim, rep);
    for (const auto& ch : rep.checks)
      if (!ch.passed && ch.status != Status::empirical) {
        status = "property_violation";
        code = 2;
      }
  } catch (const BudgetError& e) {
    status = "budget_error";
    code = 3;
    rep.errors.push_back({{"kind", "budget"}, {"message", e.what()}});
  } catch (const PropertyViolation& e) {
    status = "property_violation";
    code = 2;
    rep.errors.push_back({{"kind", "property"}, {"message", e.what()}});
  } catch (const std::exception& e) {
    status = "error";
    code = 1;
    rep.errors.push_back({{"kind", "invalid"}, {"message", e.what()}});
  }
  if (code != 0 && code != 2) {
    rep.columns.clear();
    rep.rows.clear();
  }
  write_report(os, c, rep, status);
  return code;
}

inline int main_with_args(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact counts of commuting matrices, exponential sums and commutator fibres"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  RunConfig c;
  c.threads = default_threads();

  auto add = [&](const std::string& name, const std::string& help, const std::vector<std::string>& opts) {
    auto* sub = app.add_subcommand(name, help);
    sub->callback([&c, name] { c.command = name; });
    for (const auto& o : opts) {
      if (o == "n") sub->add_option("--n", c.n, "matrix size")->check(CLI::Range(1, 8));
      if (o == "p") sub->add_option("--p", c.p, "prime or comma-separated primes")->delimiter(',');
      if (o == "T") sub->add_option("--T", c.T, "box size or comma-separated sizes")->delimiter(',');
      if (o == "Treal") sub->add_option("--T", c.T_real, "positive real box size");
      if (o == "mode") sub->add_option("--mode", c.mode)->check(CLI::IsMember({"exhaustive", "sample"}));
      if (o == "mode") sub->add_option("--samples", c.samples, "pairs drawn in sample mode");
      if (o == "M") sub->add_option("--M", c.M, "matrix, row-major, comma-separated")->delimiter(',');
      if (o == "A") sub->add_option("--A", c.A)->delimiter(',');
      if (o == "B") sub->add_option("--B", c.B)->delimiter(',');
      if (o == "V") sub->add_option("--V", c.V)->delimiter(',');
      if (o == "U") sub->add_option("--U", c.U)->delimiter(',');
      if (o == "x") sub->add_option("--x", c.x, "vector over F_p")->delimiter(',')->required();
      if (o == "k") sub->add_option("--k", c.k, "block split (default: all)");
      if (o == "variant") sub->add_option("--variant,--part", c.variant, "variant or part (default: all)");
      if (o == "exponent") {
        sub->add_option("--N", c.N)->required();
        sub->add_option("--D", c.D)->required();
        sub->add_option("--L", c.L, "half-integer, e.g. 1, 1.5 or 3/2")->required();
      }
      if (o == "poisson") {
        sub->add_option("--R", c.R, "truncation radius");
        sub->add_option("--tolerance", c.tolerance, "largest admissible tail bound");
      }
    }
    sub->add_option("--seed", c.seed, "64-bit seed");
    sub->add_option("--threads", c.threads)->check(CLI::PositiveNumber);
    sub->add_option("--budget", c.budget, "step limit");
    sub->add_option("--format", c.format)->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--output", c.output, "report path (default: stdout)");
  };
  add("count-integer", "N(T) over a list of T with the scaling table", {"n", "T"});
  add("congruence", "commuting pairs mod p with entries in the box", {"n", "T", "p"});
  add("expsum", "one S(A,B;p) with its counts vector", {"n", "p", "A", "B"});
  add("lemma-exp", "trace vanishing and size of S(A,B;p)", {"n", "p", "mode"});
  add("classes", "conjugacy classes with centralizers and orbits", {"n", "p"});
  add("fibre", "#{(U,V): UV - VU = M}", {"n", "p", "M"});
  add("sigma", "the sum of fibres over the line through M, three ways", {"n", "p", "M"});
  add("lvm", "L(V,M)", {"n", "p", "V", "M"});
  add("e-avg", "averages over the unipotent block group", {"n", "p", "M", "k", "variant"});
  add("aux-avg", "block-vanishing averages over GL_n", {"n", "p", "M", "k", "variant"});
  add("main-lem", "sup of L(V,M) p^(deg f_V - 1) over classes and traceless M", {"n", "p"});
  add("kcomb", "a k-subset with non-zero sum", {"p", "x", "k"});
  add("poisson", "truncated Poisson summation check", {"n", "Treal", "p", "U", "poisson"});
  add("exponent", "D - L + L^2/(N - D + L)", {"exponent"});
  add("optimize-p", "auxiliary prime for a box of size T", {"n", "Treal"});
  add("strata-probe", "histogram of |S| by powers of sqrt(p)", {"n", "p"});

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 1;
  }
  if (!c.output.empty()) {
    std::ofstream f(c.output, std::ios::binary);
    if (!f) {
      err << "cannot open " << c.output << "\n";
      return 1;
    }
    return run(c, f);
  }
  return run(c, out);
}

}  // namespace commutant::cli
