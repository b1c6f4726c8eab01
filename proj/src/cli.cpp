#include "gencoupon/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <variant>

#include <CLI11.hpp>
#include <json.hpp>

#include "gencoupon/codec.hpp"
#include "gencoupon/errors.hpp"
#include "gencoupon/sim.hpp"
#include "gencoupon/theory.hpp"
#include "gencoupon/validate.hpp"

namespace gencoupon {

namespace {

using Json = nlohmann::ordered_json;

class UsageError : public Error {
 public:
  using Error::Error;
};

struct RunConfig {
  std::string command;
  std::string subcommand;
  std::uint64_t n = 0;
  std::uint64_t m = 0;
  std::uint64_t N = 1000;
  std::uint64_t h = 0;
  std::uint64_t q = 256;
  std::uint64_t d = 1;
  std::uint64_t s = 0;
  std::uint64_t k = 0;
  double t = 0.0;
  double y = 0.0;
  std::uint64_t trials = 10'000;
  std::uint64_t seed = 0;
  double tol = 1e-8;
  std::string out;
  std::string format = "csv";
  std::string spec;
  std::string h_list;
  std::string samples;
  std::uint64_t t_points = 50;
  bool payload = false;
  bool quick = false;
  double tamper_alpha = 1.0;
  unsigned threads = 1;

  CLI::App* leaf = nullptr;
  bool given(const std::string& flag) const { return leaf->count(flag) > 0; }
  void require(std::initializer_list<const char*> flags) const {
    for (const char* f : flags)
      if (!given(f)) throw UsageError(command + " " + subcommand + ": missing required flag " + f);
  }
};

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

using Cell = std::variant<double, std::uint64_t, std::string>;

std::string cell_text(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return fmt(*d);
  if (const auto* u = std::get_if<std::uint64_t>(&c)) return std::to_string(*u);
  return std::get<std::string>(c);
}

Json cell_json(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) {
    if (!std::isfinite(*d)) return nullptr;
    return *d;
  }
  if (const auto* u = std::get_if<std::uint64_t>(&c)) return *u;
  return std::get<std::string>(c);
}

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<std::string> notes;
  Json json_result;  // replaces the row list in JSON output when set
};

// Parameter echo; thread count and output path are excluded so reports do not
// depend on them.
std::vector<std::pair<std::string, std::string>> param_echo(const RunConfig& c) {
  return {{"n", std::to_string(c.n)},         {"m", std::to_string(c.m)},
          {"N", std::to_string(c.N)},         {"h", std::to_string(c.h)},
          {"q", std::to_string(c.q)},         {"d", std::to_string(c.d)},
          {"s", std::to_string(c.s)},         {"k", std::to_string(c.k)},
          {"t", fmt(c.t)},                    {"y", fmt(c.y)},
          {"trials", std::to_string(c.trials)}, {"tol", fmt(c.tol)},
          {"spec", c.spec},                   {"h-list", c.h_list},
          {"t-points", std::to_string(c.t_points)}, {"payload", c.payload ? "1" : "0"},
          {"format", c.format}};
}

std::string render(const Table& table, const RunConfig& c) {
  std::ostringstream os;
  const std::string command = c.command + (c.subcommand.empty() ? "" : " " + c.subcommand);
  if (c.format == "json") {
    Json j;
    j["tool"] = "gencoupon";
    j["version"] = kToolVersion;
    j["command"] = command;
    Json params;
    for (const auto& [key, value] : param_echo(c)) params[key] = value;
    j["params"] = params;
    j["seed"] = c.seed;
    j["notes"] = table.notes;
    if (!table.json_result.is_null()) {
      j["result"] = table.json_result;
    } else {
      Json rows = Json::array();
      for (const auto& row : table.rows) {
        Json r;
        for (std::size_t i = 0; i < table.columns.size(); ++i) r[table.columns[i]] = cell_json(row[i]);
        rows.push_back(r);
      }
      j["rows"] = rows;
    }
    os << j.dump(2) << '\n';
    return os.str();
  }
  os << "# gencoupon " << kToolVersion << '\n';
  os << "# command: " << command << '\n';
  os << "# params:";
  for (const auto& [key, value] : param_echo(c)) os << ' ' << key << '=' << value;
  os << '\n';
  os << "# seed: " << c.seed << '\n';
  for (const auto& note : table.notes) os << "# note: " << note << '\n';
  for (std::size_t i = 0; i < table.columns.size(); ++i) os << (i ? "," : "") << table.columns[i];
  os << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << cell_text(row[i]);
    os << '\n';
  }
  return os.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot open output file " + path);
  f << text;
}

std::uint32_t u32(std::uint64_t v, const char* name) {
  if (v > 0xFFFFFFFFULL) throw UsageError(std::string(name) + " is too large");
  return static_cast<std::uint32_t>(v);
}

SamplePlan plan_of(const RunConfig& c) { return {c.trials, c.seed, c.threads}; }

Table result_table(const std::string& quantity, const TheoryResult& r) {
  Table t;
  t.columns = {"quantity", "value", "abs_error", "method"};
  t.rows.push_back({quantity, r.value, r.abs_error, to_string(r.method)});
  return t;
}

Table value_table(const std::string& quantity, double value, Method method) {
  return result_table(quantity, {value, 0.0, method});
}

// ---------------------------------------------------------------------------

Table cmd_theory(const RunConfig& c) {
  const std::string& sub = c.subcommand;
  if (sub == "eni") {
    c.require({"--h"});
    return result_table("expected_Ni", expected_Ni(u32(c.q, "q"), u32(c.h, "h")));
  }
  if (sub == "eni-approx") {
    c.require({"--h"});
    return value_table("expected_Ni_upper_approx", expected_Ni_upper_approx(u32(c.q, "q"), u32(c.h, "h")),
                       Method::closed_form);
  }
  if (sub == "cdf-ni") {
    c.require({"--h", "--s"});
    return value_table("cdf_Ni", cdf_Ni(u32(c.q, "q"), u32(c.h, "h"), c.s), Method::closed_form);
  }
  if (sub == "ccdf-bound") {
    c.require({"--h", "--s"});
    if (c.s < c.h) throw UsageError("ccdf-bound requires s >= h");
    const CcdfBound b = ccdf_Ni_bound(u32(c.q, "q"), u32(c.h, "h"), c.s);
    Table t;
    t.columns = {"quantity", "value"};
    t.rows = {{std::string("exact_ccdf"), b.exact},          {std::string("bound_qh"), b.bound_qh},
              {std::string("bound_2inf"), b.bound_2inf},      {std::string("gap_qh"), b.gap_qh},
              {std::string("gap_2inf"), b.gap_2inf},          {std::string("alpha_qh"), alpha(u32(c.q, "q"), u32(c.h, "h"))},
              {std::string("alpha_2inf"), alpha_2_inf()}};
    return t;
  }
  if (sub == "et") {
    c.require({"--n", "--m"});
    return result_table("expected_T", expected_T(u32(c.n, "n"), u32(c.m, "m"), c.tol));
  }
  if (sub == "general") {
    c.require({"--n", "--spec"});
    return result_table("expected_general",
                        expected_general(ThresholdSpec::parse(u32(c.n, "n"), c.spec), c.tol));
  }
  if (sub == "k-of-n") {
    c.require({"--n", "--k", "--m"});
    return result_table("expected_k_of_n", expected_k_of_n(u32(c.n, "n"), u32(c.k, "k"), u32(c.m, "m"), c.tol));
  }
  if (sub == "asymptotic") {
    c.require({"--n", "--m"});
    Table t = value_table("asymptotic_T", asymptotic_T(static_cast<double>(c.n), static_cast<double>(c.m)),
                          Method::asymptotic);
    t.notes.push_back("leading terms only; the o(n) remainder is not included");
    return t;
  }
  if (sub == "limit-cdf") {
    c.require({"--y", "--m"});
    return value_table("limit_cdf", limit_cdf(c.y, static_cast<double>(c.m)), Method::closed_form);
  }
  if (sub == "failure-bound") {
    c.require({"--n", "--h", "--t"});
    Table t = value_table("failure_lower_bound",
                          failure_lower_bound(static_cast<double>(c.n), static_cast<double>(c.h), c.t),
                          Method::asymptotic);
    t.notes.push_back("leading expression only; an additive O(log log n / log n) term is not included");
    return t;
  }
  throw UsageError("unknown theory target " + sub);
}

Table summary_table(const TrialSummary& s) {
  Table t;
  t.columns = {"statistic", "value"};
  t.rows = {{std::string("mean"), s.mean},
            {std::string("stderr"), s.stderr_mean},
            {std::string("count"), static_cast<std::uint64_t>(s.count)},
            {std::string("min"), s.min},
            {std::string("max"), s.max}};
  for (int pct : {1, 5, 25, 50, 75, 95, 99})
    t.rows.push_back({"q" + std::to_string(pct), s.quantile(pct / 100.0)});
  t.json_result = summary_to_json(s);
  return t;
}

std::string raw_header(const RunConfig& c) {
  std::ostringstream os;
  os << "# gencoupon " << kToolVersion << "\n# command: " << c.command << ' ' << c.subcommand << " (raw samples)\n";
  os << "# params:";
  for (const auto& [key, value] : param_echo(c)) os << ' ' << key << '=' << value;
  os << "\n# seed: " << c.seed << '\n';
  return os.str();
}

void write_raw_values(const RunConfig& c, const std::vector<double>& values) {
  std::string text = raw_header(c) + "trial,seed,T\n";
  for (std::size_t i = 0; i < values.size(); ++i)
    text += std::to_string(i) + ',' + std::to_string(trial_seed(c.seed, i)) + ',' + fmt(values[i]) + '\n';
  write_text(c.samples, text);
}

GenerationConfig generation_config(const RunConfig& c) {
  try {
    return GenerationConfig(c.N, c.h, c.d, Field::of_order(u32(c.q, "q")));
  } catch (const ConfigError& e) {
    throw UsageError(e.what());
  }
}

Table cmd_simulate(const RunConfig& c) {
  const std::string& sub = c.subcommand;
  if (sub == "coupon") {
    c.require({"--n", "--m"});
    auto values = sample_T_values(u32(c.n, "n"), u32(c.m, "m"), plan_of(c));
    if (!c.samples.empty()) write_raw_values(c, values);
    return summary_table(summarize(std::move(values)));
  }
  if (sub == "general-event") {
    c.require({"--n", "--spec"});
    const auto spec = ThresholdSpec::parse(u32(c.n, "n"), c.spec);
    auto values = sample_general_event_values(spec, plan_of(c));
    if (!c.samples.empty()) write_raw_values(c, values);
    return summary_table(summarize(std::move(values)));
  }
  if (sub == "rlnc") {
    c.require({"--h"});
    const GenerationConfig config = generation_config(c);
    const auto records = c.payload ? sample_codec_records_with_payload(config, plan_of(c))
                                   : sample_codec_records(config, plan_of(c));
    if (!c.samples.empty()) {
      std::string text = raw_header(c) + trial_csv_header(config) + '\n';
      for (const auto& r : records) text += to_csv_row(r, config) + '\n';
      write_text(c.samples, text);
    }
    Table t = summary_table(summarize_records(records));
    if (c.payload) {
      const bool ok = std::all_of(records.begin(), records.end(), [](const TrialRecord& r) { return r.decoded_ok; });
      t.notes.push_back(std::string("payload decode check: ") + (ok ? "all trials decoded correctly" : "MISMATCH"));
      if (!ok) throw NumericError("decoded payload mismatch", 0.0, 0.0);
    }
    t.notes.push_back("overhead (mean/N - 1): " + fmt(t.json_result["mean"].get<double>() / c.N - 1.0));
    return t;
  }
  throw UsageError("unknown simulate mode " + sub);
}

std::vector<std::uint64_t> parse_list(const std::string& text) {
  std::vector<std::uint64_t> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stoull(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw UsageError("bad list entry '" + item + "'");
    }
  }
  return v;
}

Table cmd_figure(const RunConfig& c, std::ostream& err) {
  const std::uint32_t q = u32(c.q, "q");
  if (c.subcommand == "a") {
    std::vector<std::uint64_t> hs;
    if (c.h_list.empty()) {
      for (std::uint64_t h = 1; h <= c.N; ++h)
        if (c.N % h == 0) hs.push_back(h);
    } else {
      hs = parse_list(c.h_list);
    }
    Table t;
    t.columns = {"h", "n", "expected_T", "asymptotic_m_h", "asymptotic_m_eni", "large_m", "sim_mean", "sim_stderr"};
    for (std::uint64_t h : hs) {
      if (h == 0 || c.N % h != 0) {
        err << "warning: skipping h=" << h << ": does not divide N=" << c.N << '\n';
        continue;
      }
      const std::uint64_t n = c.N / h;
      const double nd = static_cast<double>(n);
      const double eni = expected_Ni(q, u32(h, "h")).value;
      const double et = expected_T(u32(n, "n"), u32(h, "h"), c.tol).value;
      const double asym_h = n >= 2 ? asymptotic_T(nd, static_cast<double>(h)) : std::nan("");
      const double asym_eni = n >= 2 ? asymptotic_T(nd, eni) : std::nan("");
      const GenerationConfig config(c.N, h, c.d, Field::of_order(q));
      const SamplePlan plan{c.trials, trial_seed(c.seed, h), c.threads};
      const TrialSummary sim = sample_codec(config, plan);
      t.rows.push_back({h, n, et, asym_h, asym_eni, large_m_T(nd, static_cast<double>(h)), sim.mean, sim.stderr_mean});
    }
    t.notes.push_back("asymptotic_m_eni plugs E[N_i] in for m; asymptotic columns are nan for n = 1");
    return t;
  }
  if (c.subcommand == "b") {
    const std::uint64_t n = c.given("--n") ? c.n : 100;
    const std::uint64_t h = c.given("--h") ? c.h : 2;
    if (n < 2) throw UsageError("figure b needs n >= 2");
    if (h < 1) throw UsageError("figure b needs h >= 1");
    const double nd = static_cast<double>(n);
    const double center = nd * std::log(nd) + (static_cast<double>(h) - 1.0) * nd * std::log(std::log(nd));
    const double lo = std::max(static_cast<double>(n * h), std::floor(center - 2.0 * nd));
    const double hi = std::ceil(center + 5.0 * nd);
    const std::uint64_t points = std::max<std::uint64_t>(c.t_points, 2);
    std::vector<double> grid;
    for (std::uint64_t i = 0; i < points; ++i) {
      const double t = std::round(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1));
      if (grid.empty() || t > grid.back()) grid.push_back(t);
    }
    const GenerationConfig config(n * h, h, c.d, Field::of_order(q));
    const TrialSummary sim = sample_codec(config, plan_of(c));
    const auto curve = empirical_failure_curve(sim, grid);
    Table t;
    t.columns = {"t", "failure_bound", "empirical_failure"};
    for (const auto& p : curve)
      t.rows.push_back({p.t, failure_lower_bound(nd, static_cast<double>(h), p.t), p.fraction_above});
    t.notes.push_back("bound omits its additive O(log log n / log n) term");
    return t;
  }
  throw UsageError("unknown figure panel " + c.subcommand);
}

int cmd_validate(const RunConfig& c, std::ostream& out) {
  ValidationOptions options;
  options.quick = c.quick;
  options.constants.alpha_qh_scale = c.tamper_alpha;
  options.seed = c.seed;
  options.threads = c.threads;
  const auto results = run_validation(options);
  bool all = true;
  std::ostringstream os;
  for (const auto& r : results) {
    all = all && r.passed;
    os << (r.passed ? "PASS " : "FAIL ") << r.name << " deviation=" << fmt(r.deviation) << " limit=" << fmt(r.limit)
       << " (" << r.detail << ")\n";
  }
  os << (all ? "all checks passed\n" : "validation FAILED\n");
  if (c.out.empty())
    out << os.str();
  else
    write_text(c.out, os.str());
  return all ? kExitOk : kExitValidationFailed;
}

void add_common_flags(CLI::App* app, RunConfig& c) {
  app->set_help_flag("--help", "print this help message and exit");
  app->add_option("--n", c.n, "number of generations / coupons");
  app->add_option("--m", c.m, "copies per coupon");
  app->add_option("--N", c.N, "total information packets")->capture_default_str();
  app->add_option("--h", c.h, "generation size");
  app->add_option("--q", c.q, "field order (prime or 256)")->capture_default_str();
  app->add_option("--d", c.d, "symbols per packet")->capture_default_str();
  app->add_option("--s", c.s, "number of coded packets from one generation");
  app->add_option("--t", c.t, "number of coded packets collected");
  app->add_option("--k", c.k, "number of coupons required");
  app->add_option("--y", c.y, "argument of the limit law");
  app->add_option("--trials", c.trials, "Monte Carlo trials")->capture_default_str();
  app->add_option("--seed", c.seed, "master seed")->capture_default_str();
  app->add_option("--tol", c.tol, "absolute quadrature tolerance")->capture_default_str();
  app->add_option("--out", c.out, "output file (default: stdout)");
  app->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  app->add_option("--spec", c.spec, "threshold profile k1:m1,k2:m2,...");
  app->add_option("--h-list", c.h_list, "comma-separated generation sizes (figure a)");
  app->add_option("--t-points", c.t_points, "number of t grid points (figure b)")->capture_default_str();
  app->add_option("--samples", c.samples, "write raw per-trial samples to this CSV file");
  app->add_option("--threads", c.threads, "worker threads")->capture_default_str();
  app->add_flag("--payload", c.payload, "carry and verify payloads (simulate rlnc)");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Random linear network coding over generations and the collector's brotherhood problem",
               "gencoupon"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  std::map<CLI::App*, std::pair<std::string, std::string>> leaves;
  auto add_group = [&](const std::string& name, const std::string& help, std::vector<std::string> subs) {
    CLI::App* group = app.add_subcommand(name, help);
    group->require_subcommand(1);
    for (const auto& s : subs) {
      CLI::App* leaf = group->add_subcommand(s);
      add_common_flags(leaf, c);
      leaves[leaf] = {name, s};
    }
  };
  add_group("theory", "evaluate closed forms, integrals and asymptotics",
            {"eni", "eni-approx", "cdf-ni", "ccdf-bound", "et", "general", "k-of-n", "asymptotic", "limit-cdf",
             "failure-bound"});
  add_group("simulate", "Monte Carlo simulation", {"coupon", "rlnc", "general-event"});
  add_group("figure", "data for the throughput and failure-probability plots", {"a", "b"});
  CLI::App* validate = app.add_subcommand("validate", "run the cross-check battery");
  add_common_flags(validate, c);
  validate->add_flag("--quick", c.quick, "reduced battery");
  validate->add_option("--tamper-alpha", c.tamper_alpha, "scale alpha_{q,h} (fault injection)");
  leaves[validate] = {"validate", ""};

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }

  for (const auto& [leaf, names] : leaves) {
    if (leaf->parsed()) {
      c.leaf = leaf;
      c.command = names.first;
      c.subcommand = names.second;
    }
  }

  try {
    if (c.command == "validate") return cmd_validate(c, out);
    Table table;
    if (c.command == "theory") table = cmd_theory(c);
    else if (c.command == "simulate") table = cmd_simulate(c);
    else table = cmd_figure(c, err);
    const std::string text = render(table, c);
    if (c.out.empty())
      out << text;
    else
      write_text(c.out, text);
    return kExitOk;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ContractError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const SizeError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const NumericError& e) {
    err << "numeric error: " << e.what() << " (partial value " << fmt(e.partial_value()) << ", error "
        << fmt(e.partial_error()) << ")\n";
    return kExitNumeric;
  } catch (const ResourceError& e) {
    err << "resource error: " << e.what() << '\n';
    return kExitNumeric;
  }
}

}  // namespace gencoupon
