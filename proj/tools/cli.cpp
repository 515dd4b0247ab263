#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <unistd.h>

#include <nlohmann/json.hpp>

#include "fconc/concavity.hpp"
#include "fconc/domain.hpp"
#include "fconc/errors.hpp"
#include "fconc/field_io.hpp"
#include "fconc/harness.hpp"
#include "fconc/heat.hpp"
#include "fconc/probes.hpp"
#include "fconc/screens.hpp"
#include "fconc/transform_spec.hpp"

namespace fconc::cli {

namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

/// Bad input from the user: exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Flags {
  std::optional<std::string> transform;
  std::optional<std::string> field;
  std::optional<std::string> domain;
  std::optional<std::string> out;
  std::optional<std::string> config;
  std::optional<double> tolerance;
  std::optional<double> h;
  std::optional<double> dt;
  std::optional<double> value_floor;
  std::optional<double> a;
  std::optional<double> b;
  std::optional<double> mu;
  std::optional<double> s_max;
  std::vector<double> t;
  std::vector<double> k;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> samples;
  std::optional<std::size_t> jobs;
  bool quasiconcave = false;
  std::string experiment;
};

std::string read_file(const std::string& path, const std::string& flag) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError(flag + ": cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw UsageError(what + ": invalid JSON (" + e.what() + ")");
  }
}

/// --domain takes inline JSON or a file; a file may also be an evolve sidecar
/// carrying the domain under "domain".
std::optional<Domain> load_domain(const Flags& f) {
  if (!f.domain) return std::nullopt;
  const std::string& s = *f.domain;
  const bool inline_json = s.find_first_not_of(" \t") != std::string::npos && s[s.find_first_not_of(" \t")] == '{';
  json j = parse_json(inline_json ? s : read_file(s, "--domain"), "--domain");
  if (j.contains("domain")) j = j.at("domain");
  try {
    return domain_from_json(j);
  } catch (const PreconditionError& e) {
    throw UsageError(std::string("--domain: ") + e.what());
  }
}

Transform load_transform(const Flags& f) {
  if (!f.transform) throw UsageError("--transform is required");
  try {
    return parse_transform(*f.transform);
  } catch (const PreconditionError& e) {
    throw UsageError(std::string("--transform: ") + e.what());
  }
}

Field load_field(const Flags& f, const Interval& range) {
  if (!f.field) throw UsageError("--field is required");
  std::ifstream in(*f.field, std::ios::binary);
  if (!in) throw UsageError("--field: cannot open '" + *f.field + "'");
  try {
    return read_field_csv(in, load_domain(f), *f.field, range);
  } catch (const PreconditionError& e) {
    throw UsageError(std::string("--field: ") + e.what());
  } catch (const DomainError& e) {
    throw UsageError(std::string("--field: ") + *f.field + ": " + e.what());
  }
}

template <class T>
T require(const std::optional<T>& v, const std::string& flag) {
  if (!v) throw UsageError(flag + " is required");
  return *v;
}

void emit(const Flags& f, const std::string& text, std::ostream& out) {
  if (f.out)
    write_atomic(*f.out, text);
  else
    out << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

/// Fills flags not given on the command line from a --config record.
void apply_config(Flags& f, const json& cfg, const std::vector<std::string>& allowed) {
  if (!cfg.is_object()) throw UsageError("--config: expected a JSON object");
  for (auto it = cfg.begin(); it != cfg.end(); ++it) {
    const std::string& key = it.key();
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw UsageError("--config: key '" + key + "' is not a flag of this subcommand");
    const json& v = it.value();
    try {
      auto str = [&](std::optional<std::string>& dst) {
        if (!dst) dst = v.is_string() ? v.get<std::string>() : v.dump();
      };
      auto num = [&](std::optional<double>& dst) {
        if (!dst) dst = v.get<double>();
      };
      auto list = [&](std::vector<double>& dst) {
        if (dst.empty()) dst = v.is_array() ? v.get<std::vector<double>>() : std::vector<double>{v.get<double>()};
      };
      if (key == "transform") str(f.transform);
      else if (key == "field") str(f.field);
      else if (key == "domain") str(f.domain);
      else if (key == "out") str(f.out);
      else if (key == "tolerance") num(f.tolerance);
      else if (key == "h") num(f.h);
      else if (key == "dt") num(f.dt);
      else if (key == "value-floor") num(f.value_floor);
      else if (key == "a") num(f.a);
      else if (key == "b") num(f.b);
      else if (key == "mu") num(f.mu);
      else if (key == "s-max") num(f.s_max);
      else if (key == "t") list(f.t);
      else if (key == "k") list(f.k);
      else if (key == "seed" && !f.seed) f.seed = v.get<std::uint64_t>();
      else if (key == "samples" && !f.samples) f.samples = v.get<std::size_t>();
    } catch (const json::exception&) {
      throw UsageError("--config: key '" + key + "' has the wrong type");
    }
  }
}

// ---------------------------------------------------------------------------

int cmd_check(const Flags& f, std::ostream& out) {
  CheckOptions opts;
  if (f.tolerance) opts.tolerance = *f.tolerance;
  if (f.value_floor) opts.value_floor = *f.value_floor;
  json j;
  ConcavityReport r;
  if (f.quasiconcave) {
    if (f.transform) throw UsageError("--quasiconcave and --transform are exclusive");
    r = check_quasiconcave(load_field(f, Interval(-kInf, kInf, false, false)), opts);
    j["transform"] = "quasiconcave";
  } else {
    const Transform F = load_transform(f);
    const Field field = load_field(f, Interval(-kInf, kInf, false, false));
    try {
      r = check_f_concave(F, field, opts);
    } catch (const DomainError& e) {
      throw UsageError(std::string("--field: ") + e.what());
    }
    j["transform"] = F.spec();
  }
  j["field"] = *f.field;
  j["report"] = r;
  j["verdict"] = r.certified() ? "pass" : "fail";
  emit(f, dump(j), out);
  return r.certified() ? kExitPass : kExitFail;
}

int cmd_mean(const Flags& f, std::ostream& out) {
  const Transform F = load_transform(f);
  const double a = require(f.a, "--a");
  const double b = require(f.b, "--b");
  const double mu = f.mu.value_or(0.5);
  if (!(mu >= 0 && mu <= 1)) throw UsageError("--mu must lie in [0, 1]");
  double m = 0;
  try {
    m = f_mean(F, a, b, mu);
  } catch (const DomainError& e) {
    throw UsageError(std::string("--a/--b: ") + e.what());
  }
  emit(f, dump({{"transform", F.spec()}, {"a", a}, {"b", b}, {"mu", mu}, {"mean", json_number(m)}}), out);
  return kExitPass;
}

std::string with_time(const std::string& path, double t, bool several, const std::string& ext) {
  fs::path p(path);
  std::string stem = (p.parent_path() / p.stem()).string();
  if (several) stem += "_t=" + format_double(t);
  return stem + ext;
}

int cmd_evolve(const Flags& f, std::ostream& out) {
  const std::string dest = require(f.out, "--out");
  if (f.t.empty()) throw UsageError("--t is required (repeatable)");
  const Field initial = load_field(f, Interval::half_line(0.0));
  const double dt = require(f.dt, "--dt");
  std::vector<HeatState> states;
  try {
    states = fd_evolve(initial, f.t, dt);
  } catch (const PreconditionError& e) {
    throw UsageError(std::string("--t/--dt: ") + e.what());
  }
  const std::string ext = fs::path(dest).has_extension() ? fs::path(dest).extension().string() : ".csv";
  json summary = json::array();
  for (const HeatState& s : states) {
    const bool several = states.size() > 1;
    const std::string csv = several ? with_time(dest, s.time, true, ext) : dest;
    const std::string side = with_time(csv, s.time, false, ".json");
    json meta = s;
    meta["domain"] = s.field.domain();
    meta["initial"] = *f.field;
    write_atomic(csv, field_to_csv(s.field));
    write_atomic(side, dump(meta));
    summary.push_back({{"time", s.time}, {"field", csv}, {"sidecar", side}});
  }
  out << dump(summary);
  return kExitPass;
}

int cmd_eigen(const Flags& f, std::ostream& out) {
  const std::optional<Domain> d = load_domain(f);
  if (!d) throw UsageError("--domain is required");
  const EigenPair e = first_eigenpair(*d, f.tolerance.value_or(1e-8));
  json j{{"eigenvalue", e.eigenvalue}, {"residual", e.residual}, {"iterations", e.iterations}, {"domain", *d}};
  if (f.transform) {
    CheckOptions opts;
    if (f.value_floor) opts.value_floor = *f.value_floor;
    const Transform F = load_transform(f);
    j["transform"] = F.spec();
    j["report"] = check_f_concave(F, e.eigenfunction, opts);
  }
  if (f.out) {
    write_atomic(*f.out, field_to_csv(e.eigenfunction));
    j["field"] = *f.out;
    write_atomic(with_time(*f.out, 0, false, ".json"), dump(j));
  }
  out << dump(j);
  return kExitPass;
}

int cmd_screen(const Flags& f, std::ostream& out) {
  const Transform F = load_transform(f);
  const std::vector<double> ks = f.k.empty() ? std::vector<double>{0.5, 1, 2} : f.k;
  const auto res = gaussian_screen(F, ks, f.s_max.value_or(3.0), f.h.value_or(0.01), f.tolerance.value_or(1e-9));
  bool any_violation = false;
  for (const ProbeResult& r : res) any_violation = any_violation || r.outcome == ProbeOutcome::violated;
  const json j{{"transform", F.spec()}, {"results", res}, {"verdict", any_violation ? "fail" : "pass"}};
  emit(f, dump(j), out);
  return any_violation ? kExitFail : kExitPass;
}

int cmd_audit(const Flags& f, std::ostream& out) {
  const Transform F = load_transform(f);
  const AuditReport r = admissibility_audit(F, f.samples.value_or(1000));
  json mono = json::array();
  for (const auto& m : r.monotonicity_failures)
    mono.push_back({{"tau_lo", m.tau_lo}, {"tau_hi", m.tau_hi}, {"value_lo", json_number(m.value_lo)},
                    {"value_hi", json_number(m.value_hi)}});
  json trip = json::array();
  for (const auto& t : r.roundtrip_failures)
    trip.push_back({{"tau", t.tau}, {"recovered", t.recovered}, {"error", t.error}});
  const json j{{"transform", F.spec()},
               {"interval", F.interval().to_string()},
               {"n_samples", r.n_samples},
               {"max_roundtrip_error", r.max_roundtrip_error},
               {"monotonicity_failures", mono},
               {"roundtrip_failures", trip},
               {"verdict", r.pass ? "pass" : "fail"}};
  emit(f, dump(j), out);
  return r.pass ? kExitPass : kExitFail;
}

int cmd_harness_list(const Flags& f, std::ostream& out) {
  json j = json::array();
  for (const ExperimentInfo& e : list_experiments())
    j.push_back({{"id", e.id}, {"anchor", e.anchor}, {"asserted", e.asserted}});
  emit(f, dump(j), out);
  return kExitPass;
}

/// Experiment overrides from --config and the generic flags (flags win).
json harness_overrides(const Flags& f, const std::string& id, const json& file_cfg) {
  json o = json::object();
  if (!file_cfg.is_null()) {
    if (!file_cfg.is_object()) throw UsageError("--config: expected a JSON object");
    // a config for `harness run all` maps ids to overrides
    o = file_cfg.contains(id) && file_cfg.at(id).is_object() ? file_cfg.at(id) : file_cfg;
  }
  const json base = default_config(id);
  auto flag_error = [&](const std::string& flag) {
    return UsageError(flag + " does not apply to experiment " + id);
  };
  if (f.transform) {
    if (base.contains("transforms")) o["transforms"] = json::array({*f.transform});
    else if (base.contains("transform")) o["transform"] = *f.transform;
    else throw flag_error("--transform");
  }
  auto scalar = [&](const std::optional<double>& v, const std::string& key, const std::string& flag) {
    if (!v) return;
    if (!base.contains(key)) throw flag_error(flag);
    o[key] = *v;
  };
  scalar(f.tolerance, "tolerance", "--tolerance");
  scalar(f.dt, "dt", "--dt");
  scalar(f.s_max, "s_max", "--s-max");
  scalar(f.value_floor, "value_floor", "--value-floor");
  if (!f.k.empty()) {
    if (!base.contains("k")) throw flag_error("--k");
    o["k"] = f.k;
  }
  if (!f.t.empty()) {
    if (!base.contains("t")) throw flag_error("--t");
    o["t"] = f.t;
  }
  if (f.samples) {
    if (!base.contains("n_fields")) throw flag_error("--samples");
    o["n_fields"] = *f.samples;
  }
  if (f.domain) {
    const std::optional<Domain> d = load_domain(f);
    if (base.contains("domain")) o["domain"] = *d;
    else if (base.contains("domains")) o["domains"] = json::array({*d});
    else throw flag_error("--domain");
  }
  if (f.h) {
    auto set_h = [&](json dom) {
      dom.erase("n");
      dom["h"] = *f.h;
      return dom;
    };
    const json cur = merge_config(base, o);
    if (cur.contains("domain")) {
      o["domain"] = set_h(cur.at("domain"));
    } else if (cur.contains("domains")) {
      json ds = json::array();
      for (const json& dj : cur.at("domains")) ds.push_back(set_h(dj));
      o["domains"] = ds;
    } else if (base.contains("ds")) {
      o["ds"] = *f.h;
    } else {
      throw flag_error("--h");
    }
  }
  return o;
}

int cmd_harness_run(const Flags& f, std::ostream& out, std::ostream& err) {
  json file_cfg;
  if (f.config) file_cfg = parse_json(read_file(*f.config, "--config"), "--config");
  std::vector<std::string> ids;
  if (f.experiment == "all") {
    for (const ExperimentInfo& e : list_experiments()) ids.push_back(e.id);
  } else {
    const auto& reg = list_experiments();
    if (std::none_of(reg.begin(), reg.end(), [&](const auto& e) { return e.id == f.experiment; }))
      throw UsageError("unknown experiment id '" + f.experiment + "' (see `harness list`)");
    ids.push_back(f.experiment);
  }
  std::vector<json> overrides;
  for (const std::string& id : ids) overrides.push_back(harness_overrides(f, id, file_cfg));

  // experiments are independent; reports are collected and written by this
  // thread only
  std::vector<ExperimentReport> reports(ids.size());
  const std::size_t jobs = std::max<std::size_t>(1, f.jobs.value_or(1));
  for (std::size_t start = 0; start < ids.size(); start += jobs) {
    std::vector<std::future<ExperimentReport>> batch;
    for (std::size_t i = start; i < std::min(ids.size(), start + jobs); ++i)
      batch.push_back(std::async(jobs > 1 ? std::launch::async : std::launch::deferred,
                                 [&, i] { return run_experiment(ids[i], overrides[i], f.seed); }));
    for (std::size_t i = 0; i < batch.size(); ++i) reports[start + i] = batch[i].get();
  }

  bool failed = false;
  for (const ExperimentReport& r : reports) {
    failed = failed || r.verdict == ExperimentVerdict::fail;
    err << r.experiment_id << ": " << to_string(r.verdict) << "\n";
  }
  if (reports.size() == 1) {
    emit(f, report_to_string(reports.front()), out);
  } else {
    json all = json::array();
    for (const ExperimentReport& r : reports) all.push_back(r);
    emit(f, dump(all), out);
  }
  return failed ? kExitFail : kExitPass;
}

void add_common(CLI::App* sub, Flags& f, const std::vector<std::string>& which) {
  auto has = [&](const char* name) { return std::find(which.begin(), which.end(), name) != which.end(); };
  if (has("transform")) sub->add_option("--transform", f.transform, "transform spec, e.g. logpower:alpha=0.5");
  if (has("field")) sub->add_option("--field", f.field, "field CSV (x,value or x,y,value)");
  if (has("domain")) sub->add_option("--domain", f.domain, "domain JSON, inline or a file");
  if (has("tolerance")) sub->add_option("--tolerance", f.tolerance, "slack tolerance");
  if (has("h")) sub->add_option("--h", f.h, "grid spacing");
  if (has("dt")) sub->add_option("--dt", f.dt, "time step");
  if (has("t")) sub->add_option("--t", f.t, "target time (repeatable)")->take_all()->allow_extra_args(false);
  if (has("k")) sub->add_option("--k", f.k, "screen amplitude (repeatable)")->allow_extra_args(false);
  if (has("seed")) sub->add_option("--seed", f.seed, "random seed");
  if (has("out")) sub->add_option("--out", f.out, "output path (written atomically)");
  if (has("config")) sub->add_option("--config", f.config, "JSON record merged before flags");
  if (has("value-floor")) sub->add_option("--value-floor", f.value_floor, "skip triples touching smaller values");
  if (has("a")) sub->add_option("--a", f.a, "first mean argument");
  if (has("b")) sub->add_option("--b", f.b, "second mean argument");
  if (has("mu")) sub->add_option("--mu", f.mu, "mean weight in [0, 1]");
  if (has("samples")) sub->add_option("--samples", f.samples, "sample count");
  if (has("s-max")) sub->add_option("--s-max", f.s_max, "screen range [0, s_max]");
}

}  // namespace

void write_atomic(const std::string& path, const std::string& content) {
  const fs::path target(path);
  const fs::path tmp = target.string() + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw UsageError("--out: cannot write '" + tmp.string() + "'");
    os << content;
    os.flush();
    if (!os) throw std::runtime_error("write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw UsageError("--out: cannot move output into place at '" + path + "': " + ec.message());
  }
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"fconc: F-concavity checks, heat flow and experiment harness"};
  app.name("fconc");
  // -h is left free for the --h grid-spacing flag
  app.set_help_flag("--help", "print this help message and exit");
  app.require_subcommand(1);
  Flags f;

  const std::vector<std::string> check_flags = {"transform", "field", "domain", "tolerance", "value-floor", "out",
                                                "config"};
  const std::vector<std::string> mean_flags = {"transform", "a", "b", "mu", "out", "config"};
  const std::vector<std::string> evolve_flags = {"field", "domain", "dt", "t", "out", "config"};
  const std::vector<std::string> eigen_flags = {"domain", "tolerance", "transform", "value-floor", "out", "config"};
  const std::vector<std::string> screen_flags = {"transform", "k", "s-max", "h", "tolerance", "out", "config"};
  const std::vector<std::string> audit_flags = {"transform", "samples", "out", "config"};
  const std::vector<std::string> run_flags = {"transform", "domain", "tolerance", "h",    "dt",      "t",
                                              "k",         "seed",   "out",       "config", "samples", "s-max",
                                              "value-floor"};

  CLI::App* check = app.add_subcommand("check", "certify F-concavity of a field on its grid");
  add_common(check, f, check_flags);
  check->add_flag("--quasiconcave", f.quasiconcave, "check quasiconcavity instead of F-concavity");
  CLI::App* mean = app.add_subcommand("mean", "quasi-arithmetic F-mean of two values");
  add_common(mean, f, mean_flags);
  CLI::App* evolve = app.add_subcommand("evolve", "Dirichlet heat flow of a field");
  add_common(evolve, f, evolve_flags);
  CLI::App* eigen = app.add_subcommand("eigen", "first Dirichlet eigenpair");
  add_common(eigen, f, eigen_flags);
  CLI::App* screen = app.add_subcommand("screen", "Gaussian screen s -> F(k exp(-s^2))");
  add_common(screen, f, screen_flags);
  CLI::App* audit = app.add_subcommand("audit", "admissibility audit of a transform");
  add_common(audit, f, audit_flags);
  CLI::App* harness = app.add_subcommand("harness", "named experiments");
  harness->require_subcommand(1);
  CLI::App* list = harness->add_subcommand("list", "experiment ids and anchors");
  list->add_option("--out", f.out, "output path (written atomically)");
  CLI::App* run = harness->add_subcommand("run", "run one experiment, or all");
  run->add_option("experiment", f.experiment, "experiment id or 'all'")->required();
  add_common(run, f, run_flags);
  run->add_option("--jobs", f.jobs, "experiments run concurrently for 'all'");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kExitPass;
    }
    err << "fconc: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    auto with_config = [&](const std::vector<std::string>& allowed) {
      if (!f.config) return;
      apply_config(f, parse_json(read_file(*f.config, "--config"), "--config"), allowed);
    };
    if (check->parsed()) return with_config(check_flags), cmd_check(f, out);
    if (mean->parsed()) return with_config(mean_flags), cmd_mean(f, out);
    if (evolve->parsed()) return with_config(evolve_flags), cmd_evolve(f, out);
    if (eigen->parsed()) return with_config(eigen_flags), cmd_eigen(f, out);
    if (screen->parsed()) return with_config(screen_flags), cmd_screen(f, out);
    if (audit->parsed()) return with_config(audit_flags), cmd_audit(f, out);
    if (list->parsed()) return cmd_harness_list(f, out);
    if (run->parsed()) return cmd_harness_run(f, out, err);
    err << "fconc: no subcommand\n";
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "fconc: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << "fconc: config field " << e.what() << "\n";
    return kExitUsage;
  } catch (const PreconditionError& e) {
    err << "fconc: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "fconc: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NumericalError& e) {
    err << "fconc: numerical failure: " << e.what() << " (achieved " << e.achieved() << ")\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "fconc: " << e.what() << "\n";
    return kExitNumerical;
  }
}

}  // namespace fconc::cli
