#include "dsee/cli/commands.hpp"

#include <fstream>
#include <memory>
#include <ostream>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "dsee/bounds.hpp"
#include "dsee/error.hpp"
#include "dsee/multiplayer.hpp"
#include "dsee/rng.hpp"
#include "dsee/verify.hpp"

namespace dsee::cli {
namespace fs = std::filesystem;

namespace {

constexpr const char* kCurveHeader = "t,mean_regret,std,q05,q95,reps,analytic_bound\n";
constexpr const char* kVerifyHeader = "s,delta,empirical,bound,se,reps,pass\n";

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
  if (!f) throw std::runtime_error("write failed for " + path.string());
}

std::vector<std::uint64_t> checkpoints_for(const ExperimentConfig& cfg) {
  if (cfg.checkpoints.empty()) return default_checkpoints(cfg.horizon);
  std::vector<std::uint64_t> out;
  for (auto t : cfg.checkpoints)
    if (t <= cfg.horizon) out.push_back(t);
  if (out.empty()) out.push_back(cfg.horizon);
  return out;
}

// Constants with zeta (and u0) filled from the bandit when it is light-tailed.
PolicyConfig resolved(const PolicyBlock& p, const Bandit& bandit) {
  PolicyConfig c = p.config;
  c.constants = with_derived_light_tail(c.constants, bandit);
  return c;
}

std::vector<std::string> issues_for(const PolicyBlock& p, const Bandit& bandit,
                                    const std::optional<MultiplayerBlock>& mp) {
  std::vector<std::string> issues;
  if (p.kind == PolicyBlock::Kind::Dsee) issues = check_preconditions(resolved(p, bandit), bandit);
  if (mp) {
    if (p.kind == PolicyBlock::Kind::Ucb1) issues.emplace_back("the multiplayer runner needs a dsee policy");
    if (mp->players < 1 || mp->players > bandit.size())
      issues.push_back(fmt::format("multiplayer M = {} outside 1..{}", mp->players, bandit.size()));
  }
  return issues;
}

std::string curve_csv(const RegretCurve& curve, const std::vector<std::optional<double>>& bound) {
  std::string csv = kCurveHeader;
  for (std::size_t i = 0; i < curve.points.size(); ++i) {
    const auto& pt = curve.points[i];
    csv += fmt::format("{},{},{},{},{},{},{}\n", pt.t, format_number(pt.mean), format_number(pt.std),
                       format_number(pt.q05), format_number(pt.q95), pt.reps,
                       bound[i] ? format_number(*bound[i]) : std::string());
  }
  return csv;
}

std::ostream& print_issues(std::ostream& os, const std::string& who,
                           const std::vector<std::string>& issues) {
  for (const auto& i : issues) fmt::print(os, "{}: {}\n", who, i);
  return os;
}

template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    fmt::print(err, "{}\n", e.what());
    return kConfigError;
  } catch (const PreconditionError& e) {
    fmt::print(err, "{}\n", e.what());
    return kPreconditionFailed;
  } catch (const UsageError& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kConfigError;
  } catch (const std::exception& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kRuntimeFailure;
  }
}

std::string manifest_text(const ExperimentConfig& cfg, const Bandit* bandit) {
  std::string text = "# dsee run manifest; reload with `dsee run <this file>`\n";
  ExperimentConfig copy = cfg;
  if (bandit) {
    for (auto& p : copy.policies) {
      if (p.kind != PolicyBlock::Kind::Dsee) continue;
      const auto issues = issues_for(p, *bandit, cfg.multiplayer);
      p.config = resolved(p, *bandit);
      for (const auto& i : issues) text += "# unvalidated " + p.name + ": " + i + "\n";
    }
  }
  return text + to_yaml(copy);
}

double parse_double(const std::string& key, const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw UsageError("grid value '" + s + "' for " + key + " is not a number");
  return v;
}

std::uint64_t parse_count(const std::string& key, const std::string& s) {
  const double v = parse_double(key, s);
  if (!(v >= 0.0) || v != static_cast<double>(static_cast<std::uint64_t>(v)))
    throw UsageError("grid value '" + s + "' for " + key + " is not a non-negative integer");
  return static_cast<std::uint64_t>(v);
}

}  // namespace

void apply(const Overrides& o, ExperimentConfig& cfg) {
  if (o.seed) cfg.seed = *o.seed;
  if (o.out) cfg.output = *o.out;
  if (o.strict) cfg.strict = true;
  if (o.reps) {
    cfg.replications = *o.reps;
    for (auto& v : cfg.verifiers) v.reps = *o.reps;
  }
  if (o.horizon) cfg.horizon = *o.horizon;
  if (o.threads) cfg.threads = *o.threads;
  if (cfg.horizon < 1) throw UsageError("horizon must be >= 1");
  if (o.reps && *o.reps < 1) throw UsageError("reps must be >= 1");
}

GridAxis parse_grid(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) throw UsageError("grid '" + text + "' is not key=v1,v2,...");
  GridAxis axis{text.substr(0, eq), {}};
  std::stringstream rest(text.substr(eq + 1));
  std::string item;
  while (std::getline(rest, item, ','))
    if (!item.empty()) axis.values.push_back(item);
  if (axis.values.empty()) throw UsageError("grid for '" + axis.key + "' is empty");
  return axis;
}

void set_field(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "horizon" || key == "T") {
    cfg.horizon = parse_count(key, value);
    if (cfg.horizon < 1) throw UsageError("horizon must be >= 1");
    return;
  }
  if (key == "replications" || key == "reps") {
    cfg.replications = parse_count(key, value);
    return;
  }
  if (key == "seed") {
    cfg.seed = parse_count(key, value);
    return;
  }
  const double x = parse_double(key, value);
  bool hit = false;
  for (auto& p : cfg.policies) {
    if (p.kind != PolicyBlock::Kind::Dsee) continue;
    auto& c = p.config;
    auto& k = c.constants;
    if (key == "w") {
      if (auto* r = std::get_if<LogRule>(&c.rule)) r->w = x, hit = true;
    } else if (key == "v") {
      if (auto* r = std::get_if<PolyRule>(&c.rule)) r->v = x, hit = true;
    } else if (key == "p") {
      if (auto* r = std::get_if<PolyRule>(&c.rule)) r->p = x, hit = true;
      if (auto* e = std::get_if<TruncatedMean>(&c.estimator)) e->p = x, hit = true;
    } else if (key == "u") {
      if (auto* e = std::get_if<TruncatedMean>(&c.estimator)) e->u = x, hit = true;
    } else if (key == "gamma") {
      if (auto* r = std::get_if<DivergingRule>(&c.rule); r && r->growth == DivergingRule::Growth::Power)
        r->gamma = x, hit = true;
    } else if (key == "a") {
      k.a = x, hit = true;
    } else if (key == "zeta") {
      k.zeta = x, hit = true;
    } else if (key == "u0") {
      k.u0 = x, hit = true;
    } else if (key == "c") {
      k.c = x, hit = true;
    } else if (key == "delta") {
      k.delta = x, hit = true;
    } else if (key == "b") {
      k.b = x, hit = true;
    }
    if (hit) validate(c.rule);
  }
  if (!hit) throw UsageError("grid key '" + key + "' matches no field of this configuration");
}

std::vector<std::string> write_curves(const ExperimentConfig& cfg, const fs::path& dir,
                                      const std::string& prefix, std::ostream& summary) {
  if (cfg.arms.empty() || cfg.policies.empty())
    throw UsageError("run needs a bandit and at least one policy");
  if (cfg.replications < 1) throw UsageError("replications must be >= 1");
  const Bandit bandit(cfg.arms);

  std::vector<std::vector<std::string>> issues;
  bool any = false;
  for (const auto& p : cfg.policies) {
    issues.push_back(issues_for(p, bandit, cfg.multiplayer));
    any = any || !issues.back().empty();
  }
  if (any && cfg.strict) {
    std::ostringstream msg;
    msg << "precondition violations (strict mode):\n";
    for (std::size_t i = 0; i < cfg.policies.size(); ++i) print_issues(msg, cfg.policies[i].name, issues[i]);
    std::string text = msg.str();
    text.pop_back();
    throw PreconditionError(text);
  }

  ReplicationPlan plan;
  plan.horizon = cfg.horizon;
  plan.checkpoints = checkpoints_for(cfg);
  plan.replications = cfg.replications;
  plan.master_seed = cfg.seed;
  plan.threads = cfg.threads;

  fmt::print(summary, "bandit:");
  for (const auto& a : cfg.arms) fmt::print(summary, " {}", a.describe());
  fmt::print(summary, "\nhorizon {} replications {} seed {}\n", cfg.horizon, cfg.replications, cfg.seed);
  if (cfg.multiplayer)
    fmt::print(summary, "multiplayer: M = {}, {} sharing, {}\n", cfg.multiplayer->players,
               cfg.multiplayer->sharing == Sharing::FairRotation ? "fair" : "prioritized",
               describe(cfg.multiplayer->collisions));

  std::vector<std::string> files;
  for (std::size_t i = 0; i < cfg.policies.size(); ++i) {
    const auto& p = cfg.policies[i];
    const PolicyConfig pc = resolved(p, bandit);
    RegretCurve curve;
    std::vector<std::optional<double>> bound(plan.checkpoints.size());
    std::string extra;

    if (cfg.multiplayer) {
      DecentralizedConfig dc{cfg.multiplayer->players, cfg.multiplayer->sharing,
                             cfg.multiplayer->collisions, pc};
      const auto runs = run_decentralized_replications(bandit, dc, plan);
      curve = aggregate(std::span<const DecentralizedTrajectory>(runs));
      std::uint64_t explore_coll = 0, exploit_coll = 0, misid = 0;
      for (const auto& r : runs) {
        explore_coll += r.checkpoints.back().exploration_collisions;
        exploit_coll += r.checkpoints.back().exploitation_collisions;
        misid += r.checkpoints.back().misidentifications;
      }
      extra = fmt::format("  collisions: exploration {} exploitation {}; misidentified slots {}\n",
                          explore_coll, exploit_coll, misid);
      if (!runs.empty())
        for (const auto& w : runs.front().warnings) extra += "  warning: " + w + "\n";
    } else {
      plan.options = RunOptions{pc.objective, p.costs, false};
      PolicyFactory make;
      if (p.kind == PolicyBlock::Kind::Ucb1) {
        make = [n = bandit.size()] { return std::make_unique<Ucb1Policy>(n); };
      } else {
        make = [pc, n = bandit.size()] { return std::make_unique<DseePolicy>(pc, n); };
      }
      const auto runs = run_replications(bandit, make, plan);
      curve = aggregate(std::span<const Trajectory>(runs));
      if (p.bound && p.kind == PolicyBlock::Kind::Dsee && issues[i].empty())
        for (std::size_t j = 0; j < plan.checkpoints.size(); ++j)
          bound[j] = bounds::policy_regret_bound(pc, bandit, p.costs, plan.checkpoints[j]);
    }

    const std::string file = prefix + p.name + ".csv";
    write_file(dir / file, curve_csv(curve, bound));
    files.push_back(file);

    const auto& last = curve.points.back();
    fmt::print(summary, "\n[{}] {}", p.name, p.kind == PolicyBlock::Kind::Ucb1 ? "ucb1" : "dsee");
    if (p.kind == PolicyBlock::Kind::Dsee) fmt::print(summary, ", objective {}", describe(pc.objective));
    fmt::print(summary, "\n  regret at t = {}: mean {:.6g}, std {:.6g}, 90% band [{:.6g}, {:.6g}]\n", last.t,
               last.mean, last.std, last.q05, last.q95);
    if (bound.back()) fmt::print(summary, "  analytic bound at t = {}: {:.6g}\n", last.t, *bound.back());
    summary << extra;
    for (const auto& issue : issues[i]) fmt::print(summary, "  unvalidated: {}\n", issue);
    fmt::print(summary, "  curve: {}\n", file);
  }
  return files;
}

int cmd_run(const std::string& config_path, const Overrides& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    auto cfg = load_config(config_path);
    apply(o, cfg);
    const fs::path dir(cfg.output);
    fs::create_directories(dir);
    std::ostringstream summary;
    const auto files = write_curves(cfg, dir, "", summary);
    const Bandit bandit(cfg.arms);
    write_file(dir / "manifest.yaml", manifest_text(cfg, &bandit));
    write_file(dir / "summary.txt", summary.str());
    out << summary.str();
    fmt::print(out, "\nwrote {} curve file(s) to {}\n", files.size(), dir.string());
    return static_cast<int>(kOk);
  });
}

int cmd_sweep(const std::string& config_path, const std::vector<std::string>& grid, const Overrides& o,
              std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    auto base = load_config(config_path);
    apply(o, base);
    if (grid.empty()) throw UsageError("sweep needs at least one --grid key=v1,v2,...");
    if (grid.size() > 2) throw UsageError("sweep takes at most two grid axes");
    std::vector<GridAxis> axes;
    for (const auto& g : grid) axes.push_back(parse_grid(g));
    if (axes.size() == 2 && axes[0].key == axes[1].key) throw UsageError("grid axes must differ");

    // Cartesian product, first axis outermost.
    std::vector<std::vector<std::string>> points{{}};
    for (const auto& axis : axes) {
      std::vector<std::vector<std::string>> next;
      for (const auto& pt : points)
        for (const auto& v : axis.values) {
          next.push_back(pt);
          next.back().push_back(v);
        }
      points = std::move(next);
    }
    // Apply every point up front so a bad value fails before any output.
    std::vector<ExperimentConfig> configs;
    for (const auto& pt : points) {
      configs.push_back(base);
      for (std::size_t a = 0; a < axes.size(); ++a) set_field(configs.back(), axes[a].key, pt[a]);
    }

    const fs::path dir(base.output);
    fs::create_directories(dir);
    std::string index = "point";
    for (const auto& axis : axes) index += "," + axis.key;
    index += ",policy,file\n";
    std::ostringstream summary;
    for (std::size_t i = 0; i < configs.size(); ++i) {
      fmt::print(summary, "=== point {}:", i);
      for (std::size_t a = 0; a < axes.size(); ++a) fmt::print(summary, " {}={}", axes[a].key, points[i][a]);
      summary << "\n";
      const auto files = write_curves(configs[i], dir, fmt::format("sweep_{}_", i), summary);
      for (std::size_t k = 0; k < files.size(); ++k) {
        index += std::to_string(i);
        for (const auto& v : points[i]) index += "," + v;
        index += "," + configs[i].policies[k].name + "," + files[k] + "\n";
      }
      summary << "\n";
    }
    write_file(dir / "index.csv", index);
    const Bandit bandit(base.arms);
    write_file(dir / "manifest.yaml", manifest_text(base, &bandit));
    write_file(dir / "summary.txt", summary.str());
    out << summary.str();
    fmt::print(out, "wrote {} grid point(s) to {}\n", configs.size(), dir.string());
    return static_cast<int>(kOk);
  });
}

int cmd_verify(const std::string& config_path, const Overrides& o, std::ostream& out,
               std::ostream& err) {
  return guarded(err, [&] {
    auto cfg = load_config(config_path);
    apply(o, cfg);
    if (cfg.verifiers.empty()) throw UsageError("verify needs a non-empty 'verify' list");

    // Validity windows are checked for every verifier before anything runs.
    std::ostringstream problems;
    for (std::size_t i = 0; i < cfg.verifiers.size(); ++i) {
      const auto& v = cfg.verifiers[i];
      std::vector<std::string> issues;
      switch (v.lemma) {
        case VerifyBlock::Lemma::Hoeffding:
          issues = bounds::hoeffding_window_issues(v.arm, {v.a, v.u0, v.zeta}, v.deltas);
          break;
        case VerifyBlock::Lemma::Mz:
          if (!(v.p > 1.0)) issues.emplace_back("p must exceed 1");
          else if (!central_moment_bound(v.arm, v.p))
            issues.push_back(fmt::format("central moment of order {} is infinite for {}", format_number(v.p),
                                         v.arm.describe()));
          break;
        case VerifyBlock::Lemma::Truncated: {
          if (!(v.eps > 0.0 && v.eps <= 0.5)) issues.emplace_back("eps must lie in (0, 1/2]");
          if (!(v.p > 1.0 && v.p <= 2.0)) {
            issues.emplace_back("p must lie in (1, 2]");
          } else {
            const auto raw = raw_moment_bound(v.arm, v.p);
            if (!raw || *raw > v.u)
              issues.push_back(fmt::format("E|X|^p = {} exceeds u = {}", raw ? format_number(*raw) : "inf",
                                           format_number(v.u)));
          }
          break;
        }
      }
      print_issues(problems, fmt::format("verify[{}]", i), issues);
    }
    if (!problems.str().empty()) {
      std::string text = problems.str();
      text.pop_back();
      throw PreconditionError("verifier constants outside their validity window:\n" + text);
    }

    const fs::path dir(cfg.output);
    fs::create_directories(dir);
    std::ostringstream summary;
    bool all = true;
    for (std::size_t i = 0; i < cfg.verifiers.size(); ++i) {
      const auto& v = cfg.verifiers[i];
      const std::uint64_t seed = substream_seed(cfg.seed, i);
      bounds::CheckReport report;
      switch (v.lemma) {
        case VerifyBlock::Lemma::Hoeffding:
          report = bounds::verify_hoeffding(v.arm, {v.a, v.u0, v.zeta}, v.deltas, v.sizes, v.reps, seed,
                                            cfg.threads);
          break;
        case VerifyBlock::Lemma::Mz:
          report = bounds::verify_mz(v.arm, v.p, v.deltas, v.sizes, v.reps, seed, cfg.threads);
          break;
        case VerifyBlock::Lemma::Truncated:
          report = bounds::verify_truncated(v.arm, v.u, v.p, v.eps, v.sizes, v.reps, seed, cfg.threads);
          break;
      }
      std::string csv = kVerifyHeader;
      std::size_t fails = 0, vacuous = 0;
      for (const auto& r : report.rows) {
        csv += fmt::format("{},{},{},{},{},{},{}\n", r.sample_size, format_number(r.delta),
                           format_number(r.empirical), format_number(r.bound), format_number(r.std_error),
                           r.reps, bounds::to_string(r.status));
        fails += r.status == bounds::CheckStatus::Fail;
        vacuous += r.status == bounds::CheckStatus::Vacuous;
      }
      const std::string file = fmt::format("verify_{}_{}.csv", i, report.lemma);
      write_file(dir / file, csv);
      all = all && report.passed();
      fmt::print(summary, "[{}] {} on {}: {} ({} rows, {} failed, {} vacuous) -> {}\n", i, report.lemma,
                 report.distribution, report.passed() ? "PASS" : "FAIL", report.rows.size(), fails, vacuous,
                 file);
      for (const auto& n : report.notes) fmt::print(summary, "  note: {}\n", n);
    }
    write_file(dir / "manifest.yaml", manifest_text(cfg, nullptr));
    write_file(dir / "summary.txt", summary.str());
    out << summary.str();
    return static_cast<int>(all ? kOk : kVerifyFailed);
  });
}

}  // namespace dsee::cli
