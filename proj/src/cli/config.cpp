#include "dsee/cli/config.hpp"

#include "dsee/error.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

namespace dsee::cli {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Wraps yaml-cpp nodes so every error carries the offending line.
class Reader {
 public:
  Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const YAML::Node& at, const std::string& message) const {
    throw ConfigError(source_, at.Mark().line >= 0 ? at.Mark().line + 1 : 0, message);
  }

  void expect_map(const YAML::Node& node, const std::string& what) const {
    if (!node.IsMap()) fail(node, what + " must be a mapping");
  }

  void allow_keys(const YAML::Node& node, const std::string& what,
                  std::initializer_list<const char*> keys) const {
    expect_map(node, what);
    const std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& kv : node) {
      const auto key = kv.first.as<std::string>();
      if (!allowed.count(key)) fail(kv.first, "unknown key '" + key + "' in " + what);
    }
  }

  YAML::Node require(const YAML::Node& node, const char* key, const std::string& what) const {
    const YAML::Node child = node[key];
    if (!child) fail(node, what + " is missing '" + key + "'");
    return child;
  }

  template <class T>
  T as(const YAML::Node& node, const std::string& what) const {
    try {
      return node.as<T>();
    } catch (const YAML::Exception&) {
      fail(node, "cannot read " + what);
    }
  }

  double number(const YAML::Node& node, const char* key, const std::string& what) const {
    return as<double>(require(node, key, what), what + "." + key);
  }
  std::optional<double> maybe_number(const YAML::Node& node, const char* key,
                                     const std::string& what) const {
    if (!node[key]) return std::nullopt;
    return as<double>(node[key], what + "." + key);
  }
  std::uint64_t count(const YAML::Node& node, const std::string& what) const {
    const auto v = as<long long>(node, what);
    if (v < 0) fail(node, what + " must be non-negative");
    return static_cast<std::uint64_t>(v);
  }

  template <class T>
  std::vector<T> list(const YAML::Node& node, const std::string& what) const {
    if (!node.IsSequence()) fail(node, what + " must be a list");
    std::vector<T> out;
    for (const auto& item : node) {
      if constexpr (std::is_same_v<T, std::uint64_t>) out.push_back(count(item, what));
      else out.push_back(as<T>(item, what));
    }
    return out;
  }

  const std::string& source() const noexcept { return source_; }

 private:
  std::string source_;
};

ArmSpec parse_arm(const Reader& rd, const YAML::Node& node) {
  rd.expect_map(node, "arm");
  const auto kind = rd.as<std::string>(rd.require(node, "kind", "arm"), "arm kind");
  // Parameters may sit under `params` or directly beside `kind`.
  const YAML::Node params = node["params"] ? node["params"] : node;
  const std::string what = "arm '" + kind + "'";
  try {
    if (kind == "bernoulli") {
      if (!node["params"]) rd.allow_keys(node, what, {"kind", "q"});
      return ArmSpec(Bernoulli{rd.number(params, "q", what)});
    }
    if (kind == "gaussian") {
      if (!node["params"]) rd.allow_keys(node, what, {"kind", "mean", "std"});
      return ArmSpec(Gaussian{rd.number(params, "mean", what), rd.number(params, "std", what)});
    }
    if (kind == "exponential") {
      if (!node["params"]) rd.allow_keys(node, what, {"kind", "rate"});
      return ArmSpec(Exponential{rd.number(params, "rate", what)});
    }
    if (kind == "pareto") {
      if (!node["params"]) rd.allow_keys(node, what, {"kind", "shape", "scale"});
      return ArmSpec(Pareto{rd.number(params, "shape", what), rd.number(params, "scale", what)});
    }
    if (kind == "studentt") {
      if (!node["params"]) rd.allow_keys(node, what, {"kind", "dof", "location"});
      return ArmSpec(StudentT{rd.number(params, "dof", what), rd.number(params, "location", what)});
    }
  } catch (const UsageError& e) {
    rd.fail(node, e.what());
  }
  rd.fail(node, "unknown arm kind '" + kind + "'");
}

ExplorationRule parse_rule(const Reader& rd, const YAML::Node& node) {
  rd.allow_keys(node, "rule", {"type", "w", "f_name", "gamma", "v", "p"});
  const auto type = rd.as<std::string>(rd.require(node, "type", "rule"), "rule type");
  ExplorationRule rule;
  if (type == "log") {
    rule = LogRule{rd.number(node, "w", "rule")};
  } else if (type == "diverging") {
    DivergingRule r;
    const auto name = node["f_name"] ? rd.as<std::string>(node["f_name"], "rule.f_name") : "loglog";
    if (name == "loglog") {
      r.growth = DivergingRule::Growth::LogLog;
    } else if (name == "power") {
      r.growth = DivergingRule::Growth::Power;
      r.gamma = rd.number(node, "gamma", "rule");
    } else {
      rd.fail(node["f_name"], "unknown f_name '" + name + "' (expected loglog or power)");
    }
    rule = r;
  } else if (type == "poly") {
    rule = PolyRule{rd.number(node, "v", "rule"), rd.number(node, "p", "rule")};
  } else {
    rd.fail(node, "unknown rule type '" + type + "' (expected log, diverging or poly)");
  }
  try {
    validate(rule);
  } catch (const UsageError& e) {
    rd.fail(node, e.what());
  }
  return rule;
}

Estimator parse_estimator(const Reader& rd, const YAML::Node& node) {
  rd.allow_keys(node, "estimator", {"type", "u", "p", "gamma"});
  const auto type = rd.as<std::string>(rd.require(node, "type", "estimator"), "estimator type");
  if (type == "plain") return PlainMean{};
  if (type == "truncated")
    return TruncatedMean{rd.number(node, "u", "estimator"), rd.number(node, "p", "estimator"),
                         rd.maybe_number(node, "gamma", "estimator")};
  rd.fail(node, "unknown estimator type '" + type + "' (expected plain or truncated)");
}

Objective parse_objective(const Reader& rd, const YAML::Node& node) {
  rd.allow_keys(node, "objective", {"type", "m", "M", "rank"});
  const auto type = rd.as<std::string>(rd.require(node, "type", "objective"), "objective type");
  if (type == "best") return BestArm{};
  if (type == "mth") return MthBest{rd.count(rd.require(node, "m", "objective"), "objective.m")};
  if (type == "topset") {
    TopSet o{rd.count(rd.require(node, "M", "objective"), "objective.M"), std::nullopt};
    if (node["rank"]) o.fixed_rank = rd.count(node["rank"], "objective.rank");
    return o;
  }
  rd.fail(node, "unknown objective type '" + type + "' (expected best, mth or topset)");
}

PolicyBlock parse_policy(const Reader& rd, const YAML::Node& node, std::size_t index) {
  rd.allow_keys(node, "policy",
                {"name", "type", "rule", "estimator", "objective", "constants", "costs", "bound"});
  PolicyBlock block;
  block.name = node["name"] ? rd.as<std::string>(node["name"], "policy name")
                            : "policy" + std::to_string(index);
  if (block.name.empty() || block.name.find_first_of("/\\ ") != std::string::npos)
    rd.fail(node, "policy name must be non-empty without spaces or slashes");
  const auto type = node["type"] ? rd.as<std::string>(node["type"], "policy type") : "dsee";
  if (type == "ucb1") {
    block.kind = PolicyBlock::Kind::Ucb1;
  } else if (type != "dsee") {
    rd.fail(node["type"], "unknown policy type '" + type + "' (expected dsee or ucb1)");
  }
  if (block.kind == PolicyBlock::Kind::Dsee) block.config.rule = parse_rule(rd, rd.require(node, "rule", "policy"));
  if (node["estimator"]) block.config.estimator = parse_estimator(rd, node["estimator"]);
  if (node["objective"]) block.config.objective = parse_objective(rd, node["objective"]);
  if (const auto k = node["constants"]) {
    rd.allow_keys(k, "constants", {"a", "zeta", "u0", "c", "delta", "b"});
    auto& c = block.config.constants;
    c.a = rd.maybe_number(k, "a", "constants");
    c.zeta = rd.maybe_number(k, "zeta", "constants");
    c.u0 = rd.maybe_number(k, "u0", "constants");
    c.c = rd.maybe_number(k, "c", "constants");
    c.delta = rd.maybe_number(k, "delta", "constants");
    c.b = rd.maybe_number(k, "b", "constants").value_or(2.0);
  }
  if (const auto costs = node["costs"]) {
    rd.allow_keys(costs, "costs", {"by_rank", "flat"});
    if (costs["by_rank"]) block.costs.by_rank = rd.list<double>(costs["by_rank"], "costs.by_rank");
    block.costs.flat = rd.maybe_number(costs, "flat", "costs").value_or(1.0);
  }
  if (node["bound"]) block.bound = rd.as<bool>(node["bound"], "policy bound flag");
  return block;
}

MultiplayerBlock parse_multiplayer(const Reader& rd, const YAML::Node& node) {
  rd.allow_keys(node, "multiplayer", {"M", "sharing", "collision_model"});
  MultiplayerBlock mp;
  mp.players = rd.count(rd.require(node, "M", "multiplayer"), "multiplayer.M");
  const auto sharing = node["sharing"] ? rd.as<std::string>(node["sharing"], "sharing") : "fair";
  if (sharing == "fair") {
    mp.sharing = Sharing::FairRotation;
  } else if (sharing == "prioritized") {
    mp.sharing = Sharing::Prioritized;
  } else {
    rd.fail(node["sharing"], "unknown sharing '" + sharing + "' (expected fair or prioritized)");
  }
  if (const auto cm = node["collision_model"]) {
    rd.allow_keys(cm, "collision_model", {"type", "efficiency"});
    const auto type = rd.as<std::string>(rd.require(cm, "type", "collision_model"), "collision type");
    if (type == "zero") {
      mp.collisions = ZeroOnCollision{};
    } else if (type == "winner") {
      mp.collisions = WinnerTakesAll{};
    } else if (type == "fractional") {
      const double eff = rd.maybe_number(cm, "efficiency", "collision_model").value_or(1.0);
      if (!(eff >= 0.0 && eff <= 1.0)) rd.fail(cm, "efficiency must lie in [0, 1]");
      mp.collisions = FractionalShare{eff};
    } else {
      rd.fail(cm, "unknown collision model '" + type + "' (expected zero, winner or fractional)");
    }
  }
  return mp;
}

VerifyBlock parse_verify(const Reader& rd, const YAML::Node& node) {
  rd.allow_keys(node, "verifier",
                {"lemma", "arm", "a", "u0", "zeta", "p", "u", "eps", "deltas", "sizes", "reps"});
  VerifyBlock v;
  const auto lemma = rd.as<std::string>(rd.require(node, "lemma", "verifier"), "lemma");
  v.arm = parse_arm(rd, rd.require(node, "arm", "verifier"));
  v.sizes = rd.list<std::uint64_t>(rd.require(node, "sizes", "verifier"), "verifier.sizes");
  if (v.sizes.empty()) rd.fail(node["sizes"], "verifier.sizes is empty");
  v.reps = rd.count(rd.require(node, "reps", "verifier"), "verifier.reps");
  if (v.reps < 1) rd.fail(node["reps"], "verifier.reps must be >= 1");
  if (lemma == "hoeffding") {
    v.lemma = VerifyBlock::Lemma::Hoeffding;
    v.a = rd.number(node, "a", "verifier");
    v.u0 = rd.maybe_number(node, "u0", "verifier").value_or(1.0);
    v.zeta = rd.maybe_number(node, "zeta", "verifier");
    v.deltas = rd.list<double>(rd.require(node, "deltas", "verifier"), "verifier.deltas");
  } else if (lemma == "mz") {
    v.lemma = VerifyBlock::Lemma::Mz;
    v.p = rd.number(node, "p", "verifier");
    v.deltas = rd.list<double>(rd.require(node, "deltas", "verifier"), "verifier.deltas");
  } else if (lemma == "truncated") {
    v.lemma = VerifyBlock::Lemma::Truncated;
    v.u = rd.number(node, "u", "verifier");
    v.p = rd.number(node, "p", "verifier");
    v.eps = rd.number(node, "eps", "verifier");
  } else {
    rd.fail(node["lemma"], "unknown lemma '" + lemma + "' (expected hoeffding, mz or truncated)");
  }
  return v;
}

void emit_number(YAML::Emitter& out, double x) { out << YAML::Value << format_number(x); }

void emit_arm(YAML::Emitter& out, const ArmSpec& arm) {
  out << YAML::Flow << YAML::BeginMap << YAML::Key << "kind" << YAML::Value << arm.kind();
  std::visit(overloaded{
                 [&](const Bernoulli& b) { out << YAML::Key << "q"; emit_number(out, b.q); },
                 [&](const Gaussian& g) {
                   out << YAML::Key << "mean"; emit_number(out, g.mean);
                   out << YAML::Key << "std"; emit_number(out, g.std);
                 },
                 [&](const Exponential& e) { out << YAML::Key << "rate"; emit_number(out, e.rate); },
                 [&](const Pareto& p) {
                   out << YAML::Key << "shape"; emit_number(out, p.shape);
                   out << YAML::Key << "scale"; emit_number(out, p.scale);
                 },
                 [&](const StudentT& t) {
                   out << YAML::Key << "dof"; emit_number(out, t.dof);
                   out << YAML::Key << "location"; emit_number(out, t.location);
                 },
             },
             arm.params());
  out << YAML::EndMap;
}

void emit_optional(YAML::Emitter& out, const char* key, const std::optional<double>& v) {
  if (!v) return;
  out << YAML::Key << key;
  emit_number(out, *v);
}

}  // namespace

ConfigError::ConfigError(const std::string& source, int line, const std::string& message)
    : std::runtime_error(source + ":" + std::to_string(line) + ": " + message), line_(line) {}

std::string format_number(double x) { return fmt::format("{:.17g}", x); }

ExperimentConfig parse_config(const std::string& text, const std::string& source) {
  const Reader rd(source);
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(source, e.mark.line + 1, e.msg);
  }
  if (!root || root.IsNull()) throw ConfigError(source, 1, "empty configuration");
  rd.allow_keys(root, "configuration",
                {"bandit", "policies", "horizon", "checkpoints", "replications", "seed", "strict",
                 "threads", "output", "multiplayer", "verify"});

  ExperimentConfig cfg;
  if (const auto bandit = root["bandit"]) {
    const YAML::Node arms = bandit.IsMap() ? rd.require(bandit, "arms", "bandit") : bandit;
    if (!arms.IsSequence() || arms.size() == 0) rd.fail(arms, "bandit must list at least one arm");
    for (const auto& a : arms) cfg.arms.push_back(parse_arm(rd, a));
  }
  if (const auto policies = root["policies"]) {
    if (!policies.IsSequence()) rd.fail(policies, "policies must be a list");
    std::set<std::string> names;
    for (const auto& p : policies) {
      cfg.policies.push_back(parse_policy(rd, p, cfg.policies.size()));
      if (!names.insert(cfg.policies.back().name).second)
        rd.fail(p, "duplicate policy name '" + cfg.policies.back().name + "'");
    }
  }
  if (root["horizon"]) cfg.horizon = rd.count(root["horizon"], "horizon");
  if (cfg.horizon < 1) rd.fail(root["horizon"], "horizon must be >= 1");
  if (root["checkpoints"]) {
    cfg.checkpoints = rd.list<std::uint64_t>(root["checkpoints"], "checkpoints");
    for (std::size_t i = 0; i < cfg.checkpoints.size(); ++i) {
      if (cfg.checkpoints[i] < 1 || (i > 0 && cfg.checkpoints[i] <= cfg.checkpoints[i - 1]))
        rd.fail(root["checkpoints"], "checkpoints must be positive and strictly increasing");
    }
  }
  if (root["replications"]) cfg.replications = rd.count(root["replications"], "replications");
  if (root["seed"]) cfg.seed = rd.count(root["seed"], "seed");
  if (root["strict"]) cfg.strict = rd.as<bool>(root["strict"], "strict");
  if (root["threads"]) cfg.threads = static_cast<unsigned>(rd.count(root["threads"], "threads"));
  if (root["output"]) cfg.output = rd.as<std::string>(root["output"], "output");
  if (root["multiplayer"]) cfg.multiplayer = parse_multiplayer(rd, root["multiplayer"]);
  if (const auto verify = root["verify"]) {
    if (!verify.IsSequence()) rd.fail(verify, "verify must be a list");
    for (const auto& v : verify) cfg.verifiers.push_back(parse_verify(rd, v));
  }

  if (!cfg.policies.empty() && cfg.arms.empty())
    rd.fail(root, "policies need a bandit");
  for (const auto& p : cfg.policies) {
    try {
      validate(p.config.objective, cfg.arms.size());
    } catch (const UsageError& e) {
      throw ConfigError(source, root["policies"].Mark().line + 1, p.name + ": " + e.what());
    }
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, 0, "cannot open configuration file");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), path);
}

std::string to_yaml(const ExperimentConfig& cfg) {
  YAML::Emitter out;
  out << YAML::BeginMap;
  if (!cfg.arms.empty()) {
    out << YAML::Key << "bandit" << YAML::Value << YAML::BeginSeq;
    for (const auto& a : cfg.arms) emit_arm(out, a);
    out << YAML::EndSeq;
  }
  out << YAML::Key << "horizon" << YAML::Value << cfg.horizon;
  if (!cfg.checkpoints.empty())
    out << YAML::Key << "checkpoints" << YAML::Value << YAML::Flow << cfg.checkpoints;
  out << YAML::Key << "replications" << YAML::Value << cfg.replications;
  out << YAML::Key << "seed" << YAML::Value << cfg.seed;
  out << YAML::Key << "strict" << YAML::Value << cfg.strict;
  out << YAML::Key << "threads" << YAML::Value << cfg.threads;
  out << YAML::Key << "output" << YAML::Value << cfg.output;

  if (!cfg.policies.empty()) {
    out << YAML::Key << "policies" << YAML::Value << YAML::BeginSeq;
    for (const auto& p : cfg.policies) {
      out << YAML::BeginMap;
      out << YAML::Key << "name" << YAML::Value << p.name;
      out << YAML::Key << "type" << YAML::Value
          << (p.kind == PolicyBlock::Kind::Ucb1 ? "ucb1" : "dsee");
      if (p.kind == PolicyBlock::Kind::Dsee) {
        out << YAML::Key << "rule" << YAML::Value << YAML::Flow << YAML::BeginMap;
        std::visit(overloaded{
                       [&](const LogRule& r) {
                         out << YAML::Key << "type" << YAML::Value << "log" << YAML::Key << "w";
                         emit_number(out, r.w);
                       },
                       [&](const DivergingRule& r) {
                         out << YAML::Key << "type" << YAML::Value << "diverging";
                         if (r.growth == DivergingRule::Growth::LogLog) {
                           out << YAML::Key << "f_name" << YAML::Value << "loglog";
                         } else {
                           out << YAML::Key << "f_name" << YAML::Value << "power" << YAML::Key << "gamma";
                           emit_number(out, r.gamma);
                         }
                       },
                       [&](const PolyRule& r) {
                         out << YAML::Key << "type" << YAML::Value << "poly" << YAML::Key << "v";
                         emit_number(out, r.v);
                         out << YAML::Key << "p";
                         emit_number(out, r.p);
                       },
                   },
                   p.config.rule);
        out << YAML::EndMap;
        out << YAML::Key << "estimator" << YAML::Value << YAML::Flow << YAML::BeginMap;
        if (const auto* t = std::get_if<TruncatedMean>(&p.config.estimator)) {
          out << YAML::Key << "type" << YAML::Value << "truncated" << YAML::Key << "u";
          emit_number(out, t->u);
          out << YAML::Key << "p";
          emit_number(out, t->p);
          emit_optional(out, "gamma", t->gamma);
        } else {
          out << YAML::Key << "type" << YAML::Value << "plain";
        }
        out << YAML::EndMap;
        const auto& k = p.config.constants;
        out << YAML::Key << "constants" << YAML::Value << YAML::Flow << YAML::BeginMap;
        emit_optional(out, "a", k.a);
        emit_optional(out, "zeta", k.zeta);
        emit_optional(out, "u0", k.u0);
        emit_optional(out, "c", k.c);
        emit_optional(out, "delta", k.delta);
        emit_optional(out, "b", k.b);
        out << YAML::EndMap;
      }
      out << YAML::Key << "objective" << YAML::Value << YAML::Flow << YAML::BeginMap;
      std::visit(overloaded{
                     [&](const BestArm&) { out << YAML::Key << "type" << YAML::Value << "best"; },
                     [&](const MthBest& o) {
                       out << YAML::Key << "type" << YAML::Value << "mth" << YAML::Key << "m"
                           << YAML::Value << o.m;
                     },
                     [&](const TopSet& o) {
                       out << YAML::Key << "type" << YAML::Value << "topset" << YAML::Key << "M"
                           << YAML::Value << o.M;
                       if (o.fixed_rank) out << YAML::Key << "rank" << YAML::Value << *o.fixed_rank;
                     },
                 },
                 p.config.objective);
      out << YAML::EndMap;
      out << YAML::Key << "costs" << YAML::Value << YAML::Flow << YAML::BeginMap;
      out << YAML::Key << "by_rank" << YAML::Value << YAML::Flow << YAML::BeginSeq;
      for (double c : p.costs.by_rank) out << format_number(c);
      out << YAML::EndSeq << YAML::Key << "flat";
      emit_number(out, p.costs.flat);
      out << YAML::EndMap;
      out << YAML::Key << "bound" << YAML::Value << p.bound;
      out << YAML::EndMap;
    }
    out << YAML::EndSeq;
  }

  if (cfg.multiplayer) {
    const auto& mp = *cfg.multiplayer;
    out << YAML::Key << "multiplayer" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "M" << YAML::Value << mp.players;
    out << YAML::Key << "sharing" << YAML::Value
        << (mp.sharing == Sharing::FairRotation ? "fair" : "prioritized");
    out << YAML::Key << "collision_model" << YAML::Value << YAML::Flow << YAML::BeginMap;
    std::visit(overloaded{
                   [&](const ZeroOnCollision&) { out << YAML::Key << "type" << YAML::Value << "zero"; },
                   [&](const WinnerTakesAll&) { out << YAML::Key << "type" << YAML::Value << "winner"; },
                   [&](const FractionalShare& f) {
                     out << YAML::Key << "type" << YAML::Value << "fractional" << YAML::Key << "efficiency";
                     emit_number(out, f.efficiency);
                   },
               },
               mp.collisions);
    out << YAML::EndMap << YAML::EndMap;
  }

  if (!cfg.verifiers.empty()) {
    out << YAML::Key << "verify" << YAML::Value << YAML::BeginSeq;
    for (const auto& v : cfg.verifiers) {
      out << YAML::BeginMap;
      out << YAML::Key << "arm" << YAML::Value;
      emit_arm(out, v.arm);
      switch (v.lemma) {
        case VerifyBlock::Lemma::Hoeffding:
          out << YAML::Key << "lemma" << YAML::Value << "hoeffding" << YAML::Key << "a";
          emit_number(out, v.a);
          out << YAML::Key << "u0";
          emit_number(out, v.u0);
          emit_optional(out, "zeta", v.zeta);
          break;
        case VerifyBlock::Lemma::Mz:
          out << YAML::Key << "lemma" << YAML::Value << "mz" << YAML::Key << "p";
          emit_number(out, v.p);
          break;
        case VerifyBlock::Lemma::Truncated:
          out << YAML::Key << "lemma" << YAML::Value << "truncated" << YAML::Key << "u";
          emit_number(out, v.u);
          out << YAML::Key << "p";
          emit_number(out, v.p);
          out << YAML::Key << "eps";
          emit_number(out, v.eps);
          break;
      }
      if (v.lemma != VerifyBlock::Lemma::Truncated) {
        out << YAML::Key << "deltas" << YAML::Value << YAML::Flow << YAML::BeginSeq;
        for (double d : v.deltas) out << format_number(d);
        out << YAML::EndSeq;
      }
      out << YAML::Key << "sizes" << YAML::Value << YAML::Flow << v.sizes;
      out << YAML::Key << "reps" << YAML::Value << v.reps;
      out << YAML::EndMap;
    }
    out << YAML::EndSeq;
  }
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

}  // namespace dsee::cli
