#include "gatsac/sim/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>

#include "gatsac/core/csv.hpp"
#include "gatsac/core/error.hpp"

namespace gatsac::sim {
namespace {

struct Field {
  const char* key;
  std::function<std::string(const SimConfig&)> get;
  std::function<void(SimConfig&, const std::string&)> set;
};

double parse_double(const std::string& key, const std::string& value) {
  char* end = nullptr;
  const double v = std::strtod(value.c_str(), &end);
  if (end == value.c_str() || *end != '\0' || !std::isfinite(v))
    throw ConfigError("field " + key + ": not a number: '" + value + "'");
  return v;
}

std::int64_t parse_int(const std::string& key, const std::string& value) {
  char* end = nullptr;
  const long long v = std::strtoll(value.c_str(), &end, 10);
  if (end == value.c_str() || *end != '\0')
    throw ConfigError("field " + key + ": not an integer: '" + value + "'");
  return v;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  char* end = nullptr;
  const unsigned long long v = std::strtoull(value.c_str(), &end, 10);
  if (end == value.c_str() || *end != '\0')
    throw ConfigError("field " + key + ": not an unsigned integer: '" + value + "'");
  return v;
}

Field fd(const char* key, double SimConfig::* member) {
  return {key,
          [member](const SimConfig& c) { return format_double_exact(c.*member); },
          [member, key](SimConfig& c, const std::string& v) { c.*member = parse_double(key, v); }};
}

Field fi(const char* key, int SimConfig::* member) {
  return {key,
          [member](const SimConfig& c) { return std::to_string(c.*member); },
          [member, key](SimConfig& c, const std::string& v) {
            c.*member = static_cast<int>(parse_int(key, v));
          }};
}

template <typename Sub>
Field fsub(const char* key, Sub SimConfig::* sub, double Sub::* member) {
  return {key,
          [sub, member](const SimConfig& c) { return format_double_exact(c.*sub.*member); },
          [sub, member, key](SimConfig& c, const std::string& v) {
            c.*sub.*member = parse_double(key, v);
          }};
}

template <typename Sub>
Field fsubi(const char* key, Sub SimConfig::* sub, int Sub::* member) {
  return {key,
          [sub, member](const SimConfig& c) { return std::to_string(c.*sub.*member); },
          [sub, member, key](SimConfig& c, const std::string& v) {
            c.*sub.*member = static_cast<int>(parse_int(key, v));
          }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    std::vector<Field> f;
    f.push_back(fd("dt", &SimConfig::dt));
    f.push_back(fd("demand", &SimConfig::demand));
    f.push_back(fd("cav_penetration", &SimConfig::cav_penetration));
    f.push_back(fd("episode_length", &SimConfig::episode_length));
    f.push_back(fd("eval_horizon", &SimConfig::eval_horizon));
    f.push_back(fi("episodes", &SimConfig::episodes));
    f.push_back(fd("split_through", &SimConfig::split_through));
    f.push_back(fd("split_left", &SimConfig::split_left));
    f.push_back(fd("split_right", &SimConfig::split_right));
    f.push_back({"rng_seed",
                 [](const SimConfig& c) { return std::to_string(c.rng_seed); },
                 [](SimConfig& c, const std::string& v) { c.rng_seed = parse_u64("rng_seed", v); }});
    f.push_back(fd("v2i_period", &SimConfig::v2i_period));
    f.push_back(fsub("ttc_threshold", &SimConfig::safety, &SafetyThresholds::ttc_threshold));
    f.push_back(fsub("hb_decel_threshold", &SimConfig::safety, &SafetyThresholds::hb_decel_threshold));
    f.push_back(fsub("min_gap", &SimConfig::safety, &SafetyThresholds::min_gap));
    f.push_back(fd("lane_length", &SimConfig::lane_length));
    f.push_back(fd("box_length", &SimConfig::box_length));
    f.push_back(fd("g_min", &SimConfig::g_min));
    f.push_back(fd("g_max", &SimConfig::g_max));
    f.push_back(fd("c_min", &SimConfig::c_min));
    f.push_back(fd("t_min", &SimConfig::t_min));
    f.push_back(fd("t_max", &SimConfig::t_max));
    f.push_back(fd("clearance", &SimConfig::clearance));
    f.push_back({"fixed_plan_greens",
                 [](const SimConfig& c) {
                   std::string s;
                   for (std::size_t i = 0; i < c.fixed_plan_greens.size(); ++i) {
                     if (i) s += ',';
                     s += format_double_exact(c.fixed_plan_greens[i]);
                   }
                   return s;
                 },
                 [](SimConfig& c, const std::string& v) {
                   std::vector<double> greens;
                   std::stringstream ss(v);
                   std::string tok;
                   while (std::getline(ss, tok, ','))
                     greens.push_back(parse_double("fixed_plan_greens", tok));
                   if (greens.empty())
                     throw ConfigError("field fixed_plan_greens: empty list");
                   c.fixed_plan_greens = std::move(greens);
                 }});
    f.push_back(fd("control_interval", &SimConfig::control_interval));
    f.push_back(fd("channelization_period", &SimConfig::channelization_period));
    f.push_back(fd("throughput_bonus", &SimConfig::throughput_bonus));
    f.push_back(fsub("cav_reaction_time", &SimConfig::cav, &VehicleClassParams::reaction_time));
    f.push_back(fsub("cav_desired_headway", &SimConfig::cav, &VehicleClassParams::desired_headway));
    f.push_back(fsub("cav_max_accel", &SimConfig::cav, &VehicleClassParams::max_accel));
    f.push_back(fsub("cav_comfortable_decel", &SimConfig::cav, &VehicleClassParams::comfortable_decel));
    f.push_back(fsub("cav_min_gap", &SimConfig::cav, &VehicleClassParams::min_gap));
    f.push_back(fsub("cav_desired_speed", &SimConfig::cav, &VehicleClassParams::desired_speed));
    f.push_back(fsub("cav_accel_exponent", &SimConfig::cav, &VehicleClassParams::accel_exponent));
    f.push_back(fsub("hdv_reaction_time", &SimConfig::hdv, &VehicleClassParams::reaction_time));
    f.push_back(fsub("hdv_desired_headway", &SimConfig::hdv, &VehicleClassParams::desired_headway));
    f.push_back(fsub("hdv_max_accel", &SimConfig::hdv, &VehicleClassParams::max_accel));
    f.push_back(fsub("hdv_comfortable_decel", &SimConfig::hdv, &VehicleClassParams::comfortable_decel));
    f.push_back(fsub("hdv_min_gap", &SimConfig::hdv, &VehicleClassParams::min_gap));
    f.push_back(fsub("hdv_desired_speed", &SimConfig::hdv, &VehicleClassParams::desired_speed));
    f.push_back(fsub("hdv_accel_exponent", &SimConfig::hdv, &VehicleClassParams::accel_exponent));
    f.push_back(fd("hdv_headway_noise", &SimConfig::hdv_headway_noise));
    f.push_back(fsub("w_d", &SimConfig::weights, &CostWeights::w_d));
    f.push_back(fsub("w_f", &SimConfig::weights, &CostWeights::w_f));
    f.push_back(fsub("w_s", &SimConfig::weights, &CostWeights::w_s));
    f.push_back(fsub("alpha_rlr", &SimConfig::weights, &CostWeights::alpha_rlr));
    f.push_back(fsub("beta_ttc", &SimConfig::weights, &CostWeights::beta_ttc));
    f.push_back(fsub("delta_hb", &SimConfig::weights, &CostWeights::delta_hb));
    f.push_back(fsub("lr", &SimConfig::sac, &SacParams::lr));
    f.push_back(fsub("alpha_lr", &SimConfig::sac, &SacParams::alpha_lr));
    f.push_back(fsub("tau", &SimConfig::sac, &SacParams::tau));
    f.push_back(fsub("gamma", &SimConfig::sac, &SacParams::gamma));
    f.push_back(fsubi("batch_size", &SimConfig::sac, &SacParams::batch_size));
    f.push_back(fsub("target_entropy", &SimConfig::sac, &SacParams::target_entropy));
    f.push_back(fsub("entropy_multiplier", &SimConfig::sac, &SacParams::entropy_multiplier));
    f.push_back(fsub("init_temperature", &SimConfig::sac, &SacParams::init_temperature));
    f.push_back(fsub("grad_clip", &SimConfig::sac, &SacParams::grad_clip));
    f.push_back(fsub("reward_scale", &SimConfig::sac, &SacParams::reward_scale));
    f.push_back(fsubi("warmup_steps", &SimConfig::sac, &SacParams::warmup_steps));
    f.push_back(fsubi("buffer_capacity", &SimConfig::sac, &SacParams::buffer_capacity));
    f.push_back(fsubi("gat_hidden_dim", &SimConfig::sac, &SacParams::gat_hidden_dim));
    f.push_back(fsub("gat_dropout", &SimConfig::sac, &SacParams::gat_dropout));
    f.push_back(fsubi("actor_hidden1", &SimConfig::sac, &SacParams::actor_hidden1));
    f.push_back(fsubi("actor_hidden2", &SimConfig::sac, &SacParams::actor_hidden2));
    return f;
  }();
  return table;
}

const Field* find_field(const std::string& key) {
  for (const auto& f : fields())
    if (key == f.key) return &f;
  return nullptr;
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError(msg);
}

void validate_class(const char* prefix, const VehicleClassParams& p) {
  auto pos = [&](const char* name, double v) {
    require(v > 0.0, std::string("field ") + prefix + name + ": must be positive");
  };
  pos("_reaction_time", p.reaction_time);
  pos("_desired_headway", p.desired_headway);
  pos("_max_accel", p.max_accel);
  pos("_comfortable_decel", p.comfortable_decel);
  pos("_min_gap", p.min_gap);
  pos("_desired_speed", p.desired_speed);
  pos("_accel_exponent", p.accel_exponent);
}

}  // namespace

void SimConfig::validate() const {
  require(dt > 0.0, "field dt: must be positive");
  require(demand >= 0.0, "field demand: must be non-negative");
  require(cav_penetration >= 0.0 && cav_penetration <= 1.0,
          "field cav_penetration: must lie in [0,1]");
  require(episode_length > 0.0, "field episode_length: must be positive");
  require(eval_horizon > 0.0, "field eval_horizon: must be positive");
  require(episodes > 0, "field episodes: must be positive");
  const double split_sum = split_through + split_left + split_right;
  require(split_through >= 0.0 && split_left >= 0.0 && split_right >= 0.0 &&
              std::fabs(split_sum - 1.0) < 1e-9,
          "field split_through/split_left/split_right: fractions must be non-negative and sum to 1");
  require(v2i_period > 0.0, "field v2i_period: must be positive");
  require(safety.ttc_threshold > 0.0, "field ttc_threshold: must be positive");
  require(safety.hb_decel_threshold > 0.0, "field hb_decel_threshold: must be positive");
  require(safety.min_gap > 0.0, "field min_gap: must be positive");
  require(lane_length > 0.0, "field lane_length: must be positive");
  require(box_length > 0.0, "field box_length: must be positive");
  require(g_min > 0.0 && g_max >= g_min, "field g_min/g_max: need 0 < g_min <= g_max");
  require(c_min >= 0.0, "field c_min: must be non-negative");
  require(clearance >= c_min, "field clearance: must be >= c_min");
  require(t_min > 0.0 && t_max >= t_min, "field t_min/t_max: need 0 < t_min <= t_max");
  require(control_interval >= dt, "field control_interval: must be >= dt");
  require(channelization_period > 0.0, "field channelization_period: must be positive");
  for (double g : fixed_plan_greens)
    require(g >= g_min && g <= g_max,
            "field fixed_plan_greens: every green must lie in [g_min, g_max]");
  validate_class("cav", cav);
  validate_class("hdv", hdv);
  require(cav.reaction_time < hdv.reaction_time,
          "field cav_reaction_time: must be smaller than hdv_reaction_time");
  require(cav.desired_headway < hdv.desired_headway,
          "field cav_desired_headway: must be smaller than hdv_desired_headway");
  require(hdv_headway_noise >= 0.0, "field hdv_headway_noise: must be non-negative");
  require(weights.w_d >= 0.0, "field w_d: must be non-negative");
  require(weights.w_f >= 0.0, "field w_f: must be non-negative");
  require(weights.w_s >= 0.0, "field w_s: must be non-negative");
  require(weights.alpha_rlr >= 0.0, "field alpha_rlr: must be non-negative");
  require(weights.beta_ttc >= 0.0, "field beta_ttc: must be non-negative");
  require(weights.delta_hb >= 0.0, "field delta_hb: must be non-negative");
  require(sac.lr > 0.0, "field lr: must be positive");
  require(sac.alpha_lr > 0.0, "field alpha_lr: must be positive");
  require(sac.tau > 0.0 && sac.tau <= 1.0, "field tau: must lie in (0,1]");
  require(sac.gamma > 0.0 && sac.gamma < 1.0, "field gamma: must lie in (0,1)");
  require(sac.batch_size > 0, "field batch_size: must be positive");
  require(sac.entropy_multiplier > 0.0, "field entropy_multiplier: must be positive");
  require(sac.init_temperature > 0.0, "field init_temperature: must be positive");
  require(sac.grad_clip > 0.0, "field grad_clip: must be positive");
  require(sac.reward_scale > 0.0, "field reward_scale: must be positive");
  require(sac.warmup_steps >= 0, "field warmup_steps: must be non-negative");
  require(sac.buffer_capacity > 0, "field buffer_capacity: must be positive");
  require(sac.gat_hidden_dim > 0, "field gat_hidden_dim: must be positive");
  require(sac.gat_dropout >= 0.0 && sac.gat_dropout < 1.0,
          "field gat_dropout: must lie in [0,1)");
  require(sac.actor_hidden1 > 0 && sac.actor_hidden2 > 0,
          "field actor_hidden1/actor_hidden2: must be positive");
}

void apply_override(SimConfig& cfg, const std::string& key, const std::string& value) {
  const Field* f = find_field(key);
  if (!f) throw ConfigError("unknown configuration key: " + key);
  f->set(cfg, value);
}

SimConfig parse_config(std::istream& in, const std::string& source) {
  SimConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string trimmed = line;
    const auto start = trimmed.find_first_not_of(" \t");
    if (start == std::string::npos) continue;
    trimmed = trimmed.substr(start);
    if (trimmed.empty() || trimmed[0] == '#') continue;
    const auto eq = trimmed.find('=');
    if (eq == std::string::npos)
      throw ConfigError(source + ":" + std::to_string(lineno) + ": expected key=value");
    std::string key = trimmed.substr(0, eq);
    std::string value = trimmed.substr(eq + 1);
    while (!key.empty() && (key.back() == ' ' || key.back() == '\t')) key.pop_back();
    const auto vstart = value.find_first_not_of(" \t");
    value = (vstart == std::string::npos) ? "" : value.substr(vstart);
    while (!value.empty() && (value.back() == ' ' || value.back() == '\t')) value.pop_back();
    apply_override(cfg, key, value);
  }
  return cfg;
}

SimConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config: " + path);
  return parse_config(in, path);
}

void save_config(const SimConfig& cfg, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << serialize_config(cfg);
  if (!out) throw IoError("write failure: " + path);
}

std::vector<std::string> config_keys() {
  std::vector<std::string> keys;
  for (const auto& f : fields()) keys.emplace_back(f.key);
  return keys;
}

std::string get_config_value(const SimConfig& cfg, const std::string& key) {
  const Field* f = find_field(key);
  if (!f) throw ConfigError("unknown configuration key: " + key);
  return f->get(cfg);
}

std::string serialize_config(const SimConfig& cfg) {
  std::string s;
  for (const auto& f : fields()) {
    s += f.key;
    s += '=';
    s += f.get(cfg);
    s += '\n';
  }
  return s;
}

}  // namespace gatsac::sim
