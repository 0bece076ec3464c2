#include "config.hpp"

#include <json.hpp>

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace cbp::cli {

using json = nlohmann::ordered_json;

namespace {

void reject_unknown(const json& obj, const std::set<std::string>& allowed,
                    const std::string& where) {
  for (const auto& item : obj.items())
    if (!allowed.count(item.key()))
      throw ConfigError("unknown key '" + item.key() + "' in " + where);
}

double require_number(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key)) throw ConfigError("missing '" + key + "' in " + where);
  if (!obj[key].is_number()) throw ConfigError("'" + key + "' must be a number in " + where);
  return obj[key].get<double>();
}

TailRule parse_tail(const json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ".tail must be an object");
  reject_unknown(j, {"kind", "a", "b", "p"}, where + ".tail");
  const std::string kind = j.value("kind", "");
  TailRule t;
  if (kind == "constant") {
    t = TailRule::constant(require_number(j, "a", where + ".tail"));
  } else if (kind == "power" || kind == "logpower") {
    const double a = require_number(j, "a", where + ".tail");
    const double b = require_number(j, "b", where + ".tail");
    const double p = require_number(j, "p", where + ".tail");
    t = kind == "power" ? TailRule::power(a, b, p) : TailRule::log_power(a, b, p);
  } else {
    throw ConfigError(where + ".tail.kind must be constant|power|logpower");
  }
  return t;
}

json tail_to_json(const TailRule& t) {
  json j;
  switch (t.kind) {
    case TailRule::Kind::Constant:
      j["kind"] = "constant";
      j["a"] = t.a;
      return j;
    case TailRule::Kind::Power:
      j["kind"] = "power";
      break;
    case TailRule::Kind::LogPower:
      j["kind"] = "logpower";
      break;
  }
  j["a"] = t.a;
  j["b"] = t.b;
  j["p"] = t.p;
  return j;
}

ParamSeq parse_seq(const json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  reject_unknown(j, {"prefix", "tail"}, where);
  ParamSeq s;
  if (j.contains("prefix")) {
    if (!j["prefix"].is_array()) throw ConfigError(where + ".prefix must be an array");
    for (const auto& v : j["prefix"]) {
      if (!v.is_number()) throw ConfigError(where + ".prefix entries must be numbers");
      s.prefix.push_back(v.get<double>());
    }
  }
  if (!j.contains("tail")) throw ConfigError("missing '" + where + ".tail'");
  s.tail = parse_tail(j["tail"], where);
  return s;
}

json seq_to_json(const ParamSeq& s) {
  json j;
  j["prefix"] = s.prefix;
  j["tail"] = tail_to_json(s.tail);
  return j;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config root must be an object");
  reject_unknown(root, {"spec", "initial", "sim", "analysis", "output"}, "config");

  ExperimentConfig cfg;

  if (!root.contains("spec")) throw ConfigError("missing 'spec'");
  {
    const json& s = root["spec"];
    reject_unknown(s, {"size", "drifts", "diffusions", "collisions"}, "spec");
    if (!s.contains("size")) throw ConfigError("missing 'spec.size'");
    if (s["size"].is_string()) {
      if (s["size"] != "infinite") throw ConfigError("spec.size must be a count or 'infinite'");
      cfg.spec.size = SystemSpec::kInfinite;
    } else if (s["size"].is_number_integer()) {
      cfg.spec.size = s["size"].get<std::int64_t>();
    } else {
      throw ConfigError("spec.size must be an integer or 'infinite'");
    }
    if (!s.contains("drifts")) throw ConfigError("missing 'spec.drifts'");
    cfg.spec.drifts = parse_seq(s["drifts"], "spec.drifts");
    if (!s.contains("diffusions")) throw ConfigError("missing 'spec.diffusions'");
    cfg.spec.diffusions = parse_seq(s["diffusions"], "spec.diffusions");
    if (!s.contains("collisions")) throw ConfigError("missing 'spec.collisions'");
    const json& c = s["collisions"];
    if (c.is_string()) {
      if (c != "symmetric")
        throw ConfigError("spec.collisions must be 'symmetric' or an object");
      cfg.spec.symmetric = true;
    } else {
      reject_unknown(c, {"q_plus", "q_minus"}, "spec.collisions");
      cfg.spec.symmetric = false;
      if (!c.contains("q_plus") || !c.contains("q_minus"))
        throw ConfigError("spec.collisions needs q_plus and q_minus");
      cfg.spec.q_plus = parse_seq(c["q_plus"], "spec.collisions.q_plus");
      cfg.spec.q_minus = parse_seq(c["q_minus"], "spec.collisions.q_minus");
    }
  }

  if (root.contains("initial")) {
    const json& i = root["initial"];
    reject_unknown(i, {"kind", "infinite", "prefix", "tail"}, "initial");
    InitialConfig init;
    const std::string kind = i.value("kind", "ranked");
    if (kind == "ranked")
      init.kind = InitialConfig::Kind::Ranked;
    else if (kind == "named")
      init.kind = InitialConfig::Kind::Named;
    else
      throw ConfigError("initial.kind must be ranked|named");
    init.infinite = i.value("infinite", false);
    if (i.contains("prefix"))
      for (const auto& v : i["prefix"]) init.prefix.push_back(v.get<double>());
    if (init.infinite) {
      if (!i.contains("tail")) throw ConfigError("infinite initial needs a tail rule");
      init.tail = parse_tail(i["tail"], "initial");
    } else if (i.contains("tail")) {
      throw ConfigError("finite initial must not carry a tail rule");
    }
    cfg.initial = std::move(init);
  }

  if (!root.contains("sim")) throw ConfigError("missing 'sim'");
  {
    const json& m = root["sim"];
    reject_unknown(m,
                   {"dt", "horizon", "burn_in", "seed", "replicas", "scheme",
                    "output_stride", "zero_noise"},
                   "sim");
    cfg.sim.dt = require_number(m, "dt", "sim");
    cfg.sim.horizon = require_number(m, "horizon", "sim");
    cfg.sim.burn_in = m.contains("burn_in") ? require_number(m, "burn_in", "sim") : 0.0;
    if (m.contains("seed")) {
      if (!m["seed"].is_number_unsigned() && !m["seed"].is_number_integer())
        throw ConfigError("sim.seed must be an integer");
      cfg.sim.seed = m["seed"].get<std::uint64_t>();
      cfg.seed_in_config = true;
    }
    if (m.contains("replicas")) cfg.sim.replicas = m["replicas"].get<std::size_t>();
    const std::string scheme = m.value("scheme", "gap_srbm");
    if (scheme == "gap_srbm")
      cfg.sim.scheme = SimConfig::Scheme::GapSrbm;
    else if (scheme == "named_euler")
      cfg.sim.scheme = SimConfig::Scheme::NamedEuler;
    else
      throw ConfigError("sim.scheme must be gap_srbm|named_euler");
    if (m.contains("output_stride"))
      cfg.sim.output_stride = m["output_stride"].get<std::size_t>();
    if (m.contains("zero_noise")) cfg.sim.zero_noise = m["zero_noise"].get<bool>();
  }

  if (root.contains("analysis")) {
    if (!root["analysis"].is_array()) throw ConfigError("'analysis' must be an array");
    for (const auto& v : root["analysis"]) cfg.analysis.push_back(v.get<std::string>());
  }

  if (root.contains("output")) {
    const json& o = root["output"];
    reject_unknown(o, {"dir", "format"}, "output");
    if (o.contains("dir")) cfg.output.dir = o["dir"].get<std::string>();
    if (o.contains("format")) cfg.output.format = o["format"].get<std::string>();
    if (cfg.output.format != "csv" && cfg.output.format != "json" &&
        cfg.output.format != "binary")
      throw ConfigError("output.format must be csv|json|binary");
  }

  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize_config(const ExperimentConfig& cfg) {
  json root;
  json s;
  if (cfg.spec.infinite())
    s["size"] = "infinite";
  else
    s["size"] = cfg.spec.size;
  s["drifts"] = seq_to_json(cfg.spec.drifts);
  s["diffusions"] = seq_to_json(cfg.spec.diffusions);
  if (cfg.spec.symmetric) {
    s["collisions"] = "symmetric";
  } else {
    json c;
    c["q_plus"] = seq_to_json(cfg.spec.q_plus);
    c["q_minus"] = seq_to_json(cfg.spec.q_minus);
    s["collisions"] = c;
  }
  root["spec"] = s;

  if (cfg.initial) {
    json i;
    i["kind"] = cfg.initial->kind == InitialConfig::Kind::Ranked ? "ranked" : "named";
    i["infinite"] = cfg.initial->infinite;
    i["prefix"] = cfg.initial->prefix;
    if (cfg.initial->infinite) i["tail"] = tail_to_json(cfg.initial->tail);
    root["initial"] = i;
  }

  json m;
  m["dt"] = cfg.sim.dt;
  m["horizon"] = cfg.sim.horizon;
  m["burn_in"] = cfg.sim.burn_in;
  if (cfg.seed_in_config) m["seed"] = cfg.sim.seed;
  m["replicas"] = cfg.sim.replicas;
  m["scheme"] = cfg.sim.scheme == SimConfig::Scheme::GapSrbm ? "gap_srbm" : "named_euler";
  m["output_stride"] = cfg.sim.output_stride;
  if (cfg.sim.zero_noise) m["zero_noise"] = true;
  root["sim"] = m;

  if (!cfg.analysis.empty()) root["analysis"] = cfg.analysis;

  json o;
  o["dir"] = cfg.output.dir;
  o["format"] = cfg.output.format;
  root["output"] = o;

  return root.dump(2) + "\n";
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

std::string config_hash_hex(const ExperimentConfig& cfg) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, fnv1a64(serialize_config(cfg)));
  return buf;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace cbp::cli
