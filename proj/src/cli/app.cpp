#include "axrel/cli/app.hpp"

#include <cstdio>
#include <filesystem>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "axrel/arith/mare.hpp"
#include "axrel/campaign/campaign.hpp"
#include "axrel/dse/search.hpp"
#include "axrel/error.hpp"
#include "axrel/io/io.hpp"
#include "axrel/metrics/stats.hpp"
#include "config.hpp"

namespace axrel::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string provenance(const std::string& command, const Config& cfg) {
  return std::string("# ") + kToolName + " " + kToolVersion + " command=" + command +
         " config_hash=" + cfg.hash() + "\n";
}

void write_manifest(const fs::path& output, const std::string& command, const Config& cfg,
                    std::size_t rows) {
  json m;
  m["tool"] = kToolName;
  m["version"] = kToolVersion;
  m["command"] = command;
  m["config_hash"] = cfg.hash();
  m["config"] = cfg.doc();
  m["output"] = output.filename().string();
  m["rows"] = rows;
  io::write_text(output.string() + ".manifest.json", m.dump(2) + "\n");
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::vector<std::uint64_t> seeds_of(const Config& cfg) {
  if (cfg.has("seeds")) {
    if (cfg.has("seed_count")) throw ConfigError("config keys 'seeds' and 'seed_count' are exclusive");
    auto s = cfg.u64s("seeds");
    if (s.empty()) throw ConfigError("config key 'seeds' must not be empty");
    return s;
  }
  const std::uint64_t count = cfg.u64("seed_count");
  const std::uint64_t base = cfg.u64("seed_base", 0);
  std::vector<std::uint64_t> s;
  for (std::uint64_t i = 0; i < count; ++i) s.push_back(base + i);
  if (s.empty()) throw ConfigError("config key 'seed_count' must be positive");
  return s;
}

std::vector<double> ber_grid_of(const Config& cfg) {
  auto grid = cfg.reals("ber_grid");
  if (grid.empty()) throw ConfigError("config key 'ber_grid' must not be empty");
  for (double b : grid) {
    if (!(b >= 0.0 && b <= 1.0)) throw ConfigError("config key 'ber_grid' values must lie in [0, 1]");
  }
  return grid;
}

unsigned bits_of(const Config& cfg, const std::string& key, std::uint64_t fallback) {
  const auto b = cfg.u64(key, fallback);
  if (b < 2 || b > 8) throw ConfigError("config key '" + key + "' must be in [2, 8]");
  return static_cast<unsigned>(b);
}

template <typename F>
auto as_config_error(const std::string& key, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    throw ConfigError("config key '" + key + "': " + e.what());
  }
}

// characterize -------------------------------------------------------------

int cmd_characterize(const fs::path& config_path, std::ostream& out) {
  const Config cfg = Config::load(config_path, {"multipliers", "n", "policy", "samples", "seed", "output"});
  const auto labels = cfg.strs("multipliers");
  if (labels.empty()) throw ConfigError("config key 'multipliers' must not be empty");
  const auto n = static_cast<unsigned>(cfg.u64("n", 16));
  const std::string policy_name = cfg.str("policy", "sampled");
  const std::uint64_t samples = cfg.u64("samples", 10'000'000);
  const std::uint64_t seed = cfg.u64("seed", 1);
  arith::SamplePolicy policy;
  if (policy_name == "exhaustive") {
    policy = arith::Exhaustive{};
  } else if (policy_name == "sampled") {
    policy = arith::Sampled{samples, seed};
  } else {
    throw ConfigError("config key 'policy' must be 'exhaustive' or 'sampled'");
  }
  std::vector<arith::MultConfig> configs;
  for (const auto& l : labels) configs.push_back(as_config_error("multipliers", [&] { return arith::parse_label(l, n); }));

  std::string csv = provenance("characterize", cfg) + "family,n,t,h,policy,samples,seed,mare_percent\n";
  for (const auto& c : configs) {
    const auto r = as_config_error("policy", [&] { return arith::mare(c, policy); });
    const bool sampled = std::holds_alternative<arith::Sampled>(policy);
    csv += std::string(arith::to_string(c.family)) + "," + std::to_string(c.n) + "," + std::to_string(c.t) + "," +
           std::to_string(c.h) + "," + policy_name + "," + std::to_string(r.pairs_drawn) + "," +
           (sampled ? std::to_string(seed) : "") + "," + fmt("%.4f", r.percent) + "\n";
    out << arith::to_label(c) << ": MARE " << fmt("%.4f", r.percent) << "%\n";
  }
  const fs::path output = cfg.path("output");
  io::write_text(output, csv);
  write_manifest(output, "characterize", cfg, configs.size());
  return kSuccess;
}

// quantize -----------------------------------------------------------------

int cmd_quantize(const fs::path& config_path, std::ostream& out) {
  const Config cfg = Config::load(config_path, {"model", "bits", "protect", "output_dir"});
  const unsigned bits = bits_of(cfg, "bits", 8);
  const bool protect = cfg.flag("protect", false);
  const fs::path dir = cfg.path("output_dir");
  const net::FloatModel model = net::with_protection(io::load_model(cfg.path("model")), protect);
  const net::NetworkModel q = net::quantize_model(model, bits);
  fs::create_directories(dir);

  std::string csv = provenance("quantize", cfg) + "layer,params,bits,protected,scale,memory_bits\n";
  for (const auto& l : q.layers) {
    io::write_text(dir / (l.spec.id + ".qtensor"),
                   io::to_text({l.scheme, l.spec.msb_triplication, l.stored}));
    csv += l.spec.id + "," + std::to_string(l.stored.size()) + "," + std::to_string(bits) + "," +
           (protect ? "1" : "0") + "," + fmt("%.9g", l.scheme.scale) + "," +
           std::to_string(quant::protected_memory_bits(l.stored.size(), bits, protect)) + "\n";
  }
  csv += "total," + std::to_string(q.param_count()) + "," + std::to_string(bits) + "," + (protect ? "1" : "0") +
         ",," + std::to_string(q.memory_bits()) + "\n";
  const fs::path output = dir / "quantize.csv";
  io::write_text(output, csv);
  write_manifest(output, "quantize", cfg, q.layers.size() + 1);
  out << "quantized " << q.param_count() << " parameters at " << bits << " bits"
      << (protect ? " (MSB-protected)" : "") << ", " << q.memory_bits() << " memory bits\n";
  return kSuccess;
}

// campaign -----------------------------------------------------------------

std::vector<net::Bounds> bounds_for(const Config& cfg, const net::FloatModel& model, unsigned bits) {
  bool all = true;
  for (const auto& l : model.layers) all = all && l.bounds.has_value();
  if (!cfg.has("calibration") && all) {
    std::vector<net::Bounds> b;
    for (const auto& l : model.layers) b.push_back(*l.bounds);
    return b;
  }
  if (!cfg.has("calibration")) {
    throw ConfigError("config key 'calibration' is required to profile clamp bounds");
  }
  const net::Dataset calib = io::load_dataset(cfg.path("calibration"));
  return net::profile_ranges(net::quantize_model(net::with_protection(model, false), bits), calib);
}

int cmd_campaign(const fs::path& config_path, std::ostream& out) {
  const Config cfg = Config::load(
      config_path, {"model", "dataset", "calibration", "bits", "fault_kind", "ber_grid", "seeds", "seed_count",
                    "seed_base", "protections", "fault_bits", "activation_bits", "lifetime", "test_interval",
                    "p_single", "vote_cost", "output"});
  const unsigned bits = bits_of(cfg, "bits", 8);
  const std::string kind = cfg.str("fault_kind", "weights");
  const auto seeds = seeds_of(cfg);
  std::vector<campaign::Protection> protections;
  for (const auto& p : cfg.strs("protections", {"none", "msb"})) {
    protections.push_back(as_config_error("protections", [&] { return campaign::Protection::parse(p); }));
  }
  bool needs_bounds = false;
  for (const auto& p : protections) needs_bounds = needs_bounds || p.clamp.has_value();

  // Validate every key before touching data files.
  campaign::WeightCampaign wc;
  campaign::ActivationCampaign ac;
  if (kind == "weights") {
    wc.bits = bits;
    wc.ber_grid = ber_grid_of(cfg);
    wc.seeds = seeds;
    wc.protections = protections;
    wc.target_bits = as_config_error("fault_bits", [&] { return campaign::parse_weight_bits(cfg.str("fault_bits", "all")); });
    wc.cost.vote_cost = cfg.real("vote_cost", wc.cost.vote_cost);
    wc.lifetime = {cfg.real("lifetime", 1.0), cfg.real("test_interval", 1.0), cfg.real("p_single", 1.0)};
    if (!(wc.lifetime.test_interval > 0.0)) throw ConfigError("config key 'test_interval' must be positive");
  } else if (kind == "activations") {
    ac.seeds = seeds;
    ac.protections = protections;
    for (auto b : cfg.has("activation_bits") ? cfg.u64s("activation_bits") : std::vector<std::uint64_t>{6, 7}) {
      if (b >= net::kActivationBits) throw ConfigError("config key 'activation_bits' entries must be < 8");
      ac.bits.push_back(static_cast<std::uint32_t>(b));
    }
  } else {
    throw ConfigError("config key 'fault_kind' must be 'weights' or 'activations'");
  }

  const net::FloatModel model = io::load_model(cfg.path("model"));
  const net::Dataset data = io::load_dataset(cfg.path("dataset"));
  const std::vector<net::Bounds> bounds = needs_bounds ? bounds_for(cfg, model, bits) : std::vector<net::Bounds>{};

  std::vector<campaign::CampaignRow> rows;
  if (kind == "weights") {
    rows = campaign::run_weight_campaign(model, data, wc, bounds);
  } else {
    const auto q = net::quantize_model(net::with_protection(model, false), bits);
    rows = campaign::run_activation_campaign(q, data, ac, bounds);
  }

  std::string csv = provenance("campaign", cfg) + campaign::campaign_csv_header();
  for (const auto& r : rows) csv += campaign::to_csv_line(r);
  const fs::path output = cfg.path("output");
  io::write_text(output, csv);
  write_manifest(output, "campaign", cfg, rows.size());
  out << "campaign: " << rows.size() << " trials written to " << output.string() << "\n";
  return kSuccess;
}

// dse ----------------------------------------------------------------------

int cmd_dse(const fs::path& config_path, std::ostream& out) {
  const Config cfg = Config::load(
      config_path, {"model", "dataset", "range", "accuracy_threshold", "reliability_threshold", "ber_grid",
                    "seeds", "seed_count", "seed_base", "vote_cost", "output_trace", "output_summary"});
  dse::SearchConfig sc;
  sc.accuracy_threshold = cfg.real("accuracy_threshold");
  sc.reliability_threshold = cfg.real("reliability_threshold");
  const auto range = cfg.has("range") ? cfg.u64s("range") : std::vector<std::uint64_t>{2, 8};
  if (range.size() != 2) throw ConfigError("config key 'range' must be [m, n]");
  sc.min_bits = static_cast<unsigned>(range[0]);
  sc.max_bits = static_cast<unsigned>(range[1]);
  sc.ber_grid = ber_grid_of(cfg);
  sc.seeds = seeds_of(cfg);
  as_config_error("range", [&] { sc.validate(); return 0; });
  campaign::CostModel cost;
  cost.vote_cost = cfg.real("vote_cost", cost.vote_cost);

  campaign::ModelEvaluator evaluator(io::load_model(cfg.path("model")), io::load_dataset(cfg.path("dataset")), cost);
  const dse::SearchTrace trace = dse::fortune_search(evaluator, sc);

  const fs::path trace_path = cfg.path("output_trace");
  io::write_text(trace_path, provenance("dse", cfg) + dse::trace_csv(trace, sc));
  write_manifest(trace_path, "dse", cfg, trace.steps.size());

  json summary;
  summary["tool"] = kToolName;
  summary["version"] = kToolVersion;
  summary["config_hash"] = cfg.hash();
  summary["termination"] = std::string(dse::to_string(trace.termination));
  summary["steps"] = trace.steps.size();
  if (const auto* s = trace.selected_step()) {
    summary["outcome"] = "selected";
    summary["selected"] = {{"bit_width", s->bit_width},
                           {"protection", "msb"},
                           {"golden_accuracy", s->golden_accuracy},
                           {"accuracy_drop", s->accuracy_drop},
                           {"vulnerability", s->vulnerability},
                           {"memory_bits", s->memory_bits},
                           {"execution_cost", s->execution_cost}};
  } else {
    summary["outcome"] = "NoPassingWidth";
  }
  if (cfg.has("output_summary")) io::write_text(cfg.path("output_summary"), summary.dump(2) + "\n");

  if (!trace.found()) {
    out << "dse: no bit width satisfies the thresholds (" << trace.steps.size() << " steps)\n";
    return kNoPassingWidth;
  }
  out << "dse: selected " << *trace.selected_bits << "-bit protected weights after " << trace.steps.size()
      << " steps\n";
  return kSuccess;
}

// report -------------------------------------------------------------------

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> f;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, ',')) f.push_back(item);
  if (!line.empty() && line.back() == ',') f.emplace_back();
  return f;
}

int cmd_report(const fs::path& config_path, std::ostream& out) {
  const Config cfg = Config::load(config_path, {"input", "output"});
  const std::string text = io::read_text(cfg.path("input"));
  std::istringstream is(text);
  std::string line;
  std::vector<std::string> header;
  struct Group {
    std::string ber, protection, memory_bits;
    std::vector<double> vul, sdc1, sdc10, cov, p_drop, rap;
  };
  std::vector<Group> groups;
  std::map<std::pair<std::string, std::string>, std::size_t> index;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    auto f = split(line);
    if (header.empty()) {
      header = f;
      if (header != split(campaign::campaign_csv_header().substr(0, campaign::campaign_csv_header().size() - 1))) {
        throw Error(Errc::ParseError, "report input is not a campaign CSV");
      }
      continue;
    }
    if (f.size() != header.size()) {
      throw Error(Errc::ParseError, "report input line " + std::to_string(line_no) + " has wrong field count");
    }
    const auto key = std::make_pair(f[0], f[2]);
    auto [it, inserted] = index.try_emplace(key, groups.size());
    if (inserted) groups.push_back({f[0], f[2], f[9], {}, {}, {}, {}, {}, {}});
    auto& g = groups[it->second];
    try {
      g.vul.push_back(std::stod(f[5]));
      g.sdc1.push_back(std::stod(f[6]));
      g.sdc10.push_back(std::stod(f[7]));
      g.cov.push_back(std::stod(f[8]));
      g.p_drop.push_back(std::stod(f[10]));
      g.rap.push_back(std::stod(f[11]));
    } catch (const std::logic_error&) {
      throw Error(Errc::ParseError, "report input line " + std::to_string(line_no) + " has a bad number");
    }
  }
  std::string csv = provenance("report", cfg) +
                    "ber,protection,trials,vulnerability_mean,vulnerability_std,sdc1_mean,sdc10_mean,"
                    "fault_coverage_mean,memory_bits,p_drop_mean,rap_mean\n";
  for (const auto& g : groups) {
    const auto v = metrics::summarize(g.vul);
    csv += g.ber + "," + g.protection + "," + std::to_string(v.count) + "," + fmt("%.4f", v.mean) + "," +
           fmt("%.4f", v.stddev) + "," + fmt("%.4f", metrics::summarize(g.sdc1).mean) + "," +
           fmt("%.4f", metrics::summarize(g.sdc10).mean) + "," + fmt("%.4f", metrics::summarize(g.cov).mean) +
           "," + g.memory_bits + "," + fmt("%.6e", metrics::summarize(g.p_drop).mean) + "," +
           fmt("%.6e", metrics::summarize(g.rap).mean) + "\n";
  }
  const fs::path output = cfg.path("output");
  io::write_text(output, csv);
  write_manifest(output, "report", cfg, groups.size());
  out << "report: " << groups.size() << " groups\n";
  return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fault-tolerance workbench for quantized and approximate DNN arithmetic", kToolName};
  app.set_version_flag("--version", std::string(kToolName) + " " + kToolVersion);
  app.require_subcommand(1);

  std::string config;
  struct Command {
    const char* name;
    const char* help;
    int (*fn)(const fs::path&, std::ostream&);
  };
  const Command commands[] = {
      {"characterize", "MARE of multiplier configurations", cmd_characterize},
      {"quantize", "Quantize (and optionally MSB-protect) model weights", cmd_quantize},
      {"campaign", "Weight BER or activation fault campaigns", cmd_campaign},
      {"dse", "Bit-width search under accuracy and reliability thresholds", cmd_dse},
      {"report", "Aggregate a campaign CSV", cmd_report},
  };
  std::vector<std::pair<CLI::App*, const Command*>> subs;
  for (const auto& c : commands) {
    auto* sub = app.add_subcommand(c.name, c.help);
    sub->add_option("-c,--config", config, "JSON config file")->required();
    subs.emplace_back(sub, &c);
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::ostringstream msg;
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsageError;
  }

  for (const auto& [sub, cmd] : subs) {
    if (!sub->parsed()) continue;
    try {
      return cmd->fn(config, out);
    } catch (const ConfigError& e) {
      err << "config error: " << e.what() << "\n";
      return kConfigError;
    } catch (const Error& e) {
      err << (e.code() == Errc::InvalidConfig ? "config error: " : "data error: ") << e.what() << "\n";
      return e.code() == Errc::InvalidConfig ? kConfigError : kDataError;
    } catch (const fs::filesystem_error& e) {
      err << "data error: " << e.what() << "\n";
      return kDataError;
    }
  }
  return kUsageError;
}

}  // namespace axrel::cli
