#include "fairtail/cli.hpp"

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "fairtail/dataset.hpp"
#include "fairtail/error.hpp"
#include "fairtail/fairness.hpp"
#include "fairtail/format.hpp"
#include "fairtail/popularity.hpp"
#include "fairtail/report_io.hpp"

namespace fairtail::cli {

namespace {

namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

int exit_code_for(ErrorCode code) {
  return code == ErrorCode::InvalidArgument ? kExitUsage : kExitData;
}

// All tunables of every subcommand; the config file and flags both write
// here, flags winning.
struct Options {
  std::string input;
  std::string provider_map;
  bool identity_providers = false;
  std::string output_dir;
  std::string config_file;
  std::string algorithms = "userknn,nmf,useritemavg,mostpop,random";
  int n = 10;
  int k = 40;
  int factors = 15;
  int epochs = 50;
  double reg = 0.06;
  std::string scaling = "raw";
  double beta1 = 0.3;
  double beta2 = 0.7;
  std::uint64_t seed = 0;
  std::string exclude_seen = "true";
  // synth
  std::uint32_t users = 0;
  std::uint32_t items = 0;
  std::uint32_t events = 0;
  double exponent = 1.0;
  std::string output;
};

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw Error(ErrorCode::InvalidArgument, "config key '" + key + "': bad value '" + text + "'");
  return value;
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true") return true;
  if (text == "false") return false;
  throw Error(ErrorCode::InvalidArgument,
              "config key '" + key + "': expected true or false, got '" + text + "'");
}

std::string trim(const std::string& s) {
  auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

// Flat "key = value" file, '#' comments, flag names as keys.
std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open config file '" + path + "'");
  std::map<std::string, std::string> values;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    std::string text = trim(line);
    if (text.empty() || text.front() == '#') continue;
    auto eq = text.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorCode::InvalidArgument,
                  path + ": line " + std::to_string(line_number) + ": expected key = value");
    std::string key = trim(text.substr(0, eq));
    std::string value = trim(text.substr(eq + 1));
    if (key.empty())
      throw Error(ErrorCode::InvalidArgument,
                  path + ": line " + std::to_string(line_number) + ": empty key");
    values[key] = value;
  }
  return values;
}

// Applies config values underneath any flags the user passed explicitly.
void apply_config(const std::map<std::string, std::string>& values, const CLI::App& cmd,
                  Options& opt) {
  std::set<std::string> given;
  for (const CLI::Option* option : cmd.get_options()) {
    if (option->count() > 0)
      for (const std::string& lname : option->get_lnames()) given.insert(lname);
  }
  auto allowed = [&](const std::string& key) {
    return cmd.get_option_no_throw("--" + key) != nullptr;
  };

  for (const auto& [key, value] : values) {
    if (key == "config")
      throw Error(ErrorCode::InvalidArgument, "config key 'config' cannot nest");
    if (!allowed(key))
      throw Error(ErrorCode::InvalidArgument, "unknown config key '" + key + "'");
    if (given.count(key)) continue;

    if (key == "input") opt.input = value;
    else if (key == "provider-map") opt.provider_map = value;
    else if (key == "identity-providers") opt.identity_providers = parse_bool(key, value);
    else if (key == "output-dir") opt.output_dir = value;
    else if (key == "algorithms") opt.algorithms = value;
    else if (key == "n") opt.n = parse_number<int>(key, value);
    else if (key == "k") opt.k = parse_number<int>(key, value);
    else if (key == "factors") opt.factors = parse_number<int>(key, value);
    else if (key == "epochs") opt.epochs = parse_number<int>(key, value);
    else if (key == "reg") opt.reg = parse_number<double>(key, value);
    else if (key == "scaling") opt.scaling = value;
    else if (key == "beta1") opt.beta1 = parse_number<double>(key, value);
    else if (key == "beta2") opt.beta2 = parse_number<double>(key, value);
    else if (key == "seed") opt.seed = parse_number<std::uint64_t>(key, value);
    else if (key == "exclude-seen") opt.exclude_seen = value;
    else if (key == "users") opt.users = parse_number<std::uint32_t>(key, value);
    else if (key == "items") opt.items = parse_number<std::uint32_t>(key, value);
    else if (key == "events") opt.events = parse_number<std::uint32_t>(key, value);
    else if (key == "exponent") opt.exponent = parse_number<double>(key, value);
    else if (key == "output") opt.output = value;
  }
}

std::vector<std::string> split_csv(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream stream(text);
  std::string part;
  while (std::getline(stream, part, ',')) parts.push_back(trim(part));
  return parts;
}

fs::path resolve_output_dir(const Options& opt) {
  if (!opt.output_dir.empty()) return opt.output_dir;
  if (const char* env = std::getenv("FAIRTAIL_OUTPUT_DIR"); env && *env) return env;
  return ".";
}

InteractionMatrix load_matrix(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open input file '" + path + "'");
  try {
    auto records = parse_interactions(in);
    return build_matrix(records);
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.detail());
  }
}

ItemProviderMap load_providers(const Options& opt, const InteractionMatrix& matrix) {
  if (!opt.provider_map.empty()) {
    if (opt.identity_providers)
      throw Error(ErrorCode::InvalidArgument,
                  "--provider-map and --identity-providers are mutually exclusive");
    std::ifstream in(opt.provider_map, std::ios::binary);
    if (!in)
      throw Error(ErrorCode::IoError, "cannot open provider map '" + opt.provider_map + "'");
    try {
      return load_provider_map(in, matrix);
    } catch (const Error& e) {
      throw Error(e.code(), opt.provider_map + ": " + e.detail());
    }
  }
  return identity_provider_map(matrix);
}

void require_input(const Options& opt) {
  if (opt.input.empty())
    throw Error(ErrorCode::InvalidArgument, "--input is required");
}

int run_audit(const Options& opt, std::ostream& out) {
  require_input(opt);

  AuditConfig config;
  config.beta1 = opt.beta1;
  config.beta2 = opt.beta2;
  config.scaling = parse_scaling(opt.scaling);
  config.provider_mode =
      opt.provider_map.empty() ? ProviderMode::identity : ProviderMode::mapped;
  config.master_seed = opt.seed;
  config.n = opt.n;

  bool exclude_seen = parse_bool("exclude-seen", opt.exclude_seen);
  auto names = split_csv(opt.algorithms);
  if (names.empty())
    throw Error(ErrorCode::InvalidArgument, "--algorithms must name at least one algorithm");
  for (const auto& name : names) {
    RecommenderConfig rec;
    rec.algorithm = parse_algorithm(name);
    rec.k = opt.k;
    rec.factors = opt.factors;
    rec.epochs = opt.epochs;
    rec.reg = opt.reg;
    rec.n = opt.n;
    rec.exclude_seen = exclude_seen;
    config.algorithms.push_back(rec);
  }
  config.validate();

  InteractionMatrix matrix = load_matrix(opt.input);
  ItemProviderMap providers = load_providers(opt, matrix);
  GapReport report = audit(matrix, providers, config);

  fs::path dir = resolve_output_dir(opt);
  fs::create_directories(dir);
  std::ostringstream csv;
  write_report_csv(csv, report);
  write_file_atomic(dir / "report.csv", csv.str());
  write_file_atomic(dir / "report.json", render_report_json(report));

  print_report_summary(out, report);
  return kExitOk;
}

int run_stats(const Options& opt) {
  require_input(opt);
  InteractionMatrix matrix = load_matrix(opt.input);
  ItemProviderMap providers = load_providers(opt, matrix);
  PopularityTable table = compute_popularity(matrix, providers);

  fs::path dir = resolve_output_dir(opt);
  fs::create_directories(dir);
  std::ostringstream csv;
  write_popularity_csv(csv, table, providers.providers);
  write_file_atomic(dir / "popularity.csv", csv.str());
  return kExitOk;
}

int run_groups(const Options& opt, std::ostream& out) {
  require_input(opt);
  if (!(0.0 < opt.beta1 && opt.beta1 < opt.beta2 && opt.beta2 < 1.0))
    throw Error(ErrorCode::InvalidArgument, "cutting points must satisfy 0 < beta1 < beta2 < 1");

  InteractionMatrix matrix = load_matrix(opt.input);
  ItemProviderMap providers = load_providers(opt, matrix);
  PopularityTable table = compute_popularity(matrix, providers);
  GroupPartition partition = partition_long_tail(table, opt.beta1, opt.beta2);

  fs::path dir = resolve_output_dir(opt);
  fs::create_directories(dir);
  std::ostringstream csv;
  write_partition_csv(csv, partition, providers.providers);
  write_file_atomic(dir / "groups.csv", csv.str());

  for (Group g : {Group::head, Group::mid, Group::tail}) {
    const auto& members = partition.members(g);
    double share = 0.0;
    for (std::uint32_t p : members) share += table.shares[p];
    out << group_name(g) << ": " << members.size() << " providers, data share "
        << format_double(share) << '\n';
  }
  return kExitOk;
}

int run_synth(const Options& opt) {
  if (opt.users == 0 || opt.items == 0 || opt.events == 0)
    throw Error(ErrorCode::InvalidArgument, "--users, --items and --events must be positive");
  if (!(opt.exponent > 0.0))
    throw Error(ErrorCode::InvalidArgument, "--exponent must be positive");

  auto records = generate_synthetic(opt.users, opt.items, opt.events, opt.exponent, opt.seed);

  fs::path path;
  if (!opt.output.empty()) {
    path = opt.output;
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
  } else {
    fs::path dir = resolve_output_dir(opt);
    fs::create_directories(dir);
    path = dir / "interactions.tsv";
  }
  std::ostringstream text;
  write_interactions(text, records);
  write_file_atomic(path, text.str());
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options opt;
  CLI::App app{"provider-side popularity-bias audit for recommender systems", "fairtail"};
  app.require_subcommand(1);

  auto add_io = [&](CLI::App* cmd) {
    cmd->add_option("--input", opt.input, "interactions TSV (user<TAB>item<TAB>count)");
    cmd->add_option("--provider-map", opt.provider_map, "item<TAB>provider TSV");
    cmd->add_flag("--identity-providers", opt.identity_providers,
                  "treat each item as its own provider (default when no map is given)");
  };
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--output-dir", opt.output_dir,
                    "output directory (falls back to $FAIRTAIL_OUTPUT_DIR, then '.')");
    cmd->add_option("--config", opt.config_file, "flat key = value config file");
  };
  auto add_betas = [&](CLI::App* cmd) {
    cmd->add_option("--beta1", opt.beta1, "head cumulative-share cutting point");
    cmd->add_option("--beta2", opt.beta2, "mid cumulative-share cutting point");
  };

  CLI::App* audit_cmd = app.add_subcommand("audit", "fit algorithms and report GAP/delta-GAP");
  add_io(audit_cmd);
  add_common(audit_cmd);
  add_betas(audit_cmd);
  audit_cmd->add_option("--algorithms", opt.algorithms, "comma-separated algorithm list");
  audit_cmd->add_option("--n", opt.n, "recommendation list length");
  audit_cmd->add_option("--k", opt.k, "UserKNN neighborhood size");
  audit_cmd->add_option("--factors", opt.factors, "NMF latent dimension");
  audit_cmd->add_option("--epochs", opt.epochs, "NMF training passes");
  audit_cmd->add_option("--reg", opt.reg, "NMF regularization weight");
  audit_cmd->add_option("--scaling", opt.scaling, "rating construction: raw|log|minmax");
  audit_cmd->add_option("--seed", opt.seed, "master seed");
  audit_cmd->add_option("--exclude-seen", opt.exclude_seen,
                        "true|false: drop training items from lists");

  CLI::App* stats_cmd = app.add_subcommand("stats", "write provider popularity table");
  add_io(stats_cmd);
  add_common(stats_cmd);

  CLI::App* groups_cmd = app.add_subcommand("groups", "write the long-tail partition");
  add_io(groups_cmd);
  add_common(groups_cmd);
  add_betas(groups_cmd);

  CLI::App* synth_cmd = app.add_subcommand("synth", "generate Zipf-distributed interactions");
  add_common(synth_cmd);
  synth_cmd->add_option("--users", opt.users, "number of users");
  synth_cmd->add_option("--items", opt.items, "number of items");
  synth_cmd->add_option("--events", opt.events, "listening events per user");
  synth_cmd->add_option("--exponent", opt.exponent, "Zipf exponent");
  synth_cmd->add_option("--seed", opt.seed, "generator seed");
  synth_cmd->add_option("--output", opt.output,
                        "output file (default <output-dir>/interactions.tsv)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "fairtail: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    CLI::App* cmd = app.get_subcommands().front();
    if (!opt.config_file.empty()) apply_config(read_config_file(opt.config_file), *cmd, opt);

    if (cmd == audit_cmd) return run_audit(opt, out);
    if (cmd == stats_cmd) return run_stats(opt);
    if (cmd == groups_cmd) return run_groups(opt, out);
    return run_synth(opt);
  } catch (const Error& e) {
    err << "fairtail: error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "fairtail: error: " << e.what() << '\n';
    return kExitData;
  }
}

}  // namespace fairtail::cli
