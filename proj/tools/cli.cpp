#include "cli.hpp"

#include "botgraph/crawler.hpp"
#include "botgraph/dataset.hpp"
#include "botgraph/error.hpp"
#include "botgraph/ingest.hpp"
#include "botgraph/layout.hpp"
#include "botgraph/metrics.hpp"
#include "botgraph/pipeline.hpp"
#include "botgraph/render.hpp"
#include "botgraph/sitemap.hpp"
#include "botgraph/synth.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

namespace botgraph::cli {

namespace {

struct Options {
  std::uint64_t seed = 0;
  std::string log_format = "jsonl";

  // sitemap build
  std::string sitemap_mode;
  std::string logs;
  std::string input;
  std::string start;
  std::size_t max_patterns = 1000;
  int timeout_ms = 10000;
  std::string user_agent = "botgraph-sitemap-crawler/1.0";
  std::string out;

  std::string sitemap;
  LayoutConfig layout;

  std::size_t min_spots = kDefaultMinSpotsExclusive;
  unsigned jobs = 1;
  int image_size = 256;
  double padding = 0.05;
  int line_width = 2;
  double r_min = 4.0, r_max = 80.0, x_gate = 50.0, r_gate = 50.0;

  std::string profiles;

  std::string truth;
  std::string pred;
  std::string report = "report.json";
};

std::vector<Session> load_sessions(const Options& o, std::ostream& err) {
  auto format = parse_log_format(o.log_format);
  if (!format) throw Error(ErrorKind::config, "unknown log format '" + o.log_format + "'");
  ParseResult parsed = parse_log_file(o.logs, *format);
  if (parsed.malformed > 0) {
    err << "warning: skipped " << parsed.malformed << " malformed record(s), first at line "
        << *parsed.first_malformed_line << "\n";
  }
  return sessionize(parsed.requests);
}

std::string percent(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f%%", v * 100.0);
  return buf;
}

void cmd_sitemap_build(const Options& o, std::ostream& out, std::ostream& err) {
  Sitemap sitemap = [&] {
    if (o.sitemap_mode == "sniff") {
      if (o.logs.empty()) throw Error(ErrorKind::config, "--mode sniff requires --logs");
      return build_from_sessions(load_sessions(o, err));
    }
    if (o.sitemap_mode == "file") {
      if (o.input.empty()) throw Error(ErrorKind::config, "--mode file requires --input");
      return load_from_file(o.input).without_coordinates();
    }
    if (o.start.empty()) throw Error(ErrorKind::config, "--mode crawl requires --start");
    auto url = split_url(o.start);
    if (!url || url->origin.empty()) {
      throw Error(ErrorKind::config, "--start must be an absolute http(s) URL");
    }
    HttpFetcher fetcher(url->origin, std::chrono::milliseconds(o.timeout_ms), o.user_agent);
    CrawlResult result = crawl(fetcher, o.start, o.max_patterns);
    for (const auto& failed : result.failed_targets) err << "warning: fetch failed: " << failed << "\n";
    return std::move(result.sitemap);
  }();
  save_to_file(sitemap, o.out);
  out << "sitemap: " << sitemap.size() << " nodes, " << sitemap.edges().size() << " edges -> "
      << o.out << "\n";
}

void cmd_layout(const Options& o, std::ostream& out) {
  Sitemap sitemap = load_from_file(o.sitemap);
  LayoutConfig config = o.layout;
  config.seed = o.seed;
  LayoutStats stats;
  Sitemap laid_out = run_layout(sitemap, config, &stats);
  const std::string target = o.out.empty() ? o.sitemap : o.out;
  save_to_file(laid_out, target);
  out << "layout: " << laid_out.size() << " nodes, " << stats.iterations << " iterations"
      << (stats.converged ? " (converged)" : " (iteration cap)") << " -> " << target << "\n";
}

RenderConfig render_config(const Options& o) {
  RenderConfig config;
  config.image_size = o.image_size;
  config.padding_fraction = o.padding;
  config.line_width = o.line_width;
  config.radius = solve_radius_params(o.r_min, o.r_max, o.x_gate, o.r_gate);
  config.validate();
  return config;
}

void cmd_render(const Options& o, std::ostream& out, std::ostream& err) {
  RenderConfig config = render_config(o);
  Sitemap sitemap = load_from_file(o.sitemap);
  std::vector<Session> sessions = load_sessions(o, err);
  RenderRunStats stats = render_dataset(sitemap, sessions, config, o.min_spots, o.jobs, o.out);
  out << "render: sessions in " << stats.sessions_in << ", out " << stats.sessions_out;
  if (stats.shares) {
    out << ", BoR " << percent(stats.shares->bor) << ", BoS " << percent(stats.shares->bos);
  }
  out << " -> " << stats.manifest.string() << "\n";
}

void cmd_synth(const Options& o, std::ostream& out) {
  Sitemap sitemap = load_from_file(o.sitemap);
  auto [profiles, options] = load_profiles(o.profiles, o.seed);
  std::vector<Session> sessions = generate(sitemap, profiles, options);
  std::ofstream file(o.out, std::ios::binary | std::ios::trunc);
  if (!file) throw Error(ErrorKind::io, "cannot write " + o.out);
  std::size_t requests = 0;
  for (const auto& s : sessions) {
    write_jsonl(file, s.requests);
    requests += s.requests.size();
  }
  if (!file) throw Error(ErrorKind::io, "write failed for " + o.out);
  out << "synth: " << sessions.size() << " sessions, " << requests << " requests -> " << o.out
      << "\n";
}

void cmd_evaluate(const Options& o, std::ostream& out, std::ostream& err) {
  std::map<std::string, Label> truth;
  for (const auto& row : read_manifest(o.truth)) {
    if (!row.label) throw Error(ErrorKind::input, "truth row '" + row.session_id + "' is unlabeled");
    truth[row.session_id] = *row.label;
  }
  std::map<std::string, Label> predicted;
  for (const auto& p : read_predictions(o.pred)) {
    if (!predicted.emplace(p.session_id, p.label).second) {
      throw Error(ErrorKind::duplicate_key, "prediction for '" + p.session_id + "' repeated");
    }
  }
  EvalReport report = evaluate(truth, predicted);

  if (!o.logs.empty()) {
    std::vector<Session> scored;
    for (auto& s : load_sessions(o, err)) {
      if (truth.count(s.session_id)) scored.push_back(std::move(s));
    }
    if (scored.size() != truth.size()) {
      throw Error(ErrorKind::coverage, "logs do not contain every truth session");
    }
    BotShares shares = bot_shares(scored);
    report.bor = shares.bor;
    report.bos = shares.bos;
  }

  std::ofstream file(o.report, std::ios::binary | std::ios::trunc);
  if (!file) throw Error(ErrorKind::io, "cannot write " + o.report);
  file << report_to_json(report);
  if (!file) throw Error(ErrorKind::io, "write failed for " + o.report);
  out << report_summary(report) << "\n";
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::io:
    case ErrorKind::input:
      return kIoError;
    case ErrorKind::config:
      return kUsageError;
    default:
      return kDataError;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"botgraph: session trace images for behaviour-based bot detection", "botgraph"};
  app.set_config("--config", "", "TOML-style key/value file; flags override it");
  app.add_option("--seed", o.seed, "Seed for every random choice")->capture_default_str();
  app.require_subcommand(1);
  app.fallthrough();

  auto add_log_format = [&](CLI::App* cmd) {
    cmd->add_option("--format", o.log_format, "Log format")
        ->check(CLI::IsMember({"jsonl", "csv"}))
        ->capture_default_str();
  };

  std::function<void()> action;

  auto* sitemap_cmd = app.add_subcommand("sitemap", "Sitemap construction");
  sitemap_cmd->require_subcommand(1);
  auto* build = sitemap_cmd->add_subcommand("build", "Build a sitemap JSON file (no coordinates)");
  build->add_option("--mode", o.sitemap_mode, "Retrieval mode")
      ->required()
      ->check(CLI::IsMember({"sniff", "file", "crawl"}));
  build->add_option("--logs", o.logs, "Access log to sniff (mode sniff)")->check(CLI::ExistingFile);
  add_log_format(build);
  build->add_option("--input", o.input, "Site-provided sitemap JSON (mode file)")
      ->check(CLI::ExistingFile);
  build->add_option("--start", o.start, "Absolute start URL (mode crawl)");
  build->add_option("--max-patterns", o.max_patterns, "Pattern budget (mode crawl)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  build->add_option("--timeout-ms", o.timeout_ms, "HTTP timeout (mode crawl)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  build->add_option("--user-agent", o.user_agent, "HTTP User-Agent (mode crawl)")
      ->capture_default_str();
  build->add_option("--out", o.out, "Output sitemap JSON")->required();
  build->callback([&] { action = [&] { cmd_sitemap_build(o, out, err); }; });

  auto* layout = app.add_subcommand("layout", "Compute node coordinates for a sitemap");
  layout->add_option("--sitemap", o.sitemap, "Sitemap JSON")->required()->check(CLI::ExistingFile);
  layout->add_option("--out", o.out, "Output path (default: overwrite --sitemap)");
  layout->add_option("--attraction", o.layout.attraction_stiffness, "Spring constant")
      ->capture_default_str();
  layout->add_option("--rest-length", o.layout.rest_length, "Spring rest length")
      ->capture_default_str();
  layout->add_option("--repulsion", o.layout.repulsion_strength, "Pairwise repulsion strength")
      ->capture_default_str();
  layout->add_option("--gravity", o.layout.gravity, "Pull toward the center")
      ->capture_default_str();
  layout->add_option("--max-step", o.layout.max_step, "Per-iteration displacement cap")
      ->capture_default_str();
  layout->add_option("--damping", o.layout.damping, "Velocity damping in (0, 1)")
      ->capture_default_str();
  layout->add_option("--time-step", o.layout.time_step, "Integration time step")
      ->capture_default_str();
  layout->add_option("--max-iterations", o.layout.max_iterations, "Iteration cap")
      ->capture_default_str();
  layout->add_option("--epsilon", o.layout.convergence_epsilon, "Convergence displacement")
      ->capture_default_str();
  layout->callback([&] { action = [&] { cmd_layout(o, out); }; });

  auto* render_cmd = app.add_subcommand("render", "Render session trace images and a manifest");
  render_cmd->add_option("--sitemap", o.sitemap, "Sitemap JSON with coordinates")
      ->required()
      ->check(CLI::ExistingFile);
  render_cmd->add_option("--logs", o.logs, "Access log")->required()->check(CLI::ExistingFile);
  add_log_format(render_cmd);
  render_cmd->add_option("--out", o.out, "Output dataset directory")->required();
  render_cmd->add_option("--min-spots", o.min_spots, "Keep sessions with more spots than this")
      ->capture_default_str();
  render_cmd->add_option("--jobs", o.jobs, "Worker threads")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  render_cmd->add_option("--image-size", o.image_size, "Square image size in pixels")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  render_cmd->add_option("--padding", o.padding, "Padding fraction per side")->capture_default_str();
  render_cmd->add_option("--line-width", o.line_width, "Edge line width in pixels (0 = none)")
      ->capture_default_str();
  render_cmd->add_option("--r-min", o.r_min, "Spot radius at frequency 1")->capture_default_str();
  render_cmd->add_option("--r-max", o.r_max, "Spot radius limit")->capture_default_str();
  render_cmd->add_option("--x-gate", o.x_gate, "Gate frequency")->capture_default_str();
  render_cmd->add_option("--r-gate", o.r_gate, "Spot radius at the gate frequency")
      ->capture_default_str();
  render_cmd->callback([&] { action = [&] { cmd_render(o, out, err); }; });

  auto* synth = app.add_subcommand("synth", "Generate labeled synthetic access logs");
  synth->add_option("--sitemap", o.sitemap, "Sitemap JSON")->required()->check(CLI::ExistingFile);
  synth->add_option("--profiles", o.profiles, "Traffic profile JSON")
      ->required()
      ->check(CLI::ExistingFile);
  synth->add_option("--out", o.out, "Output jsonl log")->required();
  synth->callback([&] { action = [&] { cmd_synth(o, out); }; });

  auto* eval = app.add_subcommand("evaluate", "Score predictions against a labeled manifest");
  eval->add_option("--truth", o.truth, "Labeled manifest.csv")->required()->check(CLI::ExistingFile);
  eval->add_option("--pred", o.pred, "predictions.csv (session_id,label,score)")
      ->required()
      ->check(CLI::ExistingFile);
  eval->add_option("--logs", o.logs, "Access log, enables BoR")->check(CLI::ExistingFile);
  add_log_format(eval);
  eval->add_option("--report", o.report, "Report JSON path")->capture_default_str();
  eval->callback([&] { action = [&] { cmd_evaluate(o, out, err); }; });

  std::vector<std::string> argv_storage;
  argv_storage.reserve(args.size() + 1);
  argv_storage.emplace_back("botgraph");
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_storage) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    // Help requests print the innermost selected subcommand's help.
    return app.exit(e, out, err) == static_cast<int>(CLI::ExitCodes::Success) ? kSuccess
                                                                              : kUsageError;
  }

  try {
    if (action) action();
    return kSuccess;
  } catch (const Error& e) {
    err << "botgraph: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "botgraph: " << e.what() << "\n";
    return kDataError;
  }
}

}  // namespace botgraph::cli
