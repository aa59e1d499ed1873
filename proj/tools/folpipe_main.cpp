// folpipe: parse, check, solve, run and synthesize NL-to-FOL translation
// records from the command line.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "folpipe/datasynth/datasynth.hpp"
#include "folpipe/fol/analysis.hpp"
#include "folpipe/fol/block.hpp"
#include "folpipe/fol/parse.hpp"
#include "folpipe/pipeline/evaluate.hpp"
#include "folpipe/pipeline/runner.hpp"
#include "folpipe/reasoner/oracle.hpp"
#include "folpipe/taxonomy/classify.hpp"

namespace {

using nlohmann::json;
namespace fol = folpipe::fol;
namespace fs = std::filesystem;
namespace pipeline = folpipe::pipeline;
namespace datasynth = folpipe::datasynth;
namespace reasoner = folpipe::reasoner;
namespace taxonomy = folpipe::taxonomy;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;      // input or validation failure
constexpr int kExitConfig = 2;     // configuration error
constexpr int kExitTransport = 3;  // total client failure

json term_to_json(const fol::Term& t) {
  return json{{"kind", t.is_variable() ? "variable" : "constant"}, {"name", t.name}};
}

json formula_to_json(const fol::Formula& f) {
  switch (f.kind) {
    case fol::Connective::Atom: {
      json args = json::array();
      for (const auto& t : f.args) args.push_back(term_to_json(t));
      return json{{"kind", "atom"}, {"predicate", f.label}, {"args", std::move(args)}};
    }
    case fol::Connective::Not:
      return json{{"kind", "not"}, {"body", formula_to_json(*f.lhs)}};
    case fol::Connective::ForAll:
    case fol::Connective::Exists:
      return json{{"kind", std::string(connective_name(f.kind))},
                  {"variable", f.label},
                  {"body", formula_to_json(*f.lhs)}};
    default:
      return json{{"kind", std::string(connective_name(f.kind))},
                  {"lhs", formula_to_json(*f.lhs)},
                  {"rhs", formula_to_json(*f.rhs)}};
  }
}

json reports_to_json(const std::vector<taxonomy::ErrorReport>& reports) {
  json out = json::array();
  for (const auto& r : reports) {
    json rj{{"group", std::string(to_string(r.category.group()))},
            {"kind", std::string(to_string(r.category.kind))},
            {"detail", r.detail}};
    if (r.statement) {
      rj["section"] = std::string(to_string(r.statement->section));
      rj["index"] = r.statement->index;
    }
    if (r.span) rj["span"] = {{"begin", r.span->begin}, {"end", r.span->end}};
    out.push_back(std::move(rj));
  }
  return out;
}

std::string read_file_or_die(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string read_arg_or_stdin(const std::string& arg) {
  if (!arg.empty()) return arg;
  std::ostringstream buf;
  buf << std::cin.rdbuf();
  return buf.str();
}

// Classifies a standalone formula by wrapping it as a one-premise record.
std::vector<taxonomy::ErrorReport> classify_single_formula(const std::string& text) {
  fol::TranslationRecord record;
  fol::ParsedStatement st;
  st.text = text;
  const auto parsed = fol::parse_formula(text);
  if (parsed.ok()) st.formula = parsed.formula;
  else st.error = parsed.failure;
  record.premises.push_back(st);
  fol::ParsedStatement trivially_ok;
  trivially_ok.formula = fol::Formula::atom("TrueStub");
  record.conclusion = trivially_ok;
  auto reports = taxonomy::classify(fol::BlockParseResult{std::move(record), std::nullopt});
  return reports;
}

struct ProverFlags {
  std::uint64_t max_clauses = 10000;
  double max_seconds = 5.0;
  int max_weight = 64;

  reasoner::ProofLimits limits() const {
    reasoner::ProofLimits l;
    l.max_clauses = max_clauses;
    l.max_time = std::chrono::milliseconds(static_cast<long>(max_seconds * 1000));
    l.max_clause_weight = max_weight;
    return l;
  }
};

void add_prover_flags(CLI::App* cmd, ProverFlags& flags) {
  cmd->add_option("--max-clauses", flags.max_clauses, "Kept-clause limit per refutation search");
  cmd->add_option("--max-seconds", flags.max_seconds, "Wall-clock budget for the prover");
  cmd->add_option("--max-weight", flags.max_weight, "Discard clauses heavier than this");
}

// ----- parse ---------------------------------------------------------------

int cmd_parse(const std::string& formula_arg) {
  const std::string text = read_arg_or_stdin(formula_arg);
  const auto parsed = fol::parse_formula(text);
  const auto reports = classify_single_formula(text);

  json out;
  out["ok"] = parsed.ok();
  out["ast"] = parsed.ok() ? formula_to_json(*parsed.formula) : json(nullptr);
  if (parsed.ok()) {
    out["rendered"] = {{"unicode", fol::render(parsed.formula, fol::Dialect::Unicode)},
                       {"ascii", fol::render(parsed.formula, fol::Dialect::Ascii)}};
    const auto free = fol::free_variables(*parsed.formula);
    out["free_variables"] = std::vector<std::string>(free.begin(), free.end());
  }
  out["reports"] = reports_to_json(reports);
  std::cout << out.dump(2) << "\n";
  return reports.empty() ? kExitOk : kExitInput;
}

// ----- check ---------------------------------------------------------------

int cmd_check(const std::string& block_path, const std::string& predicates_path) {
  const std::string text = read_file_or_die(block_path);
  const auto parsed = fol::parse_translation_block(text);
  const auto reports = taxonomy::classify(parsed);

  json out;
  out["reports"] = reports_to_json(reports);
  bool ok = false;
  if (parsed.ok()) {
    const auto& record = *parsed.record;
    ok = record.all_statements_parse() && reports.empty();
    out["valid"] = record.all_statements_parse();
    out["premises"] = record.premises.size();
    out["declared_predicates"] = record.declared.declarations.size();

    folpipe::predicates::PredicateSet px = record.declared_set();
    if (!predicates_path.empty()) {
      std::vector<std::string> lines;
      std::istringstream in(read_file_or_die(predicates_path));
      for (std::string line; std::getline(in, line);) lines.push_back(line);
      px = folpipe::predicates::parse_predicate_decls(lines).unique();
    }
    const auto py =
        folpipe::predicates::extract_used_predicates(record.parsed_statements());
    const auto metrics =
        folpipe::predicates::compute_metrics(px, py, record.all_statements_parse());
    out["metrics"] = {{"coverage", metrics.coverage()},
                      {"usage", metrics.usage()},
                      {"valid", metrics.valid},
                      {"degenerate", metrics.degenerate}};
  } else {
    out["valid"] = false;
    out["formatting_failure"] = {{"cause", std::string(to_string(parsed.failure->cause))},
                                 {"detail", parsed.failure->detail}};
  }
  std::cout << out.dump(2) << "\n";
  return ok ? kExitOk : kExitInput;
}

// ----- solve ---------------------------------------------------------------

int cmd_solve(const std::string& problem_path, bool use_oracle, const ProverFlags& flags,
              bool as_json, const std::string& prover9_out) {
  const std::string text = read_file_or_die(problem_path);
  fol::BlockOptions options;
  options.require_predicates_section = false;
  const auto parsed = fol::parse_translation_block(text, options);
  const auto reports = taxonomy::classify(parsed);
  if (!parsed.ok() || !reports.empty()) {
    std::cerr << "Error: input failed validation\n";
    for (const auto& r : reports) {
      std::cerr << "  [" << to_string(r.category.group()) << "/"
                << to_string(r.category.kind) << "] " << r.detail << "\n";
    }
    return kExitInput;
  }
  const auto& record = *parsed.record;
  if (!prover9_out.empty()) {
    std::ofstream out(prover9_out);
    if (!out) throw CLI::ValidationError("cannot write " + prover9_out);
    out << reasoner::to_prover9_input(record.parsed_premises(),
                                      record.conclusion.formula);
  }

  reasoner::Verdict verdict;
  bool inconsistent = false;
  bool limit_hit = false;
  if (use_oracle) {
    const auto result =
        reasoner::grounding_oracle(record.parsed_premises(), record.conclusion.formula);
    verdict = result.verdict;
    inconsistent = result.premises_inconsistent;
  } else {
    const auto result = reasoner::prove(record.parsed_premises(),
                                        record.conclusion.formula, flags.limits());
    verdict = result.verdict;
    inconsistent = result.premises_inconsistent;
    limit_hit = result.limit_hit;
  }
  if (as_json) {
    std::cout << json{{"verdict", std::string(to_string(verdict.state))},
                      {"premises_inconsistent", inconsistent},
                      {"limit_hit", limit_hit}}
                     .dump(2)
              << "\n";
  } else {
    std::cout << to_string(verdict.state) << "\n";
    if (inconsistent) std::cout << "(premises inconsistent)\n";
  }
  return verdict.state == reasoner::Verdict::State::Error ? kExitInput : kExitOk;
}

// ----- run -----------------------------------------------------------------

struct RunFlags {
  std::string mode = "standard";
  std::string verifier = "none";
  std::string dataset;
  std::string client = "replay";
  std::string replay_file;
  std::string out_dir = ".";
  std::string run_label;
  std::string endpoint, api_key, model;
  double temperature = 0.1;
  int token_budget = 1000;
  double split_ratio = 0.20;
  int jobs = 0;
  bool name_only_metrics = false;
  ProverFlags prover;
};

int cmd_run(const RunFlags& flags) {
  const auto problems = pipeline::load_problems_file(flags.dataset);

  pipeline::GeneratorConfig config;
  config.endpoint = flags.endpoint;
  config.api_key = flags.api_key;
  config.model = flags.model;
  config.temperature = flags.temperature;
  config.max_output_tokens = flags.token_budget;

  std::unique_ptr<pipeline::ChatClient> client;
  if (flags.client == "http") {
    if (config.endpoint.empty()) {
      std::cerr << "http client needs --endpoint or FOLPIPE_ENDPOINT\n";
      return kExitConfig;
    }
    client = std::make_unique<pipeline::HttpChatClient>(config);
  } else if (flags.client == "replay") {
    if (flags.replay_file.empty()) {
      std::cerr << "replay client needs --replay-file\n";
      return kExitConfig;
    }
    client = std::make_unique<pipeline::ReplayChatClient>(
        pipeline::ReplayChatClient::from_file(flags.replay_file));
  } else if (flags.client == "mock") {
    client = std::make_unique<pipeline::LoopMockClient>();
  } else {
    std::cerr << "unknown client: " << flags.client << "\n";
    return kExitConfig;
  }

  pipeline::BatchOptions options;
  options.mode = flags.mode == "standard" ? pipeline::RunMode::Standard
                                          : pipeline::RunMode::Incremental;
  options.runner.limits = flags.prover.limits();
  options.runner.stage1_token_ratio = flags.split_ratio;
  options.runner.run_label_override = flags.run_label;
  if (flags.name_only_metrics) {
    options.runner.metrics_match = folpipe::predicates::MatchMode::NameOnly;
  }
  if (flags.verifier == "deterministic") {
    options.runner.verifier = pipeline::VerifierKind::Deterministic;
  } else if (flags.verifier == "model") {
    options.runner.verifier = pipeline::VerifierKind::Model;
  }
  options.jobs = flags.jobs > 0 ? flags.jobs
                                : static_cast<int>(std::thread::hardware_concurrency());

  const auto results = pipeline::run_batch(
      problems, *client, config, pipeline::default_template(pipeline::PromptMode::Standard),
      pipeline::default_template(pipeline::PromptMode::PredicatesOnly),
      pipeline::default_template(pipeline::PromptMode::FolGivenPredicates),
      pipeline::default_template(pipeline::PromptMode::Verifier), options);

  const std::string dataset_name = fs::path(flags.dataset).stem().string();
  const auto summary = pipeline::evaluate(results, dataset_name);

  fs::create_directories(flags.out_dir);
  pipeline::write_results_jsonl((fs::path(flags.out_dir) / "results.jsonl").string(),
                                results);
  json summary_json = summary.to_json();
  summary_json["dataset"] = dataset_name;
  pipeline::write_text_file((fs::path(flags.out_dir) / "summary.json").string(),
                            summary_json.dump(2) + "\n");
  pipeline::write_text_file((fs::path(flags.out_dir) / "heatmap.csv").string(),
                            summary.heatmap.to_csv());
  const std::string run_label = !flags.run_label.empty() ? flags.run_label
                                : flags.mode == "standard" ? "Standard"
                                : flags.verifier == "none" ? "Incremental"
                                                           : "Incremental+Verifier";
  pipeline::write_text_file((fs::path(flags.out_dir) / "metrics.csv").string(),
                            summary.to_metrics_csv(dataset_name, run_label));

  std::cout << "records " << summary.total << "  executed " << summary.executed
            << "  execution_rate " << summary.execution_rate << "  accuracy "
            << summary.accuracy << "\n"
            << "coverage " << summary.mean_coverage << "  usage " << summary.mean_usage
            << "  valid_rate " << summary.valid_rate << "  errors "
            << summary.total_reports << "\n";

  const bool all_transport =
      !results.empty() && std::all_of(results.begin(), results.end(),
                                      [](const auto& r) { return r.transport_error; });
  return all_transport ? kExitTransport : kExitOk;
}

// ----- synth ---------------------------------------------------------------

struct SynthFlags {
  std::string dataset;
  std::string generations;
  std::string out_dir = ".";
  std::string requests_out;
  std::string model = "gpt-4o";
  double temperature = 0.1;
  int token_budget = 1000;
  bool balance = false;
  std::uint64_t seed = 0;
  int jobs = 0;
  ProverFlags prover;
};

int cmd_synth(const SynthFlags& flags) {
  const auto problems = pipeline::load_problems_file(flags.dataset);

  if (!flags.requests_out.empty()) {
    std::ofstream out(flags.requests_out);
    if (!out) {
      std::cerr << "cannot write " << flags.requests_out << "\n";
      return kExitConfig;
    }
    for (const auto& p : problems) {
      out << datasynth::batch_request(p, flags.model, flags.temperature,
                                      flags.token_budget)
                 .dump()
          << "\n";
    }
    std::cout << "wrote " << problems.size() << " batch requests\n";
    if (flags.generations.empty()) return kExitOk;
  }
  if (flags.generations.empty()) {
    std::cerr << "synth needs --generations (or --requests-out alone)\n";
    return kExitConfig;
  }

  // Generations: JSONL of {id, output}.
  std::map<std::string, std::string> outputs;
  {
    std::ifstream in(flags.generations);
    if (!in) {
      std::cerr << "cannot open " << flags.generations << "\n";
      return kExitConfig;
    }
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      try {
        const auto j = json::parse(line);
        outputs[j.at("id").get<std::string>()] = j.at("output").get<std::string>();
      } catch (const std::exception& e) {
        std::cerr << "generations line " << line_no << ": " << e.what() << "\n";
        return kExitInput;
      }
    }
  }

  std::vector<datasynth::CandidateRecord> candidates;
  for (const auto& p : problems) {
    const auto it = outputs.find(p.id);
    if (it != outputs.end()) candidates.push_back({p, it->second});
  }

  const int jobs = flags.jobs > 0 ? flags.jobs
                                  : static_cast<int>(std::thread::hardware_concurrency());
  auto result = datasynth::run_synthesis(candidates, flags.prover.limits(), jobs);
  if (flags.balance) {
    result.corpus = datasynth::balance_labels(result.corpus, flags.seed);
  }

  fs::create_directories(flags.out_dir);
  {
    std::ofstream out(fs::path(flags.out_dir) / "corpus.jsonl");
    for (const auto& r : result.corpus) out << r.to_json().dump() << "\n";
  }
  {
    std::ofstream out(fs::path(flags.out_dir) / "rejections.jsonl");
    for (const auto& r : result.rejections) {
      out << json{{"id", r.id}, {"stage", r.stage}, {"reason", r.reason}}.dump() << "\n";
    }
  }
  pipeline::write_text_file((fs::path(flags.out_dir) / "audit.json").string(),
                            result.audit.to_json().dump(2) + "\n");

  std::cout << "candidates " << result.stats.input << "\n"
            << "format     " << result.stats.format << "\n"
            << "syntax     " << result.stats.syntax << "\n"
            << "semantic   " << result.stats.semantic << "\n"
            << "corpus     " << result.corpus.size() << "\n"
            << "normalized " << result.stats.normalized << "\n";
  return kExitOk;
}

// Config file (JSON) supplies defaults; environment variables override the
// file and flags override everything.
void apply_config_file(int argc, char** argv, RunFlags& run_flags) {
  std::string config_path;
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string_view(argv[i]) == "--config") config_path = argv[i + 1];
  }
  if (config_path.empty()) return;
  std::ifstream in(config_path);
  if (!in) throw CLI::ValidationError("cannot open config: " + config_path);
  const auto j = json::parse(in);
  run_flags.endpoint = j.value("endpoint", run_flags.endpoint);
  run_flags.api_key = j.value("api_key", run_flags.api_key);
  run_flags.model = j.value("model", run_flags.model);
  run_flags.temperature = j.value("temperature", run_flags.temperature);
  run_flags.token_budget = j.value("max_tokens", run_flags.token_budget);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"NL-to-FOL translation toolkit: parsing, error classification, "
               "resolution proving, inference pipelines, data synthesis"};
  app.require_subcommand(1);

  std::string parse_formula_arg;
  auto* parse_cmd = app.add_subcommand("parse", "Parse one formula; print AST and defects");
  parse_cmd->add_option("formula", parse_formula_arg, "Formula text (stdin when omitted)");

  std::string check_block_path, check_predicates_path;
  auto* check_cmd = app.add_subcommand("check", "Validate a translation block file");
  check_cmd->add_option("block", check_block_path, "Translation block file")->required();
  check_cmd->add_option("--predicates", check_predicates_path,
                        "Declared-predicates file for coverage/usage");

  std::string solve_path, solve_prover9_out;
  bool solve_oracle = false, solve_json = false;
  ProverFlags solve_prover;
  auto* solve_cmd = app.add_subcommand("solve", "Decide entailment for a problem file");
  solve_cmd->add_option("problem", solve_path, "Premises/Conclusion block file")->required();
  solve_cmd->add_flag("--oracle", solve_oracle, "Use the grounding oracle instead of resolution");
  solve_cmd->add_flag("--json", solve_json, "Structured output");
  solve_cmd->add_option("--emit-prover9", solve_prover9_out,
                        "Also write the problem in Prover9 input syntax");
  add_prover_flags(solve_cmd, solve_prover);

  RunFlags run_flags;
  std::string config_path_unused;
  auto* run_cmd = app.add_subcommand("run", "Run an inference pipeline over a dataset");
  run_cmd->add_option("--config", config_path_unused, "JSON config file with defaults");
  run_cmd->add_option("--mode", run_flags.mode, "standard | incremental")
      ->check(CLI::IsMember({"standard", "incremental"}));
  run_cmd->add_option("--verifier", run_flags.verifier, "none | deterministic | model")
      ->check(CLI::IsMember({"none", "deterministic", "model"}));
  run_cmd->add_option("--dataset", run_flags.dataset, "Problems JSONL")->required();
  run_cmd->add_option("--client", run_flags.client, "http | replay | mock")
      ->check(CLI::IsMember({"http", "replay", "mock"}));
  run_cmd->add_option("--replay-file", run_flags.replay_file, "Replay responses JSONL");
  run_cmd->add_option("--out-dir", run_flags.out_dir, "Output directory");
  run_cmd->add_option("--run-label", run_flags.run_label,
                      "Report label (e.g. ICL) overriding the mode name");
  run_cmd->add_option("--endpoint", run_flags.endpoint, "Chat-completions base URL")
      ->envname("FOLPIPE_ENDPOINT");
  run_cmd->add_option("--api-key", run_flags.api_key, "Bearer token")
      ->envname("FOLPIPE_API_KEY");
  run_cmd->add_option("--model", run_flags.model, "Model name")->envname("FOLPIPE_MODEL");
  run_cmd->add_option("--temperature", run_flags.temperature, "Sampling temperature");
  run_cmd->add_option("--token-budget", run_flags.token_budget,
                      "Total output-token budget per record");
  run_cmd->add_option("--split-ratio", run_flags.split_ratio,
                      "Stage-1 share of the token budget (incremental)");
  run_cmd->add_option("--jobs", run_flags.jobs, "Worker pool width (default: cores)");
  run_cmd->add_flag("--name-only-metrics", run_flags.name_only_metrics,
                    "Match predicates by name only in coverage/usage");
  add_prover_flags(run_cmd, run_flags.prover);

  SynthFlags synth_flags;
  auto* synth_cmd = app.add_subcommand("synth", "Filter generator outputs into a corpus");
  synth_cmd->add_option("--dataset", synth_flags.dataset, "Problems JSONL")->required();
  synth_cmd->add_option("--generations", synth_flags.generations,
                        "Generator outputs JSONL {id, output}");
  synth_cmd->add_option("--out-dir", synth_flags.out_dir, "Output directory");
  synth_cmd->add_option("--requests-out", synth_flags.requests_out,
                        "Write a chat-completions batch request file");
  synth_cmd->add_option("--model", synth_flags.model, "Model for batch requests")
      ->envname("FOLPIPE_MODEL");
  synth_cmd->add_option("--temperature", synth_flags.temperature, "Sampling temperature");
  synth_cmd->add_option("--token-budget", synth_flags.token_budget, "Max output tokens");
  synth_cmd->add_flag("--balance", synth_flags.balance, "Balance labels after filtering");
  synth_cmd->add_option("--seed", synth_flags.seed, "Seed for label balancing");
  synth_cmd->add_option("--jobs", synth_flags.jobs, "Worker pool width (default: cores)");
  add_prover_flags(synth_cmd, synth_flags.prover);

  try {
    apply_config_file(argc, argv, run_flags);
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kExitConfig;
  }

  try {
    if (parse_cmd->parsed()) return cmd_parse(parse_formula_arg);
    if (check_cmd->parsed()) return cmd_check(check_block_path, check_predicates_path);
    if (solve_cmd->parsed()) {
      return cmd_solve(solve_path, solve_oracle, solve_prover, solve_json,
                       solve_prover9_out);
    }
    if (run_cmd->parsed()) return cmd_run(run_flags);
    if (synth_cmd->parsed()) return cmd_synth(synth_flags);
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return kExitConfig;
  } catch (const reasoner::BoundExceeded& e) {
    std::cerr << "oracle bound exceeded: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kExitInput;
  }
  return kExitOk;
}
