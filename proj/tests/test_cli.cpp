#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include <json.hpp>

#include "fixtures.hpp"
#include "folpipe/pipeline/problem.hpp"

// End-to-end coverage of the installed binary; every command runs as a real
// subprocess.
namespace {

using nlohmann::json;

struct CliResult {
  int code = -1;
  std::string output;
};

CliResult run_cli(const std::string& args) {
  static int counter = 0;
  const std::string capture =
      fixtures::temp_dir() + "/cli-capture-" + std::to_string(counter++) + ".txt";
  const std::string command = std::string(FOLPIPE_BIN_PATH) + " " + args + " </dev/null >" +
                              capture + " 2>&1";
  const int raw = std::system(command.c_str());
  CliResult result;
  result.code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  std::ifstream in(capture);
  std::ostringstream buf;
  buf << in.rdbuf();
  result.output = buf.str();
  return result;
}

std::string problems_jsonl(const std::vector<folpipe::pipeline::ReasoningProblem>& ps) {
  std::string out;
  for (const auto& p : ps) out += p.to_json().dump() + "\n";
  return out;
}

std::string replay_line(const std::string& id, const std::string& stage,
                        const std::string& response) {
  return json{{"id", id}, {"stage", stage}, {"response", response}}.dump() + "\n";
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("parse prints an AST and classified defects") {
  const auto ok = run_cli("parse \"Quiet(Anne)\"");
  CHECK(ok.code == 0);
  const auto parsed = json::parse(ok.output);
  CHECK(parsed.at("ok") == true);
  CHECK(parsed.at("ast").at("kind") == "atom");
  CHECK(parsed.at("ast").at("predicate") == "Quiet");

  const auto special = run_cli("parse \"Endowment(yale, 42.3 billion)\"");
  CHECK(special.code == 1);
  CHECK(special.output.find("SpecialToken") != std::string::npos);

  const auto empty = run_cli("parse \"\"");
  CHECK(empty.code == 1);
}

TEST_CASE("check validates translation block files") {
  const auto good_path = fixtures::write_temp_file("check-good.txt", fixtures::example_block());
  const auto good = run_cli("check " + good_path);
  CHECK(good.code == 0);
  const auto report = json::parse(good.output);
  CHECK(report.at("valid") == true);
  CHECK(report.at("reports").empty());
  CHECK(report.at("metrics").at("coverage") == 1.0);

  const auto loop_path = fixtures::write_temp_file("check-loop.txt", fixtures::loop_output(30));
  const auto loop = run_cli("check " + loop_path);
  CHECK(loop.code == 1);
  CHECK(loop.output.find("FormatViolation") != std::string::npos);

  const auto arity_path = fixtures::write_temp_file(
      "check-arity.txt",
      "Predicates:\nCanTake(x)\nCanTake(x, y)\nPremises:\nCanTake(Sam)\n"
      "Conclusion:\nCanTake(Sam)\n");
  const auto arity = run_cli("check " + arity_path);
  CHECK(arity.code == 1);
  CHECK(arity.output.find("ArityMismatch") != std::string::npos);

  // Coverage against an external declared-predicates file.
  const auto externals = fixtures::write_temp_file(
      "check-externals.txt", "Quiet(x)\nFurry(x)\nGreen(x)\nRed(x)\n");
  const auto partial = run_cli("check --predicates " + externals + " " + good_path);
  const auto partial_report = json::parse(partial.output);
  // 4 of the 7 used predicates are declared externally.
  CHECK(partial_report.at("metrics").at("coverage") == doctest::Approx(4.0 / 7.0));
  CHECK(partial_report.at("metrics").at("usage") == 1.0);
}

TEST_CASE("solve decides entailment from files") {
  const auto entailed = fixtures::write_temp_file(
      "solve-true.txt",
      "Premises:\nQuiet(Anne)\n∀x (Quiet(x) → Red(x))\nConclusion:\nRed(Anne)\n");
  auto result = run_cli("solve " + entailed);
  CHECK(result.code == 0);
  CHECK(result.output == "True\n");
  result = run_cli("solve --oracle " + entailed);
  CHECK(result.output == "True\n");

  const auto uncertain_path = fixtures::write_temp_file(
      "solve-uncertain.txt", "Premises:\nQuiet(Anne)\nConclusion:\nRed(Anne)\n");
  CHECK(run_cli("solve " + uncertain_path).output == "Uncertain\n");
  CHECK(run_cli("solve --oracle " + uncertain_path).output == "Uncertain\n");

  const auto refuted = fixtures::write_temp_file(
      "solve-false.txt",
      "Premises:\nQuiet(Anne)\nQuiet(Anne) → ¬Red(Anne)\nConclusion:\nRed(Anne)\n");
  CHECK(run_cli("solve " + refuted).output == "False\n");

  const auto invalid = fixtures::write_temp_file(
      "solve-invalid.txt", "Premises:\nRed(x)\nConclusion:\nRed(Anne)\n");
  CHECK(run_cli("solve " + invalid).code == 1);

  const auto structured = run_cli("solve --json " + entailed);
  CHECK(json::parse(structured.output).at("verdict") == "True");

  const std::string prover9_path = fixtures::temp_dir() + "/export.p9";
  CHECK(run_cli("solve --emit-prover9 " + prover9_path + " " + entailed).code == 0);
  std::ifstream exported(prover9_path);
  std::ostringstream buf;
  buf << exported.rdbuf();
  CHECK(buf.str().find("formulas(assumptions).") == 0);
  CHECK(buf.str().find("all x (Quiet(x) -> Red(x)).") != std::string::npos);
  CHECK(buf.str().find("formulas(goals).") != std::string::npos);
}

TEST_CASE("run with the replay client writes results, summary and heatmap") {
  std::vector<folpipe::pipeline::ReasoningProblem> problems;
  std::string replay;
  for (int i = 0; i < 10; ++i) {
    auto p = fixtures::example_problem();
    p.id = "run-" + std::to_string(i);
    p.gold_label = folpipe::reasoner::TruthLabel::True;
    problems.push_back(p);
    replay += replay_line(p.id, "standard", fixtures::example_block());
    replay += replay_line(p.id, "predicates", fixtures::example_predicates_response());
    replay += replay_line(p.id, "fol", fixtures::example_fol_response());
  }
  const auto dataset = fixtures::write_temp_file("run-ds.jsonl", problems_jsonl(problems));
  const auto replay_path = fixtures::write_temp_file("run-replay.jsonl", replay);
  const std::string out_dir = fixtures::temp_dir() + "/run-out";

  const auto result = run_cli("run --mode standard --dataset " + dataset +
                              " --client replay --replay-file " + replay_path +
                              " --out-dir " + out_dir + " --jobs 2");
  CHECK(result.code == 0);

  std::ifstream summary_in(out_dir + "/summary.json");
  REQUIRE(summary_in.good());
  const auto summary = json::parse(summary_in);
  CHECK(summary.at("records") == 10);
  CHECK(summary.at("execution_rate") == 1.0);
  CHECK(summary.at("accuracy") == 1.0);
  CHECK(summary.at("mean_coverage") == 1.0);
  CHECK(summary.at("mean_usage") == 1.0);
  CHECK(summary.at("valid_rate") == 1.0);

  std::ifstream results_in(out_dir + "/results.jsonl");
  int lines = 0;
  for (std::string line; std::getline(results_in, line);) {
    if (!line.empty()) ++lines;
  }
  CHECK(lines == 10);
  std::ifstream heatmap_in(out_dir + "/heatmap.csv");
  std::string header;
  std::getline(heatmap_in, header);
  CHECK(header == "dataset,run_label,group,kind,count");

  std::ifstream metrics_in(out_dir + "/metrics.csv");
  std::string metrics_header, metrics_row;
  std::getline(metrics_in, metrics_header);
  std::getline(metrics_in, metrics_row);
  CHECK(metrics_header == "dataset,run_label,coverage_pct,usage_pct,validity_pct");
  CHECK(metrics_row.find("run-ds,Standard,100.00,100.00,100.00") == 0);

  // Incremental over the same replay data.
  const auto incremental = run_cli("run --mode incremental --dataset " + dataset +
                                   " --client replay --replay-file " + replay_path +
                                   " --out-dir " + out_dir + "-inc");
  CHECK(incremental.code == 0);

  // An ICL-style run label flows through to the reports.
  const auto relabeled = run_cli("run --mode standard --run-label ICL --dataset " +
                                 dataset + " --client replay --replay-file " +
                                 replay_path + " --out-dir " + out_dir + "-icl");
  CHECK(relabeled.code == 0);
  std::ifstream relabeled_in(out_dir + "-icl/results.jsonl");
  std::string first;
  std::getline(relabeled_in, first);
  CHECK(json::parse(first).at("mode") == "ICL");
}

TEST_CASE("run with the loop mock scores zero") {
  std::vector<folpipe::pipeline::ReasoningProblem> problems;
  for (int i = 0; i < 3; ++i) {
    auto p = fixtures::example_problem();
    p.id = "mock-" + std::to_string(i);
    p.gold_label = folpipe::reasoner::TruthLabel::True;
    problems.push_back(p);
  }
  const auto dataset = fixtures::write_temp_file("mock-ds.jsonl", problems_jsonl(problems));
  const std::string out_dir = fixtures::temp_dir() + "/mock-out";
  const auto result = run_cli("run --mode standard --dataset " + dataset +
                              " --client mock --out-dir " + out_dir);
  CHECK(result.code == 0);  // batch commands succeed even when records fail
  std::ifstream summary_in(out_dir + "/summary.json");
  const auto summary = json::parse(summary_in);
  CHECK(summary.at("execution_rate") == 0.0);
  CHECK(summary.at("accuracy") == 0.0);
}

TEST_CASE("model verifier provenance lands in the results") {
  const auto fixture = fixtures::arity_perturbation_fixtures(1)[0];
  const auto dataset =
      fixtures::write_temp_file("verify-ds.jsonl", problems_jsonl({fixture.problem}));
  std::string replay;
  replay += replay_line(fixture.problem.id, "predicates", fixture.stage1);
  replay += replay_line(fixture.problem.id, "fol", fixture.stage2);
  replay += replay_line(fixture.problem.id, "verifier",
                        "Teacher(x); HaveLongVacation(x)");
  const auto replay_path = fixtures::write_temp_file("verify-replay.jsonl", replay);
  const std::string out_dir = fixtures::temp_dir() + "/verify-out";

  const auto result = run_cli("run --mode incremental --verifier model --dataset " +
                              dataset + " --client replay --replay-file " + replay_path +
                              " --out-dir " + out_dir);
  CHECK(result.code == 0);
  std::ifstream results_in(out_dir + "/results.jsonl");
  std::string line;
  std::getline(results_in, line);
  const auto record = json::parse(line);
  CHECK(record.at("verifier").at("provenance") == "ModelBased");
  CHECK(record.at("verifier").at("outcome") == "corrected");
  CHECK(record.at("mode") == "Incremental+Verifier");
}

TEST_CASE("configuration failures exit with code 2") {
  const auto dataset = fixtures::write_temp_file(
      "cfg-ds.jsonl", problems_jsonl({fixtures::example_problem()}));
  CHECK(run_cli("run --mode bogus --dataset " + dataset).code == 2);
  CHECK(run_cli("run --mode standard --dataset " + dataset + " --client replay").code == 2);
  CHECK(run_cli("run --mode standard --dataset " + dataset +
                " --client http").code == 2);  // no endpoint anywhere
  CHECK(run_cli("synth --dataset " + dataset).code == 2);  // no generations
}

TEST_CASE("total client failure exits with code 3") {
  auto p = fixtures::example_problem();
  p.id = "down-0";
  const auto dataset = fixtures::write_temp_file("down-ds.jsonl", problems_jsonl({p}));
  const auto result = run_cli("run --mode standard --dataset " + dataset +
                              " --client http --endpoint http://127.0.0.1:9 --out-dir " +
                              fixtures::temp_dir() + "/down-out");
  CHECK(result.code == 3);

  // The endpoint can come from the environment instead of the flag.
  const std::string capture = fixtures::temp_dir() + "/env-capture.txt";
  const std::string command = std::string("FOLPIPE_ENDPOINT=http://127.0.0.1:9 ") +
                              FOLPIPE_BIN_PATH + " run --mode standard --dataset " +
                              dataset + " --client http --out-dir " +
                              fixtures::temp_dir() + "/env-out </dev/null >" + capture +
                              " 2>&1";
  const int raw = std::system(command.c_str());
  CHECK(WEXITSTATUS(raw) == 3);
}

TEST_CASE("config file supplies defaults below environment and flags") {
  auto p = fixtures::example_problem();
  p.id = "cfg-endpoint-0";
  const auto dataset =
      fixtures::write_temp_file("cfgfile-ds.jsonl", problems_jsonl({p}));
  const auto config = fixtures::write_temp_file(
      "config.json", json{{"endpoint", "http://127.0.0.1:9"}, {"model", "cfg-model"}}.dump());
  // Endpoint comes from the config file; the run reaches the (dead) server
  // and reports total transport failure.
  const auto from_config = run_cli("run --mode standard --dataset " + dataset +
                                   " --client http --config " + config + " --out-dir " +
                                   fixtures::temp_dir() + "/cfgfile-out");
  CHECK(from_config.code == 3);
}

TEST_CASE("synth runs the filter chain and prints survivor counts") {
  const auto candidates = fixtures::synthesis_fixture();
  std::vector<folpipe::pipeline::ReasoningProblem> problems;
  std::string generations;
  for (const auto& c : candidates) {
    problems.push_back(c.problem);
    generations += json{{"id", c.problem.id}, {"output", c.raw_output}}.dump() + "\n";
  }
  const auto dataset = fixtures::write_temp_file("synth-ds.jsonl", problems_jsonl(problems));
  const auto gen_path = fixtures::write_temp_file("synth-gen.jsonl", generations);
  const std::string out_dir = fixtures::temp_dir() + "/synth-out";

  const auto result = run_cli("synth --dataset " + dataset + " --generations " + gen_path +
                              " --out-dir " + out_dir);
  CHECK(result.code == 0);
  CHECK(result.output.find("format     4") != std::string::npos);
  CHECK(result.output.find("syntax     3") != std::string::npos);
  CHECK(result.output.find("semantic   2") != std::string::npos);

  std::ifstream corpus_in(out_dir + "/corpus.jsonl");
  int corpus_lines = 0;
  for (std::string line; std::getline(corpus_in, line);) {
    if (!line.empty()) ++corpus_lines;
  }
  CHECK(corpus_lines == 2);
  std::ifstream rejections_in(out_dir + "/rejections.jsonl");
  int rejection_lines = 0;
  for (std::string line; std::getline(rejections_in, line);) {
    if (!line.empty()) ++rejection_lines;
  }
  CHECK(rejection_lines == 4);
}

TEST_CASE("synth balancing keeps three records from counts (2,1,1)") {
  const auto candidates = fixtures::balanced_synthesis_fixture();
  std::vector<folpipe::pipeline::ReasoningProblem> problems;
  std::string generations;
  for (const auto& c : candidates) {
    problems.push_back(c.problem);
    generations += json{{"id", c.problem.id}, {"output", c.raw_output}}.dump() + "\n";
  }
  const auto dataset =
      fixtures::write_temp_file("balance-ds.jsonl", problems_jsonl(problems));
  const auto gen_path = fixtures::write_temp_file("balance-gen.jsonl", generations);
  const std::string out_dir = fixtures::temp_dir() + "/balance-out";

  const auto result = run_cli("synth --dataset " + dataset + " --generations " + gen_path +
                              " --out-dir " + out_dir + " --balance --seed 7");
  CHECK(result.code == 0);
  std::ifstream corpus_in(out_dir + "/corpus.jsonl");
  int corpus_lines = 0;
  for (std::string line; std::getline(corpus_in, line);) {
    if (!line.empty()) ++corpus_lines;
  }
  CHECK(corpus_lines == 3);
}

TEST_CASE("synth emits chat-completions batch requests") {
  const auto dataset = fixtures::write_temp_file(
      "req-ds.jsonl", problems_jsonl({fixtures::example_problem()}));
  const std::string requests = fixtures::temp_dir() + "/requests.jsonl";
  const auto result =
      run_cli("synth --dataset " + dataset + " --requests-out " + requests);
  CHECK(result.code == 0);
  std::ifstream in(requests);
  std::string line;
  REQUIRE(std::getline(in, line));
  const auto request = json::parse(line);
  CHECK(request.at("url") == "/v1/chat/completions");
  CHECK(request.at("body").at("messages").size() == 2);
}

}  // TEST_SUITE
