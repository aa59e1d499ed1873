#include <doctest.h>

#include <sstream>
#include <thread>

#include <httplib.h>

#include "fixtures.hpp"
#include "folpipe/pipeline/evaluate.hpp"
#include "folpipe/pipeline/runner.hpp"
#include "generators.hpp"

using namespace folpipe;
using namespace folpipe::pipeline;

namespace {

ReplayChatClient example_replay(const std::string& id) {
  ReplayChatClient client;
  client.add(id, "standard", fixtures::example_block());
  client.add(id, "predicates", fixtures::example_predicates_response());
  client.add(id, "fol", fixtures::example_fol_response());
  return client;
}

GeneratorConfig test_config() {
  GeneratorConfig config;
  config.model = "test-model";
  config.max_output_tokens = 1000;
  return config;
}

void check_summary_consistency(const EvaluationSummary& summary) {
  CHECK(summary.accuracy <= summary.execution_rate + 1e-12);
  CHECK(summary.heatmap.total() == summary.total_reports);
}

}  // namespace

TEST_SUITE("pipeline") {

TEST_CASE("prompt rendering is deterministic and well-formed") {
  const auto tmpl = default_template(PromptMode::Standard);
  const auto problem = fixtures::example_problem();
  const auto a = tmpl.render(problem);
  const auto b = tmpl.render(problem);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].role == b[i].role);
    CHECK(a[i].content == b[i].content);
  }
  REQUIRE(a.size() == 4);  // system + one shot (user, assistant) + user
  CHECK(a[0].role == "system");
  CHECK(a[3].role == "user");
  CHECK(a[3].content.find("Premises:") == 0);
  CHECK(a[3].content.find("Anne is white.") != std::string::npos);

  const auto fol_tmpl = default_template(PromptMode::FolGivenPredicates);
  const auto with_predicates = fol_tmpl.render(problem, "Quiet(x); Red(x)");
  CHECK(with_predicates.back().content.find("Predicates:\nQuiet(x); Red(x)") !=
        std::string::npos);

  // The 3-shot verifier template carries arity perturbations.
  const auto verifier = default_template(PromptMode::Verifier);
  CHECK(verifier.shots.size() == 3);
  CHECK(verifier.shots[0].exemplar_output == "correct");
  CHECK(verifier.shots[1].predicates_line.find("Cat(x); Cat(x, y)") != std::string::npos);
}

TEST_CASE("replay client resolves by id and stage") {
  std::istringstream jsonl(
      R"({"id": "p1", "stage": "standard", "response": "hello"})" "\n"
      R"({"id": "p1", "stage": "fol", "response": "world"})" "\n");
  auto client = ReplayChatClient::from_jsonl(jsonl);
  ChatRequest request{"p1", "standard", {}, 100, {}};
  CHECK(client.complete(request).completion->text == "hello");
  request.stage = "fol";
  CHECK(client.complete(request).completion->text == "world");
  request.stage = "verifier";
  CHECK_FALSE(client.complete(request).ok());

  // Stop sequences and the token cap are applied client-side.
  client.add("p2", "predicates", "Quiet(x)\nPremises:\nQuiet(Anne)");
  ChatRequest stage1{"p2", "predicates", {}, 100, {"\nPremises:"}};
  CHECK(client.complete(stage1).completion->text == "Quiet(x)");
  ChatRequest capped{"p2", "predicates", {}, 1, {}};
  CHECK(client.complete(capped).completion->text == "Quiet(x)");
}

TEST_CASE("token helpers") {
  CHECK(approx_token_count("") == 0);
  CHECK(approx_token_count("IsFavorite(x, y)") == 2);
  CHECK(truncate_to_tokens("a b c d", 2) == "a b");
  CHECK(apply_stop_sequences("abc###def", {"###"}) == "abc");
}

TEST_CASE("standard run on the worked example") {
  const auto problem = fixtures::example_problem();
  auto client = example_replay(problem.id);
  const auto result = run_standard(problem, client, test_config(),
                                   default_template(PromptMode::Standard));
  CHECK(result.mode_label == "Standard");
  REQUIRE(result.parsed.has_value());
  REQUIRE(result.parsed->ok());
  CHECK(result.reports.empty());
  REQUIRE(result.metrics.has_value());
  CHECK(result.metrics->coverage() == 1.0);
  CHECK(result.metrics->usage() == 1.0);
  CHECK(result.metrics->valid);
  CHECK(result.executed());
  REQUIRE(result.stages.size() == 1);
  CHECK(result.stages[0].tokens > 0);
  CHECK(result.stages[0].tokens <= 1000);

  // Byte-for-byte reproducibility under the deterministic client.
  auto client2 = example_replay(problem.id);
  const auto again = run_standard(problem, client2, test_config(),
                                  default_template(PromptMode::Standard));
  CHECK(result.to_json().dump() == again.to_json().dump());
}

TEST_CASE("loop generations produce formatting failures, never verdicts") {
  const auto problem = fixtures::example_problem();
  LoopMockClient client;
  const auto result = run_standard(problem, client, test_config(),
                                   default_template(PromptMode::Standard));
  REQUIRE(result.parsed.has_value());
  CHECK_FALSE(result.parsed->ok());
  REQUIRE(result.reports.size() == 1);
  CHECK(result.reports[0].category.kind == taxonomy::ErrorKind::FormatViolation);
  CHECK_FALSE(result.executed());
  CHECK_FALSE(result.metrics.has_value());
  REQUIRE(problem.gold_label.has_value() == false);
  CHECK_FALSE(result.correct.has_value());
}

TEST_CASE("transport failures are flagged, not fatal") {
  FunctionChatClient failing([](const ChatRequest&) {
    return ClientResult{std::nullopt, "boom"};
  });
  const auto problem = fixtures::example_problem();
  const auto result = run_standard(problem, failing, test_config(),
                                   default_template(PromptMode::Standard));
  CHECK(result.transport_error);
  CHECK_FALSE(result.executed());

  const auto incremental =
      run_incremental(problem, failing, test_config(),
                      default_template(PromptMode::PredicatesOnly),
                      default_template(PromptMode::FolGivenPredicates));
  CHECK(incremental.transport_error);
  REQUIRE(incremental.parsed.has_value());
  CHECK_FALSE(incremental.parsed->ok());
  REQUIRE_FALSE(incremental.reports.empty());
  CHECK(incremental.reports[0].category.kind == taxonomy::ErrorKind::FormatViolation);
}

TEST_CASE("incremental run on the worked example") {
  const auto problem = fixtures::example_problem();
  auto client = example_replay(problem.id);
  const auto result =
      run_incremental(problem, client, test_config(),
                      default_template(PromptMode::PredicatesOnly),
                      default_template(PromptMode::FolGivenPredicates));
  CHECK(result.mode_label == "Incremental");
  REQUIRE(result.parsed.has_value());
  REQUIRE(result.parsed->ok());
  CHECK(result.parsed->record->declared.declarations.size() == 7);
  CHECK(result.reports.empty());
  REQUIRE(result.metrics.has_value());
  CHECK(result.metrics->coverage() == 1.0);
  CHECK(result.metrics->usage() == 1.0);
  CHECK(result.metrics->valid);
  CHECK(result.executed());
  REQUIRE(result.stages.size() == 2);

  // Token accounting: each stage within its share, total within budget.
  const int total = test_config().max_output_tokens;
  CHECK(result.stages[0].tokens <= total / 5 + 1);
  CHECK(result.stages[0].tokens + result.stages[1].tokens <= total);
}

TEST_CASE("deterministic verifier on the documented cases") {
  SUBCASE("consistent set is Correct") {
    const auto outcome = verify_predicates_deterministic({{"Parent", 2}});
    CHECK_FALSE(outcome.corrected);
    CHECK(outcome.predicates == predicates::PredicateSet{{"Parent", 2}});
  }
  SUBCASE("majority arity wins") {
    const auto outcome = verify_predicates_deterministic(
        {{"CanTake", 1}, {"CanTake", 2}, {"CanTake", 2}, {"Class", 1}});
    CHECK(outcome.corrected);
    CHECK(outcome.predicates ==
          predicates::PredicateSet{{"CanTake", 2}, {"Class", 1}});
  }
  SUBCASE("ties keep the smaller arity") {
    const auto outcome = verify_predicates_deterministic({{"P", 0}, {"P", 1}});
    CHECK(outcome.corrected);
    CHECK(outcome.predicates == predicates::PredicateSet{{"P", 0}});
  }
  SUBCASE("corrected sets never retain conflicts") {
    std::mt19937_64 rng(8080);
    std::uniform_int_distribution<int> extra(1, 3), ar(0, 3), idx(0, 4);
    const std::vector<std::string> names = {"P", "Q", "R", "S", "T"};
    for (int i = 0; i < 100; ++i) {
      std::vector<predicates::PredicateSignature> decls;
      for (const auto& n : names) decls.push_back({n, ar(rng)});
      const int perturbations = extra(rng);
      for (int k = 0; k < perturbations; ++k) {
        const auto& base = decls[idx(rng)];
        decls.push_back({base.name, base.arity + 1});
      }
      const auto outcome = verify_predicates_deterministic(decls);
      const std::vector<predicates::PredicateSignature> final_list(
          outcome.predicates.begin(), outcome.predicates.end());
      CHECK(predicates::arity_conflicts(final_list).empty());
    }
  }
}

TEST_CASE("model verifier reply handling") {
  const auto problem = fixtures::example_problem();
  const std::vector<predicates::PredicateSignature> decls{
      {"CanTake", 1}, {"CanTake", 2}, {"Class", 1}, {"Prereq", 2},
      {"Student", 1}, {"Take", 1},    {"Taken", 1}};
  const auto tmpl = default_template(PromptMode::Verifier);

  SUBCASE("'correct' keeps the set") {
    FunctionChatClient client([](const ChatRequest&) {
      return ClientResult{Completion{"correct", 1, {}}, ""};
    });
    const auto outcome =
        verify_predicates_model(problem, decls, client, test_config(), tmpl, true);
    CHECK_FALSE(outcome.corrected);
    CHECK(outcome.provenance == VerifierOutcome::Provenance::ModelBased);
    CHECK_FALSE(outcome.warning);
  }
  SUBCASE("a corrected list replaces the set") {
    FunctionChatClient client([](const ChatRequest&) {
      return ClientResult{
          Completion{"Predicates:\nClass(x); Prereq(x, y); Student(x); Take(x, y); "
                     "CanTake(x, y)",
                     10,
                     {}},
          ""};
    });
    const auto outcome =
        verify_predicates_model(problem, decls, client, test_config(), tmpl, true);
    CHECK(outcome.corrected);
    CHECK(outcome.predicates ==
          predicates::PredicateSet{{"CanTake", 2}, {"Class", 1}, {"Prereq", 2},
                                   {"Student", 1}, {"Take", 2}});
  }
  SUBCASE("free prose falls back to Correct with a warning") {
    FunctionChatClient client([](const ChatRequest&) {
      return ClientResult{Completion{"Looks good to me, probably?", 5, {}}, ""};
    });
    const auto outcome =
        verify_predicates_model(problem, decls, client, test_config(), tmpl, true);
    CHECK_FALSE(outcome.corrected);
    CHECK(outcome.warning);
    CHECK(outcome.predicates ==
          predicates::PredicateSet(decls.begin(), decls.end()));
  }
  SUBCASE("a still-conflicted reply is rejected") {
    FunctionChatClient client([](const ChatRequest&) {
      return ClientResult{Completion{"P(x); P(x, y)", 3, {}}, ""};
    });
    const auto outcome =
        verify_predicates_model(problem, decls, client, test_config(), tmpl, true);
    CHECK_FALSE(outcome.corrected);
    CHECK(outcome.warning);
  }
  SUBCASE("transport failure falls back to the deterministic verifier") {
    FunctionChatClient client([](const ChatRequest&) {
      return ClientResult{std::nullopt, "down"};
    });
    const auto outcome =
        verify_predicates_model(problem, decls, client, test_config(), tmpl, true);
    CHECK(outcome.provenance == VerifierOutcome::Provenance::Deterministic);
    CHECK(outcome.corrected);  // CanTake 1-vs-2 tie resolves to arity 1
  }
}

TEST_CASE("verifier removes arity mismatches end to end") {
  for (const auto& fixture : fixtures::arity_perturbation_fixtures(3)) {
    ReplayChatClient client;
    client.add(fixture.problem.id, "predicates", fixture.stage1);
    client.add(fixture.problem.id, "fol", fixture.stage2);

    RunnerOptions no_verifier;
    auto plain = run_incremental(fixture.problem, client, test_config(),
                                 default_template(PromptMode::PredicatesOnly),
                                 default_template(PromptMode::FolGivenPredicates),
                                 no_verifier);
    int plain_mismatches = 0;
    for (const auto& r : plain.reports) {
      if (r.category.kind == taxonomy::ErrorKind::ArityMismatch) ++plain_mismatches;
    }
    CHECK(plain_mismatches >= 1);
    CHECK_FALSE(plain.executed());

    RunnerOptions with_verifier;
    with_verifier.verifier = VerifierKind::Deterministic;
    auto verified = run_incremental(fixture.problem, client, test_config(),
                                    default_template(PromptMode::PredicatesOnly),
                                    default_template(PromptMode::FolGivenPredicates),
                                    with_verifier);
    CHECK(verified.mode_label == "Incremental+Verifier");
    REQUIRE(verified.verifier.has_value());
    CHECK(verified.verifier->corrected);
    for (const auto& r : verified.reports) {
      CHECK(r.category.kind != taxonomy::ErrorKind::ArityMismatch);
    }
    CHECK(verified.executed());
    REQUIRE(verified.correct.has_value());
    CHECK(*verified.correct);
  }
}

TEST_CASE("evaluation summaries") {
  SUBCASE("empty input is degenerate") {
    const auto summary = evaluate({}, "empty");
    CHECK(summary.degenerate);
    CHECK(summary.total == 0);
    CHECK(summary.execution_rate == 0.0);
    check_summary_consistency(summary);
  }
  SUBCASE("one of two executes and is correct") {
    ReasoningProblem good;
    good.id = "r1";
    good.premises_nl = {"Anne is quiet.", "All quiet people are red."};
    good.conclusion_nl = "Anne is red.";
    good.gold_label = reasoner::TruthLabel::True;
    ReasoningProblem bad = good;
    bad.id = "r2";

    ReplayChatClient client;
    client.add("r1", "standard",
               "Predicates:\nQuiet(x)\nRed(x)\n"
               "Premises:\nQuiet(Anne)\n∀x (Quiet(x) → Red(x))\n"
               "Conclusion:\nRed(Anne)\n");
    client.add("r2", "standard", fixtures::loop_output(40));

    BatchOptions options;
    const auto results = run_batch({good, bad}, client, test_config(),
                                   default_template(PromptMode::Standard),
                                   default_template(PromptMode::PredicatesOnly),
                                   default_template(PromptMode::FolGivenPredicates),
                                   default_template(PromptMode::Verifier), options);
    const auto summary = evaluate(results, "mini");
    CHECK(summary.total == 2);
    CHECK(summary.executed == 1);
    CHECK(summary.execution_rate == doctest::Approx(0.5));
    CHECK(summary.accuracy == doctest::Approx(0.5));
    CHECK(summary.total_reports == 1);
    check_summary_consistency(summary);
  }
}

TEST_CASE("worker pool output is independent of width") {
  std::vector<ReasoningProblem> problems;
  ReplayChatClient client;
  for (int i = 0; i < 6; ++i) {
    auto p = fixtures::example_problem();
    p.id = "batch-" + std::to_string(i);
    problems.push_back(p);
    client.add(p.id, "standard", fixtures::example_block());
  }
  BatchOptions serial;
  serial.jobs = 1;
  BatchOptions parallel;
  parallel.jobs = 4;
  const auto a = run_batch(problems, client, test_config(),
                           default_template(PromptMode::Standard),
                           default_template(PromptMode::PredicatesOnly),
                           default_template(PromptMode::FolGivenPredicates),
                           default_template(PromptMode::Verifier), serial);
  const auto b = run_batch(problems, client, test_config(),
                           default_template(PromptMode::Standard),
                           default_template(PromptMode::PredicatesOnly),
                           default_template(PromptMode::FolGivenPredicates),
                           default_template(PromptMode::Verifier), parallel);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].problem_id == problems[i].id);
    CHECK(a[i].to_json().dump() == b[i].to_json().dump());
  }
  check_summary_consistency(evaluate(a, "pw"));
}

TEST_CASE("loop generations fill exactly the stage budgets") {
  auto problem = fixtures::example_problem();
  LoopMockClient client;
  GeneratorConfig config = test_config();
  config.max_output_tokens = 100;
  const auto result =
      run_incremental(problem, client, config,
                      default_template(PromptMode::PredicatesOnly),
                      default_template(PromptMode::FolGivenPredicates));
  REQUIRE(result.stages.size() == 2);
  CHECK(result.stages[0].tokens <= 20);  // 20% of the budget
  CHECK(result.stages[1].tokens <= 80);
  CHECK(result.stages[0].tokens + result.stages[1].tokens <= 100);
  // Stage 2 never emits headers, so the record is a formatting failure.
  REQUIRE(result.parsed.has_value());
  CHECK_FALSE(result.parsed->ok());
}

TEST_CASE("http client round-trips against a local server") {
  httplib::Server server;
  std::atomic<int> hits{0};
  server.Post("/v1/chat/completions",
              [&](const httplib::Request& req, httplib::Response& res) {
                const int n = ++hits;
                if (n == 1) {
                  res.status = 500;  // first attempt fails; the retry succeeds
                  return;
                }
                const auto body = nlohmann::json::parse(req.body);
                CHECK(body.at("model") == "test-model");
                CHECK(body.at("messages").size() >= 2);
                const nlohmann::json reply{
                    {"choices",
                     {{{"message", {{"role", "assistant"}, {"content", "Predicates:\nQuiet(x)"}}}}}},
                    {"usage", {{"completion_tokens", 7}}}};
                res.set_content(reply.dump(), "application/json");
              });
  const int port = server.bind_to_any_port("127.0.0.1");
  REQUIRE(port > 0);
  std::thread serving([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  GeneratorConfig config = test_config();
  config.endpoint = "http://127.0.0.1:" + std::to_string(port);
  config.retry.max_attempts = 3;
  config.retry.backoff = std::chrono::milliseconds(10);
  config.min_request_interval = std::chrono::milliseconds(60);
  HttpChatClient client(config);
  ChatRequest request{"h1", "standard",
                      {{"system", "s"}, {"user", "u"}}, 100, {}};
  const auto started = std::chrono::steady_clock::now();
  const auto result = client.complete(request);
  REQUIRE(result.ok());
  CHECK(result.completion->text == "Predicates:\nQuiet(x)");
  CHECK(result.completion->completion_tokens == 7);
  CHECK(hits == 2);

  // Rate limiting: the retry pair plus one more call spans at least two
  // enforced intervals.
  const auto second = client.complete(request);
  REQUIRE(second.ok());
  const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
      std::chrono::steady_clock::now() - started);
  CHECK(elapsed.count() >= 2 * 60);
  CHECK(hits == 3);

  server.stop();
  serving.join();
}

TEST_CASE("http client rejects nonsense configuration") {
  GeneratorConfig config = test_config();
  CHECK_THROWS_AS(HttpChatClient{config}, std::invalid_argument);  // no endpoint
  config.endpoint = "http://localhost:1";
  config.temperature = -1.0;
  CHECK_THROWS_AS(HttpChatClient{config}, std::invalid_argument);
  config.temperature = 0.1;
  config.max_output_tokens = 0;
  CHECK_THROWS_AS(HttpChatClient{config}, std::invalid_argument);
}

}  // TEST_SUITE
