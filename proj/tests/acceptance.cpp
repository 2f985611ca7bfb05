// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

#include "electre/cli.hpp"
#include "electre/electre.hpp"
#include "electre/service.hpp"
#include "properties.hpp"
#include "support.hpp"
#include "survey_gen.hpp"

using namespace electre;
using electre::testing::data_path;
using electre::testing::equal_weights;
using electre::testing::read_data;
using electre::testing::retailers;

namespace {

using Ids = std::vector<std::string>;
using Clock = std::chrono::steady_clock;

constexpr std::size_t R1 = 0, R2 = 1, R3 = 2, R4 = 3;

struct Failure {
  std::string what;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw Failure{what};
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

void golden_sets() {
  const auto t0 = Clock::now();
  const std::vector<std::vector<CriterionSet>> expected{
      {{}, {0, 1, 2, 3}, {0, 1, 2, 3}, {0, 2}},
      {{}, {}, {1}, {0}},
      {{}, {0, 2, 3}, {}, {0}},
      {{1, 3}, {1, 2, 3}, {1, 2, 3}, {}},
  };
  const auto m = retailers();
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      if (i != j)
        require(concordance_set(m, i, j) == expected[i][j],
                "set mismatch at (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
  require(concordance_set(m, R2, R1).empty(), "(R_2, R_1) must be empty");
  const double elapsed = seconds_since(t0);
  require(elapsed < 1.0, "took " + std::to_string(elapsed) + " s");
}

void golden_indices() {
  const double expected[4][4] = {{0, 1, 1, 0.5}, {0, 0, 0.25, 0.25}, {0, 0.75, 0, 0.25}, {0.5, 0.75, 0.75, 0}};
  const auto c = concordance_matrix(retailers(), equal_weights(4));
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      if (i != j)
        require(std::abs(c.indices.at(i, j) - expected[i][j]) <= 1e-12,
                "C(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ") = " +
                    std::to_string(c.indices.at(i, j)));
}

void golden_edges() {
  const auto g = outrank(retailers(), equal_weights(4), ThresholdConfig{0.75, kUnbounded});
  const std::vector<std::pair<std::size_t, std::size_t>> expected{{R1, R2}, {R1, R3}, {R3, R2}, {R4, R2}, {R4, R3}};
  require(g.edges() == expected, "edge set differs");
}

void graph_structure() {
  const auto g = outrank(retailers(), equal_weights(4), ThresholdConfig{});
  require(kernel(g) == Ids{"R_1", "R_4"}, "kernel");
  require(dominance_levels(g) == std::vector<Ids>{{"R_1", "R_4"}, {"R_3"}, {"R_2"}}, "levels");
  require(incomparable_pairs(g) == std::vector<std::pair<std::string, std::string>>{{"R_1", "R_4"}},
          "incomparable pairs");
}

void positioning() {
  const auto m = retailers();
  const std::vector<Ids> expected{{"Tesco", "Carrefour", "Mydin", "Giant"},
                                  {"Giant", "Tesco", "Mydin", "Carrefour"},
                                  {"Tesco", "Giant", "Carrefour", "Mydin"},
                                  {"Giant", "Tesco", "Carrefour", "Mydin"}};
  const auto t = positioning_table(m);
  require(t.size() == 4, "column count");
  for (std::size_t k = 0; k < 4; ++k) {
    Ids labels;
    for (const auto& e : t[k].entries) labels.push_back(m.alternatives()[*m.index_of(e.id)].label);
    require(labels == expected[k], "column " + m.criteria()[k].id);
    for (std::size_t r = 0; r < 4; ++r) require(t[k].entries[r].rank == r + 1, "ranks in " + m.criteria()[k].id);
  }
}

void leaders_and_averages() {
  const auto m = retailers();
  const std::vector<Ids> expected{{"R_1"}, {"R_4"}, {"R_1"}, {"R_4"}};
  const auto b = benchmark_leaders(m);
  for (std::size_t k = 0; k < 4; ++k) require(b[k].leaders == expected[k], "leader for " + m.criteria()[k].label);
  const auto a = average_scores(m, equal_weights(4));
  const double stated[4] = {4.0575, 3.5025, 3.7775, 3.90};
  for (std::size_t i = 0; i < 4; ++i) {
    const double oracle = (m.score(i, 0) + m.score(i, 1) + m.score(i, 2) + m.score(i, 3)) / 4.0;
    require(std::abs(a.values[i] - oracle) <= 1e-12, "average vs oracle for " + m.alternatives()[i].id);
    require(std::abs(a.values[i] - stated[i]) <= 1e-12, "average vs stated for " + m.alternatives()[i].id);
  }
}

void property_suite() {
  const auto t0 = Clock::now();
  const std::vector<std::pair<const char*, std::function<std::string(std::uint64_t, int)>>> checks{
      {"partition law", electre::testing::check_partition_law},
      {"index complement", electre::testing::check_index_complement},
      {"C* nesting", electre::testing::check_c_star_nesting},
      {"D* nesting", electre::testing::check_d_star_nesting},
      {"affine invariance", electre::testing::check_affine_invariance},
      {"dominance edges", electre::testing::check_dominance_edges},
      {"kernel stability", electre::testing::check_kernel_stability},
      {"brute-force oracle", electre::testing::check_brute_force_oracle},
  };
  std::uint64_t seed = 9001;
  for (const auto& [name, check] : checks) {
    const auto msg = check(seed++, electre::testing::kPropertyInstances);
    require(msg.empty(), std::string(name) + ": " + msg);
  }
  const double elapsed = seconds_since(t0);
  require(elapsed < 30.0, "took " + std::to_string(elapsed) + " s");
}

void sweep_exactness() {
  const auto m = retailers();
  const auto w = equal_weights(4);
  const auto s = threshold_sweep(m, w, kUnbounded);
  require(s.critical_thresholds == std::vector<double>{0.25, 0.5, 0.75, 1.0}, "critical thresholds");
  std::vector<double> bounds{0.0};
  bounds.insert(bounds.end(), s.critical_thresholds.begin(), s.critical_thresholds.end());
  for (std::size_t b = 1; b < bounds.size(); ++b) {
    const double lo = bounds[b - 1], hi = bounds[b];
    std::vector<std::string> prints;
    for (double f : {0.25, 0.5, 0.75}) prints.push_back(sweep_point(m, w, lo + f * (hi - lo), kUnbounded).graph_fingerprint);
    require(prints[0] == prints[1] && prints[1] == prints[2],
            "fingerprint varies inside (" + std::to_string(lo) + ", " + std::to_string(hi) + ")");
  }
}

void ingestion() {
  const std::array<double, 4> target{3.91, 3.73, 3.42, 2.95};
  std::mt19937_64 rng(77);
  const auto records = electre::testing::synthesize_store("R_2", target, 214, rng);
  const auto parsed = parse_survey_csv(electre::testing::survey_csv(records), SurveyParseOptions{true});
  const auto m = aggregate_means(parsed.dataset);
  for (std::size_t a = 0; a < 4; ++a) {
    long total = 0;
    for (const auto& r : records)
      for (std::size_t q = 0; q < kItemsPerAttribute; ++q) total += r.items[a * kItemsPerAttribute + q];
    const double grand = static_cast<double>(total) / static_cast<double>(kItemsPerAttribute * records.size());
    require(std::abs(m.score(0, a) - target[a]) <= 0.005, "ATT_" + std::to_string(a + 1) + " off target");
    require(std::abs(m.score(0, a) - grand) <= 1e-12, "ATT_" + std::to_string(a + 1) + " differs from grand mean");
  }
  auto shuffled = parsed.dataset;
  for (int t = 0; t < 20; ++t) {
    std::shuffle(shuffled.records.begin(), shuffled.records.end(), rng);
    require(aggregate_means(shuffled).scores() == m.scores(), "record order changed the means");
  }
}

void cli_contract() {
  auto run = [](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return std::pair{code, out.str()};
  };
  const auto a = run({"rank", "--matrix", data_path("retailers.csv")});
  const auto b = run({"rank", "--matrix", data_path("retailers.csv")});
  require(a.first == 0, "rank exit code " + std::to_string(a.first));
  require(a.second == b.second, "rank output not byte-identical");
  require(a.second.find("Kernel: {R_1, R_4}") != std::string::npos, "rank output lacks kernel");

  const auto dir = std::filesystem::temp_directory_path() / ("electre_acceptance_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  const auto bad = (dir / "single.csv").string();
  std::ofstream(bad) << "alternative,x\na,1\n";
  require(run({"rank", "--matrix", bad}).first == 1, "invalid matrix must exit 1");
  require(run({"rank", "--matrix", (dir / "missing.csv").string()}).first == 2, "missing input must exit 2");
  require(run({"rank", "--bogus"}).first == 2, "unknown flag must exit 2");

#ifdef ELECTRE_CLI_PATH
  const std::string bin = ELECTRE_CLI_PATH;
  auto capture = [](const std::string& cmd) {
    std::string out;
    FILE* pipe = popen(cmd.c_str(), "r");
    std::array<char, 4096> buf{};
    while (auto n = fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
    pclose(pipe);
    return out;
  };
  const std::string rank = bin + " rank --matrix " + data_path("retailers.csv");
  require(capture(rank) == a.second, "binary output differs from library output");
  require(WEXITSTATUS(std::system((bin + " rank --matrix " + bad + " 2>/dev/null").c_str())) == 1, "binary exit 1");
  require(WEXITSTATUS(std::system((bin + " rank --matrix " + (dir / "missing.csv").string() + " 2>/dev/null").c_str())) == 2,
          "binary exit 2");
#endif
  std::filesystem::remove_all(dir);
}

void service_contract() {
  auto body = json::parse(read_data("retailers_request.json"));
  const auto ok = service::handle_analyze(body.dump());
  require(ok.status == 200, "analyze status " + std::to_string(ok.status));
  require(json::parse(ok.body)["report"]["kernel"] == json({"R_1", "R_4"}), "kernel");

  body["c_star"] = 1.5;
  const auto bad = service::handle_analyze(body.dump());
  require(bad.status == 400, "invalid c_star status " + std::to_string(bad.status));
  const auto v = json::parse(bad.body)["violations"];
  require(!v.empty() && v[0]["path"] == "c_star", "violation path");

  // Same contract over a live socket.
  httplib::Server server;
  service::install_routes(server);
  const int port = server.bind_to_any_port("127.0.0.1");
  require(port > 0, "bind failed");
  std::thread th([&] { server.listen_after_bind(); });
  server.wait_until_ready();
  httplib::Client client("127.0.0.1", port);
  const auto res = client.Post("/api/v1/analyze", read_data("retailers_request.json"), "application/json");
  const bool live_ok = res && res->status == 200 && res->body == ok.body;
  server.stop();
  th.join();
  require(live_ok, "HTTP response differs from handler response");
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, void (*)()>> criteria{
      {"golden concordance sets (exact, < 1 s)", golden_sets},
      {"golden concordance indices (<= 1e-12)", golden_indices},
      {"golden outranking edges at C* = 0.75", golden_edges},
      {"kernel, dominance levels, incomparable pair", graph_structure},
      {"per-criterion positioning table", positioning},
      {"benchmark leaders and equal-weight averages", leaders_and_averages},
      {"property suite (8 x 1000 instances, < 30 s)", property_suite},
      {"threshold sweep exactness", sweep_exactness},
      {"survey ingestion inversion and order invariance", ingestion},
      {"CLI determinism and exit codes", cli_contract},
      {"service analyze contract", service_contract},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    const auto t0 = Clock::now();
    std::string detail;
    try {
      fn();
    } catch (const Failure& f) {
      detail = f.what;
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    const double ms = seconds_since(t0) * 1000.0;
    if (detail.empty()) {
      std::printf("PASS  %s (%.1f ms)\n", name, ms);
    } else {
      std::printf("FAIL  %s: %s\n", name, detail.c_str());
      ++failed;
    }
  }
  std::printf("%zu criteria, %d failed\n", criteria.size(), failed);
  return failed == 0 ? 0 : 1;
}
