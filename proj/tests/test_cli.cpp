#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "doctest.h"
#include "partsim/combinatorics.hpp"
#include "partsim/io.hpp"
#include "partsim/mutual_info.hpp"
#include "partsim/rand_index.hpp"

using json = nlohmann::json;
using namespace partsim;
namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* required_env(const char* name) {
  const char* v = std::getenv(name);
  REQUIRE_MESSAGE(v != nullptr, name, " must point at the binary / fixtures");
  return v;
}

struct Workspace {
  fs::path dir;
  Workspace() {
    dir = fs::temp_directory_path() /
          ("partsim_cli_" + std::to_string(::getpid()) + "_" +
           std::to_string(counter++));
    fs::create_directories(dir);
  }
  ~Workspace() { fs::remove_all(dir); }
  std::string file(const std::string& name) const { return (dir / name).string(); }
  static int counter;
};

int Workspace::counter = 0;

/// Runs the CLI with stdout/stderr captured to files in `ws`.
RunResult run(const Workspace& ws, const std::string& args) {
  static int invocation = 0;
  fs::path out = ws.dir / ("out" + std::to_string(invocation));
  fs::path err = ws.dir / ("err" + std::to_string(invocation));
  ++invocation;
  std::string cmd = std::string(required_env("PARTSIM_BIN")) + " " + args + " >" +
                    out.string() + " 2>" + err.string();
  int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

std::string fixture(const std::string& name) {
  return (fs::path(required_env("PARTSIM_FIXTURES")) / name).string();
}

Clustering load(const std::string& path) {
  return read_clustering_file(path).clustering();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream ss(text);
  std::string line;
  while (std::getline(ss, line))
    if (!line.empty()) lines.push_back(line);
  return lines;
}

}  // namespace

TEST_CASE("compare: two-sided rand under each model matches the library") {
  Workspace ws;
  Clustering w = load(fixture("w.clu"));
  Clustering x = load(fixture("x.clu"));
  Combinatorics comb(20);

  for (std::string model : {"perm", "num", "all", "none"}) {
    RunResult r = run(ws, "compare " + fixture("w.clu") + " " + fixture("x.clu") +
                              " --measure rand --model " + model);
    REQUIRE_MESSAGE(r.exit_code == 0, r.err);
    json j = json::parse(r.out);
    CHECK(j["measure"] == "rand");
    CHECK(j["model"] == model);
    CHECK(j["sided"] == "two");
    CHECK(j["n_elements"] == 20);
    CHECK(j["k_a"] == 4);
    CHECK(j["k_b"] == 4);
    CHECK(j["raw"].get<double>() == rand_index(w, x));
    RandSpec spec;
    spec.model = model == "perm"   ? Model::perm
                 : model == "num"  ? Model::num
                 : model == "all"  ? Model::all
                                   : Model::none;
    ScoreBreakdown want = rand_comparison(w, x, spec, comb);
    CHECK(j["expectation"].get<double>() == want.expectation);
    CHECK(j["adjusted"].get<double>() == want.adjusted);
    CHECK(j["max_bound"].get<double>() == 1.0);
  }
}

TEST_CASE("compare: identical files give adjusted = 1 where the bound is attained") {
  Workspace ws;
  // w is balanced, so under the fixed-K model the log-K bound equals its
  // entropy; under the all-partitions model the bound is log N and stays
  // out of reach.
  for (std::string flags : {"--measure rand --model perm", "--measure rand --model all",
                            "--measure mi --model perm", "--measure mi --model num"}) {
    RunResult r =
        run(ws, "compare " + fixture("w.clu") + " " + fixture("w.clu") + " " + flags);
    REQUIRE_MESSAGE(r.exit_code == 0, r.err);
    json j = json::parse(r.out);
    CHECK(j["adjusted"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
  }

  RunResult r = run(ws, "compare " + fixture("w.clu") + " " + fixture("w.clu") +
                            " --measure mi --model all");
  REQUIRE_MESSAGE(r.exit_code == 0, r.err);
  json j = json::parse(r.out);
  Combinatorics comb(20);
  double e = expected_mi_all(20, comb);
  CHECK(j["max_bound"].get<double>() == doctest::Approx(std::log(20.0)).epsilon(1e-15));
  CHECK(j["adjusted"].get<double>() ==
        doctest::Approx((std::log(4.0) - e) / (std::log(20.0) - e)).epsilon(1e-12));
}

TEST_CASE("compare: the crossed two-by-two pair scores -0.5 under rand/perm") {
  Workspace ws;
  std::ofstream(ws.file("a4.clu")) << "1\tL\n2\tL\n3\tR\n4\tR\n";
  std::ofstream(ws.file("b4.clu")) << "1\tL\n2\tR\n3\tL\n4\tR\n";
  RunResult r = run(ws, "compare " + ws.file("a4.clu") + " " + ws.file("b4.clu") +
                            " --measure rand --model perm");
  REQUIRE_MESSAGE(r.exit_code == 0, r.err);
  json j = json::parse(r.out);
  CHECK(j["raw"].get<double>() == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(j["expectation"].get<double>() == doctest::Approx(5.0 / 9.0).epsilon(1e-15));
  CHECK(j["adjusted"].get<double>() == doctest::Approx(-0.5).epsilon(1e-13));
}

TEST_CASE("compare: mi output reports normalizer, bound and base") {
  Workspace ws;
  Clustering w = load(fixture("w.clu"));
  Clustering z = load(fixture("z.clu"));
  Combinatorics comb(20);

  RunResult nats = run(ws, "compare " + fixture("w.clu") + " " + fixture("z.clu") +
                               " --measure mi --model all");
  REQUIRE_MESSAGE(nats.exit_code == 0, nats.err);
  json j = json::parse(nats.out);
  CHECK(j["normalizer"] == "max");
  CHECK(j["log_base"] == "e");
  CHECK(j["raw"].get<double>() == mutual_information(w, z));
  CHECK(j["max_bound"].get<double>() == doctest::Approx(std::log(20.0)).epsilon(1e-15));
  MiSpec spec;
  spec.model = Model::all;
  ScoreBreakdown want = mi_comparison(w, z, spec, comb);
  CHECK(j["adjusted"].get<double>() == want.adjusted);

  RunResult bits = run(ws, "compare " + fixture("w.clu") + " " + fixture("z.clu") +
                               " --measure mi --model all --log-base 2");
  REQUIRE_MESSAGE(bits.exit_code == 0, bits.err);
  json jb = json::parse(bits.out);
  CHECK(jb["raw"].get<double>() ==
        doctest::Approx(mutual_information(w, z) / std::log(2.0)).epsilon(1e-15));
  // The adjustment is a ratio of differences; the base change cancels.
  CHECK(jb["adjusted"].get<double>() == j["adjusted"].get<double>());
}

TEST_CASE("compare: one-sided runs carry the reference side") {
  Workspace ws;
  Clustering w = load(fixture("w.clu"));
  Clustering z = load(fixture("z.clu"));
  Combinatorics comb(20);

  RunResult r = run(ws, "compare " + fixture("w.clu") + " " + fixture("z.clu") +
                            " --measure rand --model num --one-sided --reference-side a");
  REQUIRE_MESSAGE(r.exit_code == 0, r.err);
  json j = json::parse(r.out);
  CHECK(j["sided"] == "one");
  CHECK(j["reference_side"] == "a");
  CHECK(j["expectation"].get<double>() ==
        expected_rand_num_one_sided(z.n_clusters(), 20, w.sizes(), comb));

  RunResult missing = run(ws, "compare " + fixture("w.clu") + " " + fixture("z.clu") +
                                  " --measure rand --model num --one-sided");
  CHECK(missing.exit_code == 2);
}

TEST_CASE("compare: failure exit codes") {
  Workspace ws;

  RunResult bad_flag = run(ws, "compare " + fixture("w.clu") + " " + fixture("x.clu") +
                                   " --no-such-flag");
  CHECK(bad_flag.exit_code == 2);

  std::ofstream(ws.file("broken.clu")) << "a\tc0\nmissing tab here\n";
  RunResult parse_fail =
      run(ws, "compare " + ws.file("broken.clu") + " " + fixture("w.clu"));
  CHECK(parse_fail.exit_code == 2);
  CHECK(parse_fail.err.find(":2") != std::string::npos);  // line number surfaced

  std::ofstream(ws.file("tiny.clu")) << "a\tc0\nb\tc1\n";
  RunResult mismatch = run(ws, "compare " + ws.file("tiny.clu") + " " + fixture("w.clu"));
  CHECK(mismatch.exit_code == 3);

  std::ofstream(ws.file("single.clu")) << "a\tc0\nb\tc1\nc\tc2\nd\tc3\n";
  RunResult undefined = run(ws, "compare " + ws.file("single.clu") + " " +
                                    ws.file("single.clu") + " --measure rand --model perm");
  CHECK(undefined.exit_code == 4);

  RunResult no_sub = run(ws, "");
  CHECK(no_sub.exit_code == 2);
}

TEST_CASE("expect: documented fixed points") {
  Workspace ws;

  RunResult all4 = run(ws, "expect --measure rand --model all --n 4");
  REQUIRE_MESSAGE(all4.exit_code == 0, all4.err);
  json j = json::parse(all4.out);
  CHECK(j["evaluation"] == "exact");
  CHECK(j["expectation"].get<double>() == doctest::Approx(5.0 / 9.0).epsilon(1e-13));
  CHECK(all4.out.find("0.555555") != std::string::npos);

  RunResult num4 = run(ws, "expect --measure rand --model num --n 4 --ka 2 --kb 2");
  REQUIRE_MESSAGE(num4.exit_code == 0, num4.err);
  CHECK(json::parse(num4.out)["expectation"].get<double>() ==
        doctest::Approx(25.0 / 49.0).epsilon(1e-13));
  CHECK(num4.out.find("0.510204") != std::string::npos);

  RunResult approx = run(ws, "expect --measure rand --model num --approx --ka 2 --kb 2");
  REQUIRE_MESSAGE(approx.exit_code == 0, approx.err);
  json ja = json::parse(approx.out);
  CHECK(ja["evaluation"] == "asymptotic");
  CHECK(ja["expectation"].get<double>() == 0.5);

  RunResult perm = run(ws, "expect --measure rand --model perm --sizes-a 2,2 --sizes-b 2,2");
  REQUIRE_MESSAGE(perm.exit_code == 0, perm.err);
  CHECK(json::parse(perm.out)["expectation"].get<double>() ==
        doctest::Approx(5.0 / 9.0).epsilon(1e-15));

  Combinatorics comb(4);
  RunResult mi = run(ws, "expect --measure mi --model num --n 4 --ka 2 --kb 2");
  REQUIRE_MESSAGE(mi.exit_code == 0, mi.err);
  CHECK(json::parse(mi.out)["expectation"].get<double>() ==
        doctest::Approx(0.21482558459305118).epsilon(1e-12));

  RunResult mi_bits = run(ws, "expect --measure mi --model all --n 4 --log-base 2");
  REQUIRE_MESSAGE(mi_bits.exit_code == 0, mi_bits.err);
  CHECK(json::parse(mi_bits.out)["expectation"].get<double>() ==
        doctest::Approx(0.42395357620812757 / std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("expect: one-sided needs a reference, asymptotics are two-sided") {
  Workspace ws;
  RunResult one = run(ws, "expect --measure rand --model num --ka 4 --one-sided "
                          "--reference " + fixture("z.clu"));
  REQUIRE_MESSAGE(one.exit_code == 0, one.err);
  json j = json::parse(one.out);
  CHECK(j["sided"] == "one");
  CHECK(j["n"] == 20);
  Combinatorics comb(20);
  Clustering z = load(fixture("z.clu"));
  CHECK(j["expectation"].get<double>() ==
        expected_rand_num_one_sided(4, 20, z.sizes(), comb));

  CHECK(run(ws, "expect --measure rand --model num --ka 4 --one-sided").exit_code == 2);
  CHECK(run(ws, "expect --measure rand --model num --approx --ka 2 --kb 2 --one-sided "
                "--reference " + fixture("z.clu")).exit_code == 2);
  CHECK(run(ws, "expect --measure rand --model num --n 6 --ka 2").exit_code == 2);
  CHECK(run(ws, "expect --measure mi --model num --n 6 --ka 2 --kb 2 --approx").exit_code == 2);
}

TEST_CASE("rank: sorted pair table with library-exact scores") {
  Workspace ws;
  std::string files = fixture("w.clu") + " " + fixture("x.clu") + " " +
                      fixture("y.clu") + " " + fixture("z.clu");

  RunResult tsv = run(ws, "rank " + files + " --measure rand --model perm");
  REQUIRE_MESSAGE(tsv.exit_code == 0, tsv.err);
  auto rows = lines_of(tsv.out);
  REQUIRE(rows.size() == 7);  // header + C(4,2) pairs
  CHECK(rows[0] == "a\tb\traw\texpectation\tadjusted");

  RunResult js = run(ws, "rank " + files + " --measure rand --model perm --format json");
  REQUIRE_MESSAGE(js.exit_code == 0, js.err);
  json arr = json::parse(js.out);
  REQUIRE(arr.size() == 6);

  Combinatorics comb(20);
  RandSpec spec;
  double prev = std::numeric_limits<double>::infinity();
  for (const auto& row : arr) {
    Clustering a = load(row["a"].get<std::string>());
    Clustering b = load(row["b"].get<std::string>());
    ScoreBreakdown want = rand_comparison(a, b, spec, comb);
    CHECK(row["raw"].get<double>() == want.raw);
    CHECK(row["adjusted"].get<double>() == want.adjusted);
    CHECK(row["adjusted"].get<double>() <= prev);
    prev = row["adjusted"].get<double>();
  }

  // The w-x pair is nearly identical and must outrank everything else.
  CHECK(arr[0]["a"].get<std::string>().find("w.clu") != std::string::npos);
  CHECK(arr[0]["b"].get<std::string>().find("x.clu") != std::string::npos);

  RunResult one_file = run(ws, "rank " + fixture("w.clu"));
  CHECK(one_file.exit_code == 2);
}

TEST_CASE("rank: correcting against the all-partitions model keeps the raw order") {
  Workspace ws;
  std::string files = fixture("w.clu") + " " + fixture("x.clu") + " " +
                      fixture("y.clu") + " " + fixture("z.clu");
  for (std::string measure : {"rand", "mi"}) {
    RunResult all = run(ws, "rank " + files + " --measure " + measure +
                                " --model all --format json");
    REQUIRE_MESSAGE(all.exit_code == 0, all.err);
    json ja = json::parse(all.out);
    REQUIRE(ja.size() == 6);
    // Rows are sorted by adjusted score; the raw scores must come out
    // sorted too (the correction is a shared monotone map).
    for (std::size_t i = 0; i + 1 < ja.size(); ++i)
      CHECK(ja[i]["raw"].get<double>() >= ja[i + 1]["raw"].get<double>());
  }

  // For the Rand index the uncorrected score is the raw score, so whole
  // rankings can be compared across the two runs.
  RunResult none = run(ws, "rank " + files + " --measure rand --model none --format json");
  RunResult all = run(ws, "rank " + files + " --measure rand --model all --format json");
  REQUIRE_MESSAGE(none.exit_code == 0, none.err);
  REQUIRE_MESSAGE(all.exit_code == 0, all.err);
  json jn = json::parse(none.out), ja = json::parse(all.out);
  REQUIRE(jn.size() == ja.size());
  for (std::size_t i = 0; i < jn.size(); ++i) {
    CHECK(jn[i]["a"] == ja[i]["a"]);
    CHECK(jn[i]["b"] == ja[i]["b"]);
  }
}

TEST_CASE("sample: fixed seeds replay byte for byte") {
  Workspace ws;
  RunResult first = run(ws, "sample --model all --n 12 --seed 7 --count 3 --out-prefix " +
                                ws.file("run_a"));
  RunResult second = run(ws, "sample --model all --n 12 --seed 7 --count 3 --out-prefix " +
                                 ws.file("run_b"));
  REQUIRE_MESSAGE(first.exit_code == 0, first.err);
  REQUIRE_MESSAGE(second.exit_code == 0, second.err);
  CHECK(lines_of(first.out).size() == 3);
  for (int i = 0; i < 3; ++i) {
    std::string a = slurp(ws.file("run_a_" + std::to_string(i) + ".clu"));
    std::string b = slurp(ws.file("run_b_" + std::to_string(i) + ".clu"));
    CHECK(!a.empty());
    CHECK(a == b);
  }
  RunResult third = run(ws, "sample --model all --n 12 --seed 8 --count 1 --out-prefix " +
                                ws.file("run_c"));
  REQUIRE(third.exit_code == 0);
  CHECK(slurp(ws.file("run_c_0.clu")) != slurp(ws.file("run_a_0.clu")));
}

TEST_CASE("sample: model parameter shapes") {
  Workspace ws;
  RunResult singles = run(ws, "sample --model num --n 10 --k 10 --seed 1 --out-prefix " +
                                  ws.file("s"));
  REQUIRE_MESSAGE(singles.exit_code == 0, singles.err);
  Clustering c = load(ws.file("s_0.clu"));
  CHECK(c.n_clusters() == 10);  // K = N forces singletons

  RunResult perm = run(ws, "sample --model perm --template " + fixture("w.clu") +
                               " --seed 5 --out-prefix " + ws.file("p"));
  REQUIRE_MESSAGE(perm.exit_code == 0, perm.err);
  LabeledClustering sampled = read_clustering_file(ws.file("p_0.clu"));
  CHECK(sampled.element_ids == read_clustering_file(fixture("w.clu")).element_ids);
  std::vector<std::uint64_t> sizes = sampled.clustering().sizes();
  std::sort(sizes.begin(), sizes.end());
  CHECK(sizes == std::vector<std::uint64_t>{5, 5, 5, 5});

  CHECK(run(ws, "sample --model num --n 10 --seed 1").exit_code == 2);  // missing --k
  CHECK(run(ws, "sample --model all --n 12").exit_code == 2);           // missing --seed
  CHECK(run(ws, "sample --model perm --seed 1").exit_code == 2);        // missing template
}

TEST_CASE("experiment pref-attach: deterministic trajectory table") {
  Workspace ws;
  std::string args = "experiment pref-attach --n 50 --k 5 --steps 500 "
                     "--record-every 100 --seed 3";
  RunResult r = run(ws, args);
  REQUIRE_MESSAGE(r.exit_code == 0, r.err);
  auto rows = lines_of(r.out);
  REQUIRE(rows.size() == 7);  // header + records at 0,100,...,500
  CHECK(rows[0] == "step\tentropy_bits\tari_perm\tari_num");
  CHECK(rows[1].rfind("0\t", 0) == 0);
  // Balanced start: both adjusted scores 1, entropy log2(5).
  CHECK(rows[1].find("2.321928") != std::string::npos);
  CHECK(rows[1].find("1.000000") != std::string::npos);
  CHECK(rows[6].rfind("500\t", 0) == 0);

  RunResult again = run(ws, args);
  CHECK(again.out == r.out);

  CHECK(run(ws, "experiment pref-attach --k 1").exit_code == 2);
}

TEST_CASE("oracle verify: pass, refusal and negative control") {
  Workspace ws;
  RunResult ok = run(ws, "oracle verify --max-n 4");
  REQUIRE_MESSAGE(ok.exit_code == 0, ok.err);
  CHECK(ok.out.find("OK") != std::string::npos);
  CHECK(ok.out.find("FAIL") == std::string::npos);

  RunResult refusal = run(ws, "oracle verify --max-n 20");
  CHECK(refusal.exit_code == 2);
  CHECK(refusal.err.find("51724158235372") != std::string::npos);  // B(20)

  RunResult corrupted = run(ws, "oracle verify --max-n 4 --perturb 1e-6");
  CHECK(corrupted.exit_code == 1);
  CHECK(corrupted.out.find("FAIL") != std::string::npos);
}
