// End-to-end checks of the installed command-line surface; each case drives
// the real binary through std::system.

#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <string>

#include "helpers.hpp"

using namespace mpalign;
using test::TempDir;
using test::slurp;

namespace {

const std::string kCli = MPALIGN_CLI;
const std::string kFixtures = MPALIGN_FIXTURES;

struct RunResult {
  int exit_code;
  std::string out;
  std::string err;
};

RunResult run(const TempDir& dir, const std::string& args) {
  auto out = dir.path / "stdout.txt";
  auto err = dir.path / "stderr.txt";
  std::string cmd =
      kCli + " " + args + " > " + out.string() + " 2> " + err.string();
  int status = std::system(cmd.c_str());
  return RunResult{WEXITSTATUS(status), slurp(out), slurp(err)};
}

}  // namespace

TEST_CASE("predict reproduces the frozen toy output", "[cli]") {
  TempDir dir("cli_golden");
  auto merged = dir.path / "merged.align";
  RunResult r = run(
      dir, "predict --corpus " + kFixtures + "/toy --editions " +
               "deu-demo,eng-demo,fra-demo --target eng-demo,fra-demo "
               "--method adad --alignments " + kFixtures + "/toy --output " +
               merged.string());
  INFO(r.err);
  REQUIRE(r.exit_code == 0);
  REQUIRE(slurp(merged) == slurp(kFixtures + "/toy/expected_adad.align"));
}

TEST_CASE("identical seeds give byte-identical outputs", "[cli]") {
  TempDir dir("cli_determinism");
  auto corpus = dir.path / "corpus";
  RunResult s = run(dir, "synth --out " + corpus.string() +
                             " --languages 5 --verses 8 --concepts 3 "
                             "--p-drop 0.4 --seed 99");
  REQUIRE(s.exit_code == 0);

  std::string predict_args =
      "predict --corpus " + corpus.string() +
      " --editions aaa-synth,aab-synth,aac-synth,aad-synth,aae-synth "
      "--target aaa-synth,aab-synth --method nmf --nmf-epochs 15 "
      "--nmf-rank 5 --seed 7 --alignments " + corpus.string();
  auto out1 = dir.path / "m1.align";
  auto out2 = dir.path / "m2.align";
  auto prov1 = dir.path / "p1.tsv";
  auto prov2 = dir.path / "p2.tsv";
  REQUIRE(run(dir, predict_args + " --output " + out1.string() +
                       " --provenance " + prov1.string()).exit_code == 0);
  REQUIRE(run(dir, predict_args + " --output " + out2.string() +
                       " --provenance " + prov2.string()).exit_code == 0);
  REQUIRE(slurp(out1) == slurp(out2));
  REQUIRE(slurp(prov1) == slurp(prov2));
  REQUIRE_FALSE(slurp(out1).empty());
}

TEST_CASE("missing baseline file exits 2 and names the path", "[cli]") {
  TempDir dir("cli_missing");
  RunResult r = run(
      dir, "predict --corpus " + kFixtures + "/toy --editions " +
               "deu-demo,eng-demo,fra-demo --target eng-demo,fra-demo "
               "--method adad --alignments " + kFixtures + "/toy " +
               "--baseline " + (dir.path / "nope.align").string() +
               " --output " + (dir.path / "out.align").string());
  REQUIRE(r.exit_code == 2);
  REQUIRE(r.err.find("nope.align") != std::string::npos);
  REQUIRE_FALSE(test::fs::exists(dir.path / "out.align"));
}

TEST_CASE("usage errors exit 2", "[cli]") {
  TempDir dir("cli_usage");
  REQUIRE(run(dir, "predict --method definitely-not-a-method").exit_code == 2);
  REQUIRE(run(dir, "no-such-command").exit_code == 2);
}

TEST_CASE("eval reports the hand-computed metrics", "[cli]") {
  TempDir dir("cli_eval");
  auto hyp = dir.file("hyp.align", "v1\t0-0 0-1\n");
  auto gold = dir.file("gold.gold", "v1\t0-0\n");
  RunResult r = run(dir, "eval --hypothesis " + hyp.string() + " --gold " +
                             gold.string());
  REQUIRE(r.exit_code == 0);
  REQUIRE(r.out.find("metric\tvalue\n") == 0);
  REQUIRE(r.out.find("precision\t0.5\n") != std::string::npos);
  REQUIRE(r.out.find("recall\t1\n") != std::string::npos);
  REQUIRE(r.out.find("f1\t0.666667\n") != std::string::npos);
  REQUIRE(r.out.find("aer\t0.333333\n") != std::string::npos);
}

TEST_CASE("eval writes per-verse results and strata on request", "[cli]") {
  TempDir dir("cli_eval_extra");
  auto hyp = dir.file("hyp.align", "v1\t0-0 1-1\nv2\t0-0\n");
  auto base = dir.file("base.align", "v1\t0-0\nv2\t\n");
  auto gold = dir.file("gold.gold", "v1\t0-0 1-1\nv2\t0-0\n");
  auto pv = dir.path / "per_verse.tsv";
  RunResult r = run(dir, "eval --hypothesis " + hyp.string() + " --gold " +
                             gold.string() + " --per-verse " + pv.string() +
                             " --stratify " + base.string());
  REQUIRE(r.exit_code == 0);
  std::string per_verse = slurp(pv);
  REQUIRE(per_verse.find("verse_id\tprecision\trecall\tf1\taer\n") == 0);
  REQUIRE(per_verse.find("v1\t1\t1\t1\t0\n") != std::string::npos);
  REQUIRE(r.out.find("bin_low\tbin_high\tverses") != std::string::npos);
}

TEST_CASE("adad and wadad both complete on unscored input and add to the "
          "baseline",
          "[cli]") {
  TempDir dir("cli_methods");
  auto corpus = dir.path / "corpus";
  REQUIRE(run(dir, "synth --out " + corpus.string() +
                       " --languages 6 --verses 10 --concepts 4 "
                       "--p-drop 0.5 --seed 3").exit_code == 0);
  std::string editions =
      "aaa-synth,aab-synth,aac-synth,aad-synth,aae-synth,aaf-synth";
  VerseAlignments baseline = load_alignments(
      corpus / "aaa-synth__aab-synth.align",
      {test::ed("aaa-synth"), test::ed("aab-synth")});
  for (std::string method : {"adad", "wadad"}) {
    auto out = dir.path / (method + ".align");
    RunResult r = run(dir, "predict --corpus " + corpus.string() +
                               " --editions " + editions +
                               " --target aaa-synth,aab-synth --method " +
                               method + " --alignments " + corpus.string() +
                               " --output " + out.string());
    INFO(r.err);
    REQUIRE(r.exit_code == 0);
    VerseAlignments merged = load_alignments(
        out, {test::ed("aaa-synth"), test::ed("aab-synth")});
    std::size_t base_edges = 0, merged_edges = 0;
    for (const auto& [verse, set] : baseline) {
      base_edges += set.size();
      const AlignmentSet& m = merged.at(verse);
      merged_edges += m.size();
      for (const auto& [link, data] : set.edges) REQUIRE(m.contains(link));
    }
    REQUIRE(merged_edges > base_edges);
  }
}

TEST_CASE("report compares baseline and merged", "[cli]") {
  TempDir dir("cli_report");
  auto base = dir.file("base.align", "v1\t0-0\nv2\t\n");
  auto merged = dir.file("merged.align", "v1\t0-0 1-1\nv2\t0-0\n");
  auto gold = dir.file("gold.gold", "v1\t0-0 1-1\nv2\t0-0\n");
  RunResult r = run(dir, "report --gold " + gold.string() + " --baseline " +
                             base.string() + " --merged " + merged.string());
  REQUIRE(r.exit_code == 0);
  REQUIRE(r.out.find("metric\tbaseline\tmerged\tdelta\n") == 0);
  REQUIRE(r.out.find("bin_low") != std::string::npos);
}

TEST_CASE("ablate emits the requested schedule", "[cli]") {
  TempDir dir("cli_ablate");
  auto corpus = dir.path / "corpus";
  REQUIRE(run(dir, "synth --out " + corpus.string() +
                       " --languages 5 --verses 10 --concepts 3 "
                       "--p-drop 0.4 --seed 12").exit_code == 0);
  RunResult sizes = run(
      dir, "ablate --corpus " + corpus.string() +
               " --target aaa-synth,aab-synth "
               "--pool aac-synth,aad-synth,aae-synth --alignments " +
               corpus.string() + " --gold " +
               (corpus / "aaa-synth__aab-synth.gold").string() +
               " --schedule sizes --sizes 0,1,3 --seed 2");
  INFO(sizes.err);
  REQUIRE(sizes.exit_code == 0);
  REQUIRE(sizes.out.find("n_languages\tf1\n") == 0);
  REQUIRE(sizes.out.find("\n0\t") != std::string::npos);
  REQUIRE(sizes.out.find("\n3\t") != std::string::npos);

  RunResult rank = run(
      dir, "ablate --corpus " + corpus.string() +
               " --target aaa-synth,aab-synth "
               "--pool aac-synth,aad-synth --alignments " + corpus.string() +
               " --gold " + (corpus / "aaa-synth__aab-synth.gold").string() +
               " --schedule leave-one-in");
  REQUIRE(rank.exit_code == 0);
  REQUIRE(rank.out.find("language\tdelta_f1\n") == 0);
}

TEST_CASE("graph dumps render nodes with their tokens", "[cli]") {
  TempDir dir("cli_dump");
  auto dumps = dir.path / "graphs";
  RunResult r = run(
      dir, "predict --corpus " + kFixtures + "/toy --editions " +
               "deu-demo,eng-demo,fra-demo --target eng-demo,fra-demo "
               "--method adad --alignments " + kFixtures + "/toy --output " +
               (dir.path / "m.align").string() + " --dump-graphs " +
               dumps.string());
  REQUIRE(r.exit_code == 0);
  std::string dump = slurp(dumps / "v1.tsv");
  REQUIRE(dump.find("deu:demo:0:ich\teng:demo:0:I\t1") != std::string::npos);
}

TEST_CASE("config files supply defaults and flags win", "[cli]") {
  TempDir dir("cli_config");
  auto corpus = dir.path / "corpus";
  REQUIRE(run(dir, "synth --out " + corpus.string() +
                       " --languages 4 --verses 4 --concepts 3 "
                       "--p-drop 0.4 --seed 8").exit_code == 0);
  auto config = dir.file("run.cfg",
                         "method=wadad\n"
                         "seed=7\n");
  std::string common =
      "predict --corpus " + corpus.string() +
      " --editions aaa-synth,aab-synth,aac-synth,aad-synth "
      "--target aaa-synth,aab-synth --alignments " + corpus.string();

  auto from_config = dir.path / "wadad.align";
  REQUIRE(run(dir, common + " --config " + config.string() + " --output " +
                       from_config.string()).exit_code == 0);
  auto overridden = dir.path / "adad.align";
  REQUIRE(run(dir, common + " --config " + config.string() +
                       " --method adad --output " +
                       overridden.string()).exit_code == 0);
  auto plain_wadad = dir.path / "wadad2.align";
  REQUIRE(run(dir, common + " --method wadad --seed 7 --output " +
                       plain_wadad.string()).exit_code == 0);
  auto plain_adad = dir.path / "adad2.align";
  REQUIRE(run(dir, common + " --method adad --seed 7 --output " +
                       plain_adad.string()).exit_code == 0);

  REQUIRE(slurp(from_config) == slurp(plain_wadad));
  REQUIRE(slurp(overridden) == slurp(plain_adad));
}

TEST_CASE("factor dumps require the nmf method and write per-verse matrices",
          "[cli]") {
  TempDir dir("cli_factors");
  auto corpus = dir.path / "corpus";
  REQUIRE(run(dir, "synth --out " + corpus.string() +
                       " --languages 4 --verses 3 --concepts 5 "
                       "--seed 21").exit_code == 0);
  std::string common =
      "predict --corpus " + corpus.string() +
      " --editions aaa-synth,aab-synth,aac-synth,aad-synth "
      "--target aaa-synth,aab-synth --alignments " + corpus.string() +
      " --output " + (dir.path / "m.align").string() + " --dump-factors " +
      (dir.path / "factors").string();

  RunResult wrong = run(dir, common + " --method adad");
  REQUIRE(wrong.exit_code == 2);
  REQUIRE_FALSE(test::fs::exists(dir.path / "m.align"));

  RunResult ok = run(dir, common + " --method nmf --nmf-rank 5 --seed 2");
  INFO(ok.err);
  REQUIRE(ok.exit_code == 0);
  REQUIRE(test::fs::exists(dir.path / "factors" / "v00000.T.tsv"));
  REQUIRE(test::fs::exists(dir.path / "factors" / "v00000.V.tsv"));
  // 20 nodes x rank 5: one row per node in T
  std::string t = slurp(dir.path / "factors" / "v00000.T.tsv");
  REQUIRE(std::count(t.begin(), t.end(), '\n') == 20);
}

TEST_CASE("runtime failures exit 1", "[cli]") {
  TempDir dir("cli_runtime");
  auto bad = dir.file("bad.align", "no tab on this line\n");
  auto gold = dir.file("g.gold", "v1\t0-0\n");
  RunResult r = run(dir, "eval --hypothesis " + bad.string() + " --gold " +
                             gold.string());
  REQUIRE(r.exit_code == 1);
  REQUIRE(r.err.find("bad.align") != std::string::npos);
}
