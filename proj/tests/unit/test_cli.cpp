#include <gtest/gtest.h>

#include <nlohmann/json.hpp>
#include <sstream>

#include "gl2kit_cli/cli.hpp"

using nlohmann::json;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = gl2kit::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return std::string(GL2KIT_TEST_DATA) + "/" + name; }

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  for (std::string line; std::getline(is, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST(Cli, SieveTextAndJson) {
  const Outcome t = run({"sieve", "--max", "100"});
  EXPECT_EQ(t.code, 0);
  EXPECT_NE(t.out.find("primes: 7 11 23 31 43 47 59 67 71 79 83"), std::string::npos) << t.out;

  const Outcome j = run({"--format", "json", "sieve", "--max", "100"});
  ASSERT_EQ(j.code, 0);
  const json doc = json::parse(j.out);
  EXPECT_EQ(doc["primes"], json::parse("[7, 11, 23, 31, 43, 47, 59, 67, 71, 79, 83]"));
}

TEST(Cli, OrderAndDecompose) {
  const Outcome o = run({"--format", "json", "order", "--modulus", "6"});
  ASSERT_EQ(o.code, 0);
  EXPECT_EQ(json::parse(o.out)["order"], 288);

  const Outcome d = run({"decompose", "--ell", "5", "--matrix", "0,-1,1,0"});
  EXPECT_EQ(d.code, 0);
  EXPECT_NE(d.out.find("word: U^4 Ut^1 U^4"), std::string::npos) << d.out;
}

TEST(Cli, CsvHeadersAreStable) {
  EXPECT_EQ(lines(run({"--format", "csv", "sieve", "--max", "20"}).out).front(), "ell,mod36");
  EXPECT_EQ(lines(run({"--format", "csv", "order", "--modulus", "5"}).out).front(), "key,value");
  EXPECT_EQ(lines(run({"--format", "csv", "spectrum", "--input", data("diag_11.json")}).out).front(),
            "c,d,stabilizer_order,index");
  EXPECT_EQ(lines(run({"--format", "csv", "verify", "sl", "--ell-max", "5"}).out).front(),
            "ell,skipped,checked,excluded,violations,note");
  EXPECT_EQ(lines(run({"--format", "csv", "decompose", "--ell", "7", "--matrix", "1,1,0,1"}).out).front(),
            "position,letter,exponent");
  EXPECT_EQ(lines(run({"--format", "csv", "bound", "--input", data("field_example.json"), "--degree", "17"}).out)
                .front(),
            "ell,kind,passes_mod36,divisor,gcd_with_d");
}

TEST(Cli, JsonIsValidForEveryVerb) {
  const std::vector<std::vector<std::string>> commands{
      {"verify", "cyclic", "--ell-max", "7"},
      {"classify", "--input", data("delta_u1_11.json")},
      {"spectrum", "--input", data("delta_u1_11.json"), "--exhaustive"},
      {"sieve", "--max", "50"},
      {"bound", "--input", data("field_example.json"), "--degree", "17"},
      {"order", "--modulus", "12"},
      {"decompose", "--ell", "11", "--matrix", "2,0,0,6"},
  };
  for (std::vector<std::string> cmd : commands) {
    cmd.insert(cmd.begin(), {"--format", "json"});
    const Outcome o = run(cmd);
    EXPECT_EQ(o.code, 0) << cmd[2] << ": " << o.err;
    EXPECT_TRUE(json::accept(o.out)) << cmd[2];
  }
}

TEST(Cli, VerifySl) {
  const Outcome o = run({"--format", "json", "verify", "sl", "--ell-max", "13"});
  ASSERT_EQ(o.code, 0);
  const json doc = json::parse(o.out);
  std::vector<int> counts;
  for (const json& row : doc["rows"]) counts.push_back(row["checked"].get<int>());
  EXPECT_EQ(counts, (std::vector<int>{24, 120, 336, 1320, 2184}));
}

TEST(Cli, ClassifyReports) {
  const Outcome bl = run({"--format", "json", "classify", "--input", data("delta_u1_11.json")});
  ASSERT_EQ(bl.code, 0) << bl.err;
  const json doc = json::parse(bl.out);
  EXPECT_EQ(doc["classify"]["target"], "Borel");
  EXPECT_EQ(doc["bl"]["delta_kind"], "Delta1");
  EXPECT_EQ(doc["bl"]["divisor"], 5);
  EXPECT_EQ(doc["bl"]["mod36_class"], 11);

  const Outcome diag = run({"classify", "--input", data("diag_11.json")});
  EXPECT_EQ(diag.code, 0);
  EXPECT_NE(diag.out.find("target: NormSplit"), std::string::npos) << diag.out;

  const Outcome nns = run({"classify", "--input", data("norm_nonsplit_5.json")});
  EXPECT_EQ(nns.code, 0) << nns.err;
  EXPECT_NE(nns.out.find("branch: NormNonsplit"), std::string::npos) << nns.out;
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"frobnicate"}).code, 1);
  EXPECT_EQ(run({"--help"}).code, 0);
  EXPECT_EQ(run({"sieve"}).code, 1);
  EXPECT_EQ(run({"--format", "xml", "sieve", "--max", "10"}).code, 1);
  EXPECT_EQ(run({"verify", "no-such-lemma", "--ell-max", "7"}).code, 1);
  EXPECT_EQ(run({"decompose", "--ell", "5", "--matrix", "1,2,3"}).code, 1);
  EXPECT_EQ(run({"spectrum", "--input", data("malformed.json")}).code, 1);
  EXPECT_EQ(run({"spectrum", "--input", data("missing_generators.json")}).code, 1);
  EXPECT_EQ(run({"spectrum", "--input", data("does_not_exist.json")}).code, 1);

  EXPECT_EQ(run({"decompose", "--ell", "5", "--matrix", "2,0,0,2"}).code, 2);
  EXPECT_EQ(run({"decompose", "--ell", "9", "--matrix", "1,0,0,1"}).code, 2);
  EXPECT_EQ(run({"classify", "--input", data("borel_11_even_witness.json")}).code, 2);
  EXPECT_EQ(run({"bound", "--input", data("field_bad_prime.json")}).code, 2);
  EXPECT_EQ(run({"sieve", "--max", "1"}).code, 2);
  EXPECT_EQ(run({"order", "--modulus", "6469693230"}).code, 2);
}

TEST(Cli, ExitCodeThreeOnlyForFalsification) {
  const Outcome c = run({"classify", "--input", data("split_branch_counterexample_11.json")});
  EXPECT_EQ(c.code, 3);
  EXPECT_NE(c.err.find("not-bl"), std::string::npos) << c.err;

  const Outcome v = run({"verify", "not-bl", "--ell-max", "11", "--ell-min", "11"});
  EXPECT_EQ(v.code, 3);
  EXPECT_NE(v.out.find("violations: 6"), std::string::npos) << v.out;
}
