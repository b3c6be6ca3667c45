#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "helpers.hpp"
#include "triplekit/io.hpp"

using namespace triplekit;
using namespace triplekit::testing;

namespace {

struct RunResult {
  int exit_code;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  std::string cmd = std::string(TRIPLEKIT_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[512];
  while (fgets(buf, sizeof(buf), pipe)) out += buf;
  int status = pclose(pipe);
  return {WEXITSTATUS(status), out};
}

std::string write_temp(const std::string& name, const std::string& content) {
  std::string path = std::string("cli_") + name;
  std::ofstream out(path);
  out << content;
  return path;
}

}  // namespace

TEST_CASE("triple JSON round trip is the identity") {
  for (const SymmetricTriple& t :
       {build_lorentz(rlist({1, -2})), build_Ia(1, 1, rlist({1, 2}), rlist({0, 1})),
        build_IV(rr(1), rr(0), rlist({3}))}) {
    SymmetricTriple back = triple_from_json_string(triple_to_json_string(t));
    CHECK(back.dim_g() == t.dim_g());
    CHECK(back.form().gram() == t.form().gram());
    CHECK(back.h_indices() == t.h_indices());
    CHECK(back.m_indices() == t.m_indices());
    for (std::size_t i = 0; i < t.dim_g(); ++i)
      for (std::size_t j = 0; j < t.dim_g(); ++j)
        CHECK(back.algebra().bracket_basis(i, j) == t.algebra().bracket_basis(i, j));
    CHECK(back.algebra().labels() == t.algebra().labels());
  }
}

TEST_CASE("family params JSON round trip") {
  std::vector<FamilyParams> params = {
      LorentzParams{rlist({1, 2, -3})},
      IaParams{-1, 1, rlist({1, 0}), rlist({0, 1})},
      IIaParams{0, rlist({2}), rlist({1})},
      Nil22Params{-1},
      IIIParams{{IIIBlock::Kind::JordanMinus, rr(2), rr(0)}, rlist({1, 5})},
      IVParams{rr(3), rr(1), rlist({3, 7})},
  };
  for (const auto& p : params) {
    auto back = family_params_from_json_string(family_params_to_json_string(p));
    REQUIRE(back.has_value());
    CHECK(back->index() == p.index());
    // Build both and compare structure tensors exactly.
    SymmetricTriple t1 = build_family(p), t2 = build_family(*back);
    CHECK(t1.form().gram() == t2.form().gram());
    for (std::size_t i = 0; i < t1.dim_g(); ++i)
      for (std::size_t j = 0; j < t1.dim_g(); ++j)
        CHECK(t1.algebra().bracket_basis(i, j) == t2.algebra().bracket_basis(i, j));
  }
}

TEST_CASE("cli: normal-form | verify pipeline") {
  RunResult nf = run_cli("normal-form lorentz --f 1,2");
  CHECK(nf.exit_code == 0);
  std::string path = write_temp("tau4.json", nf.out);
  RunResult v = run_cli("verify " + path);
  CHECK(v.exit_code == 0);
  CHECK(v.out.find("PASS") != std::string::npos);

  // Direct pipe, as in the one-liner usage.
  RunResult piped{0, ""};
  std::string cmd = std::string(TRIPLEKIT_CLI_PATH) + " normal-form lorentz --f 1,2 | " +
                    TRIPLEKIT_CLI_PATH + " verify - 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[256];
  std::string out;
  while (fgets(buf, sizeof(buf), pipe)) out += buf;
  CHECK(WEXITSTATUS(pclose(pipe)) == 0);
  CHECK(out.find("PASS") != std::string::npos);
}

TEST_CASE("cli: isomorphic exit codes and certificate output") {
  std::string a = write_temp("t12.json", run_cli("normal-form lorentz --f 1,2").out);
  std::string b = write_temp("t24.json", run_cli("normal-form lorentz --f 2,4").out);
  std::string c = write_temp("t13.json", run_cli("normal-form lorentz --f 1,3").out);
  RunResult iso = run_cli("isomorphic " + a + " " + b);
  CHECK(iso.exit_code == 0);
  CHECK(iso.out.find("witness_rational_part") != std::string::npos);
  CHECK(run_cli("isomorphic " + a + " " + c).exit_code == 1);
}

TEST_CASE("cli: ricci prints the distinguished entry") {
  std::string path = write_temp("tau3.json", run_cli("normal-form lorentz --f 2").out);
  RunResult ric = run_cli("ricci " + path);
  CHECK(ric.exit_code == 0);
  CHECK(ric.out.find("Ric(Z*,Z*) = 2") != std::string::npos);
}

TEST_CASE("cli: metric-eval, center, decompose, invariants, enumerate") {
  RunResult me = run_cli("metric-eval --f 1,2 --point 1,1");
  CHECK(me.exit_code == 0);
  CHECK(me.out.find("-6") != std::string::npos);

  RunResult ce = run_cli("center --f -1,-4");
  CHECK(ce.exit_code == 0);
  CHECK(ce.out.find("Z_times_lattice") != std::string::npos);
  CHECK(run_cli("center --f 1,-1").out.find("Z_only") != std::string::npos);

  std::string path = write_temp("tau4b.json", run_cli("normal-form lorentz --f 1,2").out);
  RunResult de = run_cli("decompose " + path);
  CHECK(de.exit_code == 0);
  CHECK(de.out.find("\"dims\"") != std::string::npos);

  RunResult inv = run_cli("invariants " + path);
  CHECK(inv.exit_code == 0);
  CHECK(inv.out.find("\"w_nil_dim\": 0") != std::string::npos);

  RunResult en = run_cli("enumerate --p 2 --q 2 --values -1,1 --tensors b");
  CHECK(en.exit_code == 0);
  CHECK(en.out.find("\"class_count\": 2") != std::string::npos);
}

TEST_CASE("cli: malformed input exits 3") {
  std::string bad = write_temp("bad.json", "{ not json");
  CHECK(run_cli("verify " + bad).exit_code == 3);
  CHECK(run_cli("normal-form lorentz --f 1,0").exit_code == 3);
}

TEST_CASE("cli: families round trip through the isomorphic verb") {
  std::string p1 = write_temp(
      "ia1.json",
      run_cli("normal-form Ia --params "
              "'{\"eps_y\":1,\"r\":0,\"lambda1\":[\"1\",\"0\"],\"lambda2\":[\"0\",\"1\"]}'")
          .out);
  std::string p2 = write_temp(
      "ia2.json",
      run_cli("normal-form Ia --params "
              "'{\"eps_y\":1,\"r\":0,\"lambda1\":[\"0\",\"1\"],\"lambda2\":[\"-1\",\"0\"]}'")
          .out);
  CHECK(run_cli("isomorphic " + p1 + " " + p2).exit_code == 0);
}

TEST_CASE("least-nilpotent params round trip and decide via the CLI") {
  LeastNilpotentParams p{1, {rr(0)}, {1, -1}, {Vector{rr(1)}, Vector{rr(3)}}};
  auto back = family_params_from_json_string(family_params_to_json_string(FamilyParams{p}));
  REQUIRE(back.has_value());
  SymmetricTriple t1 = build_family(FamilyParams{p}), t2 = build_family(*back);
  CHECK(t1.form().gram() == t2.form().gram());

  std::string a = write_temp(
      "ln1.json",
      run_cli("normal-form least-nilpotent --params "
              "'{\"p\":1,\"b\":[\"0\"],\"epsilon\":[1],\"lambda\":[[\"1\"]]}'")
          .out);
  std::string b = write_temp(
      "ln2.json",
      run_cli("normal-form least-nilpotent --params "
              "'{\"p\":1,\"b\":[\"0\"],\"epsilon\":[1],\"lambda\":[[\"2\"]]}'")
          .out);
  CHECK(run_cli("isomorphic " + a + " " + b).exit_code == 0);
}
