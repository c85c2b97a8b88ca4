#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "scenarios/scenarios.hpp"

using namespace chiraldecay::cli;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  REQUIRE(f.good());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "chiral_decay_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("identical configs produce byte-identical artifacts") {
  QuiescenceParams p;
  p.n = 6;
  p.p_b = 0.9;
  p.t_max = 20.0;
  p.dt = 0.1;
  p.sweep = true;

  const auto d1 = fresh_dir("det1");
  const auto d2 = fresh_dir("det2");
  run({p, {d1, true}});
  run({p, {d2, true}});
  for (const char* f : {"sigma_max.csv", "trace.csv", "tau_vs_n.csv", "sigma_max.svg"}) {
    CHECK(slurp(d1 / f) == slurp(d2 / f));
  }
}

TEST_CASE("trace.csv carries the contracted columns") {
  BlochParams p;
  p.n = 3;
  p.steps = 40;
  const auto dir = fresh_dir("bloch");
  run({p, {dir, false}});
  const std::string trace = slurp(dir / "trace.csv");
  CHECK(trace.rfind("t,re_c1,im_c1,re_c2,im_c2,re_c3,im_c3,survival\n", 0) == 0);
  CHECK(slurp(dir / "eigs.csv").rfind("re,im\n", 0) == 0);
  CHECK_FALSE(fs::exists(dir / "trace.svg"));  // svg disabled
}

TEST_CASE("scenario artifacts per contract") {
  {
    EffectiveParams p;
    p.t_max = 10.0;
    p.steps = 20;
    const auto dir = fresh_dir("eff");
    run({p, {dir, true}});
    for (const char* f : {"trace.csv", "eigs.csv", "dispersion.csv", "trace.svg",
                          "dispersion.svg"})
      CHECK(fs::exists(dir / f));
    CHECK(slurp(dir / "dispersion.csv").rfind("k,omega,v\n", 0) == 0);
  }
  {
    ManybodyParams p;
    p.n = 2;
    p.t_max = 10.0;
    p.steps = 20;
    const auto dir = fresh_dir("mb");
    run({p, {dir, false}});
    CHECK(slurp(dir / "manybody.csv").rfind("t,p_fermi,p_bose\n", 0) == 0);
  }
  {
    VerifyMarkovParams p;
    p.n = 2;
    p.grid_points = 2048;
    const auto dir = fresh_dir("vm");
    run({p, {dir, false}});
    CHECK(fs::exists(dir / "markov.csv"));
    CHECK(fs::exists(dir / "trace.csv"));
  }
}

TEST_CASE("quiescence sweep table covers the three reference levels") {
  QuiescenceParams p;
  p.n = 6;
  p.t_max = 20.0;
  p.dt = 0.1;
  p.sweep = true;
  const auto dir = fresh_dir("sweep");
  run({p, {dir, false}});
  const std::string tau = slurp(dir / "tau_vs_n.csv");
  CHECK(tau.rfind("n,tau_pb0996,tau_pb097,tau_pb05\n", 0) == 0);
  // rows for N = 4, 5, 6
  CHECK(std::count(tau.begin(), tau.end(), '\n') == 4);
}

TEST_CASE("invalid scenario parameters are rejected before writing") {
  EffectiveParams p;
  p.kind = "sideways";
  const auto dir = fresh_dir("bad");
  CHECK_THROWS_AS(run({p, {dir, false}}), chiraldecay::PreconditionError);
  CHECK_FALSE(fs::exists(dir / "trace.csv"));
}
