#include <cstdio>
#include <filesystem>
#include <sstream>

#include "doctest.h"

#include "cbpd/cli.hpp"
#include "cbpd/io.hpp"

using namespace cbpd;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string fixture(const std::string& name) { return std::string(CBPD_FIXTURES) + "/" + name; }

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("cbpd_unit_" + name)).string();
}

}  // namespace

TEST_CASE("expected-rank") {
  auto r = run({"expected-rank", "--q", "2", "--n", "3"});
  CHECK(r.code == kOk);
  CHECK(r.out == "8\n");
  CHECK(run({"expected-rank", "--q", "4", "--n", "3"}).code == kUsage);
}

TEST_CASE("build then homology") {
  const auto path = temp_path("t.fct");
  CHECK(run({"build", "--provider", "subspace", "--q", "2", "--n", "2", "--emit", "cb", "--out", path}).code == kOk);
  auto h = run({"homology", "--facets", path});
  CHECK(h.code == kOk);
  CHECK(h.out == "H~0 rank=0\nH~1 rank=1\n");
  auto m = run({"homology", "--facets", path, "--mod", "2"});
  CHECK(m.out == "H~0 rank=0\nH~1 rank=1\n");
  CHECK(run({"homology", "--facets", path, "--mod", "4"}).code == kUsage);
  std::filesystem::remove(path);
}

TEST_CASE("projective plane report") {
  auto h = run({"homology", "--facets", fixture("rp2.fct")});
  CHECK(h.out == "H~0 rank=0\nH~1 rank=0 torsion=2\nH~2 rank=0\n");
  auto m = run({"homology", "--facets", fixture("rp2.fct"), "--mod", "2"});
  CHECK(m.out == "H~0 rank=0\nH~1 rank=1\nH~2 rank=1\n");
}

TEST_CASE("verify equivalence on U(4,2)") {
  auto r = run({"verify", "equivalence", "--provider", "matroid-uniform", "--n", "4", "--k", "2"});
  CHECK(r.code == kOk);
  CHECK(r.out.find("PASS equivalence") != std::string::npos);
  CHECK(r.out.find("# CB\nH~0 rank=0\nH~1 rank=3\n# PD\nH~0 rank=0\nH~1 rank=3\n") != std::string::npos);
}

TEST_CASE("violations exit with 1") {
  auto ep = run({"verify", "ep", "--provider", "files", "--poset", fixture("nonep.poset"), "--frames",
                 fixture("nonep.frames")});
  CHECK(ep.code == kViolation);
  CHECK(ep.out == "FAIL ep sigma={0} sigma'={2}\n");
  CHECK_FALSE(ep.err.empty());
  auto u = run({"verify", "u-iff-ep", "--provider", "files", "--poset", fixture("nonep.poset"), "--frames",
                fixture("nonep.frames")});
  CHECK(u.code == kOk);
  CHECK(u.out == "PASS u-iff-ep ep=false non-face={0,2}\n");
  auto f = run({"verify", "frames", "--provider", "files", "--poset", fixture("nonep.poset"), "--frames",
                fixture("bad.frames")});
  CHECK(f.code == kViolation);
  CHECK(f.out.rfind("FAIL frames", 0) == 0);
  auto s = run({"verify", "spherical", "--provider", "matroid-uniform", "--n", "5", "--k", "3"});
  CHECK(s.code == kViolation);
  CHECK(s.out.find("FAIL spherical homology in degrees {2} expected only 3") != std::string::npos);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run({}).code == kUsage);
  CHECK(run({"bogus"}).code == kUsage);
  CHECK(run({"verify", "nope", "--provider", "subspace", "--q", "2", "--n", "2"}).code == kUsage);
  CHECK(run({"verify", "ep", "--provider", "subspace", "--q", "2"}).code == kUsage);
  CHECK(run({"verify", "ep", "--provider", "subspace", "--q", "2", "--n", "2", "--poset", "x"}).code == kUsage);
  CHECK(run({"verify", "ep", "--provider", "files", "--poset", fixture("nonep.poset"), "--q", "2"}).code ==
        kUsage);
  CHECK(run({"verify", "bounds", "--provider", "subspace", "--q", "2", "--n", "2", "--seed", "zz"}).code == kUsage);
  CHECK(run({"homology", "--facets", "/nonexistent.fct"}).code == kUsage);
  CHECK(run({"build", "--provider", "matroid-bases", "--bases", fixture("rp2.fct"), "--emit", "cb", "--out",
             temp_path("x")})
            .code == kUsage);
  CHECK(run({"--help"}).code == kOk);
}

TEST_CASE("resource errors exit with 3") {
  CHECK(run({"verify", "dims", "--provider", "subspace", "--q", "2", "--n", "3", "--budget", "5"}).code ==
        kResource);
}

TEST_CASE("bases files") {
  auto r = run({"verify", "equivalence", "--provider", "matroid-bases", "--bases", fixture("u42.bases")});
  CHECK(r.code == kOk);
  CHECK(r.out.find("H~1 rank=3") != std::string::npos);
}

TEST_CASE("poset export round trip") {
  const auto out = temp_path("gf23.poset");
  const auto again = temp_path("gf23b.poset");
  REQUIRE(run({"build", "--provider", "subspace", "--q", "2", "--n", "3", "--emit", "poset", "--out", out}).code ==
          kOk);
  REQUIRE(run({"build", "--provider", "files", "--poset", out, "--frames", out + ".frames", "--emit", "poset",
               "--out", again})
              .code == kOk);
  CHECK(read_file(out) == read_file(again));
  CHECK(read_file(out + ".frames") == read_file(again + ".frames"));
  auto a = run({"verify", "spherical", "--provider", "subspace", "--q", "2", "--n", "3"});
  auto b = run({"verify", "equivalence", "--provider", "files", "--poset", out, "--frames", out + ".frames"});
  CHECK(a.code == kOk);
  CHECK(b.code == kOk);
  for (const auto& p : {out, out + ".frames", again, again + ".frames"}) std::filesystem::remove(p);
}

TEST_CASE("output does not depend on the thread count") {
  const std::vector<std::string> base{"verify", "bounds", "--provider", "subspace", "--q", "2", "--n", "3",
                                      "--sample", "2000"};
  auto one = base;
  one.insert(one.begin(), {"--threads", "1"});
  auto four = base;
  four.insert(four.begin(), {"--threads", "4"});
  auto a = run(one);
  auto b = run(four);
  CHECK(a.code == kOk);
  CHECK(a.out == b.out);
  CHECK(a.out.rfind("# bounds sample 2000 seed 0xC0FFEE\n", 0) == 0);
  auto c = run({"verify", "m-in-pd", "--provider", "subspace", "--q", "2", "--n", "3", "--seed", "7"});
  auto d = run({"--threads", "3", "verify", "m-in-pd", "--provider", "subspace", "--q", "2", "--n", "3", "--seed", "7"});
  CHECK(c.out == d.out);
}

TEST_CASE("dims prints skip lines when EP fails") {
  auto r = run({"verify", "dims", "--provider", "symplectic", "--q", "2", "--n", "2"});
  CHECK(r.code == kOk);
  CHECK(r.out.find("SKIP dims") != std::string::npos);
  CHECK(r.out.find("PASS dims dim CB = 3^n - 2") != std::string::npos);
  CHECK(r.out.find("PASS dims dim PD = 4n - 3") != std::string::npos);
}
