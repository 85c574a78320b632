#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "afd/io.hpp"

using namespace afd;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
  const fs::path d = fs::temp_directory_path() / "afd_io_test";
  fs::create_directories(d);
  return d;
}

}  // namespace

TEST_CASE("git blob hash matches git hash-object") {
  // printf 'hello\n' | git hash-object --stdin
  CHECK(git_blob_hash("hello\n") == "ce013625030ba8dba906f756967f9e9ca394464a");
  CHECK(git_blob_hash("") == "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391");
}

TEST_CASE("field CSV round trip is exact") {
  const Grid g({2.0, 1.0}, {7, 5});
  Field f(g, 0.123456789012345);
  g.for_each_node([&](std::size_t k, std::span<const std::size_t> i) {
    f[k] = std::exp(-g.coord(0, i[0])) / 3.0 + 1e-300 * static_cast<double>(i[1]);
  });
  const fs::path p = temp_dir() / "field.csv";
  write_field_csv(p, f);
  const Field r = read_field_csv(p);
  CHECK(r.grid() == g);
  CHECK(r.time() == f.time());
  CHECK(max_distance(r, f) == 0.0);
  std::ifstream is(p);
  std::string line;
  std::getline(is, line);
  CHECK(line == "# dimension 2");
}

TEST_CASE("diagnostics CSV round trip") {
  RunDiagnostics d;
  d.m = {0.6, 0.8};
  d.norms_p = {2.0, 4.0};
  for (int k = 0; k < 3; ++k) {
    DiagnosticsRecord r;
    r.t = 0.1 * k;
    r.step = 10 * k;
    r.mass = 1.0 - 1e-3 * k;
    r.outflow = 1e-3 * k;
    r.min = 0.0;
    r.linf = 1.0 / (1 + k);
    r.lp = {0.5 / (1 + k), 0.25 / (1 + k)};
    r.energy = {0.01 * k, 0.02 * k, 0.0};
    r.power_integral = {0.3, 0.4, 0.0};
    d.records.push_back(r);
  }
  const fs::path p = temp_dir() / "diag.csv";
  write_diagnostics_csv(p, d);
  const RunDiagnostics r = read_diagnostics_csv(p, d.m);
  REQUIRE(r.records.size() == 3);
  CHECK(r.norms_p == d.norms_p);
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(r.records[k].t == d.records[k].t);
    CHECK(r.records[k].step == d.records[k].step);
    CHECK(r.records[k].lp == d.records[k].lp);
    CHECK(r.records[k].energy[1] == d.records[k].energy[1]);
    CHECK(r.records[k].power_integral[0] == d.records[k].power_integral[0]);
  }
  std::ostringstream os;
  write_diagnostics_csv(os, d);
  CHECK(os.str().substr(0, os.str().find('\n')) == "t,step,mass,outflow,min,linf,l2,l4,energy1,energy2,power1,power2");
}

TEST_CASE("exponent table JSON") {
  const ExponentSet e = compute_exponents(ModelParams{2, {0.6, 0.8}, false});
  const nlohmann::json j = exponent_table(e);
  CHECK(j["N"] == 2);
  CHECK(j["alpha"].get<double>() == doctest::Approx(10.0 / 7.0));
  CHECK(j["sigma"].size() == 2);
  const fs::path p = temp_dir() / "e.json";
  write_json(p, j);
  CHECK(read_json(p) == j);
}
