#include <doctest.h>

#include <json.hpp>

#include <cmath>
#include <filesystem>

#include "hclab/errors.hpp"
#include "hclab/io.hpp"

using namespace hclab;
using nlohmann::json;

TEST_CASE("field CSV round trip is exact") {
  const auto g = make_symmetric_grid(3, 12.0, 256);
  const auto u = RadialField::sample(g, [](double r) { return std::exp(-r) / (1 + r * r); });
  const auto text = field_csv(u);
  CHECK(text.rfind("r,value\n", 0) == 0);
  const auto back = parse_field_csv(text, 3);
  CHECK(back.grid().size() == 256);
  CHECK(back.grid().symmetric());
  for (int i = 0; i < 256; ++i) {
    REQUIRE(back[i] == u[i]);
    REQUIRE(back.grid().r(i) == doctest::Approx(g->r(i)).epsilon(1e-15));
  }
  const auto asym = RadialField::zeros(make_grid(3, -8.0, 10.0, 64));
  CHECK_FALSE(parse_field_csv(field_csv(asym), 3).grid().symmetric());

  CHECK_THROWS_AS(parse_field_csv("r,value\n1,2\nfoo\n", 3), Error);
  CHECK_THROWS_AS(parse_field_csv("r,value\n1,2\n", 3), Error);
}

TEST_CASE("trace CSV") {
  std::vector<TraceRow> rows{{0, 7.5, 0.1}, {1, 7.25, 1e-7}};
  const auto text = trace_csv(rows);
  CHECK(text.rfind("iter,rayleigh,residual\n", 0) == 0);
  CHECK(text.find("\n1,7.25,") != std::string::npos);
}

TEST_CASE("JSON documents carry the schema version") {
  const auto p = make_params(3, 2.0, 0.16);
  const auto pj = json::parse(params_json(p));
  CHECK(pj.at("schema_version") == schema_version);
  CHECK(pj.at("N") == 3);
  CHECK(pj.at("beta").get<double>() == p.beta);

  EnergyReport rep{1.25, 0.5, 1.5, 1e-9};
  const auto e = energy_json(rep);
  CHECK(json::parse(e).at("schema_version") == schema_version);
  const auto back = parse_energy_json(e);
  CHECK(back.phi == rep.phi);
  CHECK(back.dterm == rep.dterm);
  CHECK(back.rayleigh == rep.rayleigh);
  CHECK(back.el_residual_norm == rep.el_residual_norm);
  CHECK_THROWS_AS(parse_energy_json("{\"phi\": 1}"), Error);
  CHECK_THROWS_AS(parse_energy_json("not json"), Error);

  const auto g = make_symmetric_grid(3, 12.0, 64);
  SolveResult r(RadialField::zeros(g));
  r.theta = 0.16;
  r.s_theta = 3.9;
  r.status = SolveStatus::converged;
  r.trace = {{0, 4.0, 1.0}};
  const auto sj = json::parse(solve_json(p, r));
  CHECK(sj.at("schema_version") == schema_version);
  CHECK(sj.at("status") == "converged");
  CHECK(sj.at("s_theta").get<double>() == 3.9);

  const std::vector<SolveResult> legs{r, r};
  CHECK(json::parse(solve_sequence_json(p, legs)).at("schema_version") == schema_version);

  DecayFit fit;
  fit.inner.slope = -0.2;
  CHECK(json::parse(decay_fit_json(p, fit)).at("schema_version") == schema_version);
  CHECK(json::parse(bound_json(BoundCertificate{})).at("schema_version") == schema_version);

  const std::vector<CheckRecord> recs{{"a", {{"n", 64}}, 1e-9, 1e-8, true, ""}, {"b", {}, NAN, 1.0, false, "threw"}};
  const auto cj = json::parse(checks_json(recs, "all"));
  CHECK(cj.at("schema_version") == schema_version);
  CHECK(cj.at("suite") == "all");
  CHECK(cj.at("checks").size() == 2);
  CHECK(cj.at("checks")[1].at("value").is_null());
}

TEST_CASE("text files") {
  const auto dir = std::filesystem::temp_directory_path() / "hclab_io_test" / "nested";
  std::filesystem::remove_all(dir.parent_path());
  write_text(dir / "a.txt", "hello\n");
  CHECK(read_text(dir / "a.txt") == "hello\n");
  CHECK_THROWS_AS(read_text(dir / "missing.txt"), Error);
  std::filesystem::remove_all(dir.parent_path());
}
