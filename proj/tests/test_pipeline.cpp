#include "fixtures.hpp"
#include "trusslock/pipeline.hpp"

#include <doctest.h>

using namespace trusslock;
using nlohmann::json;

TEST_CASE("empty config yields the defaults")
{
  const RunConfig c = RunConfig::from_json(json::object());
  const RunConfig d = RunConfig::defaults();
  CHECK(c.to_json() == d.to_json());
  CHECK(c.revolve_radius == 3.0);
  CHECK(c.side == 1.0);
  CHECK(c.curves.valence == 3);
  CHECK(c.resolution == 64);
  CHECK(c.seed == 1);
  CHECK(c.policy == KeyPolicy::EdgeKey);
}

TEST_CASE("config round trips through JSON")
{
  json j = {{"torus", {{"R", 4.0}, {"s", 1.5}}},
            {"curves", {{"n", 4}, {"samples", 120}}},
            {"grid", {{"kind", "square"}, {"dims", {2, 3}}, {"edge_length", 14.0}}},
            {"resolution", 24},
            {"seed", 9},
            {"policy", "loose-key"},
            {"threads", 2}};
  const RunConfig c = RunConfig::from_json(j);
  CHECK(c.revolve_radius == 4.0);
  CHECK(c.curves.valence == 4);
  CHECK(c.curves.amplitude == doctest::Approx(0.45));
  CHECK(c.grid_dims == std::array<int, 2>{2, 3});
  CHECK(c.policy == KeyPolicy::LooseKey);
  CHECK(RunConfig::from_json(c.to_json()).to_json() == c.to_json());
}

TEST_CASE("bad configs raise ConfigError")
{
  CHECK_THROWS_AS(RunConfig::from_json(json::array()), ConfigError);
  CHECK_THROWS_AS(RunConfig::from_json({{"torus", {{"R", 0.2}}}}), ConfigError);
  CHECK_THROWS_AS(RunConfig::from_json({{"resolution", "high"}}), ConfigError);
  CHECK_THROWS_AS(RunConfig::from_json({{"policy", "glue"}}), ConfigError);
  CHECK_THROWS_AS(RunConfig::from_json({{"grid", {{"kind", "triangle"}}}}), ConfigError);
  CHECK_THROWS_AS(RunConfig::from_json({{"grid", {{"edge_length", 5.0}}}}), ConfigError);
  CHECK_THROWS_AS(RunConfig::from_json({{"curves", {{"gap_deg", 0.0}}}}), ConfigError);
  CHECK_THROWS_AS(RunConfig::from_json({{"threads", 0}}), ConfigError);
}

TEST_CASE("vertex build is independent of thread count")
{
  RunConfig c = RunConfig::defaults();
  c.resolution = 12;
  c.threads = 1;
  const VertexBuild a = build_vertex(c);
  c.threads = 3;
  const VertexBuild b = build_vertex(c);
  CHECK(a.field.labels == b.field.labels);
  CHECK(a.split.half_a == b.split.half_a);
  CHECK(a.split.peg == b.split.peg);
}

TEST_CASE("assemblies list their pieces in removal-test order")
{
  const VertexBuild& vb = fixture::vertex();
  const Assembly u = unsplit_assembly(vb);
  REQUIRE(u.pieces.size() == 3);
  CHECK(u.pieces[0].id == "connector_0");
  const Assembly s = split_assembly(vb);
  REQUIRE(s.pieces.size() == 5);
  CHECK(s.pieces[0].id == "peg");
  CHECK(s.pieces[1].id == "half_a");
  CHECK(s.pieces[2].id == "half_b");
  CHECK_NOTHROW(s.validate());
}

TEST_CASE("vertex verification holds for n = 3 and n = 4")
{
  for (int n : {3, 4}) {
    const VertexVerification v = verify_vertex(fixture::vertex(16, n), 1, 4);
    CAPTURE(n);
    CHECK(v.unsplit_interlocked);
    CHECK(v.unsplit_stuck);
    CHECK(v.peg_only_radial);
    CHECK(v.halves_locked_by_peg);
    CHECK(v.halves_free_without_peg);
    CHECK(v.order_peg_halves_rest);
    CHECK(v.holds());
    CHECK(v.to_json()["holds"] == true);
  }
}

TEST_CASE("grid selection follows the config")
{
  RunConfig c = RunConfig::defaults();
  c.grid_dims = {3, 3};
  CHECK(make_grid(c).vertex_count() == make_hex_grid(3, 3, 10.0, c.torus()).vertex_count());
  c.grid_kind = "square";
  c.grid_dims = {2, 2};
  CHECK(make_grid(c).vertex_count() == 9);
}

TEST_CASE("design valence defaults from the grid kind")
{
  CHECK(RunConfig::from_json({{"grid", {{"kind", "square"}}}}).curves.valence == 4);
  CHECK(RunConfig::from_json({{"grid", {{"kind", "hex"}}}}).curves.valence == 3);
  CHECK(RunConfig::from_json({{"grid", {{"kind", "square"}}}, {"curves", {{"n", 3}}}}).curves.valence == 3);
}
