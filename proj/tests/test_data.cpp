#include <cstdio>
#include <filesystem>
#include <unistd.h>
#include <fstream>
#include <map>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "routeio/data.hpp"
#include "routeio/synth.hpp"

using namespace routeio;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("routeio_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  static int counter() {
    static int c = 0;
    return c++;
  }
  std::string file(const std::string& name) const {
    return (path / name).string();
  }
};

}  // namespace

TEST_SUITE("data") {

TEST_CASE("dataset round-trips through the three-file layout") {
  ZoneFixture fixture = make_zone_fixture(4, 77);
  TempDir dir;
  save_dataset(fixture.bundle, dir.file("routes.json"),
               dir.file("travel_times.json"), dir.file("actual_sequences.json"));
  DatasetBundle loaded =
      load_dataset(dir.file("routes.json"), dir.file("travel_times.json"),
                   dir.file("actual_sequences.json"));
  REQUIRE(loaded.route_count() == fixture.bundle.route_count());
  const auto& orig = fixture.bundle.by_depot.at("DF1");
  const auto& back = loaded.by_depot.at("DF1");
  REQUIRE(back.size() == orig.size());
  // The loader may store stops in a different order than the saver, so
  // compare by stop id, not by index.
  auto id_of = [](const RouteRecord& r, int idx) { return r.stops[idx].id; };
  for (size_t i = 0; i < orig.size(); ++i) {
    CHECK(back[i].route_id == orig[i].route_id);
    REQUIRE(back[i].stops.size() == orig[i].stops.size());
    REQUIRE(back[i].actual_sequence.size() == orig[i].actual_sequence.size());
    for (size_t k = 0; k < orig[i].actual_sequence.size(); ++k) {
      CHECK(id_of(back[i], back[i].actual_sequence[k]) ==
            id_of(orig[i], orig[i].actual_sequence[k]));
    }
    std::map<std::string, int> orig_idx, back_idx;
    for (size_t s = 0; s < orig[i].stops.size(); ++s) {
      orig_idx[orig[i].stops[s].id] = static_cast<int>(s);
    }
    for (size_t s = 0; s < back[i].stops.size(); ++s) {
      back_idx[back[i].stops[s].id] = static_cast<int>(s);
    }
    REQUIRE(orig_idx.size() == back_idx.size());
    for (const auto& [id, oi] : orig_idx) {
      REQUIRE(back_idx.count(id) == 1);
      const int bi = back_idx[id];
      CHECK(back[i].stops[bi].zone == orig[i].stops[oi].zone);
      CHECK(back[i].stops[bi].lat == doctest::Approx(orig[i].stops[oi].lat));
      for (const auto& [id2, oj] : orig_idx) {
        CHECK(back[i].travel(bi, back_idx[id2]) ==
              doctest::Approx(orig[i].travel(oi, oj)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("sequence file referencing an unknown stop skips the route") {
  ZoneFixture fixture = make_zone_fixture(2, 3);
  TempDir dir;
  save_dataset(fixture.bundle, dir.file("routes.json"),
               dir.file("travel_times.json"), dir.file("actual_sequences.json"));

  // Corrupt one route's sequence entry.
  nlohmann::json seqs;
  {
    std::ifstream in(dir.file("actual_sequences.json"));
    in >> seqs;
  }
  auto& first = *seqs.begin();
  first["no_such_stop"] = 0;
  {
    std::ofstream out(dir.file("actual_sequences.json"));
    out << seqs;
  }

  DatasetBundle loaded =
      load_dataset(dir.file("routes.json"), dir.file("travel_times.json"),
                   dir.file("actual_sequences.json"));
  CHECK(loaded.route_count() == 1);
  CHECK(loaded.provenance.skipped == 1);
  CHECK(loaded.provenance.warnings.size() >= 1);
}

TEST_CASE("stops lacking zones are imputed from the route's centers") {
  ZoneFixture fixture = make_zone_fixture(1, 9);
  RouteRecord& route = fixture.bundle.by_depot.at("DF1")[0];
  // Remember the zone, then drop it.
  const int victim = 1;
  const std::string expected = *route.stops[victim].zone;
  route.stops[victim].zone.reset();

  TempDir dir;
  save_dataset(fixture.bundle, dir.file("routes.json"),
               dir.file("travel_times.json"), dir.file("actual_sequences.json"));
  DatasetBundle loaded =
      load_dataset(dir.file("routes.json"), dir.file("travel_times.json"),
                   dir.file("actual_sequences.json"));
  const RouteRecord& back = loaded.by_depot.at("DF1")[0];
  REQUIRE(back.stops[victim].zone.has_value());
  // The stop sits on its own zone's center (plus tiny jitter), so imputation
  // by nearest center recovers it.
  CHECK(*back.stops[victim].zone == expected);
}

TEST_CASE("missing file errors mention the path") {
  bool threw = false;
  try {
    load_dataset("/nonexistent/routes.json", "/nonexistent/t.json",
                 "/nonexistent/s.json");
  } catch (const std::exception& e) {
    threw = true;
    CHECK(std::string(e.what()).find("/nonexistent/routes.json") !=
          std::string::npos);
  }
  CHECK(threw);
}

TEST_CASE("proposed sequences round-trip") {
  std::map<std::string, std::vector<std::string>> seqs = {
      {"R0", {"S", "a", "b"}}, {"R1", {"S", "c"}}};
  TempDir dir;
  save_sequences(seqs, dir.file("pred.json"));
  CHECK(load_sequences(dir.file("pred.json")) == seqs);
}

TEST_CASE("models round-trip at full precision") {
  ZoneFixture fixture = make_zone_fixture(3, 15);
  std::map<std::string, ZoneGraphModel> models = {{"DF1", fixture.planted}};
  TempDir dir;
  save_models(models, dir.file("model.json"));
  std::map<std::string, ZoneGraphModel> back = load_models(dir.file("model.json"));
  REQUIRE(back.count("DF1") == 1);
  const ZoneGraphModel& m = back.at("DF1");
  CHECK(m.zones.nodes() == fixture.planted.zones.nodes());
  CHECK(m.station_node == fixture.planted.station_node);
  CHECK(m.theta.values() == fixture.planted.theta.values());
  CHECK(m.penalties.values() == fixture.planted.penalties.values());
  REQUIRE(m.centers.size() == fixture.planted.centers.size());
  for (size_t i = 0; i < m.centers.size(); ++i) {
    CHECK(m.centers[i].lat == fixture.planted.centers[i].lat);
    CHECK(m.centers[i].lng == fixture.planted.centers[i].lng);
  }
}

TEST_CASE("model loading rejects tampered files") {
  ZoneFixture fixture = make_zone_fixture(1, 1);
  std::map<std::string, ZoneGraphModel> models = {{"DF1", fixture.planted}};
  TempDir dir;
  save_models(models, dir.file("model.json"));

  nlohmann::json doc;
  {
    std::ifstream in(dir.file("model.json"));
    in >> doc;
  }
  SUBCASE("version mismatch") {
    doc["version"] = 999;
    std::ofstream(dir.file("model.json")) << doc;
    CHECK_THROWS(load_models(dir.file("model.json")));
  }
  SUBCASE("negative weight") {
    doc["models"]["DF1"]["weights"][0] = -1.0;
    std::ofstream(dir.file("model.json")) << doc;
    CHECK_THROWS(load_models(dir.file("model.json")));
  }
  SUBCASE("weight count conflicts with the zone list") {
    doc["models"]["DF1"]["weights"].push_back(0.5);
    std::ofstream(dir.file("model.json")) << doc;
    CHECK_THROWS(load_models(dir.file("model.json")));
  }
}

TEST_CASE("synthetic generation is deterministic and self-consistent") {
  SynthConfig cfg;
  cfg.kind = ProblemKind::rtsp;
  cfg.nodes = 9;
  cfg.train_count = 8;
  cfg.test_count = 4;
  cfg.subset_min = 4;
  cfg.subset_max = 6;
  cfg.rng_seed = 12;
  SynthDataset a = generate_synthetic(cfg);
  SynthDataset b = generate_synthetic(cfg);
  CHECK(a.hidden.values() == b.hidden.values());
  REQUIRE(a.train.size() == 8);
  REQUIRE(a.test.size() == 4);
  for (size_t i = 0; i < a.train.size(); ++i) {
    CHECK(a.train[i].response == b.train[i].response);
    CHECK(a.train[i].signal.required == b.train[i].signal.required);
    // Every response satisfies its own signal.
    CHECK_NOTHROW(
        check_response_feasible(a.train[i].signal, a.train[i].response, a.universe));
  }
}

TEST_CASE("synthetic scvrp and vrptw responses are feasible") {
  SynthConfig cfg;
  cfg.kind = ProblemKind::scvrp;
  cfg.nodes = 6;
  cfg.train_count = 5;
  cfg.test_count = 0;
  cfg.capacity = 3.0;
  cfg.vehicles = 2;
  cfg.rng_seed = 8;
  SynthDataset s = generate_synthetic(cfg);
  for (const auto& ex : s.train) {
    CHECK_NOTHROW(check_response_feasible(ex.signal, ex.response, s.universe));
  }

  cfg.kind = ProblemKind::vrptw;
  cfg.nodes = 6;
  SynthDataset v = generate_synthetic(cfg);
  for (const auto& ex : v.train) {
    CHECK_NOTHROW(check_response_feasible(ex.signal, ex.response, v.universe));
  }
}

TEST_CASE("demo instance matches its stated parameters") {
  ScvrpDemo demo = make_scvrp_demo();
  CHECK(demo.universe.size() == 6);
  CHECK(demo.example.signal.vehicles == 2);
  CHECK(demo.example.signal.capacity == 3.0);
  CHECK(demo.example.signal.demands ==
        std::vector<double>{1, 1, 1, 1, 1});
  CHECK_NOTHROW(check_response_feasible(demo.example.signal,
                                        demo.example.response, demo.universe));
  // Clustered geometry: customers 1-3 share a route, 4-5 the other.
  const NodeUniverse& u = demo.universe;
  CHECK(demo.example.response.uses(u.edge_index(4, 5)));
  CHECK(!demo.example.response.uses(u.edge_index(3, 4)));
}

}  // TEST_SUITE
