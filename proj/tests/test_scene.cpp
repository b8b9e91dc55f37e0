#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <map>
#include <numeric>

#include "navsim/nav.hpp"
#include "navsim/scene.hpp"
#include "oracles.hpp"

namespace navsim {
namespace {

const std::filesystem::path kFixtures = NAVSIM_FIXTURE_DIR;

House one_room() { return load_house(kFixtures / "one_room.house.json"); }

bool has_violation(const std::vector<Violation>& v, std::string_view code, std::string_view entity) {
  return std::any_of(v.begin(), v.end(), [&](const Violation& x) { return x.code == code && x.entity == entity; });
}

// Union-find over rooms joined by doors: each door midpoint is pushed half a
// metre to both sides of its wall and looked up by point-in-polygon.
int door_components(const House& h) {
  std::vector<int> parent(h.rooms.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto room_of = [&](Vec2 p) {
    for (std::size_t r = 0; r < h.rooms.size(); ++r) {
      if (point_in_polygon(h.rooms[r].floor_polygon, p)) return static_cast<int>(r);
    }
    return -1;
  };
  for (const Opening& o : h.openings) {
    if (o.kind != OpeningKind::door) continue;
    const Wall* w = h.find_wall(o.wall_ref);
    const Vec2 dir = normalized(w->b - w->a);
    const Vec2 mid = w->a + (w->b - w->a) * (0.5 * (o.t0 + o.t1));
    const Vec2 n{-dir.z, dir.x};
    const int a = room_of(mid + n * 0.3);
    const int b = room_of(mid - n * 0.3);
    if (a >= 0 && b >= 0) parent[find(a)] = find(b);
  }
  int roots = 0;
  for (std::size_t r = 0; r < h.rooms.size(); ++r) roots += find(static_cast<int>(r)) == static_cast<int>(r);
  return roots;
}

TEST(SceneIo, LoadsOneRoomFixture) {
  const House h = one_room();
  EXPECT_EQ(h.rooms.size(), 1u);
  EXPECT_EQ(h.walls.size(), 4u);
  EXPECT_EQ(h.openings.size(), 1u);
  EXPECT_TRUE(h.objects.empty());
  EXPECT_TRUE(validate_house(h).empty());
}

TEST(SceneIo, DanglingWallReferenceNamesTheId) {
  try {
    load_house(kFixtures / "dangling_wall_ref.house.json");
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_TRUE(has_violation(e.violations(), "dangling_wall_ref", "w9"));
  }
}

TEST(SceneIo, MalformedDocumentsAreParseErrors) {
  EXPECT_THROW(parse_house("{not json"), ParseError);
  EXPECT_THROW(parse_house(R"({"id":"x"})"), ParseError);
  EXPECT_THROW(load_house(kFixtures / "missing.house.json"), ParseError);
}

TEST(SceneIo, RoundTripOverGeneratedHouses) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const House h = generate_house(seed, 1 + static_cast<int>(seed % 5), seed % 2 == 0);
    const std::string text = serialize_house(h);
    const House back = parse_house(text);
    EXPECT_EQ(back, h) << "seed " << seed;
    EXPECT_EQ(serialize_house(back), text) << "seed " << seed;
  }
}

TEST(SceneIo, SaveLoadFile) {
  const House h = generate_house(17, 3, true);
  const auto path = std::filesystem::temp_directory_path() / "navsim_roundtrip.house.json";
  save_house(h, path);
  EXPECT_EQ(load_house(path), h);
  std::filesystem::remove(path);
}

TEST(Validate, ObjectOutsideBounds) {
  House h = one_room();
  SceneObject obj;
  obj.id = "stray";
  obj.category = Category::chair;
  obj.footprint = {{5.5, 2.0}, {0.2, 0.2}, 0.0};
  obj.height = 0.8;
  h.objects.push_back(obj);
  const auto v = validate_house(h);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].code, "object_out_of_bounds");
  EXPECT_EQ(v[0].entity, "stray");
}

TEST(Validate, RoomsWithoutConnectingDoor) {
  House h = one_room();
  h.openings.clear();
  h.bounds.max = {9.0, 5.0};
  Room r1;
  r1.id = "r1";
  r1.category = RoomClass::kitchen;
  r1.floor_polygon = rectangle_polygon({4, 0}, {8, 4});
  h.rooms.push_back(r1);
  for (auto [id, a, b] : {std::tuple{"w4", Vec2{4, 0}, Vec2{8, 0}}, {"w5", Vec2{8, 0}, Vec2{8, 4}},
                          {"w6", Vec2{8, 4}, Vec2{4, 4}}}) {
    Wall w;
    w.id = id;
    w.a = a;
    w.b = b;
    h.walls.push_back(w);
  }
  const auto v = validate_house(h);
  EXPECT_TRUE(std::any_of(v.begin(), v.end(), [](const Violation& x) { return x.code == "rooms_disconnected"; }));
  EXPECT_EQ(door_components(h), 2);
  EXPECT_FALSE(rooms_connected(h));
}

TEST(Generate, SingleEmptyRoom) {
  const House h = generate_house(7, 1, false);
  EXPECT_EQ(h.rooms.size(), 1u);
  EXPECT_TRUE(h.objects.empty());
  EXPECT_GE(std::count_if(h.openings.begin(), h.openings.end(),
                          [](const Opening& o) { return o.kind == OpeningKind::door; }),
            1);
  EXPECT_TRUE(validate_house(h).empty());
}

TEST(Generate, PureFunctionOfArguments) {
  EXPECT_EQ(generate_house(7, 3, true), generate_house(7, 3, true));
  EXPECT_EQ(serialize_house(generate_house(99, 5, true)), serialize_house(generate_house(99, 5, true)));
  EXPECT_NE(generate_house(7, 3, true), generate_house(8, 3, true));
}

TEST(Generate, FiveFurnishedRoomsMutuallyReachable) {
  const House h = generate_house(7, 5, true);
  EXPECT_EQ(h.rooms.size(), 5u);
  EXPECT_FALSE(h.objects.empty());
  EXPECT_EQ(door_components(h), 1);
  EXPECT_TRUE(rooms_connected(h));
}

TEST(Generate, RejectsZeroRooms) { EXPECT_THROW(generate_house(1, 0, false), GenerationError); }

TEST(Generate, ValidAndDoorConnectedAcrossSeeds) {
  for (std::uint64_t seed = 100; seed < 160; ++seed) {
    const int n = 1 + static_cast<int>(seed % 5);
    const House h = generate_house(seed, n, true);
    EXPECT_TRUE(validate_house(h).empty()) << seed;
    EXPECT_EQ(static_cast<int>(h.rooms.size()), n);
    EXPECT_EQ(door_components(h), 1) << seed;
  }
}

// Every door cell lies in one connected free component of the grid.
TEST(Generate, FurnishedHousesKeepCorridorsThroughDoors) {
  for (std::uint64_t seed = 200; seed < 230; ++seed) {
    const House h = generate_house(seed, 2 + static_cast<int>(seed % 4), true);
    const OccupancyGrid g = build_grid(h, 0.1, 0.1);
    const auto doors = door_segments(h);
    ASSERT_FALSE(doors.empty());
    const std::vector<std::uint8_t> blocked(g.cells().begin(), g.cells().end());
    const Cell first = g.geometry().cell_at(doors[0].midpoint());
    ASSERT_TRUE(g.free(first)) << seed;
    const auto seen = oracle::flood(blocked, g.width(), g.height(), first.i, first.j);
    for (const auto& d : doors) {
      const Cell c = g.geometry().cell_at(d.midpoint());
      EXPECT_TRUE(g.free(c)) << seed;
      EXPECT_TRUE(seen[g.geometry().index(c)]) << seed;
    }
  }
}

TEST(Variation, RemoveCategoryKeepsEverythingElse) {
  const House h = generate_house(21, 4, true);
  VariationSpec v;
  v.remove_categories = {"chair"};
  const House out = apply_variation(h, v);
  EXPECT_EQ(std::count_if(out.objects.begin(), out.objects.end(),
                          [](const SceneObject& o) { return o.category == Category::chair; }),
            0);
  std::vector<SceneObject> expected;
  std::copy_if(h.objects.begin(), h.objects.end(), std::back_inserter(expected),
               [](const SceneObject& o) { return o.category != Category::chair; });
  EXPECT_EQ(out.objects, expected);
  EXPECT_EQ(out.walls, h.walls);
  EXPECT_EQ(out.rooms, h.rooms);
  EXPECT_EQ(out.openings, h.openings);
}

TEST(Variation, RetextureIsDeterministicAndGeometryPreserving) {
  const House h = generate_house(22, 3, true);
  VariationSpec v;
  v.retexture_seed = 3;
  const House a = apply_variation(h, v);
  const House b = apply_variation(h, v);
  EXPECT_EQ(a, b);
  ASSERT_EQ(a.objects.size(), h.objects.size());
  for (std::size_t k = 0; k < h.objects.size(); ++k) {
    EXPECT_EQ(a.objects[k].id, h.objects[k].id);
    EXPECT_EQ(a.objects[k].footprint, h.objects[k].footprint);
    EXPECT_EQ(a.objects[k].height, h.objects[k].height);
    EXPECT_EQ(a.objects[k].base_height, h.objects[k].base_height);
  }
  for (std::size_t k = 0; k < h.walls.size(); ++k) {
    EXPECT_EQ(a.walls[k].a, h.walls[k].a);
    EXPECT_EQ(a.walls[k].b, h.walls[k].b);
  }
  EXPECT_EQ(a.rooms, h.rooms);
}

TEST(Variation, UnknownCategoryRejected) {
  VariationSpec v;
  v.remove_categories = {"spaceship"};
  EXPECT_THROW(apply_variation(one_room(), v), ConfigError);
}

TEST(Scene, SolidPiecesSplitAroundDoor) {
  const House h = one_room();
  const auto pieces = solid_pieces(h);
  // w0 splits into left, right and a lintel only if the door is shorter than
  // the wall; the fixture door reaches the ceiling, so two pieces.
  const auto n_w0 = std::count_if(pieces.begin(), pieces.end(), [](const SolidPiece& p) { return p.is_wall && p.source == 0; });
  EXPECT_EQ(n_w0, 2);
  const auto doors = door_segments(h);
  ASSERT_EQ(doors.size(), 1u);
  EXPECT_NEAR(doors[0].a.x, 1.6, 1e-12);
  EXPECT_NEAR(doors[0].b.x, 2.5, 1e-12);
  EXPECT_EQ(room_at(h, {2.0, 2.0}), std::optional<std::size_t>(0));
  EXPECT_FALSE(room_at(h, {4.5, 2.0}).has_value());
}

}  // namespace
}  // namespace navsim
