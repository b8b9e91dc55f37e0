#include <fstream>
#include <sstream>

#include <json.hpp>

#include "navsim/scene.hpp"

namespace navsim {

namespace {

using nlohmann::json;

void expect_fields(const json& j, std::initializer_list<std::string_view> fields, const std::string& where) {
  if (!j.is_object()) throw ParseError(where + ": expected an object");
  for (const auto& [key, _] : j.items()) {
    if (std::find(fields.begin(), fields.end(), key) == fields.end()) {
      throw ParseError(where + ": unknown field '" + key + "'");
    }
  }
  for (std::string_view f : fields) {
    if (!j.contains(f)) throw ParseError(where + ": missing field '" + std::string(f) + "'");
  }
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) throw ParseError(where + ": expected a number");
  return j.get<double>();
}

int integer(const json& j, const std::string& where) {
  if (!j.is_number_integer()) throw ParseError(where + ": expected an integer");
  return j.get<int>();
}

std::string string(const json& j, const std::string& where) {
  if (!j.is_string()) throw ParseError(where + ": expected a string");
  return j.get<std::string>();
}

Vec2 vec2(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) throw ParseError(where + ": expected [x, z]");
  return {number(j[0], where), number(j[1], where)};
}

json to_json(Vec2 v) { return json::array({v.x, v.z}); }

Material material(const json& j, const std::string& where) {
  expect_fields(j, {"palette_id", "albedo"}, where);
  return {integer(j["palette_id"], where + ".palette_id"), integer(j["albedo"], where + ".albedo")};
}

json to_json(const Material& m) { return {{"palette_id", m.palette_id}, {"albedo", m.albedo}}; }

std::vector<json> array(const json& j, const std::string& where) {
  if (!j.is_array()) throw ParseError(where + ": expected an array");
  return j.get<std::vector<json>>();
}

House house_from_json(const json& j) {
  expect_fields(j, {"id", "bounds", "rooms", "walls", "openings", "objects"}, "house");
  House h;
  h.id = string(j["id"], "house.id");
  expect_fields(j["bounds"], {"min", "max"}, "house.bounds");
  h.bounds.min = vec2(j["bounds"]["min"], "house.bounds.min");
  h.bounds.max = vec2(j["bounds"]["max"], "house.bounds.max");

  int i = 0;
  for (const json& r : array(j["rooms"], "house.rooms")) {
    const std::string where = "rooms[" + std::to_string(i++) + "]";
    expect_fields(r, {"id", "category", "floor_polygon", "ceiling_height"}, where);
    Room room;
    room.id = string(r["id"], where + ".id");
    const std::string cls = string(r["category"], where + ".category");
    const auto parsed = parse_room_class(cls);
    if (!parsed) throw ParseError(where + ": unknown room class '" + cls + "'");
    room.category = *parsed;
    for (const json& p : array(r["floor_polygon"], where + ".floor_polygon")) {
      room.floor_polygon.push_back(vec2(p, where + ".floor_polygon"));
    }
    room.ceiling_height = number(r["ceiling_height"], where + ".ceiling_height");
    h.rooms.push_back(std::move(room));
  }

  i = 0;
  for (const json& w : array(j["walls"], "house.walls")) {
    const std::string where = "walls[" + std::to_string(i++) + "]";
    expect_fields(w, {"id", "a", "b", "thickness", "height", "material"}, where);
    Wall wall;
    wall.id = string(w["id"], where + ".id");
    wall.a = vec2(w["a"], where + ".a");
    wall.b = vec2(w["b"], where + ".b");
    wall.thickness = number(w["thickness"], where + ".thickness");
    wall.height = number(w["height"], where + ".height");
    wall.material = material(w["material"], where + ".material");
    h.walls.push_back(std::move(wall));
  }

  i = 0;
  for (const json& o : array(j["openings"], "house.openings")) {
    const std::string where = "openings[" + std::to_string(i++) + "]";
    expect_fields(o, {"wall_ref", "span", "bottom", "top", "kind"}, where);
    Opening op;
    op.wall_ref = string(o["wall_ref"], where + ".wall_ref");
    const Vec2 span = vec2(o["span"], where + ".span");
    op.t0 = span.x;
    op.t1 = span.z;
    op.bottom = number(o["bottom"], where + ".bottom");
    op.top = number(o["top"], where + ".top");
    const std::string kind = string(o["kind"], where + ".kind");
    if (kind == "door") {
      op.kind = OpeningKind::door;
    } else if (kind == "window") {
      op.kind = OpeningKind::window;
    } else {
      throw ParseError(where + ": unknown opening kind '" + kind + "'");
    }
    h.openings.push_back(std::move(op));
  }

  i = 0;
  for (const json& o : array(j["objects"], "house.objects")) {
    const std::string where = "objects[" + std::to_string(i++) + "]";
    expect_fields(o, {"id", "category", "center", "half_extents", "yaw", "base_height", "height", "material"},
                  where);
    SceneObject obj;
    obj.id = string(o["id"], where + ".id");
    const std::string cat = string(o["category"], where + ".category");
    const auto parsed = parse_category(cat);
    if (!parsed) throw ParseError(where + ": unknown category '" + cat + "'");
    obj.category = *parsed;
    obj.footprint.center = vec2(o["center"], where + ".center");
    obj.footprint.half_extents = vec2(o["half_extents"], where + ".half_extents");
    obj.footprint.yaw = number(o["yaw"], where + ".yaw");
    obj.base_height = number(o["base_height"], where + ".base_height");
    obj.height = number(o["height"], where + ".height");
    obj.material = material(o["material"], where + ".material");
    h.objects.push_back(std::move(obj));
  }
  return h;
}

json house_to_json(const House& h) {
  json rooms = json::array();
  for (const auto& r : h.rooms) {
    json poly = json::array();
    for (const Vec2& p : r.floor_polygon) poly.push_back(to_json(p));
    rooms.push_back({{"id", r.id},
                     {"category", std::string(to_string(r.category))},
                     {"floor_polygon", poly},
                     {"ceiling_height", r.ceiling_height}});
  }
  json walls = json::array();
  for (const auto& w : h.walls) {
    walls.push_back({{"id", w.id},
                     {"a", to_json(w.a)},
                     {"b", to_json(w.b)},
                     {"thickness", w.thickness},
                     {"height", w.height},
                     {"material", to_json(w.material)}});
  }
  json openings = json::array();
  for (const auto& o : h.openings) {
    openings.push_back({{"wall_ref", o.wall_ref},
                        {"span", json::array({o.t0, o.t1})},
                        {"bottom", o.bottom},
                        {"top", o.top},
                        {"kind", o.kind == OpeningKind::door ? "door" : "window"}});
  }
  json objects = json::array();
  for (const auto& o : h.objects) {
    objects.push_back({{"id", o.id},
                       {"category", std::string(to_string(o.category))},
                       {"center", to_json(o.footprint.center)},
                       {"half_extents", to_json(o.footprint.half_extents)},
                       {"yaw", o.footprint.yaw},
                       {"base_height", o.base_height},
                       {"height", o.height},
                       {"material", to_json(o.material)}});
  }
  return {{"id", h.id},
          {"bounds", {{"min", to_json(h.bounds.min)}, {"max", to_json(h.bounds.max)}}},
          {"rooms", rooms},
          {"walls", walls},
          {"openings", openings},
          {"objects", objects}};
}

}  // namespace

House parse_house(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("scene file is not valid JSON: ") + e.what());
  }
  House h = house_from_json(j);
  if (auto violations = validate_house(h); !violations.empty()) throw ValidationError(std::move(violations));
  return h;
}

std::string serialize_house(const House& h) { return house_to_json(h).dump(2); }

House load_house(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open scene file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_house(buf.str());
}

void save_house(const House& h, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write scene file " + path.string());
  out << serialize_house(h) << '\n';
}

}  // namespace navsim
