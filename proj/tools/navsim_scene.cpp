// Scene utilities: generate, validate, vary and preview houses.
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "navsim/nav.hpp"
#include "navsim/scene.hpp"
#include "navsim/sensors.hpp"

namespace {

void write_pgm(const std::string& path, const navsim::CameraFrame& f) {
  std::ofstream o(path, std::ios::binary);
  o << "P5\n" << f.width << " " << f.height << "\n255\n";
  o.write(reinterpret_cast<const char*>(f.buffer.data()), static_cast<std::streamsize>(f.buffer.size()));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"navsim scene tool"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("generate", "generate a house");
  std::uint64_t seed = 0;
  int rooms = 1;
  bool furnished = false;
  std::string out;
  gen->add_option("--seed", seed);
  gen->add_option("--rooms", rooms)->check(CLI::Range(1, 64));
  gen->add_flag("--furnished", furnished);
  gen->add_option("--out", out, "output file (stdout when omitted)");

  auto* val = app.add_subcommand("validate", "load and validate a scene file");
  std::string in;
  val->add_option("file", in)->required();

  auto* vary = app.add_subcommand("vary", "apply a variation to a scene file");
  std::string vary_in;
  std::string vary_out;
  std::uint64_t retexture = 0;
  bool has_retexture = false;
  std::vector<std::string> remove;
  vary->add_option("file", vary_in)->required();
  vary->add_option("--out", vary_out)->required();
  vary->add_option("--retexture-seed", retexture)->each([&](const std::string&) { has_retexture = true; });
  vary->add_option("--remove", remove, "categories to remove")->delimiter(',');

  auto* grid = app.add_subcommand("grid", "print the occupancy grid as text");
  std::string grid_in;
  double radius = 0.1;
  double res = 0.1;
  grid->add_option("file", grid_in)->required();
  grid->add_option("--radius", radius);
  grid->add_option("--resolution", res);

  auto* view = app.add_subcommand("view", "render one camera frame as a PGM image");
  std::string view_in;
  std::string view_out;
  double x = 0.0;
  double z = 0.0;
  double yaw = 0.0;
  std::string kind = "color";
  int size = 256;
  view->add_option("file", view_in)->required();
  view->add_option("--out", view_out)->required();
  view->add_option("--x", x);
  view->add_option("--z", z);
  view->add_option("--yaw", yaw);
  view->add_option("--kind", kind)->check(CLI::IsMember({"color", "depth", "semantic", "instance"}));
  view->add_option("--size", size);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      const auto h = navsim::generate_house(seed, rooms, furnished);
      if (out.empty()) std::cout << navsim::serialize_house(h) << "\n";
      else navsim::save_house(h, out);
    } else if (*val) {
      const auto h = navsim::load_house(in);
      std::cout << h.id << ": " << h.rooms.size() << " rooms, " << h.walls.size() << " walls, " << h.openings.size()
                << " openings, " << h.objects.size() << " objects\n";
    } else if (*vary) {
      navsim::VariationSpec v;
      if (has_retexture) v.retexture_seed = retexture;
      v.remove_categories.insert(remove.begin(), remove.end());
      navsim::save_house(navsim::apply_variation(navsim::load_house(vary_in), v), vary_out);
    } else if (*grid) {
      const auto h = navsim::load_house(grid_in);
      const auto g = navsim::build_grid(h, radius, res);
      for (int j = g.height() - 1; j >= 0; --j) {
        for (int i = 0; i < g.width(); ++i) std::cout << (g.blocked({i, j}) ? '#' : '.');
        std::cout << "\n";
      }
    } else if (*view) {
      const auto h = navsim::load_house(view_in);
      const navsim::RenderWorld world(h);
      navsim::SensorSpec spec;
      spec.name = kind;
      spec.kind = *navsim::parse_sensor_kind(kind);
      spec.width = size;
      spec.height = size;
      navsim::AgentState agent;
      agent.position = {x, z};
      agent.yaw = yaw;
      write_pgm(view_out, navsim::render(world, navsim::camera_pose(agent, navsim::AgentConfig{}, spec), spec));
    }
  } catch (const navsim::ValidationError& e) {
    for (const auto& v : e.violations()) std::cerr << v.code << " " << v.entity << ": " << v.message << "\n";
    return 1;
  } catch (const navsim::Error& e) {
    std::cerr << "navsim-scene: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
