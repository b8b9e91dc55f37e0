#include "navsim/rng.hpp"
#include "navsim/scene.hpp"

namespace navsim {

House apply_variation(const House& h, const VariationSpec& v) {
  std::set<Category> removed;
  for (const std::string& name : v.remove_categories) {
    const auto c = parse_category(name);
    if (!c) throw ConfigError("unknown category '" + name + "' in remove_categories");
    removed.insert(*c);
  }

  House out = h;
  std::erase_if(out.objects, [&](const SceneObject& o) { return removed.contains(o.category); });

  if (v.retexture_seed) {
    // One palette entry per category, a pure function of (seed, category).
    auto palette_for = [&](Category c) {
      const std::uint64_t mixed = mix_seed(*v.retexture_seed, static_cast<std::uint64_t>(c) + 1);
      return static_cast<int>(mixed % kPaletteSize);
    };
    for (auto& o : out.objects) o.material = palette_material(o.category, palette_for(o.category));
    const Material wall = palette_material(Category::wall, palette_for(Category::wall));
    for (auto& w : out.walls) w.material = wall;
  }
  return out;
}

}  // namespace navsim
