#include "mosaic.hpp"

#include <png.h>

#include <cmath>
#include <cstdint>

#include "axbench/errors.hpp"
#include "axbench/rng.hpp"

namespace axbench::cli {

void write_mosaic(const std::filesystem::path& path, const std::vector<Observation>& tiles, std::size_t columns) {
  if (tiles.empty() || columns == 0) throw ContractError("mosaic needs at least one tile");
  const Shape s = tiles.front().shape();
  constexpr std::size_t gap = 2;
  const std::size_t rows = (tiles.size() + columns - 1) / columns;
  const std::size_t width = columns * s.width + (columns + 1) * gap;
  const std::size_t height = rows * s.height + (rows + 1) * gap;
  std::vector<std::uint8_t> rgb(width * height * 3, 255);

  for (std::size_t t = 0; t < tiles.size(); ++t) {
    const Observation& tile = tiles[t];
    if (tile.shape() != s) throw ContractError("mosaic tiles must share one shape");
    const std::size_t x0 = gap + (t % columns) * (s.width + gap);
    const std::size_t y0 = gap + (t / columns) * (s.height + gap);
    for (std::uint32_t r = 0; r < s.height; ++r) {
      for (std::uint32_t c = 0; c < s.width; ++c) {
        std::uint8_t* px = &rgb[((y0 + r) * width + x0 + c) * 3];
        for (std::uint32_t ch = 0; ch < 3; ++ch) {
          const float v = tile.at(r, c, s.channels == 3 ? ch : 0);
          px[ch] = static_cast<std::uint8_t>(std::lround(v * 255.0f));
        }
      }
    }
  }

  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(width);
  image.height = static_cast<png_uint_32>(height);
  image.format = PNG_FORMAT_RGB;
  if (!png_image_write_to_file(&image, path.c_str(), 0, rgb.data(), 0, nullptr)) {
    throw Error("cannot write PNG '" + path.string() + "': " + image.message);
  }
}

std::vector<Observation> counterfactual_strips(const CounterfactualModel& model, const LabeledDataset& test,
                                               std::size_t rows, std::size_t m, std::uint64_t seed,
                                               std::size_t& columns) {
  const auto& space = model.space();
  columns = 3 + 2 * space.size();
  std::vector<Observation> tiles;
  const std::size_t n = std::min(rows, test.size());
  for (std::size_t i = 0; i < n; ++i) {
    CounterRng rng(derive_seed(seed, "mosaic"), i);
    const std::uint64_t function_seed = rng.next_u64();
    const Observation& x = test.observation(i);
    const ParentAssignment& pa = test.parents(i);
    tiles.push_back(x);
    Observation current = x;
    for (std::size_t p = 1; p <= m; ++p) {
      current = apply(model, current, pa, pa, function_seed);
      if (p == 1) tiles.push_back(current);
    }
    tiles.push_back(current);
    for (std::size_t k = 0; k < space.size(); ++k) {
      const double v = test.parents(rng.below(test.size()))[k];
      const auto pa_star = pa.with(k, v);
      tiles.push_back(apply_partial(model, x, pa, k, v, function_seed));
      tiles.push_back(apply(model, apply(model, x, pa, pa_star, function_seed), pa_star, pa, function_seed));
    }
  }
  return tiles;
}

}  // namespace axbench::cli
