#include "axbench/idx.hpp"

#include <fstream>

#include "binary_io.hpp"

namespace axbench {
namespace {

std::ifstream open_binary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  return in;
}

void put_be_u32(std::ostream& out, std::uint32_t v) {
  const char b[4] = {static_cast<char>(v >> 24), static_cast<char>(v >> 16), static_cast<char>(v >> 8),
                     static_cast<char>(v)};
  out.write(b, 4);
}

}  // namespace

LabeledDataset load_idx(const std::filesystem::path& images, const std::filesystem::path& labels) {
  auto img_in = open_binary(images);
  auto lbl_in = open_binary(labels);
  detail::Reader img(img_in, "IDX images '" + images.string() + "'");
  detail::Reader lbl(lbl_in, "IDX labels '" + labels.string() + "'");

  if (const auto magic = img.be_u32(); magic != kIdxImagesMagic) {
    throw FormatError("IDX images: bad magic " + std::to_string(magic));
  }
  const auto count = img.be_u32();
  const auto rows = img.be_u32();
  const auto cols = img.be_u32();
  if (const auto magic = lbl.be_u32(); magic != kIdxLabelsMagic) {
    throw FormatError("IDX labels: bad magic " + std::to_string(magic));
  }
  const auto label_count = lbl.be_u32();
  if (label_count != count) {
    throw FormatError("IDX image/label count mismatch: " + std::to_string(count) + " images, " +
                      std::to_string(label_count) + " labels");
  }

  const Shape shape{rows, cols, 1};
  try {
    validate_shape(shape);
  } catch (const ContractError& e) {
    throw FormatError(std::string("IDX images: ") + e.what());
  }
  ParentSpace space({ParentDescriptor::discrete("digit", 10)});
  std::vector<LabeledDataset::ObservationPtr> obs;
  std::vector<ParentAssignment> parents;
  obs.reserve(count);
  parents.reserve(count);
  std::vector<std::uint8_t> raw(shape.size());
  for (std::uint32_t i = 0; i < count; ++i) {
    img.bytes(raw.data(), raw.size());
    std::vector<float> px(raw.size());
    for (std::size_t j = 0; j < raw.size(); ++j) px[j] = static_cast<float>(raw[j]) / 255.0f;
    obs.push_back(std::make_shared<const Observation>(shape, std::move(px)));
    const auto label = lbl.le<std::uint8_t>();
    if (label > 9) throw FormatError("IDX labels: label " + std::to_string(label) + " outside 0..9");
    parents.emplace_back(std::vector<double>{static_cast<double>(label)});
  }
  return LabeledDataset(shape, std::move(space), std::move(obs), std::move(parents), std::nullopt,
                        Provenance{"idx", 0});
}

void write_idx(const std::filesystem::path& images, const std::filesystem::path& labels, std::uint32_t rows,
               std::uint32_t cols, std::span<const std::uint8_t> pixels, std::span<const std::uint8_t> label_bytes) {
  const std::size_t per_image = static_cast<std::size_t>(rows) * cols;
  if (per_image == 0 || pixels.size() != per_image * label_bytes.size()) {
    throw ContractError("IDX pixel buffer does not match count * rows * cols");
  }
  std::ofstream img(images, std::ios::binary);
  std::ofstream lbl(labels, std::ios::binary);
  if (!img || !lbl) throw Error("cannot open IDX output files");
  put_be_u32(img, kIdxImagesMagic);
  put_be_u32(img, static_cast<std::uint32_t>(label_bytes.size()));
  put_be_u32(img, rows);
  put_be_u32(img, cols);
  img.write(reinterpret_cast<const char*>(pixels.data()), static_cast<std::streamsize>(pixels.size()));
  put_be_u32(lbl, kIdxLabelsMagic);
  put_be_u32(lbl, static_cast<std::uint32_t>(label_bytes.size()));
  lbl.write(reinterpret_cast<const char*>(label_bytes.data()), static_cast<std::streamsize>(label_bytes.size()));
  if (!img || !lbl) throw Error("failed writing IDX files");
}

}  // namespace axbench
