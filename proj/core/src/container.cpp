#include "axbench/container.hpp"

#include <fstream>

#include "binary_io.hpp"

namespace axbench {
namespace {

constexpr char kMagic[6] = {'C', 'F', 'D', 'S', '1', '\n'};
constexpr std::uint32_t kVersion = 1;

}  // namespace

void write_container(const LabeledDataset& dataset, std::ostream& out) {
  detail::LeWriter w(out);
  const auto& shape = dataset.shape();
  const auto& space = dataset.space();
  w.bytes(kMagic, sizeof kMagic);
  w.put<std::uint32_t>(kVersion);
  w.put<std::uint32_t>(static_cast<std::uint32_t>(dataset.size()));
  w.put<std::uint32_t>(shape.height);
  w.put<std::uint32_t>(shape.width);
  w.put<std::uint32_t>(shape.channels);
  w.put<std::uint16_t>(static_cast<std::uint16_t>(space.size()));
  for (const auto& p : space.descriptors()) {
    w.put<std::uint8_t>(static_cast<std::uint8_t>(p.kind));
    w.put<std::uint16_t>(static_cast<std::uint16_t>(p.name.size()));
    w.bytes(p.name.data(), p.name.size());
    if (p.is_discrete()) {
      w.put<std::uint32_t>(p.cardinality);
    } else {
      w.put<double>(p.lower);
      w.put<double>(p.upper);
    }
  }
  for (const auto& pa : dataset.all_parents()) {
    for (double v : pa.values()) w.put<double>(v);
  }
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const auto px = dataset.observation(i).pixels();
    w.bytes(px.data(), px.size() * sizeof(float));
  }
  w.put<std::uint8_t>(dataset.has_exogenous() ? 1 : 0);
  if (dataset.has_exogenous()) {
    for (std::size_t i = 0; i < dataset.size(); ++i) {
      const auto& rec = dataset.exogenous(i).bytes;
      w.put<std::uint32_t>(static_cast<std::uint32_t>(rec.size()));
      w.bytes(rec.data(), rec.size());
    }
  }
  if (!out) throw Error("failed writing dataset container");
}

void write_container(const LabeledDataset& dataset, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  write_container(dataset, out);
}

LabeledDataset read_container(std::istream& in) {
  detail::Reader r(in, "CFDS1 container");
  char magic[6];
  r.bytes(magic, sizeof magic);
  if (std::memcmp(magic, kMagic, sizeof kMagic) != 0) throw FormatError("CFDS1 container: bad magic");
  const auto version = r.le<std::uint32_t>();
  if (version != kVersion) throw FormatError("CFDS1 container: unsupported version " + std::to_string(version));
  const auto n = r.le<std::uint32_t>();
  Shape shape{r.le<std::uint32_t>(), r.le<std::uint32_t>(), r.le<std::uint32_t>()};
  try {
    validate_shape(shape);
  } catch (const ContractError& e) {
    throw FormatError(std::string("CFDS1 container: ") + e.what());
  }
  const auto parent_count = r.le<std::uint16_t>();
  std::vector<ParentDescriptor> descs;
  for (std::uint16_t k = 0; k < parent_count; ++k) {
    const auto kind = r.le<std::uint8_t>();
    const auto len = r.le<std::uint16_t>();
    std::string name(len, '\0');
    r.bytes(name.data(), len);
    if (kind == 0) {
      descs.push_back(ParentDescriptor::discrete(std::move(name), r.le<std::uint32_t>()));
    } else if (kind == 1) {
      const double lo = r.le<double>();
      const double hi = r.le<double>();
      descs.push_back(ParentDescriptor::continuous(std::move(name), lo, hi));
    } else {
      throw FormatError("CFDS1 container: unknown parent kind " + std::to_string(kind));
    }
  }

  try {
    ParentSpace space(std::move(descs));
    std::vector<ParentAssignment> parents;
    parents.reserve(n);
    for (std::uint32_t i = 0; i < n; ++i) {
      std::vector<double> v(space.size());
      for (auto& x : v) x = r.le<double>();
      parents.emplace_back(std::move(v));
    }
    std::vector<LabeledDataset::ObservationPtr> obs;
    obs.reserve(n);
    for (std::uint32_t i = 0; i < n; ++i) {
      std::vector<float> px(shape.size());
      r.bytes(px.data(), px.size() * sizeof(float));
      obs.push_back(std::make_shared<const Observation>(shape, std::move(px)));
    }
    std::optional<std::vector<ExogenousRecord>> exog;
    if (r.le<std::uint8_t>() != 0) {
      exog.emplace();
      exog->reserve(n);
      for (std::uint32_t i = 0; i < n; ++i) {
        ExogenousRecord rec;
        rec.bytes.resize(r.le<std::uint32_t>());
        r.bytes(rec.bytes.data(), rec.bytes.size());
        exog->push_back(std::move(rec));
      }
    }
    return LabeledDataset(shape, std::move(space), std::move(obs), std::move(parents), std::move(exog),
                          Provenance{"file", 0});
  } catch (const ContractError& e) {
    throw FormatError(std::string("CFDS1 container: ") + e.what());
  }
}

LabeledDataset read_container(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  return read_container(in);
}

}  // namespace axbench
