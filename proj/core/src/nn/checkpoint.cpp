#include "evoprune/nn/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "json.hpp"

namespace evoprune::nn {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

fs::path blob_path(const fs::path& manifest, const std::string& layer) {
  return manifest.parent_path() / (manifest.stem().string() + "." + layer + ".bin");
}

void put_le(std::string& out, double v) {
  auto bits = std::bit_cast<std::uint64_t>(v);
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
}

double get_le(const unsigned char* p) {
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  return std::bit_cast<double>(bits);
}

void write_file(const fs::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("short write to " + path.string());
}

}  // namespace

void save_checkpoint(const Checkpoint& ckpt, const fs::path& path) {
  ckpt.network.validate();
  json manifest;
  manifest["format"] = "evoprune-checkpoint";
  manifest["version"] = kCheckpointVersion;
  manifest["seed"] = ckpt.seed;
  manifest["activation"] = "relu";
  manifest["layers"] = json::array();
  for (const auto& l : ckpt.network.layers) {
    const fs::path blob = blob_path(path, l.name);
    manifest["layers"].push_back({{"name", l.name},
                                  {"input_width", l.input_width()},
                                  {"output_width", l.output_width()},
                                  {"prunable", l.prunable},
                                  {"blob", blob.filename().string()}});
    std::string bytes;
    bytes.reserve(8 * (l.weights.size() + l.bias.size()));
    for (double w : l.weights.values) put_le(bytes, w);
    for (double b : l.bias) put_le(bytes, b);
    write_file(blob, bytes);
  }
  write_file(path, manifest.dump(2) + "\n");
}

Checkpoint load_checkpoint(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open checkpoint " + path.string());
  json manifest;
  try {
    manifest = json::parse(in);
  } catch (const json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
  try {
    if (manifest.at("format") != "evoprune-checkpoint") throw FormatError(path.string() + ": not a checkpoint");
    if (manifest.at("version").get<int>() != kCheckpointVersion) {
      throw FormatError(path.string() + ": checkpoint version " + manifest.at("version").dump() + ", expected " +
                        std::to_string(kCheckpointVersion));
    }
    Checkpoint ckpt;
    ckpt.seed = manifest.at("seed").get<std::uint64_t>();
    for (const auto& entry : manifest.at("layers")) {
      Layer l;
      l.name = entry.at("name").get<std::string>();
      const auto iw = entry.at("input_width").get<std::size_t>();
      const auto ow = entry.at("output_width").get<std::size_t>();
      l.prunable = entry.at("prunable").get<bool>();
      const fs::path blob = path.parent_path() / entry.at("blob").get<std::string>();
      std::ifstream bin(blob, std::ios::binary);
      if (!bin) throw FormatError(path.string() + ": missing blob " + blob.string());
      std::string bytes((std::istreambuf_iterator<char>(bin)), std::istreambuf_iterator<char>());
      if (bytes.size() != 8 * (iw * ow + ow)) {
        throw FormatError(blob.string() + ": expected " + std::to_string(8 * (iw * ow + ow)) + " bytes, found " +
                          std::to_string(bytes.size()));
      }
      const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
      l.weights = Tensor2(iw, ow);
      for (auto& w : l.weights.values) {
        w = get_le(p);
        p += 8;
      }
      l.bias.resize(ow);
      for (auto& b : l.bias) {
        b = get_le(p);
        p += 8;
      }
      ckpt.network.layers.push_back(std::move(l));
    }
    ckpt.network.validate();
    return ckpt;
  } catch (const json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  } catch (const ShapeError& e) {
    throw FormatError(path.string() + ": " + e.what());
  } catch (const InvalidSpecError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

}  // namespace evoprune::nn
