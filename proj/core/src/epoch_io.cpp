#include "musepref/corpus/epoch_io.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

#include "musepref/common/error.hpp"

namespace musepref::corpus {

namespace {

static_assert(std::endian::native == std::endian::little,
              "epoch serialization assumes a little-endian host");

template <typename T>
void put(std::ostream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T get(std::istream& in, const std::string& path) {
  T value;
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw MalformedManifest("truncated epoch file: " + path);
  return value;
}

}  // namespace

void write_epoch(const std::string& path, const EegEpoch& epoch) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw MissingFile("cannot open for writing: " + path);
  out.write(kEpochMagic, 4);
  put<std::uint32_t>(out, kEpochVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(epoch.n_channels()));
  put<std::uint64_t>(out, static_cast<std::uint64_t>(epoch.n_samples));
  put<double>(out, epoch.sample_rate_hz);
  for (const auto& name : epoch.channel_names) {
    put<std::uint16_t>(out, static_cast<std::uint16_t>(name.size()));
    out.write(name.data(), static_cast<std::streamsize>(name.size()));
  }
  std::vector<float> buf(epoch.n_samples);
  for (std::size_t c = 0; c < epoch.n_channels(); ++c) {
    auto src = epoch.channel(c);
    for (std::size_t i = 0; i < src.size(); ++i) buf[i] = static_cast<float>(src[i]);
    out.write(reinterpret_cast<const char*>(buf.data()),
              static_cast<std::streamsize>(buf.size() * sizeof(float)));
  }
  if (!out) throw MissingFile("short write: " + path);
}

namespace {

EpochHeader read_header_stream(std::istream& in, const std::string& path) {
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kEpochMagic, 4) != 0)
    throw MalformedManifest("bad epoch magic: " + path);
  EpochHeader h;
  h.version = get<std::uint32_t>(in, path);
  if (h.version != kEpochVersion)
    throw MalformedManifest("unsupported epoch version in " + path);
  auto n_channels = get<std::uint32_t>(in, path);
  h.n_samples = get<std::uint64_t>(in, path);
  h.sample_rate_hz = get<double>(in, path);
  h.channel_names.reserve(n_channels);
  for (std::uint32_t c = 0; c < n_channels; ++c) {
    auto len = get<std::uint16_t>(in, path);
    std::string name(len, '\0');
    in.read(name.data(), len);
    if (!in) throw MalformedManifest("truncated channel name in " + path);
    h.channel_names.push_back(std::move(name));
  }
  return h;
}

}  // namespace

EpochHeader read_epoch_header(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingFile("epoch file not found: " + path);
  return read_header_stream(in, path);
}

EegEpoch read_epoch(const std::string& path,
                    const std::vector<std::string>& eog_channels) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingFile("epoch file not found: " + path);
  EpochHeader h = read_header_stream(in, path);

  EegEpoch epoch;
  epoch.channel_names = h.channel_names;
  epoch.sample_rate_hz = h.sample_rate_hz;
  epoch.n_samples = h.n_samples;
  epoch.data.resize(epoch.n_channels() * epoch.n_samples);

  std::vector<float> buf(epoch.n_samples);
  for (std::size_t c = 0; c < epoch.n_channels(); ++c) {
    in.read(reinterpret_cast<char*>(buf.data()),
            static_cast<std::streamsize>(buf.size() * sizeof(float)));
    if (!in) throw MalformedManifest("truncated samples in " + path);
    auto dst = epoch.channel(c);
    for (std::size_t i = 0; i < buf.size(); ++i) {
      if (!std::isfinite(buf[i]))
        throw MalformedManifest("non-finite sample in " + path);
      dst[i] = static_cast<double>(buf[i]);
    }
  }

  for (const auto& eog : eog_channels) {
    for (std::size_t i = 0; i < epoch.channel_names.size(); ++i) {
      if (epoch.channel_names[i] == eog) {
        epoch.eog_indices.push_back(i);
        break;
      }
    }
  }
  return epoch;
}

}  // namespace musepref::corpus
