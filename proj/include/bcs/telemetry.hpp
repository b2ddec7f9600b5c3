#pragma once

#include <bit>
#include <cctype>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "bcs/types.hpp"

namespace bcs {

inline constexpr char kPacketMagic[4] = {'B', 'C', 'S', '1'};
inline constexpr std::uint8_t kPacketVersion = 1;
inline constexpr std::size_t kPacketHeaderBytes = 31;

/// Self-sufficient compressed-epoch record: the receiver regenerates the
/// sensing matrix from (M, N, s, matrix_seed) and the dictionary from
/// (dict_code, wavelet_taps, wavelet_levels); only measurements travel.
struct CompressedPacket {
    std::uint16_t n = 0;
    std::uint16_t m = 0;
    std::uint8_t s = 0;
    std::uint64_t matrix_seed = 0;
    std::uint8_t dict_code = 0;      // 0 identity, 1 dct, 2 wavelet
    std::uint8_t wavelet_taps = 0;
    std::uint8_t wavelet_levels = 0;
    std::uint16_t channel = 0;
    std::uint32_t epoch_index = 0;
    std::uint32_t sample_rate_mhz = 0;  // millihertz
    std::vector<float> payload;         // m little-endian float32

    bool operator==(const CompressedPacket&) const = default;
};

struct DecodeError : std::runtime_error {
    enum class Kind { bad_magic, bad_version, truncated_payload };
    Kind kind;
    DecodeError(Kind k, const std::string& message)
        : std::runtime_error(message), kind(k) {}
};

inline std::size_t packet_size_bytes(std::size_t m) { return kPacketHeaderBytes + 4 * m; }

namespace detail {

template <class Unsigned>
void put_le(std::vector<std::uint8_t>& out, Unsigned value) {
    for (std::size_t b = 0; b < sizeof(Unsigned); ++b)
        out.push_back(static_cast<std::uint8_t>(value >> (8 * b)));
}

template <class Unsigned>
Unsigned get_le(std::span<const std::uint8_t> in, std::size_t offset) {
    Unsigned value = 0;
    for (std::size_t b = 0; b < sizeof(Unsigned); ++b)
        value |= static_cast<Unsigned>(in[offset + b]) << (8 * b);
    return value;
}

}  // namespace detail

/// Fixed little-endian layout, kPacketHeaderBytes + 4*m bytes total.
inline std::vector<std::uint8_t> encode_packet(const CompressedPacket& packet) {
    if (packet.payload.size() != packet.m)
        throw std::invalid_argument("encode_packet: payload has " +
                                    std::to_string(packet.payload.size()) +
                                    " samples but M=" + std::to_string(packet.m));
    std::vector<std::uint8_t> out;
    out.reserve(packet_size_bytes(packet.m));
    for (char c : kPacketMagic) out.push_back(static_cast<std::uint8_t>(c));
    out.push_back(kPacketVersion);
    detail::put_le(out, packet.n);
    detail::put_le(out, packet.m);
    out.push_back(packet.s);
    detail::put_le(out, packet.matrix_seed);
    out.push_back(packet.dict_code);
    out.push_back(packet.wavelet_taps);
    out.push_back(packet.wavelet_levels);
    detail::put_le(out, packet.channel);
    detail::put_le(out, packet.epoch_index);
    detail::put_le(out, packet.sample_rate_mhz);
    for (float v : packet.payload) detail::put_le(out, std::bit_cast<std::uint32_t>(v));
    return out;
}

inline CompressedPacket decode_packet(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < kPacketHeaderBytes)
        throw DecodeError(DecodeError::Kind::truncated_payload,
                          "decode_packet: " + std::to_string(bytes.size()) +
                              " bytes is shorter than the header");
    if (std::memcmp(bytes.data(), kPacketMagic, 4) != 0)
        throw DecodeError(DecodeError::Kind::bad_magic, "decode_packet: bad magic");
    if (bytes[4] != kPacketVersion)
        throw DecodeError(DecodeError::Kind::bad_version,
                          "decode_packet: unsupported version " + std::to_string(bytes[4]));
    CompressedPacket packet;
    packet.n = detail::get_le<std::uint16_t>(bytes, 5);
    packet.m = detail::get_le<std::uint16_t>(bytes, 7);
    packet.s = bytes[9];
    packet.matrix_seed = detail::get_le<std::uint64_t>(bytes, 10);
    packet.dict_code = bytes[18];
    packet.wavelet_taps = bytes[19];
    packet.wavelet_levels = bytes[20];
    packet.channel = detail::get_le<std::uint16_t>(bytes, 21);
    packet.epoch_index = detail::get_le<std::uint32_t>(bytes, 23);
    packet.sample_rate_mhz = detail::get_le<std::uint32_t>(bytes, 27);
    if (bytes.size() < packet_size_bytes(packet.m))
        throw DecodeError(DecodeError::Kind::truncated_payload,
                          "decode_packet: payload truncated, need " +
                              std::to_string(packet_size_bytes(packet.m)) + " bytes, have " +
                              std::to_string(bytes.size()));
    packet.payload.resize(packet.m);
    for (std::size_t i = 0; i < packet.payload.size(); ++i)
        packet.payload[i] = std::bit_cast<float>(
            detail::get_le<std::uint32_t>(bytes, kPacketHeaderBytes + 4 * i));
    return packet;
}

/// Stream format: fixed-length records back to back, no extra framing.
inline void write_packet_stream(const std::string& path,
                                const std::vector<CompressedPacket>& packets) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_packet_stream: cannot open " + path);
    for (const auto& packet : packets) {
        const auto bytes = encode_packet(packet);
        out.write(reinterpret_cast<const char*>(bytes.data()),
                  static_cast<std::streamsize>(bytes.size()));
    }
    if (!out) throw std::runtime_error("write_packet_stream: write failed on " + path);
}

inline std::vector<CompressedPacket> read_packet_stream(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_packet_stream: cannot open " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    std::vector<CompressedPacket> packets;
    std::size_t offset = 0;
    while (offset < bytes.size()) {
        auto view = std::span<const std::uint8_t>(bytes).subspan(offset);
        try {
            CompressedPacket packet = decode_packet(view);
            offset += packet_size_bytes(packet.m);
            packets.push_back(std::move(packet));
        } catch (const DecodeError& e) {
            throw DecodeError(e.kind, std::string(e.what()) + " (packet " +
                                          std::to_string(packets.size()) + " at byte " +
                                          std::to_string(offset) + ")");
        }
    }
    return packets;
}

/// Fixed-length epochs cut from a multichannel recording. Samples are
/// float32 (sensor resolution); math upstream runs in double.
struct EpochedDataset {
    Index channels = 0;
    Index epochs_per_channel = 0;
    Index epoch_length = 0;
    std::vector<float> samples;  // channel-major, epoch-major, sample-minor
    std::vector<std::string> event_labels;  // optional, one per epoch index

    Index total_epochs() const { return channels * epochs_per_channel; }

    Vec epoch(Index channel, Index index) const {
        Vec x(epoch_length);
        const std::size_t base = static_cast<std::size_t>(
            (channel * epochs_per_channel + index) * epoch_length);
        for (Index t = 0; t < epoch_length; ++t)
            x[t] = static_cast<double>(samples[base + static_cast<std::size_t>(t)]);
        return x;
    }

    void set_epoch(Index channel, Index index, const Vec& x) {
        const std::size_t base = static_cast<std::size_t>(
            (channel * epochs_per_channel + index) * epoch_length);
        for (Index t = 0; t < epoch_length; ++t)
            samples[base + static_cast<std::size_t>(t)] = static_cast<float>(x[t]);
    }
};

struct IngestResult {
    EpochedDataset dataset;
    Index dropped_samples = 0;  // per channel, lost to tail truncation
};

/// Numeric CSV, one channel per row (or per column); consecutive
/// non-overlapping epochs of length `epoch_length`, tail truncated.
inline IngestResult ingest_csv(const std::string& path, Index epoch_length,
                               bool channels_as_rows = true) {
    if (epoch_length < 1) throw std::invalid_argument("ingest_csv: epoch length must be >= 1");
    std::ifstream in(path);
    if (!in) throw std::runtime_error("ingest_csv: cannot open " + path);

    std::vector<std::vector<float>> rows;
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (line.empty()) continue;
        std::vector<float> row;
        std::stringstream cells(line);
        std::string cell;
        while (std::getline(cells, cell, ',')) {
            std::size_t used = 0;
            float value = 0;
            try {
                value = std::stof(cell, &used);
            } catch (const std::exception&) {
                throw std::runtime_error("ingest_csv: non-numeric cell \"" + cell +
                                         "\" at line " + std::to_string(line_number));
            }
            while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used])))
                ++used;
            if (used != cell.size())
                throw std::runtime_error("ingest_csv: non-numeric cell \"" + cell +
                                         "\" at line " + std::to_string(line_number));
            row.push_back(value);
        }
        if (!rows.empty() && row.size() != rows.front().size())
            throw std::runtime_error("ingest_csv: ragged rows, line " +
                                     std::to_string(line_number) + " has " +
                                     std::to_string(row.size()) + " cells, expected " +
                                     std::to_string(rows.front().size()));
        rows.push_back(std::move(row));
    }
    IngestResult result;
    result.dataset.epoch_length = epoch_length;
    if (rows.empty()) return result;  // empty file: empty dataset

    if (!channels_as_rows) {
        std::vector<std::vector<float>> transposed(rows.front().size(),
                                                   std::vector<float>(rows.size()));
        for (std::size_t r = 0; r < rows.size(); ++r)
            for (std::size_t c = 0; c < rows[r].size(); ++c) transposed[c][r] = rows[r][c];
        rows = std::move(transposed);
    }

    const Index samples_per_channel = static_cast<Index>(rows.front().size());
    result.dataset.channels = static_cast<Index>(rows.size());
    result.dataset.epochs_per_channel = samples_per_channel / epoch_length;
    result.dropped_samples =
        samples_per_channel - result.dataset.epochs_per_channel * epoch_length;
    if (result.dataset.epochs_per_channel < 1)
        throw std::runtime_error("ingest_csv: rows shorter than one epoch of length " +
                                 std::to_string(epoch_length));
    result.dataset.samples.reserve(static_cast<std::size_t>(
        result.dataset.channels * result.dataset.epochs_per_channel * epoch_length));
    for (const auto& row : rows)
        result.dataset.samples.insert(
            result.dataset.samples.end(), row.begin(),
            row.begin() + static_cast<std::ptrdiff_t>(
                              result.dataset.epochs_per_channel * epoch_length));
    return result;
}

/// Channels as rows, epochs concatenated; inverse of ingest_csv up to the
/// truncated tail.
inline void write_csv(const EpochedDataset& dataset, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_csv: cannot open " + path);
    out.precision(9);
    const Index per_channel = dataset.epochs_per_channel * dataset.epoch_length;
    for (Index ch = 0; ch < dataset.channels; ++ch) {
        const std::size_t base = static_cast<std::size_t>(ch * per_channel);
        for (Index t = 0; t < per_channel; ++t) {
            if (t) out << ',';
            out << dataset.samples[base + static_cast<std::size_t>(t)];
        }
        out << '\n';
    }
    if (!out) throw std::runtime_error("write_csv: write failed on " + path);
}

/// Sidecar event labels: one "epoch_index,label" pair per line.
inline std::vector<std::string> read_labels_csv(const std::string& path, Index epochs) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_labels_csv: cannot open " + path);
    std::vector<std::string> labels(static_cast<std::size_t>(epochs));
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::runtime_error("read_labels_csv: expected \"epoch_index,label\" at line " +
                                     std::to_string(line_number));
        const long index = std::stol(line.substr(0, comma));
        if (index < 0 || index >= epochs)
            throw std::runtime_error("read_labels_csv: epoch index " + std::to_string(index) +
                                     " out of range at line " + std::to_string(line_number));
        labels[static_cast<std::size_t>(index)] = line.substr(comma + 1);
    }
    return labels;
}

}  // namespace bcs
