// Copyright 2026 The irisattack Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "iris/pgm.hpp"

#include <cctype>
#include <fstream>
#include <iterator>
#include <string>

#include "iris/error.hpp"

namespace iris {

namespace {

class HeaderReader {
public:
    explicit HeaderReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    void skip_space_and_comments() {
        while (pos_ < bytes_.size()) {
            const auto c = bytes_[pos_];
            if (c == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
            } else if (std::isspace(c)) {
                ++pos_;
            } else {
                break;
            }
        }
    }

    long read_uint(const char* what) {
        skip_space_and_comments();
        long value = 0;
        std::size_t digits = 0;
        while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
            value = value * 10 + (bytes_[pos_] - '0');
            if (value > 1'000'000'000L) {
                throw Error(ErrorCode::MalformedHeader, std::string("PGM ") + what + " too large");
            }
            ++pos_;
            ++digits;
        }
        if (digits == 0) {
            throw Error(ErrorCode::MalformedHeader, std::string("PGM header missing ") + what);
        }
        return value;
    }

    std::size_t pos() const noexcept { return pos_; }
    void advance() noexcept { ++pos_; }

private:
    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

} // namespace

GrayImage load_pgm(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5') {
        throw Error(ErrorCode::MalformedHeader, "not a binary PGM (expected magic P5)");
    }
    HeaderReader reader(bytes.subspan(2));
    const long width = reader.read_uint("width");
    const long height = reader.read_uint("height");
    const long maxval = reader.read_uint("maxval");
    if (width < 1 || height < 1) {
        throw Error(ErrorCode::MalformedHeader, "PGM dimensions must be positive");
    }
    if (maxval < 1 || maxval > 65535) {
        throw Error(ErrorCode::MalformedHeader, "PGM maxval out of range");
    }
    // exactly one whitespace byte separates the header from the raster
    const std::size_t header_end = 2 + reader.pos();
    if (header_end >= bytes.size() || !std::isspace(bytes[header_end])) {
        if (header_end >= bytes.size()) {
            throw Error(ErrorCode::TruncatedData, "PGM has no raster data");
        }
        throw Error(ErrorCode::MalformedHeader, "PGM header not terminated by whitespace");
    }
    const std::size_t data_start = header_end + 1;
    const std::size_t sample_bytes = maxval > 255 ? 2 : 1;
    const std::size_t count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    if (bytes.size() - data_start < count * sample_bytes) {
        throw Error(ErrorCode::TruncatedData, "PGM raster shorter than width*height");
    }

    std::vector<std::uint8_t> pixels(count);
    const auto data = bytes.subspan(data_start);
    for (std::size_t i = 0; i < count; ++i) {
        long v = sample_bytes == 2 ? (long{data[2 * i]} << 8) | long{data[2 * i + 1]} : long{data[i]};
        if (v > maxval) v = maxval;
        if (maxval == 255) {
            pixels[i] = static_cast<std::uint8_t>(v);
        } else {
            pixels[i] = static_cast<std::uint8_t>((v * 255 + maxval / 2) / maxval);
        }
    }
    return GrayImage(static_cast<int>(width), static_cast<int>(height), std::move(pixels));
}

std::vector<std::uint8_t> save_pgm(const GrayImage& img) {
    const std::string header =
        "P5\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) + "\n255\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    const auto px = img.pixels();
    out.insert(out.end(), px.begin(), px.end());
    return out;
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::IoError, "cannot open " + path.string());
    }
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error(ErrorCode::IoError, "cannot write " + path.string());
    }
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw Error(ErrorCode::IoError, "short write to " + path.string());
    }
}

GrayImage read_pgm_file(const std::filesystem::path& path) {
    const auto bytes = read_file_bytes(path);
    return load_pgm(bytes);
}

void write_pgm_file(const std::filesystem::path& path, const GrayImage& img) {
    write_file_bytes(path, save_pgm(img));
}

} // namespace iris
