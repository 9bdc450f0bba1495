// Copyright 2026 The qhybrid Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "qhybrid/data.hpp"

#include <zlib.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <memory>
#include <string>

#include "qhybrid/error.hpp"
#include "qhybrid/rng.hpp"

namespace qhybrid::data {

namespace fs = std::filesystem;

namespace {

// gzread passes uncompressed files through unchanged.
std::vector<unsigned char> read_file(const fs::path &path) {
    std::unique_ptr<gzFile_s, decltype(&gzclose)> file(
        gzopen(path.c_str(), "rb"), &gzclose);
    if (!file) {
        throw FormatError("cannot open " + path.string());
    }
    std::vector<unsigned char> bytes;
    std::vector<unsigned char> chunk(1 << 16);
    for (;;) {
        const int n = gzread(file.get(), chunk.data(),
                             static_cast<unsigned>(chunk.size()));
        if (n < 0) {
            int errnum = 0;
            throw FormatError(path.string() + ": read failed at offset " +
                              std::to_string(bytes.size()) + ": " +
                              gzerror(file.get(), &errnum));
        }
        if (n == 0) {
            break;
        }
        bytes.insert(bytes.end(), chunk.begin(), chunk.begin() + n);
    }
    return bytes;
}

class Reader {
  public:
    Reader(const fs::path &path, std::vector<unsigned char> bytes)
        : path_(path.string()), bytes_(std::move(bytes)) {}

    std::uint32_t u32(const char *field) {
        require(4, field);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) {
            v = (v << 8) | bytes_[offset_++];
        }
        return v;
    }

    std::span<const unsigned char> take(std::size_t n, const char *field) {
        require(n, field);
        std::span<const unsigned char> out(bytes_.data() + offset_, n);
        offset_ += n;
        return out;
    }

    [[nodiscard]] const std::string &path() const { return path_; }

  private:
    void require(std::size_t n, const char *field) const {
        if (bytes_.size() - offset_ < n) {
            throw FormatError(path_ + ": truncated " + field + " at offset " +
                              std::to_string(offset_) + " (need " +
                              std::to_string(n) + " bytes, " +
                              std::to_string(bytes_.size() - offset_) +
                              " available)");
        }
    }

    std::string path_;
    std::vector<unsigned char> bytes_;
    std::size_t offset_{0};
};

void check_magic(Reader &r, std::uint32_t expected) {
    const std::uint32_t magic = r.u32("magic number");
    if (magic != expected) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "bad magic 0x%08x (expected 0x%08x)",
                      magic, expected);
        throw FormatError(r.path() + ": " + buf + " at offset 0");
    }
}

void put_u32(std::ofstream &out, std::uint32_t v) {
    const unsigned char b[4] = {static_cast<unsigned char>(v >> 24),
                                static_cast<unsigned char>(v >> 16),
                                static_cast<unsigned char>(v >> 8),
                                static_cast<unsigned char>(v)};
    out.write(reinterpret_cast<const char *>(b), 4);
}

} // namespace

void Dataset::validate(int n_classes) const {
    if (images.size() != labels.size()) {
        throw DataError("dataset has " + std::to_string(images.size()) +
                        " images but " + std::to_string(labels.size()) + " labels");
    }
    for (std::size_t i = 0; i < images.size(); ++i) {
        if (images[i].size() != rows * cols) {
            throw DataError("image " + std::to_string(i) + " has the wrong size");
        }
        for (const double p : images[i]) {
            if (!(p >= 0.0 && p <= 1.0)) {
                throw DataError("image " + std::to_string(i) +
                                " has a pixel outside [0, 1]");
            }
        }
        if (labels[i] < 0 || labels[i] >= n_classes) {
            throw DataError("label " + std::to_string(labels[i]) + " at index " +
                            std::to_string(i) + " outside [0, " +
                            std::to_string(n_classes) + ")");
        }
    }
}

RawDataset load_idx(const fs::path &images_path, const fs::path &labels_path) {
    Reader img(images_path, read_file(images_path));
    check_magic(img, kImagesMagic);
    const std::uint32_t count = img.u32("image count");
    const std::uint32_t rows = img.u32("row count");
    const std::uint32_t cols = img.u32("column count");

    Reader lab(labels_path, read_file(labels_path));
    check_magic(lab, kLabelsMagic);
    const std::uint32_t label_count = lab.u32("label count");
    if (label_count != count) {
        throw FormatError(labels_path.string() + ": label count " +
                          std::to_string(label_count) + " at offset 4 does not match " +
                          std::to_string(count) + " images");
    }

    RawDataset raw;
    raw.rows = rows;
    raw.cols = cols;
    const std::size_t pixels = std::size_t{rows} * cols;
    // Both payloads are bounds-checked before anything is decoded, so a
    // bad file yields no partial dataset.
    const auto pixel_bytes = img.take(pixels * count, "image data");
    const auto label_bytes = lab.take(count, "label data");
    raw.images.reserve(count);
    raw.labels.reserve(count);
    for (std::uint32_t i = 0; i < count; ++i) {
        std::vector<double> image(pixels);
        for (std::size_t p = 0; p < pixels; ++p) {
            image[p] = static_cast<double>(pixel_bytes[i * pixels + p]) / 255.0;
        }
        raw.images.push_back(std::move(image));
        raw.labels.push_back(label_bytes[i]);
    }
    return raw;
}

RawDataset load_mnist_dir(const fs::path &dir) {
    auto pick = [&](const std::string &stem) {
        for (const auto &candidate : {dir / stem, dir / (stem + ".gz")}) {
            if (fs::exists(candidate)) {
                return candidate;
            }
        }
        throw DataError("no " + stem + "[.gz] in " + dir.string());
    };
    return load_idx(pick("train-images-idx3-ubyte"), pick("train-labels-idx1-ubyte"));
}

void write_idx(const RawDataset &raw, const fs::path &images_path,
               const fs::path &labels_path) {
    if (raw.images.size() != raw.labels.size()) {
        throw DataError("cannot write dataset with mismatched image/label counts");
    }
    std::ofstream img(images_path, std::ios::binary);
    std::ofstream lab(labels_path, std::ios::binary);
    if (!img || !lab) {
        throw FormatError("cannot open IDX output files for writing");
    }
    const auto count = static_cast<std::uint32_t>(raw.size());
    put_u32(img, kImagesMagic);
    put_u32(img, count);
    put_u32(img, static_cast<std::uint32_t>(raw.rows));
    put_u32(img, static_cast<std::uint32_t>(raw.cols));
    for (const auto &image : raw.images) {
        if (image.size() != raw.rows * raw.cols) {
            throw DataError("image size does not match dataset dimensions");
        }
        for (const double p : image) {
            const auto byte = static_cast<unsigned char>(
                std::clamp(std::lround(p * 255.0), 0L, 255L));
            img.put(static_cast<char>(byte));
        }
    }
    put_u32(lab, kLabelsMagic);
    put_u32(lab, count);
    for (const int label : raw.labels) {
        if (label < 0 || label > 255) {
            throw DataError("label " + std::to_string(label) + " does not fit a byte");
        }
        lab.put(static_cast<char>(label));
    }
    if (!img || !lab) {
        throw FormatError("write failed for IDX output");
    }
}

Split filter_and_split(const RawDataset &raw, std::span<const int> classes,
                       std::size_t n_train, std::size_t n_test,
                       std::uint64_t seed) {
    if (classes.empty()) {
        throw DataError("no classes requested");
    }
    const std::size_t k = classes.size();
    std::vector<std::vector<std::size_t>> by_class(k);
    for (std::size_t i = 0; i < raw.size(); ++i) {
        const auto it = std::find(classes.begin(), classes.end(), raw.labels[i]);
        if (it != classes.end()) {
            by_class[static_cast<std::size_t>(it - classes.begin())].push_back(i);
        }
    }
    auto quota = [k](std::size_t n, std::size_t c) {
        return n / k + (c < n % k ? 1 : 0);
    };

    Split split;
    split.train.rows = split.test.rows = raw.rows;
    split.train.cols = split.test.cols = raw.cols;
    std::vector<std::pair<std::size_t, int>> train_items;
    std::vector<std::pair<std::size_t, int>> test_items;
    for (std::size_t c = 0; c < k; ++c) {
        auto &indices = by_class[c];
        const std::size_t want_train = quota(n_train, c);
        const std::size_t want_test = quota(n_test, c);
        if (indices.size() < want_train + want_test) {
            throw DataError("class " + std::to_string(classes[c]) + " has " +
                            std::to_string(indices.size()) + " samples, need " +
                            std::to_string(want_train + want_test));
        }
        Rng rng = Rng::stream(seed, c);
        rng.shuffle(indices);
        for (std::size_t j = 0; j < want_train; ++j) {
            train_items.emplace_back(indices[j], static_cast<int>(c));
        }
        for (std::size_t j = 0; j < want_test; ++j) {
            test_items.emplace_back(indices[want_train + j], static_cast<int>(c));
        }
    }
    Rng order = Rng::stream(seed, 0xda7a);
    order.shuffle(train_items);
    order.shuffle(test_items);
    for (const auto &[index, label] : train_items) {
        split.train.images.push_back(raw.images[index]);
        split.train.labels.push_back(label);
    }
    for (const auto &[index, label] : test_items) {
        split.test.images.push_back(raw.images[index]);
        split.test.labels.push_back(label);
    }
    return split;
}

} // namespace qhybrid::data
